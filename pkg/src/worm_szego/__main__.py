from __future__ import annotations

from worm_szego.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
