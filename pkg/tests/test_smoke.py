from __future__ import annotations

import importlib

import pytest

from worm_szego.cli import build_parser, main


def test_package_imports() -> None:
    pkg = importlib.import_module("worm_szego")
    for name in pkg.__all__:
        assert hasattr(pkg, name), name


@pytest.mark.parametrize("argv", [["--help"], ["eval", "--help"], ["verify", "--help"]])
def test_help_exits_cleanly(argv, capsys) -> None:
    # argparse exits with SystemExit(0) after printing help
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code in (None, 0)
    assert "usage:" in capsys.readouterr().out


def test_every_subcommand_is_registered() -> None:
    text = build_parser().format_help()
    for cmd in ("eval", "trace", "singular", "compare", "repro", "verify"):
        assert cmd in text
