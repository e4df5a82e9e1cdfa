"""
Default numerical settings for worm-szego.

Everything here is a plain module-level constant. Per-run overrides travel in
``DomainParams`` (numerics) and ``cli.RunConfig`` (command line); nothing reads
these values at import time of another module except as a default argument.
"""

from __future__ import annotations

# ----------------------------
# Tolerances
# ----------------------------
TOL_QUAD = 1e-12  # relative to the integrand envelope peak
TOL_SERIES = 1e-12  # relative to the running partial sum

# ----------------------------
# Quadrature
# ----------------------------
GL_ORDER = 16  # Gauss-Legendre nodes per panel
MAX_PANEL_WIDTH = 0.5
PANELS_PER_PERIOD = 1.0  # at most one oscillation period per panel
MAX_PANELS = 40_000
CIRCLE_NODES = 128  # trapezoid nodes for residue-by-contour checks

# ----------------------------
# Series over j
# ----------------------------
SERIES_BLOCK = 8
SERIES_RATIO_WINDOW = 5
SERIES_RATIO_CAP = 0.95
SERIES_OVERRUN = 10  # fail past this multiple of the predicted length
DIRECT_SERIES_CAP = 160  # Auto route switches to the half-period cell above this
CELL_TERMS = 16  # m-terms in the 1/ch expansion of the half-period cell sums

# ----------------------------
# Removable singularities
# ----------------------------
EXPREL_SERIES_BELOW = 1e-3

# ----------------------------
# Exponent fits
# ----------------------------
MIN_FIT_POINTS = 4
FIT_RESIDUAL_MAX = 0.05  # RMS of log-residuals
ORDER_MATCH_TOL = 0.1
BOUNDED_RATIO_MAX = 3.0

# ----------------------------
# Reproducing pairing
# ----------------------------
BOUNDARY_OFFSET = 1e-4
RICHARDSON_FACTOR = 0.5
PAIR_TOL = 1e-10
DEGENERATE_VALUE = 1e-8

# ----------------------------
# Output
# ----------------------------
JSON_SCHEMA = 1
DEFAULT_SEED = 7
