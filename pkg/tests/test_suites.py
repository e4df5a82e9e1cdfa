from __future__ import annotations

import math

import pytest

from worm_szego.suites import SUITE_NAMES, SUITES, Check, _check, run_suite


def test_suite_names() -> None:
    assert SUITE_NAMES[-1] == "all"
    assert set(SUITES) == {
        "residues",
        "decomposition",
        "closed_forms",
        "symmetry",
        "derivatives",
        "decay",
        "orders",
        "repro",
    }


def test_unknown_suite(params) -> None:
    with pytest.raises(ValueError):
        run_suite("everything", params)


def test_nan_measurement_fails() -> None:
    assert not _check("s", "c", math.nan, 1.0).passed
    assert _check("s", "c", 0.5, 1.0).passed
    assert not _check("s", "c", 1.5, 1.0).passed


def test_residue_suite_passes(params) -> None:
    checks = run_suite("residues", params, seed=1)
    assert len(checks) == 4 * 11
    assert all(isinstance(c, Check) and c.passed for c in checks)
    assert set(checks[0].to_dict()) == {"suite", "check", "measured", "tolerance", "passed", "detail"}
