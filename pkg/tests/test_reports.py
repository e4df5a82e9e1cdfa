from __future__ import annotations

import json

import pytest

from worm_szego import reports


def _frame():
    rows = [
        {"name": "a, quoted", "x": 1.0, **reports.complex_columns("K", 0.5j)},
        {"name": "b", "x": 2.0, **reports.complex_columns("K", 1 - 2j)},
    ]
    return reports.to_frame(rows)


def test_complex_columns() -> None:
    assert reports.complex_columns("K", 1.5 - 0.25j) == {"K_re": 1.5, "K_im": -0.25}


def test_csv_has_header_and_quotes_commas() -> None:
    text = reports.render(_frame(), "csv")
    lines = text.splitlines()
    assert lines[0] == "name,x,K_re,K_im"
    assert lines[1].startswith('"a, quoted",1.0,')
    assert "\r" not in text


def test_json_lines_carry_schema_first() -> None:
    lines = reports.render(_frame(), "json").splitlines()
    assert len(lines) == 2
    first = json.loads(lines[0])
    assert list(first)[0] == "schema"
    assert first["schema"] == 1
    assert first["K_im"] == pytest.approx(0.5)


def test_unknown_format() -> None:
    with pytest.raises(ValueError):
        reports.render(_frame(), "xml")


def test_write_frame_to_file_and_stdout(tmp_path, capsys) -> None:
    out = tmp_path / "nested" / "table.csv"
    assert reports.write_frame(_frame(), "csv", out) == out
    assert out.read_text(encoding="utf-8").startswith("name,x")

    assert reports.write_frame(_frame(), "csv", "-") is None
    assert capsys.readouterr().out.startswith("name,x")


def test_rows_keep_emission_order() -> None:
    # traces run from the largest gap down
    df = reports.to_frame([{"eps": 0.5, "a": 1}, {"eps": 0.25, "a": 2, "b": 3}])
    assert list(df["eps"]) == [0.5, 0.25]
    assert list(df.columns) == ["eps", "a", "b"]
