import io
import json
import math

import numpy as np
import pytest

from prcurve.empirical import pr_star
from prcurve.io import (
    InputFileError,
    dump_json,
    fmt,
    point_set_rows,
    read_rows,
    read_scores_csv,
    write_rows,
)
from prcurve.population import pr_curve
from prcurve.presets import preset_model


@pytest.mark.parametrize(
    "value, text",
    [(None, "undefined"), (math.inf, "inf"), (-math.inf, "-inf"), (0.0, "0"), (-0.0, "0"), (2 / 3, "0.666666667"), (1.0, "1")],
)
def test_fmt(value, text):
    assert fmt(value) == text


def test_round_trip_is_byte_identical(tmp_path):
    curve = pr_curve(preset_model("case-b", 0.2))
    first = tmp_path / "a.csv"
    write_rows(first, ("x", "y"), zip(curve.x, curve.y))
    header, rows = read_rows(first)
    second = tmp_path / "b.csv"
    write_rows(second, header, rows)
    assert first.read_bytes() == second.read_bytes()
    assert b"\r" not in first.read_bytes()


def test_undefined_survives_round_trip(tmp_path):
    from prcurve.empirical import EmpiricalSample

    path = tmp_path / "star.csv"
    write_rows(path, ("t", "recall", "precision"), point_set_rows(pr_star(EmpiricalSample([0.9, 0.4], [0.5, 0.1]))))
    _, rows = read_rows(path)
    assert rows[-1] == [0.9, 0.0, None]


def test_stream_target():
    buf = io.StringIO()
    text = write_rows(buf, ("a",), [(1.5,), ("tag",)])
    assert buf.getvalue() == text == "a\n1.5\ntag\n"


def test_read_rows_reports_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n0.1,0.2\n0.3\n")
    with pytest.raises(InputFileError, match=r"bad.csv:3:"):
        read_rows(path)


def test_json_rejects_nan():
    with pytest.raises(ValueError):
        dump_json({"a": math.nan})
    assert json.loads(dump_json({"b": 1, "a": [1, 2]})) == {"a": [1, 2], "b": 1}


class TestScoresCsv:
    def write(self, tmp_path, text):
        path = tmp_path / "scores.csv"
        path.write_text(text)
        return path

    def test_toy(self, tmp_path):
        s = read_scores_csv(self.write(tmp_path, "label,score\n+,0.9\n-,0.5\n1,0.4\nneg,0.1\n\n"))
        assert np.array_equal(s.s_plus, [0.9, 0.4]) and np.array_equal(s.s_minus, [0.5, 0.1])

    @pytest.mark.parametrize(
        "text, where",
        [
            ("score,label\n+,1\n", ":1:"),
            ("label,score\n+,0.3\n-,abc\n", ":3:"),
            ("label,score\n+,0.3\n?,0.2\n", ":3:"),
            ("label,score\n+,0.3,7\n", ":2:"),
            ("label,score\n+,inf\n", ":2:"),
            ("", ":1:"),
        ],
    )
    def test_errors_carry_line_numbers(self, tmp_path, text, where):
        with pytest.raises(InputFileError, match=where):
            read_scores_csv(self.write(tmp_path, text))

    def test_one_class_only(self, tmp_path):
        with pytest.raises(InputFileError, match="both classes"):
            read_scores_csv(self.write(tmp_path, "label,score\n+,0.3\n+,0.5\n"))
