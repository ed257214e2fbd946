import json
import os
import pytest
import sys
import tempfile

from pydantic import ValidationError

from scripts.hwv.cli_helper import (
    EvaluationConfig,
    RunReport,
    get_decomposition,
    read_model,
    read_tableau,
    run_evaluation,
    write_model,
)
from scripts.hwv.polynomial import WaringPoint
from scripts.hwv.tableau import Content, Tableau
from scripts.hwv.utils import Method, OutputFormat, ParseError

TEST_FILES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "test_files")


def test_read_model_and_write_model():
    p = read_model(os.path.join(TEST_FILES, "blocks.point.json"), WaringPoint)
    assert p.d == 2
    assert p.m == 3
    with tempfile.TemporaryDirectory() as temp_dir:
        path = os.path.join(temp_dir, "p.json")
        write_model(p, path)
        assert read_model(path, WaringPoint) == p


def test_read_model_errors_are_parse_errors():
    with pytest.raises(ParseError, match="not valid JSON"):
        read_model(os.path.join(TEST_FILES, "truncated.tableau.json"), Tableau)
    with pytest.raises(ParseError):
        read_model(os.path.join(TEST_FILES, "k4.graph.json"), WaringPoint)
    with pytest.raises(ParseError, match="value 2 occurs 1 times"):
        read_tableau(os.path.join(TEST_FILES, "unbalanced.tableau.json"))


def test_get_decomposition():
    t = read_tableau(os.path.join(TEST_FILES, "five.tableau.json"))
    given = get_decomposition(t, os.path.join(TEST_FILES, "five.decomp.json"))
    assert given.bags == [(1, 2, 3), (1, 2, 4), (3, 5)]
    assert get_decomposition(t, None).width == 2


def test_evaluation_config():
    assert EvaluationConfig().threads == 1
    with pytest.raises(ValidationError):
        EvaluationConfig(threads=0)


def test_run_evaluation_report():
    t = Tableau(rows=((1, 1), (2, 2)), content=Content(n=2, d=2))
    p = WaringPoint.from_forms(2, [(1, 0), (0, 1)])
    report = run_evaluation(t, p, None, Method.ALL, EvaluationConfig(seed=5))
    assert report.result == "2"
    assert report.seed == 5
    assert report.stats["decomposition_width"] == 1


def test_report_rendering():
    report = RunReport(command="ncw", result="2", details={"layer_ranks": [1, 2, 2, 1]})
    assert json.loads(report.render(OutputFormat.JSON))["details"] == {"layer_ranks": [1, 2, 2, 1]}
    lines = report.render(OutputFormat.PRETTY).splitlines()
    assert "command: ncw" in lines
    assert 'details: {"layer_ranks": [1, 2, 2, 1]}' in lines
    assert not any(line.startswith("field") for line in lines)


if __name__ == "__main__":
    sys.exit(pytest.main(["-v", __file__]))
