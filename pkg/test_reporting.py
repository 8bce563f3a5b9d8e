#!/usr/bin/env python3
"""
Test the acceptance table and parsing helpers
"""

import pandas as pd
import pytest

from reporting import AcceptanceAnalyzer
from utils import create_progress_bar, format_duration, parse_int_list, parse_key_values, parse_matrix


def _result(criterion, passed, checks=10, failures=(), findings=(), seconds=0.5):
    return {"criterion": criterion, "title": f"criterion {criterion}", "passed": passed, "checks": checks,
            "failures": list(failures), "findings": list(findings), "seconds": seconds}


@pytest.fixture
def analyzer():
    return AcceptanceAnalyzer([
        _result(3, False, checks=5, failures=["relator nonzero"]),
        _result(1, True, checks=12, findings=["note"]),
    ])


def test_dataframe_is_sorted_and_counts(analyzer):
    frame = analyzer.to_dataframe()
    assert list(frame["criterion"]) == [1, 3]
    assert list(frame["failures"]) == [0, 1]
    assert "seconds" not in frame.columns
    assert "seconds" in analyzer.to_dataframe(timing=True).columns


def test_summary(analyzer):
    assert analyzer.summary() == {"criteria": 2, "passed": 1, "failed": 1, "checks": 17, "findings": 1}
    text = analyzer.print_summary()
    assert "1/2 criteria passed" in text


def test_save_csv(analyzer, tmp_path):
    path = analyzer.save_csv(str(tmp_path / "out" / "table.csv"), timing=True)
    frame = pd.read_csv(path)
    assert list(frame.columns) == AcceptanceAnalyzer.COLUMNS
    assert frame["passed"].tolist() == [True, False]


def test_parse_helpers():
    assert parse_int_list("2,2,1") == [2, 2, 1]
    assert parse_int_list("") == []
    assert parse_matrix("0,1;1,0") == [[0, 1], [1, 0]]
    assert parse_key_values("n=4,v=4,eps=-1") == {"n": 4, "v": 4, "eps": -1}
    with pytest.raises(ValueError):
        parse_int_list("1,a")
    with pytest.raises(ValueError):
        parse_matrix("0,1;1")
    with pytest.raises(ValueError):
        parse_key_values("n4")


def test_formatting_helpers():
    assert format_duration(3725.5) == "01:02:05.50"
    assert create_progress_bar(1, 2, bar_length=4) == "[██--] 50.0% (1/2)"

