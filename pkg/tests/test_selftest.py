# -*- coding: utf-8 -*-
import pytest

from src.selftest import (ORACLES, OracleResult, oracle_selection_rule, oracle_shift, oracle_tv_slope,
                          run_selftest)


@pytest.mark.parametrize("oracle", [oracle_selection_rule, oracle_shift])
def test_symmetry_oracles_pass(oracle):
    result = oracle(True)
    assert isinstance(result, OracleResult)
    assert result.passed, result.line()
    assert result.deviation < 1e-10


@pytest.mark.slow
def test_tv_slope_oracle_passes():
    result = oracle_tv_slope(True)
    assert result.passed, result.line()


def test_oracle_list_covers_headline_invariants():
    names = [oracle.__name__ for oracle in ORACLES]
    for name in ('oracle_selection_rule', 'oracle_shift', 'oracle_tv_slope', 'oracle_parseval'):
        assert name in names


def test_failed_line_format(monkeypatch):
    monkeypatch.setattr('src.selftest.ORACLES', [lambda quick: OracleResult("x", False, 2.0, 1.0)])
    results = run_selftest(quick=True)
    assert results[0].line().startswith("FAIL")
