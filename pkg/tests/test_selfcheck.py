"""性質スイートと規約の変異検出のテスト"""
import pytest

from kanshou import selfcheck
from kanshou.quantum import analysis, evolution


def _flip(values, index):
    flipped = list(values)
    flipped[index] = -flipped[index]
    return tuple(flipped)


def test_all_suites_pass():
    results = selfcheck.run_suites()
    failed = [r.property for r in results if not r.passed]
    assert failed == [], f"Expected all suites to pass, got failures {failed}"
    assert [r.property for r in results] == [name for name, _ in selfcheck.SUITES]


@pytest.mark.parametrize("index", range(4))
def test_superposition_sign_mutation_fails_oracle(monkeypatch, index):
    """入力重ね合わせの符号を1つ反転するとオラクル等価性が壊れる"""
    monkeypatch.setattr(evolution, "PRESELECTED_BRANCH_SIGNS", _flip(evolution.PRESELECTED_BRANCH_SIGNS, index))
    assert selfcheck.first_failure(selfcheck.run_suites()) == "oracle_equivalence"


@pytest.mark.parametrize("name", ["DELTA1_COEFFS", "DELTA2_COEFFS"])
@pytest.mark.parametrize("index", range(4))
def test_delta_sign_mutation_fails_purification(monkeypatch, name, index):
    """Δ₁, Δ₂ の符号を1つ反転すると純化の不変条件が壊れる"""
    monkeypatch.setattr(analysis, name, _flip(getattr(analysis, name), index))
    assert selfcheck.first_failure(selfcheck.run_suites()) == "purification"


def test_json_lines_summary():
    results = [
        selfcheck.PropertyResult("a", True, "ok", 0.1),
        selfcheck.PropertyResult("b", False, "broken", 0.2),
    ]
    text = selfcheck.to_json_lines(results)
    assert text.endswith("\n")
    assert text.splitlines()[-1] == '{"failed": 1, "first_failure": "b", "passed": 1, "summary": true}'
