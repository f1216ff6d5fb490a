"""Checker: verdict semantics, witnesses, flags, report shape."""

import json
import re

import pytest

from opcheck.checker import (
    CHECK_IDS,
    ProbeConfig,
    _relaxed_equal,
    classify,
    run_check,
)
from opcheck.constructions import quotient
from opcheck.instances import (
    CpsuTheory,
    MatrixTheory,
    PFunTheory,
    SubStochTheory,
)
from opcheck.kernel import BOOLEANS, INTEGERS

VERDICT_RE = re.compile(
    r"^(holds-exhaustive|holds-sampled\([0-9]+\)|fails|inconclusive\(.*\))$")

CFG = ProbeConfig(bound=2, samples=20)


def test_probe_config_validation():
    with pytest.raises(ValueError):
        ProbeConfig(bound=-1)
    with pytest.raises(ValueError):
        ProbeConfig(cap=0)


def test_pfun_is_an_effectus():
    report = classify(PFunTheory(), CFG)
    assert not report.any_failures
    assert report.flags["effectus"] is True
    assert report.flags["partial-form-operational-category"] is True
    assert report.flags["total-form-operational-category"] is True
    assert report.flags["separated"] is True
    for r in report.results:
        assert VERDICT_RE.match(r.verdict), r.verdict


def test_boolean_matrices_fail_exactly_where_expected():
    report = classify(MatrixTheory(BOOLEANS), CFG)
    failing = sorted(r.id for r in report.results if r.status == "fails")
    assert failing == ["assumption7-complements", "def3.1-c1",
                       "def3.3-c3", "lemma2.3-iii"]
    assert report.flags["partial-form-operational-category"] is False
    # downstream axioms cannot be interpreted without the partial form
    assert report.flags["positive"] == "inconclusive"
    assert report.flags["observations-determine-tests"] == "inconclusive"
    assert report.flags["effectus"] == "inconclusive"


def test_failure_witness_replays():
    cfg = ProbeConfig(bound=2, samples=20, cap=1000)
    report = classify(MatrixTheory(INTEGERS, grid=1), cfg)
    result = report.result("axiom-positivity")
    assert result.verdict == "fails"
    assert result.witness is not None
    assert result.witness.parts
    assert result.witness.replay()
    blob = result.to_json()
    assert blob["witness"]["equation"] == result.witness.equation


def test_monoidal_checks_are_inconclusive_without_tensor():
    q = quotient(SubStochTheory(grid=2), bound=2)
    result = run_check(q, CFG, "lemma2.3-iv")
    assert result.verdict == "inconclusive(not-monoidal)"


def test_unknown_check_id_raises():
    with pytest.raises(KeyError):
        run_check(PFunTheory(), CFG, "no-such-check")


def test_only_subset_runs_one_check():
    report = classify(SubStochTheory(grid=2), CFG, only=["cat-identity"])
    assert [r.id for r in report.results] == ["cat-identity"]
    # the partial form cannot be concluded from that subset alone
    assert report.flags["partial-form-operational-category"] == "inconclusive"


def test_report_json_is_deterministic():
    one = classify(SubStochTheory(grid=2), CFG).to_json()
    two = classify(SubStochTheory(grid=2), CFG).to_json()
    assert json.dumps(one, sort_keys=True) == json.dumps(two, sort_keys=True)
    assert one["format"] == "opcheck/1"
    assert one["config"]["bound"] == 2
    assert set(r["id"] for r in one["checks"]) == set(CHECK_IDS)


def test_render_text_colors_only_when_asked():
    report = classify(PFunTheory(), CFG, only=["cat-identity"])
    plain = report.render_text(color=False)
    assert "\x1b[" not in plain
    assert "cat-identity" in plain
    assert "\x1b[32m" in report.render_text(color=True)


def test_numeric_theories_report_sampled_verdicts():
    result = run_check(CpsuTheory(), ProbeConfig(bound=2, samples=10),
                       "cat-identity")
    assert result.verdict.startswith("holds-sampled(")


def test_over_cap_homsets_are_skipped_not_sampled():
    result = run_check(SubStochTheory(grid=2),
                       ProbeConfig(bound=2, samples=10, cap=5), "cat-identity")
    assert result.verdict == "holds-exhaustive"
    assert len(result.skipped) == 3


def test_relaxed_equality_retry():
    cpsu = CpsuTheory()
    i2 = cpsu.identity((2,))
    pert = cpsu._m((2,), (2,), [[i2.payload[0][0] * (1 + 3e-9)]])
    far = cpsu._m((2,), (2,), [[i2.payload[0][0] * 0.5]])
    assert _relaxed_equal(cpsu, i2, i2) == (True, False)
    assert _relaxed_equal(cpsu, i2, pert) == (True, True)
    assert _relaxed_equal(cpsu, i2, far) == (False, False)
    assert cpsu.tol == 1e-9  # the retry must restore the tolerance


class _BrokenCompose(SubStochTheory):
    """Test double that corrupts composition to exercise failure reporting."""

    def compose(self, g, f):
        return self.zero_morphism(f.dom, g.cod)


def test_corrupted_composition_is_caught_with_witness():
    broken = _BrokenCompose(grid=2)
    result = run_check(broken, CFG, "cat-identity")
    assert result.verdict == "fails"
    assert result.witness is not None
    assert result.witness.replay()
