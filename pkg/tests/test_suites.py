import pytest

from acq.builtins import SHIPPED, list_builtins, load_builtin, model_text
from acq.dsl import SuiteItem
from acq.report import FAIL, PASS, CheckResult, Report
from acq.suites import CHECKS, run_check, run_suite


def test_catalogue():
    cat = list_builtins()
    assert len(cat) >= 8
    assert [n for n, _ in cat] == SHIPPED
    assert all(desc for _, desc in cat)


def test_families():
    t = load_builtin("taft(3)")
    z = t.ring.params[0]
    assert z.order == 3 and z.primitive
    assert model_text("taft3") == model_text("taft(3)")
    assert load_builtin("taft(5)").algebra.relations[0].order == 5
    assert load_builtin("z2n(3)").algebra.n == 6
    with pytest.raises(KeyError):
        load_builtin("nope")


def test_torus_parameter_is_free():
    assert load_builtin("torus").ring.params[0].order is None


def test_named_checks_from_examples():
    assert run_check(load_builtin("quantum_plane"), SuiteItem("cartan", 5), 0).status == PASS
    assert run_check(load_builtin("torus_action"), SuiteItem("antialgebra", 5), 0).status == PASS
    res = run_check(load_builtin("corrupted_torus_action"), SuiteItem("structure-check"), 0)
    assert res.status == FAIL
    assert res.residuals and res.residuals[0][1]


def test_expected_failures_are_ok():
    rep = run_suite(load_builtin("corrupted_torus_action"))
    assert rep.ok
    assert all(c.status == FAIL for c in rep.checks if c.expect_fail)
    assert "check q-check: fail cases=1 expected=fail" in rep.text()


def test_reports_are_deterministic():
    m = load_builtin("torus_action")
    a = run_suite(m, seed=7, budget=3).text(timing=False)
    b = run_suite(m, seed=7, budget=3).text(timing=False)
    assert a == b
    assert "timing" not in a
    assert a.splitlines()[:3] == ["model: torus_action", "suite: default", "seed: 7"]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite(load_builtin("torus"), "missing")


def test_report_format():
    c = CheckResult("x", FAIL, 2, [("label", "a\nb")], ["n1"])
    text = Report("m", "s", 0, [c], 1.234).text()
    assert text.splitlines() == [
        "model: m", "suite: s", "seed: 0", "check x: fail cases=2", "note x: n1",
        "residual x 1: label", "  a", "  b", "result: fail", "timing: 1.23s"]


def test_every_check_registered():
    for m in ("torus_action", "quantum_plane"):
        for item in load_builtin(m).suites["default"]:
            assert item.check in CHECKS
