"""Acceptance criteria 1-13, exact equality throughout.

Each test records one ``criterion N ...: pass|fail`` line; the lines are
printed at the end of the pytest run (see conftest.py) and by running this
file directly.
"""

import time

import pytest

from acq.builtins import SHIPPED, load_builtin, model_text
from acq.dsl import SuiteItem, parse_model, print_model
from acq.report import FAIL, PASS
from acq.suites import run_check, run_suite

RESULTS: dict = {}

BASES = ["commutative", "super", "quaternions", "z2n2", "quantum_plane", "torus", "taft3"]
DEGREE_ONE = ["torus_action", "trivial_q", "free_algebroid", "derham_quantum_plane",
              "derham_torus", "derham_quaternions", "derham_taft3"]
SEED = 0


def _check(name, check, budget=None):
    return run_check(load_builtin(name), SuiteItem(check, budget), SEED)


def _record(n, title, ok, detail=""):
    line = f"criterion {n:2d} {title}: {'pass' if ok else 'fail'}" + (f" ({detail})" if detail else "")
    RESULTS[n] = line
    print(line)
    return ok


def _failures(results):
    return [f"{m}/{r.name}: {r.residuals[:1]}" for m, r in results if r.status != PASS]


def test_criterion_01_cocycle_axioms():
    t0 = time.perf_counter()
    res = [(m, _check(m, "cocycle", 200)) for m in BASES]
    dt = time.perf_counter() - t0
    bad = _failures(res)
    cases = sum(r.cases for _, r in res)
    assert _record(1, "cocycle axioms", not bad and dt < 1.0, f"{cases} triples, {dt:.2f}s"), bad or dt


def test_criterion_02_commutativity_and_jacobi():
    t0 = time.perf_counter()
    res = []
    for m in BASES:
        res.append((m, _check(m, "commutativity", 200)))
        res.append((m, _check(m, "jacobi", 50)))
    dt = time.perf_counter() - t0
    bad = _failures(res)
    assert _record(2, "rho-commutativity and rho-Jacobi", not bad and dt < 10.0, f"{dt:.2f}s"), bad or dt


def test_criterion_03_exchange_law():
    r = _check("quantum_plane", "exchange", 50)
    assert _record(3, "quantum-plane exchange law", r.status == PASS and r.cases == 50,
                   f"{r.cases} quadruples"), r.residuals


def test_criterion_04_quaternion_table():
    r = _check("quaternions", "quaternion-table")
    assert _record(4, "quaternion multiplication table", r.status == PASS), r.residuals


def test_criterion_05_cartan_identities():
    t0 = time.perf_counter()
    res = [(m, _check(m, "cartan", 30)) for m in ("quantum_plane", "torus", "quaternions", "taft3")]
    dt = time.perf_counter() - t0
    bad = _failures(res)
    assert _record(5, "Cartan identities", not bad and dt < 60.0, f"{dt:.2f}s"), bad or dt


def test_criterion_06_homological_certification():
    res = [(m, _check(m, "derham-q")) for m in BASES]
    res += [(m, _check(m, "q-check")) for m in ("torus_action", "trivial_q")]
    bad = _failures(res)
    corrupt = _check("corrupted_torus_action", "q-check")
    named = corrupt.status == FAIL and any(label.startswith("[Q,Q] on ") and str(text)
                                           for label, text in corrupt.residuals)
    detail = f"corrupted fixture: {corrupt.residuals[0][0]}" if corrupt.residuals else "no residual"
    assert _record(6, "homological certification", not bad and named, detail), bad or corrupt.residuals


def test_criterion_07_antialgebra_and_anchor():
    res = []
    for m in DEGREE_ONE:
        res.append((m, _check(m, "antialgebra", 30)))
        res.append((m, _check(m, "anchor", 30)))
    bad = _failures(res)
    assert _record(7, "rho-Lie antialgebra, Leibniz and anchor", not bad,
                   f"{len(DEGREE_ONE)} models"), bad


def test_criterion_08_structure_equations():
    rnd = _check("torus_action", "structure-random", 20)
    ta = _check("torus_action", "structure-check")
    bad = _failures([("torus_action", rnd), ("torus_action", ta)])
    note = next((n for n in rnd.notes if "certified" in n), "")
    assert _record(8, "structure-equation equivalence", not bad and rnd.cases == 20, note), bad


def test_criterion_09_derived_bracket():
    res = [(m, _check(m, "derived-bracket", 30)) for m in BASES]
    bad = _failures(res)
    assert _record(9, "derived bracket of interiors", not bad, f"{len(BASES)} bases"), bad


def test_criterion_10_q_modules():
    res = [(m, _check(m, "modules", 20)) for m in DEGREE_ONE]
    bad = _failures(res)
    assert _record(10, "adjoint and coadjoint Q-modules", not bad, f"{len(DEGREE_ONE)} models"), bad


def test_criterion_11_maurer_cartan():
    res = [(m, _check(m, "mc", 20)) for m in DEGREE_ONE]
    bad = _failures(res)
    assert _record(11, "Maurer-Cartan equivalence", not bad, f"{len(DEGREE_ONE)} models"), bad


def test_criterion_12_symmetries():
    names = [m for m in SHIPPED if load_builtin(m).symmetries]
    res = [(m, _check(m, "symmetry", 20)) for m in names]
    bad = _failures(res)
    assert _record(12, "symmetries", not bad, f"{len(names)} models with fixtures"), bad


def test_criterion_13_builtin_suites():
    t0 = time.perf_counter()
    bad = []
    for m in SHIPPED:
        text = model_text(m)
        if print_model(parse_model(text)) != text:
            bad.append(f"{m}: round trip")
        rep = run_suite(load_builtin(m), "default", SEED)
        if not rep.ok:
            bad.append(f"{m}: {[c.name for c in rep.checks if not c.ok]}")
    dt = time.perf_counter() - t0
    assert _record(13, "built-in models parse, round-trip and pass", not bad and dt < 300.0,
                   f"{len(SHIPPED)} models, {dt:.1f}s"), bad or dt


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
