import random

import pytest

from acq import randomgen as rg
from acq.calculus import FormAlgebra
from acq.derivations import DerivationError, commutator, zero_derivation
from acq.dsl import evaluate_derivation as ed
from acq.qmod import (
    adjoint_module,
    coadjoint_module,
    is_inner,
    is_symmetry,
    mc_residual,
    nabla_antisymmetry,
    nabla_derivation_rule_check,
    symmetry_bracket_property,
)


@pytest.fixture
def ta(model):
    return model("torus_action").algebroid


def test_adjoint_examples(ta):
    M = adjoint_module(ta)
    assert M.nabla(ta.q).is_zero()
    assert M.nabla(ed(ta.spec, "D[eta_u]")) == ed(ta.spec, "tau*u*D[u]")


@pytest.mark.parametrize("name", ["torus_action", "free_algebroid", "derham_torus"])
def test_adjoint_random(model, name):
    E = model(name).q_algebra()
    M = adjoint_module(E)
    rng = random.Random(name)
    Xs = [rg.random_derivation(E.spec, rng) for _ in range(10)]
    assert M.check_flat(Xs).ok
    pairs = [(rg.random_homogeneous(E.spec, rng), X) for X in Xs]
    pairs = [(f, X) for f, X in pairs if not f.is_zero()]
    assert M.check_leibniz(pairs).ok


def test_coadjoint(model):
    E = model("derham_quantum_plane").q_algebra()
    F = FormAlgebra(E.spec)
    C = coadjoint_module(F, E.q)
    assert C.nabla(F.ext.one()).is_zero()
    assert str(C.nabla(F.dgen("x"))) == "d_dx"
    rng = random.Random(1)
    ws = [rg.random_homogeneous(F.ext, rng) for _ in range(10)]
    assert C.check_flat(ws).ok
    pairs = [(rg.random_homogeneous(E.spec, rng), w) for w in ws]
    assert C.check_leibniz([(a, w) for a, w in pairs if a and w]).ok


def test_coadjoint_needs_base_derivation(ta):
    F = FormAlgebra(ta.spec)
    with pytest.raises(DerivationError):
        coadjoint_module(F, F.d)


def test_nabla_derivation_rule(model, ta):
    z = zero_derivation(ta.spec)
    assert nabla_derivation_rule_check(ta, z, z).is_zero()
    for name in ("torus_action", "free_algebroid"):
        E = model(name).algebroid
        rng = random.Random(name)
        for _ in range(10):
            X, Y = rg.random_derivation(E.spec, rng), rg.random_derivation(E.spec, rng)
            assert nabla_derivation_rule_check(E, X, Y).is_zero()


def test_mc_examples(model, ta):
    r = mc_residual(ta, zero_derivation(ta.spec, ta.q.gdeg, 1))
    assert r.residual_zero and r.deformed_certified and r.consistent
    r = mc_residual(ta, ta.q)
    assert r.residual_zero and r.deformed_certified and r.consistent
    E = model("free_algebroid").algebroid
    r = mc_residual(E, ed(E.spec, "x*xi1*D[x]"))
    assert str(r.residual) == "{x -> -xi1*xi2, xi3 -> -q*x^-1*xi1*xi2*xi3}"
    assert not r.deformed_certified and r.consistent


def test_mc_random(model):
    for name in ("free_algebroid", "torus_action"):
        E = model(name).algebroid
        rng = random.Random(name)
        outcomes = set()
        cands = [rg.random_derivation(E.spec, rng, weight=1, gdeg=E.q.gdeg) for _ in range(10)]
        for X in cands + [E.q, E.q.scale(-1)]:
            r = mc_residual(E, X)
            assert r.identity_residual.is_zero()
            assert r.consistent
            outcomes.add(r.residual_zero)
        assert outcomes == {True, False}


def test_mc_preconditions(ta):
    with pytest.raises(DerivationError):
        mc_residual(ta, ed(ta.spec, "u*D[u]"))


def test_symmetries(ta):
    A = ta.spec
    assert is_symmetry(ta, ed(A, "u*D[u]")).ok
    assert is_symmetry(ta, zero_derivation(A)).ok
    # the Euler field in (u, eta_u) does not commute with Q
    rep = is_symmetry(ta, ed(A, "u*D[u] + eta_u*D[eta_u]"))
    assert rep.failures() == {"[X,Q] = 0": ["{u -> tau*u*eta_u}"]}
    with pytest.raises(DerivationError):
        is_symmetry(ta, ed(A, "D[eta_u]"))


def test_inner(ta):
    A = ta.spec
    z = zero_derivation(A, ta.q.gdeg.group.zero(), -1)
    assert is_inner(ta, zero_derivation(A), z).status == "pass"
    omega = ed(A, "u*D[eta_u]")
    X = commutator(ta.q, omega)
    assert is_inner(ta, X, omega).status == "pass"
    found = is_inner(ta, X)
    assert found.status == "pass"
    assert (commutator(ta.q, found.omega) - X).is_zero()
    assert str(is_inner(ta, ed(A, "u*D[u]")).omega) == "{eta_u -> tau^-1}"


def test_symmetry_bracket_property(model, ta):
    A = ta.spec
    su, sv = ed(A, "D[eta_u]"), ed(A, "D[eta_v]")
    for X in model("torus_action").symmetries:
        assert symmetry_bracket_property(ta, X, su, sv).is_zero()
    assert symmetry_bracket_property(ta, zero_derivation(A), su, sv).is_zero()
    m = model("derham_quantum_plane")
    E = m.q_algebra()
    rng = random.Random(2)
    for X in m.symmetries:
        assert is_symmetry(E, X).ok
        s, t = (rg.random_derivation(E.spec, rng, weight=-1) for _ in range(2))
        assert symmetry_bracket_property(E, X, s, t).is_zero()


def test_symmetry_closure_and_identity(model):
    for name in ("torus_action", "free_algebroid", "derham_torus"):
        m = model(name)
        E = m.q_algebra()
        syms = m.symmetries
        for X in syms:
            for Y in syms:
                assert is_symmetry(E, commutator(X, Y)).ok
        rng = random.Random(name)
        for _ in range(5):
            X = rg.random_derivation(E.spec, rng, weight=0)
            assert nabla_antisymmetry(E, X).is_zero()
