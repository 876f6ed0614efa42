import random

import pytest

from acq import randomgen as rg
from acq.derivations import (
    Derivation,
    DerivationError,
    check_foliation,
    check_homological,
    check_morphism,
    commutator,
    module_action,
    partial,
    weight_decompose,
    zero_derivation,
)
from acq.dsl import evaluate_derivation as ed
from acq.dsl import evaluate_element as ev


def test_leibniz_on_torus(model):
    A = model("torus_action").algebra
    tau = A.ring.param("tau")
    du = ed(A, "tau*u*D[u]")
    for n in range(-2, 3):
        for m in range(-2, 3):
            f = ev(A, f"u^{n}*v^{m}")
            assert du(f) == f.scale(tau * n)
    assert du(A.one()).is_zero()


def test_partial_on_quantum_plane(model):
    qp = model("quantum_plane").algebra
    X = partial(qp, "x")
    assert X.gdeg.coords == (-1, 0)
    assert X(ev(qp, "x^2*y")) == ev(qp, "2*x*y")


def test_commutators(model):
    A = model("torus_action").algebra
    du, dv = ed(A, "tau*u*D[u]"), ed(A, "tau*v*D[v]")
    assert commutator(du, dv).is_zero()
    F = model("derham_quantum_plane").forms
    assert commutator(F.d, F.d).is_zero()


def test_antisymmetry_random(model):
    for name in ("quantum_plane", "torus", "taft3", "super"):
        spec = model(name).algebra
        rho = spec.cocycle
        rng = random.Random(name)
        for _ in range(10):
            X, Y = rg.random_derivation(spec, rng), rg.random_derivation(spec, rng)
            Z = commutator(X, Y) + commutator(Y, X).scale(rho(X.gdeg, Y.gdeg))
            assert Z.is_zero()


def test_module_action(model):
    A = model("torus_action").algebra
    tau = A.ring.param("tau")
    dv = ed(A, "tau*v*D[v]")
    assert module_action(A.one(), dv) == dv
    assert module_action(A.gen("u"), dv)(A.gen("v")) == ev(A, "u*v").scale(tau)


def test_leibniz_rule_for_brackets(model):
    spec = model("quantum_plane").algebra
    rho = spec.cocycle
    rng = random.Random(1)
    for _ in range(10):
        X, Y = rg.random_derivation(spec, rng), rg.random_derivation(spec, rng)
        f = rg.random_homogeneous(spec, rng)
        if f.is_zero():
            continue
        lhs = commutator(X, module_action(f, Y))
        rhs = module_action(X(f), Y) + module_action(f, commutator(X, Y)).scale(rho(X.gdeg, f.gdeg()))
        assert (lhs - rhs).is_zero()


def test_degree_bookkeeping_enforced(model):
    qp = model("quantum_plane").algebra
    with pytest.raises(DerivationError):
        Derivation(qp, qp.grading.zero(), 0, {"x": qp.gen("y")})


def test_relations_enforced(model):
    T = model("taft3").algebra
    # x -> x would give X(x^3) = 3, but x^3 = 1
    with pytest.raises(DerivationError):
        Derivation(T, T.grading.zero(), 0, {"x": T.gen("x")})
    # y -> y respects y^3 = 0
    Derivation(T, T.grading.zero(), 0, {"y": T.gen("y")})


def test_homological(model):
    for name in ("derham_quantum_plane", "derham_torus", "derham_quaternions", "derham_taft3"):
        q, rep = check_homological(model(name).forms.d)
        assert q is not None and rep.certified
    q, _ = check_homological(model("torus_action").algebroid.q)
    assert q is not None
    A = model("torus_action").algebra
    q, _ = check_homological(zero_derivation(A, A.grading.element(1, 0, 0), 1))
    assert q is not None
    q, rep = check_homological(model("corrupted_torus_action").algebroid.q)
    assert q is None
    assert str(rep.residuals["u"]) == "2*tau*u*eta_u*eta_v"


def test_weight_decompose(model):
    Q = model("torus_action").algebroid.q
    parts = weight_decompose(Q)
    assert list(parts) == [1]
    assert parts[1] == Q
    A = model("torus_action").algebra
    with pytest.raises(DerivationError):
        Derivation(A, A.grading.element(-1, 0, 0), -2, {"eta_u": A.one()})


def test_foliations(model):
    A = model("torus_action").algebra
    assert check_foliation(A, [ed(A, "tau*u*D[u]")]).ok
    E = model("torus_action").algebroid
    assert check_foliation(A, [E.q]).ok
    qp = model("quantum_plane").algebra
    assert check_foliation(qp, [partial(qp, "x"), partial(qp, "y")]).ok


def test_morphisms(model):
    qp = model("quantum_plane").algebra
    ident = {g.name: qp.gen(g.name) for g in qp.generators}
    assert check_morphism(ident, qp, qp).ok
    assert check_morphism({"x": qp.gen("x"), "y": qp.zero()}, qp, qp).ok
    assert not check_morphism({"x": qp.gen("y"), "y": qp.gen("x")}, qp, qp).ok
    F = model("derham_quantum_plane").forms
    ext = F.ext
    phi = {g.name: ext.gen(g.name) for g in ext.generators}
    assert check_morphism(phi, ext, ext, F.d, F.d).ok
