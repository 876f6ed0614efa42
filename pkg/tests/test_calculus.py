import random

import pytest

from acq import randomgen as rg
from acq.algebra import AlgebraError
from acq.calculus import (
    FormAlgebra,
    coordinate_bracket,
    d_formula_oracle,
    de_rham,
    derived_bracket_equals_commutator,
    evaluate_form,
    first_order_calculus,
    interior,
    lie_derivative,
    pairing_oracle,
    sections_bijection,
    verify_cartan,
)
from acq.derivations import commutator, module_action, partial, zero_derivation
from acq.dsl import evaluate_derivation as ed
from acq.dsl import evaluate_element as ev
from acq.dsl import parse_model

TORUS_TAU = """model torus_tau
grading Z^2
parameter lam
parameter tau
cocycle lam [[0,1],[-1,0]]
generator u weight=0 gdeg=(1,0) invertible
generator v weight=0 gdeg=(0,1) invertible
"""


@pytest.fixture
def torus_forms():
    return FormAlgebra(parse_model(TORUS_TAU).algebra)


def test_de_rham_on_quantum_plane(model):
    F = model("derham_quantum_plane").forms
    assert F.d(ev(F.ext, "x*y")) == ev(F.ext, "dx*y + x*dy")
    assert F.d(F.ext.one()).is_zero()
    for g in F.ext.generators:
        assert F.d(F.d(F.ext.gen(g.name))).is_zero()
    q, rep = de_rham(F)
    assert q is not None and rep.certified


def test_quaternion_forms_have_no_differentials(model):
    F = model("derham_quaternions").forms
    assert F.ext.names == ("e1", "e2")
    assert F.d.is_zero()


def test_nilpotent_forms_vanish(model):
    F = model("derham_taft3").forms
    assert ev(F.ext, "y^2*dy").is_zero()
    assert not ev(F.ext, "y*dy").is_zero()


def test_interior(model):
    F = model("derham_quantum_plane").forms
    qp = F.base
    X = ed(qp, "x*D[x]")
    iX = interior(F, X)
    assert iX.gdeg.coords == (-1, 0, 0) and iX.weight == -1
    assert iX(ev(F.ext, "dx*dy")) == ev(F.ext, "x*dy")
    assert iX(ev(F.ext, "x*y")).is_zero()
    rng = random.Random(3)
    for _ in range(10):
        Y = rg.random_derivation(qp, rng)
        f = rg.random_element(qp, rng)
        assert F.interior(Y)(F.d(F.embed(f))) == F.embed(Y(f))


def test_lie_derivative(model, torus_forms):
    F = model("derham_quantum_plane").forms
    rng = random.Random(4)
    for _ in range(10):
        X = rg.random_derivation(F.base, rng)
        f = F.embed(rg.random_element(F.base, rng))
        L = lie_derivative(F, X)
        assert L == F.lie_direct(X)
        assert L(f) == F.embed(X(F.project(f)))
        assert L(F.d(f)) == F.d(F.embed(X(F.project(f))))
    T = torus_forms
    tau = T.ring.param("tau")
    du = ed(T.base, "tau*u*D[u]")
    assert T.lie(du)(T.dgen("u")) == T.dgen("u").scale(tau)


def test_cartan_examples(model, torus_forms):
    F = model("derham_quantum_plane").forms
    assert verify_cartan(F, ed(F.base, "x*D[x]"), ed(F.base, "y*D[y]")).ok
    z = zero_derivation(F.base)
    assert verify_cartan(F, z, z).ok
    T = torus_forms
    assert verify_cartan(T, ed(T.base, "tau*u*D[u]"), ed(T.base, "tau*v*D[v]")).ok


def test_cartan_random(model):
    for name in ("derham_torus", "derham_taft3"):
        F = model(name).forms
        rng = random.Random(name)
        for _ in range(5):
            X = rg.random_derivation(F.base, rng)
            Y = rg.random_derivation(F.base, rng)
            rep = verify_cartan(F, X, Y)
            assert rep.ok, rep.failures()


def test_pairings(model):
    F = model("derham_quantum_plane").forms
    qp = F.base
    q = qp.ring.param("q")
    dx, dy = partial(qp, "x"), partial(qp, "y")
    assert evaluate_form(F, ev(F.ext, "dx*dy"), [dx, dy]) == qp.scalar(q)
    assert evaluate_form(F, ev(F.ext, "dx*dy"), [dx, dy]) == pairing_oracle(F, dx, dy, 0, 1)
    rng = random.Random(5)
    for _ in range(10):
        X = rg.random_derivation(qp, rng)
        f = rg.random_element(qp, rng)
        assert evaluate_form(F, F.d(F.embed(f)), [X]) == X(f)


def test_pairing_is_skew_and_linear(model):
    F = model("derham_quantum_plane").forms
    qp = F.base
    rho = qp.cocycle
    alpha = ev(F.ext, "x*dx*dy + dy*dx*y")
    rng = random.Random(6)
    for _ in range(10):
        X, Y = rg.random_derivation(qp, rng), rg.random_derivation(qp, rng)
        a = evaluate_form(F, alpha, [X, Y])
        b = evaluate_form(F, alpha, [Y, X])
        assert a == -b.scale(rho(X.gdeg, Y.gdeg))
        f = rg.random_homogeneous(qp, rng)
        if not f.is_zero():
            assert evaluate_form(F, alpha, [module_action(f, X), Y]) == f * a


def test_arity_checked(model):
    F = model("derham_quantum_plane").forms
    with pytest.raises(AlgebraError):
        evaluate_form(F, ev(F.ext, "dx"), [])


def test_d_formula(model):
    F = model("derham_torus").forms
    rng = random.Random(7)
    for _ in range(5):
        X, Y = rg.random_derivation(F.base, rng), rg.random_derivation(F.base, rng)
        alpha = ev(F.ext, "u*dv + du*v^-1")
        lhs, rhs = d_formula_oracle(F, alpha, [X, Y])
        assert lhs == rhs


def test_first_order_calculus(model):
    F = model("derham_quantum_plane").forms
    C = first_order_calculus(F)
    assert C.generators == ["x", "y", "dx", "dy"]
    omega = F.d(ev(F.ext, "x*y"))
    pieces = C.as_exact_sum(omega)
    assert C.recombine(pieces) == omega
    assert C.contains(ev(F.ext, "dx*x"))


def test_sections_round_trip(model):
    F = model("derham_torus").forms
    to_sec, to_der = sections_bijection(F)
    z = zero_derivation(F.base)
    assert to_sec(z).is_zero()
    rng = random.Random(8)
    for _ in range(10):
        X = rg.random_derivation(F.base, rng)
        back = to_der(to_sec(X))
        assert all(a == b for a, b in zip(back.images, X.images))


def test_derived_bracket_of_interiors(model):
    F = FormAlgebra(model("commutative").algebra)
    A = F.base
    X, Y = ed(A, "x*D[x]"), ed(A, "D[x]")
    assert commutator(X, Y) == ed(A, "-D[x]")
    assert derived_bracket_equals_commutator(F, X, Y).ok
    z = zero_derivation(A)
    assert derived_bracket_equals_commutator(F, z, z).ok
    rng = random.Random(9)
    for _ in range(10):
        X, Y = rg.random_derivation(A, rng), rg.random_derivation(A, rng)
        assert F.interior(coordinate_bracket(F, X, Y)) == F.interior(commutator(X, Y))
