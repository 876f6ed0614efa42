import random

import pytest

from acq import randomgen as rg
from acq.algebra import AlgebraError
from acq.algebroid import (
    DegreeOneQAlgebra,
    StructureConstants,
    anchor,
    build_from_structure_constants,
    characteristic_foliation,
    derived_bracket,
    extract_structure_constants,
    homological_on_generators,
    jacobiator,
    residuals_vanish,
    structure_equation_residuals,
    verify_antialgebra,
    verify_leibniz_and_anchor,
)
from acq.derivations import DerivationError, zero_derivation
from acq.dsl import evaluate_derivation as ed
from acq.dsl import parse_model


@pytest.fixture
def ta(model):
    return model("torus_action").algebroid


def _sections(E, rng, n=4):
    return [rg.random_derivation(E.spec, rng, weight=-1) for _ in range(n)]


def test_torus_bracket_and_anchor(ta):
    A = ta.spec
    su, sv = ed(A, "D[eta_u]"), ed(A, "D[eta_v]")
    assert derived_bracket(ta, su, sv).is_zero()
    assert anchor(ta, su, A.gen("u")) == A.gen("u").scale(A.ring.param("tau"))
    assert anchor(ta, su, A.one()).is_zero()
    assert jacobiator(ta, su, sv, su).is_zero()


def test_trivial_q_has_zero_bracket(model):
    E = model("trivial_q").algebroid
    rng = random.Random(0)
    secs = _sections(E, rng)
    for s in secs:
        for t in secs:
            assert derived_bracket(E, s, t).is_zero()
        assert anchor(E, s, E.spec.gen("x")).is_zero()


def test_sections_must_have_weight_minus_one(ta):
    with pytest.raises(DerivationError):
        derived_bracket(ta, ta.q, ta.q)
    with pytest.raises(AlgebraError):
        anchor(ta, ed(ta.spec, "D[eta_u]"), ta.spec.gen("eta_u"))


def test_degree_two_rejected():
    spec = parse_model("""model w2
grading Z^1
generator x weight=0 gdeg=(0) free
generator b weight=2 gdeg=(1) free
""").algebra
    with pytest.raises(AlgebraError):
        DegreeOneQAlgebra(spec, zero_derivation(spec, spec.grading.element(1), 1))


def test_uncertified_q_rejected(model):
    Q = model("corrupted_torus_action").algebroid.q
    with pytest.raises(DerivationError):
        DegreeOneQAlgebra(Q.spec, Q)


@pytest.mark.parametrize("name", ["torus_action", "trivial_q", "free_algebroid", "derham_quantum_plane"])
def test_antialgebra_random(model, name):
    E = model(name).q_algebra()
    rng = random.Random(name)
    secs = _sections(E, rng)
    triples = [tuple(rng.choice(secs) for _ in range(3)) for _ in range(5)]
    rep = verify_antialgebra(E, secs, triples)
    assert rep.ok, rep.failures()


@pytest.mark.parametrize("name", ["torus_action", "free_algebroid", "derham_torus"])
def test_leibniz_and_anchor_random(model, name):
    E = model(name).q_algebra()
    rng = random.Random(name)
    cases = []
    for _ in range(8):
        s, t = _sections(E, rng, 2)
        f = rg.random_homogeneous(E.base, rng)
        cases.append((s, t, f))
    cases.append((s, t, E.base.gen(E.base.names[0]) * E.base.gen(E.base.names[-1])))
    rep = verify_leibniz_and_anchor(E, cases)
    assert rep.ok, rep.failures()


def test_foliations(model, ta):
    gens, rep = characteristic_foliation(ta)
    assert rep.ok
    assert [str(g) for g in gens] == ["{u -> tau*u}", "{v -> tau*v}"]
    gens, rep = characteristic_foliation(model("trivial_q").algebroid)
    assert gens == [] and rep.ok
    E = model("derham_quantum_plane").q_algebra()
    gens, rep = characteristic_foliation(E)
    assert rep.ok and len(gens) == len(E.base.names)


def test_structure_constants_torus(ta):
    sc = extract_structure_constants(ta.q)
    assert set(sc.A) == {("eta_u", "u"), ("eta_v", "v")}
    assert not any(sc.C.values())
    assert build_from_structure_constants(ta.spec, sc) == ta.q
    assert residuals_vanish(structure_equation_residuals(ta.spec, sc))


def test_structure_constants_zero(ta):
    sc = StructureConstants(ta.q.gdeg)
    assert build_from_structure_constants(ta.spec, sc).is_zero()
    assert residuals_vanish(structure_equation_residuals(ta.spec, sc))


def test_corrupted_constants(model):
    Q = model("corrupted_torus_action").algebroid.q
    sc = extract_structure_constants(Q)
    assert not residuals_vanish(structure_equation_residuals(Q.spec, sc))
    assert not homological_on_generators(Q)


def test_degree_bookkeeping_of_constants(ta):
    sc = StructureConstants(ta.q.gdeg, A={("eta_u", "u"): ta.spec.gen("v")})
    with pytest.raises(AlgebraError):
        build_from_structure_constants(ta.spec, sc)


def test_structure_equivalence_random():
    rng = random.Random(11)
    seen = set()
    for _ in range(20):
        spec, sc = rg.random_structure_constants(rng)
        Q = build_from_structure_constants(spec, sc)
        vanish = residuals_vanish(structure_equation_residuals(spec, sc))
        assert vanish == homological_on_generators(Q)
        seen.add(vanish)
        back = extract_structure_constants(Q)
        assert build_from_structure_constants(spec, back) == Q
    assert seen == {True, False}


def test_free_algebroid_constants(model):
    E = model("free_algebroid").algebroid
    assert E.certified
    sc = extract_structure_constants(E.q)
    assert any(sc.C.values())
    assert residuals_vanish(structure_equation_residuals(E.spec, sc))
    su = E.basis_section("xi1")
    s2 = E.basis_section("xi2")
    assert not derived_bracket(E, su, s2).is_zero()


def test_zero_q_bundle(model):
    spec = model("quantum_plane").algebra
    E = DegreeOneQAlgebra(spec, zero_derivation(spec, spec.grading.zero(), 1))
    assert E.basis_sections() == {}
