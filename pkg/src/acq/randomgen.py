"""Seeded random inputs for the property checks.

All generators take a :class:`random.Random` instance so that every suite
is reproducible from its seed.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .algebra import AlgebraSpec, Element, GeneratorSpec, Relation
from .derivations import Derivation, DerivationError
from .grading import Cocycle, GradingSpec, random_group_element  # noqa: F401  re-exported
from .scalars import ParameterSpec, Scalar, ScalarRing

COEFFS = (1, -1, 2, -2, Fraction(1, 2), Fraction(-3, 2), 3)


def random_scalar(ring: ScalarRing, rng: random.Random, params: bool = True) -> Scalar:
    exp = []
    for p in ring.params:
        if not params:
            exp.append(0)
        elif p.order:
            exp.append(rng.randrange(p.order))
        else:
            exp.append(rng.choice((-1, 0, 0, 1)))
    return ring.monomial(rng.choice(COEFFS), exp)


def exponent_box(spec: AlgebraSpec) -> list:
    box = []
    for rel in spec.relations:
        if rel.kind == "invertible":
            box.append(range(-2, 3))
        elif rel.kind == "power_scalar":
            box.append(range(0, rel.order))
        elif rel.kind == "nilpotent":
            box.append(range(0, min(rel.order - 1, 2) + 1))
        else:
            box.append(range(0, 3))
    return box


def random_monomial(spec: AlgebraSpec, rng: random.Random, box=None) -> tuple:
    box = box or exponent_box(spec)
    return tuple(rng.choice(r) for r in box)


def random_element(spec: AlgebraSpec, rng: random.Random, terms: int = 3) -> Element:
    out = spec.zero()
    for _ in range(rng.randint(1, terms)):
        out = out + spec.monomial(random_monomial(spec, rng), random_scalar(spec.ring, rng))
    return out


def random_homogeneous(spec: AlgebraSpec, rng: random.Random, terms: int = 3, tries: int = 40,
                       weight=None, gdeg=None) -> Element:
    """A bihomogeneous element; when weight/gdeg are given they are matched by rejection."""
    box = exponent_box(spec)
    lead = None
    for _ in range(tries * 5):
        e = random_monomial(spec, rng, box)
        if weight is not None and spec.mono_weight(e) != weight:
            continue
        if gdeg is not None and spec.mono_gdeg(e) != tuple(gdeg):
            continue
        if spec.reduce_monomial(e) is None:
            continue
        lead = e
        break
    if lead is None:
        return spec.zero()
    w, g = spec.mono_weight(lead), spec.mono_gdeg(lead)
    out = spec.monomial(lead, random_scalar(spec.ring, rng))
    extra = rng.randint(0, terms - 1)
    for _ in range(tries):
        if extra <= 0:
            break
        e = random_monomial(spec, rng, box)
        if spec.mono_weight(e) == w and spec.mono_gdeg(e) == g:
            out = out + spec.monomial(e, random_scalar(spec.ring, rng))
            extra -= 1
    return out


def random_word(spec: AlgebraSpec, rng: random.Random, length: int = 5) -> list:
    box = exponent_box(spec)
    word = []
    for _ in range(length):
        i = rng.randrange(spec.n)
        choices = [e for e in box[i] if e]
        word.append((spec.generators[i].name, rng.choice(choices) if choices else 0))
    return word


_CANDIDATES: dict = {}


def derivation_candidates(spec: AlgebraSpec) -> dict:
    """Valid single-image derivations, grouped by (weight, gdeg coords)."""
    key = id(spec)
    hit = _CANDIDATES.get(key)
    if hit is not None and hit[0] is spec:
        return hit[1]
    groups: dict = {}
    box = exponent_box(spec)
    monos = [e for e in itertools.product(*box) if spec.reduce_monomial(e) is not None]
    for i, g in enumerate(spec.generators):
        for e in monos:
            w = spec.mono_weight(e) - g.weight
            gd = spec.grading.element([a - b for a, b in zip(spec.mono_gdeg(e), g.gdeg.coords)])
            try:
                X = Derivation(spec, gd, w, {i: spec.monomial(e)})
            except DerivationError:
                continue
            groups.setdefault((w, gd.coords), []).append(X)
    _CANDIDATES[key] = (spec, groups)
    return groups


def random_derivation(spec: AlgebraSpec, rng: random.Random, terms: int = 3, weight=None,
                      gdeg=None, params: bool = True) -> Derivation:
    """Random homogeneous derivation built from valid single-image pieces.

    Returns the zero derivation when no candidate of the requested degree exists.
    """
    groups = derivation_candidates(spec)
    keys = [k for k in sorted(groups)
            if (weight is None or k[0] == weight) and (gdeg is None or k[1] == _coords(gdeg))]
    if not keys:
        gd = spec.grading.element(gdeg) if gdeg is not None else spec.grading.zero()
        return Derivation(spec, gd, weight if weight is not None else 0, {}, validate=False)
    k = rng.choice(keys)
    pool = groups[k]
    out = None
    for X in rng.sample(pool, min(len(pool), rng.randint(1, terms))):
        piece = X.scale(random_scalar(spec.ring, rng, params))
        out = piece if out is None else out + piece
    return out


def random_derivation_of_degree(spec: AlgebraSpec, rng: random.Random, weight, gdeg, terms: int = 3):
    return random_derivation(spec, rng, terms, weight, gdeg)


def derivation_keys(spec: AlgebraSpec, weight=None) -> list:
    return [k for k in sorted(derivation_candidates(spec)) if weight is None or k[0] == weight]


def random_section_family(spec, rng, n: int):
    return [random_derivation(spec, rng, weight=-1) for _ in range(n)]


# -- random structure constants over one even base generator -----------------

_SC_SPEC: list = []


def structure_family_spec() -> AlgebraSpec:
    """x invertible plus three odd weight-1 generators, graded by Z^3 with one q-form."""
    if _SC_SPEC:
        return _SC_SPEC[0]
    ring = ScalarRing([ParameterSpec("q")])
    G = GradingSpec(3)
    rho = Cocycle(G, ring, ((1, 0, 0), (0, 0, 0), (0, 0, 0)),
                  (("q", ((0, 0, 0), (0, 0, 1), (0, -1, 0))),))
    gens = [GeneratorSpec("x", 0, G.element(0, 1, 0), Relation.invertible()),
            GeneratorSpec("xi1", 1, G.element(1, 0, 0)),
            GeneratorSpec("xi2", 1, G.element(1, 1, 0)),
            GeneratorSpec("xi3", 1, G.element(1, 0, 1))]
    _SC_SPEC.append(AlgebraSpec(rho, gens, name="structure_family"))
    return _SC_SPEC[0]


def random_structure_constants(rng: random.Random, p=None):
    """A random StructureConstants instance of |Q| = (1,0,0); either outcome of Q^2 = 0 occurs."""
    from .algebroid import StructureConstants

    spec = structure_family_spec()
    ring = spec.ring
    x, xinv, one = spec.gen("x"), spec.gen("x", -1), spec.one()
    p = p if p is not None else rng.choice((0.2, 0.35, 0.5))
    sc = StructureConstants(spec.grading.element(1, 0, 0))

    def coeff():
        return ring.monomial(rng.choice((-2, -1, 1, 2, Fraction(1, 2))), [rng.choice((-1, 0, 1))])

    for key, val in ((("xi1", "x"), x), (("xi2", "x"), one)):
        if rng.random() < p:
            sc.A[key] = val.scale(coeff())
    for key, val in ((("xi1", "xi2", "xi1"), xinv), (("xi2", "xi2", "xi1"), one),
                     (("xi3", "xi3", "xi1"), one), (("xi3", "xi3", "xi2"), xinv)):
        if rng.random() < p:
            sc.C[key] = val.scale(coeff())
    return spec, sc


def _coords(g) -> tuple:
    return tuple(g.coords) if hasattr(g, "coords") else tuple(g)
