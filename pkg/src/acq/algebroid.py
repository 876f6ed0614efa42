"""Degree-1 Q-algebras read as Lie antialgebroids.

Sections are weight -1 derivations, the bracket is the derived bracket
rho(|s|+|Q|, |Q|) [[Q, s], t] and the anchor sends a section s to the
derivation f -> s(Q(f)) of the weight-0 subalgebra B.

A general weight +1 derivation Q is encoded by structure constants

    Q(x^a)   = sum_al xi^al A[al, a]
    Q(xi^ga) = 1/2 sum_{al, be} xi^al xi^be C[ga, be, al]

where all degrees are the full degrees in the algebra.  Homogeneity then
forces |A[al, a]| = |x^a| + |Q| - |xi^al| and
|C[ga, be, al]| = |xi^ga| + |Q| - |xi^al| - |xi^be|, and the ordering of
the xi's forces C[ga, be, al] = rho(xi^be, xi^al) C[ga, al, be].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .algebra import AlgebraError, AlgebraSpec, Element, degree_of_algebra
from .derivations import (
    Derivation,
    DerivationError,
    FoliationReport,
    check_foliation,
    check_homological,
    commutator,
    module_action,
    partial,
    zero_derivation,
)
from .grading import GroupElement

__all__ = [
    "DegreeOneQAlgebra",
    "StructureConstants",
    "derived_bracket",
    "anchor",
    "anchor_derivation",
    "jacobiator",
    "verify_antialgebra",
    "verify_leibniz_and_anchor",
    "build_from_structure_constants",
    "extract_structure_constants",
    "structure_equation_residuals",
    "literal_structure_residuals",
    "characteristic_foliation",
    "residuals_vanish",
    "homological_on_generators",
]


class DegreeOneQAlgebra:
    """An algebra of degree at most 1 with a weight +1 homological derivation.

    Degree 0 is allowed: it is the zero bundle, where every section and Q vanish.
    """

    def __init__(self, spec: AlgebraSpec, q: Derivation, name: str = "", require_certified: bool = True):
        if degree_of_algebra(spec) > 1:
            raise AlgebraError(f"algebra has degree {degree_of_algebra(spec)}, expected at most 1")
        if q.spec is not spec:
            raise DerivationError("Q acts on a different algebra")
        if not q.is_zero() and q.weight != 1:
            raise DerivationError(f"Q must have weight 1, got {q.weight}")
        self.spec = spec
        self.q = q
        self.name = name
        self.qstruct, self.report = check_homological(q)
        if require_certified and self.qstruct is None:
            raise DerivationError(f"Q is not homological: {self.report.residuals}")
        self.base_index = [i for i, w in enumerate(spec.weights) if w == 0]
        self.fibre_index = [i for i, w in enumerate(spec.weights) if w == 1]
        vanish = [tuple(v[i] for i in self.base_index) for v in spec.vanishing
                  if all(v[i] == 0 for i in self.fibre_index)]
        self.base = AlgebraSpec(spec.cocycle, [spec.generators[i] for i in self.base_index], vanish,
                                name=f"base({spec.name})" if spec.name else "base")

    @property
    def certified(self) -> bool:
        return self.qstruct is not None

    # -- base algebra --------------------------------------------------------
    def to_base(self, f: Element) -> Element:
        out = {}
        for e, c in f.terms.items():
            if any(e[i] for i in self.fibre_index):
                raise AlgebraError(f"{f} is not in the weight-0 subalgebra")
            out[tuple(e[i] for i in self.base_index)] = c
        return Element(self.base, out)

    def from_base(self, f: Element) -> Element:
        if f.spec is self.spec:
            return f
        out = {}
        n = self.spec.n
        for e, c in f.terms.items():
            full = [0] * n
            for k, i in enumerate(self.base_index):
                full[i] = e[k]
            out[tuple(full)] = c
        return Element(self.spec, out)

    # -- sections ------------------------------------------------------------
    def check_section(self, s: Derivation):
        if s.spec is not self.spec:
            raise DerivationError("section acts on a different algebra")
        if s.is_zero():
            return
        if s.weight != -1:
            raise DerivationError(f"sections have weight -1, got {s.weight}")

    def basis_section(self, alpha) -> Derivation:
        """d/dxi^alpha; raises if it is not a derivation of this algebra."""
        i = alpha if isinstance(alpha, int) else self.spec.index(alpha)
        g = self.spec.generators[i]
        if g.weight != 1:
            raise DerivationError(f"{g.name} is not a weight-1 generator")
        return Derivation(self.spec, -g.gdeg, -1, {i: self.spec.one()}, name=f"s_{g.name}")

    def basis_sections(self) -> dict:
        out = {}
        for i in self.fibre_index:
            try:
                out[self.spec.generators[i].name] = self.basis_section(i)
            except DerivationError:
                continue
        return out


def derived_bracket(E: DegreeOneQAlgebra, sigma: Derivation, psi: Derivation) -> Derivation:
    E.check_section(sigma)
    E.check_section(psi)
    Q = E.q
    rho = E.spec.cocycle
    fac = rho(sigma.gdeg + Q.gdeg, Q.gdeg)
    return commutator(commutator(Q, sigma), psi).scale(fac)


def anchor(E: DegreeOneQAlgebra, sigma: Derivation, f: Element) -> Element:
    """a_Q(sigma) f = sigma(Q(f)), for f in the weight-0 subalgebra."""
    E.check_section(sigma)
    f = E.from_base(f)
    if f.weights() - {0}:
        raise AlgebraError("anchor only acts on the weight-0 subalgebra")
    return sigma(E.q(f))


def anchor_by_commutator(E: DegreeOneQAlgebra, sigma: Derivation, f: Element) -> Element:
    rho = E.spec.cocycle
    fac = rho(sigma.gdeg + E.q.gdeg, E.q.gdeg)
    return commutator(E.q, sigma)(E.from_base(f)).scale(fac)


def anchor_derivation(E: DegreeOneQAlgebra, sigma: Derivation) -> Derivation:
    """The derivation of B induced by sigma."""
    imgs = {k: E.to_base(sigma(E.q.images[i])) for k, i in enumerate(E.base_index)}
    return Derivation(E.base, sigma.gdeg + E.q.gdeg, 0, imgs, validate=False)


def jacobiator(E: DegreeOneQAlgebra, sigma, psi, omega) -> Derivation:
    rho = E.spec.cocycle
    Q = E.q.gdeg
    br = lambda a, b: derived_bracket(E, a, b)
    out = br(sigma, br(psi, omega)) - br(br(sigma, psi), omega)
    return out - br(psi, br(sigma, omega)).scale(rho(sigma.gdeg + Q, psi.gdeg + Q))


@dataclass
class CheckReport:
    results: dict = field(default_factory=dict)

    def add(self, name: str, residual):
        if isinstance(residual, Derivation):
            bad = "" if residual.is_zero() else str(residual)
        elif isinstance(residual, Element):
            bad = "" if not residual else str(residual)
        elif isinstance(residual, bool):
            bad = "" if residual else "false"
        else:
            bad = str(residual) if residual else ""
        self.results.setdefault(name, []).append(bad)

    @property
    def ok(self) -> bool:
        return all(not r for rs in self.results.values() for r in rs)

    def failures(self) -> dict:
        return {k: [r for r in rs if r] for k, rs in self.results.items() if any(rs)}


def verify_antialgebra(E: DegreeOneQAlgebra, sections: list, triples: list | None = None) -> CheckReport:
    """Antialgebra axioms on given sections: pairs from ``sections``, triples as listed."""
    rep = CheckReport()
    rho = E.spec.cocycle
    Q = E.q.gdeg
    rep.add("rho(|Q|,|Q|) = -1", E.q.is_zero() or rho(Q, Q) == -1)
    for s in sections:
        for t in sections:
            b = derived_bracket(E, s, t)
            rep.add("degree", b.is_zero() or b.gdeg == s.gdeg + t.gdeg + Q)
            rep.add("weight", b.is_zero() or b.weight == -1)
            sym = b + derived_bracket(E, t, s).scale(rho(s.gdeg + Q, t.gdeg + Q))
            rep.add("antisymmetry", sym)
    for s, t, w in triples or []:
        rep.add("jacobi", jacobiator(E, s, t, w))
    return rep


def verify_leibniz_and_anchor(E: DegreeOneQAlgebra, cases: list) -> CheckReport:
    """cases: list of (sigma, psi, f) with f homogeneous in B."""
    rep = CheckReport()
    rho = E.spec.cocycle
    Q = E.q.gdeg
    for sigma, psi, f in cases:
        f = E.from_base(f)
        lhs = derived_bracket(E, sigma, module_action(f, psi))
        a_f = anchor(E, sigma, f)
        rhs = module_action(a_f, psi) if a_f else zero_derivation(E.spec, lhs.gdeg, -1)
        fd = f.gdeg()
        if fd is not None:
            rhs = rhs + module_action(f, derived_bracket(E, sigma, psi)).scale(rho(sigma.gdeg + Q, fd))
        rep.add("leibniz", lhs - rhs)
        rep.add("anchor = commutator form", anchor(E, sigma, f) - anchor_by_commutator(E, sigma, f))
        ab = anchor_derivation(E, derived_bracket(E, sigma, psi))
        ca = commutator(anchor_derivation(E, sigma), anchor_derivation(E, psi))
        rep.add("anchor compatibility", ab - ca)
        fb = E.to_base(f)
        lin = anchor_derivation(E, module_action(f, sigma)) - module_action(fb, anchor_derivation(E, sigma))
        rep.add("anchor linearity", lin)
    return rep


def characteristic_foliation(E: DegreeOneQAlgebra, slack: int = 1):
    """Anchors of the basis sections and the closure check on B."""
    secs = E.basis_sections()
    gens = [anchor_derivation(E, s) for s in secs.values()]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return [], FoliationReport("pass", {})
    return gens, check_foliation(E.base, gens, slack)


# -- structure constants ------------------------------------------------------

@dataclass
class StructureConstants:
    """A[(alpha, a)] and C[(gamma, beta, alpha)], keyed by generator names.

    Values are elements of the full algebra supported on weight-0 generators.
    Missing C entries are filled from the skew rule where the partner exists.
    """

    gdeg: GroupElement
    A: dict = field(default_factory=dict)
    C: dict = field(default_factory=dict)


def _fibre_base(spec: AlgebraSpec):
    base = [g.name for g in spec.generators if g.weight == 0]
    fibre = [g.name for g in spec.generators if g.weight == 1]
    return base, fibre


def _full(spec, name) -> GroupElement:
    return spec.generators[spec.index(name)].gdeg


def complete_skew(spec: AlgebraSpec, C: dict) -> dict:
    """Fill C[g, a, b] = rho(xi^a, xi^b) C[g, b, a]; raise on contradictions."""
    rho = spec.cocycle
    out = dict(C)
    for (g, b, a), val in C.items():
        partner = val.scale(rho(_full(spec, a), _full(spec, b)))
        key = (g, a, b)
        if key in out and out[key] != partner:
            raise AlgebraError(f"structure constants for {g} on ({a},{b}) violate the skew rule")
        out[key] = partner
    return out


def build_from_structure_constants(spec: AlgebraSpec, sc: StructureConstants) -> Derivation:
    base, fibre = _fibre_base(spec)
    q = sc.gdeg
    C = complete_skew(spec, sc.C)
    for (al, a), val in sc.A.items():
        want = _full(spec, a) + q - _full(spec, al)
        for e in val.terms:
            if spec.mono_gdeg(e) != want.coords or spec.mono_weight(e) != 0:
                raise AlgebraError(f"A[{al},{a}] should have degree {want}, found {spec.render_monomial(e) or '1'}")
    for (g, be, al), val in C.items():
        want = _full(spec, g) + q - _full(spec, al) - _full(spec, be)
        for e in val.terms:
            if spec.mono_gdeg(e) != want.coords or spec.mono_weight(e) != 0:
                raise AlgebraError(
                    f"C[{g},{be},{al}] should have degree {want}, found {spec.render_monomial(e) or '1'}")
    imgs = {}
    for a in base:
        val = spec.zero()
        for al in fibre:
            c = sc.A.get((al, a))
            if c:
                val = val + spec.gen(al) * c
        imgs[a] = val
    half = Fraction(1, 2)
    for g in fibre:
        val = spec.zero()
        for al in fibre:
            for be in fibre:
                c = C.get((g, be, al))
                if c:
                    val = val + (spec.gen(al) * spec.gen(be) * c).scale(half)
        imgs[g] = val
    return Derivation(spec, q, 1, imgs)


def _peel(spec: AlgebraSpec, term_exp, c, fibre_idx):
    """Write c * monomial as (xi-word) * f with f in B; return (xi exps, f)."""
    xi = tuple(term_exp[i] if i in fibre_idx else 0 for i in range(spec.n))
    xpart = tuple(0 if i in fibre_idx else term_exp[i] for i in range(spec.n))
    probe = spec.monomial(xi) * spec.monomial(xpart)
    (pe, pc), = probe.terms.items()
    assert pe == term_exp
    return xi, spec.monomial(xpart, c / pc)


def extract_structure_constants(Q: Derivation) -> StructureConstants:
    """Read A and C off a weight +1 derivation (tie-break alpha < beta)."""
    spec = Q.spec
    base, fibre = _fibre_base(spec)
    fidx = {spec.index(n) for n in fibre}
    A, C = {}, {}
    for a in base:
        for e, c in Q.images[spec.index(a)].terms.items():
            xi, f = _peel(spec, e, c, fidx)
            (al,) = [spec.generators[i].name for i in fidx if xi[i]]
            A[(al, a)] = A.get((al, a), spec.zero()) + f
    for g in fibre:
        for e, c in Q.images[spec.index(g)].terms.items():
            xi, f = _peel(spec, e, c, fidx)
            idx = sorted(i for i in fidx if xi[i])
            if len(idx) == 1:
                # xi^al xi^al for an even generator: coefficient is C/2
                i = idx[0]
                al = be = spec.generators[i].name
                f = f.scale(2)
            else:
                al, be = (spec.generators[i].name for i in idx)
            C[(g, be, al)] = C.get((g, be, al), spec.zero()) + f
    rho = spec.cocycle
    full = dict(C)
    for (g, be, al), val in C.items():
        if al != be:
            full[(g, al, be)] = val.scale(rho(_full(spec, al), _full(spec, be)))
    A = {k: v for k, v in A.items() if v}
    full = {k: v for k, v in full.items() if v}
    return StructureConstants(Q.gdeg, A, full)


def _directional(spec: AlgebraSpec, A: dict, al: str, base: list):
    """V_al = sum_a A[al, a] d/dx^a as a function on B-valued elements."""
    parts = [(A.get((al, a)), partial(spec, a)) for a in base]

    def run(f: Element) -> Element:
        out = spec.zero()
        for coeff, d in parts:
            if coeff:
                out = out + coeff * d(f)
        return out

    return run


def structure_equation_residuals(spec: AlgebraSpec, sc: StructureConstants):
    """Both component tables of Q^2 = 0, written through the constants.

    Table (i) is keyed (alpha, beta, b) with alpha <= beta and holds the
    coefficient of xi^alpha xi^beta in Q^2(x^b); table (ii) is keyed
    (i, j, k, delta) over sorted triples and holds the coefficient of
    xi^i xi^j xi^k in Q^2(xi^delta).  Diagonal entries are tracked for even
    xi's and dropped for odd ones, whose squares vanish.
    """
    base, fibre = _fibre_base(spec)
    rho = spec.cocycle
    q = sc.gdeg
    A = {k: v for k, v in sc.A.items()}
    C = complete_skew(spec, sc.C)
    deg = {n: _full(spec, n) for n in base + fibre}
    odd = {n: spec.is_odd(spec.index(n)) for n in fibre}
    V = {al: _directional(spec, A, al, base) for al in fibre}
    zero = spec.zero()

    def getA(al, a):
        return A.get((al, a), zero)

    def getC(g, be, al):
        return C.get((g, be, al), zero)

    table1 = {}
    for b in base:
        for x, al in enumerate(fibre):
            for be in fibre[x:]:
                if al == be and odd[al]:
                    continue
                T_ba = V[be](getA(al, b))
                T_ab = V[al](getA(be, b))
                val = T_ba.scale(rho(q, deg[al]))
                if al != be:
                    val = val + T_ab.scale(rho(deg[be], deg[al]) * rho(q, deg[be]))
                    for g in fibre:
                        val = val + getC(g, be, al) * getA(g, b)
                else:
                    for g in fibre:
                        val = val + (getC(g, al, al) * getA(g, b)).scale(Fraction(1, 2))
                table1[(al, be, b)] = val

    quarter, half = Fraction(1, 4), Fraction(1, 2)

    def R(i, j, k, d):
        out = zero
        for m in fibre:
            c1 = getC(m, j, i)
            c2 = getC(d, k, m)
            if c1 and c2:
                cdeg = deg[m] + q - deg[i] - deg[j]
                out = out + (c1 * c2).scale(quarter * rho(cdeg, deg[k]))
        for m in fibre:
            c1 = getC(m, k, j)
            c2 = getC(d, m, i)
            if c1 and c2:
                out = out + (c1 * c2).scale(quarter * rho(q, deg[i]))
        v = V[k](getC(d, j, i))
        if v:
            out = out + v.scale(half * rho(q, deg[i] + deg[j]))
        return out

    table2 = {}
    for d in fibre:
        for x in range(len(fibre)):
            for y in range(x, len(fibre)):
                for z in range(y, len(fibre)):
                    trip = (fibre[x], fibre[y], fibre[z])
                    word = spec.gen(trip[0]) * spec.gen(trip[1]) * spec.gen(trip[2])
                    if not word:
                        continue
                    (we, wc), = word.terms.items()
                    val = zero
                    for perm in sorted(set(permutations(trip))):
                        w = spec.gen(perm[0]) * spec.gen(perm[1]) * spec.gen(perm[2])
                        sign = w.terms[we] / wc
                        val = val + R(*perm, d).scale(sign)
                    table2[trip + (d,)] = val
    return table1, table2


def literal_structure_residuals(spec: AlgebraSpec, sc: StructureConstants, cocycle_g):
    """The two displayed component equations taken at face value.

    ``cocycle_g(a, b)`` evaluates rho on the G-parts of the degrees of two
    fibre generators.  Used only for comparison with the derived tables.
    """
    base, fibre = _fibre_base(spec)
    A = dict(sc.A)
    C = complete_skew(spec, sc.C)
    zero = spec.zero()
    V = {al: _directional(spec, A, al, base) for al in fibre}
    t1, t2 = {}, {}
    for b in base:
        for al in fibre:
            for be in fibre:
                val = V[al](A.get((be, b), zero)) - V[be](A.get((al, b), zero)).scale(cocycle_g(al, be))
                for g in fibre:
                    val = val - C.get((g, al, be), zero) * A.get((g, b), zero)
                t1[(al, be, b)] = val
    for d in fibre:
        for al in fibre:
            for be in fibre:
                for ga in fibre:
                    val = zero
                    for x, y, z in ((al, be, ga), (be, ga, al), (ga, al, be)):
                        piece = V[x](C.get((d, y, z), zero))
                        for e in fibre:
                            piece = piece - C.get((e, x, y), zero) * C.get((d, e, z), zero)
                        # rho^{-1}(a, b) = rho(b, a)
                        val = val + piece.scale(cocycle_g(y, x))
                    t2[(al, be, ga, d)] = val
    return t1, t2


def residuals_vanish(tables) -> bool:
    return all(not v for t in tables for v in t.values())


def homological_on_generators(Q: Derivation) -> bool:
    """Independent side of the structure-equation equivalence."""
    return check_homological(Q)[0] is not None
