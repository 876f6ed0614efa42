"""Differential forms in the coordinate model and the Cartan calculus.

Forms over a base algebra live in an extended algebra graded by Z x G with
the cocycle (-1)^{pq} rho(a, b).  Each base generator x keeps degree
(0, |x|) and gets a partner dx of degree (1, |x|) and weight 1, so the form
degree is the weight.

Two relation kinds need care.  A generator with x^k = c (c invertible)
has k x^{k-1} dx = 0, which forces dx = 0, so no partner is created.  An
even generator with y^k = 0 gives k y^{k-1} dy = 0, recorded as the
vanishing monomial y^{k-1} dy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgebraError, AlgebraSpec, Element, GeneratorSpec, Relation
from .derivations import (
    Derivation,
    DerivationError,
    QStructure,
    check_homological,
    commutator,
    partial,
)
from .grading import GroupElement, prime_cocycle

__all__ = [
    "FormAlgebra",
    "de_rham",
    "interior",
    "lie_derivative",
    "verify_cartan",
    "evaluate_form",
    "first_order_calculus",
    "sections_bijection",
    "derived_bracket_equals_commutator",
    "coordinate_bracket",
    "d_formula_oracle",
]


class FormAlgebra:
    def __init__(self, base: AlgebraSpec):
        if base.vanishing:
            raise AlgebraError("form algebras over bases with vanishing monomials are not supported")
        self.base = base
        self.cocycle = prime_cocycle(base.cocycle)
        self.grading = self.cocycle.group
        ring = base.ring
        gens = []
        for g in base.generators:
            gens.append(GeneratorSpec(g.name, 0, self.lift_gdeg(g.gdeg, 0), g.relation))
        self.d_index: list = []
        # d-names are "dx"; if that would clash with a base name, all become "d_x"
        names = set(base.names)
        prefix = "d_" if any("d" + g.name in names for g in base.generators) else "d"
        for i, g in enumerate(base.generators):
            if base.relations[i].kind == "power_scalar":
                self.d_index.append(None)
                continue
            self.d_index.append(len(gens))
            gens.append(GeneratorSpec(prefix + g.name, 1, self.lift_gdeg(g.gdeg, 1), Relation.free()))
        nb = base.n
        vanishing = []
        for i, rel in enumerate(base.relations):
            if rel.kind == "nilpotent" and not base.is_odd(i):
                v = [0] * len(gens)
                v[i] = rel.order - 1
                v[self.d_index[i]] = 1
                vanishing.append(v)
        self.ext = AlgebraSpec(self.cocycle, gens, vanishing, name=f"forms({base.name})" if base.name else "forms")
        self.nb = nb
        self._pad = (0,) * (self.ext.n - nb)
        self.ring = ring
        zero_g = self.grading.element((1,) + (0,) * base.grading.rank)
        imgs = {}
        for i, j in enumerate(self.d_index):
            if j is not None:
                imgs[i] = self.ext.gen(j)
        self.d = Derivation(self.ext, zero_g, 1, imgs, name="d")

    # -- embedding -----------------------------------------------------------
    def lift_gdeg(self, a: GroupElement, p: int = 0) -> GroupElement:
        return self.cocycle.group.element((p,) + a.coords)

    def embed(self, f: Element) -> Element:
        if f.spec is not self.base:
            raise AlgebraError("element is not in the base algebra")
        return Element(self.ext, {e + self._pad: c for e, c in f.terms.items()})

    def project(self, f: Element) -> Element:
        """Inverse of embed on 0-forms."""
        out = {}
        for e, c in f.terms.items():
            if any(e[self.nb:]):
                raise AlgebraError(f"{f} is not a 0-form")
            out[e[: self.nb]] = c
        return Element(self.base, out)

    def dgen(self, name) -> Element:
        i = name if isinstance(name, int) else self.base.index(name)
        j = self.d_index[i]
        return self.ext.zero() if j is None else self.ext.gen(j)

    def form_degree(self, alpha: Element) -> int | None:
        ws = alpha.weights()
        return next(iter(ws)) if len(ws) == 1 else None

    # -- operators -----------------------------------------------------------
    def interior(self, X: Derivation) -> Derivation:
        if X.spec is not self.base:
            raise DerivationError("interior needs a derivation of the base")
        imgs = {j: self.embed(X.images[i]) for i, j in enumerate(self.d_index) if j is not None}
        return Derivation(self.ext, self.lift_gdeg(X.gdeg, -1), -1, imgs, name=f"i_{X.name}" if X.name else "")

    def lie(self, X: Derivation) -> Derivation:
        """L_X = [d, i_X]."""
        L = commutator(self.d, self.interior(X))
        return L

    def lie_direct(self, X: Derivation) -> Derivation:
        """L_X built from L_X(x) = X(x) and L_X(dx) = d(X(x))."""
        imgs = {}
        for i, j in enumerate(self.d_index):
            img = self.embed(X.images[i])
            imgs[i] = img
            if j is not None:
                imgs[j] = self.d(img)
        return Derivation(self.ext, self.lift_gdeg(X.gdeg, 0), 0, imgs)

    def section_to_derivation(self, V: Derivation) -> Derivation:
        """V |-> V o d restricted to the base."""
        if V.spec is not self.ext:
            raise DerivationError("section must act on the form algebra")
        imgs = {}
        for i, j in enumerate(self.d_index):
            if j is not None:
                imgs[i] = self.project(V.images[j])
        gd = self.base.grading.element(V.gdeg.coords[1:])
        return Derivation(self.base, gd, None, imgs)

    def evaluate(self, alpha: Element, Xs) -> Element:
        return evaluate_form(self, alpha, Xs)


def de_rham(F: FormAlgebra):
    """Return (QStructure, HomologicalReport) for the de Rham differential."""
    return check_homological(F.d)


def interior(F: FormAlgebra, X: Derivation) -> Derivation:
    return F.interior(X)


def lie_derivative(F: FormAlgebra, X: Derivation) -> Derivation:
    return F.lie(X)


def _residual(A: Derivation, B: Derivation) -> dict:
    spec = A.spec
    return {g.name: str(a - b) for g, a, b in zip(spec.generators, A.images, B.images) if a != b}


@dataclass
class IdentityReport:
    results: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(not r for r in self.results.values())

    def failures(self) -> dict:
        return {k: v for k, v in self.results.items() if v}


def verify_cartan(F: FormAlgebra, X: Derivation, Y: Derivation) -> IdentityReport:
    from .derivations import zero_derivation

    d = F.d
    iX, iY = F.interior(X), F.interior(Y)
    LX, LY = F.lie_direct(X), F.lie_direct(Y)
    XY = commutator(X, Y)
    z = zero_derivation(F.ext)
    rep = IdentityReport()
    rep.results["[d,d]=0"] = _residual(commutator(d, d), z)
    rep.results["[d,i_X]=L_X"] = _residual(commutator(d, iX), LX)
    rep.results["[d,L_X]=0"] = _residual(commutator(d, LX), z)
    rep.results["[i_X,i_Y]=0"] = _residual(commutator(iX, iY), z)
    rep.results["[L_X,i_Y]=i_[X,Y]"] = _residual(commutator(LX, iY), F.interior(XY))
    rep.results["[L_X,L_Y]=L_[X,Y]"] = _residual(commutator(LX, LY), F.lie_direct(XY))
    return rep


def evaluate_form(F: FormAlgebra, alpha: Element, Xs) -> Element:
    """<X_1, ..., X_p | alpha>, peeling X_1 first.

    <X_1, ..., X_p | a> = rho(|X_2| + ... + |X_p|, |X_1|)^{-1} <X_2, ..., X_p | i_{X_1} a>.
    """
    Xs = list(Xs)
    if alpha.spec is not F.ext:
        raise AlgebraError("form must live in the form algebra")
    bad = alpha.weights() - {len(Xs)}
    if bad:
        raise AlgebraError(f"arity mismatch: {len(Xs)} arguments for a form of degree {sorted(alpha.weights())}")
    rho = F.base.cocycle
    if not Xs:
        return F.project(alpha)
    X1, rest = Xs[0], Xs[1:]
    tail = F.base.grading.zero()
    for Y in rest:
        tail = tail + Y.gdeg
    # rho(a,b)^{-1} = rho(b,a)
    fac = rho(X1.gdeg, tail)
    return evaluate_form(F, F.interior(X1)(alpha), rest).scale(fac)


def pairing_oracle(F: FormAlgebra, X: Derivation, Y: Derivation, i: int, j: int) -> Element:
    """<X, Y | dx_i dx_j> written out from the interior convention by hand."""
    rho = F.base.cocycle
    gi = F.base.generators[i].gdeg
    Xi, Xj = X.images[i], X.images[j]
    Yi, Yj = Y.images[i], Y.images[j]
    return (Xi * Yj).scale(rho(Y.gdeg, gi)) - (Yi * Xj).scale(rho(X.gdeg, Y.gdeg) * rho(X.gdeg, gi))


def d_formula_oracle(F: FormAlgebra, alpha: Element, Xs) -> tuple:
    """Compare <Xs | d alpha> from the coordinate d with the invariant formula.

    Supported for 0- and 1-forms.  Returns (coordinate value, formula value).
    """
    Xs = list(Xs)
    p = len(Xs) - 1
    lhs = evaluate_form(F, F.d(alpha), Xs)
    if p == 0:
        rhs = Xs[0](F.project(alpha))
    elif p == 1:
        X1, X2 = Xs
        rho = F.base.cocycle
        rhs = X1(evaluate_form(F, alpha, [X2]))
        rhs = rhs - X2(evaluate_form(F, alpha, [X1])).scale(rho(X1.gdeg, X2.gdeg))
        rhs = rhs - evaluate_form(F, alpha, [commutator(X1, X2)])
    else:
        raise ValueError("oracle only covers forms of degree 0 and 1")
    return lhs, rhs


@dataclass
class FirstOrderCalculus:
    generators: list
    form_algebra: FormAlgebra

    def contains(self, alpha: Element) -> bool:
        """Every generator of the coordinate model is a base element or some d(x)."""
        return alpha.spec is self.form_algebra.ext

    def as_exact_sum(self, alpha: Element) -> list:
        """Write a 1-form as sum_a d(x_a) * g_a; returns [(name, g_a)]."""
        F = self.form_algebra
        ext = F.ext
        if alpha.weights() - {1}:
            raise AlgebraError("not a 1-form")
        out = {}
        for e, c in alpha.terms.items():
            j = next(k for k in range(F.nb, ext.n) if e[k])
            rest = list(e)
            rest[j] = 0
            rest = tuple(rest)
            # x^rest dx_j = rho'(|x^rest|, |dx_j|) dx_j x^rest
            fac = ext.cocycle.value(ext.mono_gdeg(rest), ext.gdeg_coords[j])
            out.setdefault(j, ext.zero())
            out[j] = out[j] + ext.monomial(rest, c * fac)
        i_of = {j: i for i, j in enumerate(F.d_index) if j is not None}
        return [(F.base.generators[i_of[j]].name, F.project(g)) for j, g in sorted(out.items())]

    def recombine(self, pieces) -> Element:
        F = self.form_algebra
        out = F.ext.zero()
        for name, g in pieces:
            out = out + F.dgen(name) * F.embed(g)
        return out


def first_order_calculus(F: FormAlgebra) -> FirstOrderCalculus:
    gens = [g.name for g in F.base.generators]
    gens += [F.ext.generators[j].name for j in F.d_index if j is not None]
    return FirstOrderCalculus(gens, F)


def sections_bijection(F: FormAlgebra):
    """The maps X |-> i_X and V |-> V o d on the base."""
    return F.interior, F.section_to_derivation


def coordinate_bracket(F: FormAlgebra, X: Derivation, Y: Derivation) -> Derivation:
    """Base derivation with x^b -> X^a dY^b/dx^a - rho(|X|,|Y|) Y^a dX^b/dx^a."""
    base = F.base
    rho = base.cocycle
    fac = rho(X.gdeg, Y.gdeg)
    parts = [partial(base, a) for a in range(base.n)]
    imgs = {}
    for b in range(base.n):
        val = base.zero()
        for a in range(base.n):
            if X.images[a]:
                val = val + X.images[a] * parts[a](Y.images[b])
            if Y.images[a]:
                val = val - (Y.images[a] * parts[a](X.images[b])).scale(fac)
        imgs[b] = val
    return Derivation(base, X.gdeg + Y.gdeg, None, imgs, validate=False)


def derived_bracket_equals_commutator(F: FormAlgebra, X: Derivation, Y: Derivation) -> IdentityReport:
    derived = commutator(commutator(F.d, F.interior(X)), F.interior(Y))
    XY = commutator(X, Y)
    rep = IdentityReport()
    rep.results["[[d,i_X],i_Y]=i_[X,Y]"] = _residual(derived, F.interior(XY))
    coord = coordinate_bracket(F, X, Y)
    rep.results["coordinate formula"] = _residual(F.interior(coord), derived)
    return rep


def de_rham_qstructure(F: FormAlgebra) -> QStructure:
    q, rep = check_homological(F.d)
    if q is None:
        raise DerivationError(f"de Rham differential failed certification: {rep.residuals}")
    return q
