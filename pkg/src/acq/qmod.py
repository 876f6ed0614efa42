"""Q-modules, Maurer-Cartan deformations and symmetries of a degree-1 Q-algebra.

The derivations of A form a differential rho-Lie algebra with
nabla = [Q, -].  A weight +1 derivation X with |X| = |Q| deforms Q to Q + X
exactly when nabla X + 1/2 [X, X] = 0.  Symmetries are weight-0
derivations commuting with Q; on sections they act by [X, -].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import Element
from .algebroid import CheckReport, DegreeOneQAlgebra, derived_bracket
from .calculus import FormAlgebra
from .derivations import (
    Derivation,
    DerivationError,
    check_homological,
    commutator,
    module_action,
    monomials_of_degree,
    ansatz_box,
)
from .linsolve import SOLVED, solve

__all__ = [
    "QModule",
    "adjoint_module",
    "coadjoint_module",
    "nabla_derivation_rule_check",
    "mc_residual",
    "MCReport",
    "is_symmetry",
    "is_inner",
    "symmetry_bracket_property",
]


@dataclass
class QModule:
    side: str
    carrier: str
    nabla: Callable
    leibniz: Callable
    nabla_gdeg: object = None

    def check_flat(self, samples) -> CheckReport:
        rep = CheckReport()
        for v in samples:
            rep.add("nabla^2 = 0", self.nabla(self.nabla(v)))
        return rep

    def check_leibniz(self, pairs) -> CheckReport:
        rep = CheckReport()
        for a, v in pairs:
            rep.add("leibniz", self.leibniz(a, v))
        return rep


def adjoint_module(E: DegreeOneQAlgebra) -> QModule:
    """Derivations of A with nabla = [Q, -]; left module over A."""
    Q = E.q
    rho = E.spec.cocycle

    def nabla(X: Derivation) -> Derivation:
        return commutator(Q, X)

    def leibniz(f: Element, X: Derivation):
        # nabla(f X) = Q(f) X + rho(|Q|, |f|) f nabla(X)
        lhs = nabla(module_action(f, X))
        qf = Q(f)
        rhs = module_action(f, nabla(X)).scale(rho(Q.gdeg, f.gdeg()))
        if qf:
            rhs = module_action(qf, X) + rhs
        return lhs - rhs

    return QModule("left", "adjoint", nabla, leibniz, Q.gdeg)


def coadjoint_module(F: FormAlgebra, Q: Derivation) -> QModule:
    """Forms on A with nabla = L_Q; right module over A."""
    if Q.spec is not F.base:
        raise DerivationError("Q must be a derivation of the base of the form algebra")
    LQ = F.lie_direct(Q)
    rho = F.base.cocycle

    def nabla(w: Element) -> Element:
        return LQ(w)

    def leibniz(a: Element, w: Element):
        # nabla(w a) = nabla(w) a + rho(|Q|, |w|) w Q(a)
        ea = F.embed(a)
        wg = w.gdeg()
        fac = rho(Q.gdeg, F.base.grading.element(wg.coords[1:])) if wg is not None else None
        if fac is None:
            if w:
                raise DerivationError("right Leibniz check needs a homogeneous form")
            return LQ(w * ea)
        return LQ(w * ea) - LQ(w) * ea - (w * F.embed(Q(a))).scale(fac)

    return QModule("right", "coadjoint", nabla, leibniz, Q.gdeg)


def nabla_derivation_rule_check(E: DegreeOneQAlgebra, X: Derivation, Y: Derivation) -> Derivation:
    """nabla[X,Y] - [nabla X, Y] - rho(|Q|,|X|) [X, nabla Y]."""
    Q = E.q
    rho = E.spec.cocycle
    lhs = commutator(Q, commutator(X, Y))
    rhs = commutator(commutator(Q, X), Y) + commutator(X, commutator(Q, Y)).scale(rho(Q.gdeg, X.gdeg))
    return lhs - rhs


@dataclass
class MCReport:
    residual: Derivation
    identity_residual: Derivation
    deformed_certified: bool

    @property
    def residual_zero(self) -> bool:
        return self.residual.is_zero()

    @property
    def consistent(self) -> bool:
        return self.identity_residual.is_zero() and self.residual_zero == self.deformed_certified


def mc_residual(E: DegreeOneQAlgebra, X: Derivation) -> MCReport:
    """nabla X + 1/2 [X, X], the proof identity, and certification of Q + X."""
    Q = E.q
    if not X.is_zero():
        if X.weight != 1:
            raise DerivationError(f"deformations have weight 1, got {X.weight}")
        if X.gdeg != Q.gdeg:
            raise DerivationError(f"deformations need |X| = |Q| = {Q.gdeg}, got {X.gdeg}")
    QX = commutator(Q, X)
    XX = commutator(X, X)
    res = QX + XX.scale(Fraction(1, 2))
    QpX = Q + X
    ident = commutator(QpX, QpX) - (QX.scale(2) + XX)
    cert = check_homological(QpX)[0] is not None
    return MCReport(res, ident, cert)


def _require_weight_zero(X: Derivation):
    if not X.is_zero() and X.weight != 0:
        raise DerivationError(f"symmetries have weight 0, got {X.weight}")


def is_symmetry(E: DegreeOneQAlgebra, X: Derivation) -> CheckReport:
    _require_weight_zero(X)
    rep = CheckReport()
    rep.add("[X,Q] = 0", commutator(X, E.q))
    return rep


@dataclass
class InnerReport:
    status: str  # pass | fail | not found within ansatz
    omega: Derivation | None = None
    detail: str = ""


def section_ansatz(E: DegreeOneQAlgebra, gdeg, slack: int = 1, hint=()):
    """Single-image sections xi^alpha -> monomial of G-degree gdeg, validated."""
    spec = E.spec
    box = ansatz_box(spec, hint, slack)
    base_box = [box[i] if i in E.base_index else range(0, 1) for i in range(spec.n)]
    out = []
    for i in E.fibre_index:
        want = (spec.generators[i].gdeg + gdeg).coords
        for exp in monomials_of_degree(spec, 0, want, base_box):
            try:
                s = Derivation(spec, gdeg, -1, {i: spec.monomial(exp)})
            except DerivationError:
                continue
            out.append(((i, exp), s))
    return out


def is_inner(E: DegreeOneQAlgebra, X: Derivation, omega: Derivation | None = None, slack: int = 1) -> InnerReport:
    """X = nabla(omega) for a section omega; searched in a finite ansatz if omega is None."""
    _require_weight_zero(X)
    Q = E.q
    if omega is not None:
        diff = commutator(Q, omega) - X
        return InnerReport("pass" if diff.is_zero() else "fail", omega, "" if diff.is_zero() else str(diff))
    if X.is_zero():
        return InnerReport("pass", Derivation(E.spec, X.gdeg - Q.gdeg, -1, {}, validate=False))
    spec = E.spec
    gd = X.gdeg - Q.gdeg
    hint = [e for img in X.images for e in img.terms]
    cands = section_ansatz(E, gd, slack, hint)
    cols = [(key, commutator(Q, s)) for key, s in cands]
    rows: dict = {}
    for key, img in cols:
        for i, val in enumerate(img.images):
            for e, c in val.terms.items():
                rows.setdefault((i, e), {})[key] = c
    for i, val in enumerate(X.images):
        for e in val.terms:
            rows.setdefault((i, e), {})
    system = [(co, X.images[i].coefficient(e)) for (i, e), co in sorted(rows.items())]
    res = solve(system, spec.ring)
    if res.status == SOLVED:
        omega = Derivation(spec, gd, -1, {}, validate=False)
        by_key = dict(cands)
        for key, val in res.solution.items():
            if val:
                omega = omega + by_key[key].scale(val)
        if (commutator(Q, omega) - X).is_zero():
            return InnerReport("pass", omega)
    return InnerReport("not found within ansatz", None, res.status)


def symmetry_bracket_property(E: DegreeOneQAlgebra, X: Derivation, sigma: Derivation, psi: Derivation) -> Derivation:
    """[X, [[s, t]]] - [[ [X,s], t ]] - rho(|X|, |Q|+|s|) [[ s, [X,t] ]], with L_X = [X, -]."""
    if not is_symmetry(E, X).ok:
        raise DerivationError("X is not a symmetry")
    rho = E.spec.cocycle
    Q = E.q.gdeg
    lhs = commutator(X, derived_bracket(E, sigma, psi))
    rhs = derived_bracket(E, commutator(X, sigma), psi)
    rhs = rhs + derived_bracket(E, sigma, commutator(X, psi)).scale(rho(X.gdeg, Q + sigma.gdeg))
    return lhs - rhs


def nabla_antisymmetry(E: DegreeOneQAlgebra, X: Derivation) -> Derivation:
    """[X, Q] + rho(|X|,|Q|) nabla X, which vanishes for every X."""
    rho = E.spec.cocycle
    return commutator(X, E.q) + commutator(E.q, X).scale(rho(X.gdeg, E.q.gdeg))
