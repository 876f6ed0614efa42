"""rho-derivations given by their values on generators.

A derivation is extended to monomials by the twisted Leibniz rule

    X(g_1 ... g_m) = sum_j rho(|X|, |g_1| + ... + |g_{j-1}|) g_1 ... X(g_j) ... g_m,

and to negative powers of invertible generators through X(g g^-1) = 0.
Images are validated against every generator relation when a derivation
is built, so evaluation never depends on a choice of representative.

Fact used by :func:`check_homological`: a rho-derivation that vanishes on
all generators vanishes on the whole algebra, so [X, X] = 0 can be decided
on generators alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .algebra import AlgebraError, AlgebraSpec, Element
from .grading import GroupElement
from .linsolve import INCONSISTENT, SOLVED, solve
from .scalars import Scalar

__all__ = [
    "DerivationError",
    "Derivation",
    "QStructure",
    "HomologicalReport",
    "apply",
    "commutator",
    "module_action",
    "check_homological",
    "weight_decompose",
    "check_foliation",
    "check_morphism",
    "partial",
]


class DerivationError(ValueError):
    pass


class Derivation:
    """A rho-derivation of G-degree ``gdeg`` and weight ``weight``.

    ``weight`` may be None for a derivation mixing several weights.
    """

    __slots__ = ("spec", "gdeg", "weight", "images", "name", "_cache")

    def __init__(self, spec: AlgebraSpec, gdeg: GroupElement, weight: int | None,
                 images: Mapping, name: str = "", validate: bool = True):
        self.spec = spec
        if gdeg.group != spec.grading:
            raise DerivationError("derivation degree is outside the grading group")
        self.gdeg = gdeg
        self.weight = weight
        self.name = name
        imgs = [spec.zero()] * spec.n
        for key, val in images.items():
            i = key if isinstance(key, int) else spec.index(key)
            if not isinstance(val, Element):
                val = spec.scalar(val)
            if val.spec is not spec:
                raise DerivationError("image lives in a different algebra")
            imgs[i] = val
        self.images = tuple(imgs)
        self._cache: dict = {}
        if validate:
            self._check_degrees()
            self._check_relations()

    # -- validation ----------------------------------------------------------
    def _check_degrees(self):
        spec = self.spec
        n = max(spec.weights, default=0)
        if self.weight is not None and self.weight < -n and any(self.images):
            raise DerivationError(
                f"weight {self.weight} is below -{n}: such derivations vanish on a degree-{n} algebra")
        for i, img in enumerate(self.images):
            g = spec.generators[i]
            want_g = (g.gdeg + self.gdeg).coords
            for e in img.terms:
                found_g = spec.mono_gdeg(e)
                found_w = spec.mono_weight(e)
                if found_g != want_g or (self.weight is not None and found_w != g.weight + self.weight):
                    want_w = "*" if self.weight is None else g.weight + self.weight
                    raise DerivationError(
                        f"image of {g.name}: expected bidegree ({want_w}, {tuple(want_g)}), "
                        f"found ({found_w}, {found_g}) in term {spec.render_monomial(e) or '1'}")

    def _check_relations(self):
        for name, res in self.relation_residuals().items():
            if res:
                raise DerivationError(f"images are not compatible with the relation of {name}: residual {res}")

    def relation_residuals(self) -> dict:
        spec = self.spec
        out = {}
        for i, rel in enumerate(spec.relations):
            g = spec.generators[i].name
            if rel.kind in ("nilpotent", "power_scalar"):
                out[f"{g}^{rel.order}"] = self._power_image(i, rel.order)
            elif rel.kind == "invertible":
                gi = spec.gen(i, -1)
                x = spec.gen(i)
                out[f"{g}*{g}^-1"] = self._power_image(i, 1) * gi + self.left_factor(x) * x * self._power_image(i, -1)
        for v in spec.vanishing:
            out[spec.render_monomial(v)] = self._expand(v)
        return out

    # -- evaluation ----------------------------------------------------------
    def left_factor(self, f: Element) -> Scalar:
        """rho(|X|, |f|) for G-homogeneous f (1 for f = 0)."""
        g = f.gdeg()
        if g is None:
            if not f:
                return self.spec.ring.one()
            raise DerivationError("left factor needs a G-homogeneous element")
        return self.spec.cocycle.value(self.gdeg.coords, g.coords)

    def _power_image(self, i: int, e: int) -> Element:
        """X(g_i^e), expanded by the Leibniz rule."""
        spec = self.spec
        rho = spec.cocycle
        g = spec.generators[i].gdeg
        if e == 0:
            return spec.zero()
        if e > 0:
            base = self.images[i]
            step = g
            left1 = spec.gen(i)
        else:
            # X(g^-1) = -rho(|X|,|g|)^{-1} g^-1 X(g) g^-1, and rho^{-1}(a,b) = rho(b,a)
            gi = spec.gen(i, -1)
            base = -(gi * self.images[i] * gi).scale(rho.value(g.coords, self.gdeg.coords))
            step = -g
            left1 = gi
            e = -e
        out = spec.zero()
        if not base:
            return out
        left = spec.one()
        for t in range(e):
            right = left1 ** (e - 1 - t)
            out = out + (left * base * right).scale(rho.value(self.gdeg.coords, (step * t).coords))
            left = left * left1
        return out

    def _expand(self, exp: tuple[int, ...]) -> Element:
        spec = self.spec
        rho = spec.cocycle
        out = spec.zero()
        prefix = [0] * spec.n
        for j, e in enumerate(exp):
            if e:
                img = self._power_image(j, e)
                if img:
                    left = spec.monomial(prefix) if any(prefix) else spec.one()
                    suffix = [0] * spec.n
                    suffix[j + 1:] = exp[j + 1:]
                    right = spec.monomial(suffix) if any(suffix) else spec.one()
                    fac = rho.value(self.gdeg.coords, spec.mono_gdeg(tuple(prefix)))
                    out = out + (left * img * right).scale(fac)
                prefix[j] = e
        return out

    def on_monomial(self, exp: tuple[int, ...]) -> Element:
        hit = self._cache.get(exp)
        if hit is None:
            hit = self._expand(exp)
            self._cache[exp] = hit
        return hit

    def __call__(self, f) -> Element:
        if not isinstance(f, Element):
            f = self.spec.scalar(f)
        if f.spec is not self.spec:
            raise DerivationError("spec mismatch between derivation and element")
        out = self.spec.zero()
        for e, c in f.terms.items():
            if any(e):
                out = out + self.on_monomial(e).scale(c)
        return out

    # -- linear structure ----------------------------------------------------
    def _combine(self, other: Derivation, sign: int) -> Derivation:
        if other.spec is not self.spec:
            raise DerivationError("spec mismatch between derivations")
        if other.gdeg != self.gdeg:
            if not any(other.images):
                return self
            if not any(self.images):
                return other if sign > 0 else -other
            raise DerivationError(f"cannot add derivations of G-degree {self.gdeg} and {other.gdeg}")
        weight = self.weight if self.weight == other.weight else None
        if not any(other.images):
            weight = self.weight
        elif not any(self.images):
            weight = other.weight
        imgs = {i: a + b if sign > 0 else a - b for i, (a, b) in enumerate(zip(self.images, other.images))}
        return Derivation(self.spec, self.gdeg, weight, imgs, validate=False)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Derivation(self.spec, self.gdeg, self.weight, {i: -a for i, a in enumerate(self.images)},
                          validate=False)

    def scale(self, s) -> Derivation:
        return Derivation(self.spec, self.gdeg, self.weight,
                          {i: a.scale(s) for i, a in enumerate(self.images)}, validate=False)

    def is_zero(self) -> bool:
        return not any(self.images)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.spec is other.spec and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def bidegree_text(self) -> str:
        w = "mixed" if self.weight is None else str(self.weight)
        return f"weight={w} gdeg={self.gdeg}"

    def __str__(self):
        spec = self.spec
        parts = [f"{g.name} -> {img}" for g, img in zip(spec.generators, self.images) if img]
        return "{" + ", ".join(parts) + "}" if parts else "0"

    def __repr__(self):
        return f"Derivation({self})"


def apply(X: Derivation, f: Element) -> Element:
    return X(f)


def zero_derivation(spec: AlgebraSpec, gdeg: GroupElement | None = None, weight: int | None = 0) -> Derivation:
    return Derivation(spec, gdeg if gdeg is not None else spec.grading.zero(), weight, {}, validate=False)


def commutator(X: Derivation, Y: Derivation) -> Derivation:
    """[X, Y]_rho = X Y - rho(|X|,|Y|) Y X, computed on generators."""
    if X.spec is not Y.spec:
        raise DerivationError("spec mismatch between derivations")
    spec = X.spec
    fac = spec.cocycle.value(X.gdeg.coords, Y.gdeg.coords)
    imgs = {}
    for i in range(spec.n):
        a = X(Y.images[i])
        b = Y(X.images[i])
        imgs[i] = a - b.scale(fac)
    weight = None if X.weight is None or Y.weight is None else X.weight + Y.weight
    return Derivation(spec, X.gdeg + Y.gdeg, weight, imgs, validate=False)


def module_action(f: Element, X: Derivation) -> Derivation:
    """(fX)(g) = f X(g); f must be G-homogeneous."""
    if f.spec is not X.spec:
        raise DerivationError("spec mismatch between element and derivation")
    if not f:
        return zero_derivation(X.spec, X.gdeg, X.weight)
    g = f.gdeg()
    if g is None:
        raise DerivationError("module action needs a G-homogeneous coefficient")
    ws = f.weights()
    weight = None
    if X.weight is not None and len(ws) == 1:
        weight = X.weight + next(iter(ws))
    imgs = {i: f * a for i, a in enumerate(X.images)}
    return Derivation(X.spec, g + X.gdeg, weight, imgs, validate=False)


def partial(spec: AlgebraSpec, name) -> Derivation:
    """Algebraic partial derivative d/dx: x -> 1 and other generators -> 0.

    Built without relation checks; it is only used inside coordinate formulas.
    """
    i = name if isinstance(name, int) else spec.index(name)
    g = spec.generators[i]
    return Derivation(spec, -g.gdeg, -g.weight, {i: spec.one()}, validate=False)


# -- homological structures ---------------------------------------------------

@dataclass
class HomologicalReport:
    parity_odd: bool
    squares_to_zero: bool
    residuals: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.parity_odd and self.squares_to_zero


@dataclass
class QStructure:
    q: Derivation
    parity_odd: bool = True
    squares_to_zero: bool = True

    @property
    def certified(self) -> bool:
        return self.parity_odd and self.squares_to_zero


def check_homological(X: Derivation):
    """Return (QStructure or None, HomologicalReport).

    [X, X] is evaluated on generators only (see the module docstring).
    """
    spec = X.spec
    zero = X.is_zero()
    odd = zero or spec.cocycle.self_pairing(X.gdeg) == -1
    sq = commutator(X, X)
    residuals = {g.name: img for g, img in zip(spec.generators, sq.images) if img}
    rep = HomologicalReport(odd, not residuals, residuals)
    if rep.certified:
        return QStructure(X, True, True), rep
    return None, rep


def weight_decompose(X: Derivation) -> dict:
    """Split X into weight-homogeneous parts.

    Parts below -degree of the algebra must vanish; a nonzero one raises.
    """
    spec = X.spec
    parts: dict = {}
    for i, img in enumerate(X.images):
        w0 = spec.weights[i]
        for e, c in img.terms.items():
            w = spec.mono_weight(e) - w0
            parts.setdefault(w, {}).setdefault(i, {})[e] = c
    n = max(spec.weights, default=0)
    out = {}
    for w in sorted(parts):
        imgs = {i: Element(spec, t) for i, t in parts[w].items()}
        if w < -n:
            raise DerivationError(f"weight {w} component violates the lower bound -{n}")
        out[w] = Derivation(spec, X.gdeg, w, imgs, validate=False)
    return out


# -- foliations ---------------------------------------------------------------

def monomials_of_degree(spec: AlgebraSpec, weight, gdeg: tuple, box) -> list:
    """Exponent vectors inside ``box`` (list of ranges) with the given bidegree."""
    out = []
    for exp in itertools.product(*box):
        if spec.mono_gdeg(exp) != gdeg:
            continue
        if weight is not None and spec.mono_weight(exp) != weight:
            continue
        if spec.reduce_monomial(exp) is None:
            continue
        out.append(exp)
    return out


def ansatz_box(spec: AlgebraSpec, hint=(), slack: int = 1) -> list:
    reach = [0] * spec.n
    for exp in hint:
        for i, e in enumerate(exp):
            reach[i] = max(reach[i], abs(e))
    box = []
    for i, rel in enumerate(spec.relations):
        r = reach[i] + slack
        if rel.kind in ("nilpotent", "power_scalar"):
            box.append(range(0, rel.order))
        elif rel.kind == "invertible":
            box.append(range(-r, r + 1))
        else:
            box.append(range(0, r + 1))
    return box


@dataclass
class MembershipResult:
    status: str  # pass | fail | undetermined
    coefficients: list = field(default_factory=list)
    detail: str = ""


def solve_membership(target: Derivation, F: list, slack: int = 1) -> MembershipResult:
    """Decide whether target = sum_k c_k F_k with c_k in the algebra.

    Generators on which every F_k vanishes must already be killed by the
    target; otherwise membership is disproved outright.  The remaining
    search runs over an ansatz of homogeneous coefficient monomials and can
    only confirm membership; failing to find one is reported as undetermined.
    """
    spec = target.spec
    if target.is_zero():
        return MembershipResult("pass", [spec.zero() for _ in F])
    for i in range(spec.n):
        if target.images[i] and not any(Fk.images[i] for Fk in F):
            return MembershipResult("fail", detail=f"target moves {spec.generators[i].name}, no member of F does")
    hint = [e for img in target.images for e in img.terms]
    hint += [e for Fk in F for img in Fk.images for e in img.terms]
    box = ansatz_box(spec, hint, slack)
    unknowns = []
    for k, Fk in enumerate(F):
        if Fk.is_zero():
            continue
        gd = (target.gdeg - Fk.gdeg).coords
        w = None if target.weight is None or Fk.weight is None else target.weight - Fk.weight
        if w is not None and w < 0:
            continue
        for exp in monomials_of_degree(spec, w, gd, box):
            unknowns.append((k, exp))
    # columns: (generator, monomial) coefficients of sum_k c_k F_k(g)
    rows: dict = {}
    ring = spec.ring
    for var in unknowns:
        k, exp = var
        mono = spec.monomial(exp)
        for i, img in enumerate(F[k].images):
            if not img:
                continue
            prod = mono * img
            for e, c in prod.terms.items():
                rows.setdefault((i, e), {})[var] = c
    for i, img in enumerate(target.images):
        for e in img.terms:
            rows.setdefault((i, e), {})
    system = [(co, target.images[i].coefficient(e)) for (i, e), co in sorted(rows.items())]
    res = solve(system, ring)
    if res.status == SOLVED:
        coeffs = [spec.zero() for _ in F]
        for (k, exp), val in res.solution.items():
            if val:
                coeffs[k] = coeffs[k] + spec.monomial(exp, val)
        # confirm by recomputation
        total = None
        for c, Fk in zip(coeffs, F):
            if c:
                piece = module_action(c, Fk) if c.gdeg() is not None else None
                if piece is None:
                    return MembershipResult("undetermined", detail="inhomogeneous coefficient")
                total = piece if total is None else total + piece
        if total is not None and total.images == target.images:
            return MembershipResult("pass", coeffs)
        return MembershipResult("undetermined", detail="solution did not recompute")
    if res.status == INCONSISTENT:
        return MembershipResult("undetermined", detail="not found within ansatz")
    return MembershipResult("undetermined", detail="no unit pivot available")


@dataclass
class FoliationReport:
    status: str
    pairs: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "pass"


def check_foliation(spec: AlgebraSpec, F: list, slack: int = 1) -> FoliationReport:
    """Check closure of the module span of F under the rho-commutator."""
    pairs = {}
    for i in range(len(F)):
        for j in range(i, len(F)):
            br = commutator(F[i], F[j])
            pairs[(i, j)] = solve_membership(br, F, slack)
    statuses = {r.status for r in pairs.values()}
    if "fail" in statuses:
        status = "fail"
    elif "undetermined" in statuses:
        status = "undetermined"
    else:
        status = "pass"
    return FoliationReport(status, pairs)


# -- morphisms ----------------------------------------------------------------

def _unit_monomial_inverse(f: Element):
    if len(f.terms) != 1:
        return None
    (e, c), = f.terms.items()
    spec = f.spec
    try:
        cinv = c.inv()
    except Exception:
        return None
    for i, k in enumerate(e):
        if k and spec.relations[i].kind not in ("invertible", "power_scalar"):
            return None
    inv = spec.one()
    for i in reversed(range(spec.n)):
        k = e[i]
        if k:
            rel = spec.relations[i]
            if rel.kind == "invertible":
                inv = inv * spec.gen(i, -k)
            else:
                p = (-k) % rel.order
                inv = inv * spec.gen(i, p).scale(rel.value.inv() ** ((k + p) // rel.order))
    inv = inv.scale(cinv)
    return inv if (f * inv) == 1 else None


def extend_map(phi: Mapping, src: AlgebraSpec, dst: AlgebraSpec):
    """Multiplicative extension of generator images to a function src -> dst."""
    images = [phi.get(g.name, dst.zero()) for g in src.generators]
    inverses = {}

    def on_mono(exp):
        out = dst.one()
        for i, k in enumerate(exp):
            if k > 0:
                out = out * images[i] ** k
            elif k < 0:
                if i not in inverses:
                    inverses[i] = _unit_monomial_inverse(images[i])
                    if inverses[i] is None:
                        raise AlgebraError(f"image of {src.generators[i].name} is not invertible")
                out = out * inverses[i] ** (-k)
        return out

    def run(f: Element) -> Element:
        out = dst.zero()
        for e, c in f.terms.items():
            out = out + on_mono(e).scale(c)
        return out

    return run


@dataclass
class MorphismReport:
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v == "pass" for v, _ in self.checks.values())


def check_morphism(phi: Mapping, src: AlgebraSpec, dst: AlgebraSpec, Qsrc=None, Qdst=None) -> MorphismReport:
    rep = MorphismReport()
    if src.grading != dst.grading or src.cocycle != dst.cocycle:
        rep.checks["grading"] = ("fail", "source and target use different G or rho")
        return rep
    for name in phi:
        src.index(name)
    imgs = {g.name: phi.get(g.name, dst.zero()) for g in src.generators}
    for g in src.generators:
        img = imgs[g.name]
        bad = [e for e in img.terms if dst.mono_gdeg(e) != g.gdeg.coords or dst.mono_weight(e) != g.weight]
        rep.checks[f"degree {g.name}"] = ("fail", str(img)) if bad else ("pass", "")
    rho = src.cocycle
    for j, gj in enumerate(src.generators):
        for i in range(j):
            gi = src.generators[i]
            a, b = imgs[gj.name], imgs[gi.name]
            res = a * b - (b * a).scale(rho(gj.gdeg, gi.gdeg))
            rep.checks[f"exchange {gj.name},{gi.name}"] = ("fail", str(res)) if res else ("pass", "")
    for i, rel in enumerate(src.relations):
        g = src.generators[i].name
        img = imgs[g]
        if rel.kind == "nilpotent":
            res = img ** rel.order
        elif rel.kind == "power_scalar":
            res = img ** rel.order - dst.scalar(rel.value)
        elif rel.kind == "invertible":
            res = dst.zero() if _unit_monomial_inverse(img) is not None else dst.one()
        else:
            continue
        rep.checks[f"relation {g}"] = ("fail", str(res)) if res else ("pass", "")
    if Qsrc is not None and Qdst is not None:
        qs = Qsrc.q if isinstance(Qsrc, QStructure) else Qsrc
        qd = Qdst.q if isinstance(Qdst, QStructure) else Qdst
        ext = extend_map(imgs, src, dst)
        for i, g in enumerate(src.generators):
            res = qd(imgs[g.name]) - ext(qs.images[i])
            rep.checks[f"intertwine {g.name}"] = ("fail", str(res)) if res else ("pass", "")
    return rep
