"""Almost commutative (N, G)-bigraded algebras on ordered generators.

Monomials are exponent vectors over the generators, read in declaration
order.  Every reordering factor is collected when two monomials are
multiplied, so the normal form of a word is unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .grading import BiDegree, Cocycle, GradingSpec, GroupElement
from .scalars import Scalar, ScalarRing

__all__ = [
    "AlgebraError",
    "Relation",
    "GeneratorSpec",
    "AlgebraSpec",
    "Element",
    "normalize",
    "rho_commutator",
    "weight_component",
    "gdeg_component",
    "degree_of_algebra",
]


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    """Relation kind of a single generator: free, nilpotent, power_scalar or invertible."""

    kind: str = "free"
    order: int | None = None
    value: Scalar | None = None

    def __post_init__(self):
        if self.kind not in ("free", "nilpotent", "power_scalar", "invertible"):
            raise AlgebraError(f"unknown relation kind {self.kind!r}")
        if self.kind in ("nilpotent", "power_scalar"):
            if self.order is None or self.order < 2:
                raise AlgebraError(f"{self.kind} needs an order >= 2")
        if self.kind == "power_scalar" and self.value is None:
            raise AlgebraError("power_scalar needs a value")

    @classmethod
    def free(cls):
        return cls("free")

    @classmethod
    def nilpotent(cls, k: int):
        return cls("nilpotent", k)

    @classmethod
    def power_scalar(cls, k: int, value: Scalar):
        return cls("power_scalar", k, value)

    @classmethod
    def invertible(cls):
        return cls("invertible")


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    weight: int
    gdeg: GroupElement
    relation: Relation = Relation()

    @property
    def bidegree(self) -> BiDegree:
        return BiDegree(self.weight, self.gdeg)


class AlgebraSpec:
    """Generators, grading and cocycle of one almost commutative algebra.

    ``vanishing`` is a list of exponent vectors; any monomial dividing by one
    of them is zero.  It is used internally for form algebras over bases
    with nilpotent generators.
    """

    def __init__(self, cocycle: Cocycle, generators: Sequence[GeneratorSpec] = (),
                 vanishing: Iterable[Sequence[int]] = (), name: str = ""):
        self.cocycle = cocycle
        self.grading: GradingSpec = cocycle.group
        self.ring: ScalarRing = cocycle.ring
        self.generators = tuple(generators)
        self.name = name
        self.n = len(self.generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate generator names in {names}")
        self._index = {g.name: i for i, g in enumerate(self.generators)}
        self.vanishing = tuple(tuple(v) for v in vanishing)
        for v in self.vanishing:
            if len(v) != self.n or any(e < 0 for e in v) or not any(v):
                raise AlgebraError(f"bad vanishing monomial {v}")
        self._mul_cache: dict = {}
        self._validate()
        self._prepare()

    # -- setup ---------------------------------------------------------------
    def _validate(self):
        rho = self.cocycle
        kinds = []
        for g in self.generators:
            if g.gdeg.group != self.grading:
                raise AlgebraError(f"generator {g.name} has a degree outside {self.grading.describe()}")
            if g.weight < 0:
                raise AlgebraError(f"generator {g.name} has negative weight")
            odd = rho.self_pairing(g.gdeg) == -1
            rel = g.relation
            if odd:
                if rel.kind in ("power_scalar", "invertible"):
                    raise AlgebraError(f"odd generator {g.name} cannot be {rel.kind}")
                rel = Relation.nilpotent(2)
            elif rel.kind == "power_scalar":
                if not (g.gdeg * rel.order).is_zero():
                    raise AlgebraError(f"{g.name}^{rel.order} = c needs {rel.order}*|{g.name}| = 0")
                if g.weight != 0:
                    raise AlgebraError(f"{g.name}^{rel.order} = c needs weight 0")
                if rel.value.ring != self.ring or not rel.value.is_unit():
                    raise AlgebraError(f"power value for {g.name} must be an invertible scalar")
            elif rel.kind == "invertible" and g.weight != 0:
                raise AlgebraError(f"invertible generator {g.name} needs weight 0")
            kinds.append(rel)
        self.relations = tuple(kinds)

    def _prepare(self):
        rho = self.cocycle
        n = self.n
        self.parities = tuple(1 if rho.self_pairing(g.gdeg) == -1 else 0 for g in self.generators)
        self.gdeg_coords = tuple(g.gdeg.coords for g in self.generators)
        self.weights = tuple(g.weight for g in self.generators)
        # pair[j][i] for j > i: exponents of rho(|g_j|, |g_i|)
        self._pair = [[None] * n for _ in range(n)]
        for j in range(n):
            for i in range(j):
                s, e = rho.exponents(self.gdeg_coords[j], self.gdeg_coords[i])
                if s or any(e):
                    self._pair[j][i] = (s, e)
        self._zero_exp = (0,) * n

    # -- lookup --------------------------------------------------------------
    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise AlgebraError(f"unknown generator {name!r}") from None

    def has(self, name: str) -> bool:
        return name in self._index

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def is_odd(self, i: int) -> bool:
        return bool(self.parities[i])

    # -- elements ------------------------------------------------------------
    def zero(self) -> Element:
        return Element(self, {})

    def one(self) -> Element:
        return self.scalar(self.ring.one())

    def scalar(self, s) -> Element:
        if not isinstance(s, Scalar):
            s = self.ring.const(s)
        return Element(self, {self._zero_exp: s} if s else {})

    def gen(self, name_or_index, power: int = 1) -> Element:
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        if power < 0 and self.relations[i].kind != "invertible":
            raise AlgebraError(f"negative exponent on non-invertible generator {self.generators[i].name}")
        exp = [0] * self.n
        exp[i] = power
        red = self.reduce_monomial(tuple(exp))
        if red is None:
            return self.zero()
        c, e = red
        return Element(self, {e: c})

    def monomial(self, exp: Sequence[int], coeff=1) -> Element:
        exp = tuple(exp)
        for i, e in enumerate(exp):
            if e < 0 and self.relations[i].kind != "invertible":
                raise AlgebraError(f"negative exponent on non-invertible generator {self.generators[i].name}")
        red = self.reduce_monomial(exp)
        if red is None:
            return self.zero()
        c, e = red
        if not isinstance(coeff, Scalar):
            coeff = self.ring.const(coeff)
        return Element(self, {e: c * coeff} if coeff else {})

    # -- monomial arithmetic -------------------------------------------------
    def reduce_monomial(self, exp: tuple[int, ...]):
        """Apply power relations; return (Scalar, exp) or None when zero."""
        coeff = None
        out = None
        for i, rel in enumerate(self.relations):
            e = exp[i]
            kind = rel.kind
            if kind == "nilpotent":
                if e >= rel.order:
                    return None
            elif kind == "power_scalar":
                if e >= rel.order or e < 0:
                    q, r = divmod(e, rel.order)
                    f = rel.value ** q
                    coeff = f if coeff is None else coeff * f
                    if out is None:
                        out = list(exp)
                    out[i] = r
        if out is not None:
            exp = tuple(out)
        for v in self.vanishing:
            if all(e >= k for e, k in zip(exp, v)):
                return None
        return (coeff if coeff is not None else self.ring.one()), exp

    def mono_mul(self, e1: tuple[int, ...], e2: tuple[int, ...]):
        """Product of two normal monomials: (Scalar factor, exp) or None."""
        key = (e1, e2)
        cache = self._mul_cache
        if key in cache:
            return cache[key]
        n = self.n
        sbit = 0
        pexp = None
        pair = self._pair
        for j in range(1, n):
            a = e1[j]
            if not a:
                continue
            row = pair[j]
            for i in range(j):
                b = e2[i]
                if b and row[i] is not None:
                    s, pe = row[i]
                    m = a * b
                    sbit += s * m
                    if any(pe):
                        if pexp is None:
                            pexp = [0] * len(pe)
                        for k, v in enumerate(pe):
                            pexp[k] += m * v
        exp = tuple(x + y for x, y in zip(e1, e2))
        red = self.reduce_monomial(exp)
        if red is None:
            result = None
        else:
            c, exp = red
            f = self.ring.monomial(-1 if sbit % 2 else 1, pexp or (0,) * self.ring.nparams)
            result = (f if c.is_one() else f * c, exp)
        cache[key] = result
        return result

    def mono_gdeg(self, exp: tuple[int, ...]) -> tuple[int, ...]:
        coords = [0] * self.grading.rank
        for e, g in zip(exp, self.gdeg_coords):
            if e:
                for k, c in enumerate(g):
                    coords[k] += e * c
        return self.grading.reduce(coords)

    def mono_weight(self, exp: tuple[int, ...]) -> int:
        return sum(e * w for e, w in zip(exp, self.weights))

    def mono_bidegree(self, exp: tuple[int, ...]) -> BiDegree:
        return BiDegree(self.mono_weight(exp), GroupElement(self.grading, self.mono_gdeg(exp)))

    def render_monomial(self, exp: tuple[int, ...]) -> str:
        parts = []
        for g, e in zip(self.generators, exp):
            if e == 1:
                parts.append(g.name)
            elif e:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts)

    def __repr__(self):
        label = self.name or "AlgebraSpec"
        return f"<{label}: {', '.join(self.names)} over {self.grading.describe()}>"


class Element:
    """A normal-form element: a map from exponent tuples to nonzero Scalars."""

    __slots__ = ("spec", "terms", "_hash")

    def __init__(self, spec: AlgebraSpec, terms: dict):
        self.spec = spec
        self.terms = terms
        self._hash = None

    def _coerce(self, other) -> Element:
        if isinstance(other, Element):
            if other.spec is not self.spec:
                raise AlgebraError("spec mismatch between elements")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return self.spec.scalar(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                v = out[e] + c
                if v:
                    out[e] = v
                else:
                    del out[e]
            else:
                out[e] = c
        return Element(self.spec, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.spec, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> Element:
        if not isinstance(s, Scalar):
            s = self.spec.ring.const(s)
        if not s:
            return self.spec.zero()
        if s.is_one():
            return self
        out = {}
        for e, c in self.terms.items():
            v = c * s
            if v:
                out[e] = v
        return Element(self.spec, out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        spec = self.spec
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                r = spec.mono_mul(e1, e2)
                if r is None:
                    continue
                f, e = r
                v = c1 * c2 * f
                if e in out:
                    out[e] = out[e] + v
                else:
                    out[e] = v
        return Element(spec, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraError("negative powers of elements are not supported")
        out = self.spec.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.spec.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.spec is other.spec and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- grading -------------------------------------------------------------
    def components(self) -> dict:
        """Split into bihomogeneous parts keyed by (weight, gdeg coords)."""
        spec = self.spec
        out: dict = {}
        for e, c in self.terms.items():
            key = (spec.mono_weight(e), spec.mono_gdeg(e))
            out.setdefault(key, {})[e] = c
        return {k: Element(spec, v) for k, v in sorted(out.items())}

    def gdeg_components(self) -> dict:
        spec = self.spec
        out: dict = {}
        for e, c in self.terms.items():
            out.setdefault(spec.mono_gdeg(e), {})[e] = c
        return {k: Element(spec, v) for k, v in sorted(out.items())}

    def bidegree(self) -> BiDegree | None:
        """Common bidegree of all terms, or None if inhomogeneous or zero."""
        comps = self.components()
        if len(comps) != 1:
            return None
        (w, g), = comps.keys()
        return BiDegree(w, GroupElement(self.spec.grading, g))

    def gdeg(self) -> GroupElement | None:
        comps = self.gdeg_components()
        if len(comps) != 1:
            return None
        (g,) = comps.keys()
        return GroupElement(self.spec.grading, g)

    def weights(self) -> set[int]:
        return {self.spec.mono_weight(e) for e in self.terms}

    def is_scalar(self) -> bool:
        return all(not any(e) for e in self.terms)

    def coefficient(self, exp) -> Scalar:
        return self.terms.get(tuple(exp), self.spec.ring.zero())

    # -- rendering -----------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        spec = self.spec
        pieces = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            mono = spec.render_monomial(e)
            if len(c.terms) == 1:
                (pe, pc), = c.terms.items()
                neg = pc < 0
                text = c.render_term(pe, abs(pc))
                if mono:
                    text = mono if text == "1" else f"{text}*{mono}"
            else:
                neg = False
                text = f"({c})"
                if mono:
                    text = f"{text}*{mono}"
            if k == 0:
                pieces.append(("-" if neg else "") + text)
            else:
                pieces.append((" - " if neg else " + ") + text)
        return "".join(pieces)

    def __repr__(self):
        return f"Element({self})"


def normalize(spec: AlgebraSpec, word: Iterable[tuple]) -> Element:
    """Normal form of the ordered word ``[(generator, exponent), ...]``."""
    out = spec.one()
    for g, e in word:
        out = out * spec.gen(g, e)
    return out


def rho_commutator(f: Element, g: Element) -> Element:
    """[f, g]_rho = fg - rho(|f|,|g|) gf, extended by linearity over G-degrees."""
    if f.spec is not g.spec:
        raise AlgebraError("spec mismatch between elements")
    spec = f.spec
    rho = spec.cocycle
    out = f * g
    for a, fa in f.gdeg_components().items():
        for b, gb in g.gdeg_components().items():
            out = out - (gb * fa).scale(rho.value(a, b))
    return out


def weight_component(x: Element, i: int) -> Element:
    spec = x.spec
    return Element(spec, {e: c for e, c in x.terms.items() if spec.mono_weight(e) == i})


def gdeg_component(x: Element, a) -> Element:
    """Component of G-degree ``a`` (a GroupElement or its coordinate tuple)."""
    spec = x.spec
    coords = a.coords if isinstance(a, GroupElement) else spec.grading.reduce(a)
    return Element(spec, {e: c for e, c in x.terms.items() if spec.mono_gdeg(e) == coords})


def degree_of_algebra(spec: AlgebraSpec) -> int:
    """Largest generator weight (0 when there are only weight-0 generators)."""
    return max(spec.weights, default=0)
