"""Exact coefficients: rationals extended by named Laurent parameters.

A parameter is either a free invertible symbol (``q``, ``lam``, ``tau``) or a
root of unity of order ``p``.  Primitive roots are reduced modulo the
cyclotomic polynomial, non-primitive ones only modulo ``t^p - 1``.
The coefficient ring is commutative; every noncommutative effect lives in
:mod:`acq.algebra`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import sympy

__all__ = ["ParameterSpec", "ScalarRing", "Scalar", "ScalarError"]


class ScalarError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ParameterSpec:
    """A formal parameter.  ``order`` is ``None`` for a free invertible one."""

    name: str
    order: int | None = None
    primitive: bool = True

    def __post_init__(self):
        if not self.name.isidentifier():
            raise ValueError(f"bad parameter name {self.name!r}")
        if self.order is not None and self.order < 2:
            raise ValueError(f"root of unity {self.name} needs order >= 2, got {self.order}")

    @property
    def is_root(self) -> bool:
        return self.order is not None


@lru_cache(maxsize=None)
def _cyclotomic_tail(p: int) -> tuple[int, ...]:
    """Coefficients c_0..c_{n-1} with t^n = -(c_0 + c_1 t + ...) mod Phi_p."""
    t = sympy.Symbol("t")
    coeffs = sympy.cyclotomic_poly(p, t, polys=True).all_coeffs()[::-1]
    return tuple(int(c) for c in coeffs[:-1])


class ScalarRing:
    """The coefficient ring for one algebra: Q[t_1^{+-1}, ...] modulo root relations."""

    __slots__ = ("params", "_index", "_zero_exp", "_hash")

    def __init__(self, params: Iterable[ParameterSpec] = ()):
        self.params = tuple(params)
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate parameter names in {names}")
        self._index = {p.name: i for i, p in enumerate(self.params)}
        self._zero_exp = (0,) * len(self.params)
        self._hash = hash(self.params)

    def __eq__(self, other):
        return isinstance(other, ScalarRing) and self.params == other.params

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ScalarRing({', '.join(p.name for p in self.params)})"

    @property
    def nparams(self) -> int:
        return len(self.params)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown parameter {name!r}") from None

    def has(self, name: str) -> bool:
        return name in self._index

    # -- constructors -------------------------------------------------------
    def zero(self) -> Scalar:
        return Scalar(self, {})

    def one(self) -> Scalar:
        return Scalar(self, {self._zero_exp: Fraction(1)})

    def const(self, value) -> Scalar:
        value = Fraction(value)
        return Scalar(self, {self._zero_exp: value} if value else {})

    def param(self, name: str, power: int = 1) -> Scalar:
        exp = [0] * self.nparams
        exp[self.index(name)] = power
        return self.monomial(1, exp)

    def monomial(self, coeff, exps: Iterable[int]) -> Scalar:
        coeff = Fraction(coeff)
        if not coeff:
            return self.zero()
        return Scalar(self, self.reduce({tuple(exps): coeff}))

    # -- canonical reduction ------------------------------------------------
    def reduce(self, terms: Mapping[tuple, Fraction]) -> dict[tuple, Fraction]:
        """Reduce root-of-unity exponents; drop zero coefficients."""
        out: dict[tuple, Fraction] = {}
        for exp, c in terms.items():
            if c:
                out[exp] = out.get(exp, 0) + c
        for i, spec in enumerate(self.params):
            if spec.order is None:
                continue
            out = self._reduce_root(out, i, spec)
        return {e: c for e, c in out.items() if c}

    @staticmethod
    def _reduce_root(terms, i, spec):
        p = spec.order
        tmp: dict[tuple, Fraction] = {}
        for exp, c in terms.items():
            if 0 <= exp[i] < p:
                key = exp
            else:
                key = exp[:i] + (exp[i] % p,) + exp[i + 1:]
            tmp[key] = tmp.get(key, 0) + c
        if not spec.primitive:
            return tmp
        tail = _cyclotomic_tail(p)
        n = len(tail)
        if n == p:
            return tmp
        # fold exponents >= n down, highest first
        for e in range(p - 1, n - 1, -1):
            for exp in [k for k in tmp if k[i] == e]:
                c = tmp.pop(exp)
                if not c:
                    continue
                for j, cj in enumerate(tail):
                    if cj:
                        k2 = exp[:i] + (e - n + j,) + exp[i + 1:]
                        tmp[k2] = tmp.get(k2, 0) - c * cj
        return tmp


class Scalar:
    """An element of a :class:`ScalarRing` in canonical form.  Immutable."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: ScalarRing, terms: dict[tuple, Fraction]):
        # callers guarantee canonical (reduced, no zero) terms
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(self.ring._zero_exp) == 1

    def is_rational(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring._zero_exp in self.terms)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ScalarError(f"{self} is not rational")
        return self.terms.get(self.ring._zero_exp, Fraction(0))

    def is_unit(self) -> bool:
        try:
            self.inv()
        except ScalarError:
            return False
        return True

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ScalarError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

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
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Scalar(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self.ring.zero()
        if len(other.terms) == 1 and len(self.terms) == 1:
            (e1, c1), = self.terms.items()
            (e2, c2), = other.terms.items()
            exp = tuple(a + b for a, b in zip(e1, e2))
            return Scalar(self.ring, self.ring.reduce({exp: c1 * c2}))
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                out[exp] = out.get(exp, 0) + c1 * c2
        return Scalar(self.ring, self.ring.reduce(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inv(self) -> Scalar:
        """Inverse of a monomial scalar ``c * t^e``.

        For root-of-unity parameters the canonical representative of a
        monomial may have several terms (``zeta^2 = -1 - zeta`` for order 3);
        those are recognised by trying the finitely many root powers.
        """
        if not self.terms:
            raise ScalarError("division by zero scalar")
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return Scalar(self.ring, self.ring.reduce({tuple(-x for x in e): 1 / c}))
        roots = [i for i, p in enumerate(self.ring.params) if p.is_root]
        if roots:
            ranges = [range(self.ring.params[i].order) for i in roots]
            for powers in itertools.product(*ranges):
                exp = [0] * self.ring.nparams
                for i, k in zip(roots, powers):
                    exp[i] = k
                probe = self * self.ring.monomial(1, exp)
                if len(probe.terms) == 1:
                    return probe.inv() * self.ring.monomial(1, exp)
        raise ScalarError(f"cannot invert non-monomial scalar {self}")

    # -- comparison / hashing -----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items())

    # -- rendering ----------------------------------------------------------
    def render_term(self, exp, c) -> str:
        """Render ``c * t^exp`` (c may be negative)."""
        factors = []
        for spec, k in zip(self.ring.params, exp):
            if k == 1:
                factors.append(spec.name)
            elif k:
                factors.append(f"{spec.name}^{k}")
        mag = abs(c)
        sign = "-" if c < 0 else ""
        if not factors:
            return sign + str(mag)
        body = "*".join(factors)
        if mag != 1:
            body = f"{mag}*{body}"
        return sign + body

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            text = self.render_term(e, c)
            if i == 0:
                pieces.append(text)
            elif text.startswith("-"):
                pieces.append(" - " + text[1:])
            else:
                pieces.append(" + " + text)
        return "".join(pieces)

    def __repr__(self):
        return f"Scalar({self})"
