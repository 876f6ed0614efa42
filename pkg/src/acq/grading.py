"""Grading groups G = Z^r x Z_m1 x ..., bidegrees and commutation factors.

A cocycle is stored as exact bilinear data: a sign form ``S`` (read mod 2)
and one integer matrix per formal parameter, so that

    rho(a, b) = (-1)^<a, S b> * prod_k t_k^<a, B_k b>.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .scalars import Scalar, ScalarRing

__all__ = [
    "GradingSpec",
    "GroupElement",
    "BiDegree",
    "Cocycle",
    "GradingError",
    "evaluate_cocycle",
    "parity",
    "prime_cocycle",
]


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradingSpec:
    free_rank: int = 0
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(self.torsion_orders))
        if self.free_rank < 0:
            raise GradingError("free rank must be non-negative")
        for m in self.torsion_orders:
            if m < 2:
                raise GradingError(f"torsion orders must be >= 2, got {m}")

    @property
    def rank(self) -> int:
        """Number of coordinates (free plus torsion)."""
        return self.free_rank + len(self.torsion_orders)

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        r = self.free_rank
        if len(coords) != self.rank:
            raise GradingError(f"expected {self.rank} coordinates, got {len(coords)}")
        return tuple(coords[:r]) + tuple(c % m for c, m in zip(coords[r:], self.torsion_orders))

    def element(self, *coords) -> GroupElement:
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        return GroupElement(self, self.reduce(coords))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z{m}" for m in self.torsion_orders]
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    group: GradingSpec
    coords: tuple[int, ...]

    @property
    def free_part(self) -> tuple[int, ...]:
        return self.coords[: self.group.free_rank]

    @property
    def torsion_part(self) -> tuple[int, ...]:
        return self.coords[self.group.free_rank:]

    def _check(self, other: GroupElement):
        if self.group != other.group:
            raise GradingError(f"group mismatch: {self.group.describe()} vs {other.group.describe()}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(self.group, self.group.reduce([a + b for a, b in zip(self.coords, other.coords)]))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, self.group.reduce([-a for a in self.coords]))

    def __mul__(self, n: int) -> GroupElement:
        return GroupElement(self.group, self.group.reduce([n * a for a in self.coords]))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


class BiDegree(NamedTuple):
    weight: int
    gdeg: GroupElement

    def __add__(self, other):
        return BiDegree(self.weight + other.weight, self.gdeg + other.gdeg)


def _matrix(rows, n, what) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(v) for v in row) for row in rows)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise GradingError(f"{what} must be a {n}x{n} integer matrix")
    return rows


@dataclass(frozen=True, eq=False)
class Cocycle:
    """A bicharacter G x G -> units of the scalar ring."""

    group: GradingSpec
    ring: ScalarRing
    sign_form: tuple[tuple[int, ...], ...] = ()
    param_forms: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...] = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        n = self.group.rank
        sign = self.sign_form if self.sign_form else [[0] * n for _ in range(n)]
        object.__setattr__(self, "sign_form", _matrix(sign, n, "sign form"))
        forms = []
        for name, mat in self.param_forms:
            forms.append((name, _matrix(mat, n, f"form for {name}")))
        object.__setattr__(self, "param_forms", tuple(forms))
        self._validate()

    def _validate(self):
        n = self.group.rank
        r = self.group.free_rank
        S = self.sign_form
        for i in range(n):
            for j in range(n):
                if (S[i][j] - S[j][i]) % 2:
                    raise GradingError("sign form must be symmetric mod 2")
        seen = set()
        for name, B in self.param_forms:
            if name in seen:
                raise GradingError(f"parameter {name} has two forms")
            seen.add(name)
            spec = self.ring.params[self.ring.index(name)]
            mod = spec.order
            for i in range(n):
                for j in range(n):
                    s = B[i][j] + B[j][i]
                    if (s % mod if mod else s) != 0:
                        raise GradingError(f"form for {name} must be antisymmetric" + (f" mod {mod}" if mod else ""))
        # well-definedness on torsion coordinates
        for k, m in enumerate(self.group.torsion_orders):
            i = r + k
            for j in range(n):
                if (m * S[i][j]) % 2 or (m * S[j][i]) % 2:
                    raise GradingError(f"sign form not well defined on Z{m} coordinate {i}")
                for name, B in self.param_forms:
                    mod = self.ring.params[self.ring.index(name)].order
                    for v in (B[i][j], B[j][i]):
                        bad = (m * v) % mod if mod else v != 0
                        if bad:
                            raise GradingError(f"form for {name} not well defined on Z{m} coordinate {i}")

    # -- evaluation ---------------------------------------------------------
    def exponents(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
        """Return (sign bit, parameter exponents) of rho(a, b) on raw coordinates."""
        n = len(a)
        S = self.sign_form
        s = 0
        for i in range(n):
            ai = a[i]
            if ai:
                row = S[i]
                for j in range(n):
                    if b[j] and row[j]:
                        s += ai * row[j] * b[j]
        exps = [0] * self.ring.nparams
        for name, B in self.param_forms:
            e = 0
            for i in range(n):
                ai = a[i]
                if ai:
                    row = B[i]
                    for j in range(n):
                        if b[j] and row[j]:
                            e += ai * row[j] * b[j]
            exps[self.ring.index(name)] += e
        return s % 2, tuple(exps)

    def value(self, a: tuple[int, ...], b: tuple[int, ...]) -> Scalar:
        key = (a, b)
        hit = self._cache.get(key)
        if hit is None:
            s, exps = self.exponents(a, b)
            hit = self.ring.monomial(-1 if s else 1, exps)
            self._cache[key] = hit
        return hit

    def __call__(self, a: GroupElement, b: GroupElement) -> Scalar:
        if a.group != self.group or b.group != self.group:
            raise GradingError("group mismatch between elements and cocycle")
        return self.value(a.coords, b.coords)

    def self_pairing(self, a: GroupElement) -> int:
        v = self(a, a)
        if v == 1:
            return 1
        if v == -1:
            return -1
        raise GradingError(f"rho(c,c) = {v} is not +-1")

    def __eq__(self, other):
        return (
            isinstance(other, Cocycle)
            and self.group == other.group
            and self.ring == other.ring
            and self.sign_form == other.sign_form
            and dict(self.param_forms) == dict(other.param_forms)
        )

    def __hash__(self):
        return hash((self.group, self.ring, self.sign_form, tuple(sorted(self.param_forms))))


def evaluate_cocycle(rho: Cocycle, a: GroupElement, b: GroupElement) -> Scalar:
    return rho(a, b)


def parity(rho: Cocycle, a: GroupElement) -> int:
    """G-parity (1 - rho(a,a)) / 2."""
    return 0 if rho.self_pairing(a) == 1 else 1


def prime_cocycle(rho: Cocycle) -> Cocycle:
    """The cocycle (-1)^{pq} rho(a, b) on Z x G, the new Z coordinate first."""
    g = rho.group
    n = g.rank
    group = GradingSpec(g.free_rank + 1, g.torsion_orders)

    def widen(mat, corner):
        out = [[0] * (n + 1) for _ in range(n + 1)]
        out[0][0] = corner
        for i in range(n):
            for j in range(n):
                out[i + 1][j + 1] = mat[i][j]
        return out

    return Cocycle(
        group,
        rho.ring,
        widen(rho.sign_form, 1),
        tuple((name, widen(B, 0)) for name, B in rho.param_forms),
    )


def random_group_element(group: GradingSpec, rng, bound: int = 3) -> GroupElement:
    coords = [rng.randint(-bound, bound) for _ in range(group.free_rank)]
    coords += [rng.randrange(m) for m in group.torsion_orders]
    return group.element(coords)


def make_cocycle(group: GradingSpec, ring: ScalarRing, sign: Iterable = (), params: Iterable = ()) -> Cocycle:
    return Cocycle(group, ring, tuple(sign), tuple(params))
