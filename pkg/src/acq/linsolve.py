"""Exact linear systems over a scalar ring, eliminating on unit pivots only.

The coefficient ring is not a field in general (Laurent polynomials in
free parameters), so a row is only used as a pivot row when it has an
invertible entry.  Systems that cannot be decided this way are reported
as ``undetermined`` rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .scalars import Scalar, ScalarError, ScalarRing

SOLVED = "solved"
INCONSISTENT = "inconsistent"
UNDETERMINED = "undetermined"


@dataclass
class LinearResult:
    status: str
    solution: dict = field(default_factory=dict)
    leftover: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == SOLVED


def _unit_inverse(c: Scalar):
    if c.is_rational():
        return c.inv()
    try:
        return c.inv()
    except ScalarError:
        return None


def solve(rows, ring: ScalarRing) -> LinearResult:
    """Solve ``sum_v coeffs[v] * v = rhs`` for each ``(coeffs, rhs)`` in rows.

    Free variables are set to zero.  Row operations are invertible, so a
    zero row with nonzero right-hand side proves inconsistency.
    """
    live = []
    for coeffs, rhs in rows:
        co = {v: c for v, c in coeffs.items() if c}
        live.append((co, rhs if isinstance(rhs, Scalar) else ring.const(rhs)))
    done = []
    while True:
        picked = None
        for idx, (co, rhs) in enumerate(live):
            if not co:
                continue
            # rational pivots first, they keep the entries small
            for prefer_rational in (True, False):
                for v, c in co.items():
                    if prefer_rational and not c.is_rational():
                        continue
                    inv = _unit_inverse(c)
                    if inv is not None:
                        picked = (idx, v, inv)
                        break
                if picked:
                    break
            if picked:
                break
        if picked is None:
            break
        idx, var, inv = picked
        co, rhs = live.pop(idx)
        co = {v: c * inv for v, c in co.items()}
        rhs = rhs * inv

        def eliminate(row):
            rco, rrhs = row
            f = rco.get(var)
            if f is None:
                return row
            out = dict(rco)
            for v, c in co.items():
                nv = out.get(v, ring.zero()) - f * c
                if nv:
                    out[v] = nv
                else:
                    out.pop(v, None)
            return out, rrhs - f * rhs

        live = [eliminate(r) for r in live]
        done = [(pv, eliminate(r)) for pv, r in done]
        done.append((var, (co, rhs)))
    stuck = []
    for co, rhs in live:
        if not co and rhs:
            return LinearResult(INCONSISTENT, leftover=[(co, rhs)])
        if co:
            stuck.append((co, rhs))
    if stuck:
        return LinearResult(UNDETERMINED, leftover=stuck)
    solution = {var: rhs for var, (co, rhs) in done}
    return LinearResult(SOLVED, solution)
