"""Named verification checks and the suite runner.

Every check takes ``(model, rng, budget)`` and returns a
:class:`~acq.report.CheckResult`.  Each check gets its own RNG derived from
the suite seed and the check name, so reports do not depend on check order.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from . import randomgen as rg
from .algebra import AlgebraError, Element, degree_of_algebra, normalize, rho_commutator
from .algebroid import (
    DegreeOneQAlgebra,
    build_from_structure_constants,
    characteristic_foliation,
    extract_structure_constants,
    homological_on_generators,
    literal_structure_residuals,
    residuals_vanish,
    structure_equation_residuals,
    verify_antialgebra,
    verify_leibniz_and_anchor,
)
from .calculus import (
    FormAlgebra,
    d_formula_oracle,
    derived_bracket_equals_commutator,
    evaluate_form,
    pairing_oracle,
    verify_cartan,
)
from .derivations import (
    Derivation,
    DerivationError,
    check_homological,
    commutator,
    module_action,
    zero_derivation,
)
from .grading import parity, prime_cocycle
from .qmod import (
    adjoint_module,
    coadjoint_module,
    is_inner,
    is_symmetry,
    mc_residual,
    nabla_antisymmetry,
    nabla_derivation_rule_check,
    symmetry_bracket_property,
)
from .report import FAIL, PASS, UNDETERMINED, CheckResult, Report

CHECKS: dict = {}


def check(name: str, budget: int = 10):
    def wrap(fn):
        fn.check_name = name
        fn.default_budget = budget
        CHECKS[name] = fn
        return fn
    return wrap


class _Collector:
    """Accumulates residuals for one check."""

    def __init__(self, name):
        self.name = name
        self.cases = 0
        self.residuals = []
        self.notes = []
        self.undetermined = False

    def zero(self, label, value):
        if isinstance(value, Derivation):
            bad = not value.is_zero()
        elif isinstance(value, Element):
            bad = bool(value)
        elif isinstance(value, bool):
            bad = not value
        elif isinstance(value, dict):
            bad = any(value.values())
        else:
            bad = bool(value)
        if bad:
            self.residuals.append((label, value if not isinstance(value, bool) else "false"))
        return not bad

    def ok(self, label, cond):
        if not cond:
            self.residuals.append((label, "false"))
        return bool(cond)

    def report(self, report_obj):
        for k, v in report_obj.failures().items():
            self.residuals.append((k, v))

    def result(self) -> CheckResult:
        status = FAIL if self.residuals else (UNDETERMINED if self.undetermined else PASS)
        return CheckResult(self.name, status, self.cases, self.residuals, self.notes)


def _forms(model):
    if model.forms is not None:
        return model.forms
    if getattr(model, "_forms_cache", None) is None:
        model._forms_cache = FormAlgebra(model.algebra)
    return model._forms_cache


def _need_qalg(model, c: _Collector):
    E = model.q_algebra()
    if E is None:
        c.notes.append("model has no algebroid")
        c.undetermined = True
    return E


# -- grading / algebra ----------------------------------------------------------

@check("cocycle", 200)
def check_cocycle(model, rng, budget):
    c = _Collector("cocycle")
    rho = model.cocycle
    G = rho.group
    zero = G.zero()
    for _ in range(budget):
        a, b, d = (rg.random_group_element(G, rng) for _ in range(3))
        c.cases += 1
        c.ok(f"rho(a,b)rho(b,a)=1 a={a} b={b}", rho(a, b) * rho(b, a) == 1)
        c.ok(f"rho(a+b,c) a={a} b={b} c={d}", rho(a + b, d) == rho(a, d) * rho(b, d))
        c.ok(f"rho(a,b+c) a={a} b={b} c={d}", rho(a, b + d) == rho(a, b) * rho(a, d))
        c.ok(f"rho(0,b) b={b}", rho(zero, b) == 1)
        s = rho(d, d)
        c.ok(f"rho(c,c) c={d}", s == 1 or s == -1)
        c.ok(f"parity c={d}", s.is_rational() and Fraction(parity(rho, d)) == (1 - s.rational()) / 2)
    rp = prime_cocycle(rho)
    Gp = rp.group
    for _ in range(max(1, budget // 10)):
        a, b, d = (rg.random_group_element(Gp, rng) for _ in range(3))
        c.ok(f"prime rho(a,b)rho(b,a)=1 a={a} b={b}", rp(a, b) * rp(b, a) == 1)
        c.ok(f"prime rho(a+b,c) a={a} b={b} c={d}", rp(a + b, d) == rp(a, d) * rp(b, d))
    return c.result()


@check("commutativity", 200)
def check_commutativity(model, rng, budget):
    c = _Collector("commutativity")
    A = model.algebra
    for _ in range(budget):
        c.cases += 1
        f, g = rg.random_element(A, rng), rg.random_element(A, rng)
        c.zero(f"[f,g] f={f} g={g}", rho_commutator(f, g))
        h = rg.random_homogeneous(A, rng)
        k = rg.random_homogeneous(A, rng)
        fk = h * k
        if fk and h and k:
            want = (h.bidegree().weight + k.bidegree().weight, h.gdeg() + k.gdeg())
            got = fk.bidegree()
            c.ok(f"bidegree additivity f={h} g={k}", got is not None and (got.weight, got.gdeg) == want)
        # rho-Jacobi for elements, all terms vanish identically
        l = rg.random_homogeneous(A, rng)
        if h and k and l:
            rho = A.cocycle
            jac = (rho_commutator(h, rho_commutator(k, l)).scale(rho(h.gdeg(), l.gdeg()).inv())
                   + rho_commutator(k, rho_commutator(l, h)).scale(rho(k.gdeg(), h.gdeg()).inv())
                   + rho_commutator(l, rho_commutator(h, k)).scale(rho(l.gdeg(), k.gdeg()).inv()))
            c.zero("element rho-Jacobi", jac)
    return c.result()


@check("confluence", 100)
def check_confluence(model, rng, budget):
    c = _Collector("confluence")
    A = model.algebra
    for _ in range(budget):
        c.cases += 1
        word = rg.random_word(A, rng, rng.randint(2, 6))
        left = normalize(A, word)
        parts = [A.gen(n, e) for n, e in word]
        right = A.one()
        for p in reversed(parts):
            right = p * right
        # random bracketing
        mid = A.one()
        chunks = list(parts)
        while len(chunks) > 1:
            i = rng.randrange(len(chunks) - 1)
            chunks[i:i + 2] = [chunks[i] * chunks[i + 1]]
        mid = chunks[0] if chunks else A.one()
        c.zero(f"left vs right word={word}", left - right)
        c.zero(f"left vs random bracketing word={word}", left - mid)
    return c.result()


@check("exchange", 50)
def check_exchange(model, rng, budget):
    """(x^n y^m)(x^n' y^m') = q^(nm'-mn') (x^n' y^m')(x^n y^m)."""
    c = _Collector("exchange")
    A = model.algebra
    if not (A.has("x") and A.has("y") and A.ring.has("q")):
        c.notes.append("needs generators x, y and parameter q")
        c.undetermined = True
        return c.result()
    x, y, q = A.gen("x"), A.gen("y"), A.ring.param("q")
    for _ in range(budget):
        n, m, n2, m2 = (rng.randint(0, 5) for _ in range(4))
        c.cases += 1
        a = x ** n * y ** m
        b = x ** n2 * y ** m2
        c.zero(f"n={n} m={m} n'={n2} m'={m2}", a * b - (b * a).scale(q ** (n * m2 - m * n2)))
    return c.result()


@check("quaternion-table", 1)
def check_quaternions(model, rng, budget):
    c = _Collector("quaternion-table")
    A = model.algebra
    if not (A.has("e1") and A.has("e2")):
        c.notes.append("needs generators e1, e2")
        c.undetermined = True
        return c.result()
    e1, e2 = A.gen("e1"), A.gen("e2")
    e3 = e1 * e2
    c.notes.append("e3 := e1*e2")
    one = A.one()
    c.cases = 9
    c.zero("e3*e1 = e2", e3 * e1 - e2)
    c.zero("e2*e3 = e1", e2 * e3 - e1)
    for nm, e in (("e1", e1), ("e2", e2), ("e3", e3)):
        c.zero(f"{nm}^2 = -1", e * e + one)
    c.zero("e2*e1 = -e1*e2", e2 * e1 + e1 * e2)
    c.zero("(e1*e2)*(e1*e2) = -1", (e1 * e2) * (e1 * e2) + one)
    c.zero("[e1,e2] = 0", rho_commutator(e1, e2))
    c.ok("rho((1,0),(0,1)) = -1", A.cocycle(e1.gdeg(), e2.gdeg()) == -1)
    return c.result()


# -- derivations ------------------------------------------------------------------

@check("jacobi", 50)
def check_jacobi(model, rng, budget):
    c = _Collector("jacobi")
    A = model.algebra
    rho = A.cocycle
    for _ in range(budget):
        X, Y, Z = (rg.random_derivation(A, rng) for _ in range(3))
        c.cases += 1
        jac = (commutator(X, commutator(Y, Z)).scale(rho(X.gdeg, Z.gdeg).inv())
               + commutator(Y, commutator(Z, X)).scale(rho(Y.gdeg, X.gdeg).inv())
               + commutator(Z, commutator(X, Y)).scale(rho(Z.gdeg, Y.gdeg).inv()))
        c.zero(f"rho-Jacobi X={X} Y={Y} Z={Z}", jac)
        c.zero(f"antisymmetry X={X} Y={Y}", commutator(X, Y) + commutator(Y, X).scale(rho(X.gdeg, Y.gdeg)))
        f, g = rg.random_homogeneous(A, rng), rg.random_homogeneous(A, rng)
        if f and g:
            lhs = X(f * g) - X(f) * g - (f * X(g)).scale(rho(X.gdeg, f.gdeg()))
            c.zero(f"Leibniz X={X} f={f} g={g}", lhs)
            XY = commutator(X, Y)
            c.zero(f"[X,Y] on f X={X} Y={Y} f={f}",
                   XY(f) - X(Y(f)) + Y(X(f)).scale(rho(X.gdeg, Y.gdeg)))
            fY = module_action(f, Y)
            rhs = module_action(f, XY).scale(rho(X.gdeg, f.gdeg()))
            if X(f):
                Xf = X(f)
                for comp in Xf.gdeg_components().values():
                    rhs = rhs + module_action(comp, Y)
            c.zero(f"[X,fY] rule X={X} Y={Y} f={f}", commutator(X, fY) - rhs)
    return c.result()


# -- calculus ------------------------------------------------------------------------

def _random_pair(A, rng):
    return rg.random_derivation(A, rng), rg.random_derivation(A, rng)


@check("derham-q", 1)
def check_derham_q(model, rng, budget):
    c = _Collector("derham-q")
    F = _forms(model)
    q, rep = check_homological(F.d)
    c.cases = 1
    if q is None:
        c.residuals.append(("d is not homological", rep.residuals))
    E = DegreeOneQAlgebra(F.ext, F.d, require_certified=False)
    c.ok("(forms, d) certified", E.certified)
    deg = degree_of_algebra(F.ext)
    c.notes.append(f"degree of the form algebra = {deg}")
    c.ok("degree at most 1", deg <= 1)
    return c.result()


@check("cartan", 30)
def check_cartan(model, rng, budget):
    c = _Collector("cartan")
    F = _forms(model)
    A = F.base
    for _ in range(budget):
        X, Y = _random_pair(A, rng)
        c.cases += 1
        rep = verify_cartan(F, X, Y)
        for k, v in rep.failures().items():
            c.residuals.append((f"{k} X={X} Y={Y}", v))
    return c.result()


@check("derived-bracket", 30)
def check_derived_bracket(model, rng, budget):
    c = _Collector("derived-bracket")
    F = _forms(model)
    for _ in range(budget):
        X, Y = _random_pair(F.base, rng)
        c.cases += 1
        rep = derived_bracket_equals_commutator(F, X, Y)
        for k, v in rep.failures().items():
            c.residuals.append((f"{k} X={X} Y={Y}", v))
    return c.result()


@check("forms-eval", 20)
def check_forms_eval(model, rng, budget):
    c = _Collector("forms-eval")
    F = _forms(model)
    A = F.base
    idx = [i for i, j in enumerate(F.d_index) if j is not None]
    rho = A.cocycle
    for _ in range(budget):
        X, Y = _random_pair(A, rng)
        f = rg.random_element(A, rng)
        c.cases += 1
        df = F.d(F.embed(f))
        c.zero(f"<X|df> = X(f) X={X} f={f}", evaluate_form(F, df, [X]) - X(f))
        c.zero(f"i_X(df) = X(f) X={X} f={f}", F.interior(X)(df) - F.embed(X(f)))
        c.zero(f"L_X f = X(f) X={X} f={f}", F.lie_direct(X)(F.embed(f)) - F.embed(X(f)))
        c.zero(f"L_X df = d X(f) X={X} f={f}", F.lie_direct(X)(df) - F.d(F.embed(X(f))))
        c.zero(f"section round trip X={X}", F.section_to_derivation(F.interior(X)) - X)
        if idx:
            i, j = rng.choice(idx), rng.choice(idx)
            w = F.dgen(A.generators[i].name) * F.dgen(A.generators[j].name)
            val = evaluate_form(F, w, [X, Y])
            c.zero(f"pairing oracle X={X} Y={Y} i={i} j={j}", val - pairing_oracle(F, X, Y, i, j))
            # rho-antisymmetry of the evaluation
            sw = evaluate_form(F, w, [Y, X]).scale(rho(X.gdeg, Y.gdeg))
            c.zero(f"antisymmetry X={X} Y={Y}", val + sw)
            h = rg.random_homogeneous(A, rng)
            if h:
                lin = evaluate_form(F, w, [module_action(h, X), Y]) - h * val
                c.zero(f"left linearity h={h}", lin)
            a = F.embed(rg.random_element(A, rng)) * F.dgen(A.generators[i].name)
            lhs, rhs = d_formula_oracle(F, a, [X, Y])
            c.zero(f"d formula alpha={a} X={X} Y={Y}", lhs - rhs)
    return c.result()


# -- algebroid ---------------------------------------------------------------------

@check("q-check", 1)
def check_q(model, rng, budget):
    c = _Collector("q-check")
    E = _need_qalg(model, c)
    if E is None:
        return c.result()
    q, rep = check_homological(E.q)
    c.cases = 1
    c.ok("parity of |Q| is odd", rep.parity_odd)
    for name, res in rep.residuals.items():
        c.residuals.append((f"[Q,Q] on {name}", res))
    return c.result()


def _sections(E, rng, n):
    secs = list(E.basis_sections().values())
    out = []
    for _ in range(n):
        s = rg.random_derivation(E.spec, rng, weight=-1)
        if rng.random() < 0.3 and secs:
            s = rng.choice(secs)
        out.append(s)
    return out


@check("antialgebra", 30)
def check_antialgebra(model, rng, budget):
    c = _Collector("antialgebra")
    E = _need_qalg(model, c)
    if E is None:
        return c.result()
    for _ in range(budget):
        s, t, w = _sections(E, rng, 3)
        c.cases += 1
        c.report(verify_antialgebra(E, [s, t], [(s, t, w)]))
    return c.result()


@check("anchor", 30)
def check_anchor(model, rng, budget):
    c = _Collector("anchor")
    E = _need_qalg(model, c)
    if E is None:
        return c.result()
    for _ in range(budget):
        s, t = _sections(E, rng, 2)
        f = rg.random_homogeneous(E.spec, rng, weight=0)
        if not f:
            f = E.spec.one()
        c.cases += 1
        c.report(verify_leibniz_and_anchor(E, [(s, t, f)]))
    return c.result()


@check("structure-check", 1)
def check_structure(model, rng, budget):
    c = _Collector("structure-check")
    E = _need_qalg(model, c)
    if E is None:
        return c.result()
    Q = E.q
    c.cases = 1
    sc = extract_structure_constants(Q)
    rebuilt = build_from_structure_constants(E.spec, sc)
    c.zero("round trip Q -> constants -> Q", rebuilt - Q)
    t1, t2 = structure_equation_residuals(E.spec, sc)
    vanish = residuals_vanish((t1, t2))
    hom = homological_on_generators(Q)
    if vanish != hom:
        c.residuals.append(("equivalence broken", f"tables vanish={vanish} [Q,Q]=0={hom}"))
    for k, v in t1.items():
        if v:
            c.residuals.append((f"equation (i) {k}", v))
    for k, v in t2.items():
        if v:
            c.residuals.append((f"equation (ii) {k}", v))
    return c.result()


@check("structure-random", 20)
def check_structure_random(model, rng, budget):
    """Both sides of the equivalence on random constants; passes when they always agree."""
    c = _Collector("structure-random")
    outcomes = {True: 0, False: 0}
    literal_mismatch = 0
    for _ in range(budget):
        spec, sc = rg.random_structure_constants(rng)
        c.cases += 1
        Q = build_from_structure_constants(spec, sc)
        vanish = residuals_vanish(structure_equation_residuals(spec, sc))
        hom = homological_on_generators(Q)
        outcomes[hom] += 1
        if vanish != hom:
            c.residuals.append(("equivalence broken", f"A={sc.A} C={sc.C}"))
        rhoG = _ghost_cocycle(spec)
        if residuals_vanish(literal_structure_residuals(spec, sc, rhoG)) != hom:
            literal_mismatch += 1
        sc2 = extract_structure_constants(Q)
        c.zero("round trip", build_from_structure_constants(spec, sc2) - Q)
    c.notes.append(f"certified={outcomes[True]} rejected={outcomes[False]}")
    c.notes.append(f"literal cyclic form disagreed on {literal_mismatch} of {c.cases}")
    return c.result()


def _ghost_cocycle(spec):
    def rhoG(a, b):
        ga = spec.generators[spec.index(a)].gdeg
        gb = spec.generators[spec.index(b)].gdeg
        return -spec.cocycle(ga, gb)
    return rhoG


@check("foliation", 1)
def check_foliation_ck(model, rng, budget):
    c = _Collector("foliation")
    E = _need_qalg(model, c)
    if E is None:
        return c.result()
    gens, rep = characteristic_foliation(E)
    c.cases = max(1, len(rep.pairs))
    c.notes.append(f"anchor generators: {', '.join(str(g) for g in gens) or 'none'}")
    if rep.status == "fail":
        for k, v in rep.pairs.items():
            if v.status == "fail":
                c.residuals.append((f"pair {k}", v.detail))
        if not c.residuals:
            c.residuals.append(("closure", "fail"))
    elif rep.status != "pass":
        c.undetermined = True
        c.notes.append(f"closure {rep.status}")
    return c.result()


# -- Q-modules, deformations and symmetries -----------------------------------------

@check("modules", 20)
def check_modules(model, rng, budget):
    c = _Collector("modules")
    E = _need_qalg(model, c)
    if E is None:
        return c.result()
    spec = E.spec
    M = adjoint_module(E)
    c.zero("nabla(Q)", M.nabla(E.q))
    samples = list(E.basis_sections().values())
    for _ in range(budget):
        c.cases += 1
        X = rg.random_derivation(spec, rng)
        Y = rg.random_derivation(spec, rng)
        samples.append(X)
        f = rg.random_homogeneous(spec, rng)
        if f:
            c.report(M.check_leibniz([(f, X)]))
        c.zero(f"derivation rule X={X} Y={Y}", nabla_derivation_rule_check(E, X, Y))
        W = rg.random_derivation(spec, rng, weight=0)
        c.zero(f"[X,Q] = -rho nabla X, X={W}", nabla_antisymmetry(E, W))
    c.report(M.check_flat(samples))
    try:
        F = FormAlgebra(spec)
    except AlgebraError as exc:
        c.notes.append(f"coadjoint module skipped: {exc}")
        return c.result()
    C = coadjoint_module(F, E.q)
    c.zero("nabla(1)", C.nabla(F.ext.one()))
    forms = []
    for _ in range(budget):
        w = rg.random_homogeneous(F.ext, rng)
        a = rg.random_element(spec, rng)
        forms.append(w)
        c.report(C.check_leibniz([(a, w)]))
    c.report(C.check_flat(forms))
    return c.result()


def _mc_candidates(E, rng, n):
    Q = E.q
    spec = E.spec
    out = [zero_derivation(spec, Q.gdeg, 1)]
    if not Q.is_zero():
        out.append(Q)
        out.append(Q.scale(Fraction(-1, 2)))
    while len(out) < n:
        X = rg.random_derivation(spec, rng, weight=1, gdeg=Q.gdeg.coords)
        if rng.random() < 0.3 and not Q.is_zero():
            X = Q.scale(rng.choice((1, -1, 2)))
        out.append(X)
    return out[:n]


@check("mc", 20)
def check_mc(model, rng, budget):
    c = _Collector("mc")
    E = _need_qalg(model, c)
    if E is None:
        return c.result()
    good = 0
    for X in _mc_candidates(E, rng, budget):
        c.cases += 1
        r = mc_residual(E, X)
        c.zero(f"proof identity X={X}", r.identity_residual)
        if r.residual_zero != r.deformed_certified:
            c.residuals.append((f"MC vs certification X={X}",
                                f"residual={r.residual} certified={r.deformed_certified}"))
        good += r.residual_zero
    c.notes.append(f"solutions={good} non-solutions={c.cases - good}")
    return c.result()


def _random_symmetries(E, fixtures, rng, n):
    out = []
    for _ in range(n):
        X = None
        if fixtures:
            for F in fixtures:
                if rng.random() < 0.6:
                    piece = F.scale(rg.random_scalar(E.spec.ring, rng, params=False))
                    X = piece if X is None else X + piece
        if rng.random() < 0.6 or X is None:
            om = rg.random_derivation(E.spec, rng, weight=-1, gdeg=None)
            inner = commutator(E.q, om)
            if not inner.is_zero() and (X is None or inner.gdeg == X.gdeg):
                X = inner if X is None else X + inner
        if X is None or X.is_zero() or X.weight != 0:
            X = zero_derivation(E.spec, E.spec.grading.zero(), 0)
        out.append(X)
    return out


@check("symmetry", 20)
def check_symmetry(model, rng, budget):
    c = _Collector("symmetry")
    E = _need_qalg(model, c)
    if E is None:
        return c.result()
    fixtures = [X for X in model.symmetries if X.spec is E.spec]
    for X in fixtures:
        rep = is_symmetry(E, X)
        for k, v in rep.failures().items():
            c.residuals.append((f"fixture {X.name} {k}", v))
    secs = list(E.basis_sections().values())
    ok_fix = [X for X in fixtures if is_symmetry(E, X).ok]
    for X in ok_fix + [zero_derivation(E.spec, E.spec.grading.zero(), 0)]:
        for s in secs:
            for t in secs:
                c.zero(f"bracket property X={X} s={s} t={t}", symmetry_bracket_property(E, X, s, t))
    syms = _random_symmetries(E, ok_fix, rng, 2 * budget)
    for k in range(budget):
        X, Y = syms[2 * k], syms[2 * k + 1]
        c.cases += 1
        for Z in (X, Y):
            for kk, v in is_symmetry(E, Z).failures().items():
                c.residuals.append((f"random symmetry {Z} {kk}", v))
        XY = commutator(X, Y)
        for kk, v in is_symmetry(E, XY).failures().items():
            c.residuals.append((f"closure [X,Y] X={X} Y={Y}", v))
        if secs:
            s, t = rng.choice(secs), rng.choice(secs)
            c.zero(f"bracket property X={X}", symmetry_bracket_property(E, X, s, t))
    # inner symmetries: supplied omega and the ansatz search
    found = 0
    tries = min(budget, 5)
    for _ in range(tries):
        om = rg.random_derivation(E.spec, rng, weight=-1, terms=1)
        X = commutator(E.q, om)
        if X.is_zero():
            X = zero_derivation(E.spec, E.spec.grading.zero(), 0)
        c.ok("inner with supplied omega", is_inner(E, X, om).status == "pass")
        found += is_inner(E, X).status == "pass"
    c.notes.append(f"inner search found omega for {found} of {tries}")
    c.notes.append("L_X on sections is taken to be [X, -]")
    return c.result()


@check("roundtrip", 1)
def check_roundtrip(model, rng, budget):
    from .dsl import parse_model, print_model

    c = _Collector("roundtrip")
    c.cases = 1
    text = print_model(model)
    again = parse_model(text)
    c.ok("print(parse(print(m))) = print(m)", print_model(again) == text)
    for name, X in model.derivations.items():
        c.ok(f"derivation {name} survives", str(again.derivations[name]) == str(X) and again.derivations[name].gdeg.coords == X.gdeg.coords)
    src = getattr(model, "source", None)
    if src is not None:
        c.ok("shipped text is canonical", src == text)
    return c.result()


# -- runner -----------------------------------------------------------------------

def run_check(model, item, seed: int, budget: int | None = None) -> CheckResult:
    fn = CHECKS.get(item.check)
    if fn is None:
        raise KeyError(f"unknown check {item.check!r}")
    rng = random.Random(f"{seed}:{item.check}")
    b = budget if budget is not None else (item.budget if item.budget is not None else fn.default_budget)
    try:
        res = fn(model, rng, b)
    except (AlgebraError, DerivationError) as exc:
        res = CheckResult(item.check, FAIL, 0, [("error", str(exc))])
    res.expect_fail = item.expect_fail
    return res


def run_suite(model, name: str = "default", seed: int = 0, budget: int | None = None) -> Report:
    if name not in model.suites:
        raise KeyError(f"unknown suite {name!r}; model has {', '.join(model.suites) or 'none'}")
    t0 = time.perf_counter()
    rep = Report(model.name, name, seed)
    for item in model.suites[name]:
        rep.checks.append(run_check(model, item, seed, budget))
    rep.seconds = time.perf_counter() - t0
    return rep
