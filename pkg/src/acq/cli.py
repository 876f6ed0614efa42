"""Command-line entry point: ``acq <subcommand> ...``.

``--model`` takes a path to a ``.acq`` file or a built-in name such as
``quantum_plane`` or ``taft(5)``.  Derivation arguments are either names
declared in the model or expressions like ``"x*D[x]"`` whose degrees are
inferred from the first term.  Exit status is 0 when every check passes,
1 on a failed check and 2 on input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .algebra import AlgebraError
from .builtins import list_builtins, load_builtin
from .derivations import DerivationError, check_homological, commutator
from .dsl import ParseError, SuiteItem, evaluate_derivation, evaluate_element, parse_model
from .report import CheckResult, Report
from .suites import CHECKS, run_check, run_suite


def load_model(ref: str):
    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
        model = parse_model(text)
        model.source = None
        return model
    try:
        return load_builtin(ref)
    except KeyError:
        raise ParseError(f"no model file or builtin named {ref!r}", 0, 0) from None


def _spec(model, args, algebroid=False):
    if algebroid:
        E = model.q_algebra()
        if E is None:
            raise ParseError("model declares no algebroid and no forms", 0, 0)
        return E.spec
    return model.spec_for(getattr(args, "forms", False))


def _derivation(model, spec, text):
    X = model.derivations.get(text)
    if X is not None:
        if X.spec is not spec:
            raise ParseError(f"derivation {text} acts on a different algebra", 0, 0)
        return X
    return evaluate_derivation(spec, text, name="arg")


def _emit(args, text: str):
    sys.stdout.write(text)
    if getattr(args, "report", None):
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)


def _single(args, model, name, result: CheckResult, t0) -> int:
    rep = Report(model.name, name, args.seed, [result], time.perf_counter() - t0)
    _emit(args, rep.text())
    return 0 if rep.ok else 1


def _run_named(args, model, check: str) -> int:
    t0 = time.perf_counter()
    res = run_check(model, SuiteItem(check, args.budget), args.seed)
    return _single(args, model, check, res, t0)


# -- subcommands ----------------------------------------------------------------

def cmd_builtins(args):
    lines = [f"{n}: {d}" for n, d in list_builtins()]
    lines.append("families: taft(p), z2n(n)")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_normalize(args):
    model = load_model(args.model)
    f = evaluate_element(_spec(model, args), args.expr)
    _emit(args, f"result: {f}\n")
    return 0


def cmd_bracket(args):
    model = load_model(args.model)
    spec = _spec(model, args)
    X, Y = _derivation(model, spec, args.x), _derivation(model, spec, args.y)
    Z = commutator(X, Y)
    _emit(args, f"result: {Z}\nbidegree: {Z.bidegree_text()}\n")
    return 0


def cmd_apply(args):
    model = load_model(args.model)
    spec = _spec(model, args)
    X = _derivation(model, spec, args.x)
    _emit(args, f"result: {X(evaluate_element(spec, args.f))}\n")
    return 0


def cmd_q_check(args):
    model = load_model(args.model)
    if args.derivation:
        t0 = time.perf_counter()
        X = model.derivations.get(args.derivation)
        if X is None:
            raise ParseError(f"unknown derivation {args.derivation!r}", 0, 0)
        q, rep = check_homological(X)
        res = CheckResult("q-check", "pass" if q is not None else "fail", 1,
                          [(f"[Q,Q] on {k}", v) for k, v in rep.residuals.items()])
        if not rep.parity_odd:
            res.residuals.append(("parity of |Q| is odd", "false"))
            res.status = "fail"
        return _single(args, model, "q-check", res, t0)
    return _run_named(args, model, "q-check")


def cmd_cartan(args):
    model = load_model(args.model)
    if args.x is None:
        return _run_named(args, model, "cartan")
    from .calculus import verify_cartan
    from .suites import _forms

    t0 = time.perf_counter()
    F = _forms(model)
    X, Y = _derivation(model, F.base, args.x), _derivation(model, F.base, args.y or args.x)
    rep = verify_cartan(F, X, Y)
    res = CheckResult("cartan", "pass" if rep.ok else "fail", 1, list(rep.failures().items()))
    return _single(args, model, "cartan", res, t0)


def cmd_forms_eval(args):
    from .calculus import evaluate_form
    from .suites import _forms

    model = load_model(args.model)
    F = _forms(model)
    alpha = evaluate_element(F.ext, args.alpha)
    Xs = [_derivation(model, F.base, x) for x in args.xs]
    _emit(args, f"result: {evaluate_form(F, alpha, Xs)}\n")
    return 0


def cmd_derived_bracket(args):
    from .algebroid import derived_bracket

    model = load_model(args.model)
    E = model.q_algebra()
    spec = _spec(model, args, algebroid=True)
    S = derived_bracket(E, _derivation(model, spec, args.s), _derivation(model, spec, args.t))
    _emit(args, f"result: {S}\nbidegree: {S.bidegree_text()}\n")
    return 0


def cmd_anchor(args):
    from .algebroid import anchor

    model = load_model(args.model)
    E = model.q_algebra()
    spec = _spec(model, args, algebroid=True)
    s = _derivation(model, spec, args.s)
    _emit(args, f"result: {anchor(E, s, evaluate_element(spec, args.f))}\n")
    return 0


def cmd_structure(args):
    return _run_named(args, load_model(args.model), "structure-check")


def cmd_mc(args):
    from .qmod import mc_residual

    model = load_model(args.model)
    if args.x is None:
        return _run_named(args, model, "mc")
    t0 = time.perf_counter()
    E = model.q_algebra()
    X = _derivation(model, _spec(model, args, True), args.x)
    r = mc_residual(E, X)
    res = CheckResult("mc-check", "pass" if r.consistent else "fail", 1)
    res.notes.append(f"residual: {r.residual}")
    res.notes.append(f"Q+X certified: {'yes' if r.deformed_certified else 'no'}")
    if not r.identity_residual.is_zero():
        res.residuals.append(("proof identity", r.identity_residual))
    if r.residual_zero != r.deformed_certified:
        res.residuals.append(("MC vs certification", "disagree"))
    return _single(args, model, "mc-check", res, t0)


def cmd_symmetry(args):
    from .qmod import is_inner, is_symmetry

    model = load_model(args.model)
    if args.x is None:
        return _run_named(args, model, "symmetry")
    t0 = time.perf_counter()
    E = model.q_algebra()
    spec = _spec(model, args, True)
    X = _derivation(model, spec, args.x)
    rep = is_symmetry(E, X)
    res = CheckResult("symmetry-check", "pass" if rep.ok else "fail", 1, list(rep.failures().items()))
    if rep.ok:
        om = _derivation(model, spec, args.omega) if args.omega else None
        inner = is_inner(E, X, om)
        res.notes.append(f"inner: {inner.status}" + (f" omega={inner.omega}" if inner.omega is not None else ""))
    return _single(args, model, "symmetry-check", res, t0)


def cmd_module(args):
    return _run_named(args, load_model(args.model), "modules")


def cmd_suite(args):
    model = load_model(args.model)
    if args.action == "list":
        lines = [f"{n} = " + ", ".join(i.text() for i in items) for n, items in model.suites.items()]
        lines.append("checks: " + ", ".join(sorted(CHECKS)))
        _emit(args, "\n".join(lines) + "\n")
        return 0
    if not args.name:
        raise ParseError("suite run needs a suite name", 0, 0)
    rep = run_suite(model, args.name, args.seed, args.budget)
    _emit(args, rep.text())
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", default="quantum_plane", help="model file or builtin name")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="number of random cases")
    common.add_argument("--report", default=None, help="also write the report to this path")
    common.add_argument("--forms", action="store_true", help="work in the de Rham algebra")

    p = argparse.ArgumentParser(prog="acq", description="checks for almost commutative Q-algebras")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *pos, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        for a in pos:
            if isinstance(a, tuple):
                sp.add_argument(a[0], **a[1])
            else:
                sp.add_argument(a)
        sp.set_defaults(func=fn)
        return sp

    add("builtins", cmd_builtins, help="list built-in models")
    add("normalize", cmd_normalize, "expr", help="normal form of an expression")
    add("bracket", cmd_bracket, "x", "y", help="rho-commutator of two derivations")
    add("apply", cmd_apply, "x", "f", help="apply a derivation to an element")
    add("q-check", cmd_q_check, ("derivation", {"nargs": "?"}), help="certify a homological derivation")
    add("cartan-check", cmd_cartan, ("x", {"nargs": "?"}), ("y", {"nargs": "?"}),
        help="Cartan identities, on given or random derivations")
    add("forms-eval", cmd_forms_eval, "alpha", ("xs", {"nargs": "*"}), help="evaluate a form")
    add("derived-bracket", cmd_derived_bracket, "s", "t", help="derived bracket of two sections")
    add("anchor", cmd_anchor, "s", "f", help="anchor of a section on a base element")
    add("structure-check", cmd_structure, help="structure equations of the algebroid")
    add("mc-check", cmd_mc, ("x", {"nargs": "?"}), help="Maurer-Cartan check")
    sp = add("symmetry-check", cmd_symmetry, ("x", {"nargs": "?"}), help="symmetry and inner check")
    sp.add_argument("--omega", default=None)
    add("module-check", cmd_module, help="adjoint and coadjoint Q-modules")
    sp = add("suite", cmd_suite, ("action", {"choices": ["run", "list"]}), ("name", {"nargs": "?"}),
             help="run or list named suites")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (AlgebraError, DerivationError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
