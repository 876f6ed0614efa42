"""The ``.acq`` model-file format: parser, canonical printer and evaluator.

A model file is line oriented; ``#`` starts a comment.  Statements::

    model NAME
    description "free text"
    grading Z^2 x Z/3
    parameter q
    parameter zeta root 3            # primitive root of unity
    parameter w root 4 nonprimitive
    cocycle sign [[0,1],[1,0]]
    cocycle q [[0,1],[-1,0]]
    generator x weight=0 gdeg=(1,0) free
    generator y weight=0 gdeg=(0,1) nilpotent 3
    generator e weight=0 gdeg=(1,0) power 2 = -1
    generator u weight=0 gdeg=(1,0) invertible
    forms
    derivation Q gdeg=(1,0,0) weight=1 = tau*eta_u*u*D[u]
    derivation L over=forms gdeg=(0,0) weight=0 = x*D[x] + dx*D[dx]
    algebroid Q
    symmetry L
    suite default = cocycle/200, cartan/30, q-check!fail

Expressions use numbers, parameters, generators, ``d<gen>`` form symbols
(with ``forms``), ``D[gen]`` derivation symbols, ``+ - * / ^`` and
parentheses; ``/`` takes an integer divisor and ``^`` an integer exponent.
A derivation is a sum of terms ``f*D[g]`` whose images are evaluated with
the algebra product, so the source is never reordered.  ``forms`` builds the
de Rham algebra of the declared algebra; ``d`` then names its differential
and ``over=forms`` places a derivation on it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraError, AlgebraSpec, Element, GeneratorSpec, Relation
from .derivations import Derivation, DerivationError
from .grading import Cocycle, GradingError, GradingSpec
from .scalars import ParameterSpec, ScalarRing

__all__ = [
    "ParseError",
    "ModelFile",
    "Model",
    "parse_model",
    "print_model",
    "parse_expression",
    "print_expression",
    "evaluate_element",
    "evaluate_derivation",
    "SuiteItem",
]


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


# -- expressions ---------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Name:
    name: str
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class DSym:
    name: str
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Mul:
    # factors with an operator each: ("*", node) or ("/", Num)
    factors: tuple


@dataclass(frozen=True)
class Sum:
    # (sign, term) pairs, sign in {+1, -1}
    terms: tuple


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str, line: int, offset: int):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        if m.group(1):
            out.append(("int", m.group(1), offset + m.start(1) + 1))
        elif m.group(2):
            out.append(("name", m.group(2), offset + m.start(2) + 1))
        elif m.group(3):
            out.append(("op", m.group(3), offset + m.start(3) + 1))
    out.append(("end", "", offset + len(text) + 1))
    return out


class _ExprParser:
    def __init__(self, text: str, line: int, offset: int):
        self.toks = _tokenize(text, line, offset)
        self.i = 0
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            self.fail(f"expected {value!r}, found {t[1] or 'end of line'!r}", t)
        return t

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        terms = []
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        terms.append((sign, self.term()))
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            terms.append((sign, self.term()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def term(self):
        factors = [("*", self.factor())]
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            if op == "/":
                t = self.peek()
                if t[0] != "int":
                    self.fail("division needs an integer divisor")
                self.take()
                if int(t[1]) == 0:
                    self.fail("division by zero", t)
                factors.append(("/", Num(int(t[1]), t[2])))
            else:
                factors.append(("*", self.factor()))
        if len(factors) == 1:
            return factors[0][1]
        return Mul(tuple(factors))

    def factor(self):
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            t = self.peek()
            if t[0] != "int":
                self.fail("exponent must be an integer")
            self.take()
            return Pow(base, -int(t[1]) if neg else int(t[1]))
        return base

    def atom(self):
        t = self.take()
        if t[0] == "int":
            return Num(int(t[1]), t[2])
        if t[0] == "name":
            if t[1] == "D" and self.peek()[1] == "[":
                self.take()
                g = self.take()
                if g[0] != "name":
                    self.fail("expected a generator name inside D[...]", g)
                self.expect("]")
                return DSym(g[1], t[2])
            return Name(t[1], t[2])
        if t[1] == "(":
            node = self.expr()
            self.expect(")")
            return node
        self.fail(f"unexpected {t[1] or 'end of line'!r}", t)


def parse_expression(text: str, line: int = 1, offset: int = 0):
    return _ExprParser(text, line, offset).parse()


def _prec(node) -> int:
    if isinstance(node, Sum):
        return 1
    if isinstance(node, Mul):
        return 2
    if isinstance(node, Pow):
        return 3
    return 4


def print_expression(node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, DSym):
        return f"D[{node.name}]"
    if isinstance(node, Pow):
        b = print_expression(node.base)
        if _prec(node.base) <= 3:
            b = f"({b})"
        return f"{b}^{node.exp}"
    if isinstance(node, Mul):
        out = []
        for k, (op, f) in enumerate(node.factors):
            s = print_expression(f)
            if _prec(f) <= 2:
                s = f"({s})"
            out.append(s if k == 0 else f"{op}{s}")
        return "".join(out)
    if isinstance(node, Sum):
        out = []
        for k, (sign, t) in enumerate(node.terms):
            s = print_expression(t)
            if _prec(t) <= 1:
                s = f"({s})"
            if k == 0:
                out.append(s if sign > 0 else f"-{s}")
            else:
                out.append((" + " if sign > 0 else " - ") + s)
        return "".join(out)
    raise TypeError(node)


# -- evaluation ---------------------------------------------------------------

class _DerivValue:
    """Images of a partially built derivation: generator index -> Element."""

    def __init__(self, spec, images):
        self.spec = spec
        self.images = images

    def combine(self, other, sign):
        imgs = dict(self.images)
        for i, v in other.images.items():
            imgs[i] = imgs.get(i, self.spec.zero()) + (v if sign > 0 else -v)
        return _DerivValue(self.spec, imgs)

    def left(self, f):
        return _DerivValue(self.spec, {i: f * v for i, v in self.images.items()})


def _eval(node, spec: AlgebraSpec, line: int, allow_d: bool):
    ring = spec.ring
    if isinstance(node, Num):
        return spec.scalar(node.value)
    if isinstance(node, Name):
        if spec.has(node.name):
            return spec.gen(node.name)
        if ring.has(node.name):
            return spec.scalar(ring.param(node.name))
        raise ParseError(f"unknown identifier {node.name!r}", line, node.col)
    if isinstance(node, DSym):
        if not allow_d:
            raise ParseError("D[...] is only allowed in derivation images", line, node.col)
        if not spec.has(node.name):
            raise ParseError(f"unknown generator {node.name!r} in D[...]", line, node.col)
        return _DerivValue(spec, {spec.index(node.name): spec.one()})
    if isinstance(node, Pow):
        if node.exp >= 0:
            return _eval(node.base, spec, line, False) ** node.exp
        b = node.base
        if isinstance(b, Num) and b.value:
            return spec.scalar(Fraction(1, b.value ** -node.exp))
        if isinstance(b, Name):
            if ring.has(b.name) and not spec.has(b.name):
                return spec.scalar(ring.param(b.name, node.exp))
            if spec.has(b.name) and spec.relations[spec.index(b.name)].kind == "invertible":
                return spec.gen(b.name, node.exp)
        col = getattr(b, "col", 0)
        raise ParseError("negative exponents need an invertible generator or a parameter", line, col)
    if isinstance(node, Mul):
        acc = None
        for op, f in node.factors:
            if op == "/":
                acc = acc.scale(Fraction(1, f.value)) if not isinstance(acc, _DerivValue) else \
                    _DerivValue(spec, {i: v.scale(Fraction(1, f.value)) for i, v in acc.images.items()})
                continue
            val = _eval(f, spec, line, allow_d)
            if acc is None:
                acc = val
            elif isinstance(acc, _DerivValue):
                raise ParseError("D[...] must be the last factor of a term", line, getattr(f, "col", 0))
            elif isinstance(val, _DerivValue):
                acc = val.left(acc)
            else:
                acc = acc * val
        return acc
    if isinstance(node, Sum):
        acc = None
        for sign, t in node.terms:
            val = _eval(t, spec, line, allow_d)
            if acc is None:
                if isinstance(val, _DerivValue):
                    acc = val if sign > 0 else _DerivValue(spec, {}).combine(val, -1)
                else:
                    acc = val if sign > 0 else -val
            elif isinstance(acc, _DerivValue) != isinstance(val, _DerivValue):
                raise ParseError("cannot add an algebra element and a derivation", line, 0)
            elif isinstance(acc, _DerivValue):
                acc = acc.combine(val, sign)
            else:
                acc = acc + val if sign > 0 else acc - val
        return acc
    raise TypeError(node)


def evaluate_element(spec: AlgebraSpec, text_or_node, line: int = 1) -> Element:
    node = parse_expression(text_or_node, line) if isinstance(text_or_node, str) else text_or_node
    val = _eval(node, spec, line, False)
    return val


def _infer_degree(spec: AlgebraSpec, images: dict):
    for i, img in sorted(images.items()):
        for e in sorted(img.terms):
            g = spec.generators[i]
            w = spec.mono_weight(e) - g.weight
            gd = spec.grading.element([a - b for a, b in zip(spec.mono_gdeg(e), g.gdeg.coords)])
            return w, gd
    return 0, None


def evaluate_derivation(spec: AlgebraSpec, text_or_node, gdeg=None, weight=None, line: int = 1,
                        name: str = "", col: int = 0) -> Derivation:
    """Evaluate ``sum f*D[g]``; degrees are inferred from the first term when omitted."""
    node = parse_expression(text_or_node, line) if isinstance(text_or_node, str) else text_or_node
    val = _eval(node, spec, line, True)
    if isinstance(val, Element):
        if val.is_zero():
            val = _DerivValue(spec, {})
        else:
            raise ParseError("a derivation must be a sum of terms f*D[g]", line, col)
    images = {i: v for i, v in val.images.items() if v}
    w0, g0 = _infer_degree(spec, images)
    if weight is None:
        weight = w0
    if gdeg is None:
        gdeg = g0 if g0 is not None else spec.grading.zero()
    # degree bookkeeping, reported with both bidegrees
    for i, img in sorted(images.items()):
        g = spec.generators[i]
        want_w = g.weight + weight
        want_g = (g.gdeg + gdeg).coords
        for e in sorted(img.terms):
            found = (spec.mono_weight(e), spec.mono_gdeg(e))
            if found != (want_w, want_g):
                fg = spec.grading.element(found[1])
                raise ParseError(
                    f"derivation {name or '?'}: image of {g.name} has bidegree "
                    f"({found[0]}, {fg}) but ({want_w}, {spec.grading.element(want_g)}) was expected",
                    line, col)
    try:
        return Derivation(spec, gdeg, weight, images, name=name)
    except DerivationError as exc:
        raise ParseError(f"derivation {name or '?'}: {exc}", line, col) from None


# -- model files --------------------------------------------------------------

@dataclass
class SuiteItem:
    check: str
    budget: int | None = None
    expect_fail: bool = False

    def text(self) -> str:
        s = self.check
        if self.budget is not None:
            s += f"/{self.budget}"
        if self.expect_fail:
            s += "!fail"
        return s


@dataclass
class ModelFile:
    """Syntax-level content of a model file, in statement order per section."""

    name: str = ""
    description: str = ""
    free_rank: int = 0
    torsion: tuple = ()
    parameters: list = field(default_factory=list)  # (name, order|None, primitive)
    sign: list = field(default_factory=list)
    forms_params: list = field(default_factory=list)  # (name, matrix)
    generators: list = field(default_factory=list)  # (name, weight, gdeg, kind, order, value-node)
    forms: bool = False
    derivations: list = field(default_factory=list)  # (name, over_forms, gdeg, weight, node, line)
    algebroid: str | None = None
    symmetries: list = field(default_factory=list)
    suites: list = field(default_factory=list)  # (name, [SuiteItem])
    lines: dict = field(default_factory=dict, repr=False, compare=False)


class Model:
    """Evaluated model: algebra, optional form algebra, derivations and algebroid."""

    def __init__(self, mf: ModelFile):
        from .calculus import FormAlgebra

        self.file = mf
        self.name = mf.name
        ln = mf.lines
        try:
            self.grading = GradingSpec(mf.free_rank, tuple(mf.torsion))
            self.ring = ScalarRing([ParameterSpec(n, o, p) for n, o, p in mf.parameters])
        except (GradingError, ValueError) as exc:
            raise ParseError(str(exc), ln.get("grading", 0), 1) from None
        try:
            self.cocycle = Cocycle(self.grading, self.ring, tuple(map(tuple, mf.sign)),
                                   tuple((n, tuple(map(tuple, m))) for n, m in mf.forms_params))
        except (GradingError, ValueError) as exc:
            raise ParseError(str(exc), ln.get("cocycle", 0), 1) from None
        gens = []
        scal = AlgebraSpec(self.cocycle, [], name="scalars")
        for name, w, gd, kind, order, vnode in mf.generators:
            line = ln.get(("generator", name), 0)
            try:
                g = self.grading.element(gd)
            except GradingError as exc:
                raise ParseError(f"generator {name}: {exc}", line, 1) from None
            if kind == "power":
                val = _eval(vnode, scal, line, False)
                if not val.is_scalar():
                    raise ParseError(f"power value of {name} must be a scalar", line, 1)
                rel = Relation.power_scalar(order, val.coefficient((0,) * 0))
            elif kind == "nilpotent":
                rel = Relation.nilpotent(order)
            elif kind == "invertible":
                rel = Relation.invertible()
            else:
                rel = Relation.free()
            gens.append(GeneratorSpec(name, w, g, rel))
        try:
            self.algebra = AlgebraSpec(self.cocycle, gens, name=mf.name)
        except (AlgebraError, GradingError, ValueError) as exc:
            raise ParseError(str(exc), ln.get("generators", 0), 1) from None
        self.forms = None
        if mf.forms:
            try:
                self.forms = FormAlgebra(self.algebra)
            except AlgebraError as exc:
                raise ParseError(str(exc), ln.get("forms", 0), 1) from None
        self.derivations: dict = {}
        if self.forms is not None:
            self.derivations["d"] = self.forms.d
        for name, over, gd, w, node, line in mf.derivations:
            spec = self.forms.ext if over else self.algebra
            if over and self.forms is None:
                raise ParseError("over=forms needs a forms statement", line, 1)
            g = spec.grading.element(gd) if len(gd) == spec.grading.rank else None
            if g is None:
                raise ParseError(f"derivation {name}: gdeg needs {spec.grading.rank} coordinates", line, 1)
            self.derivations[name] = evaluate_derivation(spec, node, g, w, line, name)
        self.algebroid = None
        if mf.algebroid is not None:
            from .algebroid import DegreeOneQAlgebra

            line = ln.get("algebroid", 0)
            if mf.algebroid not in self.derivations:
                raise ParseError(f"unknown derivation {mf.algebroid!r}", line, 10)
            Q = self.derivations[mf.algebroid]
            try:
                self.algebroid = DegreeOneQAlgebra(Q.spec, Q, name=mf.name, require_certified=False)
            except (AlgebraError, DerivationError) as exc:
                raise ParseError(str(exc), line, 1) from None
        for s in mf.symmetries:
            if s not in self.derivations:
                raise ParseError(f"unknown derivation {s!r}", ln.get(("symmetry", s), 0), 10)
        self.symmetries = [self.derivations[s] for s in mf.symmetries]
        self.suites = {n: items for n, items in mf.suites}

    def spec_for(self, over_forms: bool = False) -> AlgebraSpec:
        if over_forms:
            if self.forms is None:
                raise ParseError("model has no forms")
            return self.forms.ext
        return self.algebra

    def q_algebra(self):
        """The degree-1 algebra checked by algebroid suites: declared, else de Rham."""
        if self.algebroid is not None:
            return self.algebroid
        if self.forms is not None:
            from .algebroid import DegreeOneQAlgebra

            return DegreeOneQAlgebra(self.forms.ext, self.forms.d, name=f"forms({self.name})")
        return None


_INT_LIST = re.compile(r"^\(\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\)$")


def _parse_tuple(text, line, col):
    m = _INT_LIST.match(text.strip())
    if not m:
        raise ParseError(f"expected an integer tuple, found {text!r}", line, col)
    return tuple(int(v) for v in m.group(1).split(",")) if m.group(1) else ()


def _parse_matrix(text, line, col):
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ParseError("expected a matrix [[..],[..]]", line, col)
    inner = t[1:-1].strip()
    if not inner:
        return []
    rows = re.findall(r"\[([^\[\]]*)\]", inner)
    if re.sub(r"\[[^\[\]]*\]", "", inner).replace(",", "").strip():
        raise ParseError("malformed matrix", line, col)
    try:
        return [[int(v) for v in r.split(",")] if r.strip() else [] for r in rows]
    except ValueError:
        raise ParseError("matrix entries must be integers", line, col) from None


def _keyvals(words: list, line: int, cols: list, allowed: set):
    kv = {}
    rest = []
    for w, c in zip(words, cols):
        if "=" in w:
            k, v = w.split("=", 1)
            if k not in allowed:
                raise ParseError(f"unknown option {k!r}", line, c)
            kv[k] = (v, c + len(k) + 1)
        else:
            rest.append((w, c))
    return kv, rest


def _words(text: str):
    """Split on whitespace outside brackets, returning (word, 1-based col)."""
    out, depth, start = [], 0, None
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch.isspace() and depth == 0:
            if start is not None:
                out.append((text[start:i], start + 1))
                start = None
        elif start is None:
            start = i
    if start is not None:
        out.append((text[start:], start + 1))
    return out


_IDENT = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")
_GRADING = re.compile(r"^Z\^(\d+)$|^Z/(\d+)$")


def _ident(word, line, col, what="name"):
    if not _IDENT.match(word):
        raise ParseError(f"bad {what} {word!r}", line, col)
    return word


def parse_model(text: str, build: bool = True):
    """Parse a model file; returns a :class:`Model` (or the bare :class:`ModelFile`)."""
    mf = ModelFile()
    seen_grading = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        ws = _words(body)
        head, hc = ws[0]
        args = ws[1:]
        words = [w for w, _ in args]
        cols = [c for _, c in args]

        def need(n, usage):
            if len(words) < n:
                raise ParseError(f"usage: {usage}", lineno, len(body) + 1)

        if head == "model":
            need(1, "model NAME")
            mf.name = _ident(words[0], lineno, cols[0])
        elif head == "description":
            rest = body[hc + len("description"):].strip()
            if not (len(rest) >= 2 and rest[0] == rest[-1] == '"'):
                raise ParseError("description must be a quoted string", lineno, hc + 12)
            mf.description = rest[1:-1]
        elif head == "grading":
            need(1, "grading Z^r x Z/m ...")
            seen_grading = True
            mf.lines["grading"] = lineno
            free, tors = 0, []
            parts = " ".join(words).split(" x ")
            for p in parts:
                m = _GRADING.match(p.strip())
                if not m:
                    raise ParseError(f"bad grading factor {p.strip()!r}", lineno, cols[0])
                if m.group(1) is not None:
                    if tors or free:
                        raise ParseError("the free factor Z^r must come first", lineno, cols[0])
                    free = int(m.group(1))
                else:
                    tors.append(int(m.group(2)))
            mf.free_rank, mf.torsion = free, tuple(tors)
        elif head == "parameter":
            need(1, "parameter NAME [root P [nonprimitive]]")
            name = _ident(words[0], lineno, cols[0])
            if name in ("sign", "D", "d"):
                raise ParseError(f"reserved name {name!r}", lineno, cols[0])
            order, prim = None, True
            if len(words) > 1:
                if words[1] != "root" or len(words) < 3 or not words[2].isdigit():
                    raise ParseError("expected 'root P'", lineno, cols[1])
                order = int(words[2])
                if len(words) == 4 and words[3] == "nonprimitive":
                    prim = False
                elif len(words) > 3:
                    raise ParseError(f"unexpected {words[3]!r}", lineno, cols[3])
            mf.parameters.append((name, order, prim))
        elif head == "cocycle":
            need(2, "cocycle sign|PARAM MATRIX")
            mf.lines["cocycle"] = lineno
            mat = _parse_matrix(" ".join(words[1:]), lineno, cols[1])
            if words[0] == "sign":
                mf.sign = mat
            else:
                if words[0] not in [p[0] for p in mf.parameters]:
                    raise ParseError(f"unknown parameter {words[0]!r}", lineno, cols[0])
                mf.forms_params.append((words[0], mat))
        elif head == "generator":
            need(4, "generator NAME weight=W gdeg=(..) RELATION")
            name = _ident(words[0], lineno, cols[0])
            kv, rest = _keyvals(words[1:3], lineno, cols[1:3], {"weight", "gdeg"})
            if "weight" not in kv or "gdeg" not in kv:
                raise ParseError("generator needs weight= and gdeg=", lineno, cols[1])
            try:
                w = int(kv["weight"][0])
            except ValueError:
                raise ParseError("weight must be an integer", lineno, kv["weight"][1]) from None
            gd = _parse_tuple(kv["gdeg"][0], lineno, kv["gdeg"][1])
            rel = words[3:]
            kind, order, vnode = rel[0], None, None
            if kind in ("free", "invertible") and len(rel) == 1:
                pass
            elif kind == "nilpotent" and len(rel) == 2 and rel[1].isdigit():
                order = int(rel[1])
            elif kind == "power" and len(rel) >= 4 and rel[1].isdigit() and rel[2] == "=":
                order = int(rel[1])
                vtext = body[cols[6] - 1:]
                vnode = parse_expression(vtext, lineno, cols[6] - 1)
            else:
                raise ParseError("relation must be free | invertible | nilpotent K | power K = VALUE",
                                 lineno, cols[3])
            if kind in ("nilpotent", "power") and order < 2:
                raise ParseError("relation order must be at least 2", lineno, cols[4])
            if name in [g[0] for g in mf.generators]:
                raise ParseError(f"duplicate generator {name!r}", lineno, cols[0])
            mf.generators.append((name, w, gd, kind, order, vnode))
            mf.lines[("generator", name)] = lineno
            mf.lines.setdefault("generators", lineno)
        elif head == "forms":
            if words:
                raise ParseError("forms takes no arguments", lineno, cols[0])
            mf.forms = True
            mf.lines["forms"] = lineno
        elif head == "derivation":
            if "=" not in words:
                raise ParseError("usage: derivation NAME [over=forms] gdeg=(..) weight=W = EXPR",
                                 lineno, len(body) + 1)
            k = words.index("=")
            name = _ident(words[0], lineno, cols[0])
            kv, rest = _keyvals(words[1:k], lineno, cols[1:k], {"gdeg", "weight", "over"})
            if rest:
                raise ParseError(f"unexpected {rest[0][0]!r}", lineno, rest[0][1])
            if "gdeg" not in kv or "weight" not in kv:
                raise ParseError("derivation needs gdeg= and weight=", lineno, cols[0])
            over = False
            if "over" in kv:
                if kv["over"][0] != "forms":
                    raise ParseError("over= only accepts 'forms'", lineno, kv["over"][1])
                over = True
            gd = _parse_tuple(kv["gdeg"][0], lineno, kv["gdeg"][1])
            try:
                w = int(kv["weight"][0])
            except ValueError:
                raise ParseError("weight must be an integer", lineno, kv["weight"][1]) from None
            if name == "d" or name in [d[0] for d in mf.derivations]:
                raise ParseError(f"duplicate derivation {name!r}", lineno, cols[0])
            start = cols[k]
            node = parse_expression(body[start:], lineno, start)
            mf.derivations.append((name, over, gd, w, node, lineno))
        elif head == "algebroid":
            need(1, "algebroid NAME")
            mf.algebroid = _ident(words[0], lineno, cols[0])
            mf.lines["algebroid"] = lineno
        elif head == "symmetry":
            need(1, "symmetry NAME")
            mf.symmetries.append(_ident(words[0], lineno, cols[0]))
            mf.lines[("symmetry", words[0])] = lineno
        elif head == "suite":
            if len(words) < 3 or words[1] != "=":
                raise ParseError("usage: suite NAME = check[/budget][!fail], ...", lineno, hc)
            name = _ident(words[0], lineno, cols[0])
            items = []
            spec_text = body[cols[2] - 1:]
            pos = cols[2]
            for chunk in spec_text.split(","):
                m = re.match(r"^\s*([a-z][a-z0-9-]*)(?:/(\d+))?(!fail)?\s*$", chunk)
                if not m:
                    raise ParseError(f"bad suite item {chunk.strip()!r}", lineno, pos)
                items.append(SuiteItem(m.group(1), int(m.group(2)) if m.group(2) else None, bool(m.group(3))))
                pos += len(chunk) + 1
            mf.suites.append((name, items))
        else:
            raise ParseError(f"unknown statement {head!r}", lineno, hc)
    if not seen_grading:
        raise ParseError("missing grading statement", 1, 1)
    return Model(mf) if build else mf


def _mat(m) -> str:
    return "[" + ",".join("[" + ",".join(str(v) for v in row) + "]" for row in m) + "]"


def print_model(model) -> str:
    """Canonical text of a model (or ModelFile); comments are not preserved."""
    mf = model.file if isinstance(model, Model) else model
    out = []
    if mf.name:
        out.append(f"model {mf.name}")
    if mf.description:
        out.append(f'description "{mf.description}"')
    parts = []
    if mf.free_rank or not mf.torsion:
        parts.append(f"Z^{mf.free_rank}")
    parts += [f"Z/{m}" for m in mf.torsion]
    out.append("grading " + " x ".join(parts))
    for n, o, p in mf.parameters:
        s = f"parameter {n}"
        if o is not None:
            s += f" root {o}" + ("" if p else " nonprimitive")
        out.append(s)
    if mf.sign:
        out.append(f"cocycle sign {_mat(mf.sign)}")
    for n, m in mf.forms_params:
        out.append(f"cocycle {n} {_mat(m)}")
    for name, w, gd, kind, order, vnode in mf.generators:
        g = "(" + ",".join(str(v) for v in gd) + ")"
        rel = kind
        if kind == "nilpotent":
            rel = f"nilpotent {order}"
        elif kind == "power":
            rel = f"power {order} = {print_expression(vnode)}"
        out.append(f"generator {name} weight={w} gdeg={g} {rel}")
    if mf.forms:
        out.append("forms")
    for name, over, gd, w, node, _ in mf.derivations:
        g = "(" + ",".join(str(v) for v in gd) + ")"
        o = " over=forms" if over else ""
        out.append(f"derivation {name}{o} gdeg={g} weight={w} = {print_expression(node)}")
    if mf.algebroid is not None:
        out.append(f"algebroid {mf.algebroid}")
    for s in mf.symmetries:
        out.append(f"symmetry {s}")
    for name, items in mf.suites:
        out.append(f"suite {name} = " + ", ".join(i.text() for i in items))
    return "\n".join(out) + "\n"
