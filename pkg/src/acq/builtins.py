"""The built-in model catalogue.

Shipped models live in ``acq/models/*.acq``.  Two families are
parameterized and produced as text: ``taft(p)`` and ``z2n(n)``; their shipped
files are the default instances.
"""

from __future__ import annotations

import re
from importlib import resources

from .dsl import parse_model

ALGEBRA_SUITE = ("roundtrip, cocycle/200, commutativity/200, confluence/100, jacobi/50, derham-q, "
                 "cartan/30, derived-bracket/30, forms-eval/20")
ALGEBROID_SUITE = ("roundtrip, q-check, antialgebra/30, anchor/30, structure-check, foliation, "
                   "modules/10, mc/20, symmetry/20")


def taft_text(p: int = 3) -> str:
    if p < 2:
        raise ValueError("taft(p) needs p >= 2")
    return (
        f"model taft{p}\n"
        f'description "Taft algebra T({p}): x^{p} = 1, y^{p} = 0, xy = zeta yx with zeta a primitive root"\n'
        f"grading Z/{p} x Z/{p}\n"
        f"parameter zeta root {p}\n"
        f"cocycle zeta [[0,1],[-1,0]]\n"
        f"generator x weight=0 gdeg=(1,0) power {p} = 1\n"
        f"generator y weight=0 gdeg=(0,1) nilpotent {p}\n"
        f"suite default = {ALGEBRA_SUITE}\n"
    )


def z2n_text(n: int = 2) -> str:
    if n < 1:
        raise ValueError("z2n(n) needs n >= 1")
    ident = "[" + ",".join("[" + ",".join("1" if i == j else "0" for j in range(n)) + "]"
                           for i in range(n)) + "]"
    lines = [
        f"model z2n{n}",
        f'description "Z2^{n}-graded algebra with the scalar-product sign (-1)^<a,b>"',
        "grading " + " x ".join(["Z/2"] * n),
        f"cocycle sign {ident}",
    ]

    def vec(ix):
        return "(" + ",".join("1" if k in ix else "0" for k in range(n)) + ")"

    for i in range(n):
        lines.append(f"generator x{i + 1} weight=0 gdeg={vec({i})} free")
    for i in range(n):
        for j in range(i + 1, n):
            lines.append(f"generator y{i + 1}{j + 1} weight=0 gdeg={vec({i, j})} free")
    lines.append(f"suite default = {ALGEBRA_SUITE}")
    return "\n".join(lines) + "\n"


FAMILIES = {"taft": (taft_text, 3), "z2n": (z2n_text, 2)}

# catalogue order
SHIPPED = [
    "commutative", "super", "quaternions", "z2n2", "quantum_plane", "torus", "taft3",
    "derham_quantum_plane", "derham_torus", "derham_quaternions", "derham_taft3",
    "torus_action", "trivial_q", "free_algebroid", "corrupted_torus_action",
]


def model_text(name: str) -> str:
    m = re.fullmatch(r"([a-z0-9_]+)\((\d+)\)", name.strip())
    if m:
        fam = FAMILIES.get(m.group(1))
        if fam is None:
            raise KeyError(f"unknown builtin family {m.group(1)!r}")
        return fam[0](int(m.group(2)))
    if name not in SHIPPED:
        raise KeyError(f"unknown builtin {name!r}")
    return resources.files("acq").joinpath("models", f"{name}.acq").read_text(encoding="utf-8")


def load_builtin(name: str):
    text = model_text(name)
    model = parse_model(text)
    model.source = text
    return model


def list_builtins() -> list:
    """[(name, description)] for every shipped model."""
    out = []
    for name in SHIPPED:
        mf = parse_model(model_text(name), build=False)
        out.append((name, mf.description))
    return out
