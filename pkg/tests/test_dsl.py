import pytest

from acq.builtins import SHIPPED, model_text
from acq.dsl import (
    ParseError,
    evaluate_derivation,
    evaluate_element,
    parse_expression,
    parse_model,
    print_expression,
    print_model,
)

MINIMAL = """model tiny
grading Z^1
"""


def test_shipped_files_round_trip():
    for name in SHIPPED:
        text = model_text(name)
        m = parse_model(text)
        out = print_model(m)
        assert out == text, name
        assert print_model(parse_model(out)) == out


def test_empty_generator_block():
    m = parse_model(MINIMAL)
    assert m.algebra.n == 0
    assert evaluate_element(m.algebra, "3/2").is_scalar()


def test_quantum_plane_relation_is_cocycle(model):
    m = model("quantum_plane")
    f = evaluate_element(m.algebra, "x*y - q*y*x")
    assert f.is_zero()
    assert "cocycle q [[0,1],[-1,0]]" in model_text("quantum_plane")


def test_torus_action_q(model):
    m = model("torus_action")
    Q = m.derivations["Q"]
    assert str(Q) == "{u -> tau*u*eta_u, v -> tau*v*eta_v}"
    assert Q.weight == 1 and Q.gdeg.coords == (1, 0, 0)


def test_expression_printer_round_trip():
    for text in ["x*y - q*y*x", "(x + y)^2", "-x^-1*y/2", "x*(y + 1)*D[x]", "2*x^3"]:
        node = parse_expression(text)
        assert parse_expression(print_expression(node)) == node


def test_comments_dropped():
    text = MINIMAL + "# comment\ngenerator x weight=0 gdeg=(1) free  # trailing\n"
    assert "#" not in print_model(parse_model(text))


@pytest.mark.parametrize("src,line,col,msg", [
    ("model a\ngrading Z^1\ngenerator x weight=0 gdeg=(1) free\nsuite s = roundtrip\nderivation X gdeg=(0) weight=0 = z*D[x]\n",
     5, 34, "unknown identifier 'z'"),
    ("model a\ngrading Z^1\ngenerator x weight=0 gdeg=(1) free\nderivation X gdeg=(0) weight=0 = x*D[x] +\n",
     4, 42, "unexpected"),
    ("model a\ngenerator x weight=0 gdeg=(1) free\n", 1, 1, "missing grading"),
    ("model a\ngrading Z^1\nbogus line\n", 3, 1, "unknown statement"),
])
def test_parse_errors_carry_position(src, line, col, msg):
    with pytest.raises(ParseError) as info:
        parse_model(src)
    err = info.value
    assert err.line == line
    assert err.col == col
    assert msg in err.message


def test_degree_bookkeeping_message():
    src = MINIMAL + "generator x weight=0 gdeg=(1) free\nderivation X gdeg=(0) weight=0 = x*D[x] + D[x]\n"
    with pytest.raises(ParseError) as info:
        parse_model(src)
    assert "bidegree" in info.value.message
    assert "expected" in info.value.message


def test_negative_power_rules(model):
    qp = model("quantum_plane").algebra
    assert str(evaluate_element(qp, "q^-1*x")) == "q^-1*x"
    with pytest.raises(ParseError):
        evaluate_element(qp, "x^-1")
    T = model("torus").algebra
    assert evaluate_element(T, "u^-1*u") == T.one()


def test_derivation_degrees_inferred(model):
    qp = model("quantum_plane").algebra
    X = evaluate_derivation(qp, "y*D[x]")
    assert X.weight == 0 and X.gdeg.coords == (-1, 1)


def test_reserved_parameter_names():
    with pytest.raises(ParseError):
        parse_model(MINIMAL + "parameter D\n")


def test_suite_items(model):
    m = model("corrupted_torus_action")
    items = m.suites["default"]
    assert [i.text() for i in items] == ["roundtrip", "q-check!fail", "structure-check!fail"]
