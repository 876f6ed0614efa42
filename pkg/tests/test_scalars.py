import pytest

from acq.scalars import ParameterSpec, ScalarError, ScalarRing


def test_primitive_root_reduces_by_cyclotomic():
    R = ScalarRing([ParameterSpec("z", 3)])
    z = R.param("z")
    assert z ** 3 == 1
    assert (z * z + z + 1).is_zero()
    assert z.inv() == -1 - z
    assert (z ** 2).inv() == z


def test_composite_order_uses_cyclotomic():
    z = ScalarRing([ParameterSpec("z", 4)]).param("z")
    assert z ** 2 == -1


def test_nonprimitive_root_keeps_powers():
    w = ScalarRing([ParameterSpec("w", 4, False)]).param("w")
    assert w ** 4 == 1
    assert not (w ** 2 + 1).is_zero()


def test_free_parameter_laurent():
    R = ScalarRing([ParameterSpec("q")])
    q = R.param("q")
    assert q * q.inv() == 1
    assert q ** -2 * q ** 2 == 1
    assert str(q ** -1) == "q^-1"
    assert not (q + 1).is_unit()
    with pytest.raises(ScalarError):
        (q + 1).inv()


def test_rational_constants():
    R = ScalarRing([ParameterSpec("q")])
    half = R.const(1) / 2
    assert half * 2 == 1
    assert str(R.const(2) / 3) == "2/3"


def test_parameter_validation():
    with pytest.raises(ValueError):
        ParameterSpec("bad name")
    with pytest.raises(ValueError):
        ParameterSpec("z", 1)
    with pytest.raises(ValueError):
        ScalarRing([ParameterSpec("q"), ParameterSpec("q")])
