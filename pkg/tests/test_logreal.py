import math

import pytest

from strongmoments import LogReal


def test_zero_invariant():
    z = LogReal.zero()
    assert z.sign == 0 and z.ln_mag == -math.inf
    with pytest.raises(ValueError):
        LogReal(0, 1.0)
    with pytest.raises(ValueError):
        LogReal(1, -math.inf)
    with pytest.raises(ValueError):
        LogReal(1, math.nan)
    with pytest.raises(ValueError):
        LogReal(2, 0.0)


@pytest.mark.parametrize("x", [1.0, -1.0, 2.5, -1e-300, 3e200, 0.0])
def test_from_to_float_roundtrip(x):
    # exp(log(x)) costs |ln x| * eps in relative precision
    assert LogReal.from_float(x).to_float() == pytest.approx(x, rel=1e-12)


def test_from_float_rejects_nonfinite():
    with pytest.raises(ValueError):
        LogReal.from_float(math.inf)
    with pytest.raises(ValueError):
        LogReal.from_float(math.nan)


@pytest.mark.parametrize("a,b", [(3.0, 4.0), (3.0, -4.0), (-3.0, -4.0),
                                 (1e-8, 1.0), (2.0, -2.0), (0.0, 5.0),
                                 (-1.25, 0.0), (1.0, -1.0 + 1e-12)])
def test_add_matches_float(a, b):
    got = (LogReal.from_float(a) + LogReal.from_float(b)).to_float()
    assert got == pytest.approx(a + b, rel=1e-12, abs=1e-300)


def test_exact_cancellation():
    a = LogReal.from_float(7.25)
    assert (a - a).is_zero()


def test_sub_near_cancellation():
    a, b = LogReal.from_float(1.0), LogReal.from_float(1.0 - 1e-14)
    assert (a - b).to_float() == pytest.approx(1e-14, rel=1e-2)


def test_mul_div_beyond_float_range():
    # e^1000 values are far beyond floats but arithmetic stays exact
    big = LogReal.from_ln(1000.0)
    prod = big * big
    assert prod.ln_mag == 2000.0 and prod.sign == 1
    assert (prod / big).ln_mag == pytest.approx(1000.0, abs=0)
    assert not prod.representable
    assert prod.to_float() == math.inf
    assert (-prod).to_float() == -math.inf


def test_add_beyond_float_range():
    a, b = LogReal.from_ln(1000.0), LogReal.from_ln(1000.0)
    assert (a + b).ln_mag == pytest.approx(1000.0 + math.log(2.0), rel=1e-15)
    assert (a - b).is_zero()


def test_scale_ln_is_exact():
    a = LogReal.from_ln(2.25)
    assert a.scale_ln(1000.0).ln_mag == 1002.25
    assert LogReal.zero().scale_ln(50.0).is_zero()


def test_rel_diff():
    a, b = LogReal.from_float(2.0), LogReal.from_float(2.0 * (1 + 1e-9))
    assert a.rel_diff(b) == pytest.approx(1e-9, rel=1e-3)
    assert LogReal.zero().rel_diff(LogReal.zero()) == 0.0
    assert LogReal.from_float(1.0).rel_diff(LogReal.from_float(-1.0)) == math.inf


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        LogReal.one() / LogReal.zero()
