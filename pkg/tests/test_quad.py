import math

import numpy as np
import pytest

from strongmoments import (
    Domain,
    NonConvergence,
    QuadratureConfig,
    integrate_log,
    integrate_signed,
)

CFG = QuadratureConfig()


def gaussian_ln(t):
    return -t * t


def test_gaussian_on_real_line():
    res = integrate_log(gaussian_ln, Domain.REAL_LINE)
    assert res.value.ln_mag == pytest.approx(0.5 * math.log(math.pi), abs=1e-12)


def test_lognormal_moment_integrand():
    # u^3 * sqrt(1/pi) e^{-(ln u)^2} / u on (0, inf): value e^{9/4}
    def ln_f(u):
        with np.errstate(all="ignore"):
            lu = np.log(u)
            return 3 * lu + 0.5 * np.log(1 / np.pi) - lu * lu - lu

    res = integrate_log(ln_f, Domain.POSITIVE_HALF_LINE)
    assert res.value.ln_mag == pytest.approx(2.25, abs=1e-10)


def test_family9_upper_branch(golden_ln):
    def ln_f(x):
        with np.errstate(all="ignore"):
            return np.where(x >= 1.0, -x ** (1.0 / 3.0), -np.inf)

    res = integrate_log(ln_f, Domain.POSITIVE_HALF_LINE, breakpoints=(1.0,))
    _, want, tol = golden_ln("integral/family9-upper-branch/d=1/n=0")
    assert abs(math.expm1(res.value.ln_mag - want)) < tol
    assert res.value.to_float() == pytest.approx(15 / math.e, rel=1e-9)


def test_scaling_equivariance():
    # shifting the log-integrand by C shifts the log result by exactly C
    base = integrate_log(gaussian_ln, Domain.REAL_LINE)
    for c in (700.0, 5000.0, -3000.0):
        shifted = integrate_log(lambda t, c=c: gaussian_ln(t) + c, Domain.REAL_LINE)
        assert shifted.value.ln_mag - base.value.ln_mag == pytest.approx(c, abs=1e-9)


REGRESSION_INTEGRANDS = [
    (gaussian_ln, Domain.REAL_LINE),
    (lambda t: -np.abs(t), Domain.REAL_LINE),
    (lambda u: -np.log(u) ** 2 + 2 * np.log(u), Domain.POSITIVE_HALF_LINE),
    (lambda u: np.where(u >= 1.0, -u ** (1 / 3.0), -u ** (-1 / 3.0)) + 5 * np.log(u),
     Domain.POSITIVE_HALF_LINE),
]


@pytest.mark.parametrize("fn,domain", REGRESSION_INTEGRANDS)
def test_halving_tolerance_never_worsens_error(fn, domain):
    def wrapped(u):
        with np.errstate(all="ignore"):
            return fn(u)

    tol = 1e-6
    prev = integrate_log(wrapped, domain, QuadratureConfig(rel_tol=tol)).err_est
    for _ in range(3):
        tol /= 2.0
        cur = integrate_log(wrapped, domain, QuadratureConfig(rel_tol=tol)).err_est
        assert cur <= prev
        prev = cur


def test_domain_split_consistency():
    # the same even integrand: over R it is twice its half-line integral
    whole = integrate_log(gaussian_ln, Domain.REAL_LINE)
    half = integrate_log(lambda u: -u * u, Domain.POSITIVE_HALF_LINE)
    assert whole.value.ln_mag == pytest.approx(half.value.ln_mag + math.log(2.0),
                                               abs=1e-9)


def test_breakpoints_restore_fast_convergence():
    def kinked(u):
        with np.errstate(all="ignore"):
            return np.where(u >= 1.0, -u, -1 / u) + 2 * np.log(u)

    res = integrate_log(kinked, Domain.POSITIVE_HALF_LINE, breakpoints=(1.0,))
    assert res.err_est < 1e-10


# --------------------------------------------------------------------------
# signed integrands
# --------------------------------------------------------------------------

def _signed(value_fn):
    def log_abs(t):
        with np.errstate(all="ignore"):
            v = value_fn(t)
            return np.where(v != 0.0, np.log(np.abs(v)), -np.inf)

    def sign(t):
        with np.errstate(all="ignore"):
            return np.sign(value_fn(t))

    return log_abs, sign


def test_odd_integrand_cancels_to_zero():
    la, sg = _signed(lambda t: t * np.exp(-t * t))
    res = integrate_signed(la, sg, Domain.REAL_LINE)
    assert res.value.is_zero()
    assert res.cancelled


def test_log_inversion_antisymmetry():
    # ln(u)/(1+u^2) on (0, inf) integrates to 0 by u -> 1/u antisymmetry
    la, sg = _signed(lambda u: np.log(u) / (1.0 + u * u))
    res = integrate_signed(la, sg, Domain.POSITIVE_HALF_LINE)
    assert abs(res.value.to_float()) < 1e-10


def test_gaussian_sine_cancels():
    la, sg = _signed(lambda t: np.exp(-t * t) * np.sin(2 * np.pi * t))
    res = integrate_signed(la, sg, Domain.REAL_LINE)
    assert abs(res.value.to_float()) < 1e-12


def test_signed_nonzero_value():
    # (1 - t^2) e^{-t^2} integrates to sqrt(pi)/2
    la, sg = _signed(lambda t: (1 - t * t) * np.exp(-t * t))
    res = integrate_signed(la, sg, Domain.REAL_LINE)
    assert res.value.to_float() == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-9)
    assert res.err_abs < 1e-8


def test_divergence_flagged_as_minus_inf():
    la, sg = _signed(lambda t: -1.0 / (1.0 + np.exp(-t)))
    res = integrate_signed(la, sg, Domain.REAL_LINE)
    assert res.minus_inf


def test_divergence_detection_can_be_disabled():
    la, sg = _signed(lambda t: -1.0 / (1.0 + np.exp(-t)))
    with pytest.raises(NonConvergence):
        integrate_signed(la, sg, Domain.REAL_LINE, detect_divergence=False)


def test_isolated_log_singularity():
    # |ln|t|| e^{-t^2}: integrable spike at 0; exact value by split quadrature
    la, sg = _signed(lambda t: np.abs(np.log(np.abs(t))) * np.exp(-t * t))
    res = integrate_signed(la, sg, Domain.REAL_LINE, singularities=[0.0])
    from scipy.integrate import quad as sciquad
    want = 2 * sciquad(lambda t: abs(math.log(t)) * math.exp(-t * t), 0, 10,
                       points=[1.0], limit=200)[0]
    assert res.value.to_float() == pytest.approx(want, rel=1e-7)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_levels=0)
    with pytest.raises(ValueError):
        QuadratureConfig(truncation_growth=1.0)
