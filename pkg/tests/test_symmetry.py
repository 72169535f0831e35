import math

import numpy as np
import pytest

from strongmoments import (
    Density,
    DistributionSpec,
    Domain,
    default_symmetry_grid,
    is_symmetric,
    krein_hamburger,
    krein_symmetrization_bound,
    moment,
    moment_table,
    realize,
    strong_from_classical,
    symmetrize,
    symmetrized_moments,
)

PI_LN2 = math.pi * math.log(2.0)


def lognormal_s(c, d):
    return DistributionSpec("lognormal-s", {"c": c, "d": d})


def lognormal_h(c, d):
    return DistributionSpec("lognormal-h", {"c": c, "d": d})


def test_symmetric_density_is_fixed_point():
    dens = realize(lognormal_s(1.0, 1.0))
    sym = symmetrize(dens)
    grid = default_symmetry_grid()
    np.testing.assert_allclose(sym.ln(grid), dens.ln(grid), rtol=0, atol=1e-12)


def test_symmetrized_density_pointwise():
    dens = realize(lognormal_s(2.0, 1.0))
    sym = symmetrize(dens)
    u = 2.0
    want = 0.5 * (float(dens(u)) + float(dens(1.0 / u)) / u ** 2)
    assert float(sym(u)) == pytest.approx(want, rel=1e-13)
    assert is_symmetric(sym)[0]


def test_symmetrize_moment_relation():
    spec = lognormal_s(2.0, 1.0)
    dens = realize(spec)
    sym = symmetrize(dens)
    table = moment_table(spec, -6, 6)
    for n in range(-6, 7):
        want = symmetrized_moments(table).value(n)
        got, _ = moment(sym, n)
        assert got.rel_diff(want) < 1e-8


def test_symmetrize_is_idempotent():
    dens = realize(lognormal_s(2.0, 0.5))
    once = symmetrize(dens)
    twice = symmetrize(once)
    grid = default_symmetry_grid()
    np.testing.assert_allclose(twice.ln(grid), once.ln(grid), rtol=0, atol=1e-11)
    m1, _ = moment(once, 3)
    m2, _ = moment(twice, 3)
    assert m1.rel_diff(m2) < 1e-9


def test_symmetrize_conserves_mass():
    dens = realize(lognormal_s(2.0, 1.0))
    m0, _ = moment(dens, 0)
    m0s, _ = moment(symmetrize(dens), 0)
    assert m0.rel_diff(m0s) < 1e-9


def test_symmetrize_point_masses():
    flat = lambda u: np.full_like(np.asarray(u, dtype=float), -np.inf)
    dens = Density(Domain.POSITIVE_HALF_LINE, flat, ((2.0, 1.0), (1.0, 0.4)))
    sym = symmetrize(dens)
    assert sorted(sym.point_masses) == [(0.5, 0.5), (1.0, 0.4), (2.0, 0.5)]
    assert is_symmetric(sym)[0]


def test_symmetrize_rejects_mass_at_origin():
    flat = lambda u: np.full_like(np.asarray(u, dtype=float), -np.inf)
    with pytest.raises(ValueError):
        symmetrize(Density(Domain.REAL_LINE, flat, ((0.0, 1.0),)))


def test_hamburger_symmetrization_preserves_sign_split():
    dens = realize(lognormal_h(2.0, 1.0))
    sym = symmetrize(dens)
    assert is_symmetric(sym)[0]
    # each half-line is symmetrized on its own: no mass leaks across 0
    u = np.array([-2.0, 2.0])
    w = sym(u)
    want = 0.5 * (dens(u) + dens(1.0 / u) / (u * u))
    np.testing.assert_allclose(w, want, rtol=1e-12)


# --------------------------------------------------------------------------
# strong-from-classical construction
# --------------------------------------------------------------------------

def seed():
    return realize(DistributionSpec("classical-seed", {"name": "trunc-exp"}))


def test_strong_from_classical_moment_reflection():
    ext = strong_from_classical(seed())
    m3, _ = moment(ext, 3)
    m3m, _ = moment(ext, -3)
    assert m3.rel_diff(m3m) < 1e-8


def test_strong_from_classical_mass_bookkeeping():
    # seed mass e^{-1} doubles under the extension (no point mass at 1)
    ext = strong_from_classical(seed())
    m0, _ = moment(ext, 0)
    assert m0.to_float() == pytest.approx(2.0 * math.exp(-1.0), rel=1e-9)


def test_extension_of_restriction_is_identity_on_symmetric():
    ext = strong_from_classical(seed())
    base_ln = ext.log_density

    def restricted(u, base_ln=base_ln):
        u = np.asarray(u, dtype=float)
        return np.where(u >= 1.0, base_ln(u), -np.inf)

    again = strong_from_classical(
        Density(Domain.POSITIVE_HALF_LINE, restricted, breakpoints=(1.0,)))
    grid = default_symmetry_grid()
    np.testing.assert_allclose(again.ln(grid), ext.ln(grid), rtol=0, atol=1e-12)


# --------------------------------------------------------------------------
# Krein comparison of the symmetrized problem
# --------------------------------------------------------------------------

def test_krein_bound_gap_is_pi_ln2():
    comp = krein_symmetrization_bound(realize(lognormal_h(2.0, 1.0)))
    assert comp.lhs.finite and comp.rhs.finite
    assert comp.gap == pytest.approx(PI_LN2, abs=1e-3)
    assert comp.lhs.value <= comp.rhs.value


@pytest.mark.parametrize("c,d", [(0.0, 0.25), (2.0, 1.0), (1.0, 4.0)])
def test_symmetrized_krein_lower_bound(c, d):
    # sigma~' >= sigma'/2 pointwise, so the Krein value drops by at most pi*ln2
    dens = realize(lognormal_h(c, d))
    base = krein_hamburger(dens)
    sym = krein_hamburger(symmetrize(dens))
    assert sym.finite
    assert sym.value >= base.value - PI_LN2 - 1e-6


def test_bound_comparison_needs_real_line():
    with pytest.raises(ValueError):
        krein_symmetrization_bound(realize(lognormal_s(1.0, 1.0)))
