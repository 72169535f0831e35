"""Acceptance suite: every criterion at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one line per
criterion.  Tolerances are fixed here, not configurable.
"""

import math

import numpy as np
import pytest

from strongmoments import (
    Classification,
    DistributionSpec,
    Verdict,
    Variant,
    carleman_sum,
    classify,
    closed_form_moment,
    default_symmetry_grid,
    invert_pushforward,
    is_symmetric,
    krein_hamburger,
    krein_stieltjes,
    krein_symmetrization_bound,
    moment,
    moment_table,
    realize,
    symmetrize,
    symmetrized_moments,
    verify_witness,
    witness_spec,
)

CS = (0.0, 1.0, 2.0)
DS = (0.25, 1.0, 4.0)
PI_LN2 = math.pi * math.log(2.0)


def _report(name: str) -> None:
    print(f"[PASS] {name}")


def _ln_close(a: float, b: float, rel: float) -> bool:
    # relative agreement of log-magnitudes, floored at 1 near ln = 0
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def lognormal(family: str, c: float, d: float) -> DistributionSpec:
    return DistributionSpec(family, {"c": c, "d": d})


def test_closed_form_vs_quadrature():
    """closed form vs quadrature within 1e-8 on the full (c, d, n) grid"""
    for family in ("lognormal-s", "lognormal-h"):
        for c in CS:
            for d in DS:
                spec = lognormal(family, c, d)
                dens = realize(spec)
                for n in range(-8, 9):
                    want = closed_form_moment(spec, n)
                    got, _ = moment(dens, n)
                    if want.sign == 0:
                        assert got.sign == 0, (family, c, d, n)
                    else:
                        assert _ln_close(got.ln_mag, want.ln_mag, 1e-8), \
                            (family, c, d, n, got.ln_mag, want.ln_mag)
    _report("closed-form vs quadrature moments on the full grid (1e-8)")


def test_krein_hamburger_analytic_value():
    """Krein (whole-line) analytic value -11.7273 within 1e-3"""
    want = math.pi * math.log(0.5 / math.sqrt(math.pi)) - math.pi ** 3 / 4
    assert want == pytest.approx(-11.7273, abs=1e-4)
    res = krein_hamburger(realize(lognormal("lognormal-h", 1.0, 1.0)))
    assert res.finite
    assert res.value == pytest.approx(want, abs=1e-3)
    _report(f"Krein whole-line value {res.value:.5f} vs {want:.5f} (1e-3)")


def test_krein_stieltjes_analytic_value():
    """Krein (half-line) analytic value -16.4022 within 1e-3"""
    want = -(math.pi * math.log(math.pi)) / 4 - math.pi ** 3 / 2
    assert want == pytest.approx(-16.4022, abs=1e-4)
    res = krein_stieltjes(realize(lognormal("lognormal-s", 1.0, 1.0)))
    assert res.finite
    assert res.value == pytest.approx(want, abs=1e-3)
    _report(f"Krein half-line value {res.value:.5f} vs {want:.5f} (1e-3)")


def test_witness_suite():
    """witness pairs: moment match 1e-8, L1 > 0.1|s|, indeterminate"""
    for d in DS:
        for k in (1, 2):
            for s in (-1.0, -0.5, 0.5, 1.0):
                rep = verify_witness(d, s, k, n_max=8)
                assert rep.max_deviation < 1e-8, (d, k, s, rep.max_deviation)
                assert rep.distinctness > 0.1 * abs(s), (d, k, s, rep.distinctness)
                assert rep.passed
                cls = classify(witness_spec(d, s, k)).classification
                assert cls is Classification.INDETERMINATE, (d, k, s, cls)
    _report("witness suite over d x k x s: moments match, distinct, indeterminate")


def test_carleman_geometric_tail():
    """strong series partial sum at N=40 equals the geometric limit (1e-8)"""
    r = math.exp(-0.5)
    want = 2.0 * r / (1.0 - r)
    assert want == pytest.approx(3.0830, abs=1e-4)
    table = moment_table(lognormal("lognormal-s", 1.0, 0.25), -40, 40)
    diag = carleman_sum(table, Variant.STRONG_STIELTJES)
    assert diag.partial_sums[40] == pytest.approx(want, abs=1e-8)
    assert diag.verdict is Verdict.CONVERGES_LIKELY
    _report(f"two-sided series partial sum {diag.partial_sums[40]:.10f} "
            f"vs {want:.10f} (1e-8), converges")


def test_family9_exponent(golden_ln):
    """fitted series exponent within 0.1 of 1 + d/2; moments vs golden 1e-6"""
    for d in (0.0, 0.5, 1.0):
        spec = DistributionSpec("family9", {"d": d})
        table = moment_table(spec, -60, 60, "quadrature")
        xs, ys = [], []
        for n in list(range(20, 61)) + list(range(-60, -19)):
            got = table.value(n)
            # the golden grid covers n in [-6, 60]; moments of the far
            # negative tail check against it through mu_{-n} = mu_{n-2}
            ref = n if n >= 0 else -n - 2
            _, want, _ = golden_ln(f"moment/family9/d={d:g}/n={ref}")
            assert abs(math.expm1(got.ln_mag - want)) < 1e-6, (d, n)
            xs.append(math.log(abs(n)))
            ys.append(-got.ln_mag / (2.0 * abs(n)))
        slope = np.polyfit(xs, ys, 1)[0]
        fitted = -slope
        assert fitted == pytest.approx(1.0 + d / 2.0, abs=0.1), (d, fitted)
        # and the estimator itself agrees with the 50-digit reference fit
        _, ln_ref, _ = golden_ln(f"carleman-exponent/family9/d={d:g}/window=20:60")
        assert fitted == pytest.approx(math.exp(ln_ref), abs=1e-5)
    _report("boundary-family exponent fits 1 + d/2 within 0.1 "
            "(quadrature moments vs golden at 1e-6)")


def test_classification_table():
    """lognormal grid indeterminate; boundary family det/unknown/unknown"""
    for family in ("lognormal-s", "lognormal-h"):
        for c in CS:
            for d in DS:
                rep = classify(lognormal(family, c, d))
                assert rep.classification is Classification.INDETERMINATE, \
                    (family, c, d, rep.classification)
    verdicts = {d: classify(DistributionSpec("family9", {"d": d})).classification
                for d in (0.0, 0.5, 1.0)}
    assert verdicts[0.0] is Classification.DETERMINATE
    assert verdicts[0.5] is Classification.UNKNOWN
    assert verdicts[1.0] is Classification.UNKNOWN
    _report("classification table: 18x indeterminate, determinate at the "
            "boundary, unknown above it")


def test_symmetrization():
    """moment average law (1e-8), idempotence, fixed point, bound gap"""
    spec = lognormal("lognormal-s", 2.0, 1.0)
    dens = realize(spec)
    sym = symmetrize(dens)
    table = symmetrized_moments(moment_table(spec, -6, 6))
    for n in range(-6, 7):
        got, _ = moment(sym, n)
        assert got.rel_diff(table.value(n)) < 1e-8, n

    grid = default_symmetry_grid()
    np.testing.assert_allclose(symmetrize(sym).ln(grid), sym.ln(grid),
                               rtol=0, atol=1e-11)
    fixed = realize(lognormal("lognormal-s", 1.0, 1.0))
    np.testing.assert_allclose(symmetrize(fixed).ln(grid), fixed.ln(grid),
                               rtol=0, atol=1e-12)

    comp = krein_symmetrization_bound(realize(lognormal("lognormal-h", 2.0, 1.0)))
    assert comp.gap == pytest.approx(PI_LN2, abs=1e-3)

    for c in CS:
        for d in DS:
            h = realize(lognormal("lognormal-h", c, d))
            base = krein_hamburger(h)
            after = krein_hamburger(symmetrize(h))
            assert after.finite
            assert after.value >= base.value - PI_LN2 - 1e-6, (c, d)
    _report(f"symmetrization: average law, idempotent, fixed point, "
            f"bound gap {comp.gap:.5f} vs {PI_LN2:.5f}")


def test_property_suites():
    """involution, mass conservation, and the two moment reflection laws"""
    grid = default_symmetry_grid()
    for spec in (lognormal("lognormal-s", 2.0, 0.25),
                 lognormal("lognormal-h", 0.0, 4.0)):
        dens = realize(spec)
        back = invert_pushforward(invert_pushforward(dens))
        np.testing.assert_allclose(back.ln(grid), dens.ln(grid), rtol=0, atol=1e-11)
        m0, _ = moment(dens, 0)
        m0i, _ = moment(invert_pushforward(dens), 0)
        assert m0.rel_diff(m0i) < 1e-9

        m0s, _ = moment(symmetrize(dens), 0)
        assert m0.rel_diff(m0s) < 1e-9

    # symmetric densities have reflection-symmetric moments
    sym_table = moment_table(lognormal("lognormal-s", 1.0, 0.25), -8, 8)
    wit_table = moment_table(witness_spec(4.0, 1.0, 2), -6, 6, "quadrature")
    for n in range(1, 7):
        assert sym_table.value(n).rel_diff(sym_table.value(-n)) == 0.0
        assert wit_table.value(n).rel_diff(wit_table.value(-n)) < 1e-8
    assert is_symmetric(realize(lognormal("lognormal-s", 1.0, 0.25)))[0]

    # the boundary family reflects with an index shift of two
    f9 = moment_table(DistributionSpec("family9", {"d": 1.0}), -6, 6)
    for n in range(-4, 7):
        assert f9.value(-n).rel_diff(f9.value(n - 2)) < 1e-8
    _report("property suites: involution, mass conservation, reflection laws")
