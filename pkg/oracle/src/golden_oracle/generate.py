"""Golden reference values at 30+ significant digits.

Every value is produced by a primary method (symbolic closed form where one
exists) and verified against an independent second method (arbitrary
precision quadrature, series summation, or a recurrence).  Any disagreement
beyond 1e-25 relative aborts the whole batch: a golden file is either fully
trustworthy or absent.

The emitted JSON is a list of entries::

    {"key": "moment/lognormal-s/c=1/d=1/n=3",
     "value_ln_mag": "2.25", "sign": 1, "tol_rel": 1e-08,
     "method": "symbolic"}

``value_ln_mag`` is the natural log of the magnitude (the values themselves
overflow floats), printed to 30 significant digits.  Entries for integrals
that diverge to -inf carry ``"finite": false`` instead of a value.

The file consumed by the main test suite is checked in; regeneration is
deterministic and reproduces it bit for bit.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Iterable

import mpmath as mp

DPS = 50
CROSS_CHECK_RTOL = mp.mpf("1e-25")
DIGITS = 30

LOGNORMAL_CS = (0, 1, 2)
LOGNORMAL_DS = (mp.mpf("0.25"), mp.mpf(1), mp.mpf(4))
LOGNORMAL_NS = range(-8, 9)
FAMILY9_DS = (mp.mpf(0), mp.mpf("0.5"), mp.mpf(1))
FAMILY9_NS = range(-6, 61)


class CrossCheckError(RuntimeError):
    """Two independent methods disagreed; nothing is emitted."""


def _nstr(x: mp.mpf) -> str:
    return mp.nstr(x, DIGITS, strip_zeros=False)


def _require_close(key: str, a: mp.mpf, b: mp.mpf) -> None:
    scale = max(abs(a), abs(b), mp.mpf("1e-30"))
    if abs(a - b) / scale > CROSS_CHECK_RTOL:
        raise CrossCheckError(
            f"{key}: methods disagree: {_nstr(a)} vs {_nstr(b)} "
            f"(rel {mp.nstr(abs(a - b) / scale, 3)})")


def _entry(key: str, ln_mag: mp.mpf, sign: int, tol_rel: float, method: str) -> dict:
    return {"key": key, "value_ln_mag": _nstr(ln_mag), "sign": sign,
            "tol_rel": tol_rel, "method": method}


def _inf_entry(key: str, method: str) -> dict:
    return {"key": key, "finite": False, "method": method}


def _num(x) -> str:
    return mp.nstr(mp.mpf(x), 17).rstrip("0").rstrip(".")


# --------------------------------------------------------------------------
# log-normal moments
# --------------------------------------------------------------------------

def _lognormal_s_ln_moment(c, d, n) -> mp.mpf:
    return (n + 1 - mp.mpf(c)) ** 2 / (4 * mp.mpf(d))


def _lognormal_s_moment_quad(c, d, n) -> mp.mpf:
    # t = ln(u): sqrt(d/pi) * exp((n+1-c) t - d t^2) integrated over R
    f = lambda t: mp.sqrt(d / mp.pi) * mp.e ** ((n + 1 - c) * t - d * t * t)
    return mp.quad(f, [-mp.inf, 0, mp.inf])


def lognormal_moment_entries() -> Iterable[dict]:
    spot_ns = (-8, -3, 0, 3, 8)
    for c in LOGNORMAL_CS:
        for d in LOGNORMAL_DS:
            for n in spot_ns:
                ln = _lognormal_s_ln_moment(c, d, n)
                q = _lognormal_s_moment_quad(c, d, n)
                _require_close(f"spot moment c={c} d={d} n={n}", mp.log(q), ln)
            for n in LOGNORMAL_NS:
                ln = _lognormal_s_ln_moment(c, d, n)
                key = f"moment/lognormal-s/c={_num(c)}/d={_num(d)}/n={n}"
                yield _entry(key, ln, 1, 1e-8, "symbolic")
                key = f"moment/lognormal-h/c={_num(c)}/d={_num(d)}/n={n}"
                if n % 2 == 0:
                    yield _entry(key, ln, 1, 1e-8, "symbolic")
                else:
                    yield {"key": key, "value_ln_mag": None, "sign": 0,
                           "tol_rel": 1e-8, "method": "symbolic"}


# --------------------------------------------------------------------------
# family9 moments: p*(Gamma(p(n+1), 1) + Gamma(-p(n+1), 1)), p = 2 + d
# --------------------------------------------------------------------------

def _gamma_upper(s, x=mp.mpf(1)) -> mp.mpf:
    return mp.gammainc(s, x, mp.inf)


def _gamma_upper_recurrence(s) -> mp.mpf:
    """Gamma(s, 1) by unit shifts from a small base order.

    Upward  Gamma(a+1, 1) = a*Gamma(a, 1) + e^-1, downward the inverse; the
    base is Gamma(frac, 1) with frac in (0, 1), or E1(1) = Gamma(0, 1) for
    integer s.  Independent of the library's large-argument algorithm, which
    is what the cross-check is really probing.
    """
    einv = mp.e ** -1
    frac = s - mp.floor(s)
    if frac == 0:
        g, a = mp.e1(1), mp.mpf(0)
    else:
        g, a = _gamma_upper(frac), frac
    while a < s - mp.mpf("0.5"):
        g = a * g + einv
        a += 1
    while a > s + mp.mpf("0.5"):
        g = (g - einv) / (a - 1)  # a stays <= 0 here, never 1
        a -= 1
    return g


def family9_moment(n, d) -> mp.mpf:
    p = 2 + mp.mpf(d)
    z = p * (n + 1)
    return p * (_gamma_upper(z) + _gamma_upper(-z))


def _family9_moment_recurrence(n, d) -> mp.mpf:
    p = 2 + mp.mpf(d)
    z = p * (n + 1)
    return p * (_gamma_upper_recurrence(z) + _gamma_upper_recurrence(-z))


def _family9_moment_quad(n, d) -> mp.mpf:
    p = 2 + mp.mpf(d)
    f1 = lambda x: x ** n * mp.e ** (-x ** (-1 / p))
    f2 = lambda x: x ** n * mp.e ** (-x ** (1 / p))
    return mp.quad(f1, [0, 1]) + mp.quad(f2, [1, mp.inf])


def family9_moment_entries() -> Iterable[dict]:
    for d in FAMILY9_DS:
        for n in FAMILY9_NS:
            mu = family9_moment(n, d)
            _require_close(f"family9 recurrence d={d} n={n}", mu,
                           _family9_moment_recurrence(n, d))
            if -6 <= n <= 12:
                _require_close(f"family9 quad d={d} n={n}", mu,
                               _family9_moment_quad(n, d))
            key = f"moment/family9/d={_num(d)}/n={n}"
            yield _entry(key, mp.log(mu), 1, 1e-6, "incomplete-gamma")


def family9_branch_entries() -> Iterable[dict]:
    # the two n = 0, d = 1 branch integrals, one smooth and one with the
    # essential singularity at the origin
    upper = 3 * _gamma_upper(mp.mpf(3))          # = 15/e
    _require_close("family9 upper branch", upper,
                   mp.quad(lambda x: mp.e ** (-x ** (mp.mpf(1) / 3)), [1, mp.inf]))
    _require_close("family9 upper branch vs 15/e", upper, 15 / mp.e)
    lower = 3 * _gamma_upper(mp.mpf(-3))
    _require_close("family9 lower branch", lower,
                   mp.quad(lambda x: mp.e ** (-x ** (-mp.mpf(1) / 3)), [0, 1]))
    yield _entry("integral/family9-upper-branch/d=1/n=0", mp.log(upper), 1,
                 1e-8, "incomplete-gamma")
    yield _entry("integral/family9-lower-branch/d=1/n=0", mp.log(lower), 1,
                 1e-8, "incomplete-gamma")


# --------------------------------------------------------------------------
# Krein and Berg integrals
# --------------------------------------------------------------------------

def _krein_h_lognormal(c, d) -> mp.mpf:
    # density 0.5*sqrt(d/pi) e^{-d (ln|u|)^2} |u|^-c; the odd ln|u| term
    # integrates to zero against 1/(1+u^2)
    return mp.pi * mp.log(mp.mpf("0.5") * mp.sqrt(d / mp.pi)) - d * mp.pi ** 3 / 4


def _krein_h_lognormal_quad(c, d) -> mp.mpf:
    ln_a = mp.log(mp.mpf("0.5") * mp.sqrt(d / mp.pi))
    f = lambda t: 2 * (ln_a - d * t * t - c * t) * mp.e ** t / (1 + mp.e ** (2 * t))
    return mp.quad(f, [-mp.inf, 0, mp.inf])


def _krein_s_lognormal(c, d) -> mp.mpf:
    return mp.pi / 4 * mp.log(d / mp.pi) - d * mp.pi ** 3 / 2


def _krein_s_lognormal_quad(c, d) -> mp.mpf:
    ln_a = mp.mpf("0.5") * mp.log(d / mp.pi)
    f = lambda t: (ln_a - 4 * d * t * t - 2 * c * t) / (2 * mp.cosh(t))
    return mp.quad(f, [-mp.inf, 0, mp.inf])


def _berg_lognormal(c, d) -> mp.mpf:
    i0 = 4 * mp.pi / (3 * mp.sqrt(3))
    i1 = 8 * mp.pi ** 2 / 27
    i2 = 80 * mp.pi ** 3 / (81 * mp.sqrt(3))
    return mp.mpf("0.5") * mp.log(d / mp.pi) * i0 - c * i1 - d * i2


def _berg_lognormal_quad(c, d) -> mp.mpf:
    ln_a = mp.mpf("0.5") * mp.log(d / mp.pi)
    f = lambda t: (ln_a - d * t * t - c * t) * mp.e ** t / (1 + mp.e ** (mp.mpf(3) / 2 * t))
    return mp.quad(f, [-mp.inf, 0, mp.inf])


def lognormal_criteria_entries() -> Iterable[dict]:
    for c in LOGNORMAL_CS:
        for d in LOGNORMAL_DS:
            kh = _krein_h_lognormal(c, d)
            _require_close(f"krein-h c={c} d={d}", kh, _krein_h_lognormal_quad(c, d))
            yield _entry(f"krein-h/lognormal-h/c={_num(c)}/d={_num(d)}",
                         mp.log(-kh), -1, 1e-4, "symbolic")
            ks = _krein_s_lognormal(c, d)
            _require_close(f"krein-s c={c} d={d}", ks, _krein_s_lognormal_quad(c, d))
            yield _entry(f"krein-s/lognormal-s/c={_num(c)}/d={_num(d)}",
                         mp.log(-ks), -1, 1e-4, "symbolic")
            bg = _berg_lognormal(c, d)
            _require_close(f"berg c={c} d={d}", bg, _berg_lognormal_quad(c, d))
            yield _entry(f"berg/lognormal-s/c={_num(c)}/d={_num(d)}",
                         mp.log(-bg), -1, 1e-4, "symbolic")


def _alternating(a: mp.mpf, step: mp.mpf) -> mp.mpf:
    """sum_{k>=0} (-1)^k / (step*k + a), via the Lerch transcendent."""
    return mp.lerchphi(-1, 1, a / step) / step


def family9_criteria_entries() -> Iterable[dict]:
    for d in FAMILY9_DS:
        if d == 0:
            yield _inf_entry("krein-s/family9/d=0", "divergent")
            yield _inf_entry("berg/family9/d=0", "divergent")
            continue
        p = 2 + mp.mpf(d)
        # Krein: -2 * sum (-1)^k / (2k + 1 - 2/p)
        ks = -2 * _alternating(1 - 2 / p, mp.mpf(2))
        f = lambda t: -mp.e ** (2 * abs(t) / p) / (2 * mp.cosh(t))
        _require_close(f"family9 krein d={d}", ks, mp.quad(f, [-mp.inf, 0, mp.inf]))
        yield _entry(f"krein-s/family9/d={_num(d)}", mp.log(-ks), -1, 1e-4, "series")
        # Berg: two alternating series, one per branch
        bg = -(_alternating(mp.mpf("0.5") - 1 / p, mp.mpf(3) / 2)
               + _alternating(1 - 1 / p, mp.mpf(3) / 2))
        g = lambda t: -mp.e ** (abs(t) / p) * mp.e ** t / (1 + mp.e ** (mp.mpf(3) / 2 * t))
        _require_close(f"family9 berg d={d}", bg, mp.quad(g, [-mp.inf, 0, mp.inf]))
        yield _entry(f"berg/family9/d={_num(d)}", mp.log(-bg), -1, 1e-4, "series")


# --------------------------------------------------------------------------
# witness Krein integrals (isolated log singularities)
# --------------------------------------------------------------------------

def _witness_krein_integrand(d, s, k):
    b = 4 * mp.pi * d * k  # frequency after the u^2 substitution, t = ln u

    def f(t):
        base = mp.mpf("0.5") * mp.log(d / mp.pi) - 4 * d * t * t - 2 * t
        if s == 1:
            cc = abs(mp.cos(mp.pi / 4 - b * t / 2))
            pert = mp.log(2) + 2 * mp.log(cc) if cc > 0 else mp.mpf("-inf")
        elif s == -1:
            cc = abs(mp.cos(mp.pi / 4 + b * t / 2))
            pert = mp.log(2) + 2 * mp.log(cc) if cc > 0 else mp.mpf("-inf")
        else:
            pert = mp.log(1 + s * mp.sin(b * t))
        if pert == mp.mpf("-inf"):
            return mp.mpf(0)  # removable at isolated points
        return (base + pert) / (2 * mp.cosh(t))

    # breakpoints at the perturbation troughs
    spacing = 2 * mp.pi / b
    width = mp.mpf(42)
    m0 = int(mp.floor(-width / spacing)) - 1
    m1 = int(mp.ceil(width / spacing)) + 1
    offset = (-mp.pi / 2 if s > 0 else mp.pi / 2) / b
    pts = [offset + m * spacing for m in range(m0, m1 + 1)]
    pts = [t for t in pts if -width < t < width]
    return f, sorted({-width, width, *pts})


def _excised_gl(f, pts: list, delta: mp.mpf) -> mp.mpf:
    """Gauss-Legendre over singularity-excised segments plus log patches.

    A decomposition independent of plain tanh-sinh-with-breakpoints: smooth
    segments keep a safety distance delta from every interior singular
    point, whose neighborhoods are integrated under tau = ln|t - t_m| where
    the integrand is analytic.
    """
    lo, hi, interior = pts[0], pts[-1], pts[1:-1]
    total = mp.mpf(0)
    bounds = [lo] + [x for t in interior for x in (t - delta, t + delta)] + [hi]
    for a, b in zip(bounds[::2], bounds[1::2]):
        total += mp.quadgl(f, [a, b], maxdegree=8)
    for t_m in interior:
        g = lambda tau: (f(t_m + mp.e ** tau) + f(t_m - mp.e ** tau)) * mp.e ** tau
        total += mp.quadgl(g, [mp.log(delta) - 70, mp.log(delta)], maxdegree=8)
    return total


def witness_krein_entries() -> Iterable[dict]:
    for (d, s, k) in ((mp.mpf(1), mp.mpf(1), 1), (mp.mpf(1), mp.mpf("0.5"), 1)):
        f, pts = _witness_krein_integrand(d, s, k)
        v1 = mp.quad(f, pts)
        if abs(s) == 1:
            v2 = _excised_gl(f, pts, mp.mpf("0.1"))
        else:
            v2 = mp.quadgl(f, pts, maxdegree=9)
        _require_close(f"witness krein d={d} s={s} k={k}", v1, v2)
        key = f"krein-s/lognormal-s/c=1/d={_num(d)}/sin-s={_num(s)}-k={k}"
        yield _entry(key, mp.log(-v1), -1, 1e-4, "quadrature")


# --------------------------------------------------------------------------
# Carleman series
# --------------------------------------------------------------------------

def anchor_entries() -> Iterable[dict]:
    """Small analytic anchors used by individual unit examples."""
    # log-density of the half-line log-normal at u = 1 with c = d = 1
    v = mp.mpf("0.5") * mp.log(1 / mp.pi)
    _require_close("logdensity anchor", v, -mp.log(mp.sqrt(mp.pi)))
    yield _entry("logdensity/lognormal-s/c=1/d=1/u=1", mp.log(-v), -1,
                 1e-10, "symbolic")

    # the symmetrization bound gap: ln 2 integrated against 1/(1+u^2) on R
    gap = mp.pi * mp.log(2)
    _require_close("pi ln 2", gap,
                   mp.quad(lambda u: mp.log(2) / (1 + u * u), [-mp.inf, 0, mp.inf]))
    yield _entry("constant/krein-symmetrization-gap", mp.log(gap), 1,
                 1e-10, "symbolic")

    # integrals that vanish by antisymmetry (under u -> 1/u, and oddness)
    for key, f in (
        ("integral/log-inversion-antisymmetric",
         lambda u: mp.log(u) / (1 + u * u)),
        ("integral/gaussian-sine-odd",
         lambda t: mp.e ** (-t * t) * mp.sin(2 * mp.pi * t)),
    ):
        got = mp.quad(f, [0, 1, mp.inf] if "inversion" in key else [-mp.inf, 0, mp.inf])
        if abs(got) > mp.mpf("1e-25"):
            raise CrossCheckError(f"{key}: expected exact cancellation, got {_nstr(got)}")
        yield {"key": key, "value_ln_mag": None, "sign": 0, "tol_rel": 1e-10,
               "method": "symbolic"}


def carleman_entries() -> Iterable[dict]:
    # strong two-sided sum for the symmetric log-normal at d = 1/4:
    # terms e^{-|n|/2}, full sum 2 e^{-1/2} / (1 - e^{-1/2})
    r = mp.e ** (-mp.mpf("0.5"))
    total = 2 * r / (1 - r)
    _require_close("carleman tail", total,
                   2 * mp.nsum(lambda n: mp.e ** (-n / mp.mpf(2)), [1, mp.inf]))
    yield _entry("carleman/lognormal-s/c=1/d=0.25/strong-full-sum",
                 mp.log(total), 1, 1e-10, "symbolic")

    # fitted decay exponent of the two-sided Carleman terms of family9 over
    # 20 <= |n| <= 60 (least squares of ln term against ln |n|)
    for d in FAMILY9_DS:
        xs, ys = [], []
        for n in list(range(20, 61)) + list(range(-60, -19)):
            mu = family9_moment(n, d)
            xs.append(mp.log(abs(n)))
            ys.append(-mp.log(mu) / (2 * abs(n)))
        m = mp.mpf(len(xs))
        sx, sy = mp.fsum(xs), mp.fsum(ys)
        sxx = mp.fsum(x * x for x in xs)
        sxy = mp.fsum(x * y for x, y in zip(xs, ys))
        slope_a = (m * sxy - sx * sy) / (m * sxx - sx * sx)
        # second route: centered covariance form
        mx, my = sx / m, sy / m
        cov = mp.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
        var = mp.fsum((x - mx) ** 2 for x in xs)
        slope_b = cov / var
        _require_close(f"family9 exponent d={d}", slope_a, slope_b)
        yield _entry(f"carleman-exponent/family9/d={_num(d)}/window=20:60",
                     mp.log(-slope_a), -1, 1e-6, "derived")


# --------------------------------------------------------------------------
# assembly
# --------------------------------------------------------------------------

def generate_entries() -> list[dict]:
    mp.mp.dps = DPS
    entries: list[dict] = []
    for gen in (lognormal_moment_entries, family9_moment_entries,
                family9_branch_entries, lognormal_criteria_entries,
                family9_criteria_entries, witness_krein_entries,
                anchor_entries, carleman_entries):
        entries.extend(gen())
    keys = [e["key"] for e in entries]
    if len(keys) != len(set(keys)):
        dupes = sorted({k for k in keys if keys.count(k) > 1})
        raise CrossCheckError(f"duplicate keys: {dupes[:4]}")
    return entries


def write_golden(path: str) -> int:
    entries = generate_entries()
    with open(path, "w") as fh:
        json.dump(entries, fh, indent=1)
        fh.write("\n")
    return len(entries)


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description="regenerate the golden value file")
    ap.add_argument("--out", default="golden.json")
    args = ap.parse_args(argv)
    try:
        n = write_golden(args.out)
    except CrossCheckError as exc:
        print(f"refusing to emit: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {n} entries to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
