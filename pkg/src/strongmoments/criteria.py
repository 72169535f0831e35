"""Determinacy and indeterminacy criteria.

Two families of tests are computed side by side:

* Carleman-type series ``sum mu_n**(-1/(2|n|))`` in four variants (classical
  and strong, half-line and whole-line index sets).  Divergence is sufficient
  for determinacy but cannot be proven numerically, so the verdict is a
  heuristic built from the fitted decay exponent of the terms: the boundary
  sits exactly at the harmonic series (exponent 1).
* Krein-type log-density integrals, finiteness of which is sufficient for
  indeterminacy.  The Berg variant is evaluated and reported but never used
  for classification (whether it decides the two-sided problem is open).

The classifier combines the two.  One guard is deliberate: when the Krein
integral is finite but the Carleman terms decay like a power law (the
boundary regime, where the fitted exponent is driven by ``1 + d/2``-type
asymptotics rather than geometric moment growth), the tool declines to
classify and returns UNKNOWN.  Families in that band are exactly the
limiting cases between the two criteria, and the numerical margins there are
too thin to certify either way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .distfn import Density, DistributionSpec, Domain, realize
from .logreal import LogReal
from .moments import MomentTable, _closed_form_family, moment_table
from .quad import DEFAULT_CONFIG, NonConvergence, QuadratureConfig, integrate_signed

__all__ = [
    "Variant",
    "Verdict",
    "DecayClass",
    "Classification",
    "SeriesDiagnostics",
    "KreinResult",
    "CriterionReport",
    "carleman_term",
    "carleman_sum",
    "weighted_carleman_sum",
    "krein_hamburger",
    "krein_stieltjes",
    "berg_integral",
    "classify",
]


class Variant(Enum):
    CLASSICAL_STIELTJES = "classical_stieltjes"
    CLASSICAL_HAMBURGER = "classical_hamburger"
    STRONG_STIELTJES = "strong_stieltjes"
    STRONG_HAMBURGER = "strong_hamburger"


class Verdict(Enum):
    DIVERGES_LIKELY = "diverges_likely"
    CONVERGES_LIKELY = "converges_likely"
    INCONCLUSIVE = "inconclusive"


class DecayClass(Enum):
    GEOMETRIC = "geometric"
    POWER_LAW = "power_law"


class Classification(Enum):
    DETERMINATE = "determinate"
    INDETERMINATE = "indeterminate"
    UNKNOWN = "unknown"
    INCONSISTENT = "inconsistent"


@dataclass(frozen=True)
class SeriesDiagnostics:
    variant: Variant
    terms: dict[int, float]          # index -> term value (may overflow to inf)
    ln_terms: dict[int, float]       # index -> ln(term), exact in log space
    partial_sums: dict[int, float]   # N -> sum of terms with |index| <= N
    fitted_exponent: float           # least-squares slope of ln term vs ln|n|
    decay_class: DecayClass
    verdict: Verdict
    window: tuple[int, int]

    def to_json_dict(self) -> dict:
        ns = sorted(self.partial_sums)
        return {
            "variant": self.variant.value,
            "fitted_exponent": self.fitted_exponent,
            "decay_class": self.decay_class.value,
            "verdict": self.verdict.value,
            "window": list(self.window),
            "partial_sum": self.partial_sums[ns[-1]] if ns else 0.0,
            "n_terms": len(self.terms),
        }


@dataclass(frozen=True)
class KreinResult:
    finite: bool
    value: float            # nan when not finite
    err_est: float
    kind: str               # "hamburger" | "stieltjes" | "berg"

    def to_json_dict(self) -> dict:
        out = {"finite": self.finite, "err_est": self.err_est, "kind": self.kind}
        out["value"] = self.value if self.finite else None
        return out


@dataclass(frozen=True)
class CriterionReport:
    spec: DistributionSpec
    carleman_classical: SeriesDiagnostics
    carleman_strong: SeriesDiagnostics
    krein: KreinResult | None
    berg: KreinResult | None
    classification: Classification
    justification: list[str]

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec.to_json_dict(),
            "carleman_classical": self.carleman_classical.to_json_dict(),
            "carleman_strong": self.carleman_strong.to_json_dict(),
            "krein": self.krein.to_json_dict() if self.krein else None,
            "berg": self.berg.to_json_dict() if self.berg else None,
            "classification": self.classification.value,
            "justification": self.justification,
        }


# --------------------------------------------------------------------------
# Carleman series
# --------------------------------------------------------------------------

def carleman_term(mu: LogReal, n: int) -> float:
    """``mu**(-1/(2|n|))`` for a positive moment of nonzero order."""
    if n == 0:
        raise ValueError("Carleman terms are defined for nonzero order")
    if mu.sign != 1:
        raise ValueError(f"Carleman term needs a positive moment, got sign {mu.sign}")
    return math.exp(-mu.ln_mag / (2.0 * abs(n)))


def _ln_term(mu: LogReal, n: int) -> float:
    if mu.sign != 1:
        raise ValueError(f"Carleman term needs a positive moment at n={n}, "
                         f"got sign {mu.sign}")
    return -mu.ln_mag / (2.0 * abs(n))


def _variant_indices(variant: Variant, n_min: int, n_max: int) -> list[int]:
    if variant is Variant.CLASSICAL_STIELTJES:
        return [n for n in range(1, n_max + 1)]
    if variant is Variant.CLASSICAL_HAMBURGER:
        return [n for n in range(1, n_max // 2 + 1)]
    if variant is Variant.STRONG_STIELTJES:
        if n_min > -1 or n_max < 1:
            raise ValueError("two-sided series needs moments of both signs")
        return [n for n in range(n_min, n_max + 1) if n != 0]
    if n_min > -2 or n_max < 2:
        raise ValueError("two-sided series needs even moments of both signs")
    lo = int(math.ceil(n_min / 2.0))
    hi = n_max // 2
    return [n for n in range(lo, hi + 1) if n != 0]


def _moment_index(variant: Variant, n: int) -> int:
    if variant in (Variant.CLASSICAL_HAMBURGER, Variant.STRONG_HAMBURGER):
        return 2 * n
    return n


def _fit_slope(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    """Least-squares slope of ys against xs and the residual sum of squares."""
    A = np.vstack([xs, np.ones_like(xs)]).T
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - A @ coef
    return float(coef[0]), float(np.sum(resid * resid))


def _diagnostics(variant: Variant, idx: list[int],
                 ln_terms: dict[int, float]) -> SeriesDiagnostics:
    terms = {n: math.exp(v) if v < 709 else math.inf for n, v in ln_terms.items()}
    n_abs_max = max(abs(n) for n in idx)
    window = (max(1, n_abs_max // 2), n_abs_max)

    sums: dict[int, float] = {}
    acc = 0.0
    for cap in range(1, n_abs_max + 1):
        acc += sum(terms[n] for n in idx if abs(n) == cap)
        sums[cap] = acc

    in_window = [n for n in idx if window[0] <= abs(n) <= window[1]]
    xs = np.log(np.abs(np.array(in_window, dtype=float)))
    ys = np.array([ln_terms[n] for n in in_window])
    slope, _ = _fit_slope(xs, ys)
    fitted_exponent = -slope

    # decay class from the positive tail alone (the tails differ by a
    # vertical offset that would pollute a mixed fit)
    pos = sorted(n for n in in_window if n > 0) or sorted(in_window, key=abs)
    xs_pos = np.array([abs(n) for n in pos], dtype=float)
    ys_pos = np.array([ln_terms[n] for n in pos])
    _, sse_power = _fit_slope(np.log(xs_pos), ys_pos)
    _, sse_geom = _fit_slope(xs_pos, ys_pos)
    decay = DecayClass.GEOMETRIC if sse_geom < sse_power else DecayClass.POWER_LAW

    # verdict rules; the boundary case is the harmonic series (exponent 1)
    growth = 0.0
    s_hi = sums[window[1]]
    s_lo = sums[window[0]]
    if math.isfinite(s_hi) and s_hi > 0:
        growth = (s_hi - s_lo) / s_hi
    elif math.isinf(s_hi):
        growth = 1.0
    ratios = np.exp(np.diff(ys_pos)) if len(ys_pos) > 1 else np.array([])
    geometric_decay = ratios.size > 0 and float(np.median(ratios)) < 0.95 \
        and float(np.mean(ratios < 0.95)) >= 0.8

    if fitted_exponent <= 1.05 and growth > 0.01:
        verdict = Verdict.DIVERGES_LIKELY
    elif fitted_exponent >= 1.2 or geometric_decay:
        verdict = Verdict.CONVERGES_LIKELY
    else:
        verdict = Verdict.INCONCLUSIVE

    return SeriesDiagnostics(variant, terms, ln_terms, sums, fitted_exponent,
                             decay, verdict, window)


def carleman_sum(table: MomentTable, variant: Variant) -> SeriesDiagnostics:
    """Series diagnostics for one Carleman variant over a moment table."""
    idx = _variant_indices(variant, table.n_min, table.n_max)
    if not idx:
        raise ValueError(f"table range [{table.n_min}, {table.n_max}] has no "
                         f"usable indices for {variant.value}")
    ln_terms: dict[int, float] = {}
    for n in idx:
        m = _moment_index(variant, n)
        if m not in table.entries or not table.entries[m].ok():
            raise ValueError(f"moment index {m} missing from table")
        ln_terms[n] = _ln_term(table.value(m), n)
    return _diagnostics(variant, idx, ln_terms)


def weighted_carleman_sum(table: MomentTable, xi: float) -> SeriesDiagnostics:
    """Strong-Stieltjes Carleman series with terms weighted by xi**|n|."""
    if xi <= 0:
        raise ValueError(f"weight base must be positive, got {xi}")
    idx = _variant_indices(Variant.STRONG_STIELTJES, table.n_min, table.n_max)
    ln_xi = math.log(xi)
    ln_terms = {n: _ln_term(table.value(n), n) + abs(n) * ln_xi for n in idx}
    return _diagnostics(Variant.STRONG_STIELTJES, idx, ln_terms)


# --------------------------------------------------------------------------
# Krein-type integrals
# --------------------------------------------------------------------------

def _floored_ln(w: Density, floor: float):
    """Log-density with isolated -inf values clipped to the floor.

    The clip applies only to non-finite values: isolated zeros of the density
    contribute integrably and the clipped set has negligible measure, while a
    genuinely unbounded log-density must stay unbounded for divergence
    detection to see it.
    """
    def ln_w(u: np.ndarray) -> np.ndarray:
        v = w.ln(u)
        return np.where(np.isfinite(v), v, floor)

    return ln_w


def _support_gap(w: Density, *, squared: bool = False) -> bool:
    """True when the log-density is -inf on an interval of positive length."""
    t = np.linspace(-40.0, 40.0, 2001)
    branches = [np.exp(t)] if w.domain is Domain.POSITIVE_HALF_LINE else [np.exp(t), -np.exp(t)]
    for u in branches:
        v = w.ln(u * u if squared else u)
        bad = ~np.isfinite(v)
        run = 0
        for b in bad:
            run = run + 1 if b else 0
            if run >= 3:
                return True
    return False


def _signed_from_values(value_fn):
    """(log|f|, sign f) callables from a plain value callable."""
    def log_abs(u: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            v = value_fn(u)
            return np.where(v != 0.0, np.log(np.abs(v)), -np.inf)

    def sign(u: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.sign(value_fn(u))

    return log_abs, sign


def _krein_quadrature(value_fn, singularities, cfg: QuadratureConfig,
                      kind: str, breakpoints=()) -> KreinResult:
    log_abs, sign = _signed_from_values(value_fn)
    res = integrate_signed(log_abs, sign, Domain.POSITIVE_HALF_LINE, cfg,
                           singularities=singularities,
                           breakpoints=breakpoints, detect_divergence=True)
    if res.minus_inf:
        return KreinResult(False, math.nan, math.nan, kind)
    return KreinResult(True, res.value.to_float(), res.err_abs, kind)


def _density_zeros(w: Density, lo: float, hi: float) -> list[float]:
    if w.zero_points is None:
        return []
    return [float(z) for z in np.atleast_1d(w.zero_points(lo, hi))]


def krein_hamburger(w: Density, cfg: QuadratureConfig = DEFAULT_CONFIG) -> KreinResult:
    """Integral of log-density / (1 + u^2) over the real line.

    Finite value is sufficient for indeterminacy of the two-sided problem.
    Point masses are ignored: only the absolutely continuous part enters.
    Returns the -inf verdict when the density vanishes on an interval or the
    truncated integrals decrease without bound.
    """
    if w.domain is not Domain.REAL_LINE:
        raise ValueError("Hamburger form needs a real-line density")
    if _support_gap(w):
        return KreinResult(False, math.nan, math.nan, "hamburger")
    ln_w = _floored_ln(w, cfg.abs_ln_floor)

    def value_fn(u: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return (ln_w(u) + ln_w(-u)) / (1.0 + u * u)

    zs = [abs(z) for z in _density_zeros(w, -1e9, 1e9) if z != 0]
    bps = sorted({abs(b) for b in w.breakpoints if b != 0})
    return _krein_quadrature(value_fn, sorted(set(zs)), cfg, "hamburger", bps)


def krein_stieltjes(w: Density, cfg: QuadratureConfig = DEFAULT_CONFIG) -> KreinResult:
    """Integral of log-density(u^2) / (1 + u^2) over (0, inf)."""
    if w.domain is not Domain.POSITIVE_HALF_LINE:
        raise ValueError("Stieltjes form needs a positive-half-line density")
    if _support_gap(w, squared=True):
        return KreinResult(False, math.nan, math.nan, "stieltjes")
    ln_w = _floored_ln(w, cfg.abs_ln_floor)

    def value_fn(u: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return ln_w(u * u) / (1.0 + u * u)

    zs = [math.sqrt(z) for z in _density_zeros(w, 1e-300, 1e18) if z > 0]
    bps = [math.sqrt(b) for b in w.breakpoints if b > 0]
    return _krein_quadrature(value_fn, zs, cfg, "stieltjes", bps)


def berg_integral(w: Density, cfg: QuadratureConfig = DEFAULT_CONFIG) -> KreinResult:
    """Integral of log-density / (1 + u^(3/2)) over (0, inf).

    Reported for comparison only; finiteness decides the classical one-sided
    problem, and whether it also decides the two-sided one is open, so the
    classifier never uses it.
    """
    if w.domain is not Domain.POSITIVE_HALF_LINE:
        raise ValueError("the half-line integral needs a positive-half-line density")
    if _support_gap(w):
        return KreinResult(False, math.nan, math.nan, "berg")
    ln_w = _floored_ln(w, cfg.abs_ln_floor)

    def value_fn(u: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return ln_w(u) / (1.0 + u ** 1.5)

    zs = [z for z in _density_zeros(w, 1e-300, 1e18) if z > 0]
    bps = [b for b in w.breakpoints if b > 0]
    return _krein_quadrature(value_fn, zs, cfg, "berg", bps)


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------

def classify(spec: DistributionSpec, cfg: QuadratureConfig = DEFAULT_CONFIG,
             n_max: int | None = None) -> CriterionReport:
    """Full criterion report with a determinacy classification.

    The Krein verdict (theorem-backed) outranks the heuristic series verdict;
    a finite Krein integral in the power-law boundary band downgrades to
    UNKNOWN, and a simultaneous divergence verdict surfaces as INCONSISTENT
    rather than being silently resolved.
    """
    dens = realize(spec)
    closed = _closed_form_family(spec) is not None
    if n_max is None:
        n_max = 400 if closed else 60
    table = moment_table(spec, -n_max, n_max, "auto", cfg)
    # the verdicts need integral values at ~1e-8, not full quadrature grade
    kr_cfg = replace(cfg, rel_tol=min(1e-8, cfg.rel_tol * 100.0))

    if dens.domain is Domain.POSITIVE_HALF_LINE:
        classical_v, strong_v = Variant.CLASSICAL_STIELTJES, Variant.STRONG_STIELTJES
    else:
        classical_v, strong_v = Variant.CLASSICAL_HAMBURGER, Variant.STRONG_HAMBURGER

    justification: list[str] = []
    try:
        classical = carleman_sum(table, classical_v)
        strong = carleman_sum(table, strong_v)
    except ValueError as exc:
        # failed table entries propagate as an UNKNOWN verdict, not a crash
        empty = SeriesDiagnostics(strong_v, {}, {}, {}, math.nan,
                                  DecayClass.POWER_LAW, Verdict.INCONCLUSIVE,
                                  (0, 0))
        return CriterionReport(spec, empty, empty, None, None,
                               Classification.UNKNOWN,
                               [f"series diagnostics unavailable: {exc}"])

    krein: KreinResult | None = None
    berg: KreinResult | None = None
    try:
        if dens.domain is Domain.POSITIVE_HALF_LINE:
            krein = krein_stieltjes(dens, kr_cfg)
            berg = berg_integral(dens, kr_cfg)
        else:
            krein = krein_hamburger(dens, kr_cfg)
    except NonConvergence as exc:
        justification.append(f"krein integral failed to converge: {exc}")

    carl_diverges = strong.verdict is Verdict.DIVERGES_LIKELY
    krein_finite = krein is not None and krein.finite

    if krein_finite and carl_diverges:
        cls = Classification.INCONSISTENT
        justification += [f"krein integral finite ({krein.value:.4f})",
                          "strong series verdict diverges: contradiction"]
    elif krein_finite and strong.decay_class is DecayClass.GEOMETRIC:
        cls = Classification.INDETERMINATE
        justification += [f"krein integral finite ({krein.value:.4f})",
                          "geometric moment regime: indeterminacy criterion applies"]
    elif carl_diverges and not krein_finite:
        cls = Classification.DETERMINATE
        justification += [
            f"strong series diverges (fitted exponent {strong.fitted_exponent:.3f})",
            "krein integral -inf" if krein is not None else "krein unavailable"]
    else:
        cls = Classification.UNKNOWN
        if krein_finite:
            justification += [f"krein integral finite ({krein.value:.4f})",
                              "power-law boundary regime: declining to classify"]
        else:
            justification += ["no criterion fired"]

    return CriterionReport(spec, classical, strong, krein, berg, cls, justification)
