"""Two-sided moment sequences mu_n, n in Z.

Closed forms exist for the log-normal families (including the
moment-preserving sine perturbation at c = 1); everything else goes through
log-space quadrature of ``u**n * density``.  Values are stored as
:class:`~strongmoments.logreal.LogReal` throughout -- already at modest n the
moments exceed the native float range when d is small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .distfn import Density, DistributionSpec, Domain, SinPerturbation, realize
from .logreal import LogReal
from .quad import DEFAULT_CONFIG, IntegralResult, NonConvergence, QuadratureConfig, integrate_log

__all__ = [
    "MomentEntry",
    "MomentTable",
    "closed_form_moment",
    "moment",
    "moment_table",
    "symmetrized_moments",
]

# decimal values are rendered in reports only below this log-magnitude
LN_RENDER_MAX = 700.0


@dataclass(frozen=True)
class MomentEntry:
    value: LogReal | None
    method: str            # "closed_form" | "quadrature" | "derived" | "failed"
    err_est: float
    error: str | None = None

    def ok(self) -> bool:
        return self.value is not None

    def to_json_dict(self, n: int) -> dict:
        if self.value is None:
            return {"n": n, "method": "failed", "error": self.error or "unknown"}
        out = {
            "n": n,
            "sign": self.value.sign,
            "ln_mag": None if self.value.sign == 0 else self.value.ln_mag,
            "method": self.method,
            "err_est": self.err_est,
        }
        if self.value.sign == 0:
            out["value"] = 0.0
        elif self.value.ln_mag < LN_RENDER_MAX:
            out["value"] = self.value.to_float()
        return out


@dataclass(frozen=True)
class MomentTable:
    spec: DistributionSpec
    n_min: int
    n_max: int
    entries: Mapping[int, MomentEntry]

    def __post_init__(self) -> None:
        missing = [n for n in range(self.n_min, self.n_max + 1) if n not in self.entries]
        if missing:
            raise ValueError(f"table is missing indices {missing[:5]}...")

    def value(self, n: int) -> LogReal:
        e = self.entries[n]
        if e.value is None:
            raise KeyError(f"moment n={n} failed: {e.error}")
        return e.value

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec.to_json_dict(),
            "n_min": self.n_min,
            "n_max": self.n_max,
            "entries": [self.entries[n].to_json_dict(n)
                        for n in range(self.n_min, self.n_max + 1)],
        }


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------

def _closed_form_family(spec: DistributionSpec) -> tuple[float, float] | None:
    """(c, d) when a distribution spec admits the log-normal closed form."""
    if spec.family not in ("lognormal-s", "lognormal-h"):
        return None
    c, d = float(spec.params["c"]), float(spec.params["d"])
    if not spec.modifiers:
        return c, d
    # the sine perturbation at c = 1 leaves every moment unchanged
    if (len(spec.modifiers) == 1 and isinstance(spec.modifiers[0], SinPerturbation)
            and c == 1.0):
        return c, d
    return None


def closed_form_moment(spec: DistributionSpec, n: int) -> LogReal | None:
    """Moment of order n by formula, or None when no closed form applies.

    lognormal-s: exp((n+1-c)**2 / (4d)) for every integer n.
    lognormal-h: the same at even n, exactly zero at odd n.
    """
    cd = _closed_form_family(spec)
    if cd is None:
        return None
    c, d = cd
    if spec.family == "lognormal-h" and n % 2 != 0:
        return LogReal.zero()
    return LogReal.from_ln((n + 1.0 - c) ** 2 / (4.0 * d))


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------

def _halfline_part(ln_w, n: int, cfg: QuadratureConfig,
                   breakpoints=()) -> IntegralResult:
    def log_integrand(u: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            return ln_w(u) + n * np.log(u)

    return integrate_log(log_integrand, Domain.POSITIVE_HALF_LINE, cfg,
                         breakpoints=breakpoints)


def _mass_sum(masses, n: int) -> LogReal:
    total = LogReal.zero()
    for (x, m) in masses:
        sign = 1 if x > 0 or n % 2 == 0 else -1
        total = total + LogReal.from_ln(math.log(m) + n * math.log(abs(x)), sign)
    return total


def moment(w: Density, n: int, cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[LogReal, float]:
    """Quadrature moment of order n plus the point-mass contribution.

    Returns (value, relative error estimate).  Real-line densities are split
    at the origin into two half-line integrals combined with the sign
    (-1)**n.
    """
    if w.domain is Domain.POSITIVE_HALF_LINE:
        res = _halfline_part(w.log_density, n, cfg, w.breakpoints)
        value, err = res.value, res.err_est
    else:
        bp_pos = [b for b in w.breakpoints if b > 0]
        bp_neg = [-b for b in w.breakpoints if b < 0]
        pos = _halfline_part(w.log_density, n, cfg, bp_pos)
        neg = _halfline_part(lambda u: w.log_density(-u), n, cfg, bp_neg)
        signed_neg = neg.value if n % 2 == 0 else -neg.value
        value = pos.value + signed_neg
        if value.sign == 0:
            err = max(pos.err_est, neg.err_est)
        else:
            # scale each part's relative error to the combined value
            err = 0.0
            for part, e in ((pos.value, pos.err_est), (neg.value, neg.err_est)):
                if part.sign != 0:
                    err += e * math.exp(min(part.ln_mag - value.ln_mag, 50.0))
    return value + _mass_sum(w.point_masses, n), err


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------

def moment_table(spec: DistributionSpec, n_min: int, n_max: int,
                 method: str = "auto",
                 cfg: QuadratureConfig = DEFAULT_CONFIG) -> MomentTable:
    """Moments for every n in [n_min, n_max].

    ``method`` is one of ``auto`` (closed form when available), ``closed-form``
    (error if unavailable) and ``quadrature`` (cross-checks the closed forms).
    A failing entry is marked failed; the rest of the table stands.
    """
    if n_min > n_max:
        raise ValueError(f"empty range [{n_min}, {n_max}]")
    if method not in ("auto", "closed-form", "quadrature"):
        raise ValueError(f"unknown method {method!r}")

    use_closed = method in ("auto", "closed-form") and _closed_form_family(spec) is not None
    if method == "closed-form" and not use_closed:
        raise ValueError(f"no closed form for {spec.label()}")

    entries: dict[int, MomentEntry] = {}
    dens = None if use_closed else realize(spec)
    for n in range(n_min, n_max + 1):
        if use_closed:
            entries[n] = MomentEntry(closed_form_moment(spec, n), "closed_form", 0.0)
            continue
        try:
            value, err = moment(dens, n, cfg)
            entries[n] = MomentEntry(value, "quadrature", err)
        except NonConvergence as exc:
            entries[n] = MomentEntry(None, "failed", math.nan, str(exc))
    return MomentTable(spec, n_min, n_max, entries)


def symmetrized_moments(table: MomentTable) -> MomentTable:
    """Table of (mu_n + mu_-n)/2, the moments after symmetrization."""
    if table.n_min != -table.n_max:
        raise ValueError(f"range [{table.n_min}, {table.n_max}] is not symmetric about 0")
    half = LogReal.from_float(0.5)
    entries: dict[int, MomentEntry] = {}
    for n in range(table.n_min, table.n_max + 1):
        a, b = table.entries[n], table.entries[-n]
        if a.value is None or b.value is None:
            entries[n] = MomentEntry(None, "failed", math.nan,
                                     a.error or b.error or "missing input entry")
            continue
        entries[n] = MomentEntry(half * (a.value + b.value), "derived",
                                 0.5 * (a.err_est + b.err_est))
    return MomentTable(table.spec, table.n_min, table.n_max, entries)
