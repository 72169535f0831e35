"""Constructive indeterminacy witnesses.

For the symmetric log-normal family (c = 1, width d) the density multiplier
``1 + s*sin(2*pi*d*k*ln u)`` changes the distribution without changing any
moment: with t = ln u the perturbation integral is proportional to

    Im integral exp(n*t - d*t^2 + i*b*t) dt
        = sqrt(pi/d) * exp((n^2 - b^2)/(4d)) * sin(n*b/(2d)),

which vanishes for every integer n exactly when b = 2*pi*d*k.  The witness
pair (base, perturbed) is therefore two distinct distributions sharing all
two-sided moments, and the verifier below checks both facts numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .criteria import KreinResult, krein_stieltjes
from .distfn import Density, DistributionSpec, Domain, SinPerturbation, realize
from .moments import moment
from .quad import DEFAULT_CONFIG, NonConvergence, QuadratureConfig

__all__ = ["WitnessReport", "witness_spec", "lognormal_witness",
           "verify_same_moments", "verify_witness", "krein_of_witness"]

MOMENT_MATCH_TOL = 1e-8
SEPARATION_FLOOR = 1e-3


@dataclass(frozen=True)
class WitnessReport:
    base_spec: DistributionSpec
    s: float
    k: int
    n_range: tuple[int, int]
    deviations: dict[int, float]
    max_deviation: float
    distinctness: float          # L1 grid distance between the densities
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "spec": self.base_spec.to_json_dict(),
            "perturbation": {"s": self.s, "k": self.k},
            "n_range": list(self.n_range),
            "deviations": {str(n): v for n, v in sorted(self.deviations.items())},
            "max_deviation": self.max_deviation,
            "distinctness": self.distinctness,
            "passed": self.passed,
        }


def witness_spec(d: float, s: float, k: int) -> DistributionSpec:
    return DistributionSpec("lognormal-s", {"c": 1.0, "d": float(d)},
                            (SinPerturbation(float(s), int(k)),))


def lognormal_witness(d: float, s: float, k: int) -> Density:
    """Perturbed density sharing all two-sided moments with the c=1 base."""
    if d <= 0:
        raise ValueError(f"width parameter d must be positive, got {d}")
    return realize(witness_spec(d, s, k))


def _l1_grid_distance(w1: Density, w2: Density, span: float = 30.0,
                      n_pts: int = 4001) -> float:
    """Trapezoid L1 distance on a log-spaced grid (both half-lines for R)."""
    t = np.linspace(-span, span, n_pts)
    u = np.exp(t)
    total = 0.0
    branches = [u] if w1.domain is Domain.POSITIVE_HALF_LINE else [u, -u]
    for b in branches:
        diff = np.abs(w1(b) - w2(b)) * u  # du = e^t dt
        total += float(np.trapezoid(diff, t))
    return total


def verify_same_moments(w1: Density, w2: Density, n_min: int = -8, n_max: int = 8,
                        cfg: QuadratureConfig = DEFAULT_CONFIG,
                        tol: float = MOMENT_MATCH_TOL,
                        separation_floor: float = SEPARATION_FLOOR,
                        base_spec: DistributionSpec | None = None,
                        s: float = math.nan, k: int = 0) -> WitnessReport:
    """Check that two densities share moments yet differ as distributions.

    Moments of both densities are computed by quadrature (no closed forms:
    the check must not assume what it verifies).  ``passed`` requires every
    relative deviation below ``tol`` and L1 separation above the floor.
    """
    deviations: dict[int, float] = {}
    for n in range(n_min, n_max + 1):
        try:
            m1, _ = moment(w1, n, cfg)
            m2, _ = moment(w2, n, cfg)
            deviations[n] = m1.rel_diff(m2)
        except NonConvergence:
            deviations[n] = math.inf
    max_dev = max(deviations.values())
    distinctness = _l1_grid_distance(w1, w2)
    passed = max_dev < tol and distinctness > separation_floor
    spec = base_spec if base_spec is not None else DistributionSpec(
        "lognormal-s", {"c": 1.0, "d": 1.0})
    return WitnessReport(spec, s, k, (n_min, n_max), deviations, max_dev,
                         distinctness, passed)


def verify_witness(d: float, s: float, k: int, n_max: int = 8,
                   cfg: QuadratureConfig = DEFAULT_CONFIG) -> WitnessReport:
    """Witness report for the log-normal pair at (d, s, k)."""
    base = realize(DistributionSpec("lognormal-s", {"c": 1.0, "d": float(d)}))
    pert = lognormal_witness(d, s, k)
    return verify_same_moments(base, pert, -n_max, n_max, cfg,
                               base_spec=witness_spec(d, s, k), s=s, k=k)


def krein_of_witness(d: float, s: float, k: int,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> KreinResult:
    """Krein integral of the witness density.

    Finite for |s| < 1 trivially; at |s| = 1 the density has isolated zeros
    whose log-singularities are integrable, so the integral stays finite and
    the -inf flag must not fire.
    """
    if not -1.0 <= s <= 1.0:
        raise ValueError(f"|s| must be <= 1, got {s}")
    return krein_stieltjes(lognormal_witness(d, s, k), cfg)
