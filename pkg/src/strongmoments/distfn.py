"""Distribution functions as densities with point masses.

A :class:`Density` is the absolutely continuous part (given by a vectorized
log-density evaluator; ``-inf`` means zero density) plus finitely many point
masses.  :class:`DistributionSpec` is the declarative, serializable twin used
by the CLI and the JSON interfaces.

Supported base families
-----------------------
``lognormal-s``    sqrt(d/pi) * exp(-d*(ln u)^2) * u**-c          on (0, inf)
``lognormal-h``    0.5*sqrt(d/pi) * exp(-d*(ln|u|)^2) * |u|**-c   on R
``family9``        exp(-x**(-1/(2+d))) on (0,1), exp(-x**(1/(2+d))) on [1,inf)
``classical-seed`` named classical seeds restricted to [1, inf)

The ``lognormal-s`` density is normalized so that its moments are exactly
``exp((n+1-c)**2 / (4*d))``; ``lognormal-h`` keeps the extra factor 1/2, under
which even moments are ``exp((2k+1-c)**2 / (4*d))`` and odd moments vanish.

Modifiers (applied left to right):

* ``SinPerturbation(s, k)`` -- multiply the density by ``1 + s*g(u)`` with
  ``g(u) = sin(2*pi*d*k*ln u)`` (d from the base family); this is the
  classical moment-preserving perturbation of the log-normal family.
* ``Symmetrized`` -- average with the inversion pushforward.
* ``SymmetricExtension`` -- extend a density on [1, inf) to (0, inf) by the
  inversion rule.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .quad import Domain

__all__ = [
    "Domain",
    "Density",
    "SinPerturbation",
    "Symmetrized",
    "SymmetricExtension",
    "DistributionSpec",
    "SpecError",
    "realize",
    "invert_pushforward",
    "is_symmetric",
    "apply_perturbation",
    "symmetric_extension",
    "default_symmetry_grid",
]

FAMILIES = ("lognormal-s", "lognormal-h", "family9", "classical-seed")


class SpecError(ValueError):
    """A distribution spec violates its parameter or modifier contract."""


# --------------------------------------------------------------------------
# density
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Density:
    """Nonnegative density with domain tag and optional point masses.

    ``log_density`` maps arrays of points in the domain to log values
    (-inf allowed, +inf never).  ``zero_points(lo, hi)``, when present,
    returns locations of isolated interior zeros of the density; integrators
    use them to handle the logarithmic singularities of ``log(density)``.
    """

    domain: Domain
    log_density: Callable[[np.ndarray], np.ndarray]
    point_masses: tuple[tuple[float, float], ...] = ()
    label: str = ""
    zero_points: Callable[[float, float], np.ndarray] | None = None
    breakpoints: tuple[float, ...] = ()  # non-smooth points of the log-density

    def __post_init__(self) -> None:
        for (x, m) in self.point_masses:
            if m <= 0:
                raise ValueError(f"point mass must be positive, got {m} at {x}")
            if self.domain is Domain.POSITIVE_HALF_LINE and x <= 0:
                raise ValueError(f"point mass location {x} outside (0, inf)")

    def __call__(self, u: np.ndarray | float) -> np.ndarray:
        """Density values exp(log_density(u))."""
        with np.errstate(all="ignore"):
            return np.exp(self.log_density(np.asarray(u, dtype=float)))

    def ln(self, u: np.ndarray | float) -> np.ndarray:
        with np.errstate(all="ignore"):
            out = np.asarray(self.log_density(np.asarray(u, dtype=float)), dtype=float)
        if np.any(out == np.inf):
            raise ValueError(f"log-density returned +inf ({self.label})")
        return out


# --------------------------------------------------------------------------
# specs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SinPerturbation:
    s: float
    k: int

    def __post_init__(self) -> None:
        if not -1.0 <= self.s <= 1.0:
            raise SpecError(f"perturbation size s must be in [-1, 1], got {self.s}")
        if int(self.k) != self.k or self.k < 1:
            raise SpecError(f"frequency index k must be a positive integer, got {self.k}")


@dataclass(frozen=True)
class Symmetrized:
    pass


@dataclass(frozen=True)
class SymmetricExtension:
    pass


Modifier = SinPerturbation | Symmetrized | SymmetricExtension


@dataclass(frozen=True)
class DistributionSpec:
    family: str
    params: Mapping[str, object] = field(default_factory=dict)
    modifiers: tuple[Modifier, ...] = ()

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "modifiers", tuple(self.modifiers))
        self._validate_params()

    def _validate_params(self) -> None:
        p = self.params
        if self.family in ("lognormal-s", "lognormal-h"):
            c, d = p.get("c"), p.get("d")
            if c is None or d is None:
                raise SpecError(f"{self.family} needs params c and d")
            if not (isinstance(d, (int, float)) and d > 0):
                raise SpecError(f"width parameter d must be positive, got {d}")
        elif self.family == "family9":
            d = p.get("d")
            if d is None or not (0.0 <= float(d) <= 1.0):
                raise SpecError(f"family9 needs d in [0, 1], got {d}")
        elif self.family == "classical-seed":
            name = p.get("name")
            if name != "trunc-exp":
                raise SpecError(f"unknown classical seed {name!r}; expected 'trunc-exp'")
            rate = p.get("rate", 1.0)
            if not rate > 0:
                raise SpecError(f"seed rate must be positive, got {rate}")

    @property
    def base_domain(self) -> Domain:
        return Domain.REAL_LINE if self.family == "lognormal-h" else Domain.POSITIVE_HALF_LINE

    def label(self) -> str:
        ps = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        out = f"{self.family}({ps})"
        for m in self.modifiers:
            if isinstance(m, SinPerturbation):
                out += f" + sin(s={m.s}, k={m.k})"
            elif isinstance(m, Symmetrized):
                out += " + symmetrized"
            else:
                out += " + symmetric-extension"
        return out

    # --- JSON -------------------------------------------------------------

    def to_json_dict(self) -> dict:
        mods = []
        for m in self.modifiers:
            if isinstance(m, SinPerturbation):
                mods.append({"type": "sin_perturbation", "s": m.s, "k": m.k})
            elif isinstance(m, Symmetrized):
                mods.append({"type": "symmetrized"})
            else:
                mods.append({"type": "symmetric_extension"})
        return {"family": self.family, "params": dict(self.params), "modifiers": mods}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(obj: Mapping) -> DistributionSpec:
        mods: list[Modifier] = []
        for m in obj.get("modifiers", []):
            kind = m.get("type")
            if kind == "sin_perturbation":
                mods.append(SinPerturbation(float(m["s"]), int(m["k"])))
            elif kind == "symmetrized":
                mods.append(Symmetrized())
            elif kind == "symmetric_extension":
                mods.append(SymmetricExtension())
            else:
                raise SpecError(f"unknown modifier type {kind!r}")
        return DistributionSpec(obj["family"], obj.get("params", {}), tuple(mods))

    @staticmethod
    def from_json(text: str) -> DistributionSpec:
        return DistributionSpec.from_json_dict(json.loads(text))


# --------------------------------------------------------------------------
# realization
# --------------------------------------------------------------------------

def _base_density(spec: DistributionSpec) -> Density:
    p = spec.params
    if spec.family == "lognormal-s":
        c, d = float(p["c"]), float(p["d"])

        def ln_w(u, c=c, d=d):
            with np.errstate(all="ignore"):
                lu = np.log(np.asarray(u, dtype=float))
                out = 0.5 * np.log(d / np.pi) - d * lu * lu - c * lu
            return np.where(np.isnan(out), -np.inf, out)

        return Density(Domain.POSITIVE_HALF_LINE, ln_w, label=spec.label())

    if spec.family == "lognormal-h":
        c, d = float(p["c"]), float(p["d"])

        def ln_w(u, c=c, d=d):
            with np.errstate(all="ignore"):
                lu = np.log(np.abs(np.asarray(u, dtype=float)))
                out = math.log(0.5) + 0.5 * np.log(d / np.pi) - d * lu * lu - c * lu
            return np.where(np.isnan(out), -np.inf, out)

        return Density(Domain.REAL_LINE, ln_w, label=spec.label())

    if spec.family == "family9":
        d = float(p["d"])
        pw = 2.0 + d

        def ln_w(x, pw=pw):
            x = np.asarray(x, dtype=float)
            with np.errstate(all="ignore"):
                out = np.where(x >= 1.0, -x ** (1.0 / pw),
                               -np.where(x > 0, x, np.nan) ** (-1.0 / pw))
            return np.where(np.isnan(out), -np.inf, out)

        return Density(Domain.POSITIVE_HALF_LINE, ln_w, label=spec.label(),
                       breakpoints=(1.0,))

    # classical-seed trunc-exp: rate*exp(-rate*x)-shaped tail on [1, inf)
    rate = float(p.get("rate", 1.0))

    def ln_w(x, rate=rate):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 1.0, -rate * x, -np.inf)

    return Density(Domain.POSITIVE_HALF_LINE, ln_w, label=spec.label(),
                   breakpoints=(1.0,))


def _sin_perturbed(dens: Density, spec: DistributionSpec, mod: SinPerturbation) -> Density:
    if dens.domain is not Domain.POSITIVE_HALF_LINE:
        raise SpecError("sin perturbation requires a positive-half-line base")
    d = spec.params.get("d")
    if d is None:
        raise SpecError("sin perturbation needs a base family with a width parameter d")
    b = 2.0 * math.pi * float(d) * mod.k  # frequency that kills every moment shift
    s = float(mod.s)
    base_ln = dens.log_density

    if abs(s) == 1.0:
        # 1 +- sin(theta) = 2*cos(pi/4 -+ theta/2)^2, stable near the zeros
        sgn = 1.0 if s > 0 else -1.0

        def ln_w(u, base_ln=base_ln, b=b, sgn=sgn):
            u = np.asarray(u, dtype=float)
            with np.errstate(all="ignore"):
                theta = b * np.log(u)
                cc = np.abs(np.cos(np.pi / 4.0 - sgn * theta / 2.0))
                pert = np.where(cc > 0.0, math.log(2.0) + 2.0 * np.log(cc), -np.inf)
                return base_ln(u) + pert

        def zeros(lo, hi, b=b, sgn=sgn):
            # sin(b*t) = -sgn at t = (m - sgn/4) * 2*pi/b
            if not (hi > lo > 0):
                return np.array([])
            tlo, thi = math.log(lo), math.log(hi)
            step = 2.0 * math.pi / b
            m0 = math.floor(tlo / step + sgn * 0.25)
            ts = np.arange(m0 - 1, math.ceil(thi / step + sgn * 0.25) + 2) * step \
                - sgn * 0.25 * step
            ts = ts[(ts > tlo) & (ts < thi)]
            return np.exp(ts)

        return Density(dens.domain, ln_w, dens.point_masses, dens.label, zeros,
                       dens.breakpoints)

    def ln_w(u, base_ln=base_ln, b=b, s=s):
        u = np.asarray(u, dtype=float)
        with np.errstate(all="ignore"):
            arg = s * np.sin(b * np.log(u))
            pert = np.where(arg > -1.0, np.log1p(np.maximum(arg, -1.0)), -np.inf)
            return base_ln(u) + pert

    return Density(dens.domain, ln_w, dens.point_masses, dens.label,
                   breakpoints=dens.breakpoints)


def realize(spec: DistributionSpec) -> Density:
    """Materialize a spec as an evaluable density, modifiers left to right."""
    dens = _base_density(spec)
    for mod in spec.modifiers:
        if isinstance(mod, SinPerturbation):
            dens = _sin_perturbed(dens, spec, mod)
        elif isinstance(mod, Symmetrized):
            from .symmetry import symmetrize
            dens = symmetrize(dens)
        else:
            dens = symmetric_extension(dens)
    return replace(dens, label=spec.label())


# --------------------------------------------------------------------------
# density operations
# --------------------------------------------------------------------------

def _inverted_log_density(base_ln: Callable) -> Callable:
    def ln_w(u, base_ln=base_ln):
        u = np.asarray(u, dtype=float)
        with np.errstate(all="ignore"):
            return base_ln(1.0 / u) - 2.0 * np.log(np.abs(u))
    return ln_w


def invert_pushforward(w: Density) -> Density:
    """Pushforward of the measure under u -> 1/u.

    At density level ``w*(u) = w(1/u) / u**2``; point masses move from x to
    1/x with unchanged weight, so total mass is preserved.  An involution.
    """
    if w.domain is Domain.REAL_LINE and any(x == 0 for x, _ in w.point_masses):
        raise ValueError("inversion undefined: point mass at the origin")
    masses = tuple((1.0 / x, m) for (x, m) in w.point_masses)
    zeros = None
    if w.zero_points is not None:
        base_zeros = w.zero_points

        def zeros(lo, hi, base_zeros=base_zeros):
            z = base_zeros(1.0 / hi, 1.0 / lo)
            return 1.0 / z[z != 0]

    bps = tuple(1.0 / b for b in w.breakpoints if b != 0)
    return Density(w.domain, _inverted_log_density(w.log_density), masses,
                   f"inv[{w.label}]", zeros, bps)


def default_symmetry_grid(n: int = 100, span: float = 8.0) -> np.ndarray:
    """Log-spaced probe grid on (e^-span, e^span), excluding u = 0."""
    return np.exp(np.linspace(-span, span, n))


def is_symmetric(w: Density, grid: Sequence[float] | np.ndarray | None = None,
                 tol: float = 1e-9) -> tuple[bool, float]:
    """Test invariance of the measure under u -> 1/u on a grid.

    Compares ``log w(u)`` with ``log w(1/u) - 2 ln|u|`` pointwise (the
    log-space gap is the relative deviation of the densities) and requires
    the point masses to be closed under inversion.  Returns (verdict,
    max deviation).
    """
    if grid is None:
        grid = default_symmetry_grid()
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty symmetry grid")
    if np.any(grid <= 0):
        raise ValueError("symmetry grid points must be positive")
    if w.domain is Domain.REAL_LINE:
        grid = np.concatenate([grid, -grid])

    a = w.ln(grid)
    b = w.ln(1.0 / grid) - 2.0 * np.log(np.abs(grid))
    both_zero = (a == -np.inf) & (b == -np.inf)
    with np.errstate(invalid="ignore"):
        dev = np.abs(a - b)
    dev[both_zero] = 0.0
    max_dev = float(np.max(np.where(np.isnan(dev), np.inf, dev)))

    masses_ok = _masses_inversion_closed(w.point_masses, tol)
    return (max_dev < tol) and masses_ok, max_dev


def _masses_inversion_closed(masses: Sequence[tuple[float, float]], tol: float) -> bool:
    if not masses:
        return True
    items = list(masses)
    for (x, m) in items:
        inv = 1.0 / x
        match = [mm for (xx, mm) in items if math.isclose(xx, inv, rel_tol=1e-12)]
        if not match or not math.isclose(sum(match), m, rel_tol=max(tol, 1e-12)):
            return False
    return True


def apply_perturbation(w: Density, s: float, g: Callable[[np.ndarray], np.ndarray]) -> Density:
    """Density of ``w(u) * (1 + s*g(u))`` for |s| <= 1, |g| <= 1.

    Where ``1 + s*g(u)`` vanishes the log-density is -inf.  The base must be
    absolutely continuous (no point masses).
    """
    if not -1.0 <= s <= 1.0:
        raise ValueError(f"|s| must be <= 1 for a nonnegative density, got {s}")
    if w.point_masses:
        raise ValueError("perturbation applies to absolutely continuous densities")
    if s == 0.0:
        return w
    base_ln = w.log_density

    def ln_w(u, base_ln=base_ln, s=s, g=g):
        u = np.asarray(u, dtype=float)
        with np.errstate(all="ignore"):
            arg = s * np.asarray(g(u), dtype=float)
            pert = np.where(arg > -1.0, np.log1p(np.maximum(arg, -1.0)), -np.inf)
            return base_ln(u) + pert

    return Density(w.domain, ln_w, (), f"perturbed[{w.label}]",
                   breakpoints=w.breakpoints)


def symmetric_extension(alpha1: Density) -> Density:
    """Extend a density on [1, inf) to a symmetric one on (0, inf).

    ``w~(x) = w(1/x)/x**2`` on (0,1) and ``w~(x) = w(x)`` on [1, inf); point
    masses above 1 gain mirror images at 1/x, a mass at exactly 1 is kept
    once.  The result is inversion-symmetric by construction.
    """
    if alpha1.domain is not Domain.POSITIVE_HALF_LINE:
        raise ValueError("symmetric extension needs a positive-half-line density")
    probe = np.exp(np.linspace(-10.0, -1e-9, 64))
    if np.any(alpha1.ln(probe) > -np.inf):
        raise ValueError("density must be supported on [1, inf)")
    if any(x < 1.0 for (x, _) in alpha1.point_masses):
        raise ValueError("point masses must lie in [1, inf)")
    base_ln = alpha1.log_density

    def ln_w(x, base_ln=base_ln):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            upper = base_ln(np.maximum(x, 1.0))
            lower = base_ln(1.0 / np.minimum(np.where(x > 0, x, np.nan), 1.0)) \
                - 2.0 * np.log(np.where(x > 0, x, np.nan))
            out = np.where(x >= 1.0, upper, lower)
        return np.where(np.isnan(out), -np.inf, out)

    masses = list(alpha1.point_masses)
    masses += [(1.0 / x, m) for (x, m) in alpha1.point_masses if x > 1.0]
    bps = {1.0}
    for b in alpha1.breakpoints:
        if b > 0:
            bps.update((b, 1.0 / b))
    return Density(Domain.POSITIVE_HALF_LINE, ln_w, tuple(masses),
                   f"sym-ext[{alpha1.label}]", breakpoints=tuple(sorted(bps)))
