"""Log-space adaptive quadrature on (0, inf) and (-inf, inf).

Integrals here have values like ``exp(n**2/(4*d))``, so every accumulation is
peak-normalized: the maximum of the log-integrand over the current mesh is
subtracted before exponentiation and re-added at the end.  Integrands on the
positive half line are transformed through ``t = ln(u)`` first, which turns
all supported densities into sub-Gaussian or sub-exponential functions of t
and makes truncation points computable from the log-integrand itself.

Two entry points:

* :func:`integrate_log` -- nonnegative integrand given by its log.
* :func:`integrate_signed` -- signed integrand given by (log|f|, sign(f));
  positive and negative parts are accumulated separately and combined in
  :class:`~strongmoments.logreal.LogReal` arithmetic.  Supports divergence
  bookkeeping (for log-density integrals that may be -inf) and integrable
  logarithmic singularities at known locations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .logreal import LogReal

__all__ = [
    "Domain",
    "QuadratureConfig",
    "NonConvergence",
    "IntegralResult",
    "SignedResult",
    "integrate_log",
    "integrate_signed",
]


class Domain(Enum):
    POSITIVE_HALF_LINE = "positive_half_line"
    REAL_LINE = "real_line"


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and refinement limits for the quadrature engine.

    ``abs_ln_floor`` is the cutoff below the peak of the log-integrand at
    which the integrand is considered zero (exp(-745) underflows).
    ``truncation_growth`` is the window growth factor used when an integrand
    shows no natural decay and divergence must be diagnosed.
    """

    rel_tol: float = 1e-10
    abs_ln_floor: float = -745.0
    max_levels: int = 12
    truncation_growth: float = 2.0
    base_nodes: int = 64

    def __post_init__(self) -> None:
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
        if self.max_levels < 1:
            raise ValueError("max_levels must be >= 1")
        if self.truncation_growth <= 1:
            raise ValueError("truncation_growth must exceed 1")


DEFAULT_CONFIG = QuadratureConfig()


class NonConvergence(RuntimeError):
    """Refinement limit hit with the error estimate above tolerance."""

    def __init__(self, message: str, estimate: LogReal | None = None,
                 err_est: float = math.nan):
        super().__init__(message)
        self.estimate = estimate
        self.err_est = err_est


@dataclass(frozen=True)
class IntegralResult:
    value: LogReal
    err_est: float  # relative (log-space difference of the last refinement)


@dataclass(frozen=True)
class SignedResult:
    value: LogReal
    err_abs: float       # absolute error bound on the value
    minus_inf: bool      # truncated values decreased without bound
    cancelled: bool      # positive and negative parts agreed within the error


# --------------------------------------------------------------------------
# peak location and truncation
# --------------------------------------------------------------------------

def _eval(fn: Callable[[np.ndarray], np.ndarray], t: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.asarray(fn(t), dtype=float)


def _find_peak(psi, lo: float = -64.0, hi: float = 64.0, coarse: int = 1024,
               expand: float = 8.0, max_expand: int = 6,
               bound: float = 1e8) -> tuple[float, float]:
    """Coarse scan plus golden-section refinement of the log-integrand max."""
    lo, hi = max(lo, -bound), min(hi, bound)
    t = np.linspace(lo, hi, coarse)
    for _ in range(max_expand):
        v = _eval(psi, t)
        v = np.where(np.isnan(v), -np.inf, v)
        i = int(np.argmax(v))
        if i == 0 and lo > -bound:
            lo = max(lo * expand, -bound)
        elif i == coarse - 1 and hi < bound:
            hi = min(hi * expand, bound)
        else:
            break
        t = np.linspace(lo, hi, coarse)
    if not np.isfinite(v[i]):
        return t[i], -math.inf
    a, b = t[max(i - 1, 0)], t[min(i + 1, coarse - 1)]
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = float(_eval(psi, np.array([c]))[0]), float(_eval(psi, np.array([d]))[0])
    for _ in range(90):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = float(_eval(psi, np.array([c]))[0])
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = float(_eval(psi, np.array([d]))[0])
        if b - a <= 1e-13 * max(1.0, abs(a), abs(b)):
            break
    tp = 0.5 * (a + b)
    return tp, float(_eval(psi, np.array([tp]))[0])


def _walk_cutoff(psi, start: float, direction: float, thresh: float,
                 step0: float = 0.5, grow: float = 1.4,
                 max_steps: int = 200, bound: float = 1e8) -> tuple[float, bool]:
    """March away from the peak until the log-integrand stays below thresh.

    Requires three consecutive probes below the threshold so that bounded
    oscillations (sine perturbations) cannot fake a cutoff.  Walking past
    ``bound`` counts as failure: beyond it the integrand evaluation is not
    trusted (float overflow inside transformed integrands mimics decay).
    """
    t, step, below = start, step0, 0
    for _ in range(max_steps):
        t += direction * step
        if abs(t) > bound:
            # accept truncation at the trust bound if the integrand has
            # decayed most of the way there (tail error is reported)
            edge = bound if direction > 0 else -bound
            v = float(_eval(psi, np.array([edge]))[0])
            return edge, (not math.isnan(v)) and v < thresh + 9.2
        v = float(_eval(psi, np.array([t]))[0])
        if math.isnan(v):
            v = math.inf  # overflow in the integrand: not decayed
        below = below + 1 if v < thresh else 0
        if below >= 3:
            return t, True
        step = min(step * grow, 24.0)  # don't overshoot slow tails past bound
    return t, False


# --------------------------------------------------------------------------
# positive integrands
# --------------------------------------------------------------------------

def _segment_plan(lo: float, hi: float, joints: Sequence[float],
                  n_total: int) -> list[tuple[float, float, int]]:
    """Partition [lo, hi] at the joints with base interval counts.

    Nodes land exactly on non-smooth points of the integrand, and interval
    counts double exactly across refinement levels so that Richardson
    extrapolation stays valid.  Pieces stop a hair short of their right
    joint: at a jump the function value there belongs to the next piece.
    """
    pts = [lo] + sorted(j for j in joints if lo < j < hi) + [hi]
    span = hi - lo
    plan = []
    for a, b in zip(pts[:-1], pts[1:]):
        right = b - 1e-13 * max(1.0, abs(b)) if b != hi else b
        plan.append((a, right, max(16, int(round(n_total * (b - a) / span)))))
    return plan


def _plan_mesh(plan, lev: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and log trapezoid weights for every piece of a plan, batched
    over pieces with equal interval counts."""
    groups: dict[int, list[tuple[float, float]]] = {}
    for (a, b, n0) in plan:
        groups.setdefault(n0 * 2 ** lev, []).append((a, b))
    nodes, ln_w = [], []
    half = math.log(0.5)
    for n, spans in groups.items():
        ab = np.asarray(spans, dtype=float)         # (P, 2)
        frac = np.linspace(0.0, 1.0, n + 1)
        t = ab[:, :1] + (ab[:, 1:] - ab[:, :1]) * frac[None, :]
        with np.errstate(divide="ignore"):
            w = np.broadcast_to(np.log((ab[:, 1] - ab[:, 0]) / n)[:, None],
                                t.shape).copy()
        w[:, 0] += half
        w[:, -1] += half
        nodes.append(t.ravel())
        ln_w.append(w.ravel())
    return np.concatenate(nodes), np.concatenate(ln_w)


def _trapz_ln(psi, lo: float, hi: float, peak_ln: float,
              cfg: QuadratureConfig, joints: Sequence[float] = ()) -> tuple[float, float]:
    """ln of the integral of exp(psi) on [lo, hi].

    Trapezoid with mesh doubling plus one Richardson step, which removes the
    h^2 endpoint/kink term of the Euler-Maclaurin expansion (decaying tails
    contribute none of their own).
    """
    plan = _segment_plan(lo, hi, joints, cfg.base_nodes)
    prev_t, prev_s, err = None, None, math.inf
    for lev in range(cfg.max_levels):
        t, ln_w = _plan_mesh(plan, lev)
        v = _eval(psi, t) - peak_ln + ln_w
        w = np.exp(np.where(np.isnan(v), -np.inf, v))
        total = float(np.sum(w))
        s = math.log(total) + peak_ln if total > 0 else -math.inf
        if s == -math.inf:
            if prev_t == -math.inf:
                return -math.inf, 0.0
            prev_t, prev_s = s, s
            continue
        if prev_t is not None and prev_t != -math.inf:
            s_acc = s + math.log((4.0 - math.exp(prev_t - s)) / 3.0)
        else:
            s_acc = s
        if prev_s is not None:
            err = abs(s_acc - prev_s)
            if err < cfg.rel_tol:
                return s_acc, err
        prev_t, prev_s = s, s_acc
    raise NonConvergence("log-integral did not converge",
                         LogReal.from_ln(prev_s if prev_s is not None else -math.inf),
                         err)


def _integrate_log_line(psi, cfg: QuadratureConfig,
                        joints: Sequence[float] = ()) -> IntegralResult:
    tp, fp = _find_peak(psi)
    if fp == -math.inf:
        return IntegralResult(LogReal.zero(), 0.0)
    thresh = fp + cfg.abs_ln_floor
    lo, _ = _walk_cutoff(psi, tp, -1.0, thresh)
    hi, _ = _walk_cutoff(psi, tp, +1.0, thresh)
    s, err = _trapz_ln(psi, lo, hi, fp, cfg, joints)
    if s == -math.inf:
        return IntegralResult(LogReal.zero(), 0.0)
    return IntegralResult(LogReal.from_ln(s), err)


def integrate_log(log_integrand: Callable[[np.ndarray], np.ndarray],
                  domain: Domain,
                  cfg: QuadratureConfig = DEFAULT_CONFIG,
                  *,
                  breakpoints: Sequence[float] = ()) -> IntegralResult:
    """Integrate ``exp(log_integrand)`` over the domain.

    For ``Domain.POSITIVE_HALF_LINE`` the substitution ``t = ln(u)`` is
    applied first, so the supplied callable is always evaluated at points of
    its own domain (u > 0).  ``breakpoints`` marks non-smooth points of the
    integrand (in domain coordinates); meshes always place nodes there.  The
    result satisfies, for integrands in the supported class,
    ``|exp(result) - true| <= rel_tol * true``.

    Raises
    ------
    NonConvergence
        refinement limit hit with the error estimate above tolerance.
    """
    if domain is Domain.POSITIVE_HALF_LINE:
        def psi(t: np.ndarray) -> np.ndarray:
            return log_integrand(np.exp(t)) + t

        joints = [math.log(b) for b in breakpoints if b > 0]
    else:
        psi = log_integrand
        joints = list(breakpoints)
    return _integrate_log_line(psi, cfg, joints)


# --------------------------------------------------------------------------
# signed integrands
# --------------------------------------------------------------------------

def _segments(lo: float, hi: float, sing: Sequence[float]) -> tuple[list[tuple[float, float]], list[float], float]:
    """Split [lo, hi] into smooth segments avoiding singular neighborhoods."""
    pts = sorted(s for s in sing if lo < s < hi)
    if not pts:
        return [(lo, hi)], [], 0.0
    gaps = np.diff([lo] + pts + [hi])
    delta = min(1.0, 0.45 * float(np.min(gaps)))
    segs = []
    left = lo
    for s in pts:
        if s - delta > left:
            segs.append((left, s - delta))
        left = s + delta
    if hi > left:
        segs.append((left, hi))
    return segs, pts, delta


def _mesh_pair(log_abs, sign_map, t: np.ndarray, ln_w: np.ndarray) -> tuple[LogReal, LogReal]:
    """Trapezoid accumulation of a signed mesh into (positive, negative) parts."""
    la = _eval(log_abs, t)
    la = np.where(np.isnan(la), -np.inf, la)
    sg = _eval(sign_map, t)
    parts = []
    for want in (1.0, -1.0):
        sel = la[sg == want] + ln_w[sg == want]
        if sel.size == 0:
            parts.append(LogReal.zero())
            continue
        m = float(np.max(sel))
        if m == -math.inf:
            parts.append(LogReal.zero())
            continue
        parts.append(LogReal.from_ln(m + math.log(float(np.sum(np.exp(sel - m))))))
    return parts[0], parts[1]


def _patch_parts(log_abs, sign_map, pts: np.ndarray, delta: float,
                 lev: int) -> tuple[LogReal, LogReal]:
    """(positive, negative) parts of all singular neighborhoods at one level.

    Each neighborhood [s-delta, s+delta] is integrated under tau = ln|t-s|,
    which turns the integrable log singularity into a smooth, exponentially
    decaying integrand; all neighborhoods share one tau mesh and a single
    vectorized evaluation.
    """
    t_hi = math.log(delta)
    # two-piece tau mesh: the e^tau factor concentrates everything near t_hi
    m_near, m_far = 24 * 2 ** lev, 8 * 2 ** lev
    tau_near, w_near = np.linspace(t_hi - 8.0, t_hi, m_near + 1), 8.0 / m_near
    tau_far, w_far = np.linspace(t_hi - 42.0, t_hi - 8.0, m_far + 1), 34.0 / m_far
    ln_w_near = np.full(m_near + 1, math.log(w_near))
    ln_w_far = np.full(m_far + 1, math.log(w_far))
    for w in (ln_w_near, ln_w_far):
        w[0] += math.log(0.5)
        w[-1] += math.log(0.5)
    tau = np.concatenate([tau_far, tau_near])
    ln_wt = np.concatenate([ln_w_far, ln_w_near])
    x = np.exp(tau)
    right = (pts[:, None] + x[None, :]).ravel()
    left = (pts[:, None] - x[None, :]).ravel()

    la_r = _eval(log_abs, right)
    la_l = _eval(log_abs, left)
    la_r = np.where(np.isnan(la_r), -np.inf, la_r)
    la_l = np.where(np.isnan(la_l), -np.inf, la_l)
    peak = max(float(np.max(la_r)), float(np.max(la_l)))
    if peak == -math.inf:
        return LogReal.zero(), LogReal.zero()
    vals = (_eval(sign_map, right) * np.exp(la_r - peak)
            + _eval(sign_map, left) * np.exp(la_l - peak))
    vals = vals * np.tile(np.exp(tau + ln_wt), len(pts))
    pos_sum = float(np.sum(vals[vals > 0]))
    neg_sum = -float(np.sum(vals[vals < 0]))
    pos = LogReal.from_ln(math.log(pos_sum) + peak) if pos_sum > 0 else LogReal.zero()
    neg = LogReal.from_ln(math.log(neg_sum) + peak) if neg_sum > 0 else LogReal.zero()
    return pos, neg


def _prune_singularities(log_abs, sing: Sequence[float], keep_ln: float) -> tuple[list[float], float]:
    """Keep only singular points whose neighborhood carries visible weight.

    A dropped point's cell integrates through the floor clip; the returned
    error term bounds the total contribution given up that way.
    """
    if not sing:
        return [], 0.0
    pts = np.asarray(sorted(sing), dtype=float)
    probes = pts + 1e-3  # just off the singular set, on the local envelope
    env = _eval(log_abs, probes)
    env = np.where(np.isnan(env), -np.inf, env)
    keep = env >= keep_ln
    dropped_ln = env[~keep]
    err = float(np.sum(np.exp(dropped_ln[dropped_ln > -np.inf]))) * 40.0
    return [float(p) for p in pts[keep]], err


def _window_value(log_abs, sign_map, lo: float, hi: float,
                  sing: Sequence[float], cfg: QuadratureConfig,
                  abs_ln_goal: float,
                  max_levels: int | None = None,
                  joints: Sequence[float] = ()) -> tuple[LogReal, float]:
    """Signed integral over [lo, hi]: global Romberg plus singular patches.

    All smooth pieces refine together under one global convergence test;
    singular neighborhoods are evaluated jointly per level.
    """
    if max_levels is None:
        max_levels = cfg.max_levels + 2
    base_sing, base_err = _prune_singularities(
        log_abs, [s for s in sing if lo < s < hi], abs_ln_goal + math.log(1e3))
    segs, pts, delta = _segments(lo, hi, base_sing)
    pts_arr = np.asarray(pts, dtype=float)

    plan: list[tuple[float, float, int]] = []
    for (a, b) in segs:
        inner = [j for j in joints if a < j < b]
        bounds = [a] + sorted(inner) + [b]
        for (p, q) in zip(bounds[:-1], bounds[1:]):
            plan.append((p, q, max(4, int(round(513 * (q - p) / (hi - lo))))))

    four = LogReal.from_float(4.0)
    third = LogReal.from_float(1.0 / 3.0)

    # patch contribution converges on its own; it then enters every level of
    # the smooth refinement as an exact constant
    patch = LogReal.zero()
    if len(pts_arr):
        # tolerance scaled to the whole window, estimated from a coarse pass
        scale0 = 0.0
        if plan:
            t0m, w0m = _plan_mesh(plan, 0)
            pos0, neg0 = _mesh_pair(log_abs, sign_map, t0m, w0m)
            scale0 = abs((pos0 - neg0).to_float()) + abs(pos0.to_float())
        goal = max(math.exp(abs_ln_goal), 0.5 * cfg.rel_tol * scale0)
        prev_pt: LogReal | None = None
        prev_pa: LogReal | None = None
        p_err = math.inf
        for lev in range(9):
            ppos, pneg = _patch_parts(log_abs, sign_map, pts_arr, delta, lev)
            pt = ppos - pneg
            patch = (four * pt - prev_pt) * third if prev_pt is not None else pt
            if prev_pa is not None:
                p_err = abs((patch - prev_pa).to_float())
                if p_err <= max(goal, 0.5 * cfg.rel_tol * abs(patch.to_float())):
                    break
            prev_pt, prev_pa = pt, patch
        base_err += p_err if math.isfinite(p_err) else 0.0
        if not plan:
            return patch, base_err

    prev_t: LogReal | None = None
    prev_s: LogReal | None = None
    err = math.inf
    best = LogReal.zero()
    for lev in range(max_levels):
        t, ln_w = _plan_mesh(plan, lev)
        pos, neg = _mesh_pair(log_abs, sign_map, t, ln_w)
        tv = pos - neg + patch
        sv = (four * tv - prev_t) * third if prev_t is not None else tv
        if prev_s is not None:
            diff = sv - prev_s
            err = abs(diff.to_float()) if diff.representable else math.inf
            scale = max(abs(sv.to_float()) if sv.representable else math.inf, 1e-300)
            if err <= max(math.exp(abs_ln_goal), cfg.rel_tol * scale):
                return sv, err + base_err
        prev_t, prev_s, best = tv, sv, sv
    return best, err + base_err


def integrate_signed(log_abs_integrand: Callable[[np.ndarray], np.ndarray],
                     sign_map: Callable[[np.ndarray], np.ndarray],
                     domain: Domain,
                     cfg: QuadratureConfig = DEFAULT_CONFIG,
                     *,
                     singularities: Sequence[float] = (),
                     breakpoints: Sequence[float] = (),
                     detect_divergence: bool = True,
                     abs_tol: float = 1e-10,
                     walk_bound: float | None = None) -> SignedResult:
    """Integrate ``sign_map * exp(log_abs_integrand)`` over the domain.

    Positive and negative parts are accumulated separately (peak-normalized)
    and combined in LogReal arithmetic.  ``singularities`` lists points with
    integrable logarithmic spikes; neighborhoods around them are integrated
    under a log substitution.  With ``detect_divergence`` the integral is
    declared ``minus_inf`` when values over growing truncation windows
    decrease by more than 1 for three consecutive windows.

    When the two parts agree to within the combined error estimate the value
    is reported as zero with ``cancelled`` set and ``err_abs`` an absolute
    bound.
    """
    if domain is Domain.POSITIVE_HALF_LINE:
        def la(t: np.ndarray) -> np.ndarray:
            return log_abs_integrand(np.exp(t)) + t

        def sg(t: np.ndarray) -> np.ndarray:
            return sign_map(np.exp(t))

        sing = [math.log(s) for s in singularities if s > 0]
        joints = [math.log(b) for b in breakpoints if b > 0]
        # below the point where squares/powers of u overflow to inf
        bound = 350.0 if walk_bound is None else walk_bound
    else:
        la, sg = log_abs_integrand, sign_map
        sing = list(singularities)
        joints = list(breakpoints)
        bound = 1e8 if walk_bound is None else walk_bound

    tp, fp = _find_peak(la, bound=bound)
    if fp == -math.inf and not sing:
        return SignedResult(LogReal.zero(), 0.0, False, False)
    thresh = fp + math.log(1e-15)
    lo, ok_lo = _walk_cutoff(la, tp, -1.0, thresh, step0=1.0, bound=bound)
    hi, ok_hi = _walk_cutoff(la, tp, +1.0, thresh, step0=1.0, bound=bound)

    if ok_lo and ok_hi:
        value, err = _window_value(la, sg, lo, hi, sing, cfg, thresh, joints=joints)
        edges = _eval(la, np.array([lo, hi]))
        edges = np.where(np.isnan(edges), -np.inf, edges)
        tail = float(np.sum(np.exp(edges))) * (hi - lo)
        return _finish_signed(value, err + tail)

    if not detect_divergence:
        raise NonConvergence("integrand shows no decay and divergence "
                             "detection is disabled")

    # No natural decay on at least one side: track values over growing
    # windows.  A drop of more than 1 per window, three windows in a row,
    # is read as divergence to -inf; stabilization as convergence.
    r0 = 8.0
    prev_val: float | None = None
    decreasing = 0
    value, err = LogReal.zero(), math.inf
    for lev in range(cfg.max_levels):
        r = r0 * cfg.truncation_growth ** lev
        wlo = lo if ok_lo else max(tp - r, -bound)
        whi = hi if ok_hi else min(tp + r, bound)
        value, err = _window_value(la, sg, wlo, whi, sing, cfg, thresh,
                                   max_levels=9, joints=joints)
        val = value.to_float()
        if prev_val is not None:
            delta = val - prev_val
            decreasing = decreasing + 1 if delta < -1.0 else 0
            if decreasing >= 3:
                return SignedResult(LogReal.zero(), math.nan, True, False)
            if abs(delta) <= max(abs_tol, cfg.rel_tol * abs(val)) and err <= 1e-8:
                return _finish_signed(value, abs(delta) + err)
        prev_val = val
    raise NonConvergence("signed integral did not converge", value, err)


def _finish_signed(value: LogReal, err: float) -> SignedResult:
    if value.sign != 0 and value.representable and abs(value.to_float()) <= err:
        return SignedResult(LogReal.zero(), err, False, True)
    if value.sign == 0:
        return SignedResult(value, err, False, True)
    return SignedResult(value, err, False, False)
