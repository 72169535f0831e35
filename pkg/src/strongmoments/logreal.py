"""Signed log-magnitude reals.

Moment sequences handled here routinely reach magnitudes like ``exp(n**2)``,
far beyond the range of native floats.  A :class:`LogReal` stores a value as
``sign * exp(ln_mag)`` so that products and quotients are exact shifts and
sums go through log-sum-exp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["LogReal"]

# exp(ln_mag) is representable as a float only below this
LN_FLOAT_MAX = 709.0


@dataclass(frozen=True)
class LogReal:
    """A real number stored as ``sign * exp(ln_mag)``.

    Invariant: ``sign == 0`` if and only if ``ln_mag == -inf``.
    """

    sign: int
    ln_mag: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if (self.sign == 0) != (self.ln_mag == -math.inf):
            raise ValueError(f"sign 0 <=> ln_mag -inf violated: {self}")
        if math.isnan(self.ln_mag) or self.ln_mag == math.inf:
            raise ValueError(f"ln_mag must be finite or -inf, got {self.ln_mag}")

    # --- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> LogReal:
        return LogReal(0, -math.inf)

    @staticmethod
    def one() -> LogReal:
        return LogReal(1, 0.0)

    @staticmethod
    def from_float(x: float) -> LogReal:
        if x == 0.0:
            return LogReal.zero()
        if math.isnan(x) or math.isinf(x):
            raise ValueError(f"cannot represent {x}")
        return LogReal(1 if x > 0 else -1, math.log(abs(x)))

    @staticmethod
    def from_ln(ln_mag: float, sign: int = 1) -> LogReal:
        if ln_mag == -math.inf:
            return LogReal.zero()
        return LogReal(sign, ln_mag)

    # --- conversions ------------------------------------------------------

    def to_float(self) -> float:
        """Nearest float; overflows to +-inf past the float range."""
        if self.sign == 0:
            return 0.0
        if self.ln_mag > LN_FLOAT_MAX:
            return math.inf * self.sign
        return self.sign * math.exp(self.ln_mag)

    @property
    def representable(self) -> bool:
        return self.ln_mag < LN_FLOAT_MAX

    def is_zero(self) -> bool:
        return self.sign == 0

    # --- arithmetic ---------------------------------------------------------

    def __neg__(self) -> LogReal:
        return LogReal(-self.sign, self.ln_mag)

    def __abs__(self) -> LogReal:
        return LogReal(abs(self.sign), self.ln_mag)

    def __mul__(self, other: LogReal) -> LogReal:
        s = self.sign * other.sign
        if s == 0:
            return LogReal.zero()
        return LogReal(s, self.ln_mag + other.ln_mag)

    def __truediv__(self, other: LogReal) -> LogReal:
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        if self.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * other.sign, self.ln_mag - other.ln_mag)

    def __add__(self, other: LogReal) -> LogReal:
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        a, b = self, other
        if b.ln_mag > a.ln_mag:
            a, b = b, a
        d = b.ln_mag - a.ln_mag  # <= 0
        if a.sign == b.sign:
            return LogReal(a.sign, a.ln_mag + math.log1p(math.exp(d)))
        # opposite signs: |a| >= |b|, result a.sign * (|a| - |b|)
        if d == 0.0:
            return LogReal.zero()
        m = -math.expm1(d)  # 1 - exp(d), in (0, 1)
        return LogReal(a.sign, a.ln_mag + math.log(m))

    def __sub__(self, other: LogReal) -> LogReal:
        return self + (-other)

    def scale_ln(self, c: float) -> LogReal:
        """Multiply by exp(c); exact in this representation."""
        if self.sign == 0:
            return self
        return LogReal(self.sign, self.ln_mag + c)

    def mul_scalar(self, x: float) -> LogReal:
        return self * LogReal.from_float(x) if x != 0.0 else LogReal.zero()

    # --- comparison helpers -------------------------------------------------

    def rel_diff(self, other: LogReal) -> float:
        """Relative difference |self - other| / |other| (inf on sign mismatch)."""
        if other.sign == 0:
            return 0.0 if self.sign == 0 else math.inf
        if self.sign == 0:
            return 1.0
        if self.sign != other.sign:
            return math.inf
        return abs(math.expm1(self.ln_mag - other.ln_mag))

    def __float__(self) -> float:
        return self.to_float()

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogReal(0)"
        s = "-" if self.sign < 0 else ""
        if self.representable:
            return f"LogReal({s}{math.exp(self.ln_mag):.6g})"
        return f"LogReal({s}exp({self.ln_mag:.6g}))"
