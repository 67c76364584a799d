"""Scalar numerical primitives: error function, its inverse, sign helpers, bisection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .exceptions import BracketError, ConvergenceError, DomainError

__all__ = [
    "Tolerance",
    "erf",
    "erf_inv",
    "hard_sign",
    "smooth_sign",
    "bisect",
]

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)

# Giles' single-precision erfinv polynomials, used only as a starting point.
_CENTRAL = (
    2.81022636e-08, 3.43273939e-07, -3.5233877e-06, -4.39150654e-06,
    0.00021858087, -0.00125372503, -0.00417768164, 0.246640727, 1.50140941,
)
_TAIL = (
    -0.000200214257, 0.000100950558, 0.00134934322, -0.00367342844,
    0.00573950773, -0.0076224613, 0.00943887047, 1.00167406, 2.83297682,
)


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


def erf(x: float) -> float:
    """Gauss error function (odd, values in (-1, 1) for finite x)."""
    if x < 0:
        return -math.erf(-x)
    return math.erf(x)


def _initial_guess(y: float) -> float:
    w = -math.log((1.0 - y) * (1.0 + y))
    if w < 5.0:
        w -= 2.5
        coeffs = _CENTRAL
    else:
        w = math.sqrt(w) - 3.0
        coeffs = _TAIL
    p = 0.0
    for c in coeffs:
        p = c + p * w
    return p * y


def erf_inv(y: float, max_iter: int = 50) -> float:
    """Inverse error function.

    A polynomial starting guess is refined with Halley steps on ``erf``
    until the correction drops to roundoff level.

    Raises
    ------
    DomainError
        If ``|y| >= 1`` (the inverse is unbounded there).
    """
    if not math.isfinite(y) or abs(y) >= 1.0:
        raise DomainError(f"erf_inv is defined on (-1, 1), got {y!r}")
    if y == 0.0:
        return 0.0
    if y < 0:
        return -erf_inv(-y, max_iter)

    xi = _initial_guess(y)
    for _ in range(max_iter):
        resid = math.erf(xi) - y
        if resid == 0.0:
            break
        slope = _TWO_OVER_SQRT_PI * math.exp(-xi * xi)
        step = resid / slope
        step /= 1.0 + xi * step
        xi -= step
        if abs(step) <= 1e-12 * max(1.0, xi):
            break
    else:
        raise ConvergenceError(f"erf_inv({y!r}) did not converge in {max_iter} iterations")
    return xi


def hard_sign(s: float) -> float:
    # sgn(0) = 0 by convention
    if s > 0:
        return 1.0
    if s < 0:
        return -1.0
    return 0.0


def smooth_sign(s: float, boundary_layer: float) -> float:
    """Boundary-layer sign ``s / (|s| + boundary_layer)``."""
    if not boundary_layer > 0:
        raise DomainError(f"boundary_layer must be positive, got {boundary_layer!r}")
    return s / (abs(s) + boundary_layer)


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Tolerance = Tolerance(),
) -> float:
    """Root of a monotone scalar function inside ``[lo, hi]`` by bisection.

    Stops once ``|f(mid)| <= tol.abs_tol``, the bracket is narrower than
    ``tol.abs_tol``, or the bracket can no longer be split in floating point.
    Bisection is used instead of Newton because the functions solved here
    (``r**gamma`` with ``gamma < 1``) have unbounded slope at zero.
    """
    if not lo < hi:
        raise BracketError(f"need lo < hi, got [{lo}, {hi}]")
    f_lo = f(lo)
    if f_lo == 0.0:
        return lo
    f_hi = f(hi)
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )

    for _ in range(tol.max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) <= tol.abs_tol or (hi - lo) <= tol.abs_tol:
            return mid
        if mid == lo or mid == hi:
            # adjacent doubles: best attainable
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise ConvergenceError(f"bisect did not converge in {tol.max_iter} iterations")
