"""Reference computations kept independent of the package under test."""

import mpmath as mp

mp.mp.dps = 40


def erf_series(x) -> float:
    """Maclaurin series of erf summed until terms fall below 1e-35."""
    x = mp.mpf(x)
    total = mp.mpf(0)
    n = 0
    while True:
        term = (-1) ** n * x ** (2 * n + 1) / (mp.factorial(n) * (2 * n + 1))
        total += term
        if abs(term) < mp.mpf(10) ** -35:
            break
        n += 1
    return float(2 / mp.sqrt(mp.pi) * total)


def erf_inv_bisection(y: float, lo: float = 0.0, hi: float = 8.0) -> float:
    y = mp.mpf(y)
    lo, hi = mp.mpf(lo), mp.mpf(hi)
    for _ in range(200):
        mid = (lo + hi) / 2
        if mp.erf(mid) < y:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def central_diff(f, t: float, h: float = 1e-6) -> float:
    return (f(t + h) - f(t - h)) / (2 * h)
