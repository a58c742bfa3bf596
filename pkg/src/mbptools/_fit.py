"""Least-squares helpers for sequence extrapolation and power-law fits."""

import math

import numpy as np


def linear_tail_extrapolation(t, y, k=10):
    """Fit y ~ c0 + c1*t on the last k points; return (c0, c1, rms residual).

    First-order Richardson acceleration in least-squares form: for a
    quantity with expansion c0 + c1*t + O(t^2) along a decreasing schedule
    t_n -> 0, the fitted intercept kills the leading error term.  Works
    for real or complex y.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y)
    if t.size < 2:
        raise ValueError("need at least two points to extrapolate")
    k = min(int(k), t.size)
    tt, yy = t[-k:], y[-k:]
    design = np.column_stack([np.ones(tt.size), tt]).astype(yy.dtype, copy=False)
    coef, *_ = np.linalg.lstsq(design, yy, rcond=None)
    resid = yy - design @ coef
    rms = float(np.sqrt(np.mean(np.abs(resid) ** 2)))
    return coef[0], coef[1], rms


def powerlaw_fit(x, d, floor=0.0, x_max=None):
    """Least-squares fit of log d against log x: d ~ constant * x**exponent.

    Points with d <= floor, or x > x_max when given, are dropped.  Returns
    a dict with exponent, constant, r_squared, half_width (two standard
    errors of the slope) and n_used.  Raises ValueError with fewer than
    three usable points; callers handle the machine-zero case themselves.
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    keep = d > floor
    if x_max is not None:
        keep &= x <= x_max
    x, d = x[keep], d[keep]
    if x.size < 3:
        raise ValueError(f"only {x.size} usable points for a power-law fit")
    lx, ld = np.log(x), np.log(d)
    n = lx.size
    mx = lx.mean()
    sxx = float(np.sum((lx - mx) ** 2))
    slope = float(np.sum((lx - mx) * (ld - ld.mean())) / sxx)
    intercept = float(ld.mean() - slope * mx)
    fitted = intercept + slope * lx
    ss_res = float(np.sum((ld - fitted) ** 2))
    ss_tot = float(np.sum((ld - ld.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    sigma2 = ss_res / max(n - 2, 1)
    half_width = 2.0 * math.sqrt(sigma2 / sxx)
    return {
        "exponent": slope,
        "constant": math.exp(intercept),
        "r_squared": r2,
        "half_width": half_width,
        "n_used": int(n),
    }
