"""Boundary dilation coefficients and angular derivatives.

The boundary dilation coefficient alpha_g(xi) is the non-tangential
limit of (1 - |g(z)|)/(1 - |z|); it is finite and positive exactly when
g has a finite angular derivative at xi, and then g'(xi) = alpha * g(xi)
* conj(xi).  Limits are extrapolated along non-tangential sequences and
cross-checked against direct closed-disk evaluation, which is available
for every map expression in this package.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._fit import linear_tail_extrapolation, powerlaw_fit
from .errors import DivergenceError, InconsistentLimitsError
from .geometry import as_boundary_point, nontangential_sequence
from .maps import BlaschkeProduct, Composition, DiskAutomorphism

#: extrapolated and directly evaluated boundary quantities must agree
#: this well before a BoundaryData is issued
LIMIT_TOL = 1e-6
#: fitted contact exponents count as >= k when within this band of k
ORDER_BAND = 0.1


@dataclass(frozen=True)
class BoundaryData:
    """Boundary value, dilation coefficient and angular derivative at xi.

    Invariant: angular_derivative = alpha * boundary_value * conj(xi).
    """

    xi: complex
    alpha: float
    boundary_value: complex
    angular_derivative: complex

    def __post_init__(self):
        object.__setattr__(self, "xi", as_boundary_point(self.xi))
        if not (0.0 < self.alpha < math.inf):
            raise ValueError(f"alpha must be finite and positive, got {self.alpha}")
        object.__setattr__(
            self, "boundary_value", as_boundary_point(self.boundary_value, tol=1e-9)
        )
        identity_gap = abs(
            self.angular_derivative - self.alpha * self.boundary_value * np.conj(self.xi)
        )
        if identity_gap > 1e-9 * max(1.0, self.alpha):
            raise ValueError(
                f"angular derivative violates alpha*value*conj(xi) by {identity_gap:.3g}"
            )

    def to_dict(self):
        return {
            "xi": [self.xi.real, self.xi.imag],
            "alpha": self.alpha,
            "boundary_value": [self.boundary_value.real, self.boundary_value.imag],
            "angular_derivative": [
                self.angular_derivative.real,
                self.angular_derivative.imag,
            ],
        }


def dilation_closed_form(b, xi):
    """sum_k (1 - |a_k|^2)/|xi - a_k|^2 for a finite Blaschke product.

    Equals |B'(xi)| on the circle.  Automorphisms are accepted as their
    degree-1 Blaschke form; compositions multiply factors by the chain
    rule through the inner boundary value.
    """
    xi = as_boundary_point(xi)
    if isinstance(b, DiskAutomorphism):
        b = b.as_blaschke()
    if isinstance(b, Composition):
        inner_alpha = dilation_closed_form(b.inner, xi)
        inner_value = as_boundary_point(b.inner(xi), tol=1e-9)
        return dilation_closed_form(b.outer, inner_value) * inner_alpha
    if not isinstance(b, BlaschkeProduct):
        raise TypeError("closed form needs a Blaschke product (or automorphism/composition)")
    return float(sum((1.0 - abs(a) ** 2) / abs(xi - a) ** 2 for a in b.zeros))


def _quotients(e, seq):
    vals = np.abs(e(seq.points))
    base = 1.0 - np.abs(seq.points)
    return (1.0 - vals) / base


def dilation_limit(e, seq, k=10):
    """Boundary dilation coefficient along a non-tangential sequence.

    Extrapolates (1 - |e(z_n)|)/(1 - |z_n|) with a first-order tail fit.
    Raises DivergenceError when the quotient keeps growing instead of
    settling (the liminf is then infinite for all practical purposes).
    """
    q = _quotients(e, seq)
    tail = q[-min(k, q.size):]
    if tail.size >= 4:
        growth = np.diff(tail)
        if np.all(growth > 0) and tail[-1] > 2.0 * tail[0]:
            raise DivergenceError(
                f"dilation quotient grows from {tail[0]:.3g} to {tail[-1]:.3g}; no finite limit"
            )
    c0, _, rms = linear_tail_extrapolation(seq.t, q, k=k)
    alpha = float(np.real(c0))
    if alpha <= 0 or rms > 0.1 * max(1.0, abs(alpha)):
        raise DivergenceError(
            f"dilation quotient did not settle (estimate {alpha:.3g}, rms {rms:.3g})"
        )
    return alpha


def angular_data(e, xi, seq=None, tol=LIMIT_TOL):
    """Boundary value, alpha and angular derivative of e at xi.

    Sequence extrapolations of e(z_n) and of the difference quotient
    (e(xi) - e(z_n))/(xi - z_n) are required to agree with direct
    closed-disk evaluation within tol; the returned record is built from
    the direct values so its internal identity holds to round-off.
    """
    xi = as_boundary_point(xi)
    if seq is None:
        seq = nontangential_sequence(xi)
    alpha_seq = dilation_limit(e, seq)

    value_direct = complex(e(xi))
    if abs(abs(value_direct) - 1.0) > 1e-6:
        raise DivergenceError(
            f"|e(xi)| = {abs(value_direct):.6f} != 1: no finite angular derivative at xi"
        )
    value_direct /= abs(value_direct)
    value_seq, _, _ = linear_tail_extrapolation(seq.t, e(seq.points))
    if abs(value_seq - value_direct) > tol:
        raise InconsistentLimitsError(
            f"boundary value mismatch: sequence {value_seq}, direct {value_direct}"
        )

    deriv_direct = complex(e.derivative(xi))
    quotients = (value_direct - e(seq.points)) / (xi - seq.points)
    deriv_seq, _, _ = linear_tail_extrapolation(seq.t, quotients)
    if abs(deriv_seq - deriv_direct) > tol * max(1.0, abs(deriv_direct)):
        raise InconsistentLimitsError(
            f"angular derivative mismatch: sequence {deriv_seq}, direct {deriv_direct}"
        )
    alpha = abs(deriv_direct)
    if abs(alpha_seq - alpha) > tol * max(1.0, alpha):
        raise InconsistentLimitsError(
            f"dilation limit {alpha_seq} disagrees with |e'(xi)| = {alpha}"
        )
    return BoundaryData(
        xi=xi,
        alpha=alpha,
        boundary_value=value_direct,
        angular_derivative=deriv_direct,
    )


@dataclass
class SequenceComparison:
    """Observed contact order of f - g along a sequence and what follows.

    Dichotomy being checked: order >= 1 forces the boundary values to
    agree; order > 1 forces the angular derivatives to agree.  Orders
    are fitted exponents, so integer thresholds carry a +-ORDER_BAND
    band; machine-zero differences report order = inf.
    """

    order: float
    fit: dict
    f_data: BoundaryData | None
    g_data: BoundaryData | None
    values_agree: bool | None
    derivatives_agree: bool | None
    consistent: bool
    notes: str = ""

    def to_dict(self):
        out = {
            "order": None if math.isinf(self.order) else self.order,
            "order_is_inf": math.isinf(self.order),
            "fit": self.fit,
            "values_agree": self.values_agree,
            "derivatives_agree": self.derivatives_agree,
            "consistent": self.consistent,
            "notes": self.notes,
        }
        if self.f_data is not None:
            out["f"] = self.f_data.to_dict()
        if self.g_data is not None:
            out["g"] = self.g_data.to_dict()
        return out


def sequence_comparison(f, g, seq, value_tol=LIMIT_TOL, deriv_tol=LIMIT_TOL):
    """Fit the contact order of f - g along seq and check the dichotomy."""
    diffs = np.abs(f(seq.points) - g(seq.points))
    scale = max(1.0, float(np.max(np.abs(g(seq.points)))))
    floor = 100.0 * np.finfo(float).eps * scale
    if np.count_nonzero(diffs > floor) < 3:
        order = math.inf
        fit = {"exponent": None, "note": "differences at machine floor"}
    else:
        fit = powerlaw_fit(seq.t, diffs, floor=floor)
        order = fit["exponent"]

    g_data = angular_data(g, seq.xi, seq)
    f_data = None
    values_agree = None
    derivatives_agree = None
    notes = []
    if order >= 1.0 - ORDER_BAND:
        f_data = angular_data(f, seq.xi, seq)
        values_agree = bool(
            abs(f_data.boundary_value - g_data.boundary_value) <= value_tol
        )
        if order > 1.0 + ORDER_BAND:
            derivatives_agree = bool(
                abs(f_data.angular_derivative - g_data.angular_derivative) <= deriv_tol
            )
    else:
        # no hypothesis holds; record the boundary gap for the report
        try:
            f_data = angular_data(f, seq.xi, seq)
            values_agree = bool(
                abs(f_data.boundary_value - g_data.boundary_value) <= value_tol
            )
        except (DivergenceError, InconsistentLimitsError) as exc:
            notes.append(f"f has no finite angular derivative: {exc}")

    consistent = True
    if order >= 1.0 - ORDER_BAND and values_agree is not True:
        consistent = False
        notes.append("order >= 1 but boundary values differ")
    if order > 1.0 + ORDER_BAND and derivatives_agree is not True:
        consistent = False
        notes.append("order > 1 but angular derivatives differ")

    return SequenceComparison(
        order=order,
        fit=fit,
        f_data=f_data,
        g_data=g_data,
        values_agree=values_agree,
        derivatives_agree=derivatives_agree,
        consistent=consistent,
        notes="; ".join(notes),
    )
