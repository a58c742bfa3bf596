"""Holomorphic self-maps of the unit disk as composable expressions.

Leaves are finite Blaschke products, disk automorphisms and rational
self-maps; composition nodes chain them.  Expressions evaluate on the
closed disk and differentiate exactly (chain rule, logarithmic
derivative for Blaschke leaves), so boundary quantities never rely on
finite differences.  Maps are immutable and safe to share.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConvergenceError, NotSelfMapError, SpecError, UnitDiskError
from .geometry import as_boundary_point
from .polyroots import aberth_roots, cluster_roots

UNIT_TOL = 1e-9
#: switch from the logarithmic-derivative to the product-rule form of a
#: Blaschke derivative inside this radius of any zero (cancellation guard)
GUARD_RADIUS = 1e-6


def _asarray(z):
    return np.asarray(z, dtype=complex)


def _unwrap(value, scalar):
    if scalar:
        return complex(value[()]) if isinstance(value, np.ndarray) else complex(value)
    return value


def _check_closed_disk(z):
    if np.any(np.abs(z) > 1.0 + UNIT_TOL):
        raise UnitDiskError("evaluation point outside the closed unit disk")


class MapExpr:
    """Base class: a holomorphic map of the closed disk into itself."""

    def __call__(self, z):
        raise NotImplementedError

    def derivative(self, z):
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError


def _normalize_unimodular(lam, what):
    lam = complex(lam)
    r = abs(lam)
    if abs(r - 1.0) > UNIT_TOL:
        raise NotSelfMapError(f"{what} must be unimodular, got modulus {r}")
    return lam / r


@dataclass(frozen=True)
class BlaschkeProduct(MapExpr):
    """lam * prod (z - a_k)/(1 - conj(a_k) z) with |lam| = 1, a_k in the disk."""

    zeros: tuple
    lam: complex = 1.0 + 0.0j

    def __post_init__(self):
        zeros = tuple(complex(a) for a in self.zeros)
        if len(zeros) == 0:
            raise NotSelfMapError("degree-0 Blaschke product is a unimodular constant")
        for a in zeros:
            if abs(a) >= 1.0:
                raise UnitDiskError(f"Blaschke zero must lie inside the disk, got |a| = {abs(a)}")
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "lam", _normalize_unimodular(self.lam, "Blaschke constant"))

    @property
    def degree(self):
        return len(self.zeros)

    def __call__(self, z):
        z = _asarray(z)
        scalar = z.ndim == 0
        _check_closed_disk(z)
        out = np.full(z.shape, self.lam, dtype=complex)
        for a in self.zeros:
            out = out * (z - a) / (1.0 - np.conj(a) * z)
        return _unwrap(out, scalar)

    def _factors(self, z):
        return [(z - a) / (1.0 - np.conj(a) * z) for a in self.zeros]

    def derivative(self, z):
        z = _asarray(z)
        scalar = z.ndim == 0
        _check_closed_disk(z)
        zz = np.atleast_1d(z)
        b = np.full(zz.shape, self.lam, dtype=complex)
        logsum = np.zeros(zz.shape, dtype=complex)
        near = np.zeros(zz.shape, dtype=bool)
        for a in self.zeros:
            b = b * (zz - a) / (1.0 - np.conj(a) * zz)
            logsum = logsum + (1.0 - abs(a) ** 2) / ((zz - a) * (1.0 - np.conj(a) * zz))
            near |= np.abs(zz - a) < GUARD_RADIUS
        out = b * logsum
        if near.any():
            out[near] = self._derivative_product_rule(zz[near])
        out = out.reshape(z.shape)
        return _unwrap(out, scalar)

    def _derivative_product_rule(self, z):
        factors = self._factors(z)
        total = np.zeros(z.shape, dtype=complex)
        for k, a in enumerate(self.zeros):
            dk = (1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * z) ** 2
            rest = np.ones(z.shape, dtype=complex)
            for j, f in enumerate(factors):
                if j != k:
                    rest = rest * f
            total = total + dk * rest
        return self.lam * total

    def to_dict(self):
        return {
            "type": "blaschke",
            "lambda": [self.lam.real, self.lam.imag],
            "zeros": [[a.real, a.imag] for a in self.zeros],
        }


@dataclass(frozen=True)
class DiskAutomorphism(MapExpr):
    """T(z) = e^{i theta} (z - a)/(1 - conj(a) z), a bijection of the disk."""

    theta: float
    a: complex = 0.0 + 0.0j

    def __post_init__(self):
        a = complex(self.a)
        if abs(a) >= 1.0:
            raise UnitDiskError("automorphism center must lie inside the disk")
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "a", a)

    def __call__(self, z):
        z = _asarray(z)
        scalar = z.ndim == 0
        _check_closed_disk(z)
        out = cmath.exp(1j * self.theta) * (z - self.a) / (1.0 - np.conj(self.a) * z)
        return _unwrap(out, scalar)

    def derivative(self, z):
        z = _asarray(z)
        scalar = z.ndim == 0
        _check_closed_disk(z)
        out = cmath.exp(1j * self.theta) * (1.0 - abs(self.a) ** 2) / (1.0 - np.conj(self.a) * z) ** 2
        return _unwrap(out, scalar)

    def inverse(self):
        return DiskAutomorphism(theta=-self.theta, a=-self.a * cmath.exp(1j * self.theta))

    def as_blaschke(self):
        return BlaschkeProduct(zeros=(self.a,), lam=cmath.exp(1j * self.theta))

    def to_dict(self):
        return {"type": "automorphism", "theta": self.theta, "a": [self.a.real, self.a.imag]}


def _coeffs(values, what):
    out = []
    for k, v in enumerate(values):
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise SpecError(f"coefficient must be a number or [re, im]", f"$.{what}[{k}]")
            out.append(complex(v[0], v[1]))
        else:
            out.append(complex(v))
    return tuple(out)


@dataclass(frozen=True)
class RationalMap(MapExpr):
    """p(z)/q(z) with ascending coefficients, poles outside the closed disk.

    Construction rejects anything that is not a self-map of the disk:
    poles in the closed disk, boundary modulus above 1, or a unimodular
    constant.  The boundary check samples the circle, which is exact for
    inner functions and adequate at desk scale otherwise.
    """

    num: tuple
    den: tuple = (1.0 + 0.0j,)

    def __post_init__(self):
        num = np.asarray(_coeffs(self.num, "num"), dtype=complex)
        den = np.asarray(_coeffs(self.den, "den"), dtype=complex)
        num = np.atleast_1d(np.trim_zeros(num, "b"))
        den = np.atleast_1d(np.trim_zeros(den, "b"))
        if den.size == 0 or np.all(den == 0):
            raise NotSelfMapError("denominator is identically zero")
        if num.size == 0:
            num = np.zeros(1, dtype=complex)
        if den.size > 1:
            poles = np.roots(den[::-1])
            if poles.size and np.min(np.abs(poles)) <= 1.0 + 1e-9:
                raise NotSelfMapError("rational map has a pole in or near the closed disk")
        theta = 2.0 * np.pi * np.arange(4096) / 4096
        ring = np.exp(1j * theta)
        vals = npoly.polyval(ring, num) / npoly.polyval(ring, den)
        top = float(np.max(np.abs(vals)))
        if top > 1.0 + 1e-9:
            raise NotSelfMapError(f"boundary modulus {top} exceeds 1: not a self-map")
        if float(np.max(np.abs(vals - vals.mean()))) < 1e-13 and abs(abs(complex(vals.mean())) - 1.0) < 1e-12:
            raise NotSelfMapError("map is a unimodular constant")
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))

    def __call__(self, z):
        z = _asarray(z)
        scalar = z.ndim == 0
        _check_closed_disk(z)
        out = npoly.polyval(z, np.asarray(self.num)) / npoly.polyval(z, np.asarray(self.den))
        if not np.all(np.isfinite(out)):
            raise OverflowError("rational map overflowed near a pole")
        return _unwrap(out, scalar)

    def derivative(self, z):
        z = _asarray(z)
        scalar = z.ndim == 0
        _check_closed_disk(z)
        p = np.asarray(self.num)
        q = np.asarray(self.den)
        pv = npoly.polyval(z, p)
        qv = npoly.polyval(z, q)
        dpv = npoly.polyval(z, npoly.polyder(p)) if p.size > 1 else np.zeros_like(z)
        dqv = npoly.polyval(z, npoly.polyder(q)) if q.size > 1 else np.zeros_like(z)
        out = (dpv * qv - pv * dqv) / qv**2
        return _unwrap(out, scalar)

    def to_dict(self):
        return {
            "type": "rational",
            "num": [[c.real, c.imag] for c in self.num],
            "den": [[c.real, c.imag] for c in self.den],
        }


@dataclass(frozen=True)
class Composition(MapExpr):
    """outer after inner; derivative by the chain rule."""

    outer: MapExpr
    inner: MapExpr

    def __call__(self, z):
        return self.outer(self.inner(z))

    def derivative(self, z):
        w = self.inner(z)
        return self.outer.derivative(w) * self.inner.derivative(z)

    def to_dict(self):
        return {"type": "compose", "outer": self.outer.to_dict(), "inner": self.inner.to_dict()}


def compose(outer, inner):
    """Composition node outer(inner(z)); kept symbolic, never flattened."""
    return Composition(outer=outer, inner=inner)


def identity_map():
    return BlaschkeProduct(zeros=(0.0,))


def power_map(k):
    """z -> z**k as a Blaschke product with a k-fold zero at the origin."""
    if k < 1:
        raise ValueError("power must be at least 1")
    return BlaschkeProduct(zeros=(0.0,) * k)


def rotation(theta):
    return DiskAutomorphism(theta=float(theta), a=0.0)


def scale_map(t):
    """z -> t z for |t| < 1; the model strict (non-isometric) self-map."""
    t = complex(t)
    if abs(t) >= 1.0:
        raise NotSelfMapError("scale factor must satisfy |t| < 1")
    return RationalMap(num=(0.0, t), den=(1.0,))


def third_order_contact_map():
    """The inner function (1 + 3 z^2)/(3 + z^2).

    Fixes 1 with w - g(w) = -(1-w)^3/(3+w^2), so g agrees with the
    identity to exactly third order at 1; composing it with any unit
    boundary-derivative map produces the canonical sharpness example for
    third-order boundary contact.
    """
    return RationalMap(num=(1.0, 0.0, 3.0), den=(3.0, 0.0, 1.0))


def hyperbolic_derivative(e, z):
    """|e'(z)| / (1 - |e(z)|^2), the hyperbolic distortion at interior z."""
    z = _asarray(z)
    scalar = z.ndim == 0
    if np.any(np.abs(z) >= 1.0):
        raise UnitDiskError("hyperbolic derivative is defined for interior points")
    val = np.abs(np.atleast_1d(e(z)))
    der = np.abs(np.atleast_1d(e.derivative(z)))
    out = (der / (1.0 - val**2)).reshape(z.shape)
    return float(out[()]) if scalar else out


@dataclass(frozen=True)
class CriticalSet:
    """In-disk zeros of a derivative, listed with multiplicity."""

    points: tuple
    cluster_tol: float = 1e-7

    def __post_init__(self):
        pts = tuple(sorted((complex(p) for p in self.points), key=lambda c: (c.real, c.imag)))
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def clustered(self):
        return cluster_roots(np.asarray(self.points, dtype=complex), tol=self.cluster_tol)

    def to_dict(self):
        return {"points": [[p.real, p.imag] for p in self.points]}


def _blaschke_polys(b):
    p = npoly.polyfromroots(np.asarray(b.zeros, dtype=complex))
    q = np.ones(1, dtype=complex)
    for a in b.zeros:
        q = npoly.polymul(q, np.array([1.0, -np.conj(a)], dtype=complex))
    return p, q


def derivative_numerator(b):
    """Ascending coefficients of P'Q - PQ' where B = lam P/Q.

    Self-inversive of degree 2n-2: roots pair as (c, 1/conj(c)), and the
    in-disk half are the critical points of B.
    """
    p, q = _blaschke_polys(b)
    n = npoly.polysub(npoly.polymul(npoly.polyder(p), q), npoly.polymul(p, npoly.polyder(q)))
    scale = np.max(np.abs(n)) if n.size else 0.0
    if scale > 0:
        nz = np.nonzero(np.abs(n) > 1e-13 * scale)[0]
        n = n[: nz[-1] + 1] if nz.size else n[:1]
    return n


def critical_points(b, cluster_tol=1e-7):
    """Critical points of a finite Blaschke product, with multiplicity.

    Found as the in-disk roots of the derivative numerator; a degree-n
    product always has exactly n-1 of them.  Roots hugging the unit
    circle are rejected as numerical failures since boundary critical
    points cannot occur for finite Blaschke products.
    """
    n = b.degree
    if n == 1:
        return CriticalSet(points=(), cluster_tol=cluster_tol)
    num = derivative_numerator(b)
    roots = aberth_roots(num)
    mods = np.abs(roots)
    if np.any(np.abs(mods - 1.0) < 1e-6):
        raise ConvergenceError("critical-point root hugging the unit circle; numerical failure")
    inside = roots[mods < 1.0]
    if inside.size != n - 1:
        raise ConvergenceError(
            f"expected {n - 1} in-disk critical points, root finder returned {inside.size}"
        )
    return CriticalSet(points=tuple(inside), cluster_tol=cluster_tol)


def boundary_preimages(b, sigma):
    """The degree-many solutions of B(z) = sigma, all on the unit circle."""
    sigma = as_boundary_point(sigma, name="sigma")
    p, q = _blaschke_polys(b)
    coeffs = npoly.polysub(b.lam * p, sigma * q)
    roots = aberth_roots(coeffs)
    mods = np.abs(roots)
    if np.any(np.abs(mods - 1.0) > 1e-8):
        raise ConvergenceError("boundary preimage strayed from the unit circle")
    roots = roots / mods
    resid = np.abs(np.array([b(r) for r in roots]) - sigma)
    if np.any(resid > 1e-10):
        raise ConvergenceError(f"boundary preimage residual {np.max(resid):.3g} above 1e-10")
    order = np.argsort(np.angle(roots))
    return [complex(r) for r in roots[order]]


def map_from_dict(d, path="$"):
    """Build a MapExpr from its JSON dict form; errors carry JSON paths."""
    if not isinstance(d, dict):
        raise SpecError("expected an object", path)
    kind = d.get("type")
    if kind is None:
        raise SpecError("missing 'type'", path)
    try:
        if kind == "blaschke":
            zeros = d.get("zeros")
            if not isinstance(zeros, list) or not zeros:
                raise SpecError("'zeros' must be a non-empty list", f"{path}.zeros")
            zs = []
            for k, pair in enumerate(zeros):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise SpecError("zero must be [re, im]", f"{path}.zeros[{k}]")
                zs.append(complex(pair[0], pair[1]))
            lam = d.get("lambda", [1.0, 0.0])
            if not isinstance(lam, list) or len(lam) != 2:
                raise SpecError("'lambda' must be [re, im]", f"{path}.lambda")
            return BlaschkeProduct(zeros=tuple(zs), lam=complex(lam[0], lam[1]))
        if kind == "automorphism":
            if "theta" not in d:
                raise SpecError("missing 'theta'", f"{path}.theta")
            a = d.get("a", [0.0, 0.0])
            if not isinstance(a, list) or len(a) != 2:
                raise SpecError("'a' must be [re, im]", f"{path}.a")
            return DiskAutomorphism(theta=float(d["theta"]), a=complex(a[0], a[1]))
        if kind == "rational":
            if "num" not in d or "den" not in d:
                raise SpecError("rational maps need 'num' and 'den'", path)
            return RationalMap(num=tuple(d["num"]), den=tuple(d["den"]))
        if kind == "compose":
            if "outer" not in d or "inner" not in d:
                raise SpecError("compose nodes need 'outer' and 'inner'", path)
            return Composition(
                outer=map_from_dict(d["outer"], f"{path}.outer"),
                inner=map_from_dict(d["inner"], f"{path}.inner"),
            )
    except (NotSelfMapError, UnitDiskError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(str(exc), path) from exc
    raise SpecError(f"unknown map type {kind!r}", f"{path}.type")
