"""Hyperbolic geometry of the open unit disk.

Distances and geodesics for the Poincare metric |dz|/(1-|z|^2), curve
lengths by adaptive quadrature, Stolz regions / horocycles / their ends
with signed membership margins, non-tangential approach sequences, and
the sector power map that spreads a Stolz region over the whole disk.

Points are plain complex numbers; most functions broadcast over numpy
arrays of points and return scalars for scalar input.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateEndpointsError,
    RayExitsStolzError,
    UnitDiskError,
)

#: points whose modulus is within this tolerance of 1 count as boundary
#: points and are renormalized to exact modulus 1
BOUNDARY_TOL = 1e-12


class MeshWarning(UserWarning):
    """A curve mesh is too coarse for the requested accuracy."""


def _asarray(z):
    return np.asarray(z, dtype=complex)


def _unwrap(value, scalar):
    if scalar:
        return value[()] if isinstance(value, np.ndarray) else value
    return value


def as_disk_point(z, name="point"):
    """Validate that z lies strictly inside the unit disk."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise UnitDiskError(f"{name} must satisfy |z| < 1, got |z| = {abs(z)}")
    return z


def as_boundary_point(xi, tol=BOUNDARY_TOL, name="boundary point"):
    """Validate |xi| = 1 up to tol and renormalize to exact modulus 1."""
    xi = complex(xi)
    r = abs(xi)
    if abs(r - 1.0) > tol:
        raise UnitDiskError(f"{name} must have modulus 1 (tol {tol}), got {r}")
    return xi / r


def _check_interior(z, name="point"):
    if np.any(np.abs(z) >= 1.0):
        worst = float(np.max(np.abs(z)))
        raise UnitDiskError(f"{name} must lie strictly inside the disk, max modulus {worst}")


def pseudo_distance(z, w):
    """Pseudo-hyperbolic distance |(z-w)/(1 - conj(z) w)| in [0, 1)."""
    z, w = _asarray(z), _asarray(w)
    scalar = z.ndim == 0 and w.ndim == 0
    _check_interior(z, "z")
    _check_interior(w, "w")
    out = np.abs((z - w) / (1.0 - np.conj(z) * w))
    return _unwrap(out, scalar)


def hyp_distance(z, w):
    """Hyperbolic (Poincare) distance 2*artanh of the pseudo-distance."""
    return 2.0 * np.arctanh(pseudo_distance(z, w))


def dist_to_axis_geodesic(z, xi):
    """Hyperbolic distance from z to the geodesic line through xi and -xi.

    Rotating xi to 1 turns the line into the real diameter; the distance
    to the diameter has the closed form arcsinh(2|Im w| / (1-|w|^2)).
    """
    z = _asarray(z)
    scalar = z.ndim == 0
    _check_interior(z, "z")
    xi = as_boundary_point(xi)
    w = z * np.conj(xi)
    out = np.arcsinh(2.0 * np.abs(w.imag) / (1.0 - np.abs(w) ** 2))
    return _unwrap(out, scalar)


@dataclass(frozen=True)
class Region:
    """Stolz region S(m, xi), horocycle H(xi, M) or an end E(m, xi, M).

    The end is the intersection of the other two; membership carries a
    signed margin (positive inside) so mesh certifications can reason
    about how far a point sits from the region boundary.
    """

    kind: str
    xi: complex
    m: float | None = None
    M: float | None = None

    def __post_init__(self):
        if self.kind not in ("stolz", "horocycle", "end"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        object.__setattr__(self, "xi", as_boundary_point(self.xi))
        if self.kind in ("stolz", "end"):
            if self.m is None or self.m <= 0:
                raise ValueError("stolz half-width m must be positive")
        if self.kind in ("horocycle", "end"):
            if self.M is None or self.M <= 0:
                raise ValueError("horocycle parameter M must be positive")

    @classmethod
    def stolz(cls, m, xi):
        return cls("stolz", complex(xi), m=float(m))

    @classmethod
    def horocycle(cls, xi, M):
        return cls("horocycle", complex(xi), M=float(M))

    @classmethod
    def end(cls, m, xi, M):
        return cls("end", complex(xi), m=float(m), M=float(M))

    def to_dict(self):
        d = {"kind": self.kind, "xi": [self.xi.real, self.xi.imag]}
        if self.m is not None:
            d["m"] = self.m
        if self.M is not None:
            d["M"] = self.M
        return d

    @classmethod
    def from_dict(cls, d):
        xi = complex(d["xi"][0], d["xi"][1])
        return cls(d["kind"], xi, m=d.get("m"), M=d.get("M"))


def region_membership(z, region):
    """Return (member, margin) for z against a region.

    Margins: stolz m - dist_to_axis_geodesic, horocycle (1-|z|^2) -
    M|xi-z|^2, end the minimum of both.  member is margin > 0.
    """
    z = _asarray(z)
    scalar = z.ndim == 0
    _check_interior(z, "z")
    xi = region.xi
    margin = None
    if region.kind in ("stolz", "end"):
        margin = region.m - dist_to_axis_geodesic(z, xi)
    if region.kind in ("horocycle", "end"):
        horo = (1.0 - np.abs(z) ** 2) - region.M * np.abs(xi - z) ** 2
        margin = horo if margin is None else np.minimum(margin, horo)
    member = margin > 0
    return _unwrap(member, scalar), _unwrap(margin, scalar)


@dataclass(frozen=True)
class Curve:
    """A curve represented by ordered samples, integrated as a polyline.

    Consecutive samples should keep their pseudo-hyperbolic gap below
    mesh_bound; a coarser curve still integrates but a MeshWarning is
    emitted since the polyline may stray from the intended curve.
    """

    samples: np.ndarray
    parametrization: str = "polyline"
    mesh_bound: float = 0.5

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex).ravel()
        if samples.size < 1:
            raise ValueError("a curve needs at least one sample")
        _check_interior(samples, "curve sample")
        object.__setattr__(self, "samples", samples)
        if self.max_gap > self.mesh_bound:
            warnings.warn(
                f"curve mesh gap {self.max_gap:.3g} exceeds bound {self.mesh_bound:.3g}",
                MeshWarning,
                stacklevel=2,
            )

    @property
    def max_gap(self):
        if self.samples.size < 2:
            return 0.0
        return float(np.max(pseudo_distance(self.samples[:-1], self.samples[1:])))

    def write_csv(self, path):
        with open(path, "w", encoding="ascii") as fh:
            fh.write("index,re,im\n")
            for k, s in enumerate(self.samples):
                fh.write(f"{k},{s.real!r},{s.imag!r}\n")


def _classify_endpoint(p):
    p = complex(p)
    if abs(abs(p) - 1.0) <= BOUNDARY_TOL:
        return p / abs(p), True
    if abs(p) < 1.0:
        return p, False
    raise UnitDiskError(f"endpoint modulus {abs(p)} outside the closed disk")


def _mobius_to_origin(c):
    """Automorphism z -> (z - c)/(1 - conj(c) z) and its inverse."""
    cc = np.conj(c)

    def fwd(u):
        return (u - c) / (1.0 - cc * u)

    def inv(u):
        return (u + c) / (1.0 + cc * u)

    return fwd, inv


def geodesic(z, w, n_samples=257, span=18.0):
    """Sample the hyperbolic geodesic determined by z and w.

    Interior endpoints give the geodesic segment [z, w]_h including both
    endpoints; if one or both endpoints lie on the unit circle the ray or
    full geodesic line is sampled with interior samples only, reaching
    span hyperbolic units toward each ideal endpoint.  Samples are spaced
    uniformly in hyperbolic arclength.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    z, z_bnd = _classify_endpoint(z)
    w, w_bnd = _classify_endpoint(w)
    if z == w:
        raise DegenerateEndpointsError("geodesic endpoints must be distinct")

    if not z_bnd and not w_bnd:
        fwd, inv = _mobius_to_origin(z)
        p = fwd(w)
        half = math.atanh(abs(p))
        direction = p / abs(p)
        s = np.linspace(0.0, 1.0, n_samples)
        radii = np.tanh(s * half)
        samples = inv(radii * direction)
        samples[0], samples[-1] = z, w
        label = "segment"
    elif z_bnd != w_bnd:
        interior, ideal = (w, z) if z_bnd else (z, w)
        fwd, inv = _mobius_to_origin(interior)
        direction = fwd(ideal)
        direction /= abs(direction)
        s = np.linspace(0.0, 1.0, n_samples + 1)[:-1]
        radii = np.tanh(s * span / 2.0)
        samples = inv(radii * direction)
        samples[0] = interior
        label = "ray"
    else:
        alpha, beta = np.angle(z), np.angle(w)
        delta = ((alpha - beta) % (2.0 * math.pi)) / 2.0
        if delta == 0.0:
            raise DegenerateEndpointsError("ideal endpoints must be distinct")
        mu = beta + delta
        x = math.tan(math.pi / 4.0 - delta / 2.0)
        u = np.linspace(-span, span, n_samples)
        t = np.tanh(u / 2.0)
        samples = np.exp(1j * mu) * (x + 1j * t) / (1.0 + 1j * x * t)
        label = "line"
    return Curve(samples, parametrization=f"geodesic-{label}, uniform hyperbolic arclength")


def hyperbolic_length(curve, tol=1e-10, max_doublings=14):
    """Length of the polyline through curve.samples in the Poincare metric.

    Each straight segment is integrated by the trapezoid rule under node
    doubling with one Richardson extrapolation step; refinement stops
    when successive extrapolated totals agree within tol.
    """
    pts = curve.samples
    if pts.size < 2:
        return 0.0
    p, q = pts[:-1], pts[1:]
    delta = q - p
    keep = np.abs(delta) > 0.0
    p, delta = p[keep], delta[keep]
    if p.size == 0:
        return 0.0
    speed = np.abs(delta)

    def density(s):
        # s: (k,) nodes in [0,1] shared across segments; the density
        # 2/(1-|t|^2) is the one whose geodesic length reproduces
        # hyp_distance = 2*artanh(pseudo_distance)
        t = p[:, None] + np.multiply.outer(delta, s)
        return 2.0 * speed[:, None] / (1.0 - np.abs(t) ** 2)

    ends = density(np.array([0.0, 1.0]))
    trap = 0.5 * (ends[:, 0] + ends[:, 1])
    prev_total = float(np.sum(trap))
    prev_extrap = None
    converged = False
    for level in range(1, max_doublings + 1):
        n_new = 2 ** (level - 1)
        s_new = (np.arange(n_new) + 0.5) / n_new
        trap = 0.5 * trap + 0.5 * np.mean(density(s_new), axis=1)
        total = float(np.sum(trap))
        extrap = (4.0 * total - prev_total) / 3.0
        if prev_extrap is not None and abs(extrap - prev_extrap) <= tol:
            converged = True
            prev_extrap = extrap
            break
        prev_total, prev_extrap = total, extrap
    if not converged:
        warnings.warn(
            "quadrature refinement did not converge; curve mesh too coarse",
            MeshWarning,
            stacklevel=2,
        )
    return float(prev_extrap)


@dataclass(frozen=True)
class NontangentialSequence:
    """A sequence z_n = xi (1 - t_n e^{i angle}) staying in S(m, xi).

    The default schedule is geometric, t_n = t0 * ratio**n, which keeps
    log-log exponent fits well conditioned.  Note |xi - z_n| = t_n.
    """

    xi: complex
    m: float
    angle: float
    t: np.ndarray
    points: np.ndarray
    schedule: str = "geometric"

    def __len__(self):
        return self.points.size

    def to_dict(self):
        return {
            "xi": [self.xi.real, self.xi.imag],
            "m": self.m,
            "angle": self.angle,
            "schedule": self.schedule,
            "n": int(self.t.size),
            "t_first": float(self.t[0]),
            "t_last": float(self.t[-1]),
        }


def nontangential_sequence(xi, m=1.0, angle=0.0, n=30, t0=0.5, ratio=0.5, t=None):
    """Build a non-tangential approach sequence toward a boundary point.

    Every point is checked against S(m, xi); a ray that exits the Stolz
    region raises RayExitsStolzError with the first violating index.
    """
    xi = as_boundary_point(xi)
    if t is None:
        t = t0 * ratio ** np.arange(n, dtype=float)
        schedule = f"geometric t0={t0} ratio={ratio}"
    else:
        t = np.asarray(t, dtype=float)
        schedule = "explicit"
    if np.any(t <= 0) or np.any(np.diff(t) >= 0):
        raise ValueError("schedule must be positive and strictly decreasing")
    points = xi * (1.0 - t * np.exp(1j * angle))
    inside = np.abs(points) < 1.0
    if not inside.all():
        raise RayExitsStolzError("ray leaves the unit disk", int(np.argmin(inside)))
    region = Region.stolz(m, xi)
    member, _ = region_membership(points, region)
    if not member.all():
        raise RayExitsStolzError(
            f"ray at angle {angle} exits S({m}, xi)", int(np.argmin(member))
        )
    return NontangentialSequence(xi=xi, m=float(m), angle=float(angle), t=t, points=points, schedule=schedule)


def sector_transfer(z, m):
    """Map S(m, 1) conformally onto the disk through a sector power map.

    The Cayley transform C(z) = (1-z)/(1+z) opens S(m, 1) onto the sector
    |arg w| < beta with tan(beta/2) = tanh(m); the principal power
    w -> w**(pi/(2 beta)) straightens the sector onto the right half
    plane, and C (its own inverse) closes back to the disk.  Fixes 0 and
    preserves the real diameter.
    """
    z = _asarray(z)
    scalar = z.ndim == 0
    member, margin = region_membership(z, Region.stolz(m, 1.0))
    if not np.all(member):
        bad = float(np.min(margin))
        raise UnitDiskError(f"point outside S({m}, 1): worst margin {bad:.3g}")
    beta = 2.0 * math.atan(math.tanh(m))
    c = (1.0 - z) / (1.0 + z)
    w = c ** (math.pi / (2.0 * beta))
    out = (1.0 - w) / (1.0 + w)
    return _unwrap(out, scalar)
