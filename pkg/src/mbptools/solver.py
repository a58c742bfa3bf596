"""Construct the finite Blaschke product with prescribed critical points.

For n-1 prescribed points inside the disk there is a degree-n Blaschke
product, unique up to postcomposition with a disk automorphism, whose
critical set matches them; it maximizes the hyperbolic distortion
|B'|/(1-|B|^2) pointwise among all holomorphic self-maps sharing those
critical points.  The gauge is fixed by B(0) = 0 and B(1) = 1.

The solve runs Newton iteration on the free zeros (one zero pinned at
the origin) against a coefficient-space residual: the monic in-disk
factor of the derivative numerator must match the monic polynomial with
the prescribed roots.  Targets are reached by continuation from the
trivial configuration B0 = z^n, scaling the prescribed points t*c_k with
t from 0 to 1.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import linear_sum_assignment

from .errors import ContinuationStallError, ConvergenceError, UnitDiskError
from .maps import (
    BlaschkeProduct,
    Composition,
    CriticalSet,
    critical_points,
    hyperbolic_derivative,
)
from .polyroots import aberth_roots
from .report import ScanReport


@dataclass(frozen=True)
class MbpProblem:
    """Prescribed critical points (with multiplicity) plus the gauge B(0)=0, B(1)=1."""

    targets: tuple

    def __post_init__(self):
        targets = tuple(complex(c) for c in self.targets)
        for c in targets:
            if abs(c) >= 1.0:
                raise UnitDiskError("critical-point targets must lie inside the disk")
        object.__setattr__(self, "targets", targets)

    @property
    def degree(self):
        return len(self.targets) + 1


@dataclass
class HomotopyTrace:
    steps: list = field(default_factory=list)

    def record(self, t, newton_iters, residual):
        self.steps.append({"t": t, "newton_iters": newton_iters, "residual": residual})

    @property
    def length(self):
        return len(self.steps)

    def to_dict(self):
        return {"length": self.length, "steps": self.steps}


@dataclass
class MbpSolution:
    blaschke: BlaschkeProduct
    residual: float
    matches: list
    trace: HomotopyTrace

    def to_dict(self):
        return {
            "blaschke": self.blaschke.to_dict(),
            "residual": self.residual,
            "matches": [
                {"target": [t.real, t.imag], "found": [f.real, f.imag]}
                for t, f in self.matches
            ],
            "trace_length": self.trace.length,
        }


def _target_coeffs(targets):
    # monic polynomial with the prescribed roots, leading 1 dropped
    return npoly.polyfromroots(np.asarray(targets, dtype=complex))[:-1]


def _indisk_coeffs(zeros):
    """Monic in-disk factor of the derivative numerator, leading 1 dropped."""
    n = len(zeros)
    p = npoly.polyfromroots(np.asarray(zeros, dtype=complex))
    q = np.ones(1, dtype=complex)
    for a in zeros:
        q = npoly.polymul(q, np.array([1.0, -np.conj(a)], dtype=complex))
    num = npoly.polysub(npoly.polymul(npoly.polyder(p), q), npoly.polymul(p, npoly.polyder(q)))
    scale = np.max(np.abs(num))
    nz = np.nonzero(np.abs(num) > 1e-13 * scale)[0]
    num = num[: nz[-1] + 1]
    roots = aberth_roots(num)
    inside = roots[np.abs(roots) < 1.0]
    if inside.size != n - 1:
        raise ConvergenceError(
            f"in-disk critical count {inside.size} != {n - 1} during continuation"
        )
    return npoly.polyfromroots(inside)[:-1]


def _residual(avec, targets):
    zeros = np.concatenate([[0.0 + 0.0j], avec])
    if np.any(np.abs(zeros) >= 0.999999):
        raise ConvergenceError("trial zero left the disk")
    r = _indisk_coeffs(zeros) - _target_coeffs(targets)
    return np.concatenate([r.real, r.imag])


def _newton(avec, targets, tol=1e-12, stall_ok=1e-10, max_iter=40, fd_step=1e-7):
    """Damped Newton on the stacked real residual; Jacobian by differences.

    The difference Jacobian floors the reachable residual around 1e-11,
    so a stalled line search still counts as converged below stall_ok.
    """
    x = np.concatenate([avec.real, avec.imag])
    m = x.size

    def to_complex(xr):
        return xr[:m // 2] + 1j * xr[m // 2:]

    r = _residual(to_complex(x), targets)
    for it in range(max_iter):
        norm = np.max(np.abs(r))
        if norm <= tol:
            return to_complex(x), it, float(norm)
        jac = np.empty((r.size, m))
        for j in range(m):
            xp = x.copy()
            xp[j] += fd_step
            jac[:, j] = (_residual(to_complex(xp), targets) - r) / fd_step
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        scale = 1.0
        for _ in range(6):
            xn = x + scale * step
            try:
                rn = _residual(to_complex(xn), targets)
            except ConvergenceError:
                scale *= 0.5
                continue
            if np.max(np.abs(rn)) < norm:
                x, r = xn, rn
                break
            scale *= 0.5
        else:
            if norm <= stall_ok:
                return to_complex(x), it, float(norm)
            raise ConvergenceError(f"Newton line search stalled at residual {norm:.3g}")
    norm = float(np.max(np.abs(r)))
    if norm <= stall_ok:
        return to_complex(x), max_iter, norm
    raise ConvergenceError(f"Newton did not reach tolerance: residual {norm:.3g}")


def solve(problem, step0=0.25, min_step=1e-6, newton_tol=1e-12, match_tol=1e-9):
    """Solve for the normalized Blaschke product with the prescribed critical set.

    Raises ContinuationStallError when the continuation step underflows
    and ConvergenceError when the final critical points fail to match
    the targets within match_tol.
    """
    targets = np.asarray(problem.targets, dtype=complex)
    n = problem.degree
    trace = HomotopyTrace()
    if n == 1:
        b = BlaschkeProduct(zeros=(0.0,))
        return MbpSolution(blaschke=b, residual=0.0, matches=[], trace=trace)

    avec = np.zeros(n - 1, dtype=complex)  # exact solution for t = 0 (B = z^n)
    t_cur, step = 0.0, step0
    while t_cur < 1.0:
        t_try = min(1.0, t_cur + step)
        try:
            avec_new, iters, resid = _newton(avec, t_try * targets, tol=newton_tol)
        except ConvergenceError:
            step *= 0.5
            if step < min_step:
                raise ContinuationStallError(
                    f"continuation step underflowed at t = {t_cur}", trace=trace
                )
            continue
        avec, t_cur = avec_new, t_try
        trace.record(t_cur, iters, resid)
        step = min(step * 1.5, 0.5)

    zeros = tuple(np.concatenate([[0.0 + 0.0j], avec]))
    p1 = complex(np.prod([1.0 - a for a in zeros]))
    lam = np.conj(p1) / p1  # pins B(1) = 1; B(0) = 0 comes from the zero at 0
    b = BlaschkeProduct(zeros=zeros, lam=lam)

    found = np.asarray(critical_points(b).points, dtype=complex)
    cost = np.abs(targets[:, None] - found[None, :])
    rows, cols = linear_sum_assignment(cost)
    residual = float(np.max(cost[rows, cols])) if cost.size else 0.0
    if residual > match_tol:
        raise ConvergenceError(
            f"critical points miss targets by {residual:.3g} (tol {match_tol})"
        )
    matches = [(complex(targets[i]), complex(found[j])) for i, j in zip(rows, cols)]
    return MbpSolution(blaschke=b, residual=residual, matches=matches, trace=trace)


def normalize(e):
    """Postcompose with the automorphism sending e(0) to 0 and e(1) to 1.

    Puts any map with a boundary value at 1 into the solver gauge so two
    maps that differ by an automorphism become comparable pointwise.
    """
    from .maps import DiskAutomorphism, compose

    center = complex(e(0.0))
    t0 = DiskAutomorphism(theta=0.0, a=center)
    v1 = t0(complex(e(1.0)))
    if abs(v1) == 0:
        raise ValueError("map sends 1 to the image of 0; gauge is degenerate")
    rot = DiskAutomorphism(theta=float(-np.angle(v1)), a=0.0)
    return compose(rot, compose(t0, e))


def _containment_gap(b, competitor):
    crit = critical_points(b).points
    if not crit:
        return 0.0
    gaps = [abs(complex(competitor.derivative(c))) for c in crit]
    return float(max(gaps))


def extremality_check(b, competitors, samples=1000, radius=0.8, rng=None, tol=1e-12):
    """Margins of the pointwise hyperbolic-distortion extremality of b.

    Every competitor g must carry the critical points of b (structural
    for g = F o b, otherwise |g'(c)| must vanish at each critical point
    c); then hyperbolic_derivative(b, z) - hyperbolic_derivative(g, z)
    is checked to be >= -tol on random interior samples.  A competitor
    whose margins vanish identically is flagged as automorphism-like,
    which is the equality case T o b.
    """
    rng = np.random.default_rng(rng)
    theta = rng.uniform(0.0, 2.0 * np.pi, samples)
    rr = radius * np.sqrt(rng.random(samples))
    pts = rr * np.exp(1j * theta)
    hyp_b = hyperbolic_derivative(b, pts)

    all_points, all_margins, all_pass = [], [], []
    comp_meta = []
    for idx, g in enumerate(competitors):
        structural = isinstance(g, Composition) and g.inner == b
        gap = 0.0 if structural else _containment_gap(b, g)
        if gap > 1e-9:
            raise ConvergenceError(
                f"competitor {idx} does not contain the critical set: |g'(c)| = {gap:.3g}"
            )
        margins = hyp_b - hyperbolic_derivative(g, pts)
        passed = margins >= -tol
        equality_like = bool(np.max(np.abs(margins)) < 1e-9)
        comp_meta.append(
            {
                "index": idx,
                "structural_containment": structural,
                "containment_gap": gap,
                "min_margin": float(np.min(margins)),
                "max_abs_margin": float(np.max(np.abs(margins))),
                "automorphism_like": equality_like,
            }
        )
        all_points.append(pts)
        all_margins.append(margins)
        all_pass.append(passed)

    return ScanReport(
        kind="extremality",
        points=np.concatenate(all_points) if all_points else np.empty(0, complex),
        margins=np.concatenate(all_margins) if all_margins else np.empty(0),
        passed=np.concatenate(all_pass) if all_pass else np.empty(0, bool),
        tolerance=tol,
        meta={"competitors": comp_meta, "samples": samples, "radius": radius},
    )
