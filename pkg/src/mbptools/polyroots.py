"""Polynomial roots by Aberth-Ehrlich simultaneous iteration.

Coefficients are ascending (c[0] + c[1] z + ...).  Roots at the origin
are peeled off exactly before iterating, which keeps the common
monomial-times-unit cases sharp.  Every returned root carries a residual
certificate |p(root)| <= residual_factor * ||p||_inf * max(1, |root|)**deg.
"""

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConvergenceError


def _trim(coeffs):
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size == 0:
        raise ValueError("empty coefficient vector")
    scale = np.max(np.abs(c))
    if scale == 0:
        raise ValueError("zero polynomial has no well-defined roots")
    nz = np.nonzero(np.abs(c) > 1e-14 * scale)[0]
    return c[: nz[-1] + 1]


def aberth_roots(coeffs, tol_step=1e-14, max_iter=200, residual_factor=1e-10):
    """All complex roots of the polynomial with ascending coefficients."""
    c = _trim(coeffs)
    deg = c.size - 1
    if deg == 0:
        return np.empty(0, dtype=complex)

    # peel exact roots at the origin
    lead_zeros = 0
    while lead_zeros < deg and c[lead_zeros] == 0:
        lead_zeros += 1
    origin = np.zeros(lead_zeros, dtype=complex)
    c = c[lead_zeros:]
    n = c.size - 1
    if n == 0:
        return origin

    dc = npoly.polyder(c)
    radius = 1.0 + float(np.max(np.abs(c[:-1]) / np.abs(c[-1])))
    angles = 2.0 * np.pi * (np.arange(n) + 0.5) / n + 0.4
    z = 0.7 * radius * np.exp(1j * angles)

    for _ in range(max_iter):
        pz = npoly.polyval(z, c)
        dpz = npoly.polyval(z, dc)
        dpz = np.where(dpz == 0, 1e-300, dpz)
        newton = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        w = newton / (1.0 - newton * s)
        z = z - w
        if np.max(np.abs(w)) <= tol_step * (1.0 + np.max(np.abs(z))):
            break

    norm = float(np.max(np.abs(c)))
    resid = np.abs(npoly.polyval(z, c))
    bound = residual_factor * norm * np.maximum(1.0, np.abs(z)) ** n
    if np.any(resid > bound):
        worst = float(np.max(resid / bound))
        raise ConvergenceError(
            f"root residual certification failed (worst ratio {worst:.3g})"
        )
    return np.concatenate([origin, z])


def cluster_roots(roots, tol=1e-7):
    """Group numerically coincident roots; returns [(center, multiplicity)].

    Union-find over all pairs within tol; cluster centers are means.
    Numerics cannot see exact multiplicity, so the tolerance is a policy
    knob rather than a certificate.
    """
    roots = np.asarray(roots, dtype=complex).ravel()
    k = roots.size
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(roots[i] - roots[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(roots[i])
    clusters = [
        (complex(np.mean(members)), len(members)) for members in groups.values()
    ]
    clusters.sort(key=lambda cm: (cm[0].real, cm[0].imag))
    return clusters
