"""Pure-numpy Douglas-Rachford kernels (fallback backend).

Both kernels alternate the complex soft-threshold proximal map of the l1
norm with an exact projection onto the affine constraint set, then relax:

    y = shrink(z, mu)
    w = project(2y - z)
    z = z + rho * (w - y)

``w`` is feasible at every iteration; the loop stops when ||w - y||_2 drops
below an absolute threshold.  The numba backend implements the identical
iteration; see _kernels_numba.py.
"""

import numpy as np


def _shrink(z, mu):
    mod = np.abs(z)
    return np.where(mod > mu, z * (1.0 - mu / np.maximum(mod, 1e-300)), 0.0 + 0.0j)


def dr_partial_fourier(A, b, mu, rho, max_iter, eps_step_abs):
    """min ||y||_1  s.t.  A y = b, with A having orthonormal rows.

    Returns (w, iterations, gap): w is exactly feasible (up to rounding)
    because the last step applied the projection  w = r + A^H (b - A r).
    """
    aHb = A.conj().T @ b
    z = aHb.copy()
    w = aHb.copy()
    gap = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        y = _shrink(z, mu)
        r = 2.0 * y - z
        w = r + A.conj().T @ (b - A @ r)
        diff = w - y
        gap = float(np.linalg.norm(diff))
        z = z + rho * diff
        if gap <= eps_step_abs:
            break
    return w, it, gap


def dr_time_frequency_split(W, x, mu, rho, max_iter, eps_step_abs):
    """min ||y||_1 + ||v||_1  s.t.  y + W^H v = x  (W the unitary DFT).

    The constraint map M = [I, W^H] satisfies M M^H = 2I, so the projection
    is  (y, v) += (r/2, W r / 2)  with  r = x - y - W^H v.
    Returns (wy, wv, iterations, gap).
    """
    n = x.size
    zy = np.zeros(n, dtype=np.complex128)
    zv = np.zeros(n, dtype=np.complex128)
    wy = zy.copy()
    wv = zv.copy()
    gap = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        yy = _shrink(zy, mu)
        yv = _shrink(zv, mu)
        ry = 2.0 * yy - zy
        rv = 2.0 * yv - zv
        r = x - ry - W.conj().T @ rv
        wy = ry + 0.5 * r
        wv = rv + 0.5 * (W @ r)
        dy = wy - yy
        dv = wv - yv
        gap = float(np.sqrt(np.linalg.norm(dy) ** 2 + np.linalg.norm(dv) ** 2))
        zy = zy + rho * dy
        zv = zv + rho * dv
        if gap <= eps_step_abs:
            break
    return wy, wv, it, gap
