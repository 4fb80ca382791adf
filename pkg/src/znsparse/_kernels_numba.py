"""Numba-compiled Douglas-Rachford kernels (default backend).

Same iteration as _kernels_numpy.py, written with explicit loops so numba
fuses the shrink / matvec / update passes without temporaries.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def dr_partial_fourier(A, b, mu, rho, max_iter, eps_step_abs):
    m, n = A.shape
    AH = np.conj(A.T).copy()
    z = AH @ b
    y = np.empty(n, dtype=np.complex128)
    r = np.empty(n, dtype=np.complex128)
    w = z.copy()
    d = np.empty(m, dtype=np.complex128)
    gap = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        for i in range(n):
            zi = z[i]
            mod = abs(zi)
            if mod > mu:
                y[i] = zi * (1.0 - mu / mod)
            else:
                y[i] = 0.0 + 0.0j
            r[i] = 2.0 * y[i] - zi
        for j in range(m):
            acc = 0.0 + 0.0j
            for i in range(n):
                acc += A[j, i] * r[i]
            d[j] = b[j] - acc
        g2 = 0.0
        for i in range(n):
            acc = 0.0 + 0.0j
            for j in range(m):
                acc += AH[i, j] * d[j]
            wi = r[i] + acc
            w[i] = wi
            diff = wi - y[i]
            g2 += diff.real * diff.real + diff.imag * diff.imag
            z[i] = z[i] + rho * diff
        gap = np.sqrt(g2)
        if gap <= eps_step_abs:
            break
    return w, it, gap


@njit(cache=True)
def dr_time_frequency_split(W, x, mu, rho, max_iter, eps_step_abs):
    n = x.size
    WH = np.conj(W.T).copy()
    zy = np.zeros(n, dtype=np.complex128)
    zv = np.zeros(n, dtype=np.complex128)
    yy = np.empty(n, dtype=np.complex128)
    yv = np.empty(n, dtype=np.complex128)
    ry = np.empty(n, dtype=np.complex128)
    rv = np.empty(n, dtype=np.complex128)
    wy = np.zeros(n, dtype=np.complex128)
    wv = np.zeros(n, dtype=np.complex128)
    r = np.empty(n, dtype=np.complex128)
    gap = 0.0
    it = 0
    for it in range(1, max_iter + 1):
        for i in range(n):
            zi = zy[i]
            mod = abs(zi)
            yy[i] = zi * (1.0 - mu / mod) if mod > mu else 0.0 + 0.0j
            ry[i] = 2.0 * yy[i] - zi
            zi = zv[i]
            mod = abs(zi)
            yv[i] = zi * (1.0 - mu / mod) if mod > mu else 0.0 + 0.0j
            rv[i] = 2.0 * yv[i] - zi
        for i in range(n):
            acc = 0.0 + 0.0j
            for j in range(n):
                acc += WH[i, j] * rv[j]
            r[i] = x[i] - ry[i] - acc
        g2 = 0.0
        for i in range(n):
            acc = 0.0 + 0.0j
            for j in range(n):
                acc += W[i, j] * r[j]
            wyi = ry[i] + 0.5 * r[i]
            wvi = rv[i] + 0.5 * acc
            wy[i] = wyi
            wv[i] = wvi
            dy = wyi - yy[i]
            dv = wvi - yv[i]
            g2 += dy.real * dy.real + dy.imag * dy.imag
            g2 += dv.real * dv.real + dv.imag * dv.imag
            zy[i] = zy[i] + rho * dy
            zv[i] = zv[i] + rho * dv
        gap = np.sqrt(g2)
        if gap <= eps_step_abs:
            break
    return wy, wv, it, gap
