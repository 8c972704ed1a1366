"""Compiled inner loop for penalized weighted least squares."""
import numba
import numpy as np


@numba.njit(cache=True)
def cd_wls(X, w, z, beta, b0, l1, l2, tol, max_sweeps):
    """Cyclic coordinate descent on

        1/2 sum_i w_i (z_i - b0 - x_i'beta)^2 + l1 |beta|_1 + l2/2 |beta|_2^2

    updating ``beta`` in place. Returns the new intercept and the sweep count.
    """
    n, p = X.shape
    resid = np.empty(n)
    for i in range(n):
        acc = b0
        for j in range(p):
            acc += X[i, j] * beta[j]
        resid[i] = z[i] - acc
    wsum = 0.0
    for i in range(n):
        wsum += w[i]
    xwx = np.empty(p)
    for j in range(p):
        acc = 0.0
        for i in range(n):
            acc += w[i] * X[i, j] * X[i, j]
        xwx[j] = acc
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        max_change = 0.0
        # intercept (unpenalized)
        acc = 0.0
        for i in range(n):
            acc += w[i] * resid[i]
        delta = acc / wsum
        b0 += delta
        for i in range(n):
            resid[i] -= delta
        if abs(delta) > max_change:
            max_change = abs(delta)
        for j in range(p):
            denom = xwx[j] + l2
            if denom <= 0.0:
                continue
            old = beta[j]
            acc = 0.0
            for i in range(n):
                acc += w[i] * X[i, j] * resid[i]
            rho = acc + xwx[j] * old
            if rho > l1:
                new = (rho - l1) / denom
            elif rho < -l1:
                new = (rho + l1) / denom
            else:
                new = 0.0
            if new != old:
                d = new - old
                for i in range(n):
                    resid[i] -= X[i, j] * d
                beta[j] = new
                ad = abs(d) * np.sqrt(xwx[j] / wsum)
                if ad > max_change:
                    max_change = ad
        if max_change < tol:
            break
    return b0, sweeps
