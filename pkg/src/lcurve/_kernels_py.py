"""Pure-Python (numpy) implementation of the frame-integration kernel.

Mirrors ``_kernels.pyx`` line for line; ``lcurve.kernels`` picks whichever is
available.
"""
import numpy as np

STATUS_OK = 0
STATUS_NULL_RESIDUAL = 1
STATUS_SIGNATURE_FLIP = 2


def _inner(x, y):
    return float(np.dot(x[1:], y[1:]) - x[0] * y[0])


def _frame_defect(F, G):
    gram = F[:, 1:] @ F[:, 1:].T - np.outer(F[:, 0], F[:, 0])
    return float(np.max(np.abs(gram - G)))


def renormalize_spacelike(F, eta):
    n = F.shape[0]
    for k in range(n):
        r = F[k].copy()
        for j in range(k):
            r -= eta[j] * _inner(r, F[j]) * F[j]
        q = _inner(r, r)
        if q == 0.0:
            return STATUS_NULL_RESIDUAL
        if (q > 0) != (eta[k] > 0):
            return STATUS_SIGNATURE_FLIP
        F[k] = r / np.sqrt(abs(q))
    return STATUS_OK


def renormalize_null(F):
    """Restore the null-frame pairings; rows are T, N, B1, B2, ..."""
    n = F.shape[0]
    spacelike = [1] + list(range(3, n))
    done = []
    for k in spacelike:
        r = F[k].copy()
        for j in done:
            r -= _inner(r, F[j]) * F[j]
        q = _inner(r, r)
        if q <= 0.0:
            return STATUS_SIGNATURE_FLIP
        F[k] = r / np.sqrt(q)
        done.append(k)
    for k in (0, 2):
        for j in done:
            F[k] -= _inner(F[k], F[j]) * F[j]
    a = _inner(F[0], F[0])
    b = _inner(F[0], F[2])
    c = _inner(F[2], F[2])
    if b == 0.0:
        return STATUS_NULL_RESIDUAL
    disc = b * b - a * c
    if disc < 0.0:
        return STATUS_NULL_RESIDUAL
    # smaller root of c x^2 + 2 b x + a = 0
    x = -a / (b + np.copysign(np.sqrt(disc), b))
    F[0] = F[0] + x * F[2]
    p = _inner(F[2], F[0])
    y = -_inner(F[2], F[2]) / (2.0 * p)
    F[2] = F[2] + y * F[0]
    F[2] = F[2] / _inner(F[0], F[2])
    return STATUS_OK


def integrate_frames(M, Y0, h, G, null_kind, renorm):
    """Classical RK4 for ``Y' = M(s) Y`` with optional per-step renormalization.

    Parameters
    ----------
    M : ndarray, shape (2K+1, n+1, n+1)
        Generator at nodes (even entries) and midpoints (odd entries).
    Y0 : ndarray, shape (n+1, n)
        Initial frame rows followed by the initial position.
    G : ndarray, shape (n, n)
        Target Gram matrix of the frame rows.

    Returns
    -------
    Y, defects, status, bad_step
        ``defects[k]`` is the Gram-matrix defect after step ``k`` and before
        renormalization.
    """
    K = (M.shape[0] - 1) // 2
    Y = np.empty((K + 1,) + Y0.shape)
    Y[0] = Y0
    defects = np.zeros(K)
    n = Y0.shape[1]
    eta = np.diag(G).copy()
    for k in range(K):
        y = Y[k]
        A0, Ah, A1 = M[2 * k], M[2 * k + 1], M[2 * k + 2]
        k1 = A0 @ y
        k2 = Ah @ (y + 0.5 * h * k1)
        k3 = Ah @ (y + 0.5 * h * k2)
        k4 = A1 @ (y + h * k3)
        ynew = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        defects[k] = _frame_defect(ynew[:n], G)
        if renorm:
            F = ynew[:n]
            status = renormalize_null(F) if null_kind else renormalize_spacelike(F, eta)
            if status != STATUS_OK:
                Y[k + 1] = ynew
                return Y[: k + 2], defects[: k + 1], status, k + 1
        Y[k + 1] = ynew
    return Y, defects, STATUS_OK, -1
