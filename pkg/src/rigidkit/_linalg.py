"""Shared numerical linear algebra: rank decisions, nullspaces, least squares.

All rank decisions in the package go through :func:`numerical_rank` so that
the threshold convention (sigma > tol * sigma_max * max(m, n)) is applied
uniformly and can be overridden in one place.
"""

import numpy as np

#: Default relative singular-value threshold for rank decisions.
RANK_TOL = 1e-9


def _as_matrix(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-d array, got shape %r" % (a.shape,))
    return a


def singular_values(a):
    a = _as_matrix(a)
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def numerical_rank(a, tol=RANK_TOL):
    """Rank of `a`: number of singular values above tol * sigma_max * max(m, n)."""
    a = _as_matrix(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    cutoff = tol * s[0] * max(a.shape)
    return int(np.sum(s > cutoff))


def nullity(a, tol=RANK_TOL):
    a = _as_matrix(a)
    return a.shape[1] - numerical_rank(a, tol)


def nullspace(a, tol=RANK_TOL):
    """Orthonormal basis of the numerical right nullspace, one row per basis vector.

    Returns an array of shape (nullity, n_cols); the identity for a matrix
    with zero rows.
    """
    a = _as_matrix(a)
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0))
    if m == 0 or not np.any(a):
        return np.eye(n)
    _, s, vt = np.linalg.svd(a)
    cutoff = tol * s[0] * max(m, n) if s.size else 0.0
    rank = int(np.sum(s > cutoff))
    return vt[rank:]

def row_space(a, tol=RANK_TOL):
    """Orthonormal basis of the row space, one row per basis vector."""
    a = _as_matrix(a)
    if a.shape[0] == 0 or a.shape[1] == 0 or not np.any(a):
        return np.zeros((0, a.shape[1]))
    _, s, vt = np.linalg.svd(a)
    cutoff = tol * s[0] * max(a.shape)
    rank = int(np.sum(s > cutoff))
    return vt[:rank]


def smallest_singular_values(a, k=2):
    """The k smallest singular values, padded with nan when the matrix is tiny."""
    s = singular_values(a)
    s = np.sort(s)
    out = np.full(k, np.nan)
    out[: min(k, s.size)] = s[: min(k, s.size)]
    return out


def min_norm_lstsq(a, b):
    """Minimum-norm least-squares solution of a x ~ b and its residual norm."""
    a = _as_matrix(a)
    b = np.asarray(b, dtype=float)
    if a.shape[1] == 0:
        return np.zeros(0), float(np.linalg.norm(b))
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=None)
    resid = float(np.linalg.norm(a @ x - b))
    return x, resid
