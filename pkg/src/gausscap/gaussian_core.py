"""
Two-by-two moment algebra for one bosonic mode.

Covariance matrices follow the hbar = 1 convention: the vacuum has
``V = I/2`` and a physical state satisfies ``det(V) >= 1/4``.  Vectors are
numpy arrays of shape ``(2,)`` and matrices numpy arrays of shape ``(2, 2)``.
All entropies are in bits.
"""

from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from gausscap.errors import (
    DegenerateError,
    DomainError,
    InvalidSymplecticError,
    ZeroMatrixError,
)

TOL_CM = 1e-9
TOL_SYMP = 1e-9
TOL_RECON = 1e-9
TOL_RANK = 1e-12

_LN2 = math.log(2.0)


def as_vec2(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (2,):
        raise ValueError(f"expected a 2-vector, got shape {np.shape(v)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def as_mat2(m) -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    if arr.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def as_sym2(m, max_asym: float = np.inf) -> np.ndarray:
    """Return the symmetric part of ``m``, rejecting asymmetry above ``max_asym``."""
    arr = as_mat2(m)
    asym = abs(arr[0, 1] - arr[1, 0])
    if asym > max_asym:
        raise ValueError(f"matrix is not symmetric (|m01 - m10| = {asym:.3e})")
    return 0.5 * (arr + arr.T)


def sym2(a: float, b: float, c: float = 0.0) -> np.ndarray:
    """Symmetric matrix [[a, c], [c, b]]."""
    return np.array([[a, c], [c, b]], dtype=float)


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def det2(m: np.ndarray) -> float:
    # explicit 2x2 determinant; np.linalg.det goes through LU and is less exact
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def inv_symplectic(s: np.ndarray) -> np.ndarray:
    """Inverse of a 2x2 matrix with unit determinant (exact adjugate)."""
    return np.array([[s[1, 1], -s[0, 1]], [-s[1, 0], s[0, 0]]])


def is_symplectic(s, tol: float = TOL_SYMP) -> bool:
    return abs(det2(as_mat2(s)) - 1.0) <= tol


def check_symplectic(s, tol: float = TOL_SYMP) -> np.ndarray:
    arr = as_mat2(s)
    d = det2(arr)
    if abs(d - 1.0) > tol:
        raise InvalidSymplecticError(f"det(S) = {d!r} differs from 1 by more than {tol}")
    return arr


def is_psd(m: np.ndarray, tol: float = TOL_CM) -> bool:
    m = as_sym2(m)
    return bool(np.linalg.eigvalsh(m)[0] >= -tol)


def is_physical(v, tol: float = TOL_CM) -> bool:
    """True when ``v`` is a valid covariance matrix of a quantum state."""
    v = as_sym2(v)
    return bool(v[0, 0] > 0 and det2(v) >= 0.25 - tol)


def entropy_h(x):
    """
    Entropy of a one-mode Gaussian state with symplectic eigenvalue ``x``.

    h(x) = (x + 1/2) log2(x + 1/2) - (x - 1/2) log2(x - 1/2), extended by
    continuity to h(1/2) = 0.  Accepts scalars or numpy arrays.

    Writing u = x - 1/2 the same quantity is log1p(u) + u log1p(1/u) (in
    nats), which avoids the catastrophic cancellation of the textbook form
    for large x and never evaluates log(0).

    Raises
    ------
    DomainError
        If any ``x < 1/2 - TOL_CM``.
    """
    if isinstance(x, (float, int)):
        if not x >= 0.5 - TOL_CM:
            raise DomainError(f"entropy_h needs x >= 1/2, got {x!r}")
        u = x - 0.5
        if u <= 0.0:
            return 0.0
        return (math.log1p(u) + u * math.log1p(1.0 / u)) / _LN2
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.5 - TOL_CM) or np.any(np.isnan(xa)):
        raise DomainError(f"entropy_h needs x >= 1/2, got {x!r}")
    u = np.maximum(xa - 0.5, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(u > 0.0, np.log1p(u) + u * np.log1p(1.0 / u), 0.0) / _LN2
    if np.ndim(val) == 0:
        return float(val)
    return val


def state_entropy(v) -> float:
    """Von Neumann entropy (bits) of the Gaussian state with covariance ``v``."""
    v = as_sym2(v)
    d = det2(v)
    if d < 0.25 - TOL_CM or v[0, 0] <= 0:
        raise DomainError(f"covariance matrix is not physical (det = {d!r})")
    return entropy_h(np.sqrt(max(d, 0.25)))


def euler_decompose(s) -> Tuple[np.ndarray, float, np.ndarray]:
    """
    Factor a symplectic ``S`` as ``R @ diag(sqrt(r), 1/sqrt(r)) @ Rp``.

    ``R`` and ``Rp`` are proper rotations and ``r >= 1`` is the square of the
    largest singular value of ``S``.
    """
    s = check_symplectic(s)
    u, sv, vt = np.linalg.svd(s)
    # det(S) > 0 forces det(u) == det(vt); flip one axis of both if they are reflections
    if np.linalg.det(u) < 0:
        flip = np.diag([1.0, -1.0])
        u = u @ flip
        vt = flip @ vt
    if u[0, 0] < 0 and u[1, 1] < 0:
        # rotation by pi: absorb it in both factors so S = I decomposes to (I, 1, I)
        u, vt = -u, -vt
    r = float(sv[0] ** 2)
    return u, max(r, 1.0), vt


def squeeze(r: float) -> np.ndarray:
    """diag(sqrt(r), 1/sqrt(r))."""
    return np.diag([np.sqrt(r), 1.0 / np.sqrt(r)])


def williamson_1mode(n) -> Tuple[np.ndarray, float]:
    """
    Williamson form of a positive-definite 2x2 matrix.

    Returns ``(S, nu)`` with ``S @ (nu * I) @ S.T == N`` and
    ``nu = sqrt(det N)``.  ``S`` is the symmetric square root of ``N / nu``.
    """
    n = as_sym2(n)
    d = det2(n)
    if d <= TOL_RANK or n[0, 0] <= 0:
        raise DegenerateError(f"williamson_1mode needs det(N) > {TOL_RANK}, got {d!r}")
    nu = float(np.sqrt(d))
    a = n / nu
    # closed-form square root of a 2x2 SPD matrix with unit determinant
    s = (a + np.eye(2)) / np.sqrt(a[0, 0] + a[1, 1] + 2.0)
    return s, nu


def rank_one_reduce(n) -> Tuple[np.ndarray, float]:
    """
    Symplectic ``S`` with ``S @ N @ S.T == diag(1, 0)`` for a rank-one PSD ``N``.

    Returns ``(S, lam)`` where ``lam`` is the nonzero eigenvalue of ``N``.
    """
    n = as_sym2(n)
    if np.max(np.abs(n)) <= TOL_RANK:
        raise ZeroMatrixError("rank_one_reduce needs a nonzero matrix")
    if det2(n) > TOL_RANK:
        raise DegenerateError(f"matrix has full rank (det = {det2(n)!r})")
    w, vecs = np.linalg.eigh(n)
    lam = float(w[1])
    u = vecs[:, 1]
    if u[0] < 0 or (u[0] == 0 and u[1] < 0):
        u = -u
    # rotation sending u to e1
    rot = np.array([[u[0], u[1]], [-u[1], u[0]]])
    s = np.diag([lam ** -0.5, lam ** 0.5]) @ rot
    return s, lam
