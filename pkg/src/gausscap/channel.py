"""
One-mode Gaussian channels as moment maps.

A channel is the triplet ``(d, T, N)`` acting as ``mean -> T mean + d`` and
``V -> T V T^T + N``.  Gaussian unitaries ``(f, S)`` act on it from either
side; the orbits of that action are the seven classes in :class:`ChannelClass`,
each with a canonical representative ``(0, T_c, N_c)``.

The pre-processing convention is ``T_c = S_B @ T @ S_A``, so the original
channel is ``T = S_B^-1 @ T_c @ S_A^-1``.  The matrix that acts on the encoded
state *after* the canonical unitaries are peeled off is therefore
``P = S_A^-1``, and the residual parameters ``r``, ``t``, ``n`` are read from
``P`` (``r`` is the same for ``S_A`` and ``P`` since both have singular values
``sqrt(r)`` and ``1/sqrt(r)``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from gausscap.errors import InvalidChannelError, UnreducibleError
from gausscap.gaussian_core import (
    TOL_CM,
    TOL_RANK,
    TOL_RECON,
    as_mat2,
    as_sym2,
    as_vec2,
    check_symplectic,
    det2,
    euler_decompose,
    inv_symplectic,
    is_physical,
    rank_one_reduce,
    rotation,
    squeeze,
    williamson_1mode,
)

TOL_CP = 1e-9

Z = np.diag([1.0, -1.0])
E11 = np.diag([1.0, 0.0])


class ChannelClass(str, enum.Enum):
    A1 = "A1"
    A2 = "A2"
    B1 = "B1"
    B2 = "B2"
    C_att = "C_att"
    C_amp = "C_amp"
    D = "D"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class GaussianChannel:
    """Moment-level description of a one-mode Gaussian channel."""

    T: np.ndarray
    N: np.ndarray
    d: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        object.__setattr__(self, "T", as_mat2(self.T))
        object.__setattr__(self, "N", as_sym2(self.N))
        object.__setattr__(self, "d", as_vec2(self.d))

    @classmethod
    def identity(cls) -> "GaussianChannel":
        return cls(np.eye(2), np.zeros((2, 2)))

    @property
    def tau(self) -> float:
        return det2(self.T)


def cp_violation(ch: GaussianChannel) -> Optional[str]:
    """Describe why ``ch`` is not completely positive, or return None."""
    eig_min = float(np.linalg.eigvalsh(ch.N)[0])
    if eig_min < -TOL_CP:
        return f"N is not positive semidefinite (smallest eigenvalue {eig_min:.9f})"
    lhs = det2(ch.N)
    rhs = ((det2(ch.T) - 1.0) / 2.0) ** 2
    if lhs < rhs - TOL_CP:
        return f"det(N) = {lhs:.9f} < [(det(T) - 1)/2]^2 = {rhs:.9f}"
    return None


def cp_check(ch: GaussianChannel) -> bool:
    return cp_violation(ch) is None


def _require_cp(ch: GaussianChannel) -> None:
    msg = cp_violation(ch)
    if msg is not None:
        raise InvalidChannelError(f"channel is not completely positive: {msg}")


def apply(ch: GaussianChannel, mean, V) -> Tuple[np.ndarray, np.ndarray]:
    """Push the first and second moments of a Gaussian state through ``ch``."""
    _require_cp(ch)
    mean = as_vec2(mean)
    V = as_sym2(V)
    if not is_physical(V):
        raise InvalidChannelError("input covariance matrix is not physical")
    out = ch.T @ V @ ch.T.T + ch.N
    return ch.T @ mean + ch.d, 0.5 * (out + out.T)


def compose_unitaries(
    ch: GaussianChannel,
    pre: Tuple[np.ndarray, np.ndarray] = (np.zeros(2), np.eye(2)),
    post: Tuple[np.ndarray, np.ndarray] = (np.zeros(2), np.eye(2)),
) -> GaussianChannel:
    """Sandwich ``ch`` between Gaussian unitaries ``pre = (f_A, S_A)`` and ``post = (f_B, S_B)``."""
    _require_cp(ch)
    f_a, s_a = as_vec2(pre[0]), check_symplectic(pre[1])
    f_b, s_b = as_vec2(post[0]), check_symplectic(post[1])
    d = s_b @ (ch.T @ f_a + ch.d) + f_b
    return GaussianChannel(s_b @ ch.T @ s_a, s_b @ ch.N @ s_b.T, d)


def invariants_of(ch: GaussianChannel) -> Tuple[float, float]:
    """``(det T, det N)``; both are unchanged by symplectic pre/post-processing."""
    return det2(ch.T), det2(ch.N)


def classify(ch: GaussianChannel) -> ChannelClass:
    _require_cp(ch)
    tau = det2(ch.T)
    if np.max(np.abs(ch.T)) <= TOL_RANK:
        return ChannelClass.A1
    if abs(tau) < TOL_RANK:
        return ChannelClass.A2
    if abs(tau - 1.0) <= TOL_RANK:
        if det2(ch.N) <= TOL_RANK and np.max(np.abs(ch.N)) > TOL_RANK:
            return ChannelClass.B1
        return ChannelClass.B2
    if tau < 0:
        return ChannelClass.D
    return ChannelClass.C_att if tau < 1 else ChannelClass.C_amp


@dataclass(frozen=True)
class CanonicalForm:
    """
    Canonical representative of a channel plus the unitaries that reach it.

    ``frame`` is the rotation ``Q`` such that an encoding found in the reduced
    problem, ``(V_red, M_red)``, is realized on the original channel by
    ``Q.T @ V_red @ Q``.
    """

    cls: ChannelClass
    tau: float
    nbar: float
    r: float
    t: float
    n: float
    S_A: np.ndarray
    S_B: np.ndarray
    T_c: np.ndarray
    N_c: np.ndarray
    frame: np.ndarray
    residual: float
    f_B: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def channel(self) -> GaussianChannel:
        return GaussianChannel(self.T_c, self.N_c)

    def rebuild(self, d=(0.0, 0.0)) -> GaussianChannel:
        """Undo the reduction: ``(d, S_B^-1 T_c S_A^-1, S_B^-1 N_c S_B^-T)``."""
        b_inv = np.linalg.inv(self.S_B)
        a_inv = np.linalg.inv(self.S_A)
        return GaussianChannel(b_inv @ self.T_c @ a_inv, b_inv @ self.N_c @ b_inv.T, d)


def _rot_to_e1(v: np.ndarray) -> np.ndarray:
    """Rotation mapping the direction of ``v`` onto (1, 0)."""
    u = v / np.hypot(v[0], v[1])
    return np.array([[u[0], u[1]], [-u[1], u[0]]])


def canonical_reduce(ch: GaussianChannel, seed: Optional[int] = None) -> CanonicalForm:
    """
    Reduce ``ch`` to its canonical form.

    The pair ``(S_A, S_B)`` is not unique.  With ``seed`` set, a random element
    of the stabilizer of ``N_c`` is folded into ``S_B``; the returned
    ``(tau, nbar, r, t, n)`` must not depend on it.
    """
    cls = classify(ch)
    T, N = ch.T, ch.N
    tau = det2(T)
    rng = np.random.default_rng(seed) if seed is not None else None

    def gauge_rotation() -> np.ndarray:
        if rng is None:
            return np.eye(2)
        return rotation(rng.uniform(0.0, 2.0 * np.pi))

    nbar, t, n = 0.0, 0.0, 0.0
    if cls is ChannelClass.A1:
        s_w, nu = williamson_1mode(N)
        s_b = gauge_rotation() @ inv_symplectic(s_w)
        t_c, n_c = np.zeros((2, 2)), nu * np.eye(2)
        s_a = np.eye(2)
        p = np.eye(2)
        nbar = nu - 0.5
        frame = np.eye(2)
    elif cls is ChannelClass.A2:
        s_w, nu = williamson_1mode(N)
        s_b0 = gauge_rotation() @ inv_symplectic(s_w)
        u, sv, vt = np.linalg.svd(s_b0 @ T)
        s_b = _rot_to_e1(u[:, 0]) @ s_b0
        # S_B T = e1 p^T; P has p^T as first row and any completion with det 1
        row = (s_b @ T)[0]
        t = float(row @ row)
        second = np.array([-row[1], row[0]]) / t
        if rng is not None:
            second = second + rng.normal() * row
        p = np.vstack([row, second])
        s_a = inv_symplectic(p)
        t_c, n_c = E11.copy(), nu * np.eye(2)
        nbar = nu - 0.5
        frame = _rot_to_e1(row)
    elif cls is ChannelClass.B1:
        s_b, _ = rank_one_reduce(N)
        if rng is not None:
            sign = rng.choice([-1.0, 1.0])
            s_b = np.array([[sign, rng.normal()], [0.0, sign]]) @ s_b
        p = s_b @ T
        s_a = np.linalg.inv(p)
        q = s_a[:, 0]
        n = float(q @ q)
        t_c, n_c = np.eye(2), E11.copy()
        frame = _rot_to_e1(q)
    else:
        if cls is ChannelClass.B2 and det2(N) <= TOL_RANK:
            s_b, nu = gauge_rotation(), 0.0
        else:
            s_w, nu = williamson_1mode(N)
            s_b = gauge_rotation() @ inv_symplectic(s_w)
        n_c = nu * np.eye(2)
        if cls is ChannelClass.B2:
            t_c = np.eye(2)
            nbar = nu
        elif cls is ChannelClass.D:
            t_c = np.sqrt(-tau) * Z
            nbar = nu / (1.0 - tau) - 0.5
        else:
            t_c = np.sqrt(tau) * np.eye(2)
            nbar = nu / abs(1.0 - tau) - 0.5
        # T_c P = S_B T with T_c invertible
        p = np.linalg.solve(t_c, s_b @ T)
        s_a = np.linalg.inv(p)

    if cls is ChannelClass.A1:
        r = 1.0
    else:
        _, r, rp = euler_decompose(p)
        if cls not in (ChannelClass.A2, ChannelClass.B1):
            frame = rp
    if nbar < 0.0:
        if nbar < -TOL_CM:
            raise UnreducibleError(f"negative thermal parameter {nbar!r}")
        nbar = 0.0

    res_t = np.max(np.abs(s_b @ T @ s_a - t_c))
    res_n = np.max(np.abs(s_b @ N @ s_b.T - n_c))
    residual = float(max(res_t, res_n))
    scale = max(1.0, np.max(np.abs(s_b)) ** 2 * max(np.max(np.abs(T)) * np.max(np.abs(s_a)), np.max(np.abs(N))))
    if not np.isfinite(residual) or residual > TOL_RECON * scale:
        raise UnreducibleError(f"reduction residual {residual:.3e} exceeds tolerance")
    return CanonicalForm(
        cls=cls,
        tau=tau,
        nbar=float(nbar),
        r=float(r),
        t=float(t),
        n=float(n),
        S_A=s_a,
        S_B=s_b,
        T_c=t_c,
        N_c=n_c,
        frame=frame,
        residual=residual,
        f_B=-(s_b @ ch.d),
    )


def canonical_channel(
    cls,
    tau: float = 0.5,
    nbar: float = 0.0,
    r: float = 1.0,
    t: float = 1.0,
    n: float = 1.0,
) -> GaussianChannel:
    """
    Build a channel in class ``cls`` with the given canonical and residual
    parameters; ``canonical_reduce`` of the result recovers them.

    The squeeze ``r`` is applied as pre-processing for B2, C and D; A2 uses
    ``t`` and B1 uses ``n``.  ``tau`` is only read for C and D.
    """
    cls = ChannelClass(cls)
    if cls is ChannelClass.A1:
        return GaussianChannel(np.zeros((2, 2)), (nbar + 0.5) * np.eye(2))
    if cls is ChannelClass.A2:
        return GaussianChannel(np.diag([np.sqrt(t), 0.0]), (nbar + 0.5) * np.eye(2))
    if cls is ChannelClass.B1:
        return GaussianChannel(np.diag([n ** -0.5, n ** 0.5]), E11.copy())
    if cls is ChannelClass.B2:
        return GaussianChannel(squeeze(r), nbar * np.eye(2))
    if cls is ChannelClass.D:
        if tau >= 0:
            raise ValueError("class D needs tau < 0")
        return GaussianChannel(np.sqrt(-tau) * Z @ squeeze(r), (1.0 - tau) * (nbar + 0.5) * np.eye(2))
    if not (0.0 < tau < 1.0 if cls is ChannelClass.C_att else tau > 1.0):
        raise ValueError(f"tau = {tau} is outside the range of class {cls}")
    return GaussianChannel(np.sqrt(tau) * squeeze(r), abs(1.0 - tau) * (nbar + 0.5) * np.eye(2))
