"""
Lower bounds on the classical capacity from Gaussian encodings.

An encoding is a signal covariance ``V`` displaced by a Gaussian-distributed
classical variable with covariance ``M``.  The Holevo information it achieves
through a channel ``(d, T, N)`` is

    chi = S[T (V + M) T^T + N] - S[T V T^T + N].

The energy budget ``E`` is the mean photon number of the input ensemble,
i.e. ``Tr(V + M) / 2 <= E + 1/2``; the vacuum ``V = I/2`` carries ``E = 0``.
Budgets below ``E = 1/2`` are rejected.

Each class has its own reduced problem.  Classes B2, C and D share one
evaluator (:func:`gain_noise_bound`) that is closed form inside the region
where the KKT multipliers of ``M >= 0`` vanish and numeric outside it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from gausscap._search import coordinate_ascent, grid_then_golden
from gausscap.channel import (
    CanonicalForm,
    ChannelClass,
    GaussianChannel,
    _require_cp,
    canonical_reduce,
)
from gausscap.errors import (
    ClassMismatchError,
    InfeasibleBudgetError,
    InfeasibleEncodingError,
    UnsupportedClassError,
)
from gausscap.gaussian_core import TOL_CM, as_sym2, det2, entropy_h, is_physical, state_entropy

TOL_OPT = 1e-9
BOUNDARY_BAND = 1e-9
GRID_1D = 2001
GRID_2D = 256
LOG2E = math.log2(math.e)

_C_CLASSES = (ChannelClass.C_att, ChannelClass.C_amp)


class Regime(str, enum.Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"
    ZERO = "zero"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class EncodingParams:
    """Signal covariance ``V`` and modulation covariance ``M``."""

    V: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "V", as_sym2(self.V))
        object.__setattr__(self, "M", as_sym2(self.M))

    @property
    def energy(self) -> float:
        """Mean photon number ``Tr(V + M)/2 - 1/2``."""
        return 0.5 * float(np.trace(self.V + self.M)) - 0.5

    def is_feasible(self, E: Optional[float] = None) -> bool:
        if not is_physical(self.V):
            return False
        if np.linalg.eigvalsh(self.M)[0] < -TOL_CM:
            return False
        return E is None or self.energy <= E + TOL_CM


@dataclass(frozen=True)
class CapacityBound:
    value: float
    regime: Regime
    witness: EncodingParams
    s_opt: Optional[float] = None
    cls: Optional[ChannelClass] = None
    diagnostics: dict = field(default_factory=dict, compare=False)


def check_energy(E: float) -> float:
    E = float(E)
    if not math.isfinite(E) or E < 0.5:
        raise InfeasibleBudgetError(f"energy budget E = {E!r} is below the minimum 1/2")
    return E


def s_interval(E: float) -> Tuple[float, float]:
    """Squeezing range of a pure diagonal signal fitting inside budget ``E``."""
    k = 2.0 * E + 1.0
    s_hi = k + math.sqrt(k * k - 1.0)
    return 1.0 / s_hi, s_hi


def _h_det(d):
    """Entropy from a determinant, clamped at the pure-state value."""
    return entropy_h(np.sqrt(np.maximum(d, 0.25)))


def holevo_gaussian(ch: GaussianChannel, enc: EncodingParams) -> float:
    _require_cp(ch)
    if not enc.is_feasible():
        raise InfeasibleEncodingError("V must be physical and M positive semidefinite")
    T, N = ch.T, ch.N
    avg = T @ (enc.V + enc.M) @ T.T + N
    out = T @ enc.V @ T.T + N
    chi = state_entropy(avg) - state_entropy(out)
    assert chi >= -TOL_OPT, f"negative Holevo information {chi!r}"
    return max(chi, 0.0)


def _to_original(cf: CanonicalForm, v_red: np.ndarray, m_red: np.ndarray) -> EncodingParams:
    q = cf.frame
    return EncodingParams(q.T @ v_red @ q, q.T @ np.maximum(m_red, 0.0) @ q)


def _require(cf: CanonicalForm, *classes: ChannelClass) -> None:
    if cf.cls not in classes:
        names = ", ".join(c.value for c in classes)
        raise ClassMismatchError(f"expected class {names}, got {cf.cls.value}")


def _vacuum() -> EncodingParams:
    return EncodingParams(0.5 * np.eye(2), np.zeros((2, 2)))


def bound_a1(cf: CanonicalForm, E: float = 0.5) -> CapacityBound:
    _require(cf, ChannelClass.A1)
    check_energy(E)
    return CapacityBound(0.0, Regime.ZERO, _vacuum(), None, cf.cls)


def _max_over_s(objective, E: float) -> Tuple[float, float]:
    """Maximize ``objective(s)`` over the feasible squeezing interval (log-spaced grid)."""
    s_lo, s_hi = s_interval(E)
    f_vec = lambda u: objective(np.exp(u))
    f = lambda u: float(objective(math.exp(u)))
    u, val = grid_then_golden(f_vec, f, math.log(s_lo), math.log(s_hi), GRID_1D)
    return math.exp(u), val


def a2_objective(s, t: float, nbar: float, E: float):
    nu = nbar + 0.5
    k = 2.0 * E + 1.0
    outer = (t * (k - s / 2.0) + nu) * nu
    inner = (t / (2.0 * s) + nu) * nu
    return _h_det(outer) - _h_det(inner)


def b1_objective(s, n: float, E: float):
    k = 2.0 * E + 1.0
    outer = (1.0 / (2.0 * s) + n) * (k - 1.0 / (2.0 * s))
    inner = 0.25 + n * s / 2.0
    return _h_det(outer) - _h_det(inner)


def bound_a2(cf: CanonicalForm, E: float) -> CapacityBound:
    _require(cf, ChannelClass.A2)
    E = check_energy(E)
    s, val = _max_over_s(lambda s: a2_objective(s, cf.t, cf.nbar, E), E)
    k = 2.0 * E + 1.0
    v_red = np.diag([1.0 / (2.0 * s), s / 2.0])
    m_red = np.diag([k - s / 2.0 - 1.0 / (2.0 * s), 0.0])
    return CapacityBound(max(val, 0.0), Regime.NUMERIC, _to_original(cf, v_red, m_red), s, cf.cls)


def bound_b1(cf: CanonicalForm, E: float) -> CapacityBound:
    _require(cf, ChannelClass.B1)
    E = check_energy(E)
    s, val = _max_over_s(lambda s: b1_objective(s, cf.n, E), E)
    k = 2.0 * E + 1.0
    v_red = np.diag([1.0 / (2.0 * s), s / 2.0])
    m_red = np.diag([0.0, k - s / 2.0 - 1.0 / (2.0 * s)])
    return CapacityBound(max(val, 0.0), Regime.NUMERIC, _to_original(cf, v_red, m_red), s, cf.cls)


def validity_margins(gain: float, noise: float, r: float, E: float) -> Tuple[float, float]:
    """
    Slack of the two inequalities delimiting the closed-form regime.

    Both must be >= 0 for the closed form to hold; they are the requirement
    that the optimal modulation has nonnegative diagonal entries.
    """
    skew = (noise / gain) * (r - 1.0 / r) / 2.0
    return (E + 0.5) + skew - 0.5 / r, (E + 0.5) - skew - 0.5 * r


def _gain_noise_analytic(gain: float, noise: float, r: float, E: float):
    value = entropy_h(gain * (E + 0.5) + noise * (r + 1.0 / r) / 2.0) - entropy_h(gain / 2.0 + noise)
    k = 2.0 * E + 1.0
    diff = noise * (r - 1.0 / r) / gain
    a1, a2 = (k + diff) / 2.0, (k - diff) / 2.0
    v_red = np.diag([0.5 / r, 0.5 * r])
    m_red = np.diag([a1 - 0.5 / r, a2 - 0.5 * r])
    return value, v_red, m_red


def _gain_noise_numeric(gain: float, noise: float, r: float, E: float):
    """
    Maximize over pure diagonal ``V = diag(1/(2s), s/2)`` and diagonal ``M``
    with the budget saturated; ``M = diag(x, 1 - x) * m_tot``.
    Search variables are ``u = ln s`` and ``x``.
    """
    k = 2.0 * E + 1.0
    s_lo, s_hi = s_interval(E)

    def chi(u, x):
        s = np.exp(u)
        m_tot = np.maximum(k - (s + 1.0 / s) / 2.0, 0.0)
        a1 = 0.5 / s + x * m_tot
        a2 = 0.5 * s + (1.0 - x) * m_tot
        outer = (gain * r * a1 + noise) * (gain * a2 / r + noise)
        inner = (gain * r * 0.5 / s + noise) * (gain * 0.5 * s / r + noise)
        return _h_det(outer) - _h_det(inner)

    u_lo, u_hi = math.log(s_lo), math.log(s_hi)
    ug = np.linspace(u_lo, u_hi, GRID_2D)
    xg = np.linspace(0.0, 1.0, GRID_2D)
    vals = chi(ug[:, None], xg[None, :])
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    (u, x), val = coordinate_ascent(
        lambda p: float(chi(p[0], p[1])),
        [ug[i], xg[j]],
        [u_lo, 0.0],
        [u_hi, 1.0],
        [ug[1] - ug[0], xg[1] - xg[0]],
        tol=1e-10,
        max_cycles=2000,
    )
    s = math.exp(u)
    m_tot = max(k - (s + 1.0 / s) / 2.0, 0.0)
    v_red = np.diag([0.5 / s, 0.5 * s])
    m_red = np.diag([x * m_tot, (1.0 - x) * m_tot])
    return val, v_red, m_red, s


def gain_noise_bound(
    gain: float, noise: float, r: float, E: float, numeric_force: bool = False
) -> Tuple[float, Regime, np.ndarray, np.ndarray, float]:
    """
    Reduced problem ``max S[g D(V+M)D + c I] - S[g D V D + c I]`` with
    ``D = diag(sqrt(r), 1/sqrt(r))``.

    Returns ``(value, regime, V_red, M_red, s_opt)``.  Near the edge of the
    closed-form region both routes are evaluated and the larger is kept.
    """
    E = check_energy(E)
    lo = min(validity_margins(gain, noise, r, E))
    if not numeric_force and lo > BOUNDARY_BAND:
        value, v_red, m_red = _gain_noise_analytic(gain, noise, r, E)
        return value, Regime.ANALYTIC, v_red, m_red, r
    value, v_red, m_red, s = _gain_noise_numeric(gain, noise, r, E)
    if not numeric_force and lo >= -BOUNDARY_BAND:
        a_val, a_v, a_m = _gain_noise_analytic(gain, noise, r, E)
        if a_val > value:
            value, v_red, m_red, s = a_val, a_v, a_m, r
    return value, Regime.NUMERIC, v_red, m_red, s


def c_evaluator(gain: float, coeff: float, nbar: float, r: float, E: float, numeric_force: bool = False):
    """Class-C style problem with noise ``coeff * (nbar + 1/2)``; shared by C and D."""
    return gain_noise_bound(gain, coeff * (nbar + 0.5), r, E, numeric_force)


def _wrap(cf: CanonicalForm, result) -> CapacityBound:
    value, regime, v_red, m_red, s = result
    return CapacityBound(max(value, 0.0), regime, _to_original(cf, v_red, m_red), s, cf.cls)


def bound_c(cf: CanonicalForm, E: float, numeric_force: bool = False) -> CapacityBound:
    _require(cf, *_C_CLASSES)
    return _wrap(cf, c_evaluator(cf.tau, abs(1.0 - cf.tau), cf.nbar, cf.r, E, numeric_force))


def bound_d(cf: CanonicalForm, E: float, numeric_force: bool = False) -> CapacityBound:
    _require(cf, ChannelClass.D)
    g = abs(cf.tau)
    return _wrap(cf, c_evaluator(g, 1.0 + g, cf.nbar, cf.r, E, numeric_force))


def bound_b2(cf: CanonicalForm, E: float, numeric_force: bool = False) -> CapacityBound:
    _require(cf, ChannelClass.B2)
    return _wrap(cf, gain_noise_bound(1.0, cf.nbar, cf.r, E, numeric_force))


def bound_canonical(cf: CanonicalForm, E: float, numeric_force: bool = False) -> CapacityBound:
    """Dispatch on the class of an already reduced channel."""
    E = check_energy(E)
    if cf.cls is ChannelClass.A1:
        return bound_a1(cf, E)
    if cf.cls is ChannelClass.A2:
        return bound_a2(cf, E)
    if cf.cls is ChannelClass.B1:
        return bound_b1(cf, E)
    if cf.cls is ChannelClass.B2:
        return bound_b2(cf, E, numeric_force)
    if cf.cls is ChannelClass.D:
        return bound_d(cf, E, numeric_force)
    return bound_c(cf, E, numeric_force)


def bound(ch: GaussianChannel, E: float, numeric_force: bool = False) -> CapacityBound:
    """Gaussian-encoding lower bound on the capacity of ``ch`` at photon budget ``E``."""
    E = check_energy(E)
    return bound_canonical(canonical_reduce(ch), E, numeric_force)


ASYMPTOTE_FORMULAS = {
    ChannelClass.A1: "0",
    ChannelClass.B1: "log2(e) + log2(E)",
    ChannelClass.B2: "log2(e) + log2(E) - h(nbar + 1/2)",
    ChannelClass.C_att: "log2(e) + log2(|tau| E) - h[|tau|/2 + |1 - tau| (nbar + 1/2)]",
    ChannelClass.C_amp: "log2(e) + log2(|tau| E) - h[|tau|/2 + |1 - tau| (nbar + 1/2)]",
    ChannelClass.D: "log2(e) + log2(|tau| E) - h[|tau|/2 + |1 - tau| (nbar + 1/2)]",
}


def asymptote(cf: CanonicalForm, E: float) -> float:
    """High-energy expansion of the bound, using ``h(x) ~ log2(e x)``."""
    E = check_energy(E)
    if cf.cls is ChannelClass.A2:
        raise UnsupportedClassError("no high-energy expression is available for class A2")
    if cf.cls is ChannelClass.A1:
        return 0.0
    if cf.cls is ChannelClass.B1:
        return LOG2E + math.log2(E)
    if cf.cls is ChannelClass.B2:
        return LOG2E + math.log2(E) - entropy_h(cf.nbar + 0.5)
    g = abs(cf.tau)
    return LOG2E + math.log2(g * E) - entropy_h(g / 2.0 + abs(1.0 - cf.tau) * (cf.nbar + 0.5))
