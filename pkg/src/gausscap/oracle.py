"""
Brute-force reference for the Gaussian-encoding bound.

Works on the original, unreduced channel and searches the full encoding family

    V = R(theta) diag(1/(2s), s/2) R(theta)^T
    M = R(phi) diag(x, 1 - x) R(phi)^T * m_tot,   m_tot = 2E + 1 - (s + 1/s)/2

with a dense grid followed by cyclic golden-section refinement.  Nothing from
the canonical reduction is used, so agreement with :func:`gausscap.capacity.bound`
checks the reduction and the per-class optimizers together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gausscap._search import coordinate_ascent
from gausscap.capacity import CapacityBound, EncodingParams, Regime, check_energy
from gausscap.channel import GaussianChannel, _require_cp
from gausscap.gaussian_core import entropy_h


@dataclass(frozen=True)
class OracleConfig:
    grid_s: int = 64
    grid_theta: int = 32
    grid_phi: int = 32
    grid_split: int = 64
    refine_iters: int = 200
    freeze_rotations: bool = False
    purity_check: bool = True

    def __post_init__(self):
        for name in ("grid_s", "grid_theta", "grid_phi", "grid_split", "refine_iters"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be at least 2")


def _rotated_diag(d1, d2, angle):
    """Entries (xx, pp, xp) of R(angle) diag(d1, d2) R(angle)^T."""
    c, s = np.cos(angle), np.sin(angle)
    return d1 * c * c + d2 * s * s, d1 * s * s + d2 * c * c, (d1 - d2) * c * s


def _output_det(T, N, xx, pp, xp):
    y11 = T[0, 0] ** 2 * xx + 2 * T[0, 0] * T[0, 1] * xp + T[0, 1] ** 2 * pp + N[0, 0]
    y22 = T[1, 0] ** 2 * xx + 2 * T[1, 0] * T[1, 1] * xp + T[1, 1] ** 2 * pp + N[1, 1]
    y12 = (
        T[0, 0] * T[1, 0] * xx
        + (T[0, 0] * T[1, 1] + T[0, 1] * T[1, 0]) * xp
        + T[0, 1] * T[1, 1] * pp
        + N[0, 1]
    )
    return y11 * y22 - y12 * y12


def _entropy_of_det(d):
    return entropy_h(np.sqrt(np.maximum(d, 0.25)))


class _Objective:
    """Holevo information as a function of (ln s, theta, phi, x) for det V = purity/4."""

    def __init__(self, ch: GaussianChannel, E: float, purity: float = 1.0):
        self.T, self.N = ch.T, ch.N
        self.k = 2.0 * E + 1.0
        self.root = math.sqrt(purity)

    def s_range(self):
        # root * (s + 1/s) / 2 <= k
        q = self.k / self.root
        hi = q + math.sqrt(q * q - 1.0)
        return 1.0 / hi, hi

    def moments(self, u, theta, phi, x):
        s = np.exp(u)
        v1, v2 = self.root * 0.5 / s, self.root * 0.5 * s
        m_tot = np.maximum(self.k - (v1 + v2), 0.0)
        vxx, vpp, vxp = _rotated_diag(v1, v2, theta)
        mxx, mpp, mxp = _rotated_diag(x * m_tot, (1.0 - x) * m_tot, phi)
        return (vxx, vpp, vxp), (mxx, mpp, mxp)

    def __call__(self, u, theta, phi, x):
        (vxx, vpp, vxp), (mxx, mpp, mxp) = self.moments(u, theta, phi, x)
        outer = _output_det(self.T, self.N, vxx + mxx, vpp + mpp, vxp + mxp)
        inner = _output_det(self.T, self.N, vxx, vpp, vxp)
        return _entropy_of_det(outer) - _entropy_of_det(inner)

    def grid_search(self, cfg: OracleConfig, scale: int = 1):
        """Best grid node; ties go to the lexicographically smallest index."""
        lo, hi = self.s_range()
        ug = np.linspace(math.log(lo), math.log(hi), max(cfg.grid_s // scale, 2))
        n_th = 1 if cfg.freeze_rotations else max(cfg.grid_theta // scale, 2)
        n_ph = 1 if cfg.freeze_rotations else max(cfg.grid_phi // scale, 2)
        tg = np.linspace(0.0, math.pi, n_th, endpoint=False)
        pg = np.linspace(0.0, math.pi, n_ph, endpoint=False)
        xg = np.linspace(0.0, 1.0, max(cfg.grid_split // scale, 2))
        th, ph, xx = np.meshgrid(tg, pg, xg, indexing="ij")
        best, best_idx = -np.inf, None
        for i, u in enumerate(ug):
            vals = self(u, th, ph, xx)
            j = int(np.argmax(vals))
            if vals.flat[j] > best:
                best = float(vals.flat[j])
                best_idx = (i,) + np.unravel_index(j, vals.shape)
        i, a, b, c = best_idx
        point = np.array([ug[i], tg[a], pg[b], xg[c]])
        steps = np.array([
            ug[1] - ug[0],
            tg[1] - tg[0] if n_th > 1 else 0.0,
            pg[1] - pg[0] if n_ph > 1 else 0.0,
            xg[1] - xg[0],
        ])
        return point, best, (math.log(lo), math.log(hi)), steps


def oracle_bound(ch: GaussianChannel, E: float, cfg: OracleConfig = OracleConfig()) -> CapacityBound:
    """Maximize the Holevo information of ``ch`` by direct search over pure Gaussian encodings."""
    _require_cp(ch)
    E = check_energy(E)
    obj = _Objective(ch, E)
    point, _, (u_lo, u_hi), steps = obj.grid_search(cfg)

    if cfg.freeze_rotations:
        f = lambda p: float(obj(p[0], 0.0, 0.0, p[1]))
        sub, val = coordinate_ascent(
            f, point[[0, 3]], [u_lo, 0.0], [u_hi, 1.0], steps[[0, 3]], max_cycles=cfg.refine_iters
        )
        point = np.array([sub[0], 0.0, 0.0, sub[1]])
    else:
        f = lambda p: float(obj(*p))
        point, val = coordinate_ascent(
            f,
            point,
            [u_lo, 0.0, 0.0, 0.0],
            [u_hi, math.pi, math.pi, 1.0],
            steps,
            periodic=[False, True, True, False],
            max_cycles=cfg.refine_iters,
        )

    (vxx, vpp, vxp), (mxx, mpp, mxp) = obj.moments(*point)
    witness = EncodingParams(
        np.array([[vxx, vxp], [vxp, vpp]], dtype=float),
        np.array([[mxx, mxp], [mxp, mpp]], dtype=float),
    )
    diagnostics = {"point": point}
    if cfg.purity_check:
        impure = {}
        for purity in (2.0, 4.0):
            mixed = _Objective(ch, E, purity)
            if mixed.s_range()[1] <= 1.0:
                continue
            impure[purity] = mixed.grid_search(cfg, scale=4)[1]
        diagnostics["impure_best"] = impure
        diagnostics["impure_wins"] = any(v > val + 1e-9 for v in impure.values())
    return CapacityBound(max(val, 0.0), Regime.NUMERIC, witness, math.exp(point[0]), None, diagnostics)
