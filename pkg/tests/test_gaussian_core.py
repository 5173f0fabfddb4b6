import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_physical_cm, random_symplectic
from gausscap.errors import DegenerateError, DomainError, InvalidSymplecticError, ZeroMatrixError
from gausscap.gaussian_core import (
    entropy_h,
    euler_decompose,
    rank_one_reduce,
    rotation,
    squeeze,
    state_entropy,
    williamson_1mode,
)


def h_mp(x, dps=50):
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        half = mpmath.mpf(1) / 2
        return (x + half) * mpmath.log(x + half, 2) - (x - half) * mpmath.log(x - half, 2)


class TestEntropyH:
    def test_pure_state(self):
        assert entropy_h(0.5) == 0.0

    def test_three_halves(self):
        assert entropy_h(1.5) == pytest.approx(2.0, abs=1e-15)

    def test_two_against_high_precision(self):
        assert abs(entropy_h(2.0) - float(h_mp(2))) <= 1e-12
        assert entropy_h(2.0) == pytest.approx(2.4273764861366716, abs=1e-15)

    @pytest.mark.parametrize("x", [0.5 + 1e-13, 0.5 + 1e-6, 0.75, 3.0, 1e3, 2.0**20 + 0.5, 1e9])
    def test_matches_defining_formula(self, x):
        ref = float(h_mp(x))
        assert abs(entropy_h(x) - ref) <= 1e-12 * max(1.0, ref)

    def test_array_input(self):
        xs = np.array([0.5, 1.5, 2.0])
        out = entropy_h(xs)
        assert out.shape == (3,)
        assert out[1] == pytest.approx(2.0)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            entropy_h(0.49)
        with pytest.raises(DomainError):
            entropy_h(np.array([1.0, 0.2]))

    @given(st.floats(0.5, 1e6), st.floats(1e-6, 1e3))
    def test_strictly_increasing(self, x, dx):
        assert entropy_h(x) < entropy_h(x + dx)


class TestStateEntropy:
    def test_vacuum(self):
        assert state_entropy(0.5 * np.eye(2)) == 0.0

    @pytest.mark.parametrize("s", [0.1, 1.0, 7.3])
    def test_squeezed_vacuum_is_pure(self, s):
        assert state_entropy(np.diag([0.5 / s, 0.5 * s])) == pytest.approx(0.0, abs=1e-12)

    def test_thermal(self):
        assert state_entropy(1.5 * np.eye(2)) == pytest.approx(2.0)

    def test_unphysical(self):
        with pytest.raises(DomainError):
            state_entropy(0.4 * np.eye(2))

    def test_symplectic_invariance(self, rng):
        drift = 0.0
        for _ in range(1000):
            v = random_physical_cm(rng)
            s = random_symplectic(rng)
            drift = max(drift, abs(state_entropy(s @ v @ s.T) - state_entropy(v)))
        assert drift <= 1e-10


class TestEuler:
    def test_identity(self):
        r_mat, r, rp = euler_decompose(np.eye(2))
        assert r == 1.0
        assert np.allclose(r_mat, np.eye(2)) and np.allclose(rp, np.eye(2))

    def test_diagonal(self):
        _, r, _ = euler_decompose(np.diag([2.0, 0.5]))
        assert r == pytest.approx(4.0)

    def test_squeeze_below_one_is_flipped(self):
        _, r, _ = euler_decompose(np.diag([0.5, 2.0]))
        assert r == pytest.approx(4.0)

    def test_round_trip_example(self):
        s = rotation(0.3) @ np.diag([1.7, 1 / 1.7]) @ rotation(-1.1)
        r_mat, r, rp = euler_decompose(s)
        assert r == pytest.approx(1.7**2)
        assert np.max(np.abs(r_mat @ squeeze(r) @ rp - s)) <= 1e-12

    def test_round_trip_random(self, rng):
        worst = 0.0
        for _ in range(1000):
            s = random_symplectic(rng, max_r=6.0)
            r_mat, r, rp = euler_decompose(s)
            assert r >= 1.0
            assert np.linalg.det(r_mat) == pytest.approx(1.0)
            assert np.linalg.det(rp) == pytest.approx(1.0)
            assert np.allclose(r_mat.T @ r_mat, np.eye(2), atol=1e-12)
            worst = max(worst, np.max(np.abs(r_mat @ squeeze(r) @ rp - s)))
        assert worst <= 1e-10

    def test_rejects_non_symplectic(self):
        with pytest.raises(InvalidSymplecticError):
            euler_decompose(2 * np.eye(2))


class TestWilliamson:
    def test_isotropic(self):
        s, nu = williamson_1mode(3 * np.eye(2))
        assert nu == pytest.approx(3.0)
        assert np.allclose(s, np.eye(2))

    def test_diagonal(self):
        s, nu = williamson_1mode(np.diag([2.0, 0.5]))
        assert nu == pytest.approx(1.0)
        assert np.allclose(s, np.diag([np.sqrt(2), 1 / np.sqrt(2)]))

    def test_rotated(self):
        n = rotation(0.7) @ np.diag([2.0, 0.5]) @ rotation(0.7).T
        s, nu = williamson_1mode(n)
        assert nu == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(nu * s @ s.T - n)) <= 1e-12

    def test_round_trip_random(self, rng):
        for _ in range(1000):
            n = random_physical_cm(rng) * rng.uniform(0.01, 10)
            s, nu = williamson_1mode(n)
            assert np.linalg.det(s) == pytest.approx(1.0, abs=1e-12)
            assert abs(nu - np.sqrt(np.linalg.det(n))) <= 1e-12 * max(1.0, nu)
            assert np.max(np.abs(nu * s @ s.T - n)) <= 1e-10

    def test_degenerate(self):
        with pytest.raises(DegenerateError):
            williamson_1mode(np.diag([1.0, 0.0]))


class TestRankOne:
    def test_already_canonical(self):
        s, lam = rank_one_reduce(np.diag([1.0, 0.0]))
        assert lam == pytest.approx(1.0)
        assert np.allclose(s, np.eye(2))

    def test_scaling(self):
        s, lam = rank_one_reduce(np.diag([4.0, 0.0]))
        assert lam == pytest.approx(4.0)
        assert np.allclose(s, np.diag([0.5, 2.0]))

    def test_diagonal_direction(self):
        u = np.array([1.0, 1.0])
        s, lam = rank_one_reduce(np.outer(u, u))
        assert lam == pytest.approx(2.0)
        assert np.linalg.det(s) == pytest.approx(1.0)
        assert np.max(np.abs(s @ np.outer(u, u) @ s.T - np.diag([1.0, 0.0]))) <= 1e-12

    def test_errors(self):
        with pytest.raises(ZeroMatrixError):
            rank_one_reduce(np.zeros((2, 2)))
        with pytest.raises(DegenerateError):
            rank_one_reduce(np.eye(2))


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 2 * np.pi), st.floats(1.0, 50.0), st.floats(0.0, 2 * np.pi))
def test_euler_recovers_built_squeeze(a, r, b):
    s = rotation(a) @ squeeze(r) @ rotation(b)
    _, r_out, _ = euler_decompose(s)
    assert r_out == pytest.approx(r, rel=1e-10)
