import numpy as np
import pytest

from generators import ALL_CLASSES, random_channel
from gausscap.capacity import Regime, bound, holevo_gaussian
from gausscap.channel import GaussianChannel, canonical_channel
from gausscap.errors import InfeasibleBudgetError, InvalidChannelError
from gausscap.gaussian_core import entropy_h
from gausscap.oracle import OracleConfig, oracle_bound


class TestExamples:
    def test_identity(self):
        o = oracle_bound(GaussianChannel.identity(), 1.5)
        assert o.regime is Regime.NUMERIC
        assert o.value == pytest.approx(2.4273764861366716, abs=1e-6)

    def test_erasure(self):
        ch = GaussianChannel(np.zeros((2, 2)), 2.5 * np.eye(2))
        assert oracle_bound(ch, 3.0).value == pytest.approx(0.0, abs=1e-12)

    def test_pure_loss(self):
        o = oracle_bound(canonical_channel("C_att", tau=0.5, nbar=0.0), 1.5)
        assert o.value == pytest.approx(entropy_h(1.25), abs=1e-6)

    def test_witness_reproduces_value(self, rng):
        ch = random_channel("C_amp", rng)
        o = oracle_bound(ch, 2.0)
        assert o.witness.is_feasible(2.0)
        assert holevo_gaussian(ch, o.witness) == pytest.approx(o.value, abs=1e-12)


class TestAgreement:
    @pytest.mark.parametrize("cls", ALL_CLASSES)
    def test_matches_bound(self, cls, rng):
        for E in (0.6, 3.0):
            ch = random_channel(cls, rng)
            b, o = bound(ch, E), oracle_bound(ch, E)
            # the oracle searches a superset parameterization, so it never loses by more than its search error
            assert o.value <= b.value + 1e-6
            assert abs(b.value - o.value) <= 1e-4

    def test_numeric_regime(self):
        ch = canonical_channel("B2", nbar=1.0, r=8.0)
        b = bound(ch, 0.55)
        assert b.regime is Regime.NUMERIC
        assert oracle_bound(ch, 0.55).value == pytest.approx(b.value, abs=1e-6)


class TestRotationRedundancy:
    @pytest.mark.parametrize(
        "cls, kw",
        [("C_att", dict(tau=0.3, nbar=0.7)), ("C_amp", dict(tau=2.5, nbar=0.2)), ("B2", dict(nbar=1.0)), ("D", dict(tau=-0.5))],
    )
    def test_frozen_angles_lose_nothing(self, cls, kw):
        ch = canonical_channel(cls, **kw)
        full = oracle_bound(ch, 1.5)
        frozen = oracle_bound(ch, 1.5, OracleConfig(freeze_rotations=True))
        assert abs(full.value - frozen.value) <= 1e-6


class TestPurity:
    @pytest.mark.parametrize("cls", ["B2", "C_att", "C_amp", "D", "A2", "B1"])
    def test_mixed_signal_never_wins(self, cls, rng):
        o = oracle_bound(random_channel(cls, rng), 2.0)
        assert o.diagnostics["impure_best"]
        assert not o.diagnostics["impure_wins"]

    def test_skipped_when_budget_too_small(self):
        # a signal with det V = 1 uses the whole E = 1/2 budget and leaves no room to modulate
        o = oracle_bound(GaussianChannel.identity(), 0.5)
        assert 4.0 not in o.diagnostics["impure_best"]
        assert 2.0 in o.diagnostics["impure_best"]


class TestConfig:
    def test_deterministic(self, rng):
        ch = random_channel("D", rng)
        a, b = oracle_bound(ch, 1.0), oracle_bound(ch, 1.0)
        assert a.value == b.value
        assert np.array_equal(a.diagnostics["point"], b.diagnostics["point"])

    @pytest.mark.parametrize("field", ["grid_s", "grid_theta", "grid_phi", "grid_split", "refine_iters"])
    def test_rejects_tiny_grids(self, field):
        with pytest.raises(ValueError):
            OracleConfig(**{field: 1})

    def test_coarse_grid_still_close(self):
        cfg = OracleConfig(grid_s=8, grid_theta=4, grid_phi=4, grid_split=8, purity_check=False)
        assert oracle_bound(GaussianChannel.identity(), 1.5, cfg).value == pytest.approx(entropy_h(2.0), abs=1e-6)

    def test_input_validation(self):
        with pytest.raises(InfeasibleBudgetError):
            oracle_bound(GaussianChannel.identity(), 0.1)
        with pytest.raises(InvalidChannelError):
            oracle_bound(GaussianChannel(np.sqrt(0.5) * np.eye(2), np.zeros((2, 2))), 1.0)
