"""
接收机估计测试：LS、PS-ISAC 窗口分离与 CI-ISAC 重建
"""

from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from channel.rayleigh_channel import apply_channel, draw_channel
from estimator.ls_estimator import (
    EstimationResult,
    estimate_ci_isac,
    ls_estimate,
    periodic_cir_view,
    run_receiver,
    separate_ps_isac,
)
from harness.trial import simulate_trial
from numerics.random_streams import RngStream
from numerics.transforms import dft, idft
from utils.errors import ConfigurationError, DivisionHazardError, InvalidArgumentError
from waveform.ofdm_modulator import modulate_tx, phase_shift_term, remove_cp
from waveform.pilot_generator import PilotGrid, generate_pilots, stack_pilot_grids
from waveform.system_config import PowerMode, Scheme, SystemConfig


def mean_mse(cfg, trials, seed=77):
    errors = []
    for t in range(trials):
        record = simulate_trial(cfg, RngStream(seed, 0).child(t))
        errors.append(np.mean(np.abs(record.true_cfrs - record.estimate.per_tx_cfr) ** 2))
    return float(np.mean(errors))


class TestLsEstimate:
    """逐子载波 LS 除法"""

    def test_direct_division(self):
        assert_allclose(ls_estimate([2 + 0j], [1 + 1j]), [1 - 1j])

    def test_compacted_to_occupied_bins(self):
        y = np.arange(8) + 0j
        x = np.ones(8)
        assert_array_equal(ls_estimate(y, x, [1, 5]), [1, 5])

    def test_zero_pilot_on_occupied_bin(self):
        with pytest.raises(DivisionHazardError):
            ls_estimate(np.ones(4), [1, 0, 1, 1])

    def test_zero_pilot_outside_occupied_bins_is_fine(self):
        assert_array_equal(ls_estimate(np.ones(4), [1, 0, 1, 0], [0, 2]), [1, 1])

    def test_length_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            ls_estimate(np.ones(4), np.ones(5))

    @pytest.mark.parametrize("occupied", [[0, 4], [-1], [2, 7]])
    def test_occupied_index_out_of_range(self, occupied):
        with pytest.raises(InvalidArgumentError):
            ls_estimate(np.ones(4), np.ones(4), occupied)

    def test_batched_rows_are_independent(self, np_rng):
        y = np_rng.standard_normal((3, 8)) + 1j * np_rng.standard_normal((3, 8))
        x = np.exp(2j * np.pi * np_rng.uniform(size=(3, 8)))
        out = ls_estimate(y, x, [1, 3, 6])
        assert out.shape == (3, 3)
        for t in range(3):
            assert_allclose(out[t], ls_estimate(y[t], x[t], [1, 3, 6]), atol=1e-15)

    def test_batched_zero_pilot_reports_bin(self):
        x = np.ones((2, 4))
        x[1, 2] = 0
        with pytest.raises(DivisionHazardError, match=r"\[2\]"):
            ls_estimate(np.ones((2, 4)), x)

    def test_single_transmitter_effective_channel(self, rng):
        cfg = SystemConfig(n_fft=32, n_cp=8, num_tx=4, pilot_ratio=1, scheme=Scheme.PS_ISAC, num_taps=6)
        grid = generate_pilots(cfg, rng.child(0))
        for u in range(1, 5):
            ch = draw_channel(rng.child(u), cfg.num_taps, cfg.n_fft)
            y_f = dft(remove_cp(apply_channel(modulate_tx(cfg, grid, u), ch), cfg.n_cp, cfg.n_fft))
            h_eff = ch.cfr * phase_shift_term(u, cfg.n_cp, cfg.n_fft)
            assert np.max(np.abs(ls_estimate(y_f, grid.base_pilots) - h_eff)) < 1e-10


class TestSeparatePsIsac:
    """PS-ISAC 窗口分离"""

    def test_fig2_scenario_exact(self, fig2_cfg, rng):
        record = simulate_trial(fig2_cfg, rng)
        assert record.estimate.per_tx_cfr.shape == (4, 32)
        assert_allclose(record.estimate.per_tx_cfr, record.true_cfrs, atol=1e-9)

    def test_windows_hold_transmitter_cirs(self, fig2_cfg, rng):
        record = simulate_trial(fig2_cfg, rng)
        joint = record.estimate.joint_cir
        for u, ch in enumerate(record.channels):
            window = joint[u * 8:(u + 1) * 8]
            assert_allclose(window[:4], np.sqrt(32) * ch.taps, atol=1e-10)
            assert np.all(np.abs(window[4:]) < 1e-10)
            assert_allclose(record.estimate.per_tx_cir[u, :4], ch.taps, atol=1e-10)

    def test_dft_consistency_with_joint_cir(self, rng):
        cfg = SystemConfig(n_fft=64, n_cp=8, num_tx=4, pilot_ratio=1, scheme=Scheme.PS_ISAC, num_taps=7)
        h = rng.generator.standard_normal(64) + 1j * rng.generator.standard_normal(64)
        result = separate_ps_isac(h, cfg)
        for u in range(1, 5):
            restricted = np.zeros(64, dtype=complex)
            restricted[(u - 1) * 8:u * 8] = result.joint_cir[(u - 1) * 8:u * 8]
            shifted = dft(restricted) * np.conj(phase_shift_term(u, 8, 64))
            assert_allclose(result.per_tx_cfr[u - 1], shifted, atol=1e-12)

    def test_single_transmitter_is_windowed_denoising(self, rng):
        cfg = SystemConfig(n_fft=16, n_cp=4, num_tx=1, pilot_ratio=1, scheme=Scheme.PS_ISAC)
        h = rng.generator.standard_normal(16) + 0j
        cir = idft(h)
        cir[4:] = 0
        assert_allclose(separate_ps_isac(h, cfg).per_tx_cfr[0], dft(cir), atol=1e-12)

    def test_rejects_ci_config(self, ci_cfg):
        with pytest.raises(ConfigurationError):
            separate_ps_isac(np.ones(32), ci_cfg)

    def test_length_mismatch(self, fig2_cfg):
        with pytest.raises(InvalidArgumentError):
            separate_ps_isac(np.ones(16), fig2_cfg)

    def test_noise_mse_level(self):
        cfg = SystemConfig.for_pilot_ratio(Scheme.PS_ISAC, "1/4", noise_variance=0.1)
        assert mean_mse(cfg, 400) == pytest.approx(0.1 * 64 / 256, rel=0.05)


class TestEstimateCiIsac:
    """CI-ISAC 交织 LS 与 CIR 域插值"""

    def test_noiseless_exact_on_all_bins(self, ci_cfg, rng):
        record = simulate_trial(ci_cfg, rng)
        assert_allclose(record.estimate.per_tx_cfr, record.true_cfrs, atol=1e-9)
        assert record.estimate.joint_cir is None

    def test_recovered_cir_matches_taps(self, ci_cfg, rng):
        record = simulate_trial(ci_cfg, rng)
        for u, ch in enumerate(record.channels):
            cir = record.estimate.per_tx_cir[u]
            assert_allclose(cir[:ch.num_taps], ch.taps, atol=1e-10)
            assert np.all(np.abs(cir[ch.num_taps:]) < 1e-10)

    def test_overlapping_allocation_rejected(self, ci_cfg):
        bins = np.array([0, 4, 8, 12, 16, 20, 24, 28])
        pilots = np.zeros((4, 32), dtype=complex)
        pilots[:, bins] = 1
        grid = PilotGrid(per_tx_pilots=pilots, allocation=(bins, bins, bins + 1, bins + 2))
        with pytest.raises(ConfigurationError):
            estimate_ci_isac(np.ones(32), grid, ci_cfg)

    def test_rejects_ps_config(self, fig2_cfg, rng):
        grid = generate_pilots(fig2_cfg, rng)
        with pytest.raises(ConfigurationError):
            estimate_ci_isac(np.ones(32), grid, fig2_cfg)

    def test_constrained_noise_mse(self):
        cfg = SystemConfig.for_pilot_ratio(Scheme.CI_ISAC, "1/4", noise_variance=0.1)
        assert mean_mse(cfg, 400) == pytest.approx(0.1, rel=0.05)

    def test_unconstrained_noise_mse(self):
        cfg = SystemConfig.for_pilot_ratio(Scheme.CI_ISAC, "1/4", noise_variance=0.1,
                                           power_mode=PowerMode.UNCONSTRAINED)
        assert mean_mse(cfg, 400) == pytest.approx(0.1 / 4, rel=0.05)

    def test_periodic_view_repeats_cir(self, ci_cfg, rng):
        record = simulate_trial(ci_cfg, rng)
        y_f = dft(remove_cp(record.received, ci_cfg.n_cp, ci_cfg.n_fft))
        view = np.abs(periodic_cir_view(y_f, record.pilots, 2))
        period = ci_cfg.n_fft // ci_cfg.num_tx
        for r in range(1, ci_cfg.num_tx):
            assert_allclose(view[r * period:(r + 1) * period], view[:period], atol=1e-10)


class TestRunReceiver:
    """端到端接收机"""

    @pytest.mark.parametrize("scheme", [Scheme.PS_ISAC, Scheme.CI_ISAC])
    def test_zero_input_gives_zero_estimates(self, scheme, rng):
        cfg = SystemConfig.for_pilot_ratio(scheme, "1/4", n_fft=32)
        grid = generate_pilots(cfg, rng)
        result = run_receiver(np.zeros(cfg.n_fft + cfg.n_cp), grid, cfg)
        assert isinstance(result, EstimationResult)
        assert result.num_tx == 4
        assert_array_equal(result.per_tx_cfr, 0)

    def test_ps_isac_large_frame_exact(self):
        cfg = SystemConfig(n_fft=256, n_cp=64, num_tx=4, pilot_ratio=Fraction(1), scheme=Scheme.PS_ISAC,
                           num_taps=63)
        record = simulate_trial(cfg, RngStream(31))
        assert np.max(np.abs(record.estimate.per_tx_cfr - record.true_cfrs)) < 1e-9

    def test_wrong_input_length(self, fig2_cfg, rng):
        grid = generate_pilots(fig2_cfg, rng)
        with pytest.raises(InvalidArgumentError):
            run_receiver(np.zeros(39), grid, fig2_cfg)

    @pytest.mark.parametrize("scheme", [Scheme.PS_ISAC, Scheme.CI_ISAC])
    def test_batched_receiver_matches_single(self, scheme):
        cfg = SystemConfig.for_pilot_ratio(scheme, "1/4", n_fft=64, noise_variance=0.2)
        records = [simulate_trial(cfg, RngStream(88, t)) for t in range(4)]
        stacked = stack_pilot_grids([r.pilots for r in records])
        result = run_receiver(np.stack([r.received for r in records]), stacked, cfg)
        assert result.per_tx_cfr.shape == (4, 4, 64)
        assert result.num_tx == 4
        for t, record in enumerate(records):
            assert_allclose(result.per_tx_cfr[t], record.estimate.per_tx_cfr, atol=1e-12)
            assert_allclose(result.per_tx_cir[t], record.estimate.per_tx_cir, atol=1e-12)

    def test_ps_grid_without_base_pilots(self, fig2_cfg):
        grid = PilotGrid(per_tx_pilots=np.ones((4, 32), dtype=complex),
                         allocation=tuple(np.arange(32) for _ in range(4)))
        with pytest.raises(ConfigurationError):
            run_receiver(np.zeros(40), grid, fig2_cfg)
