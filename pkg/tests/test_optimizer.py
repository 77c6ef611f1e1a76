import itertools
import logging
import math
import unittest

import numpy as np
import pytest

from src.beamformer import (
    OptimizerConfig,
    effective_scalar,
    initial_state,
    no_ris_baseline,
    no_ris_beamformer,
    optimize,
    optimize_best,
    reflective_variant,
)
from src.channel import ChannelSet, assemble_channels
from src.errors import InvalidForMultiLayer, ZeroEffectiveChannel
from src.scenario import ScenarioConfig, Variant, build_scenario, db
from tests.helpers import WAVELENGTH, crandn, random_channels, random_state


class TestOptimizer(unittest.TestCase):
    """
    Test cases for the alternating optimizer.
    """

    def setUp(self):
        logging.basicConfig(level=logging.INFO)
        self.rng = np.random.default_rng(7)
        self.kappa = 0.8
        self.noise = 1e-6
        self.p_max = 2.0

    def test_initial_state(self):
        """
        Random unit phases, all-ones combiner and a full-power transmit vector.
        """
        ch = random_channels(self.rng, 2, 5, 3, 4)
        state = initial_state(ch, self.p_max, np.random.default_rng(0))
        state.check_unit_phases()
        np.testing.assert_array_equal(state.v, np.ones(4))
        self.assertAlmostEqual(state.transmit_power, self.p_max, places=12)

    def test_monotone_and_feasible(self):
        """
        Every sweep keeps the constraints and never lowers the SNR.
        """
        ch = random_channels(self.rng, 3, 6, 2, 3)
        seen = []

        def check(iteration, state, value):
            state.check_unit_phases()
            self.assertAlmostEqual(state.transmit_power / self.p_max, 1.0, places=12)
            self.assertAlmostEqual(np.linalg.norm(state.v), 1.0, places=12)
            seen.append(iteration)

        _, trace = optimize(ch, self.kappa, self.noise, self.p_max,
                            OptimizerConfig(max_iters=50), on_iteration=check)
        self.assertTrue(trace.is_monotone())
        self.assertGreaterEqual(trace.final_snr, trace.initial_snr)
        self.assertEqual(seen, list(range(1, trace.iterations + 1)))

    @pytest.mark.slow
    def test_monotone_and_feasible_over_seeds(self):
        """
        A hundred seeded runs keep every constraint after every sweep and never lose SNR.
        """
        def check(iteration, state, value):
            state.check_unit_phases()
            self.assertAlmostEqual(state.transmit_power / self.p_max, 1.0, places=12)
            self.assertAlmostEqual(np.linalg.norm(state.v), 1.0, places=12)

        for seed in range(100):
            ch = random_channels(np.random.default_rng(seed), 2, 6, 2, 3)
            _, trace = optimize(ch, self.kappa, self.noise, self.p_max,
                                OptimizerConfig(seed=seed), on_iteration=check)
            self.assertTrue(trace.is_monotone(), f"seed {seed}")
            self.assertGreaterEqual(trace.final_snr, trace.initial_snr)

    def test_snr_linear_in_power(self):
        """
        Ten times the power budget gives exactly ten times the final SNR.
        """
        ch = random_channels(self.rng, 2, 6, 2, 3)
        _, base = optimize(ch, self.kappa, self.noise, self.p_max, seed=21)
        _, boosted = optimize(ch, self.kappa, self.noise, 10 * self.p_max, seed=21)
        self.assertEqual(base.iterations, boosted.iterations)
        self.assertLess(abs(boosted.final_snr / (10 * base.final_snr) - 1.0), 1e-12)

    def test_stops_at_cap(self):
        """
        Hitting the iteration cap is reported, not raised.
        """
        ch = random_channels(self.rng, 2, 6, 2, 3)
        _, trace = optimize(ch, self.kappa, self.noise, self.p_max,
                            OptimizerConfig(tolerance=1e-300, max_iters=3))
        self.assertEqual(trace.iterations, 3)
        self.assertFalse(trace.converged)

    def test_single_element_converges_immediately(self):
        """
        With one element, one user and one BS antenna the first sweep is optimal.
        """
        ch = ChannelSet((np.array([[0.5j]]),), np.array([[0.3]]), WAVELENGTH)
        _, trace = optimize(ch, self.kappa, self.noise, self.p_max)
        expected = self.p_max * (self.kappa * 0.5 * 0.3) ** 2 / self.noise
        self.assertAlmostEqual(trace.final_snr / expected, 1.0, places=10)
        self.assertTrue(trace.converged)
        self.assertLessEqual(trace.iterations, 2)

    def test_seeded_runs_repeat(self):
        """
        The same seed reproduces the same state.
        """
        ch = random_channels(self.rng, 2, 4, 2, 2)
        a, _ = optimize(ch, self.kappa, self.noise, self.p_max, seed=3)
        b, _ = optimize(ch, self.kappa, self.noise, self.p_max, seed=3)
        np.testing.assert_array_equal(a.w, b.w)
        for ta, tb in zip(a.theta, b.theta):
            np.testing.assert_array_equal(ta, tb)

    def test_linear_in_transmit_vector(self):
        """
        The effective scalar is linear in w.
        """
        ch = random_channels(self.rng, 2, 5, 3, 2)
        state = random_state(self.rng, ch)
        w1, w2 = crandn(self.rng, 3), crandn(self.rng, 3)
        alpha, beta = 0.3 - 1.2j, -2.0 + 0.5j
        combined = effective_scalar(state.with_w(alpha * w1 + beta * w2), ch, self.kappa)
        separate = (alpha * effective_scalar(state.with_w(w1), ch, self.kappa)
                    + beta * effective_scalar(state.with_w(w2), ch, self.kappa))
        self.assertLess(abs(combined - separate), 1e-10 * max(abs(separate), 1.0))

    def test_noise_only_scales_snr(self):
        """
        Quadrupling the noise leaves the optimized state untouched.
        """
        ch = random_channels(self.rng, 2, 5, 2, 3)
        a, trace_a = optimize(ch, self.kappa, self.noise, self.p_max, seed=1)
        b, trace_b = optimize(ch, self.kappa, 4 * self.noise, self.p_max, seed=1)
        np.testing.assert_array_equal(a.w, b.w)
        np.testing.assert_array_equal(a.v, b.v)
        for ta, tb in zip(a.theta, b.theta):
            np.testing.assert_array_equal(ta, tb)
        self.assertEqual(trace_a.iterations, trace_b.iterations)
        self.assertAlmostEqual(trace_a.final_snr / trace_b.final_snr, 4.0, places=12)

    def test_common_phase_is_irrelevant(self):
        """
        Rotating the BS channel by a common phase leaves the optimum unchanged.
        """
        ch = random_channels(self.rng, 2, 5, 2, 3)
        rotated = ChannelSet(ch.f, ch.g * np.exp(1j * 0.7), ch.wavelength)
        _, a = optimize(ch, self.kappa, self.noise, self.p_max, seed=4)
        _, b = optimize(rotated, self.kappa, self.noise, self.p_max, seed=4)
        self.assertAlmostEqual(a.final_snr / b.final_snr, 1.0, places=8)

    def test_kappa_gap(self):
        """
        Removing the amplitude loss of a single layer gains exactly 1/kappa^2.
        """
        ch = random_channels(self.rng, 1, 16, 1, 4)
        _, lossy = optimize(ch, self.kappa, self.noise, self.p_max, seed=9)
        _, lossless = optimize(ch, 1.0, self.noise, self.p_max, seed=9)
        gap_db = 10 * math.log10(lossless.final_snr / lossy.final_snr)
        self.assertAlmostEqual(gap_db, 1.9382, places=4)

    def test_best_of_restarts(self):
        """
        The best restart beats the first one and ignores the worker count.
        """
        ch = random_channels(self.rng, 2, 4, 2, 2)
        _, serial = optimize_best(ch, self.kappa, self.noise, self.p_max,
                                  OptimizerConfig(seed=5, restarts=6))
        _, threaded = optimize_best(ch, self.kappa, self.noise, self.p_max,
                                    OptimizerConfig(seed=5, restarts=6, workers=3))
        self.assertEqual(serial.restart, threaded.restart)
        self.assertEqual(serial.final_snr, threaded.final_snr)
        _, first = optimize(ch, self.kappa, self.noise, self.p_max,
                            seed=np.random.SeedSequence(5).spawn(6)[0])
        self.assertGreaterEqual(serial.final_snr, first.final_snr)

    def test_invalid_config(self):
        """
        Non-positive tolerance or zero restarts are rejected.
        """
        with self.assertRaises(ValueError):
            OptimizerConfig(tolerance=0.0)
        with self.assertRaises(ValueError):
            OptimizerConfig(restarts=0)

    @pytest.mark.slow
    def test_matches_phase_grid_search(self):
        """
        Restarted optimization matches an exhaustive 16-level phase search on tiny systems.
        """
        levels = np.exp(2j * np.pi * np.arange(16) / 16)
        grid = np.array(list(itertools.product(levels, repeat=2)))
        for _ in range(20):
            ch = random_channels(self.rng, layers=2, n=2, k=1, m=1)
            x1 = self.kappa * grid * ch.f[0][:, 0]
            u2 = x1 @ ch.f[1].T
            eff = u2 @ (self.kappa * grid * ch.g[:, 0].conj()).T
            grid_best = self.p_max * np.max(np.abs(eff)) ** 2 / self.noise
            _, trace = optimize_best(ch, self.kappa, self.noise, self.p_max,
                                     OptimizerConfig(restarts=16, seed=1))
            self.assertGreaterEqual(db(trace.final_snr), db(grid_best) - 0.2)

    @pytest.mark.slow
    def test_full_multi_layer_scenario(self):
        """
        The default two-layer scenario converges monotonically.
        """
        scenario = build_scenario(ScenarioConfig(), Variant.MULTI_LAYER)
        ch = assemble_channels(scenario)
        state, trace = optimize(ch, scenario.kappa, scenario.noise_power, scenario.p_max,
                                OptimizerConfig(seed=2024))
        self.assertTrue(trace.converged)
        self.assertTrue(trace.is_monotone())
        state.check_unit_phases()


class TestBaselines(unittest.TestCase):
    """
    Test cases for the direct-link and reflective references.
    """

    def setUp(self):
        self.rng = np.random.default_rng(13)

    def test_scalar_link(self):
        """
        A 1x1 link reaches p |h|^2 / sigma^2.
        """
        w, v, value = no_ris_beamformer(np.array([[0.5 - 0.5j]]), 1e-6, 2.0)
        self.assertAlmostEqual(value / (2.0 * 0.5 / 1e-6), 1.0, places=12)
        self.assertAlmostEqual(abs(w[0]) ** 2, 2.0, places=12)
        self.assertAlmostEqual(abs(v[0]), 1.0, places=12)

    def test_rank_one(self):
        """
        A rank-one channel a b^T has sigma_max = ||a|| ||b||.
        """
        a, b = crandn(self.rng, 4), crandn(self.rng, 3)
        value = no_ris_baseline(np.outer(a, b), 1.0, 1.0)
        expected = np.linalg.norm(a) ** 2 * np.linalg.norm(b) ** 2
        self.assertAlmostEqual(value / expected, 1.0, places=10)

    def test_matches_svd(self):
        """
        Power iteration agrees with the largest singular value.
        """
        for _ in range(10):
            h = crandn(self.rng, 6, 3)
            sigma = np.linalg.svd(h, compute_uv=False)[0]
            self.assertAlmostEqual(no_ris_baseline(h, 1e-6, 1.0) / (sigma ** 2 / 1e-6), 1.0, places=8)

    def test_zero_channel(self):
        """
        An all-zero channel cannot be beamformed.
        """
        with self.assertRaises(ZeroEffectiveChannel):
            no_ris_baseline(np.zeros((3, 2)), 1e-6, 1.0)

    def test_reflective_needs_single_layer(self):
        """
        Only single-layer scenarios have a reflective counterpart.
        """
        cfg = ScenarioConfig()
        with self.assertRaises(InvalidForMultiLayer):
            reflective_variant(build_scenario(cfg, Variant.MULTI_LAYER))
        reflective = reflective_variant(build_scenario(cfg, Variant.SINGLE_LAYER_US))
        self.assertEqual(reflective.kappa, 1.0)
        self.assertTrue(reflective.reflective)


if __name__ == '__main__':
    unittest.main()
