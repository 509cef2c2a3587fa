#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: test_dynamics.py
Description: Tests for pointer_decoherence.dynamics
"""

import unittest

from unittest import mock

import numpy as np
import numpy.testing as npt

from pointer_decoherence.linalg import PureState, eig_hermitian, partial_trace, random_pure_state, single_space
from pointer_decoherence.measurement import pointer_model, random_model, to_dense, apply_measurement
from pointer_decoherence.infotheory import mutual_entropy, projective_search, INEQUALITY_SLACK
from pointer_decoherence.dynamics import (EnergyModel, RecurrenceScan, random_energy_model,
                                          commensurate_energy_model, evolve, revival_distance, recurrence_scan,
                                          recurrence_fraction, apply_two_qubit, identity_step,
                                          counterexample_search, replay_counterexample, CounterexampleInstance,
                                          CounterexampleNotFound, QUBITS, THREE_QUBITS)
from pointer_decoherence.utils import make_rng


EQUAL = np.full(2, 2 ** -0.5)


class TestEvolution(unittest.TestCase):
    """Test EnergyModel and evolve"""

    def setUp(self):
        self.rng = make_rng(31)
        self.base = random_model(3, 3, self.rng, p_mode='dirichlet')
        self.model = random_energy_model(self.base, self.rng)

    def test_bad_tables(self):
        with self.assertRaises(ValueError):
            EnergyModel(np.zeros((2, 3)), self.base)
        with self.assertRaises(ValueError):
            EnergyModel(np.full((3, 3), np.nan), self.base)
        with self.assertRaises(ValueError):
            commensurate_energy_model(self.base, np.full((3, 3), 0.5))

    def test_time_zero(self):
        npt.assert_array_equal(evolve(self.model, 0.0).model.theta, 0)
        with self.assertRaises(ValueError):
            evolve(self.model, -1.0)

    def test_spectrum_is_conserved(self):
        for t in (0.0, 1.3, 17.0):
            state = evolve(self.model, t)
            values, _ = eig_hermitian(to_dense(state))
            npt.assert_allclose(np.sort(values)[::-1][:3], np.sort(self.base.p)[::-1], atol=1e-12)
            self.assertAlmostEqual(mutual_entropy(state), mutual_entropy(evolve(self.model, 0.0)), places=12)

    def test_commensurate_return(self):
        model = commensurate_energy_model(self.base, self.rng.integers(0, 6, size=(3, 3)))
        self.assertLessEqual(revival_distance(model, [2 * np.pi])[0], 1e-9)
        self.assertLessEqual(recurrence_scan(model, [2 * np.pi], 'dense').min_distance, 1e-9)
        half = commensurate_energy_model(self.base, self.rng.integers(0, 6, size=(3, 3)), epsilon=2.0)
        self.assertLessEqual(revival_distance(half, [np.pi])[0], 1e-9)

    def test_global_shift(self):
        times = np.linspace(0, 50, 201)
        npt.assert_allclose(revival_distance(self.model.shifted(3.7), times), revival_distance(self.model, times),
                            atol=1e-10)

    def test_closed_matches_dense(self):
        times = np.linspace(0, 30, 31)
        closed = recurrence_scan(self.model, times, 'closed')
        dense = recurrence_scan(self.model, times, 'dense')
        npt.assert_allclose(closed.distances, dense.distances, atol=1e-9)
        self.assertEqual(closed.distances[0], 0)

    def test_closed_form_any_M(self):
        base = random_model(2, 5000, self.rng)
        model = random_energy_model(base, self.rng)
        distances = revival_distance(model, np.linspace(0, 10, 50), chunk_elements=2 ** 12)
        self.assertTrue(np.all((distances >= 0) & (distances <= 1)))
        with self.assertRaises(ValueError):
            recurrence_scan(model, [1.0], 'dense')

    def test_single_outcome(self):
        base = pointer_model([1.0], p=np.full(4, 0.25))
        model = random_energy_model(base, self.rng)
        npt.assert_array_equal(revival_distance(model, [1.0, 2.0]), 0)

    def test_bad_scans(self):
        with self.assertRaises(ValueError):
            recurrence_scan(self.model, [-1.0, 0.0])
        with self.assertRaises(ValueError):
            recurrence_scan(self.model, [1.0], 'fourier')


class TestRecurrenceScan(unittest.TestCase):

    def test_min_after(self):
        scan = RecurrenceScan([0, 1, 2, 3], [0.0, 0.5, 0.2, 0.4])
        self.assertEqual((scan.min_distance, scan.argmin_time), (0.0, 0.0))
        self.assertEqual(scan.min_after(1), (0.2, 2.0))
        with self.assertRaises(ValueError):
            scan.min_after(5)


class TestRecurrenceFraction(unittest.TestCase):
    """Few microstates come back within the horizon, many don't"""

    def test_fraction_falls_with_M(self):
        small, minima, times = recurrence_fraction(3, 10, seed=2012)
        large, _, _ = recurrence_fraction(6, 10, seed=2012)
        self.assertEqual(minima.shape, (10,))
        self.assertEqual(times.shape, (10,))
        self.assertGreaterEqual(small, 0.8)
        self.assertLess(large, small)

    def test_seeded(self):
        _, first, first_times = recurrence_fraction(2, 3, seed=5, horizon=200.0)
        _, second, second_times = recurrence_fraction(2, 3, seed=5, horizon=200.0)
        npt.assert_array_equal(first, second)
        npt.assert_array_equal(first_times, second_times)

    def test_minimum_times(self):
        _, minima, times = recurrence_fraction(3, 4, seed=11, horizon=300.0, dt=0.05, t_min=20.0)
        self.assertTrue(np.all((times >= 20.0) & (times < 300.0)))
        base = pointer_model(np.full(2, 2 ** -0.5), p=np.full(3, 1 / 3))
        for k, (m, t) in enumerate(zip(minima, times)):
            model = random_energy_model(base, make_rng(11, 3, k))
            self.assertAlmostEqual(revival_distance(model, [t])[0], m, places=12)
        with self.assertRaises(ValueError):
            recurrence_fraction(3, 4, seed=11, horizon=10.0, t_min=20.0)


class TestTwoQubitSteps(unittest.TestCase):

    def test_apply_two_qubit(self):
        rng = make_rng(3)
        psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        U = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))[0]
        npt.assert_allclose(apply_two_qubit(psi, (0, 1), U), np.kron(U, np.eye(2)) @ psi, atol=1e-12)
        npt.assert_allclose(apply_two_qubit(psi, (1, 2), U), np.kron(np.eye(2), U) @ psi, atol=1e-12)
        self.assertAlmostEqual(np.linalg.norm(apply_two_qubit(psi, (0, 2), U)), np.linalg.norm(psi))


class TestCounterexampleSearch(unittest.TestCase):
    """Test counterexample_search / replay_counterexample"""

    OPTIONS = dict(restarts=4, confirm_restarts=8, maxiter=100)

    def test_identity_steps(self):
        result = counterexample_search(7, trials=3, step_sampler=identity_step, **self.OPTIONS)
        self.assertIsInstance(result, CounterexampleNotFound)
        self.assertFalse(result.to_dict()['found'])

    def test_product_state_with_identity_steps(self):
        rng = make_rng(8)
        qubits = [random_pure_state(single_space(2, q), rng).amplitudes for q in QUBITS]
        psi = np.kron(np.kron(qubits[0], qubits[1]), qubits[2])
        result = counterexample_search(8, trials=2, initial_state=psi, step_sampler=identity_step, **self.OPTIONS)
        self.assertIsInstance(result, CounterexampleNotFound)
        self.assertIsNone(result.best)

        for k in range(4):
            pair, U = identity_step(rng)
            psi = apply_two_qubit(psi, pair, U)
            rho = partial_trace(PureState(THREE_QUBITS, psi), ('q0', 'q1'))
            self.assertLess(abs(mutual_entropy(rho, split=('q0', 'q1'))), 1e-9)
            I, _, _ = projective_search(rho, split=('q0', 'q1'), restarts=2, maxiter=100, seed=k)
            self.assertLess(abs(I), 1e-9)

    def test_inequality_violation_raises(self):
        with mock.patch('pointer_decoherence.dynamics.projective_search', return_value=(5.0, None, None)):
            with self.assertRaises(RuntimeError):
                counterexample_search(7, trials=1, margins=(-1.0, -1.0), step_sampler=identity_step,
                                      **self.OPTIONS)

    def test_bad_trials(self):
        with self.assertRaises(ValueError):
            counterexample_search(7, trials=0)

    def test_finds_and_replays(self):
        result = counterexample_search(20120501, trials=500, **self.OPTIONS)
        self.assertIsInstance(result, CounterexampleInstance)
        self.assertGreater(result.S1 - result.S2, 0.01)
        self.assertGreater(result.I2 - result.I1, 0.01)
        self.assertLessEqual(result.I1, result.S1 + INEQUALITY_SLACK)
        self.assertLessEqual(result.I2, result.S2 + INEQUALITY_SLACK)
        self.assertEqual(result.t2, result.t1 + 1)

        replayed = replay_counterexample(20120501, result.trial, **self.OPTIONS)
        self.assertEqual(replayed.to_dict(), result.to_dict())
        self.assertEqual(len(result.to_dict()['table']), result.t2 + 1)


class TestDeviceEvolution(unittest.TestCase):

    def test_dense_state_changes(self):
        base = pointer_model(EQUAL, p=np.full(2, 0.5))
        model = EnergyModel(np.array([[0.0, 0.0], [1.0, 1.0]]), base)
        rho0 = to_dense(apply_measurement(base))
        rho_t = to_dense(evolve(model, np.pi))
        self.assertAlmostEqual(np.abs(rho0.matrix - rho_t.matrix).max(), 0.5, places=12)
        self.assertAlmostEqual(revival_distance(model, [np.pi])[0], 1, places=12)


if __name__ == '__main__':
    unittest.main()
