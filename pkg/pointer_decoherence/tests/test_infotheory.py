#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
File: test_infotheory.py
Description: Tests for pointer_decoherence.infotheory
"""

import unittest

import numpy as np
import numpy.testing as npt

from pointer_decoherence.linalg import (HilbertSpace, PureState, DensityOperator, single_space, tensor,
                                        partial_trace, permute_subsystems, random_density_operator,
                                        random_pure_state, random_unitary, basis_state)
from pointer_decoherence.measurement import (pointer_model, random_model, premeasurement_mixed, premeasurement_pure,
                                             apply_measurement, reduce, to_dense)
from pointer_decoherence.infotheory import (Povm, CorrelationReport, mutual_entropy, joint_distribution,
                                            classical_mutual_information, pointer_information, pointer_povm,
                                            table_information, accessible_mutual_information, verify_inequality,
                                            macroscopicity_gap, finite_difference_gradient, search_objective,
                                            is_product_state)
from pointer_decoherence.utils import make_rng


TWO_QUBITS = HilbertSpace((2, 2), ('A', 'C'))
UNEQUAL = np.sqrt([0.3, 0.7])
H_UNEQUAL = 0.881291

SEARCH = dict(restarts=4, maxiter=200, max_evaluations=4000)


def schmidt_state(weights):
    amplitudes = np.zeros(4)
    amplitudes[0], amplitudes[3] = np.sqrt(weights)
    return PureState(TWO_QUBITS, amplitudes)


class TestMutualEntropy(unittest.TestCase):
    """Test mutual_entropy on dense and structured states"""

    def test_bell_state(self):
        self.assertAlmostEqual(mutual_entropy(schmidt_state([0.5, 0.5])), 2, places=10)

    def test_product_state(self):
        rng = make_rng(1)
        rho = tensor(random_density_operator(single_space(2, 'A'), rng),
                     random_density_operator(single_space(3, 'C'), rng))
        self.assertAlmostEqual(mutual_entropy(rho), 0, places=9)
        self.assertTrue(is_product_state(rho))
        self.assertFalse(is_product_state(schmidt_state([0.5, 0.5])))

    def test_zero_before_measurement(self):
        model = random_model(3, 5, make_rng(2), p_mode='dirichlet')
        initial = premeasurement_mixed(model)
        self.assertAlmostEqual(mutual_entropy(initial), 0, places=12)
        self.assertAlmostEqual(pointer_information(initial), 0, places=12)
        self.assertAlmostEqual(mutual_entropy(premeasurement_pure(UNEQUAL)), 0, places=10)

    def test_pointer_model_values(self):
        model = pointer_model(UNEQUAL, p=np.full(4, 0.25), theta=make_rng(3).uniform(0, 6, (2, 4)))
        exact = apply_measurement(model)
        reduced = reduce(exact)
        self.assertAlmostEqual(mutual_entropy(exact), 2 * H_UNEQUAL, places=6)
        self.assertAlmostEqual(mutual_entropy(reduced), H_UNEQUAL, places=6)
        self.assertAlmostEqual(pointer_information(exact), H_UNEQUAL, places=6)
        self.assertAlmostEqual(pointer_information(reduced), H_UNEQUAL, places=6)
        self.assertAlmostEqual(mutual_entropy(to_dense(exact)), 2 * H_UNEQUAL, places=6)

    def test_base(self):
        rho = schmidt_state([0.3, 0.7])
        self.assertAlmostEqual(mutual_entropy(rho, base=np.e), mutual_entropy(rho) * np.log(2), places=10)

    def test_permutation_invariance(self):
        rho = random_density_operator(HilbertSpace((2, 3), ('A', 'C')), make_rng(4))
        swapped = permute_subsystems(rho, ('C', 'A'))
        self.assertAlmostEqual(mutual_entropy(swapped, split=(('A',), ('C',))), mutual_entropy(rho), places=10)

    def test_monotone_under_discarding(self):
        rng = make_rng(5)
        space = HilbertSpace((2, 2, 2), ('A', 'B', 'C'))
        for _ in range(10):
            rho = random_density_operator(space, rng)
            whole = mutual_entropy(rho, split=(('A',), ('B', 'C')))
            part = mutual_entropy(partial_trace(rho, ['A', 'B']))
            self.assertGreaterEqual(whole, part - 1e-10)

    def test_bad_split(self):
        rho = random_density_operator(HilbertSpace((2, 2, 2), ('A', 'B', 'C')), make_rng(6))
        with self.assertRaises(ValueError):
            mutual_entropy(rho, split=(('A',), ('B',)))
        with self.assertRaises(ValueError):
            mutual_entropy(rho, split=(('A', 'B'), ('B', 'C')))


class TestPovms(unittest.TestCase):
    """Test Povm and the outcome tables"""

    def test_validation(self):
        with self.assertRaises(ValueError):
            Povm(effects=[np.diag([1.0, 0.0]), np.diag([0.0, 0.5])])
        with self.assertRaises(ValueError):
            Povm.from_basis(np.array([[1, 1], [0, 1]]))
        with self.assertRaises(ValueError):
            Povm(effects=[np.diag([1.0, 0.0])], labels=['a', 'b'])

    def test_effects_from_vectors(self):
        plus = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        povm = Povm.from_basis(plus)
        npt.assert_allclose(povm.effects.sum(axis=0), np.eye(2), atol=1e-12)
        npt.assert_allclose(povm.effects[0], 0.5 * np.ones((2, 2)), atol=1e-12)

    def test_permuted(self):
        povm = Povm.computational(3, labels=['a', 'b', 'c']).permuted([2, 0, 1])
        self.assertEqual(povm.labels, ['c', 'a', 'b'])
        npt.assert_allclose(povm.effects[0], np.diag([0, 0, 1]))

    def test_relabelling_keeps_information(self):
        rng = make_rng(14)
        rho = random_density_operator(HilbertSpace((3, 2), ('A', 'C')), rng)
        E = Povm.from_basis(random_unitary(3, rng))
        F = Povm.computational(2)
        value = classical_mutual_information(rho, E, F)
        self.assertAlmostEqual(classical_mutual_information(rho, E.permuted([2, 0, 1]), F), value, places=12)
        self.assertAlmostEqual(classical_mutual_information(rho, E, F.permuted([1, 0])), value, places=12)

        model = random_model(2, 2, make_rng(15), c=UNEQUAL)
        device, obj = pointer_povm(model)
        exact = apply_measurement(model, dense=True)
        order = rng.permutation(device.n_outcomes)
        self.assertAlmostEqual(classical_mutual_information(exact, device.permuted(order), obj.permuted([1, 0])),
                               classical_mutual_information(exact, device, obj), places=12)

    def test_joint_distribution(self):
        bell = schmidt_state([0.5, 0.5])
        Z = Povm.computational(2)
        npt.assert_allclose(joint_distribution(bell, Z, Z), [[0.5, 0], [0, 0.5]], atol=1e-12)
        self.assertAlmostEqual(classical_mutual_information(bell, Z, Z), 1, places=10)

        X = Povm.from_basis(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
        npt.assert_allclose(joint_distribution(bell, X, X), [[0.5, 0], [0, 0.5]], atol=1e-12)
        general = Povm(effects=Z.effects)
        npt.assert_allclose(joint_distribution(bell, general, X), np.full((2, 2), 0.25), atol=1e-12)

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            joint_distribution(schmidt_state([0.5, 0.5]), Povm.computational(3), Povm.computational(2))

    def test_table_information(self):
        self.assertAlmostEqual(table_information(np.full((2, 2), 0.25)), 0)
        self.assertAlmostEqual(table_information(np.diag([0.3, 0.7])), H_UNEQUAL, places=6)


class TestAccessibleInformation(unittest.TestCase):
    """Test accessible_mutual_information and its strategies"""

    def test_bell_state(self):
        report = accessible_mutual_information(schmidt_state([0.5, 0.5]), 'projective-search', **SEARCH)
        self.assertAlmostEqual(report.accessible_info, 1, places=6)
        self.assertAlmostEqual(report.gap, 1, places=6)
        self.assertTrue(report.holds)

    def test_schmidt_state(self):
        report = accessible_mutual_information(schmidt_state([0.3, 0.7]), 'projective-search', **SEARCH)
        self.assertLess(abs(report.accessible_info - H_UNEQUAL), 1e-3)
        self.assertIsInstance(report.best_povms[0], Povm)

    def test_product_state(self):
        psi = tensor(random_pure_state(single_space(2, 'A'), make_rng(7)), basis_state(single_space(2, 'C'), 1))
        self.assertLess(accessible_mutual_information(psi, 'projective-search', **SEARCH).accessible_info, 1e-9)

    def test_pointer_exact(self):
        model = random_model(2, 3, make_rng(8), c=UNEQUAL)
        report = accessible_mutual_information(apply_measurement(model), 'pointer-exact')
        self.assertAlmostEqual(report.accessible_info, H_UNEQUAL, places=6)
        self.assertEqual(report.optimizer_meta['strategy'], 'pointer-exact')
        row = report.as_row()
        self.assertEqual(set(row), {'S_bits', 'I_bits', 'gap_bits', 'converged', 'strategy'})
        with self.assertRaises(ValueError):
            accessible_mutual_information(to_dense(apply_measurement(model)), 'pointer-exact')
        with self.assertRaises(ValueError):
            accessible_mutual_information(apply_measurement(model), 'annealing')

    def test_hybrid_small(self):
        model = random_model(2, 2, make_rng(9), c=UNEQUAL)
        report = accessible_mutual_information(reduce(apply_measurement(model)), 'hybrid', **SEARCH)
        self.assertTrue(report.optimizer_meta['strategy'].startswith('hybrid:'))
        self.assertGreaterEqual(report.accessible_info, H_UNEQUAL - 1e-9)
        self.assertAlmostEqual(report.gap, 0, places=6)

    def test_hybrid_above_dense_limit(self):
        model = random_model(2, 1000, make_rng(10), c=UNEQUAL)
        report = accessible_mutual_information(apply_measurement(model), 'hybrid')
        self.assertEqual(report.optimizer_meta['strategy'], 'hybrid:pointer-exact')
        self.assertAlmostEqual(report.gap, H_UNEQUAL, places=6)

    def test_macroscopicity_gap(self):
        model = random_model(3, 50, make_rng(11))
        exact = apply_measurement(model)
        H = mutual_entropy(reduce(exact))
        self.assertAlmostEqual(macroscopicity_gap(exact, 'pointer-exact'), H, places=9)
        self.assertAlmostEqual(macroscopicity_gap(reduce(exact), 'pointer-exact'), 0, places=9)

    def test_base_consistency(self):
        exact = apply_measurement(random_model(2, 3, make_rng(16), c=UNEQUAL))
        for strategy, options in [('pointer-exact', {}), ('hybrid', dict(SEARCH, seed=3))]:
            bits = accessible_mutual_information(exact, strategy, **options)
            nats = accessible_mutual_information(exact, strategy, base=np.e, **options)
            self.assertAlmostEqual(nats.accessible_info, bits.accessible_info * np.log(2), places=9)
            self.assertAlmostEqual(nats.gap, bits.gap * np.log(2), places=9)
            self.assertAlmostEqual(macroscopicity_gap(exact, strategy, base=np.e, **options),
                                   bits.gap * np.log(2), places=9)

        rho = schmidt_state([0.3, 0.7])
        bits = verify_inequality(rho, seed=1, **SEARCH)
        nats = verify_inequality(rho, seed=1, base=np.e, **SEARCH)
        self.assertTrue(bits.holds and nats.holds)
        self.assertAlmostEqual(nats.S, bits.S * np.log(2), places=9)
        self.assertAlmostEqual(nats.I, bits.I * np.log(2), places=6)

    def test_reduction_never_widens_the_gap(self):
        rng = make_rng(17)
        for t in range(6):
            model = random_model(int(rng.integers(2, 4)), int(rng.integers(1, 3)), rng,
                                 p_mode=('uniform', 'dirichlet')[t % 2])
            exact = apply_measurement(model)
            for strategy, options in [('pointer-exact', {}), ('hybrid', dict(SEARCH, seed=t))]:
                self.assertLessEqual(macroscopicity_gap(reduce(exact), strategy, **options),
                                     macroscopicity_gap(exact, strategy, **options) + 1e-9)

    def test_seeded_search_is_deterministic(self):
        rho = random_density_operator(HilbertSpace((2, 3), ('A', 'C')), make_rng(12))
        first = accessible_mutual_information(rho, 'projective-search', seed=5, **SEARCH)
        second = accessible_mutual_information(rho, 'projective-search', seed=5, **SEARCH)
        self.assertEqual(first.accessible_info, second.accessible_info)

    def test_random_states_certify(self):
        rng = make_rng(13)
        for d_a, d_c in [(2, 2), (2, 3), (3, 3)]:
            space = HilbertSpace((d_a, d_c), ('A', 'C'))
            for t in range(5):
                result = verify_inequality(random_density_operator(space, rng), seed=t, **SEARCH)
                self.assertTrue(result.holds)
                self.assertGreaterEqual(result.slack, -1e-6)


class TestSearchObjective(unittest.TestCase):

    def test_quadratic_gradient(self):
        x = np.array([0.3, -1.2, 2.0])
        npt.assert_allclose(finite_difference_gradient(lambda v: np.sum(v ** 2), x), 2 * x, atol=1e-6)

    def test_objective_at_identity(self):
        rho = to_dense(reduce(apply_measurement(pointer_model(UNEQUAL))))
        eye_a, eye_c = np.eye(3, dtype=complex), np.eye(2, dtype=complex)
        rho = permute_subsystems(rho, ('device', 'object'))
        objective = search_objective(rho, 3, 2, eye_a, eye_c)
        self.assertAlmostEqual(-objective(np.zeros(6 + 2)), H_UNEQUAL, places=6)
        grad = finite_difference_gradient(objective, np.zeros(8))
        self.assertLess(np.abs(grad).max(), 1e-4)


class TestCorrelationReport(unittest.TestCase):

    def test_gap(self):
        report = CorrelationReport(mutual_entropy=1.5, accessible_info=1.0)
        self.assertEqual(report.gap, 0.5)
        self.assertTrue(report.holds)
        self.assertFalse(CorrelationReport(mutual_entropy=1.0, accessible_info=1.1).holds)

    def test_dense_operator_input(self):
        rho = DensityOperator(TWO_QUBITS, np.diag([0.5, 0, 0, 0.5]))
        self.assertAlmostEqual(mutual_entropy(rho), 1, places=10)


if __name__ == '__main__':
    unittest.main()
