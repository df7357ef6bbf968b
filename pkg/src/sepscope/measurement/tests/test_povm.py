#!/usr/bin/python3
########################################################################################
# test_povm.py - Tests for the measurement module.                                     #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 11/06/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
test_povm.py - Tests for the symmetric (N, M)-POVM construction and validation.

"""

import dataclasses
import unittest

import numpy as np

from ...__utils__ import (
    IncompatibleCountsError,
    TOutOfRangeError,
    ValidationFailedError,
)
from ..basis import GroupingScheme, HermitianOperatorBasis
from ..povm import (
    build_gsic,
    build_h_operators,
    build_mum,
    build_povm,
    efficiency_x,
    NmPovmConfig,
    PovmKind,
    SymmetricPovm,
    t_range,
    validate_povm,
)


class _BasePovmTest(unittest.TestCase):
    """
    Base test holding the three qutrit measurements of the worked examples.

    """

    def setUp(self) -> None:
        super().setUp()

        self.t = 0.01
        self.basis_8_2 = HermitianOperatorBasis.for_nm(3, 8, 2, "qutrit-8-2")
        self.basis_1_9 = HermitianOperatorBasis.for_nm(3, 1, 9, "qutrit-1-9")
        self.basis_4_3 = HermitianOperatorBasis.for_nm(3, 4, 3, "qutrit-4-3")
        self.povm_8_2 = build_povm(
            NmPovmConfig(dim=3, n_groups=8, n_outcomes=2, t=self.t), self.basis_8_2
        )
        self.gsic = build_gsic(3, self.t, self.basis_1_9)
        self.mum = build_mum(3, self.t, self.basis_4_3)


class TestHOperators(_BasePovmTest):
    """Tests the traceless operators H_{alpha, k}."""

    def test_two_outcome_structure(self) -> None:
        """Tests H_{alpha, 1} = -(1 + sqrt(2)) G and H_{alpha, 2} = (1 + sqrt(2)) G."""

        for group, h_group in zip(
            self.basis_8_2.groups, build_h_operators(self.basis_8_2)
        ):
            self.assertTrue(np.allclose(h_group[0], -(1 + np.sqrt(2)) * group[0]))
            self.assertTrue(np.allclose(h_group[1], (1 + np.sqrt(2)) * group[0]))

    def test_groups_sum_to_zero(self) -> None:
        """Tests that each group of H operators is traceless and sums to zero."""

        for basis in (self.basis_8_2, self.basis_1_9, self.basis_4_3):
            for h_group in build_h_operators(basis):
                self.assertLessEqual(np.max(np.abs(np.sum(h_group, axis=0))), 1e-12)
                for operator in h_group:
                    self.assertLessEqual(abs(np.trace(operator)), 1e-12)
                    self.assertTrue(np.allclose(operator, operator.conj().T))

    def test_mum_coefficients(self) -> None:
        """Tests the d + sqrt(d) and 1 + sqrt(d) coefficients at M = d."""

        dim = 3
        for group, h_group in zip(
            self.basis_4_3.groups, build_h_operators(self.basis_4_3)
        ):
            group_sum = group[0] + group[1]
            for index in range(dim - 1):
                self.assertTrue(
                    np.allclose(
                        h_group[index],
                        group_sum - (dim + np.sqrt(dim)) * group[index],
                    )
                )
            self.assertTrue(np.allclose(h_group[-1], (1 + np.sqrt(dim)) * group_sum))


class TestTRange(_BasePovmTest):
    """Tests the admissible range of t."""

    def test_two_outcome_range(self) -> None:
        """Tests the symmetric (8, 2) range of about +/- 0.2536."""

        t_min, t_max = t_range(build_h_operators(self.basis_8_2))
        self.assertAlmostEqual(t_min, -0.2536, delta=1e-4)
        self.assertAlmostEqual(t_max, 0.2536, delta=1e-4)

    def test_gsic_range(self) -> None:
        """Tests the GSIC range of about +/- 0.012."""

        t_min, t_max = t_range(build_h_operators(self.basis_1_9))
        self.assertAlmostEqual(t_min, -0.012, delta=1e-3)
        self.assertAlmostEqual(t_max, 0.012, delta=1e-3)
        self.assertAlmostEqual(t_min, -0.0121604, delta=1e-6)
        self.assertAlmostEqual(t_max, 0.0129529, delta=1e-6)

    def test_mum_range(self) -> None:
        """Tests the MUM range, whose upper end is 1 / (3 (1 + sqrt(3)))."""

        t_min, t_max = t_range(build_h_operators(self.basis_4_3))
        self.assertAlmostEqual(t_min, -0.1093897, delta=1e-6)
        self.assertAlmostEqual(t_max, 1 / (3 * (1 + np.sqrt(3))), places=12)


class TestEfficiency(_BasePovmTest):
    """Tests the efficiency parameters x, a and kappa."""

    def test_two_outcome_x(self) -> None:
        """Tests x = 3/4 + t^2 (sqrt(2) + 1)^2."""

        self.assertAlmostEqual(efficiency_x(3, 2, 0.01), 0.7505828, places=7)
        self.assertAlmostEqual(self.povm_8_2.x, 0.75 + 1e-4 * (np.sqrt(2) + 1) ** 2)

    def test_gsic_a(self) -> None:
        """Tests that x at M = d^2 equals a = 1/d^3 + t^2 (d - 1) (d + 1)^3."""

        self.assertAlmostEqual(self.gsic.x, 1 / 27 + 128 * self.t**2, places=14)
        self.assertAlmostEqual(self.gsic.x, 0.0498370, places=7)
        for dim in (2, 3, 4):
            self.assertAlmostEqual(
                efficiency_x(dim, dim**2, 0.003),
                1 / dim**3 + 0.003**2 * (dim - 1) * (dim + 1) ** 3,
                places=14,
            )

    def test_mum_kappa(self) -> None:
        """Tests kappa = 1/3 + 2 t^2 (1 + sqrt(3))^2."""

        self.assertAlmostEqual(
            self.mum.x, 1 / 3 + 2 * self.t**2 * (1 + np.sqrt(3)) ** 2, places=14
        )
        self.assertAlmostEqual(self.mum.x, 0.3348262, places=7)

    def test_monotonic(self) -> None:
        """Tests that x increases strictly with |t|."""

        values = [efficiency_x(3, 3, t) for t in np.linspace(0, 0.1, 21)]
        self.assertTrue(all(np.diff(values) > 0))
        self.assertEqual(efficiency_x(3, 2, -0.05), efficiency_x(3, 2, 0.05))

    def test_measured_purity(self) -> None:
        """Tests that tr(E^2) of the built operators matches the closed form."""

        for povm in (self.povm_8_2, self.gsic, self.mum):
            for operator in povm.flat_operators:
                self.assertAlmostEqual(
                    np.real(np.trace(operator @ operator)), povm.x, delta=1e-10
                )


class TestBuildAndValidate(_BasePovmTest):
    """Tests the construction and validation of POVMs."""

    def test_fixtures_validate(self) -> None:
        """Tests that the three qutrit measurements satisfy every relation."""

        for povm in (self.povm_8_2, self.gsic, self.mum):
            report = validate_povm(povm)
            self.assertTrue(report.ok, report.to_dict())
            self.assertLessEqual(report.residuals["completeness"], 1e-12)

        self.assertTrue(validate_povm(build_gsic(3, 0.005, self.basis_1_9)).ok)

    def test_shapes_and_kinds(self) -> None:
        """Tests the shape and kind tags of the built POVMs."""

        self.assertEqual(len(self.gsic.flat_operators), 9)
        self.assertEqual(self.gsic.kind, PovmKind.GSIC)
        self.assertEqual(len(self.mum.operators), 4)
        self.assertEqual(self.mum.kind, PovmKind.MUM)
        self.assertEqual(self.povm_8_2.scheme, GroupingScheme.QUTRIT_8_2)
        for operator in self.povm_8_2.flat_operators:
            self.assertAlmostEqual(np.real(np.trace(operator)), 1.5, places=12)

    def test_mum_cross_overlaps(self) -> None:
        """Tests tr(P_n^(b) P_n'^(b')) = 1/3 for b != b'."""

        for b, group in enumerate(self.mum.operators):
            for b_prime, other_group in enumerate(self.mum.operators):
                if b == b_prime:
                    continue
                for operator in group:
                    for other in other_group:
                        self.assertAlmostEqual(
                            np.real(np.trace(operator @ other)), 1 / 3, delta=1e-10
                        )

    def test_general_equals_special_cases(self) -> None:
        """Tests that the general builder reproduces the GSIC and MUM builders."""

        general_mum = build_povm(
            NmPovmConfig(dim=3, n_groups=4, n_outcomes=3, t=self.t), self.basis_4_3
        )
        for left, right in zip(general_mum.flat_operators, self.mum.flat_operators):
            self.assertLessEqual(np.max(np.abs(left - right)), 1e-12)

        general_gsic = build_povm(
            NmPovmConfig(dim=3, n_groups=1, n_outcomes=9, t=self.t), self.basis_1_9
        )
        for left, right in zip(general_gsic.flat_operators, self.gsic.flat_operators):
            self.assertLessEqual(np.max(np.abs(left - right)), 1e-12)

    def test_other_dimensions(self) -> None:
        """Tests sequential constructions for d = 2 and d = 4."""

        for dim, n_groups, n_outcomes in ((2, 3, 2), (2, 1, 4), (4, 5, 4), (4, 15, 2)):
            basis = HermitianOperatorBasis.for_nm(dim, n_groups, n_outcomes)
            t_min, t_max = t_range(build_h_operators(basis))
            for t in (t_min, 0.5 * t_min, 0.5 * t_max, t_max):
                povm = build_povm(
                    NmPovmConfig(
                        dim=dim, n_groups=n_groups, n_outcomes=n_outcomes, t=t
                    ),
                    basis,
                )
                self.assertTrue(validate_povm(povm).ok)

    def test_boundary(self) -> None:
        """Tests that the POVM at t_max is positive within tolerance."""

        _, t_max = t_range(build_h_operators(self.basis_8_2))
        povm = build_povm(
            NmPovmConfig(dim=3, n_groups=8, n_outcomes=2, t=t_max), self.basis_8_2
        )
        report = validate_povm(povm)
        self.assertTrue(report.passed["positivity"])
        self.assertLessEqual(report.residuals["positivity"], 1e-10)

    def test_out_of_range(self) -> None:
        """Tests that t outside the admissible range is rejected."""

        with self.assertRaises(TOutOfRangeError):
            build_gsic(3, 0.02, self.basis_1_9)

        with self.assertRaises(TOutOfRangeError):
            build_mum(3, -0.2, self.basis_4_3)

    def test_incompatible_counts(self) -> None:
        """Tests that non-informationally-complete (N, M) are rejected."""

        with self.assertRaises(IncompatibleCountsError):
            NmPovmConfig(dim=3, n_groups=3, n_outcomes=3, t=0.01)

        with self.assertRaises(IncompatibleCountsError):
            build_povm(
                NmPovmConfig(dim=3, n_groups=4, n_outcomes=3, t=0.01), self.basis_8_2
            )

    def test_degenerate(self) -> None:
        """Tests that t = 0 is built, tagged degenerate, and logged."""

        with self.assertLogs(level="WARNING"):
            povm = build_povm(
                NmPovmConfig(dim=3, n_groups=8, n_outcomes=2, t=0), self.basis_8_2
            )

        self.assertTrue(povm.degenerate)
        self.assertAlmostEqual(povm.x, 3 / 4)
        for operator in povm.flat_operators:
            self.assertTrue(np.allclose(operator, np.eye(3) / 2))

    def test_corrupted_operator(self) -> None:
        """Tests that a perturbed operator fails with the violated relations named."""

        operators = [list(group) for group in self.povm_8_2.operators]
        corrupted = np.array(operators[0][0])
        corrupted[0, 0] += 1e-3
        operators[0][0] = corrupted
        povm = dataclasses.replace(
            self.povm_8_2, operators=tuple(tuple(group) for group in operators)
        )

        report = validate_povm(povm)
        self.assertFalse(report.ok)
        self.assertIn("trace", report.failed_relations)
        self.assertIn("completeness", report.failed_relations)
        self.assertNotIn("hermiticity", report.failed_relations)

    def test_validation_failure_raises(self) -> None:
        """Tests that the builder raises with the report attached."""

        # Doubling one operator breaks orthonormality but keeps it Hermitian.
        ops = list(self.basis_8_2.ops)
        ops[0] = 2 * ops[0]
        broken = HermitianOperatorBasis(
            dim=3,
            grouping=self.basis_8_2.grouping,
            ops=tuple(ops),
            scheme=GroupingScheme.QUTRIT_8_2,
        )
        with self.assertRaises(ValidationFailedError) as context:
            build_povm(NmPovmConfig(dim=3, n_groups=8, n_outcomes=2, t=0.01), broken)

        self.assertFalse(context.exception.report.ok)


class TestSerialisation(_BasePovmTest):
    """Tests the JSON representation of POVMs."""

    def test_round_trip(self) -> None:
        """Tests that parsing a serialised POVM preserves the operators and tags."""

        parsed = SymmetricPovm.from_json(self.mum.to_json())
        self.assertEqual(parsed.kind, PovmKind.MUM)
        self.assertEqual(parsed.scheme, GroupingScheme.QUTRIT_4_3)
        self.assertAlmostEqual(parsed.x, self.mum.x, places=12)
        self.assertIn("kappa", self.mum.to_json())
        for left, right in zip(parsed.flat_operators, self.mum.flat_operators):
            self.assertTrue(np.allclose(left, right))
