#!/usr/bin/python3
########################################################################################
# test_reproduction.py - Tests for the reproduction module.                            #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 12/07/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
test_reproduction.py - Tests for the reproduction targets and their thresholds.

"""

import os
import tempfile
import unittest

import pandas as pd

from ..__utils__ import ConfigurationError, UnknownTargetError
from ..reproduction import (
    list_targets,
    MeshSpec,
    reproduce,
    ReproductionTarget,
)
from ..scanner import Criterion

# INPUT_DATA_DIRECTORY:
#   The directory holding the reproduction file shipped with the package.
INPUT_DATA_DIRECTORY: str = os.path.join(
    os.path.dirname(__file__), os.pardir, os.pardir, os.pardir, "input_data"
)


def _read_csv(filename: str) -> pd.DataFrame:
    """Read an output CSV, skipping its header lines."""

    return pd.read_csv(filename, comment="#")


def _read_header(filename: str) -> dict[str, str]:
    """Read the `# key: value` header lines of an output CSV."""

    header: dict[str, str] = {}
    with open(filename, "r", encoding="UTF-8") as csv_file:
        for line in csv_file:
            if not line.startswith("# "):
                break
            key, _, value = line[2:].rstrip("\n").partition(": ")
            header[key] = value
    return header


class _BaseReproductionTest(unittest.TestCase):
    """
    Base test holding a temporary output directory.

    """

    def setUp(self) -> None:
        super().setUp()

        self._temporary_directory = tempfile.TemporaryDirectory()
        self.out_dir = self._temporary_directory.name

    def tearDown(self) -> None:
        self._temporary_directory.cleanup()
        super().tearDown()

    def _write_reproduction_file(self, contents: str) -> str:
        """Write a reproduction file into a fresh input directory."""

        input_directory = os.path.join(self.out_dir, "input_data")
        os.makedirs(input_directory, exist_ok=True)
        with open(
            os.path.join(input_directory, "reproduction.yaml"), "w", encoding="UTF-8"
        ) as reproduction_file:
            reproduction_file.write(contents)
        return input_directory


class TestReproductionFile(_BaseReproductionTest):
    """Tests the parsing of the reproduction file."""

    def test_targets(self) -> None:
        """Tests that every target is present and parses."""

        names = list_targets(INPUT_DATA_DIRECTORY)
        self.assertEqual(
            names, ["example1", "example2", "example3", "example4", "table2", "table3"]
        )
        for name in names:
            with self.subTest(target=name):
                target = ReproductionTarget.from_reproduction_file(
                    INPUT_DATA_DIRECTORY, name
                )
                self.assertEqual(target.name, name)
                self.assertGreater(len(target.curves), 0)

    def test_shared_curves(self) -> None:
        """Tests that the tables reuse the curves of their examples."""

        example2 = ReproductionTarget.from_reproduction_file(
            INPUT_DATA_DIRECTORY, "example2"
        )
        table3 = ReproductionTarget.from_reproduction_file(
            INPUT_DATA_DIRECTORY, "table3"
        )
        self.assertTrue(example2.write_curves)
        self.assertFalse(table3.write_curves)
        self.assertEqual(
            [curve.label for curve in example2.curves],
            [curve.label for curve in table3.curves],
        )

        table2 = ReproductionTarget.from_reproduction_file(
            INPUT_DATA_DIRECTORY, "table2"
        )
        self.assertEqual(len(table2.curves), 15)
        upsilons = {
            curve.family.fixed["upsilon"]
            for curve in table2.curves
            if curve.criterion.criterion == Criterion.THEOREM_1
        }
        self.assertEqual(upsilons, {0.2, 0.4, 0.6, 0.8, 0.9})

    def test_assumed_baselines(self) -> None:
        """Tests that the realignment baselines record their assumed weights."""

        example4 = ReproductionTarget.from_reproduction_file(
            INPUT_DATA_DIRECTORY, "example4"
        )
        curves = {curve.label: curve for curve in example4.curves}
        self.assertEqual(curves["h1"].criterion.assumed, ("alpha", "beta", "l"))
        self.assertEqual(curves["h2"].criterion.assumed, ("alpha", "beta"))
        self.assertEqual(curves["f7"].criterion.assumed, ())

    def test_unknown_target(self) -> None:
        """Tests that an unknown target is rejected."""

        with self.assertRaises(UnknownTargetError):
            ReproductionTarget.from_reproduction_file(INPUT_DATA_DIRECTORY, "figure9")

    def test_malformed_files(self) -> None:
        """Tests that malformed reproduction files are configuration errors."""

        for contents in (
            "targets: [unclosed",
            "name: example1",
            "targets:\n  - name: broken\n    curves:\n      - label: a\n"
            "        family: {family: rho1, range: [0, 0.1]}\n",
        ):
            with self.subTest(contents=contents):
                input_directory = self._write_reproduction_file(contents)
                with self.assertRaises(ConfigurationError):
                    ReproductionTarget.from_reproduction_file(input_directory, "broken")

        with self.assertRaises(OSError):
            list_targets(os.path.join(self.out_dir, "missing"))

    def test_mesh_grid(self) -> None:
        """Tests that mesh weights are read as lists or as linear grids."""

        mesh = MeshSpec.from_entry(
            {
                "family": "tiles-noise",
                "param": 0.8822,
                "criterion": {"criterion": "gsic"},
                "mu": [0, 0.5],
                "nu": {"start": 0, "stop": 1, "count": 5},
            }
        )
        self.assertEqual(mesh.mu_values, [0.0, 0.5])
        self.assertEqual(mesh.nu_values, [0.0, 0.25, 0.5, 0.75, 1.0])

        with self.assertRaises(ConfigurationError):
            MeshSpec.from_entry({"family": "tiles-noise", "param": 0.5})


class TestReproduce(_BaseReproductionTest):
    """Tests the reproduction of the targets."""

    def test_isotropic_thresholds(self) -> None:
        """Tests that every isotropic curve is detected from q = 1/4."""

        target = ReproductionTarget.from_reproduction_file(
            INPUT_DATA_DIRECTORY, "example3"
        )
        result = reproduce(target, self.out_dir, "test")

        self.assertEqual(list(result.thresholds["label"]), ["f4", "f5", "f6"])
        for row in result.thresholds.to_dict("records"):
            with self.subTest(curve=row["label"]):
                self.assertEqual(row["status"], "ok")
                self.assertEqual(row["direction"], "rising")
                self.assertAlmostEqual(row["threshold"], 0.25, delta=1e-4)
                self.assertLess(abs(row["deviation"]), 1e-4)

        self.assertEqual(
            sorted(os.path.basename(filename) for filename in result.files),
            [
                "example3_f4.csv",
                "example3_f5.csv",
                "example3_f6.csv",
                "example3_thresholds.csv",
            ],
        )
        curve = _read_csv(os.path.join(self.out_dir, "example3_f4.csv"))
        self.assertEqual(
            list(curve.columns), ["param", "lhs", "rhs", "margin", "detected"]
        )
        self.assertEqual(len(curve), 101)

        header = _read_header(os.path.join(self.out_dir, "example3_f4.csv"))
        self.assertEqual(header["target"], "example3")
        self.assertEqual(header["version"], "test")
        self.assertEqual(header["criterion"], "thm1")
        self.assertEqual(header["l"], "10")
        self.assertIn("qutrit-8-2", header["povms"])
        self.assertEqual(header["reference"], "0.25")

    def test_rho_y_thresholds(self) -> None:
        """Tests the bordered (8, 2) thresholds of the mixed Horodecki states."""

        target = ReproductionTarget.from_reproduction_file(
            INPUT_DATA_DIRECTORY, "table2"
        )
        result = reproduce(target, self.out_dir, "test")
        self.assertEqual(
            [os.path.basename(filename) for filename in result.files],
            ["table2_thresholds.csv"],
        )

        thresholds = result.thresholds.set_index("label")
        for upsilon, expected in (
            ("0.2", 0.994054),
            ("0.4", 0.994609),
            ("0.6", 0.99625),
            ("0.8", 0.998122),
            ("0.9", 0.9990664),
        ):
            with self.subTest(upsilon=upsilon):
                row = thresholds.loc[f"thm1-{upsilon}"]
                self.assertEqual(row["status"], "ok")
                self.assertEqual(row["direction"], "rising")
                self.assertAlmostEqual(row["threshold"], expected, delta=3e-6)

        written = _read_csv(os.path.join(self.out_dir, "table2_thresholds.csv"))
        self.assertEqual(len(written), 15)
        self.assertIn("deviation", written.columns)

    def test_tiles_noise_thresholds(self) -> None:
        """Tests the noisy Tiles thresholds and the border mesh."""

        target = ReproductionTarget.from_reproduction_file(
            INPUT_DATA_DIRECTORY, "example1"
        )
        result = reproduce(target, self.out_dir, "test")
        thresholds = result.thresholds.set_index("label")

        for label, expected in (("g1", 0.882182), ("g2", 0.882577), ("g3", 0.882178)):
            with self.subTest(curve=label):
                self.assertAlmostEqual(
                    thresholds.loc[label, "threshold"], expected, delta=1e-4
                )

        # The bordered curves detect from the unbordered thresholds onwards.
        for label in ("f1", "f2", "f3"):
            with self.subTest(curve=label):
                self.assertEqual(thresholds.loc[label, "direction"], "rising")
                self.assertGreater(thresholds.loc[label, "threshold"], 0.88)
                self.assertGreater(thresholds.loc[label, "deviation"], 0)
        self.assertAlmostEqual(thresholds.loc["f1", "threshold"], 0.88218, delta=1e-4)

        # The second pair uses GSIC measurements and the third MUM measurements.
        for label, criterion, reference in (
            ("f2", "gsic", 0.837993),
            ("f3", "mum", 0.728219),
        ):
            with self.subTest(curve=label):
                self.assertEqual(thresholds.loc[label, "criterion"], criterion)
                self.assertEqual(thresholds.loc[label, "reference"], reference)
        self.assertEqual(thresholds.loc["g2", "reference"], 0.882577)
        self.assertEqual(thresholds.loc["g3", "reference"], 0.882178)

        mesh = _read_csv(os.path.join(self.out_dir, "example1_mesh.csv"))
        self.assertEqual(len(mesh), 21 * 21)
        self.assertEqual(
            list(mesh.columns), ["mu", "nu", "lhs", "rhs", "margin", "detected"]
        )
        header = _read_header(os.path.join(self.out_dir, "example1_mesh.csv"))
        self.assertEqual(header["param"], "0.8822")
        self.assertEqual(header["criterion"], "gsic")

    def test_rho1_thresholds(self) -> None:
        """Tests that the rank-five PPT family is detected below its thresholds."""

        target = ReproductionTarget.from_reproduction_file(
            INPUT_DATA_DIRECTORY, "table3"
        )
        result = reproduce(target, self.out_dir, "test")
        thresholds = result.thresholds.set_index("label")

        for label, expected in (
            ("nm-8-2", 0.069159),
            ("nm-8-2-p-only", 0.069163),
            ("mum-p-only", 0.069160),
            ("gsic-p-only", 0.068848),
        ):
            with self.subTest(curve=label):
                self.assertEqual(thresholds.loc[label, "direction"], "falling")
                self.assertAlmostEqual(
                    thresholds.loc[label, "threshold"], expected, delta=1e-5
                )

    def test_deterministic(self) -> None:
        """Tests that two reproductions are byte-identical."""

        target = ReproductionTarget.from_reproduction_file(
            INPUT_DATA_DIRECTORY, "example3"
        )
        first = reproduce(
            target, os.path.join(self.out_dir, "first"), "1.0.0", grid_size=11
        )
        second = reproduce(
            target, os.path.join(self.out_dir, "second"), "1.0.0", grid_size=11
        )

        for first_file, second_file in zip(first.files, second.files):
            with self.subTest(file=os.path.basename(first_file)):
                with open(first_file, "rb") as first_handle, open(
                    second_file, "rb"
                ) as second_handle:
                    self.assertEqual(first_handle.read(), second_handle.read())

    def test_no_sign_change(self) -> None:
        """Tests that curves without a threshold are recorded rather than raised."""

        input_directory = self._write_reproduction_file(
            "targets:\n"
            "  - name: baselines\n"
            "    write_curves: true\n"
            "    curves:\n"
            "      - label: ppt\n"
            "        family: {family: isotropic, range: [0, 0.2], fixed: {dim: 3}}\n"
            "        criterion: {criterion: ppt}\n"
            "      - label: realign\n"
            "        family: {family: isotropic, range: [0.5, 1], fixed: {dim: 3}}\n"
            "        criterion: {criterion: realign}\n"
            "        reference: 0.25\n"
        )
        target = ReproductionTarget.from_reproduction_file(input_directory, "baselines")
        result = reproduce(
            target, os.path.join(self.out_dir, "outputs"), "test", grid_size=5
        )

        self.assertEqual(
            list(result.thresholds["status"]), ["never-detects", "always-detects"]
        )
        self.assertTrue(result.thresholds["threshold"].isna().all())
        self.assertEqual(len(result.files), 3)
        ppt_curve = _read_csv(
            os.path.join(self.out_dir, "outputs", "baselines_ppt.csv")
        )
        self.assertEqual(len(ppt_curve), 5)
