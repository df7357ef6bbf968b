#!/usr/bin/python3
########################################################################################
# test_main.py - Tests for the command-line interface.                                 #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 15/07/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
test_main.py - Tests for the command-line interface and its exit codes.

"""

import contextlib
import io
import json
import os
import tempfile
import unittest

from ..__main__ import _parse_fixed, _split_params, DONE, FAILED, main
from ..__utils__ import ArgumentError


class _BaseMainTest(unittest.TestCase):
    """
    Base test holding a temporary directory for the CLI outputs.

    """

    def setUp(self) -> None:
        super().setUp()

        self._temporary_directory = tempfile.TemporaryDirectory()
        self.directory = self._temporary_directory.name

    def tearDown(self) -> None:
        self._temporary_directory.cleanup()
        super().tearDown()

    def _path(self, name: str) -> str:
        """Return the path of a file in the temporary directory."""

        return os.path.join(self.directory, name)

    def _run(self, *arguments: str) -> int:
        """Run the CLI quietly, discarding anything written to stderr."""

        with contextlib.redirect_stderr(io.StringIO()):
            return main(["--quiet", *arguments])

    def _load(self, name: str):
        """Load a JSON output."""

        with open(self._path(name), "r", encoding="UTF-8") as json_file:
            return json.load(json_file)


class TestBasisAndPovm(_BaseMainTest):
    """Tests the basis and POVM commands."""

    def test_basis_dump(self) -> None:
        """Tests that the MUM grouping of the qutrit basis is dumped."""

        exit_code = self._run(
            "--output", self._path("basis.json"),
            "basis", "dump", "--dim", "3", "--n", "4", "--m", "3",
        )
        self.assertEqual(exit_code, 0)
        entry = self._load("basis.json")
        self.assertEqual(entry["scheme"], "qutrit-4-3")
        self.assertEqual(len(entry["operators"]), 8)

    def test_scheme_alias(self) -> None:
        """Tests that the alternative grouping names are accepted by the CLI."""

        self.assertEqual(
            self._run(
                "--output", self._path("aliased.json"),
                "basis", "dump", "--dim", "3", "--n", "8", "--m", "2",
                "--scheme", "paper-8-2",
            ),
            0,
        )
        self.assertEqual(self._load("aliased.json")["scheme"], "qutrit-8-2")

        self.assertEqual(
            self._run(
                "--output", self._path("aliased-povm.json"),
                "povm", "build", "--dim", "3", "--n", "4", "--m", "3",
                "--scheme", "paper-4-3", "--t", "0.01",
            ),
            0,
        )
        self.assertEqual(
            self._run(
                "basis", "dump", "--dim", "3", "--n", "8", "--m", "2",
                "--scheme", "paper-9-9",
            ),
            2,
        )

    def test_povm_build_and_validate(self) -> None:
        """Tests that a built POVM validates, and a corrupted one does not."""

        self.assertEqual(
            self._run(
                "--output", self._path("gsic.json"),
                "povm", "build", "--dim", "3", "--kind", "gsic", "--t", "0.01",
            ),
            0,
        )
        entry = self._load("gsic.json")
        self.assertEqual((entry["n_groups"], entry["n_outcomes"]), (1, 9))
        self.assertAlmostEqual(entry["a"], 1 / 27 + 0.0128, places=12)

        self.assertEqual(
            self._run(
                "--output", self._path("report.json"),
                "povm", "validate", "--in", self._path("gsic.json"),
            ),
            0,
        )
        self.assertTrue(self._load("report.json")["ok"])

        entry["operators"][0][0]["re"][0][0] += 0.1
        with open(self._path("corrupt.json"), "w", encoding="UTF-8") as corrupt_file:
            json.dump(entry, corrupt_file)
        self.assertEqual(
            self._run(
                "--output", self._path("corrupt-report.json"),
                "povm", "validate", "--in", self._path("corrupt.json"),
            ),
            3,
        )
        self.assertFalse(self._load("corrupt-report.json")["ok"])

    def test_povm_errors(self) -> None:
        """Tests the exit codes of invalid POVM requests."""

        self.assertEqual(
            self._run(
                "povm", "build", "--dim", "3", "--n", "8", "--m", "2", "--t", "1"
            ),
            2,
        )
        self.assertEqual(
            self._run(
                "povm", "build", "--dim", "3", "--n", "3", "--m", "3", "--t", "0"
            ),
            2,
        )
        self.assertEqual(
            self._run("povm", "validate", "--in", self._path("missing.json")), 2
        )

        with open(self._path("bad.json"), "w", encoding="UTF-8") as bad_file:
            bad_file.write("{not json")
        self.assertEqual(
            self._run("povm", "validate", "--in", self._path("bad.json")), 2
        )


class TestStateAndCriterion(_BaseMainTest):
    """Tests the state and criterion commands."""

    def setUp(self) -> None:
        super().setUp()

        self.assertEqual(
            self._run(
                "--output", self._path("isotropic.json"),
                "state", "make", "--family", "isotropic", "--param", "0.5",
                "--fixed", "dim=3",
            ),
            0,
        )

    def test_state_make_and_check(self) -> None:
        """Tests that a made state records its provenance and fails the PPT test."""

        entry = self._load("isotropic.json")
        self.assertEqual(entry["dims"], [3, 3])
        self.assertEqual(entry["provenance"]["family"], "isotropic")

        self.assertEqual(
            self._run(
                "--output", self._path("check.json"),
                "state", "check", "--in", self._path("isotropic.json"),
            ),
            0,
        )
        diagnostics = self._load("check.json")
        self.assertFalse(diagnostics["ppt"])
        self.assertAlmostEqual(diagnostics["trace"], 1, places=12)

    def test_random_separable(self) -> None:
        """Tests that seeded random separable states are reproducible."""

        for name in ("first.json", "second.json"):
            self._run(
                "--output", self._path(name),
                "state", "make", "--random-separable", "--dims", "2", "3",
                "--terms", "3", "--seed", "7",
            )
        self.assertEqual(self._load("first.json"), self._load("second.json"))
        self.assertEqual(self._load("first.json")["provenance"]["seed"], 7)

    def test_state_make_with_params(self) -> None:
        """Tests that `--params` carries the family and fixed parameters together."""

        self.assertEqual(
            self._run(
                "--output", self._path("combined.json"),
                "state", "make", "--family", "isotropic", "--params", "0.5", "dim=3",
            ),
            0,
        )
        self.assertEqual(self._load("combined.json"), self._load("isotropic.json"))

        self.assertEqual(
            self._run(
                "--output", self._path("rho-y.json"),
                "state", "make", "--family", "rho-y", "--param", "0.99",
                "--params", "upsilon=0.2",
            ),
            0,
        )
        self.assertEqual(self._load("rho-y.json")["provenance"]["upsilon"], 0.2)

        self.assertEqual(
            self._run(
                "state", "make", "--family", "rho1", "--param", "0.1",
                "--params", "0.2",
            ),
            2,
        )

    def test_state_errors(self) -> None:
        """Tests the exit codes of invalid state requests."""

        self.assertEqual(self._run("state", "make", "--family", "rho1"), 2)
        self.assertEqual(
            self._run("state", "make", "--family", "rho1", "--param", "1.5"), 2
        )
        self.assertEqual(
            self._run("state", "make", "--family", "rho-y", "--param", "0.5"), 2
        )

    def test_criterion_eval(self) -> None:
        """Tests verdicts evaluated from configured and from supplied POVMs."""

        self.assertEqual(
            self._run(
                "--output", self._path("realign.json"),
                "criterion", "eval", "--state", self._path("isotropic.json"),
                "--criterion", "realign",
            ),
            0,
        )
        verdict = self._load("realign.json")
        self.assertTrue(verdict["detected"])
        self.assertAlmostEqual(verdict["lhs"], 1 / 3 + 8 * 0.5 / 3, places=10)

        self._run(
            "--output", self._path("povm.json"),
            "povm", "build", "--dim", "3", "--n", "8", "--m", "2", "--t", "0.01",
        )
        self._run(
            "--output", self._path("configured.json"),
            "criterion", "eval", "--state", self._path("isotropic.json"),
            "--mu", "2", "--nu", "2", "--l", "10",
        )
        self._run(
            "--output", self._path("supplied.json"),
            "criterion", "eval", "--state", self._path("isotropic.json"),
            "--povm-a", self._path("povm.json"), "--povm-b", self._path("povm.json"),
            "--mu", "2", "--nu", "2", "--l", "10",
        )
        configured = self._load("configured.json")
        supplied = self._load("supplied.json")
        self.assertTrue(configured["detected"])
        self.assertAlmostEqual(configured["lhs"], supplied["lhs"], places=12)
        self.assertAlmostEqual(configured["rhs"], supplied["rhs"], places=12)

        self.assertEqual(
            self._run(
                "criterion", "eval", "--state", self._path("isotropic.json"),
                "--povm-a", self._path("povm.json"),
            ),
            2,
        )


class TestScanAndReproduce(_BaseMainTest):
    """Tests the scan and reproduce commands."""

    def test_scan(self) -> None:
        """Tests that the isotropic threshold is found and the curve written."""

        exit_code = self._run(
            "--output", self._path("threshold.json"),
            "scan", "--family", "isotropic", "--fixed", "dim=3",
            "--criterion", "thm1", "--n", "8", "--m", "2",
            "--mu", "2", "--nu", "2", "--l", "10",
            "--grid-size", "11", "--curve", self._path("curve.csv"),
        )
        self.assertEqual(exit_code, 0)
        result = self._load("threshold.json")
        self.assertAlmostEqual(result["threshold"], 0.25, delta=1e-4)
        self.assertEqual(result["direction"], "rising")
        self.assertTrue(os.path.isfile(self._path("curve.csv")))

    def test_scan_without_sign_change(self) -> None:
        """Tests that a criterion which never detects exits as a numerical failure."""

        self.assertEqual(
            self._run(
                "scan", "--family", "isotropic", "--range", "0", "0.2",
                "--criterion", "ppt", "--grid-size", "5",
            ),
            3,
        )

    def test_reproduce(self) -> None:
        """Tests a reproduction and an unknown target."""

        exit_code = self._run(
            "--output", self._path("summary.json"),
            "reproduce", "example3", "--out", self._path("outputs"),
            "--grid-size", "11",
        )
        self.assertEqual(exit_code, 0)
        self.assertEqual(len(self._load("summary.json")["example3"]), 4)
        self.assertTrue(
            os.path.isfile(
                self._path(os.path.join("outputs", "example3_thresholds.csv"))
            )
        )

        self.assertEqual(
            self._run("reproduce", "missing-target", "--out", self._path("x")), 2
        )
        self.assertEqual(
            self._run(
                "--input-data-directory", self._path("missing"),
                "reproduce", "example3",
            ),
            2,
        )

    def test_argument_errors(self) -> None:
        """Tests malformed fixed parameters and unknown commands."""

        with self.assertRaises(ArgumentError):
            _parse_fixed(["dim"])
        with self.assertRaises(ArgumentError):
            _parse_fixed(["upsilon=high"])
        self.assertEqual(
            _parse_fixed(["dim=3", "upsilon=0.2"]), {"dim": 3, "upsilon": 0.2}
        )

        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit):
                main(["--quiet", "measure"])
        self.assertEqual(_split_params(["0.5", "dim=3"]), (0.5, ["dim=3"]))
        self.assertEqual(_split_params(["dim=3"]), (None, ["dim=3"]))
        with self.assertRaises(ArgumentError):
            _split_params(["0.5", "0.6"])
        with self.assertRaises(ArgumentError):
            _split_params(["half"])

    def test_failure_status_lines(self) -> None:
        """Tests that a failure only closes a status line which is still open."""

        with contextlib.redirect_stderr(io.StringIO()) as stderr:
            exit_code = main(
                [
                    "--output", self.directory,
                    "basis", "dump", "--dim", "2", "--n", "3", "--m", "2",
                ]
            )
        self.assertEqual(exit_code, 2)
        self.assertEqual(stderr.getvalue().count(DONE), 1)
        self.assertNotIn(FAILED, stderr.getvalue())

        with contextlib.redirect_stderr(io.StringIO()) as stderr:
            exit_code = main(["povm", "validate", "--in", self._path("missing.json")])
        self.assertEqual(exit_code, 2)
        self.assertEqual(stderr.getvalue().count(FAILED), 1)
