#!/usr/bin/python3.10
########################################################################################
# reproduction.py - Reproduction targets for sepscope.                                 #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 08/07/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
reproduction.py - The reproduction module for sepscope.

Reproduction targets are defined in the `reproduction.yaml` input file. Each target
holds a list of margin curves, each a family of states scanned with a criterion and,
where known, a reference threshold to compare against, along with an optional mesh of
border weights evaluated at a fixed state.

Reproducing a target writes, into an output directory:
    - one CSV per curve, `<target>_<label>.csv`, if the target writes its curves;
    - the thresholds of every curve, `<target>_thresholds.csv`;
    - the mesh, `<target>_mesh.csv`, if the target has one.

Every file starts with `# key: value` header lines naming the target, the version and
the fixed parameters, and is byte-identical between runs of the same version.

"""

import logging
import os

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd
import yaml

from tqdm import tqdm

from .__utils__ import (
    COARSE_GRID_SIZE,
    ConfigurationError,
    NAME,
    NeverDetectsError,
    NoSignChangeError,
    UnknownTargetError,
)
from .entanglement.states import build_family_state, StateFamily
from .scanner import (
    CriterionConfig,
    FamilySpec,
    find_threshold,
    scan_margin,
    scan_mesh,
)

__all__ = (
    "CurveSpec",
    "list_targets",
    "MeshSpec",
    "reproduce",
    "ReproductionResult",
    "ReproductionTarget",
)

# CSV_FLOAT_FORMAT:
#   The format used for floating-point values in the output CSVs.
CSV_FLOAT_FORMAT: str = "%.10g"

# FILE_ENCODING:
#   The encoding used for reading and writing files.
FILE_ENCODING: str = "UTF-8"

# REPRODUCTION_FILE:
#   The name of the input file holding the reproduction targets.
REPRODUCTION_FILE: str = "reproduction.yaml"

# STATUS_OK:
#   The status of a curve whose threshold was found.
STATUS_OK: str = "ok"

# TARGETS:
#   Keyword for the list of targets in the reproduction file.
TARGETS: str = "targets"

# THRESHOLD_COLUMNS:
#   The columns of the thresholds CSV.
THRESHOLD_COLUMNS: list[str] = [
    "label",
    "family",
    "criterion",
    "status",
    "threshold",
    "bracket_lo",
    "bracket_hi",
    "direction",
    "slope",
    "intercept",
    "fit_residual",
    "reference",
    "deviation",
]


def _grid(entry: dict[str, Any] | list[float]) -> list[float]:
    """Parse a list of values or a `{start, stop, count}` grid."""

    if isinstance(entry, list):
        return [float(value) for value in entry]
    try:
        return [
            float(value)
            for value in np.linspace(
                float(entry["start"]), float(entry["stop"]), int(entry["count"])
            )
        ]
    except (KeyError, TypeError) as caught_error:
        raise ConfigurationError(
            f"Grid entries need a list or start, stop and count keys, got {entry}."
        ) from caught_error


@dataclass(kw_only=True)
class CurveSpec:
    """
    A margin curve: a criterion scanned along a family of states.

    .. attribute:: label
        The label of the curve, used in file names.

    .. attribute:: family
        The family and parameter range.

    .. attribute:: criterion
        The criterion configuration.

    .. attribute:: reference
        The reference threshold, if one is known.

    """

    label: str
    family: FamilySpec
    criterion: CriterionConfig
    reference: float | None = None

    @classmethod
    def from_entry(cls, entry: dict[str, Any]) -> "CurveSpec":
        """Build a curve from its YAML entry."""

        try:
            label = str(entry["label"])
            family = FamilySpec.from_entry(entry["family"])
            criterion = CriterionConfig.from_entry(entry["criterion"])
        except KeyError as caught_error:
            raise ConfigurationError(
                f"Missing key {caught_error} in curve entry: {entry}."
            ) from None

        reference = entry.get("reference", None)
        return cls(
            label=label,
            family=family,
            criterion=criterion,
            reference=None if reference is None else float(reference),
        )


@dataclass(kw_only=True)
class MeshSpec:
    """
    A mesh of border weights evaluated at a fixed member of a family.

    .. attribute:: family
        The state family.

    .. attribute:: param
        The family parameter of the state.

    .. attribute:: fixed
        The fixed secondary parameters of the family.

    .. attribute:: criterion
        The bordered criterion, whose mu and nu are varied.

    .. attribute:: mu_values, nu_values
        The border weights.

    """

    family: StateFamily
    param: float
    fixed: dict[str, Any] = field(default_factory=dict)
    criterion: CriterionConfig
    mu_values: list[float]
    nu_values: list[float]

    @classmethod
    def from_entry(cls, entry: dict[str, Any]) -> "MeshSpec":
        """Build a mesh from its YAML entry."""

        try:
            return cls(
                family=StateFamily.from_name(entry["family"]),
                param=float(entry["param"]),
                fixed=dict(entry.get("fixed", None) or {}),
                criterion=CriterionConfig.from_entry(entry["criterion"]),
                mu_values=_grid(entry["mu"]),
                nu_values=_grid(entry["nu"]),
            )
        except KeyError as caught_error:
            raise ConfigurationError(
                f"Missing key {caught_error} in mesh entry: {entry}."
            ) from None


@dataclass(kw_only=True)
class ReproductionTarget:
    """
    A named set of curves, and optionally a mesh, to reproduce.

    .. attribute:: name
        The name of the target.

    .. attribute:: description
        A description of what the target reproduces.

    .. attribute:: curves
        The margin curves.

    .. attribute:: mesh
        The border-weight mesh, if any.

    .. attribute:: write_curves
        Whether the sampled curves are written alongside the thresholds.

    """

    name: str
    description: str = ""
    curves: list[CurveSpec]
    mesh: MeshSpec | None = None
    write_curves: bool = True

    @classmethod
    def from_entry(cls, entry: dict[str, Any]) -> "ReproductionTarget":
        """Build a target from its YAML entry."""

        try:
            name = str(entry[NAME])
            curves = [CurveSpec.from_entry(curve) for curve in entry["curves"]]
        except (KeyError, TypeError) as caught_error:
            raise ConfigurationError(
                f"Reproduction targets need a name and a list of curves: {caught_error}"
            ) from None

        labels = [curve.label for curve in curves]
        if len(set(labels)) != len(labels):
            raise ConfigurationError(f"Target '{name}' has duplicate curve labels.")

        mesh = entry.get("mesh", None)
        return cls(
            name=name,
            description=str(entry.get("description", "")).strip(),
            curves=curves,
            mesh=None if mesh is None else MeshSpec.from_entry(mesh),
            write_curves=bool(entry.get("write_curves", True)),
        )

    @classmethod
    def from_reproduction_file(
        cls, input_data_directory: str, name: str
    ) -> "ReproductionTarget":
        """
        Load a target by name from the reproduction file.

        Inputs:
            - input_data_directory:
                The directory holding the reproduction file.
            - name:
                The name of the target.

        Raises:
            - UnknownTargetError:
                Raised if no target has the given name.

        """

        entries = _parse_reproduction_file(input_data_directory)
        for entry in entries:
            if entry.get(NAME, None) == name:
                return cls.from_entry(entry)

        raise UnknownTargetError(
            f"Unknown reproduction target '{name}', expected one of "
            f"{', '.join(str(entry.get(NAME)) for entry in entries)}."
        )


def _parse_reproduction_file(input_data_directory: str) -> list[dict[str, Any]]:
    """
    Parse the target entries from the reproduction file.

    Raises:
        - ConfigurationError:
            Raised if the file is not valid YAML or holds no targets.
        - OSError:
            Raised if the file cannot be read.

    """

    with open(
        os.path.join(input_data_directory, REPRODUCTION_FILE),
        "r",
        encoding=FILE_ENCODING,
    ) as reproduction_file:
        try:
            contents = yaml.safe_load(reproduction_file)
        except yaml.YAMLError as caught_error:
            raise ConfigurationError(
                f"Could not parse {REPRODUCTION_FILE}: {caught_error}"
            ) from None

    if not isinstance(contents, dict) or not isinstance(contents.get(TARGETS), list):
        raise ConfigurationError(
            f"{REPRODUCTION_FILE} must hold a '{TARGETS}' list of targets."
        )
    return contents[TARGETS]


def list_targets(input_data_directory: str) -> list[str]:
    """Return the names of every target in the reproduction file."""

    return [
        str(entry.get(NAME))
        for entry in _parse_reproduction_file(input_data_directory)
    ]


@dataclass(kw_only=True)
class ReproductionResult:
    """
    The outputs of reproducing a target.

    .. attribute:: thresholds
        The thresholds of every curve, in curve order.

    .. attribute:: files
        The paths of the files written, in the order they were written.

    """

    thresholds: pd.DataFrame
    files: list[str] = field(default_factory=list)


def _write_csv(
    frame: pd.DataFrame, filename: str, header: dict[str, Any]
) -> None:
    """Write a frame preceded by `# key: value` header lines."""

    with open(filename, "w", encoding=FILE_ENCODING, newline="") as output_file:
        for key, value in header.items():
            output_file.write(f"# {key}: {value}\n")
        frame.to_csv(
            output_file,
            index=False,
            float_format=CSV_FLOAT_FORMAT,
            lineterminator="\n",
        )


def _threshold_row(
    curve: CurveSpec, grid_size: int, n_jobs: int
) -> tuple[dict[str, Any], pd.DataFrame | None]:
    """Find the threshold of a curve, recording the failure if there is none."""

    row: dict[str, Any] = {column: None for column in THRESHOLD_COLUMNS}
    row.update(
        {
            "label": curve.label,
            "family": curve.family.label,
            "criterion": curve.criterion.criterion.value,
            "reference": curve.reference,
        }
    )

    try:
        result = find_threshold(
            curve.family, curve.criterion, grid_size=grid_size, n_jobs=n_jobs
        )
    except NoSignChangeError as caught_error:
        logging.getLogger(__name__).warning(
            "No threshold for curve '%s': %s", curve.label, caught_error
        )
        row["status"] = (
            "never-detects"
            if isinstance(caught_error, NeverDetectsError)
            else "always-detects"
        )
        return row, None

    row.update(
        {
            "status": STATUS_OK,
            "threshold": result.threshold,
            "bracket_lo": result.bracket[0],
            "bracket_hi": result.bracket[1],
            "direction": result.direction,
            "slope": result.slope,
            "intercept": result.intercept,
            "fit_residual": result.fit_residual,
        }
    )
    if curve.reference is not None:
        row["deviation"] = result.threshold - curve.reference
    return row, result.samples


def reproduce(
    target: ReproductionTarget,
    out_dir: str,
    version: str,
    n_jobs: int = 1,
    grid_size: int = COARSE_GRID_SIZE,
) -> ReproductionResult:
    """
    Reproduce a target, writing its curves, thresholds and mesh as CSV files.

    Curves along which the criterion never, or always, detects are recorded with that
    status rather than aborting the target.

    Inputs:
        - target:
            The target to reproduce.
        - out_dir:
            The directory into which to write, created if it does not exist.
        - version:
            The version string recorded in the headers.
        - n_jobs:
            The number of parallel workers for the coarse grids.
        - grid_size:
            The number of coarse-grid points.

    Returns:
        The :class:`ReproductionResult`.

    Raises:
        - OSError:
            Raised if the output directory cannot be written.

    """

    logger = logging.getLogger(__name__)
    os.makedirs(out_dir, exist_ok=True)
    base_header: dict[str, Any] = {"target": target.name, "version": version}

    files: list[str] = []
    rows: list[dict[str, Any]] = []
    for curve in tqdm(target.curves, desc=target.name, disable=None, leave=False):
        row, samples = _threshold_row(curve, grid_size, n_jobs)
        rows.append(row)

        if not target.write_curves:
            continue
        if samples is None:
            samples = scan_margin(curve.family, curve.criterion, grid_size, n_jobs)

        dims = curve.family.state_at(curve.family.lo).dims.dims
        header = {
            **base_header,
            "curve": curve.label,
            "family": curve.family.label,
            "range": f"[{curve.family.lo:g}, {curve.family.hi:g}]",
            **curve.criterion.metadata(dims),
        }
        if curve.reference is not None:
            header["reference"] = curve.reference
        _write_csv(
            samples,
            filename := os.path.join(out_dir, f"{target.name}_{curve.label}.csv"),
            header,
        )
        files.append(filename)

    thresholds = pd.DataFrame(rows, columns=THRESHOLD_COLUMNS)
    _write_csv(
        thresholds,
        filename := os.path.join(out_dir, f"{target.name}_thresholds.csv"),
        base_header,
    )
    files.append(filename)

    if target.mesh is not None:
        mesh = target.mesh
        state = build_family_state(mesh.family, mesh.param, **mesh.fixed)
        _write_csv(
            scan_mesh(state, mesh.criterion, mesh.mu_values, mesh.nu_values),
            filename := os.path.join(out_dir, f"{target.name}_mesh.csv"),
            {
                **base_header,
                "family": mesh.family.value,
                "param": mesh.param,
                **{
                    key: value
                    for key, value in mesh.criterion.metadata(state.dims.dims).items()
                    if key not in ("mu", "nu")
                },
            },
        )
        files.append(filename)

    logger.info("Reproduced target '%s' into %s.", target.name, out_dir)
    return ReproductionResult(thresholds=thresholds, files=files)
