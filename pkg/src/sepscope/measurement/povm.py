#!/usr/bin/python3.10
########################################################################################
# povm.py - Symmetric (N, M)-POVMs for sepscope.                                       #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 10/06/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
povm.py - The measurement module for sepscope.

Builds informationally-complete symmetric (N, M)-POVMs from a grouped Hermitian basis,

    E_{alpha, k} = I / M + t H_{alpha, k},

where, with G_alpha the sum of the M - 1 operators of group alpha,

    H_{alpha, k} = G_alpha - sqrt(M) (sqrt(M) + 1) G_{alpha, k}    for k < M,
    H_{alpha, M} = (sqrt(M) + 1) G_alpha.

The POVM operators share the common purity x = tr(E^2), the efficiency parameter. The
GSIC case, N = 1 and M = d^2, and the MUM case, N = d + 1 and M = d, are the same
construction, with x playing the role of a and kappa respectively.

"""

import enum
import logging

from dataclasses import dataclass, field
from typing import Any, Type, TypeVar

import numpy as np
import scipy.linalg

from ..__utils__ import (
    COMPLETENESS_TOLERANCE,
    DegenerateSpectrumError,
    IncompatibleCountsError,
    InvalidDimensionError,
    PSD_TOLERANCE,
    RELATION_TOLERANCE,
    ShapeMismatchError,
    T_RANGE_SLACK,
    TOutOfRangeError,
    UnknownKindError,
    ValidationFailedError,
)
from ..matcore import hermitian_eigenvalues, matrix_from_json, matrix_to_json
from .basis import GroupingScheme, HermitianOperatorBasis

__all__ = (
    "build_gsic",
    "build_h_operators",
    "build_mum",
    "build_povm",
    "efficiency_x",
    "NmPovmConfig",
    "PovmKind",
    "SymmetricPovm",
    "t_range",
    "validate_povm",
    "ValidationReport",
)

# COMPLETENESS:
#   Name of the sum_k E_{alpha, k} = I relation.
COMPLETENESS: str = "completeness"

# EFFICIENCY_RANGE:
#   Name of the x <= min(d^2 / M^2, d / M) relation.
EFFICIENCY_RANGE: str = "efficiency_range"

# HERMITICITY:
#   Name of the E = E^dagger relation.
HERMITICITY: str = "hermiticity"

# INTER_OVERLAP:
#   Name of the tr(E_{alpha, k} E_{beta, l}) = d / M^2 relation for beta != alpha.
INTER_OVERLAP: str = "inter_overlap"

# INTRA_OVERLAP:
#   Name of the tr(E_{alpha, k} E_{alpha, l}) = (d - M x) / (M (M - 1)) relation.
INTRA_OVERLAP: str = "intra_overlap"

# POSITIVITY:
#   Name of the E >= 0 relation.
POSITIVITY: str = "positivity"

# PURITY:
#   Name of the tr(E^2) = x relation.
PURITY: str = "purity"

# TRACE:
#   Name of the tr(E) = d / M relation.
TRACE: str = "trace"

# Type variable for the POVM class.
P = TypeVar("P", bound="SymmetricPovm")


class PovmKind(enum.Enum):
    """
    Denotes the family of a symmetric POVM.

    - GENERAL:
        A general informationally-complete (N, M)-POVM.

    - GSIC:
        A general symmetric informationally-complete POVM, (N, M) = (1, d^2), whose
        efficiency parameter is conventionally written a.

    - MUM:
        A set of mutually-unbiased measurements, (N, M) = (d + 1, d), whose efficiency
        parameter is conventionally written kappa.

    """

    GENERAL: str = "general"
    GSIC: str = "gsic"
    MUM: str = "mum"

    @classmethod
    def from_name(cls, name: "str | PovmKind") -> "PovmKind":
        """
        Parse a kind from its name.

        Raises:
            - UnknownKindError:
                Raised if the name is not a known kind.

        """

        if isinstance(name, PovmKind):
            return name
        try:
            return cls(name)
        except ValueError:
            raise UnknownKindError(
                f"Unknown POVM kind '{name}', expected one of "
                f"{', '.join(kind.value for kind in cls)}."
            ) from None

    @property
    def parameter_name(self) -> str:
        """The conventional symbol for the efficiency parameter of this kind."""

        return {PovmKind.GENERAL: "x", PovmKind.GSIC: "a", PovmKind.MUM: "kappa"}[self]


@dataclass(frozen=True, kw_only=True)
class NmPovmConfig:
    """
    Represents the defining parameters of an informationally-complete (N, M)-POVM.

    .. attribute:: dim
        The Hilbert-space dimension, d.

    .. attribute:: n_groups
        The number of POVMs, N.

    .. attribute:: n_outcomes
        The number of outcomes of each POVM, M.

    .. attribute:: t
        The interpolation parameter between the maximally-mixed and extremal POVMs.

    """

    dim: int
    n_groups: int
    n_outcomes: int
    t: float

    def __post_init__(self) -> None:
        """
        Check the dimension and the informational completeness of the counts.

        Raises:
            - InvalidDimensionError:
                Raised if d < 2.
            - IncompatibleCountsError:
                Raised if N (M - 1) != d^2 - 1.

        """

        if self.dim < 2:
            raise InvalidDimensionError(
                f"POVM dimension must be at least 2, got {self.dim}."
            )
        if self.n_groups * (self.n_outcomes - 1) != self.dim**2 - 1:
            raise IncompatibleCountsError(
                f"(N, M) = ({self.n_groups}, {self.n_outcomes}) is not informationally "
                f"complete for d={self.dim}: N(M - 1) must equal {self.dim ** 2 - 1}."
            )

    def __str__(self) -> str:
        return f"({self.n_groups},{self.n_outcomes}) d={self.dim} t={self.t:g}"


@dataclass(kw_only=True)
class ValidationReport:
    """
    The outcome of checking a POVM against its defining relations.

    .. attribute:: residuals
        The maximum absolute residual of each relation.

    .. attribute:: tolerances
        The tolerance declared for each relation.

    """

    residuals: dict[str, float]
    tolerances: dict[str, float]

    @property
    def failed_relations(self) -> list[str]:
        """The names of the relations whose residual exceeds the tolerance."""

        return [name for name, passed in self.passed.items() if not passed]

    @property
    def ok(self) -> bool:
        """Whether every relation holds."""

        return all(self.passed.values())

    @property
    def passed(self) -> dict[str, bool]:
        """The pass flag of each relation."""

        return {
            name: residual <= self.tolerances[name]
            for name, residual in self.residuals.items()
        }

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-compatible representation of the report."""

        return {
            "ok": self.ok,
            "relations": {
                name: {
                    "residual": float(self.residuals[name]),
                    "tolerance": float(self.tolerances[name]),
                    "passed": passed,
                }
                for name, passed in self.passed.items()
            },
        }


@dataclass(frozen=True, kw_only=True, eq=False)
class SymmetricPovm:
    """
    A symmetric, informationally-complete (N, M)-POVM.

    .. attribute:: config
        The defining (d, N, M, t).

    .. attribute:: degenerate
        Whether the POVM is degenerate, i.e., t = 0 and every operator equals I / M, so
        that the POVM carries no information.

    .. attribute:: kind
        The family of the POVM.

    .. attribute:: operators
        The N x M operators, E_{alpha, k}.

    .. attribute:: scheme
        The grouping scheme of the underlying basis.

    .. attribute:: x
        The efficiency parameter, tr(E_{alpha, k}^2).

    """

    config: NmPovmConfig
    degenerate: bool = False
    kind: PovmKind = PovmKind.GENERAL
    operators: tuple[tuple[np.ndarray, ...], ...] = field(repr=False)
    scheme: GroupingScheme = GroupingScheme.SEQUENTIAL
    x: float

    @property
    def dim(self) -> int:
        """The Hilbert-space dimension, d."""

        return self.config.dim

    @property
    def flat_operators(self) -> list[np.ndarray]:
        """The operators in group-major order, (alpha - 1) M + k."""

        return [operator for group in self.operators for operator in group]

    @property
    def identifier(self) -> str:
        """A short description of the POVM used in output metadata."""

        return (
            f"{self.kind.value}({self.config.n_groups},{self.config.n_outcomes})"
            f"/d={self.dim}/{self.scheme.value}/t={self.config.t:g}"
        )

    @property
    def n_groups(self) -> int:
        """The number of POVMs, N."""

        return self.config.n_groups

    @property
    def n_outcomes(self) -> int:
        """The number of outcomes of each POVM, M."""

        return self.config.n_outcomes

    def to_json(self) -> dict[str, Any]:
        """Return a JSON-compatible representation of the POVM."""

        return {
            "kind": self.kind.value,
            "dim": self.dim,
            "n_groups": self.n_groups,
            "n_outcomes": self.n_outcomes,
            "t": self.config.t,
            self.kind.parameter_name: self.x,
            "scheme": self.scheme.value,
            "degenerate": self.degenerate,
            "operators": [
                [matrix_to_json(operator) for operator in group]
                for group in self.operators
            ],
        }

    @classmethod
    def from_json(cls: Type[P], entry: dict[str, Any]) -> P:
        """
        Parse a POVM from its JSON representation.

        The efficiency parameter is read back from the operators, so that files that
        have been edited by hand are validated on what they contain.

        Inputs:
            - entry:
                The parsed JSON `dict`.

        Raises:
            - ShapeMismatchError:
                Raised if the operator blocks do not match (d, N, M).

        """

        try:
            config = NmPovmConfig(
                dim=int(entry["dim"]),
                n_groups=int(entry["n_groups"]),
                n_outcomes=int(entry["n_outcomes"]),
                t=float(entry["t"]),
            )
            operators = tuple(
                tuple(matrix_from_json(operator) for operator in group)
                for group in entry["operators"]
            )
        except KeyError as caught_error:
            raise ShapeMismatchError(
                f"Missing key {caught_error} in POVM JSON entry."
            ) from None

        if len(operators) != config.n_groups or any(
            len(group) != config.n_outcomes
            or any(operator.shape != (config.dim, config.dim) for operator in group)
            for group in operators
        ):
            raise ShapeMismatchError(
                f"POVM JSON entry does not hold {config.n_groups} groups of "
                f"{config.n_outcomes} {config.dim}x{config.dim} operators."
            )

        return cls(
            config=config,
            degenerate=bool(entry.get("degenerate", config.t == 0)),
            kind=PovmKind.from_name(entry.get("kind", PovmKind.GENERAL.value)),
            operators=operators,
            scheme=GroupingScheme.from_name(
                entry.get("scheme", GroupingScheme.SEQUENTIAL.value)
            ),
            x=float(np.real(np.trace(operators[0][0] @ operators[0][0]))),
        )


def build_h_operators(basis: HermitianOperatorBasis) -> list[list[np.ndarray]]:
    """
    Build the traceless Hermitian operators H_{alpha, k} from a grouped basis.

    Inputs:
        - basis:
            The grouped basis, with N groups of M - 1 operators.

    Returns:
        The N x M operators H_{alpha, k}, each group summing to zero.

    Raises:
        - IncompatibleCountsError:
            Raised if the grouping does not cover the d^2 - 1 operators.

    """

    n_outcomes = basis.n_outcomes
    if basis.n_groups * (n_outcomes - 1) != basis.dim**2 - 1 or any(
        len(group) != n_outcomes - 1 for group in basis.grouping
    ):
        raise IncompatibleCountsError(
            f"Basis grouping {basis.grouping} is not an informationally-complete "
            f"grouping for d={basis.dim}."
        )

    root_m = np.sqrt(n_outcomes)
    h_operators: list[list[np.ndarray]] = []
    for group in basis.groups:
        group_sum = np.sum(group, axis=0)
        h_operators.append(
            [group_sum - root_m * (root_m + 1) * operator for operator in group]
            + [(root_m + 1) * group_sum]
        )

    return h_operators


def t_range(h_operators: list[list[np.ndarray]]) -> tuple[float, float]:
    """
    Compute the interval of t for which every E_{alpha, k} is positive semidefinite.

    Inputs:
        - h_operators:
            The N x M operators H_{alpha, k}.

    Returns:
        The closed interval [-1 / (M lambda_max), 1 / (M |lambda_min|)], where
        lambda_max and lambda_min are the largest and smallest eigenvalues over all the
        operators.

    Raises:
        - DegenerateSpectrumError:
            Raised if the operators have no positive or no negative eigenvalue.

    """

    if len(h_operators) == 0 or len(h_operators[0]) == 0:
        raise DegenerateSpectrumError("Cannot compute a t-range from no H operators.")

    n_outcomes = len(h_operators[0])
    eigenvalues = np.concatenate(
        [
            hermitian_eigenvalues(operator)
            for group in h_operators
            for operator in group
        ]
    )
    lambda_max, lambda_min = float(np.max(eigenvalues)), float(np.min(eigenvalues))
    if lambda_max <= 0 or lambda_min >= 0:
        raise DegenerateSpectrumError(
            f"The H operators must have eigenvalues of both signs, got "
            f"[{lambda_min:.3e}, {lambda_max:.3e}]."
        )

    return -1 / (n_outcomes * lambda_max), 1 / (n_outcomes * abs(lambda_min))


def efficiency_x(dim: int, n_outcomes: int, t: float) -> float:
    """
    Compute the efficiency parameter, x = d / M^2 + t^2 (M - 1) (sqrt(M) + 1)^2.

    Inputs:
        - dim:
            The Hilbert-space dimension, d.
        - n_outcomes:
            The number of outcomes, M.
        - t:
            The interpolation parameter.

    """

    return (
        dim / n_outcomes**2
        + t**2 * (n_outcomes - 1) * (np.sqrt(n_outcomes) + 1) ** 2
    )


def validate_povm(
    povm: SymmetricPovm, tolerance: float = RELATION_TOLERANCE
) -> ValidationReport:
    """
    Check a POVM against its defining relations.

    The relations checked are the unit-trace, purity and overlap relations, positivity
    and completeness of each POVM, Hermiticity, and the upper bound on x.

    Inputs:
        - povm:
            The POVM to check.
        - tolerance:
            The tolerance on the trace relations.

    Returns:
        A :class:`ValidationReport` with the maximum residual of each relation.

    """

    dim, n_outcomes, x = povm.dim, povm.n_outcomes, povm.x
    identity = np.eye(dim)
    flat = np.array(povm.flat_operators)
    group_of = np.repeat(np.arange(povm.n_groups), n_outcomes)

    # Gram matrix of Hilbert-Schmidt inner products, tr(E_i E_j).
    gram = np.real(np.einsum("iab,jba->ij", flat, flat))
    same_group = group_of[:, None] == group_of[None, :]
    diagonal = np.eye(len(flat), dtype=bool)

    def _max_residual(values: np.ndarray, target: float) -> float:
        return float(np.max(np.abs(values - target))) if values.size > 0 else 0.0

    residuals: dict[str, float] = {
        TRACE: _max_residual(
            np.real(np.trace(flat, axis1=1, axis2=2)), dim / n_outcomes
        ),
        PURITY: _max_residual(gram[diagonal], x),
        INTRA_OVERLAP: _max_residual(
            gram[same_group & ~diagonal],
            (dim - n_outcomes * x) / (n_outcomes * (n_outcomes - 1)),
        ),
        INTER_OVERLAP: _max_residual(gram[~same_group], dim / n_outcomes**2),
        HERMITICITY: float(np.max(np.abs(flat - flat.conj().transpose(0, 2, 1)))),
        COMPLETENESS: max(
            float(np.max(np.abs(np.sum(group, axis=0) - identity)))
            for group in povm.operators
        ),
        POSITIVITY: max(
            0.0,
            -min(
                float(scipy.linalg.eigvalsh((operator + operator.conj().T) / 2)[0])
                for operator in flat
            ),
        ),
        EFFICIENCY_RANGE: max(0.0, x - min(dim**2 / n_outcomes**2, dim / n_outcomes)),
    }
    tolerances: dict[str, float] = {
        TRACE: tolerance,
        PURITY: tolerance,
        INTRA_OVERLAP: tolerance,
        INTER_OVERLAP: tolerance,
        HERMITICITY: COMPLETENESS_TOLERANCE,
        COMPLETENESS: COMPLETENESS_TOLERANCE,
        POSITIVITY: PSD_TOLERANCE,
        EFFICIENCY_RANGE: tolerance,
    }

    return ValidationReport(residuals=residuals, tolerances=tolerances)


def build_povm(
    config: NmPovmConfig,
    basis: HermitianOperatorBasis | None = None,
    *,
    kind: PovmKind = PovmKind.GENERAL,
    validate: bool = True,
) -> SymmetricPovm:
    """
    Construct an informationally-complete (N, M)-POVM.

    Inputs:
        - config:
            The defining (d, N, M, t).
        - basis:
            The grouped basis. If `None`, the Gell-Mann basis with the default grouping
            for (d, N, M) is used.
        - kind:
            The family tag to attach.
        - validate:
            Whether to check the defining relations before returning.

    Returns:
        The :class:`SymmetricPovm`.

    Raises:
        - IncompatibleCountsError:
            Raised if the basis does not match the configuration.
        - TOutOfRangeError:
            Raised if t lies outside the admissible range.
        - ValidationFailedError:
            Raised if validation is requested and a relation fails.

    """

    logger = logging.getLogger(__name__)

    if basis is None:
        basis = HermitianOperatorBasis.for_nm(
            config.dim, config.n_groups, config.n_outcomes
        )
    if (basis.dim, basis.n_groups, basis.n_outcomes) != (
        config.dim,
        config.n_groups,
        config.n_outcomes,
    ):
        raise IncompatibleCountsError(
            f"Basis (d, N, M) = ({basis.dim}, {basis.n_groups}, "
            f"{basis.n_outcomes}) does not match the configuration {config}."
        )

    h_operators = build_h_operators(basis)
    t_min, t_max = t_range(h_operators)
    if not t_min - T_RANGE_SLACK <= config.t <= t_max + T_RANGE_SLACK:
        raise TOutOfRangeError(
            f"t={config.t} lies outside the admissible range "
            f"[{t_min:.6g}, {t_max:.6g}] for {kind.value} "
            f"({config.n_groups},{config.n_outcomes}) d={config.dim}."
        )

    identity = np.eye(config.dim) / config.n_outcomes
    operators = tuple(
        tuple(identity + config.t * operator for operator in group)
        for group in h_operators
    )
    for group in operators:
        for operator in group:
            operator.setflags(write=False)

    degenerate = config.t == 0
    povm = SymmetricPovm(
        config=config,
        degenerate=degenerate,
        kind=kind,
        operators=operators,
        scheme=basis.scheme,
        x=efficiency_x(config.dim, config.n_outcomes, config.t),
    )
    if degenerate:
        logger.warning(
            "POVM %s is degenerate: t=0 gives x=d/M^2, which is not informationally "
            "complete.",
            povm.identifier,
        )

    if validate:
        report = validate_povm(povm)
        if not report.ok:
            logger.error(
                "POVM %s failed validation: %s",
                povm.identifier,
                ", ".join(report.failed_relations),
            )
            raise ValidationFailedError(
                f"POVM {povm.identifier} violates "
                f"{', '.join(report.failed_relations)}.",
                report,
            )

    logger.debug(
        "Built POVM %s with %s=%.10g.", povm.identifier, kind.parameter_name, povm.x
    )
    return povm


def build_gsic(
    dim: int, t: float, basis: HermitianOperatorBasis | None = None
) -> SymmetricPovm:
    """
    Construct a GSIC POVM, the (1, d^2) case, with a = 1/d^3 + t^2 (d - 1) (d + 1)^3.

    Inputs:
        - dim:
            The Hilbert-space dimension, d.
        - t:
            The interpolation parameter.
        - basis:
            The grouped basis, defaulting to the Gell-Mann basis in a single group.

    """

    return build_povm(
        NmPovmConfig(dim=dim, n_groups=1, n_outcomes=dim**2, t=t),
        basis,
        kind=PovmKind.GSIC,
    )


def build_mum(
    dim: int, t: float, basis: HermitianOperatorBasis | None = None
) -> SymmetricPovm:
    """
    Construct d + 1 mutually-unbiased measurements, the (d + 1, d) case.

    The efficiency parameter is kappa = 1/d + t^2 (1 + sqrt(d))^2 (d - 1).

    Inputs:
        - dim:
            The Hilbert-space dimension, d.
        - t:
            The interpolation parameter.
        - basis:
            The grouped basis, defaulting to the Gell-Mann basis in d + 1 groups.

    """

    return build_povm(
        NmPovmConfig(dim=dim, n_groups=dim + 1, n_outcomes=dim, t=t),
        basis,
        kind=PovmKind.MUM,
    )
