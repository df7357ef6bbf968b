#!/usr/bin/python3.10
########################################################################################
# basis.py - Hermitian operator bases for sepscope.                                    #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 06/06/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
basis.py - The operator-basis module for sepscope.

Generates the generalised Gell-Mann basis of traceless, orthonormal Hermitian operators
on C^d and partitions it into the N groups of M - 1 operators needed to build an
(N, M)-POVM.

The canonical order of the d^2 - 1 operators is:
    - the symmetric off-diagonal operators (E_jk + E_kj) / sqrt(2), for j < k in
      ascending (j, k) order;
    - the antisymmetric off-diagonal operators (-i E_jk + i E_kj) / sqrt(2), in the same
      order;
    - the d - 1 diagonal operators diag(1, ..., 1, -l, 0, ..., 0) / sqrt(l (l + 1)).

Besides chunking this order sequentially, three named qutrit groupings are provided
which fix the order and grouping used by the (8, 2), GSIC (1, 9) and MUM (4, 3)
measurements of the worked qutrit examples.

"""

import enum
import functools
import logging

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..__utils__ import (
    IncompatibleCountsError,
    InvalidDimensionError,
    UnknownFixtureError,
)
from ..matcore import matrix_to_json

__all__ = (
    "default_scheme",
    "gell_mann",
    "GroupingScheme",
    "group_for_nm",
    "HermitianOperatorBasis",
)

# QUTRIT_GROUPINGS:
#   The named qutrit groupings, as lists of groups of indices into the canonical
#   Gell-Mann order. Index 0-2 are the symmetric, 3-5 the antisymmetric and 6-7 the
#   diagonal operators.
QUTRIT_GROUPINGS: dict[str, tuple[tuple[int, ...], ...]] = {
    "qutrit-8-2": ((0,), (3,), (1,), (4,), (2,), (5,), (6,), (7,)),
    "qutrit-1-9": ((6, 0, 1, 3, 7, 2, 4, 5),),
    "qutrit-4-3": ((0, 3), (1, 4), (2, 5), (6, 7)),
}

# SCHEME_ALIASES:
#   Alternative names accepted for the named qutrit groupings.
SCHEME_ALIASES: dict[str, str] = {
    "paper-1-9": "qutrit-1-9",
    "paper-4-3": "qutrit-4-3",
    "paper-8-2": "qutrit-8-2",
}


class GroupingScheme(enum.Enum):
    """
    Denotes how the basis operators are grouped.

    - QUTRIT_1_9:
        The single group of eight qutrit operators used for the GSIC measurement.

    - QUTRIT_4_3:
        The four pairs of qutrit operators used for the MUM measurement.

    - QUTRIT_8_2:
        The eight singleton qutrit groups used for the (8, 2) measurement.

    - SEQUENTIAL:
        Consecutive chunks of M - 1 operators in canonical order.

    """

    QUTRIT_1_9: str = "qutrit-1-9"
    QUTRIT_4_3: str = "qutrit-4-3"
    QUTRIT_8_2: str = "qutrit-8-2"
    SEQUENTIAL: str = "sequential"

    @classmethod
    def from_name(cls, name: "str | GroupingScheme") -> "GroupingScheme":
        """
        Parse a grouping scheme from its name.

        Raises:
            - UnknownFixtureError:
                Raised if the name does not match any scheme.

        """

        if isinstance(name, GroupingScheme):
            return name
        try:
            return cls(SCHEME_ALIASES.get(name, name))
        except ValueError:
            raise UnknownFixtureError(
                f"Unknown grouping scheme '{name}', expected one of "
                f"{', '.join(scheme.value for scheme in cls)}."
            ) from None


@functools.lru_cache(maxsize=16)
def _gell_mann_cached(dim: int) -> tuple[np.ndarray, ...]:
    """Build and freeze the canonical basis for a dimension."""

    operators: list[np.ndarray] = []
    pairs = [(j, k) for j in range(dim) for k in range(j + 1, dim)]

    for j, k in pairs:
        operator = np.zeros((dim, dim), dtype=complex)
        operator[j, k] = operator[k, j] = 1 / np.sqrt(2)
        operators.append(operator)

    for j, k in pairs:
        operator = np.zeros((dim, dim), dtype=complex)
        operator[j, k] = -1j / np.sqrt(2)
        operator[k, j] = 1j / np.sqrt(2)
        operators.append(operator)

    for level in range(1, dim):
        diagonal = np.zeros(dim)
        diagonal[:level] = 1
        diagonal[level] = -level
        operators.append(
            np.diag(diagonal / np.sqrt(level * (level + 1))).astype(complex)
        )

    for operator in operators:
        operator.setflags(write=False)

    return tuple(operators)


def gell_mann(dim: int) -> list[np.ndarray]:
    """
    Return the generalised Gell-Mann basis of C^dim in canonical order.

    Inputs:
        - dim:
            The Hilbert-space dimension, d.

    Returns:
        The d^2 - 1 traceless Hermitian operators, each with tr(G^2) = 1.

    Raises:
        - InvalidDimensionError:
            Raised if the dimension is below two.

    """

    if int(dim) < 2:
        raise InvalidDimensionError(f"Basis dimension must be at least 2, got {dim}.")

    return list(_gell_mann_cached(int(dim)))


def default_scheme(dim: int, n_groups: int, n_outcomes: int) -> GroupingScheme:
    """
    Return the grouping scheme used when none is requested.

    The named qutrit groupings apply to their own (N, M) at d = 3; everything else is
    grouped sequentially.

    """

    if dim == 3:
        for scheme in (
            GroupingScheme.QUTRIT_8_2,
            GroupingScheme.QUTRIT_1_9,
            GroupingScheme.QUTRIT_4_3,
        ):
            if (n_groups, n_outcomes) == _scheme_counts(scheme):
                return scheme

    return GroupingScheme.SEQUENTIAL


def _scheme_counts(scheme: GroupingScheme) -> tuple[int, int]:
    """Return the (N, M) fixed by a named qutrit grouping."""

    grouping = QUTRIT_GROUPINGS[scheme.value]
    return len(grouping), len(grouping[0]) + 1


def group_for_nm(
    basis_ops: list[np.ndarray],
    n_groups: int,
    n_outcomes: int,
    scheme: str | GroupingScheme = GroupingScheme.SEQUENTIAL,
) -> tuple[tuple[int, ...], ...]:
    """
    Group the basis operators for an (N, M)-POVM.

    Inputs:
        - basis_ops:
            The d^2 - 1 basis operators in canonical order.
        - n_groups:
            The number of POVMs, N.
        - n_outcomes:
            The number of outcomes per POVM, M.
        - scheme:
            The grouping scheme to use.

    Returns:
        N groups, each a tuple of M - 1 indices into `basis_ops`.

    Raises:
        - IncompatibleCountsError:
            Raised if N (M - 1) differs from d^2 - 1, or if a named grouping is
            applied to the wrong (d, N, M).
        - UnknownFixtureError:
            Raised if the scheme is unknown.

    """

    scheme = GroupingScheme.from_name(scheme)
    n_operators = len(basis_ops)
    if n_groups < 1 or n_outcomes < 2 or n_groups * (n_outcomes - 1) != n_operators:
        raise IncompatibleCountsError(
            f"N(M - 1) = {n_groups}*({n_outcomes} - 1) does not equal d^2 - 1 = "
            f"{n_operators}."
        )

    if scheme == GroupingScheme.SEQUENTIAL:
        width = n_outcomes - 1
        return tuple(
            tuple(range(group * width, (group + 1) * width))
            for group in range(n_groups)
        )

    if n_operators != 8 or (n_groups, n_outcomes) != _scheme_counts(scheme):
        raise IncompatibleCountsError(
            f"Grouping '{scheme.value}' applies to d=3 with (N, M) = "
            f"{_scheme_counts(scheme)}, not {n_operators} operators with "
            f"(N, M) = ({n_groups}, {n_outcomes})."
        )

    return QUTRIT_GROUPINGS[scheme.value]


@dataclass(frozen=True, eq=False)
class HermitianOperatorBasis:
    """
    A grouped, orthonormal Hermitian operator basis.

    .. attribute:: dim
        The Hilbert-space dimension, d.

    .. attribute:: grouping
        The N groups of M - 1 indices into `ops`.

    .. attribute:: ops
        The d^2 - 1 traceless Hermitian operators in canonical order.

    .. attribute:: scheme
        The scheme which produced the grouping.

    """

    dim: int
    grouping: tuple[tuple[int, ...], ...]
    ops: tuple[np.ndarray, ...]
    scheme: GroupingScheme

    @classmethod
    def for_nm(
        cls,
        dim: int,
        n_groups: int,
        n_outcomes: int,
        scheme: str | GroupingScheme | None = None,
    ) -> "HermitianOperatorBasis":
        """
        Build the Gell-Mann basis of C^dim grouped for an (N, M)-POVM.

        Inputs:
            - dim:
                The Hilbert-space dimension.
            - n_groups:
                The number of POVMs, N.
            - n_outcomes:
                The number of outcomes, M.
            - scheme:
                The grouping scheme. If `None`, the default for (d, N, M) is used.

        """

        ops = gell_mann(dim)
        resolved_scheme = (
            default_scheme(dim, n_groups, n_outcomes)
            if scheme is None
            else GroupingScheme.from_name(scheme)
        )
        grouping = group_for_nm(ops, n_groups, n_outcomes, resolved_scheme)
        logging.getLogger(__name__).debug(
            "Grouped the d=%s Gell-Mann basis as %s using scheme '%s'.",
            dim,
            grouping,
            resolved_scheme.value,
        )

        return cls(dim=dim, grouping=grouping, ops=tuple(ops), scheme=resolved_scheme)

    @property
    def groups(self) -> list[list[np.ndarray]]:
        """The operators G_{alpha, k}, arranged by group."""

        return [[self.ops[index] for index in group] for group in self.grouping]

    @property
    def n_groups(self) -> int:
        """The number of groups, N."""

        return len(self.grouping)

    @property
    def n_outcomes(self) -> int:
        """The number of outcomes of the POVMs built from this basis, M."""

        return len(self.grouping[0]) + 1

    def to_json(self) -> dict[str, Any]:
        """Return the grouping and the operators, each in the matrix JSON format."""

        return {
            "dim": self.dim,
            "n_groups": self.n_groups,
            "n_outcomes": self.n_outcomes,
            "scheme": self.scheme.value,
            "grouping": [list(group) for group in self.grouping],
            "operators": [matrix_to_json(operator) for operator in self.ops],
        }
