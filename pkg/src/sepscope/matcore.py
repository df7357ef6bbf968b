#!/usr/bin/python3.10
########################################################################################
# matcore.py - Dense complex-matrix kernel for sepscope.                               #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 03/06/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
matcore.py - The matrix-kernel module for sepscope.

This module provides the dense linear-algebra operations that every other part of the
package is built on: Hermitian eigenvalues, singular values and the trace norm, tensor
products, partial traces and transposes, vectorisation and realignment.

Conventions:
    - Composite indices are ordered with the leftmost subsystem as the most significant
      digit, i.e., |i>|j> maps to row i * d_B + j.
    - `vec` stacks columns, and the realignment satisfies R(a (x) b) = vec(a) vec(b)^T.

Matrices are plain complex :class:`numpy.ndarray` instances. All functions here are pure
and return new arrays.

"""

import functools
import operator

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np
import scipy.linalg

from .__utils__ import (
    DimensionMismatchError,
    HERMITICITY_TOLERANCE,
    InvalidDimensionError,
    NonHermitianError,
    NonSquareError,
    ShapeMismatchError,
)

__all__ = (
    "hermitian_eigenvalues",
    "is_hermitian",
    "kron",
    "matrix_from_json",
    "matrix_to_json",
    "partial_trace",
    "partial_transpose",
    "permute_subsystems",
    "realign",
    "singular_values",
    "singular_values_via_gram",
    "SubsystemDims",
    "trace_norm",
    "trace_norm_via_gram",
    "vec",
)

# COLS:
#   Keyword for the number of columns in the matrix JSON format.
COLS: str = "cols"

# IMAG:
#   Keyword for the imaginary parts in the matrix JSON format.
IMAG: str = "im"

# REAL:
#   Keyword for the real parts in the matrix JSON format.
REAL: str = "re"

# ROWS:
#   Keyword for the number of rows in the matrix JSON format.
ROWS: str = "rows"


@dataclass(frozen=True)
class SubsystemDims:
    """
    The ordered local dimensions of a composite Hilbert space.

    .. attribute:: dims
        The local dimensions, (d_{A_1}, ..., d_{A_N}).

    """

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        """
        Coerce the dimensions to a `tuple` and check that each is at least two.

        Raises:
            - InvalidDimensionError:
                Raised if any local dimension is below two or none are given.

        """

        object.__setattr__(self, "dims", tuple(int(entry) for entry in self.dims))
        if len(self.dims) == 0 or any(entry < 2 for entry in self.dims):
            raise InvalidDimensionError(
                f"Subsystem dimensions must all be at least 2, got {list(self.dims)}."
            )

    def __iter__(self):
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __getitem__(self, index: int) -> int:
        return self.dims[index]

    @property
    def total(self) -> int:
        """The dimension of the composite space."""

        return functools.reduce(operator.mul, self.dims, 1)

    def check_matrix(self, m: np.ndarray) -> None:
        """
        Check that a square matrix acts on the composite space.

        Inputs:
            - m:
                The matrix to check.

        Raises:
            - DimensionMismatchError:
                Raised if the matrix is not square of the composite dimension.

        """

        if m.ndim != 2 or m.shape != (self.total, self.total):
            raise DimensionMismatchError(
                f"Matrix of shape {m.shape} does not act on subsystems "
                f"{list(self.dims)} (expected {self.total}x{self.total})."
            )


def _as_dims(dims: SubsystemDims | Sequence[int]) -> SubsystemDims:
    """Promote a plain sequence of integers to :class:`SubsystemDims`."""

    return dims if isinstance(dims, SubsystemDims) else SubsystemDims(tuple(dims))


def _check_square(m: np.ndarray) -> None:
    """Raise a :class:`NonSquareError` if `m` is not a square matrix."""

    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquareError(f"Expected a square matrix, got shape {m.shape}.")


def is_hermitian(m: np.ndarray, tolerance: float = HERMITICITY_TOLERANCE) -> bool:
    """
    Return whether a square matrix is Hermitian within an entrywise tolerance.

    Inputs:
        - m:
            The matrix to check.
        - tolerance:
            The maximum allowed value of |m - m^dagger| over all entries.

    """

    _check_square(m)
    if m.size == 0:
        return True
    return bool(np.max(np.abs(m - m.conj().T)) <= tolerance)


def hermitian_eigenvalues(
    m: np.ndarray, tolerance: float = HERMITICITY_TOLERANCE
) -> np.ndarray:
    """
    Compute the eigenvalues of a Hermitian matrix.

    Inputs:
        - m:
            The square Hermitian matrix.
        - tolerance:
            The entrywise Hermiticity tolerance.

    Returns:
        The real eigenvalues in ascending order.

    Raises:
        - NonSquareError:
            Raised if the matrix is not square.
        - NonHermitianError:
            Raised if the matrix is not Hermitian within the tolerance.

    """

    m = np.asarray(m, dtype=complex)
    _check_square(m)
    if not is_hermitian(m, tolerance):
        raise NonHermitianError(
            "Matrix is not Hermitian: max |m - m^dagger| = "
            f"{np.max(np.abs(m - m.conj().T)):.3e} exceeds {tolerance:.1e}."
        )

    # Symmetrise so that the solver sees an exactly Hermitian input.
    return np.asarray(scipy.linalg.eigvalsh((m + m.conj().T) / 2), dtype=float)


def singular_values(m: np.ndarray) -> np.ndarray:
    """
    Return the singular values of a rectangular matrix, in descending order.

    Inputs:
        - m:
            The matrix.

    """

    m = np.asarray(m)
    if m.size == 0:
        return np.zeros(0)
    return np.asarray(scipy.linalg.svdvals(m), dtype=float)


def singular_values_via_gram(m: np.ndarray) -> np.ndarray:
    """
    Return the singular values from the smaller of the two Gram matrices.

    The eigenvalues of m^dagger m (or m m^dagger, whichever is smaller) are the squared
    singular values. This gives an independent route to the trace norm which does not
    rely on an SVD routine.

    Inputs:
        - m:
            The matrix.

    Returns:
        The singular values, in descending order.

    """

    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return np.zeros(0)
    gram = m.conj().T @ m if m.shape[1] <= m.shape[0] else m @ m.conj().T
    eigenvalues = scipy.linalg.eigvalsh((gram + gram.conj().T) / 2)

    # Eigenvalues below the round-off floor of the largest one are zero singular values.
    cutoff = max(m.shape) * np.finfo(float).eps * max(float(eigenvalues[-1]), 0.0)
    eigenvalues = np.where(eigenvalues > cutoff, eigenvalues, 0.0)
    return np.sqrt(eigenvalues)[::-1]


def trace_norm(m: np.ndarray) -> float:
    """
    Compute the trace (nuclear) norm, the sum of the singular values.

    Inputs:
        - m:
            Any rectangular complex matrix. An empty matrix has norm zero.

    """

    return float(np.sum(singular_values(m)))


def trace_norm_via_gram(m: np.ndarray) -> float:
    """Compute the trace norm through the eigenvalues of the Gram matrix."""

    return float(np.sum(singular_values_via_gram(m)))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    The Kronecker product, with the composite index (i_A, i_B) -> i_A * d_B + i_B.

    Inputs:
        - a:
            The left factor.
        - b:
            The right factor.

    """

    return np.kron(np.asarray(a), np.asarray(b))


def permute_subsystems(
    m: np.ndarray, dims: SubsystemDims | Sequence[int], order: Sequence[int]
) -> np.ndarray:
    """
    Reorder the tensor factors of a square matrix.

    Inputs:
        - m:
            The matrix acting on the composite space.
        - dims:
            The local dimensions in the current order.
        - order:
            The new order, given as the current indices of the subsystems, e.g.,
            (2, 0, 1) places the third subsystem first.

    Returns:
        The matrix acting on the reordered composite space.

    Raises:
        - DimensionMismatchError:
            Raised if the matrix or the order do not match the dimensions.

    """

    dims = _as_dims(dims)
    m = np.asarray(m)
    dims.check_matrix(m)
    if sorted(order) != list(range(len(dims))):
        raise DimensionMismatchError(
            f"Order {list(order)} is not a permutation of {len(dims)} subsystems."
        )

    n_subsystems = len(dims)
    tensor = m.reshape(dims.dims * 2)
    tensor = tensor.transpose(
        list(order) + [n_subsystems + index for index in order]
    )
    return tensor.reshape(dims.total, dims.total)


def partial_trace(
    m: np.ndarray, dims: SubsystemDims | Sequence[int], keep: Iterable[int]
) -> np.ndarray:
    """
    Trace out every subsystem not in `keep`.

    Inputs:
        - m:
            The square matrix acting on the composite space.
        - dims:
            The local dimensions.
        - keep:
            The indices of the subsystems to keep.

    Returns:
        The reduced matrix over the kept subsystems, in their original order.

    Raises:
        - DimensionMismatchError:
            Raised if the matrix does not match the dimensions or `keep` is empty or
            contains unknown indices.

    """

    dims = _as_dims(dims)
    m = np.asarray(m)
    dims.check_matrix(m)
    kept = sorted(set(keep))
    if len(kept) == 0 or any(index < 0 or index >= len(dims) for index in kept):
        raise DimensionMismatchError(
            f"Cannot keep subsystems {kept} of a {len(dims)}-partite system."
        )

    n_subsystems = len(dims)
    row_labels = [chr(ord("a") + index) for index in range(n_subsystems)]
    col_labels = [
        row_labels[index] if index not in kept else chr(ord("A") + index)
        for index in range(n_subsystems)
    ]
    output_labels = [row_labels[index] for index in kept] + [
        col_labels[index] for index in kept
    ]
    reduced = np.einsum(
        "".join(row_labels + col_labels) + "->" + "".join(output_labels),
        m.reshape(dims.dims * 2),
    )
    kept_dimension = functools.reduce(operator.mul, (dims[index] for index in kept), 1)
    return reduced.reshape(kept_dimension, kept_dimension)


def partial_transpose(
    m: np.ndarray, dims: SubsystemDims | Sequence[int], which: int
) -> np.ndarray:
    """
    Transpose the tensor factor `which` of a square matrix.

    Inputs:
        - m:
            The square matrix acting on the composite space.
        - dims:
            The local dimensions.
        - which:
            The index of the subsystem to transpose.

    Raises:
        - DimensionMismatchError:
            Raised if the matrix does not match the dimensions or the index is unknown.

    """

    dims = _as_dims(dims)
    m = np.asarray(m)
    dims.check_matrix(m)
    if not 0 <= which < len(dims):
        raise DimensionMismatchError(
            f"Cannot transpose subsystem {which} of a {len(dims)}-partite system."
        )

    n_subsystems = len(dims)
    axes = list(range(2 * n_subsystems))
    axes[which], axes[n_subsystems + which] = axes[n_subsystems + which], axes[which]
    return m.reshape(dims.dims * 2).transpose(axes).reshape(dims.total, dims.total)


def vec(m: np.ndarray) -> np.ndarray:
    """
    Stack the columns of a matrix into a single vector.

    Inputs:
        - m:
            The matrix.

    Returns:
        A one-dimensional array of length rows * cols.

    """

    return np.asarray(m).reshape(-1, order="F")


def realign(m: np.ndarray, dims: SubsystemDims | Sequence[int]) -> np.ndarray:
    """
    Realign a bipartite matrix so that R(a (x) b) = vec(a) vec(b)^T.

    With rho[(i, k), (j, l)] = a[i, j] b[k, l], the realigned entry at row i + j * d_A
    and column k + l * d_B is rho[(i, k), (j, l)].

    Inputs:
        - m:
            The square bipartite matrix.
        - dims:
            The two local dimensions, [d_A, d_B].

    Returns:
        The d_A^2 x d_B^2 realigned matrix.

    Raises:
        - DimensionMismatchError:
            Raised if the dimensions are not bipartite or do not match the matrix.

    """

    dims = _as_dims(dims)
    if len(dims) != 2:
        raise DimensionMismatchError(
            f"Realignment needs a bipartite system, got dimensions {list(dims.dims)}."
        )
    m = np.asarray(m)
    dims.check_matrix(m)

    d_a, d_b = dims.dims
    return (
        m.reshape(d_a, d_b, d_a, d_b)
        .transpose(2, 0, 3, 1)
        .reshape(d_a * d_a, d_b * d_b)
    )


def matrix_to_json(m: np.ndarray) -> dict[str, Any]:
    """
    Serialise a matrix into the JSON-compatible matrix format.

    Inputs:
        - m:
            The matrix to serialise.

    Returns:
        A `dict` with keys `rows`, `cols`, `re` and `im`.

    """

    m = np.asarray(m, dtype=complex)
    return {
        ROWS: int(m.shape[0]),
        COLS: int(m.shape[1]),
        REAL: m.real.tolist(),
        IMAG: m.imag.tolist(),
    }


def matrix_from_json(entry: dict[str, Any]) -> np.ndarray:
    """
    Parse a matrix from the JSON-compatible matrix format.

    Inputs:
        - entry:
            The parsed JSON `dict`. A missing `im` block is read as zero.

    Raises:
        - ShapeMismatchError:
            Raised if the declared and actual shapes disagree.

    """

    try:
        rows, cols = int(entry[ROWS]), int(entry[COLS])
        real = np.asarray(entry[REAL], dtype=float).reshape(rows, cols)
        imag = (
            np.asarray(entry[IMAG], dtype=float).reshape(rows, cols)
            if IMAG in entry
            else np.zeros((rows, cols))
        )
    except KeyError as caught_error:
        raise ShapeMismatchError(
            f"Missing key {caught_error} in matrix JSON entry."
        ) from None
    except ValueError:
        raise ShapeMismatchError(
            f"Matrix JSON entry does not hold a {entry.get(ROWS)}x{entry.get(COLS)} "
            "matrix."
        ) from None

    return real + 1j * imag
