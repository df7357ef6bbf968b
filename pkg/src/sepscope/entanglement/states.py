#!/usr/bin/python3.10
########################################################################################
# states.py - Density matrices and state families for sepscope.                       #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 14/06/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
states.py - The state module for sepscope.

Contains the validated :class:`DensityMatrix` along with the one-parameter families on
which entanglement criteria are tested:
    - isotropic states, mixing the maximally-entangled state with white noise;
    - the Tiles bound-entangled state and its mixture with white noise;
    - the rank-five PPT family built by mixing a Tiles vector into the Tiles state;
    - the Horodecki 3x3 bound-entangled family and its mixture with the identity;
    - seeded random separable states, and GHZ and product states for multipartite use.

The partial-transpose minimum eigenvalue is provided as the PPT baseline.

"""

import enum
import functools
import logging

from dataclasses import dataclass, field
from typing import Any, Sequence, Type, TypeVar

import numpy as np
import scipy.linalg

from ..__utils__ import (
    DimensionMismatchError,
    HERMITICITY_TOLERANCE,
    InvalidDensityMatrixError,
    InvalidDimensionError,
    ParamOutOfRangeError,
    PSD_TOLERANCE,
    TRACE_TOLERANCE,
    UnknownKindError,
)
from ..matcore import (
    kron,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    partial_transpose,
    SubsystemDims,
)

__all__ = (
    "bound_entangled_vectors",
    "build_family_state",
    "DensityMatrix",
    "ghz_state",
    "horodecki_3x3",
    "isotropic",
    "ppt_min_eigenvalue",
    "product_state",
    "random_separable",
    "rho1_lambda",
    "rho_y",
    "state_diagnostics",
    "StateFamily",
    "tiles_noise",
    "tiles_state",
    "tiles_vectors",
    "white_noise_mix",
)

# DIMS:
#   Keyword for the subsystem dimensions in the density-matrix JSON format.
DIMS: str = "dims"

# RANDOM_ALGORITHM:
#   Identifier of the sampling stream used by the random separable sampler.
RANDOM_ALGORITHM: str = "numpy-PCG64:dirichlet-weights:gaussian-haar-or-ginibre-factors"

# RANK_TOLERANCE:
#   Eigenvalues above this value count towards the rank of a state.
RANK_TOLERANCE: float = 1e-10

# Type variable for the density-matrix class.
D = TypeVar("D", bound="DensityMatrix")


@dataclass(frozen=True, kw_only=True, eq=False)
class DensityMatrix:
    """
    A validated density matrix on a composite Hilbert space.

    .. attribute:: dims
        The local dimensions of the subsystems.

    .. attribute:: mat
        The matrix itself, stored as a read-only complex array.

    .. attribute:: provenance
        Free-form information on how the state was generated, e.g., the seed and
        algorithm of a random sample.

    """

    dims: SubsystemDims
    mat: np.ndarray
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """
        Freeze the matrix and check the density-matrix invariants.

        Raises:
            - DimensionMismatchError:
                Raised if the matrix does not act on the declared subsystems.
            - InvalidDensityMatrixError:
                Raised if the matrix is not Hermitian, has non-unit trace or is not
                positive semidefinite.

        """

        dims = self.dims if isinstance(self.dims, SubsystemDims) else SubsystemDims(
            tuple(self.dims)
        )
        mat = np.array(self.mat, dtype=complex)
        dims.check_matrix(mat)

        hermiticity_residual = float(np.max(np.abs(mat - mat.conj().T)))
        if hermiticity_residual > HERMITICITY_TOLERANCE:
            raise InvalidDensityMatrixError(
                f"Density matrix is not Hermitian: residual {hermiticity_residual:.3e} "
                f"exceeds {HERMITICITY_TOLERANCE:.1e}."
            )

        trace = float(np.real(np.trace(mat)))
        if abs(trace - 1) > TRACE_TOLERANCE:
            raise InvalidDensityMatrixError(
                f"Density matrix has trace {trace:.15g}, expected 1."
            )

        min_eigenvalue = float(scipy.linalg.eigvalsh((mat + mat.conj().T) / 2)[0])
        if min_eigenvalue < -PSD_TOLERANCE:
            raise InvalidDensityMatrixError(
                f"Density matrix has a negative eigenvalue {min_eigenvalue:.3e}."
            )

        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mat", mat)

    @property
    def dimension(self) -> int:
        """The dimension of the composite space."""

        return self.dims.total

    @property
    def eigenvalues(self) -> np.ndarray:
        """The eigenvalues of the state, in ascending order."""

        return np.asarray(scipy.linalg.eigvalsh((self.mat + self.mat.conj().T) / 2))

    @property
    def purity(self) -> float:
        """The purity, tr(rho^2)."""

        return float(np.real(np.trace(self.mat @ self.mat)))

    @property
    def rank(self) -> int:
        """The numerical rank of the state."""

        return int(np.sum(self.eigenvalues > RANK_TOLERANCE))

    def reduced(self, keep: Sequence[int] | set[int]) -> "DensityMatrix":
        """
        Return the reduced state on the kept subsystems.

        Inputs:
            - keep:
                The indices of the subsystems to keep.

        """

        kept = sorted(set(keep))
        reduced = partial_trace(self.mat, self.dims, kept)
        return DensityMatrix(
            dims=SubsystemDims(tuple(self.dims[index] for index in kept)),
            mat=(reduced + reduced.conj().T) / 2,
        )

    def require_bipartite(self) -> tuple[int, int]:
        """
        Return (d_A, d_B) for a bipartite state.

        Raises:
            - DimensionMismatchError:
                Raised if the state is not bipartite.

        """

        if len(self.dims) != 2:
            raise DimensionMismatchError(
                f"Expected a bipartite state, got subsystem dimensions "
                f"{list(self.dims.dims)}."
            )
        return self.dims[0], self.dims[1]

    def to_json(self) -> dict[str, Any]:
        """Return the density-matrix JSON representation."""

        entry = matrix_to_json(self.mat)
        entry[DIMS] = list(self.dims.dims)
        if len(self.provenance) > 0:
            entry["provenance"] = self.provenance
        return entry

    @classmethod
    def from_json(cls: Type[D], entry: dict[str, Any]) -> D:
        """
        Parse a density matrix from its JSON representation.

        Inputs:
            - entry:
                The parsed JSON `dict`, a matrix entry with an additional `dims` key.

        Raises:
            - DimensionMismatchError:
                Raised if the `dims` key is missing or does not match the matrix.
            - InvalidDensityMatrixError:
                Raised if the matrix is not a valid density matrix.

        """

        if DIMS not in entry:
            raise DimensionMismatchError(
                "Density-matrix JSON entry is missing its 'dims' key."
            )

        return cls(
            dims=SubsystemDims(tuple(entry[DIMS])),
            mat=matrix_from_json(entry),
            provenance=dict(entry.get("provenance", {})),
        )


class StateFamily(enum.Enum):
    """
    Denotes a one-parameter family of states.

    - HORODECKI:
        The Horodecki 3x3 bound-entangled family, parametrised by upsilon.

    - ISOTROPIC:
        Isotropic states of a given local dimension, parametrised by q.

    - RHO1:
        The rank-five PPT family, parametrised by lambda.

    - RHO_Y:
        The Horodecki state of a fixed upsilon mixed with the identity, parametrised by
        y.

    - TILES_NOISE:
        The Tiles state mixed with white noise, parametrised by p.

    """

    HORODECKI: str = "horodecki"
    ISOTROPIC: str = "isotropic"
    RHO1: str = "rho1"
    RHO_Y: str = "rho-y"
    TILES_NOISE: str = "tiles-noise"

    @classmethod
    def from_name(cls, name: "str | StateFamily") -> "StateFamily":
        """
        Parse a family from its name.

        Raises:
            - UnknownKindError:
                Raised if the name is not a known family.

        """

        if isinstance(name, StateFamily):
            return name
        try:
            return cls(name)
        except ValueError:
            raise UnknownKindError(
                f"Unknown state family '{name}', expected one of "
                f"{', '.join(family.value for family in cls)}."
            ) from None


def _check_unit_interval(name: str, value: float) -> None:
    """Raise a :class:`ParamOutOfRangeError` if `value` lies outside [0, 1]."""

    if not 0 <= value <= 1:
        raise ParamOutOfRangeError(f"Parameter {name}={value} must lie in [0, 1].")


def _projector(vector: np.ndarray) -> np.ndarray:
    """Return the rank-one projector onto a (normalised) vector."""

    return np.outer(vector, vector.conj())


def _ket(dim: int, *amplitudes: tuple[int, float]) -> np.ndarray:
    """Return a vector of C^dim with the given (index, amplitude) entries."""

    vector = np.zeros(dim)
    for index, amplitude in amplitudes:
        vector[index] = amplitude
    return vector


def isotropic(dim: int, q: float) -> DensityMatrix:
    """
    Return the isotropic state q |Phi+><Phi+| + (1 - q) I / d^2.

    Inputs:
        - dim:
            The local dimension, d.
        - q:
            The weight of the maximally-entangled state, in [0, 1].

    Raises:
        - InvalidDimensionError:
            Raised if d < 2.
        - ParamOutOfRangeError:
            Raised if q lies outside [0, 1].

    """

    if dim < 2:
        raise InvalidDimensionError(f"Isotropic states need d >= 2, got {dim}.")
    _check_unit_interval("q", q)

    phi_plus = np.eye(dim).reshape(-1) / np.sqrt(dim)
    return DensityMatrix(
        dims=SubsystemDims((dim, dim)),
        mat=q * _projector(phi_plus) + (1 - q) * np.eye(dim**2) / dim**2,
    )


def tiles_vectors() -> list[np.ndarray]:
    """
    Return the five orthonormal Tiles unextendible-product-basis vectors of C^3 x C^3.

    The last vector is (|0> + |1> + |2>) (|0> + |1> + |2>) / 3.

    """

    minus_01 = _ket(3, (0, 1), (1, -1)) / np.sqrt(2)
    minus_12 = _ket(3, (1, 1), (2, -1)) / np.sqrt(2)
    uniform = np.ones(3) / np.sqrt(3)

    return [
        kron(_ket(3, (0, 1)), minus_01),
        kron(minus_01, _ket(3, (2, 1))),
        kron(_ket(3, (2, 1)), minus_12),
        kron(minus_12, _ket(3, (0, 1))),
        kron(uniform, uniform),
    ]


def tiles_state() -> DensityMatrix:
    """Return the rank-four PPT-entangled Tiles state (I - sum_i |psi_i><psi_i|) / 4."""

    mat = (np.eye(9) - sum(_projector(vector) for vector in tiles_vectors())) / 4
    return DensityMatrix(dims=SubsystemDims((3, 3)), mat=mat)


def white_noise_mix(rho: DensityMatrix, p: float) -> DensityMatrix:
    """
    Mix a state with white noise, (1 - p) I / D + p rho.

    Inputs:
        - rho:
            The state.
        - p:
            The weight of the state, in [0, 1].

    Raises:
        - ParamOutOfRangeError:
            Raised if p lies outside [0, 1].

    """

    _check_unit_interval("p", p)
    return DensityMatrix(
        dims=rho.dims,
        mat=(1 - p) * np.eye(rho.dimension) / rho.dimension + p * rho.mat,
    )


def tiles_noise(p: float) -> DensityMatrix:
    """Return the Tiles state mixed with white noise, (1 - p) I / 9 + p rho_tiles."""

    return white_noise_mix(tiles_state(), p)


def bound_entangled_vectors() -> list[np.ndarray]:
    """
    Return the five vectors omega_1, ..., omega_5 defining the rank-five PPT family.

    These are the Tiles vectors, reordered so that omega_1 = |2> (|1> - |2>) / sqrt(2).

    """

    psi = tiles_vectors()
    return [psi[2], psi[0], psi[1], psi[3], psi[4]]


def rho1_lambda(lam: float) -> DensityMatrix:
    """
    Return lambda |omega_1><omega_1| + (1 - lambda) rho_BE.

    Here rho_BE = (I - sum_i |omega_i><omega_i|) / 4 is the Tiles bound-entangled state.

    Inputs:
        - lam:
            The weight of |omega_1>, in [0, 1].

    Raises:
        - ParamOutOfRangeError:
            Raised if lambda lies outside [0, 1].

    """

    _check_unit_interval("lambda", lam)
    omegas = bound_entangled_vectors()
    rho_be = (np.eye(9) - sum(_projector(vector) for vector in omegas)) / 4
    return DensityMatrix(
        dims=SubsystemDims((3, 3)),
        mat=lam * _projector(omegas[0]) + (1 - lam) * rho_be,
    )


def horodecki_3x3(upsilon: float) -> DensityMatrix:
    """
    Return the Horodecki 3x3 bound-entangled state for 0 < upsilon < 1.

    Inputs:
        - upsilon:
            The family parameter.

    Raises:
        - ParamOutOfRangeError:
            Raised if upsilon lies outside (0, 1).

    """

    if not 0 < upsilon < 1:
        raise ParamOutOfRangeError(f"Parameter upsilon={upsilon} must lie in (0, 1).")

    mat = upsilon * np.eye(9)
    for row in (0, 4, 8):
        for col in (0, 4, 8):
            mat[row, col] = upsilon

    # The |2>|0>, |2>|2> block replaces the identity there.
    mat[6, 6] = mat[8, 8] = (1 + upsilon) / 2
    mat[6, 8] = mat[8, 6] = np.sqrt(1 - upsilon**2) / 2

    return DensityMatrix(dims=SubsystemDims((3, 3)), mat=mat / (1 + 8 * upsilon))


def rho_y(upsilon: float, y: float) -> DensityMatrix:
    """
    Return the Horodecki state mixed with the identity, y rho_upsilon + (1 - y) I / 9.

    Raises:
        - ParamOutOfRangeError:
            Raised if y lies outside [0, 1] or upsilon outside (0, 1).

    """

    _check_unit_interval("y", y)
    rho_upsilon = horodecki_3x3(upsilon)
    return DensityMatrix(
        dims=rho_upsilon.dims, mat=y * rho_upsilon.mat + (1 - y) * np.eye(9) / 9
    )


def ghz_state(n_parties: int, dim: int = 2) -> DensityMatrix:
    """
    Return the GHZ state (|0...0> + ... + |d-1...d-1>) / sqrt(d) of n parties.

    Raises:
        - InvalidDimensionError:
            Raised if there are fewer than two parties or d < 2.

    """

    if n_parties < 2:
        raise InvalidDimensionError(
            f"A GHZ state needs at least 2 parties, got {n_parties}."
        )
    dims = SubsystemDims((dim,) * n_parties)

    vector = np.zeros(dims.total)
    stride = sum(dim**power for power in range(n_parties))
    vector[np.arange(dim) * stride] = 1 / np.sqrt(dim)

    return DensityMatrix(dims=dims, mat=_projector(vector))


def product_state(factors: Sequence[DensityMatrix | np.ndarray]) -> DensityMatrix:
    """
    Return the tensor product of single-system states.

    Inputs:
        - factors:
            The local states, either as :class:`DensityMatrix` instances or arrays.

    """

    matrices = [
        factor.mat if isinstance(factor, DensityMatrix) else np.asarray(factor)
        for factor in factors
    ]
    return DensityMatrix(
        dims=SubsystemDims(tuple(matrix.shape[0] for matrix in matrices)),
        mat=functools.reduce(kron, matrices),
    )


def _random_factor(rng: np.random.Generator, dim: int, pure: bool) -> np.ndarray:
    """Sample a Haar-random pure state or a Ginibre-random mixed state of C^dim."""

    ginibre = rng.standard_normal((dim, 1 if pure else dim)) + 1j * rng.standard_normal(
        (dim, 1 if pure else dim)
    )
    factor = ginibre @ ginibre.conj().T
    factor = factor / np.real(np.trace(factor))
    return (factor + factor.conj().T) / 2


def random_separable(
    dims: SubsystemDims | Sequence[int],
    terms: int,
    seed: int,
    *,
    pure: bool = True,
) -> DensityMatrix:
    """
    Sample a separable state sum_i p_i rho_i^A (x) rho_i^B (x) ...

    The weights are Dirichlet distributed and the local factors are either Haar-random
    pure states or Ginibre-random mixed states, drawn from a PCG64 stream seeded with
    `seed` so that samples are reproducible.

    Inputs:
        - dims:
            The local dimensions.
        - terms:
            The number of product terms.
        - seed:
            The seed of the random stream.
        - pure:
            Whether the local factors are pure.

    Raises:
        - ParamOutOfRangeError:
            Raised if fewer than one term is requested.

    """

    if terms < 1:
        raise ParamOutOfRangeError(
            f"A separable sample needs at least 1 term, got {terms}."
        )

    dims = dims if isinstance(dims, SubsystemDims) else SubsystemDims(tuple(dims))
    rng = np.random.Generator(np.random.PCG64(seed))
    weights = rng.dirichlet(np.ones(terms))

    mat = np.zeros((dims.total, dims.total), dtype=complex)
    for weight in weights:
        mat += weight * functools.reduce(
            kron, (_random_factor(rng, dim, pure) for dim in dims)
        )

    return DensityMatrix(
        dims=dims,
        mat=(mat + mat.conj().T) / 2 / np.real(np.trace(mat)),
        provenance={
            "algorithm": RANDOM_ALGORITHM,
            "pure": pure,
            "seed": seed,
            "terms": terms,
        },
    )


def ppt_min_eigenvalue(rho: DensityMatrix, which: int = 1) -> float:
    """
    Return the minimum eigenvalue of the partial transpose of a bipartite state.

    A negative value certifies entanglement (the state is NPT).

    Inputs:
        - rho:
            The bipartite state.
        - which:
            The subsystem to transpose.

    Raises:
        - DimensionMismatchError:
            Raised if the state is not bipartite.

    """

    rho.require_bipartite()
    transposed = partial_transpose(rho.mat, rho.dims, which)
    return float(scipy.linalg.eigvalsh((transposed + transposed.conj().T) / 2)[0])


def state_diagnostics(rho: DensityMatrix) -> dict[str, Any]:
    """
    Return the invariant diagnostics of a state, along with its PPT verdict.

    Inputs:
        - rho:
            The state to diagnose.

    """

    diagnostics: dict[str, Any] = {
        "dims": list(rho.dims.dims),
        "hermiticity_residual": float(np.max(np.abs(rho.mat - rho.mat.conj().T))),
        "trace": float(np.real(np.trace(rho.mat))),
        "min_eigenvalue": float(rho.eigenvalues[0]),
        "rank": rho.rank,
        "purity": rho.purity,
    }
    if len(rho.dims) == 2:
        min_pt_eigenvalue = ppt_min_eigenvalue(rho)
        diagnostics["ppt_min_eigenvalue"] = min_pt_eigenvalue
        diagnostics["ppt"] = min_pt_eigenvalue >= -PSD_TOLERANCE

    logging.getLogger(__name__).debug("State diagnostics: %s", diagnostics)
    return diagnostics


def build_family_state(
    family: StateFamily | str, param: float, **fixed: Any
) -> DensityMatrix:
    """
    Build the member of a one-parameter family at a given parameter value.

    Inputs:
        - family:
            The family.
        - param:
            The value of the scanned parameter (q, p, lambda, upsilon or y).
        - fixed:
            The fixed secondary parameters: `dim` for isotropic states, and `upsilon`
            for the rho-y family.

    Raises:
        - ParamOutOfRangeError:
            Raised if a parameter lies outside its domain or a fixed parameter is
            missing.

    """

    family = StateFamily.from_name(family)
    try:
        match family:
            case StateFamily.ISOTROPIC:
                return isotropic(int(fixed.get("dim", 3)), param)
            case StateFamily.TILES_NOISE:
                return tiles_noise(param)
            case StateFamily.RHO1:
                return rho1_lambda(param)
            case StateFamily.HORODECKI:
                return horodecki_3x3(param)
            case StateFamily.RHO_Y:
                return rho_y(float(fixed["upsilon"]), param)
    except KeyError as caught_error:
        raise ParamOutOfRangeError(
            f"Family '{family.value}' needs the fixed parameter {caught_error}."
        ) from None

    raise ParamOutOfRangeError(f"Unhandled state family '{family.value}'.")
