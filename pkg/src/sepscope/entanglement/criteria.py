#!/usr/bin/python3.10
########################################################################################
# criteria.py - Separability criteria for sepscope.                                    #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 19/06/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
criteria.py - The criteria module for sepscope.

Evaluates the trace-norm separability criteria built from symmetric (N, M)-POVMs. For a
bipartite state, the probability matrix P has entries tr[(E_{alpha, k} (x) E_{beta, j})
rho] and, with the local outcome vectors tau and sigma, is bordered as

    | mu nu J_l          mu omega_l(sigma)^T |
    | nu omega_l(tau)    P                   |,

where J_l is the l x l all-ones matrix and omega_l(X) = (X, ..., X) repeats X as l
columns. Every separable state satisfies

    ||bordered||_tr <= sqrt((l mu^2 + f_A) (l nu^2 + f_B)),

with the per-side factor f = (d - 1)(d^2 + M^2 x) / (d M (M - 1)) bounding the
probability purity of any single-system state. The GSIC and MUM closed forms, the
multipartite one-versus-rest cuts and the PPT, realignment and Q-matrix baselines are
provided alongside.

A criterion is reported as a :class:`CriterionVerdict`: it detects entanglement when
the margin, lhs - rhs, exceeds the detection tolerance.

"""

import functools
import logging
import operator

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from ..__utils__ import (
    DETECTION_TOLERANCE,
    DimensionMismatchError,
    InvalidPartitionError,
    ParamOutOfRangeError,
    ShapeMismatchError,
    UnknownKindError,
)
from ..matcore import (
    partial_trace,
    permute_subsystems,
    realign,
    SubsystemDims,
    trace_norm,
    vec,
)
from ..measurement.povm import PovmKind, SymmetricPovm
from .states import DensityMatrix, ppt_min_eigenvalue

__all__ = (
    "augmented_matrix",
    "AugmentedProbabilityMatrix",
    "Bipartition",
    "corollary_bounds",
    "CriterionVerdict",
    "evaluate_all_bipartitions",
    "evaluate_bipartition",
    "evaluate_corollary",
    "evaluate_p_only",
    "evaluate_theorem1",
    "marginal_vector",
    "MarginalVector",
    "ppt_criterion",
    "probability_matrix",
    "probability_purity",
    "ProbabilityMatrix",
    "purity_bound",
    "realignment_criterion",
    "shi_q_matrix",
    "sun_q_matrix",
    "theorem1_bound",
)

# BIPARTITION:
#   Criterion id of the one-versus-rest multipartite criterion.
BIPARTITION: str = "bipartition"

# P_ONLY:
#   Criterion id of the unbordered, mu = nu = 0, criterion.
P_ONLY: str = "p-only"

# PPT:
#   Criterion id of the positive-partial-transpose criterion.
PPT: str = "ppt"

# REALIGN:
#   Criterion id of the realignment criterion.
REALIGN: str = "realign"

# SHI:
#   Criterion id of the Q-matrix criterion bordered once.
SHI: str = "shi"

# SUN:
#   Criterion id of the l-fold bordered Q-matrix criterion.
SUN: str = "sun"

# THEOREM_1:
#   Criterion id of the bordered probability-matrix criterion.
THEOREM_1: str = "thm1"


@dataclass(kw_only=True)
class ProbabilityMatrix:
    """
    The joint outcome probabilities of local (N, M)-POVMs on a state.

    .. attribute:: entries
        The real matrix of probabilities, with rows indexed (alpha - 1) M_A + k and
        columns (beta - 1) M_B + j.

    .. attribute:: provenance
        The identifiers of the POVMs measured on each side.

    """

    entries: np.ndarray
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        """The shape of the matrix."""

        return self.entries.shape  # type: ignore[return-value]


@dataclass(kw_only=True)
class MarginalVector:
    """
    The local outcome probabilities tr(E_{alpha, k} rho_X), in row-index order.

    .. attribute:: entries
        The probabilities.

    """

    entries: np.ndarray

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(kw_only=True)
class AugmentedProbabilityMatrix:
    """
    A probability matrix bordered by its marginals.

    .. attribute:: l
        The number of bordering rows and columns.

    .. attribute:: matrix
        The (l + N_A M_A) x (l + N_B M_B) bordered matrix.

    .. attribute:: mu
        The weight of the row border.

    .. attribute:: nu
        The weight of the column border.

    """

    l: int
    matrix: np.ndarray
    mu: float
    nu: float

    @property
    def trace_norm(self) -> float:
        """The trace norm of the bordered matrix."""

        return trace_norm(self.matrix)


@dataclass(kw_only=True)
class CriterionVerdict:
    """
    The outcome of evaluating a separability criterion on a state.

    .. attribute:: criterion
        The criterion id, e.g., "thm1" or "realign".

    .. attribute:: lhs
        The evaluated functional, e.g., a trace norm.

    .. attribute:: rhs
        The bound obeyed by every separable state.

    .. attribute:: metadata
        Additional information: the POVMs, conventions and any assumed parameters.

    .. attribute:: params
        The parameters of the criterion, e.g., mu, nu and l.

    .. attribute:: tolerance
        The amount by which the margin must exceed zero for a detection.

    """

    criterion: str
    lhs: float
    rhs: float
    metadata: dict[str, Any] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)
    tolerance: float = DETECTION_TOLERANCE

    @property
    def detected(self) -> bool:
        """Whether the criterion certifies entanglement."""

        return self.margin > self.tolerance

    @property
    def margin(self) -> float:
        """The violation of the bound, lhs - rhs."""

        return self.lhs - self.rhs

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-compatible representation of the verdict."""

        return {
            "criterion": self.criterion,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "margin": float(self.margin),
            "detected": bool(self.detected),
            "params": self.params,
            "metadata": self.metadata,
        }


@dataclass(frozen=True)
class Bipartition:
    """
    A one-versus-rest cut of an N-partite system.

    .. attribute:: q
        The index of the singled-out subsystem.

    .. attribute:: remainder
        The remaining subsystems, in ascending order.

    """

    q: int
    remainder: tuple[int, ...]

    def __post_init__(self) -> None:
        """
        Check that the cut partitions {0, ..., N - 1}.

        Raises:
            - InvalidPartitionError:
                Raised if the remainder is empty, unsorted, repeated or contains q.

        """

        object.__setattr__(self, "remainder", tuple(self.remainder))
        n_parties = len(self.remainder) + 1
        if (
            len(self.remainder) == 0
            or list(self.remainder) != sorted(set(self.remainder))
            or sorted((self.q, *self.remainder)) != list(range(n_parties))
        ):
            raise InvalidPartitionError(
                f"Subsystem {self.q} versus {list(self.remainder)} is not a "
                "one-versus-rest partition of the subsystems."
            )

    @classmethod
    def for_subsystem(cls, q: int, n_parties: int) -> "Bipartition":
        """
        Return the cut singling out subsystem `q` of `n_parties`.

        Raises:
            - InvalidPartitionError:
                Raised if q is not a subsystem or there are fewer than two.

        """

        if n_parties < 2 or not 0 <= q < n_parties:
            raise InvalidPartitionError(
                f"Cannot single out subsystem {q} of a {n_parties}-partite system."
            )
        return cls(q, tuple(index for index in range(n_parties) if index != q))

    @property
    def n_parties(self) -> int:
        """The number of subsystems, N."""

        return len(self.remainder) + 1

    @property
    def order(self) -> list[int]:
        """The subsystem order which brings q to the front."""

        return [self.q, *self.remainder]


def _operator_stack(povm: SymmetricPovm) -> np.ndarray:
    """Return the POVM operators as an (N M, d, d) array in row-index order."""

    return np.asarray(povm.flat_operators, dtype=complex)


def _product_stack(stacks: Sequence[np.ndarray]) -> np.ndarray:
    """
    Combine operator stacks into the stack of their tensor products.

    The outcome tuples are ordered lexicographically, with the first stack the most
    significant.

    """

    def _combine(first: np.ndarray, second: np.ndarray) -> np.ndarray:
        n_first, dim_first = first.shape[0], first.shape[1]
        n_second, dim_second = second.shape[0], second.shape[1]
        return np.einsum("aij,bkl->abikjl", first, second).reshape(
            n_first * n_second, dim_first * dim_second, dim_first * dim_second
        )

    return functools.reduce(_combine, stacks)


def _joint_probabilities(
    mat: np.ndarray, dim_a: int, dim_b: int, stack_a: np.ndarray, stack_b: np.ndarray
) -> np.ndarray:
    """Return tr[(E_a (x) E_b) rho] for every pair of operators in the two stacks."""

    blocks = mat.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.real(np.einsum("aki,blj,ijkl->ab", stack_a, stack_b, blocks))


def _local_probabilities(mat: np.ndarray, stack: np.ndarray) -> np.ndarray:
    """Return tr(E_a rho) for every operator in the stack."""

    return np.real(np.einsum("aji,ij->a", stack, mat))


def _check_povm_dim(povm: SymmetricPovm, dim: int, label: str = "POVM") -> None:
    """Raise a :class:`DimensionMismatchError` if the POVM does not act on C^dim."""

    if povm.dim != dim:
        raise DimensionMismatchError(
            f"{label} acts on d={povm.dim} but the state has dimension {dim}."
        )


def probability_matrix(
    rho: DensityMatrix, povm_a: SymmetricPovm, povm_b: SymmetricPovm
) -> ProbabilityMatrix:
    """
    Compute the probability matrix of a bipartite state.

    Inputs:
        - rho:
            The bipartite state.
        - povm_a:
            The POVM measured on the first subsystem.
        - povm_b:
            The POVM measured on the second subsystem.

    Returns:
        The (N_A M_A) x (N_B M_B) matrix of joint probabilities.

    Raises:
        - DimensionMismatchError:
            Raised if the state is not bipartite or the POVMs do not match its
            subsystems.

    """

    dim_a, dim_b = rho.require_bipartite()
    _check_povm_dim(povm_a, dim_a, "POVM A")
    _check_povm_dim(povm_b, dim_b, "POVM B")

    return ProbabilityMatrix(
        entries=_joint_probabilities(
            rho.mat, dim_a, dim_b, _operator_stack(povm_a), _operator_stack(povm_b)
        ),
        provenance={"povm_a": povm_a.identifier, "povm_b": povm_b.identifier},
    )


def marginal_vector(rho_reduced: DensityMatrix, povm: SymmetricPovm) -> MarginalVector:
    """
    Compute the outcome probabilities of a POVM on a single-system state.

    Inputs:
        - rho_reduced:
            The single-system, e.g., reduced, state.
        - povm:
            The POVM.

    Raises:
        - DimensionMismatchError:
            Raised if the POVM does not act on the state.

    """

    _check_povm_dim(povm, rho_reduced.dimension)
    return MarginalVector(
        entries=_local_probabilities(rho_reduced.mat, _operator_stack(povm))
    )


def _border(
    core: np.ndarray,
    tau: np.ndarray,
    sigma: np.ndarray,
    mu: float,
    nu: float,
    l: int,
) -> np.ndarray:
    """Border `core` with l copies of the weighted vectors tau and sigma."""

    if l < 1:
        raise ParamOutOfRangeError(f"The border size l must be at least 1, got {l}.")
    if len(tau) != core.shape[0] or len(sigma) != core.shape[1]:
        raise ShapeMismatchError(
            f"Marginals of lengths {len(tau)} and {len(sigma)} cannot border a matrix "
            f"of shape {core.shape}."
        )

    return np.block(
        [
            [mu * nu * np.ones((l, l)), mu * np.tile(sigma, (l, 1))],
            [nu * np.tile(np.reshape(tau, (-1, 1)), (1, l)), core],
        ]
    )


def augmented_matrix(
    probabilities: ProbabilityMatrix | np.ndarray,
    tau: MarginalVector | np.ndarray,
    sigma: MarginalVector | np.ndarray,
    mu: float,
    nu: float,
    l: int,
) -> AugmentedProbabilityMatrix:
    """
    Border a probability matrix with its marginals.

    Inputs:
        - probabilities:
            The probability matrix, P.
        - tau:
            The outcome probabilities of the first subsystem, matching the rows of P.
        - sigma:
            The outcome probabilities of the second subsystem, matching the columns.
        - mu:
            The weight of the row border.
        - nu:
            The weight of the column border.
        - l:
            The number of bordering rows and columns.

    Raises:
        - ShapeMismatchError:
            Raised if the marginals do not match the matrix.
        - ParamOutOfRangeError:
            Raised if l < 1.

    """

    core = (
        probabilities.entries
        if isinstance(probabilities, ProbabilityMatrix)
        else np.asarray(probabilities)
    )
    tau = tau.entries if isinstance(tau, MarginalVector) else np.asarray(tau)
    sigma = sigma.entries if isinstance(sigma, MarginalVector) else np.asarray(sigma)

    return AugmentedProbabilityMatrix(
        l=l, matrix=_border(core, tau, sigma, mu, nu, l), mu=mu, nu=nu
    )


def purity_bound(dim: int, n_outcomes: int, x: float) -> float:
    """
    Return the bound on the probability purity of any state of C^dim.

    Inputs:
        - dim:
            The dimension, d.
        - n_outcomes:
            The number of outcomes of each POVM, M.
        - x:
            The efficiency parameter.

    Returns:
        (d - 1) (d^2 + M^2 x) / (d M (M - 1)).

    """

    return (
        (dim - 1)
        * (dim**2 + n_outcomes**2 * x)
        / (dim * n_outcomes * (n_outcomes - 1))
    )


def theorem1_bound(
    dim_a: int,
    n_outcomes_a: int,
    x_a: float,
    dim_b: int,
    n_outcomes_b: int,
    x_b: float,
    mu: float,
    nu: float,
    l: int,
) -> float:
    """
    Return the bound on the bordered trace norm of a separable bipartite state.

    Returns:
        sqrt((l mu^2 + f_A) (l nu^2 + f_B)), with f the per-side purity bound.

    """

    return float(
        np.sqrt(
            (l * mu**2 + purity_bound(dim_a, n_outcomes_a, x_a))
            * (l * nu**2 + purity_bound(dim_b, n_outcomes_b, x_b))
        )
    )


def _corollary_factor(kind: PovmKind, dim: int, parameter: float) -> float:
    """Return the closed-form per-side factor of a GSIC or MUM measurement."""

    match kind:
        case PovmKind.GSIC:
            return (parameter * dim**2 + 1) / (dim * (dim + 1))
        case PovmKind.MUM:
            return 1 + parameter

    raise UnknownKindError(
        f"Closed-form bounds exist for GSIC and MUM measurements, not '{kind.value}'."
    )


def corollary_bounds(
    kind: PovmKind | str,
    dim_a: int,
    parameter_a: float,
    dim_b: int,
    parameter_b: float,
    mu: float,
    nu: float,
    l: int,
) -> float:
    """
    Return the closed-form bound for GSIC or MUM measurements on both sides.

    Inputs:
        - kind:
            The measurement family, "gsic" or "mum".
        - dim_a, dim_b:
            The local dimensions.
        - parameter_a, parameter_b:
            The efficiency parameters, a for GSICs and kappa for MUMs.
        - mu, nu, l:
            The border weights and size.

    Returns:
        sqrt((l mu^2 + (a_A d_A^2 + 1) / (d_A (d_A + 1))) (...)) for GSICs and
        sqrt((l mu^2 + 1 + kappa_A) (l nu^2 + 1 + kappa_B)) for MUMs.

    Raises:
        - UnknownKindError:
            Raised if the kind has no closed form.

    """

    kind = PovmKind.from_name(kind)
    return float(
        np.sqrt(
            (l * mu**2 + _corollary_factor(kind, dim_a, parameter_a))
            * (l * nu**2 + _corollary_factor(kind, dim_b, parameter_b))
        )
    )


def _bordered_verdict(
    criterion: str,
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    mu: float,
    nu: float,
    l: int,
    rhs: float,
    tolerance: float,
) -> CriterionVerdict:
    """Evaluate the bordered trace norm of a bipartite state against `rhs`."""

    probabilities = probability_matrix(rho, povm_a, povm_b)
    augmented = augmented_matrix(
        probabilities,
        marginal_vector(rho.reduced([0]), povm_a),
        marginal_vector(rho.reduced([1]), povm_b),
        mu,
        nu,
        l,
    )

    return CriterionVerdict(
        criterion=criterion,
        lhs=augmented.trace_norm,
        rhs=rhs,
        metadata={**probabilities.provenance, "ordering": "group-major"},
        params={"mu": mu, "nu": nu, "l": l},
        tolerance=tolerance,
    )


def evaluate_theorem1(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    mu: float = 0,
    nu: float = 0,
    l: int = 1,
    *,
    tolerance: float = DETECTION_TOLERANCE,
) -> CriterionVerdict:
    """
    Evaluate the bordered probability-matrix criterion on a bipartite state.

    Inputs:
        - rho:
            The bipartite state.
        - povm_a, povm_b:
            The local POVMs.
        - mu, nu:
            The border weights, any reals.
        - l:
            The number of bordering rows and columns.
        - tolerance:
            The amount by which the margin must exceed zero for a detection.

    Returns:
        The verdict, whose detection certifies that the state is entangled.

    """

    rhs = theorem1_bound(
        povm_a.dim,
        povm_a.n_outcomes,
        povm_a.x,
        povm_b.dim,
        povm_b.n_outcomes,
        povm_b.x,
        mu,
        nu,
        l,
    )
    return _bordered_verdict(
        THEOREM_1, rho, povm_a, povm_b, mu, nu, l, rhs, tolerance
    )


def evaluate_p_only(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    *,
    tolerance: float = DETECTION_TOLERANCE,
) -> CriterionVerdict:
    """
    Evaluate the unbordered criterion, ||P||_tr <= sqrt(f_A f_B).

    This is the bordered criterion at mu = nu = 0, whose zero borders leave the trace
    norm of P unchanged.

    """

    probabilities = probability_matrix(rho, povm_a, povm_b)
    return CriterionVerdict(
        criterion=P_ONLY,
        lhs=trace_norm(probabilities.entries),
        rhs=theorem1_bound(
            povm_a.dim,
            povm_a.n_outcomes,
            povm_a.x,
            povm_b.dim,
            povm_b.n_outcomes,
            povm_b.x,
            0,
            0,
            1,
        ),
        metadata={**probabilities.provenance, "ordering": "group-major"},
        tolerance=tolerance,
    )


def evaluate_corollary(
    rho: DensityMatrix,
    povm_a: SymmetricPovm,
    povm_b: SymmetricPovm,
    mu: float = 0,
    nu: float = 0,
    l: int = 1,
    *,
    tolerance: float = DETECTION_TOLERANCE,
) -> CriterionVerdict:
    """
    Evaluate the bordered criterion using the closed-form GSIC or MUM bound.

    Raises:
        - UnknownKindError:
            Raised if the two POVMs are not both GSICs or both MUMs.

    """

    if povm_a.kind != povm_b.kind or povm_a.kind == PovmKind.GENERAL:
        raise UnknownKindError(
            "Closed-form bounds need two GSIC or two MUM measurements, got "
            f"'{povm_a.kind.value}' and '{povm_b.kind.value}'."
        )

    rhs = corollary_bounds(
        povm_a.kind, povm_a.dim, povm_a.x, povm_b.dim, povm_b.x, mu, nu, l
    )
    return _bordered_verdict(
        povm_a.kind.value, rho, povm_a, povm_b, mu, nu, l, rhs, tolerance
    )


def probability_purity(rho_single: DensityMatrix, povm: SymmetricPovm) -> float:
    """
    Return the sum of the squared outcome probabilities, sum tr(rho E_{alpha, k})^2.

    For every state this is at most :func:`purity_bound`.

    Raises:
        - DimensionMismatchError:
            Raised if the POVM does not act on the state.

    """

    return float(np.sum(marginal_vector(rho_single, povm).entries ** 2))


def _q_matrix_verdict(
    criterion: str,
    rho: DensityMatrix,
    alpha: float,
    beta: float,
    l: int,
    tolerance: float,
) -> CriterionVerdict:
    """Evaluate the realigned matrix bordered by the vectorised marginals."""

    rho.require_bipartite()
    bordered = _border(
        realign(rho.mat, rho.dims),
        vec(rho.reduced([0]).mat),
        vec(rho.reduced([1]).mat),
        alpha,
        beta,
        l,
    )

    return CriterionVerdict(
        criterion=criterion,
        lhs=trace_norm(bordered),
        rhs=float(np.sqrt((l * alpha**2 + 1) * (l * beta**2 + 1))),
        metadata={"vec": "column-stacking", "realign": "R(a (x) b) = vec(a) vec(b)^T"},
        params={"alpha": alpha, "beta": beta, "l": l},
        tolerance=tolerance,
    )


def shi_q_matrix(
    rho: DensityMatrix,
    alpha: float,
    beta: float,
    *,
    tolerance: float = DETECTION_TOLERANCE,
) -> CriterionVerdict:
    """
    Evaluate the Q-matrix criterion, ||Q_{alpha, beta}||_tr <= sqrt((a^2 + 1)(b^2 + 1)).

    The matrix is the realignment R(rho) bordered by alpha vec(rho_B)^T above, beta
    vec(rho_A) to the left and alpha beta in the corner.

    Raises:
        - DimensionMismatchError:
            Raised if the state is not bipartite.

    """

    return _q_matrix_verdict(SHI, rho, alpha, beta, 1, tolerance)


def sun_q_matrix(
    rho: DensityMatrix,
    alpha: float,
    beta: float,
    l: int,
    *,
    tolerance: float = DETECTION_TOLERANCE,
) -> CriterionVerdict:
    """
    Evaluate the l-fold bordered Q-matrix criterion.

    The bound is sqrt((l alpha^2 + 1)(l beta^2 + 1)); at l = 1 this is
    :func:`shi_q_matrix`.

    Raises:
        - DimensionMismatchError:
            Raised if the state is not bipartite.

    """

    return _q_matrix_verdict(SUN, rho, alpha, beta, l, tolerance)


def realignment_criterion(
    rho: DensityMatrix, *, tolerance: float = DETECTION_TOLERANCE
) -> CriterionVerdict:
    """Evaluate the realignment criterion, ||R(rho)||_tr <= 1."""

    rho.require_bipartite()
    return CriterionVerdict(
        criterion=REALIGN,
        lhs=trace_norm(realign(rho.mat, rho.dims)),
        rhs=1.0,
        metadata={"realign": "R(a (x) b) = vec(a) vec(b)^T"},
        tolerance=tolerance,
    )


def ppt_criterion(
    rho: DensityMatrix, *, tolerance: float = DETECTION_TOLERANCE
) -> CriterionVerdict:
    """Evaluate the PPT criterion, reporting -lambda_min(rho^T_B) against zero."""

    return CriterionVerdict(
        criterion=PPT,
        lhs=-ppt_min_eigenvalue(rho),
        rhs=0.0,
        metadata={"transposed": 1},
        tolerance=tolerance,
    )


def evaluate_bipartition(
    rho: DensityMatrix,
    povms: Sequence[SymmetricPovm],
    bipartition: Bipartition | int,
    mu: float = 0,
    nu: float = 0,
    l: int = 1,
    *,
    tolerance: float = DETECTION_TOLERANCE,
) -> CriterionVerdict:
    """
    Evaluate the bordered criterion across a one-versus-rest cut of a state.

    The rows of the probability matrix are the outcomes of subsystem q and the columns
    the outcome tuples of the remaining subsystems, in lexicographic order, measured
    with the tensor products of their POVMs. The per-side factor of the remainder is
    the product of its subsystems' factors.

    Inputs:
        - rho:
            The N-partite state.
        - povms:
            One POVM per subsystem.
        - bipartition:
            The cut, or the index q of the singled-out subsystem.
        - mu, nu, l:
            The border weights and size.
        - tolerance:
            The amount by which the margin must exceed zero for a detection.

    Raises:
        - DimensionMismatchError:
            Raised if the POVMs do not match the subsystems.
        - InvalidPartitionError:
            Raised if the cut is not a partition of the subsystems.

    """

    dims = rho.dims
    if len(povms) != len(dims):
        raise DimensionMismatchError(
            f"Got {len(povms)} POVMs for a {len(dims)}-partite state."
        )
    for index, (povm, dim) in enumerate(zip(povms, dims)):
        _check_povm_dim(povm, dim, f"POVM {index}")

    if not isinstance(bipartition, Bipartition):
        bipartition = Bipartition.for_subsystem(bipartition, len(dims))
    elif bipartition.n_parties != len(dims):
        raise InvalidPartitionError(
            f"Partition of {bipartition.n_parties} subsystems applied to a "
            f"{len(dims)}-partite state."
        )

    dim_q = dims[bipartition.q]
    rest_dims = SubsystemDims(tuple(dims[index] for index in bipartition.remainder))
    permuted = permute_subsystems(rho.mat, dims, bipartition.order)

    stack_q = _operator_stack(povms[bipartition.q])
    stack_rest = _product_stack(
        [_operator_stack(povms[index]) for index in bipartition.remainder]
    )

    probabilities = _joint_probabilities(
        permuted, dim_q, rest_dims.total, stack_q, stack_rest
    )
    tau = _local_probabilities(
        partial_trace(rho.mat, dims, [bipartition.q]), stack_q
    )
    sigma = _local_probabilities(
        partial_trace(rho.mat, dims, list(bipartition.remainder)), stack_rest
    )

    povm_q = povms[bipartition.q]
    factor_q = purity_bound(povm_q.dim, povm_q.n_outcomes, povm_q.x)
    factor_rest = functools.reduce(
        operator.mul,
        (
            purity_bound(povms[index].dim, povms[index].n_outcomes, povms[index].x)
            for index in bipartition.remainder
        ),
        1.0,
    )

    return CriterionVerdict(
        criterion=BIPARTITION,
        lhs=trace_norm(_border(probabilities, tau, sigma, mu, nu, l)),
        rhs=float(np.sqrt((l * mu**2 + factor_q) * (l * nu**2 + factor_rest))),
        metadata={
            "povms": [povm.identifier for povm in povms],
            "q": bipartition.q,
            "remainder": list(bipartition.remainder),
            "ordering": "group-major, remainder lexicographic",
        },
        params={"mu": mu, "nu": nu, "l": l},
        tolerance=tolerance,
    )


def evaluate_all_bipartitions(
    rho: DensityMatrix,
    povms: Sequence[SymmetricPovm],
    mu: float = 0,
    nu: float = 0,
    l: int = 1,
    *,
    tolerance: float = DETECTION_TOLERANCE,
) -> list[CriterionVerdict]:
    """
    Evaluate every one-versus-rest cut of a multipartite state.

    Returns:
        One verdict per subsystem, in subsystem order. A detection across any cut
        certifies that the state is not fully separable.

    """

    verdicts = [
        evaluate_bipartition(rho, povms, q, mu, nu, l, tolerance=tolerance)
        for q in range(len(rho.dims))
    ]
    logging.getLogger(__name__).debug(
        "Bipartition margins: %s", [verdict.margin for verdict in verdicts]
    )
    return verdicts
