#!/usr/bin/python3.10
########################################################################################
# scanner.py - Threshold scanning for sepscope.                                        #
#                                                                                      #
# Author: Ben Winchester                                                               #
# Copyright: Ben Winchester, 2024                                                      #
# Date created: 01/07/2024                                                             #
# License: Open source                                                                 #
########################################################################################
"""
scanner.py - The scanner module for sepscope.

Scans the margin of a separability criterion along a one-parameter family of states.
A coarse grid locates every sign change of the margin, the first of which is refined
by bisection into the detection threshold, and an affine fit over the detected side is
reported for comparison with closed-form margin curves.

"""

import dataclasses
import enum
import functools
import logging

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np
import pandas as pd

from joblib import Parallel, delayed
from tqdm import tqdm

from .__utils__ import (
    AlwaysDetectsError,
    BISECTION_TOLERANCE,
    COARSE_GRID_SIZE,
    ConfigurationError,
    DETECTION_TOLERANCE,
    FIT_POINTS,
    NeverDetectsError,
    ParamOutOfRangeError,
    UnknownKindError,
)
from .entanglement.criteria import (
    CriterionVerdict,
    evaluate_corollary,
    evaluate_p_only,
    evaluate_theorem1,
    ppt_criterion,
    realignment_criterion,
    shi_q_matrix,
    sun_q_matrix,
)
from .entanglement.states import build_family_state, DensityMatrix, StateFamily
from .measurement.basis import HermitianOperatorBasis
from .measurement.povm import build_povm, NmPovmConfig, PovmKind, SymmetricPovm

__all__ = (
    "Criterion",
    "CriterionConfig",
    "DETECTED",
    "FamilySpec",
    "find_threshold",
    "LHS",
    "MARGIN",
    "PARAM",
    "RHS",
    "scan_margin",
    "scan_mesh",
    "ThresholdResult",
)

# DETECTED:
#   Column holding whether the criterion detects entanglement.
DETECTED: str = "detected"

# FALLING:
#   Direction of a threshold below which the criterion detects.
FALLING: str = "falling"

# LHS:
#   Column holding the evaluated functional.
LHS: str = "lhs"

# MARGIN:
#   Column holding lhs - rhs.
MARGIN: str = "margin"

# MU:
#   Column holding the first border weight in a mesh.
MU: str = "mu"

# NU:
#   Column holding the second border weight in a mesh.
NU: str = "nu"

# PARAM:
#   Column holding the family parameter.
PARAM: str = "param"

# RHS:
#   Column holding the separable bound.
RHS: str = "rhs"

# RISING:
#   Direction of a threshold above which the criterion detects.
RISING: str = "rising"


class Criterion(enum.Enum):
    """
    Denotes a criterion that can be scanned.

    - GSIC:
        The bordered criterion with the closed-form GSIC bound.

    - MUM:
        The bordered criterion with the closed-form MUM bound.

    - P_ONLY:
        The unbordered probability-matrix criterion.

    - PPT:
        The positive-partial-transpose criterion.

    - REALIGN:
        The realignment criterion.

    - SHI:
        The bordered realignment, or Q-matrix, criterion.

    - SUN:
        The l-fold bordered Q-matrix criterion.

    - THEOREM_1:
        The bordered probability-matrix criterion for general (N, M)-POVMs.

    """

    GSIC: str = "gsic"
    MUM: str = "mum"
    P_ONLY: str = "p-only"
    PPT: str = "ppt"
    REALIGN: str = "realign"
    SHI: str = "shi"
    SUN: str = "sun"
    THEOREM_1: str = "thm1"

    @classmethod
    def from_name(cls, name: "str | Criterion") -> "Criterion":
        """
        Parse a criterion from its id.

        Raises:
            - UnknownKindError:
                Raised if the id is not a known criterion.

        """

        if isinstance(name, Criterion):
            return name
        try:
            return cls(name)
        except ValueError:
            raise UnknownKindError(
                f"Unknown criterion '{name}', expected one of "
                f"{', '.join(criterion.value for criterion in cls)}."
            ) from None

    @property
    def uses_povm(self) -> bool:
        """Whether the criterion measures the state with local POVMs."""

        return self in (
            Criterion.GSIC,
            Criterion.MUM,
            Criterion.P_ONLY,
            Criterion.THEOREM_1,
        )


def _require(entry: dict[str, Any], key: str, context: str) -> Any:
    """Return `entry[key]`, raising a :class:`ConfigurationError` if it is missing."""

    try:
        return entry[key]
    except KeyError:
        raise ConfigurationError(
            f"Missing key '{key}' in {context} entry: {entry}."
        ) from None


@dataclass(kw_only=True)
class FamilySpec:
    """
    A one-parameter family of states over a parameter range.

    .. attribute:: family
        The state family.

    .. attribute:: lo
        The lower end of the parameter range.

    .. attribute:: hi
        The upper end of the parameter range.

    .. attribute:: fixed
        The fixed secondary parameters, e.g., `dim` or `upsilon`.

    """

    family: StateFamily
    lo: float
    hi: float
    fixed: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """
        Check the range and that its endpoints are members of the family.

        Raises:
            - ParamOutOfRangeError:
                Raised if lo >= hi or an endpoint lies outside the family's domain.

        """

        self.family = StateFamily.from_name(self.family)
        if not self.lo < self.hi:
            raise ParamOutOfRangeError(
                f"Parameter range [{self.lo}, {self.hi}] of family "
                f"'{self.family.value}' must have lo < hi."
            )
        self.state_at(self.lo)
        self.state_at(self.hi)

    @classmethod
    def from_entry(cls, entry: dict[str, Any]) -> "FamilySpec":
        """
        Build a family from its YAML entry.

        Inputs:
            - entry:
                A mapping with `family`, `range: [lo, hi]` and optional `fixed` keys.

        """

        param_range = _require(entry, "range", "family")
        try:
            lo, hi = (float(value) for value in param_range)
        except (TypeError, ValueError):
            raise ConfigurationError(
                f"Family range must be a pair [lo, hi], got {param_range}."
            ) from None

        return cls(
            family=StateFamily.from_name(_require(entry, "family", "family")),
            lo=lo,
            hi=hi,
            fixed=dict(entry.get("fixed", None) or {}),
        )

    @property
    def label(self) -> str:
        """A short description of the family and its fixed parameters."""

        if len(self.fixed) == 0:
            return self.family.value
        fixed = ",".join(f"{key}={value}" for key, value in sorted(self.fixed.items()))
        return f"{self.family.value}({fixed})"

    def state_at(self, param: float) -> DensityMatrix:
        """Return the member of the family at `param`."""

        return build_family_state(self.family, param, **self.fixed)


@functools.lru_cache(maxsize=64)
def _build_povm(
    kind: PovmKind,
    dim: int,
    n_groups: int | None,
    n_outcomes: int | None,
    t: float,
    scheme: str | None,
) -> SymmetricPovm:
    """Build, and cache, the POVM of a given kind on C^dim."""

    match kind:
        case PovmKind.GSIC:
            n_groups, n_outcomes = 1, dim**2
        case PovmKind.MUM:
            n_groups, n_outcomes = dim + 1, dim
        case _:
            if n_groups is None and n_outcomes is None:
                n_groups, n_outcomes = dim**2 - 1, 2
            elif n_groups is None:
                n_groups = (dim**2 - 1) // max(n_outcomes - 1, 1)  # type: ignore
            elif n_outcomes is None:
                n_outcomes = (dim**2 - 1) // n_groups + 1

    config = NmPovmConfig(dim=dim, n_groups=n_groups, n_outcomes=n_outcomes, t=t)
    return build_povm(
        config,
        HermitianOperatorBasis.for_nm(dim, n_groups, n_outcomes, scheme),
        kind=kind,
    )


@dataclass(kw_only=True)
class CriterionConfig:
    """
    A criterion together with the measurements and parameters it is evaluated with.

    .. attribute:: criterion
        The criterion.

    .. attribute:: povm_kind
        The kind of local POVM, forced to match the GSIC and MUM criteria.

    .. attribute:: n_groups
        The number of POVMs, N, for general measurements.

    .. attribute:: n_outcomes
        The number of outcomes, M, for general measurements.

    .. attribute:: t
        The interpolation parameter of both local POVMs.

    .. attribute:: scheme
        The grouping scheme of the basis, or `None` for the default.

    .. attribute:: mu, nu, l
        The border weights and size of the probability-matrix criteria.

    .. attribute:: alpha, beta
        The border weights of the Q-matrix criteria.

    .. attribute:: assumed
        The names of parameters which were assumed rather than known, recorded in the
        verdict metadata.

    .. attribute:: tolerance
        The amount by which the margin must exceed zero for a detection.

    """

    criterion: Criterion
    povm_kind: PovmKind = PovmKind.GENERAL
    n_groups: int | None = None
    n_outcomes: int | None = None
    t: float = 0.01
    scheme: str | None = None
    mu: float = 0
    nu: float = 0
    l: int = 1
    alpha: float = 0
    beta: float = 0
    assumed: tuple[str, ...] = ()
    tolerance: float = DETECTION_TOLERANCE

    def __post_init__(self) -> None:
        """
        Resolve the criterion and POVM kind and check the border size.

        Raises:
            - ParamOutOfRangeError:
                Raised if l < 1.
            - UnknownKindError:
                Raised if the criterion or POVM kind is unknown.

        """

        self.criterion = Criterion.from_name(self.criterion)
        self.povm_kind = PovmKind.from_name(self.povm_kind)
        if self.criterion in (Criterion.GSIC, Criterion.MUM):
            self.povm_kind = PovmKind(self.criterion.value)
        if self.l < 1:
            raise ParamOutOfRangeError(
                f"Border size l must be at least 1, got {self.l}."
            )
        self.assumed = tuple(self.assumed)
        if len(self.assumed) > 0:
            logging.getLogger(__name__).warning(
                "Criterion '%s' uses assumed parameters: %s.",
                self.criterion.value,
                ", ".join(f"{name}={getattr(self, name)}" for name in self.assumed),
            )

    @classmethod
    def from_entry(cls, entry: dict[str, Any]) -> "CriterionConfig":
        """
        Build a criterion configuration from its YAML entry.

        Inputs:
            - entry:
                A mapping with a `criterion` key and any of `povm`, `n_groups`,
                `n_outcomes`, `t`, `scheme`, `mu`, `nu`, `l`, `alpha`, `beta`,
                `assumed` and `tolerance`.

        """

        return cls(
            criterion=Criterion.from_name(_require(entry, "criterion", "criterion")),
            povm_kind=PovmKind.from_name(entry.get("povm", PovmKind.GENERAL.value)),
            n_groups=entry.get("n_groups", None),
            n_outcomes=entry.get("n_outcomes", None),
            t=float(entry.get("t", 0.01)),
            scheme=entry.get("scheme", None),
            mu=float(entry.get("mu", 0)),
            nu=float(entry.get("nu", 0)),
            l=int(entry.get("l", 1)),
            alpha=float(entry.get("alpha", 0)),
            beta=float(entry.get("beta", 0)),
            assumed=tuple(entry.get("assumed", None) or ()),
            tolerance=float(entry.get("tolerance", DETECTION_TOLERANCE)),
        )

    def povms_for(self, dims: Sequence[int]) -> tuple[SymmetricPovm, ...]:
        """Return one POVM per subsystem of the given dimensions."""

        return tuple(
            _build_povm(
                self.povm_kind,
                int(dim),
                self.n_groups,
                self.n_outcomes,
                self.t,
                self.scheme,
            )
            for dim in dims
        )

    def evaluate(self, rho: DensityMatrix) -> CriterionVerdict:
        """
        Evaluate the criterion on a bipartite state.

        Raises:
            - DimensionMismatchError:
                Raised if the state is not bipartite.

        """

        rho.require_bipartite()
        verdict: CriterionVerdict
        match self.criterion:
            case Criterion.THEOREM_1:
                povm_a, povm_b = self.povms_for(rho.dims)
                verdict = evaluate_theorem1(
                    rho,
                    povm_a,
                    povm_b,
                    self.mu,
                    self.nu,
                    self.l,
                    tolerance=self.tolerance,
                )
            case Criterion.P_ONLY:
                povm_a, povm_b = self.povms_for(rho.dims)
                verdict = evaluate_p_only(
                    rho, povm_a, povm_b, tolerance=self.tolerance
                )
            case Criterion.GSIC | Criterion.MUM:
                povm_a, povm_b = self.povms_for(rho.dims)
                verdict = evaluate_corollary(
                    rho,
                    povm_a,
                    povm_b,
                    self.mu,
                    self.nu,
                    self.l,
                    tolerance=self.tolerance,
                )
            case Criterion.SHI:
                verdict = shi_q_matrix(
                    rho, self.alpha, self.beta, tolerance=self.tolerance
                )
            case Criterion.SUN:
                verdict = sun_q_matrix(
                    rho, self.alpha, self.beta, self.l, tolerance=self.tolerance
                )
            case Criterion.PPT:
                verdict = ppt_criterion(rho, tolerance=self.tolerance)
            case Criterion.REALIGN:
                verdict = realignment_criterion(rho, tolerance=self.tolerance)

        if len(self.assumed) > 0:
            verdict.metadata["assumed"] = list(self.assumed)
        return verdict

    def metadata(self, dims: Sequence[int] | None = None) -> dict[str, Any]:
        """
        Return the parameters describing this configuration for output headers.

        Inputs:
            - dims:
                If provided, the subsystem dimensions, used to name the POVMs.

        """

        metadata: dict[str, Any] = {"criterion": self.criterion.value}
        if self.criterion.uses_povm:
            metadata["povm_kind"] = self.povm_kind.value
            metadata["t"] = self.t
            if dims is not None:
                metadata["povms"] = " ".join(
                    povm.identifier for povm in self.povms_for(dims)
                )
            if self.criterion != Criterion.P_ONLY:
                metadata.update({"mu": self.mu, "nu": self.nu, "l": self.l})
        if self.criterion in (Criterion.SHI, Criterion.SUN):
            metadata.update({"alpha": self.alpha, "beta": self.beta})
            if self.criterion == Criterion.SUN:
                metadata["l"] = self.l
        if len(self.assumed) > 0:
            metadata["assumed"] = ",".join(self.assumed)
        metadata["tolerance"] = self.tolerance
        return metadata


def _evaluate_point(
    param: float, *, config: CriterionConfig, family: FamilySpec
) -> tuple[float, float, float, float, bool]:
    """Evaluate the criterion on the member of the family at `param`."""

    verdict = config.evaluate(family.state_at(param))
    return (float(param), verdict.lhs, verdict.rhs, verdict.margin, verdict.detected)


def scan_margin(
    family: FamilySpec,
    config: CriterionConfig,
    grid_size: int = COARSE_GRID_SIZE,
    n_jobs: int = 1,
) -> pd.DataFrame:
    """
    Sample the margin of a criterion over an evenly-spaced grid of the family.

    Inputs:
        - family:
            The family and parameter range.
        - config:
            The criterion configuration.
        - grid_size:
            The number of grid points, including both endpoints.
        - n_jobs:
            The number of parallel workers. Points are always returned in parameter
            order.

    Returns:
        A :class:`pandas.DataFrame` with the columns `param`, `lhs`, `rhs`, `margin`
        and `detected`.

    Raises:
        - ParamOutOfRangeError:
            Raised if the grid has fewer than two points.

    """

    if grid_size < 2:
        raise ParamOutOfRangeError(f"Grid size must be at least 2, got {grid_size}.")

    params = np.linspace(family.lo, family.hi, grid_size)
    evaluate = functools.partial(_evaluate_point, config=config, family=family)
    if n_jobs == 1:
        rows = [
            evaluate(param)
            for param in tqdm(
                params,
                desc=f"{config.criterion.value} on {family.label}",
                disable=None,
                leave=False,
            )
        ]
    else:
        rows = Parallel(n_jobs=n_jobs)(delayed(evaluate)(param) for param in params)

    return pd.DataFrame(rows, columns=[PARAM, LHS, RHS, MARGIN, DETECTED])


@dataclass(kw_only=True)
class ThresholdResult:
    """
    The detection threshold of a criterion along a family.

    .. attribute:: criterion
        The metadata of the criterion configuration.

    .. attribute:: family
        The label of the family.

    .. attribute:: threshold
        The midpoint of the resolved bracket.

    .. attribute:: bracket
        The resolved bracket, whose endpoints have margins of opposite sign.

    .. attribute:: brackets
        Every sign-changing interval of the coarse grid, in parameter order.

    .. attribute:: direction
        "rising" if the criterion detects above the threshold, "falling" if below.

    .. attribute:: slope, intercept
        The least-squares affine fit of the margin over the detected side.

    .. attribute:: fit_residual
        The largest absolute deviation of the sampled margins from the fit.

    .. attribute:: samples
        The coarse margin curve.

    """

    criterion: dict[str, Any]
    family: str
    threshold: float
    bracket: tuple[float, float]
    brackets: list[tuple[float, float]]
    direction: str
    slope: float
    intercept: float
    fit_residual: float
    samples: pd.DataFrame = field(repr=False)

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-compatible representation, without the samples."""

        return {
            "criterion": self.criterion,
            "family": self.family,
            "threshold": self.threshold,
            "bracket": list(self.bracket),
            "brackets": [list(bracket) for bracket in self.brackets],
            "direction": self.direction,
            "slope": self.slope,
            "intercept": self.intercept,
            "fit_residual": self.fit_residual,
        }


def find_threshold(
    family: FamilySpec,
    config: CriterionConfig,
    tolerance: float = BISECTION_TOLERANCE,
    grid_size: int = COARSE_GRID_SIZE,
    n_jobs: int = 1,
) -> ThresholdResult:
    """
    Locate the detection threshold of a criterion along a family.

    The coarse grid is searched for every change in the sign of the margin, and the
    lowest-parameter bracket is bisected until narrower than `tolerance`. Bisection
    uses the raw sign of the margin, positive on the detected side.

    Inputs:
        - family:
            The family and parameter range.
        - config:
            The criterion configuration.
        - tolerance:
            The width below which the bracket is resolved.
        - grid_size:
            The number of points in the coarse grid.
        - n_jobs:
            The number of parallel workers for the coarse grid.

    Returns:
        The :class:`ThresholdResult`.

    Raises:
        - NeverDetectsError:
            Raised if the margin is nowhere positive on the range.
        - AlwaysDetectsError:
            Raised if the margin is everywhere positive on the range.
        - ParamOutOfRangeError:
            Raised if the tolerance is not positive.

    """

    logger = logging.getLogger(__name__)
    if tolerance <= 0:
        raise ParamOutOfRangeError(
            f"Bisection tolerance must be positive, got {tolerance}."
        )

    samples = scan_margin(family, config, grid_size, n_jobs)
    params = samples[PARAM].to_numpy()
    positive = samples[MARGIN].to_numpy() > 0

    description = f"'{config.criterion.value}' on {family.label}"
    if not positive.any():
        raise NeverDetectsError(
            f"Criterion {description} never detects on [{family.lo}, {family.hi}]."
        )
    if positive.all():
        raise AlwaysDetectsError(
            f"Criterion {description} detects everywhere on "
            f"[{family.lo}, {family.hi}]."
        )

    changes = np.flatnonzero(positive[:-1] != positive[1:])
    brackets = [(float(params[index]), float(params[index + 1])) for index in changes]
    if len(brackets) > 1:
        logger.warning(
            "Margin of %s changes sign %s times; reporting the first bracket of %s.",
            description,
            len(brackets),
            brackets,
        )

    def margin_at(param: float) -> float:
        return config.evaluate(family.state_at(param)).margin

    lower, upper = brackets[0]
    lower_positive = bool(positive[changes[0]])
    while upper - lower > tolerance:
        midpoint = (lower + upper) / 2
        if (margin_at(midpoint) > 0) == lower_positive:
            lower = midpoint
        else:
            upper = midpoint

    threshold = (lower + upper) / 2
    direction = FALLING if lower_positive else RISING
    logger.info(
        "Threshold of %s at %.10g, %s, resolved to [%.10g, %.10g].",
        description,
        threshold,
        direction,
        lower,
        upper,
    )

    # Fit over the detected side of the first bracket only.
    if direction == RISING:
        fit_end = brackets[1][0] if len(brackets) > 1 else family.hi
        fit_params = np.linspace(threshold, fit_end, FIT_POINTS)
    else:
        fit_params = np.linspace(family.lo, threshold, FIT_POINTS)
    fit_margins = np.array([margin_at(param) for param in fit_params])
    slope, intercept = np.polyfit(fit_params, fit_margins, 1)
    fit_residual = float(
        np.max(np.abs(slope * fit_params + intercept - fit_margins))
    )

    return ThresholdResult(
        criterion=config.metadata(family.state_at(family.lo).dims.dims),
        family=family.label,
        threshold=float(threshold),
        bracket=(float(lower), float(upper)),
        brackets=brackets,
        direction=direction,
        slope=float(slope),
        intercept=float(intercept),
        fit_residual=fit_residual,
        samples=samples,
    )


def scan_mesh(
    state: DensityMatrix,
    config: CriterionConfig,
    mu_values: Sequence[float],
    nu_values: Sequence[float],
) -> pd.DataFrame:
    """
    Evaluate a bordered criterion over a grid of border weights at a fixed state.

    Inputs:
        - state:
            The bipartite state.
        - config:
            The criterion configuration, whose mu and nu are replaced at each point.
        - mu_values, nu_values:
            The border weights to combine.

    Returns:
        A :class:`pandas.DataFrame` with the columns `mu`, `nu`, `lhs`, `rhs`, `margin`
        and `detected`, with mu varying slowest.

    """

    rows: list[tuple[float, float, float, float, float, bool]] = []
    for mu in tqdm(mu_values, desc="Border mesh", disable=None, leave=False):
        for nu in nu_values:
            verdict = dataclasses.replace(
                config, mu=float(mu), nu=float(nu), assumed=()
            ).evaluate(state)
            rows.append(
                (
                    float(mu),
                    float(nu),
                    verdict.lhs,
                    verdict.rhs,
                    verdict.margin,
                    verdict.detected,
                )
            )

    return pd.DataFrame(rows, columns=[MU, NU, LHS, RHS, MARGIN, DETECTED])
