"""Core data types for parametric linear programs and their solution paths.

A parametric program is a family of linear programs indexed by a scalar
``lam >= 0``::

    maximize    (c + lam * c_bar)' x
    subject to  A x  =  b + lam * b_bar     (or  A x <= b + lam * b_bar)
                  x >= 0

The solver tracks an optimal basic solution as ``lam`` decreases, producing a
piecewise-linear path: on each segment both the primal solution and the dual
reduced costs are affine in ``lam``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

# Feasibility tolerance for sign checks on primal/dual values.
FEAS_TOL = 1e-9
# Slack allowed when testing whether a lambda lies inside a segment.
INTERVAL_TOL = 1e-9


class ProgramKind(Enum):
    EQUALITY = "equality"
    LESS_EQUAL = "less_equal"


class Termination(Enum):
    """Why a path stopped."""

    REACHED_TARGET = "reached_target"
    LAMBDA_NONPOSITIVE = "lambda_nonpositive"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"
    ITERATION_CAP = "iteration_cap"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass
class ParametricProgram:
    """A parametric LP ``max (c + lam c_bar)'x`` s.t. ``Ax (=|<=) b + lam b_bar, x >= 0``.

    Attributes:
        A: constraint matrix, shape (m, n), full row rank assumed.
        b, b_bar: base and perturbation right-hand sides, shape (m,).
        c, c_bar: base and perturbation objective vectors, shape (n,).
        kind: whether rows are equalities or <= inequalities.
    """

    A: np.ndarray
    b: np.ndarray
    b_bar: np.ndarray
    c: np.ndarray
    c_bar: np.ndarray
    kind: ProgramKind = ProgramKind.EQUALITY

    def __post_init__(self) -> None:
        self.kind = ProgramKind(self.kind)
        self.A = np.ascontiguousarray(np.atleast_2d(np.asarray(self.A, dtype=float)))
        m, n = self.A.shape
        for name in ("b", "b_bar", "c", "c_bar"):
            v = np.asarray(getattr(self, name), dtype=float).reshape(-1)
            setattr(self, name, v)
        if self.b.shape != (m,) or self.b_bar.shape != (m,):
            raise ValueError(f"rhs vectors must have shape ({m},)")
        if self.c.shape != (n,) or self.c_bar.shape != (n,):
            raise ValueError(f"cost vectors must have shape ({n},)")
        for name in ("A", "b", "b_bar", "c", "c_bar"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"non-finite entries in {name}")
        if m > n and self.kind is ProgramKind.EQUALITY:
            raise ValueError("equality program with more rows than columns")

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def cost(self, lam: float) -> np.ndarray:
        return self.c + lam * self.c_bar

    def rhs(self, lam: float) -> np.ndarray:
        return self.b + lam * self.b_bar

    def objective(self, x: np.ndarray, lam: float) -> float:
        return float(self.cost(lam) @ x)


@dataclass(frozen=True)
class SlackInfo:
    """Bookkeeping for a <=-to-= conversion: columns ``original_n ..
    original_n + m - 1`` are the appended slacks, in row order."""

    original_n: int
    num_rows: int

    def slack_index(self, row: int) -> int:
        return self.original_n + row

    def strip(self, x: np.ndarray) -> np.ndarray:
        """Drop slack coordinates from a standard-form primal vector."""
        return x[: self.original_n]


def to_standard_form(p: ParametricProgram) -> Tuple[ParametricProgram, Optional[SlackInfo]]:
    """Append one slack column per row to turn <= rows into equalities.

    Slacks get zero cost in both c and c_bar. Equality programs pass through
    unchanged (info is None).
    """
    if p.kind is ProgramKind.EQUALITY:
        return p, None
    m, n = p.m, p.n
    A = np.hstack([p.A, np.eye(m)])
    c = np.concatenate([p.c, np.zeros(m)])
    c_bar = np.concatenate([p.c_bar, np.zeros(m)])
    std = ParametricProgram(A, p.b.copy(), p.b_bar.copy(), c, c_bar, ProgramKind.EQUALITY)
    return std, SlackInfo(original_n=n, num_rows=m)


class BasisPartition:
    """An ordered split of column indices into basic and nonbasic lists.

    Order matters: the i-th basic index owns the i-th entries of the basic
    value vectors, and likewise for nonbasic reduced costs.
    """

    __slots__ = ("basic", "nonbasic", "_pos", "_is_basic")

    def __init__(self, n: int, basic: np.ndarray, nonbasic: np.ndarray):
        self.basic = np.asarray(basic, dtype=np.intp)
        self.nonbasic = np.asarray(nonbasic, dtype=np.intp)
        if len(self.basic) + len(self.nonbasic) != n:
            raise ValueError("partition does not cover all columns")
        self._pos = np.empty(n, dtype=np.intp)
        self._is_basic = np.zeros(n, dtype=bool)
        self._pos[self.basic] = np.arange(len(self.basic))
        self._pos[self.nonbasic] = np.arange(len(self.nonbasic))
        self._is_basic[self.basic] = True
        seen = np.zeros(n, dtype=bool)
        for idx in (self.basic, self.nonbasic):
            if np.any(seen[idx]):
                raise ValueError("duplicate column index in partition")
            seen[idx] = True

    @classmethod
    def from_basic(cls, n: int, basic) -> "BasisPartition":
        basic = np.asarray(sorted(basic), dtype=np.intp)
        mask = np.ones(n, dtype=bool)
        mask[basic] = False
        return cls(n, basic, np.flatnonzero(mask))

    @property
    def n(self) -> int:
        return len(self.basic) + len(self.nonbasic)

    def is_basic(self, j: int) -> bool:
        return bool(self._is_basic[j])

    def position(self, j: int) -> int:
        """Index of column j within its own list (basic or nonbasic)."""
        return int(self._pos[j])

    def swap(self, basic_pos: int, nonbasic_pos: int) -> None:
        """Exchange the variables at the given list positions."""
        i = self.basic[basic_pos]
        j = self.nonbasic[nonbasic_pos]
        self.basic[basic_pos] = j
        self.nonbasic[nonbasic_pos] = i
        self._pos[j] = basic_pos
        self._pos[i] = nonbasic_pos
        self._is_basic[j] = True
        self._is_basic[i] = False

    def copy(self) -> "BasisPartition":
        return BasisPartition(self.n, self.basic.copy(), self.nonbasic.copy())

    def basis_hash(self) -> int:
        return hash(tuple(sorted(int(j) for j in self.basic)))

    def __repr__(self) -> str:  # pragma: no cover
        return f"BasisPartition(basic={self.basic.tolist()})"


@dataclass
class PathSegment:
    """One affine piece of the solution path, valid for lambda in
    [lambda_lo, lambda_hi].

    Primal support entries evaluate as ``base + lam * slope`` at the listed
    column indices (all other coordinates are zero); dual entries likewise
    give reduced costs on the nonbasic columns.
    """

    lambda_lo: float
    lambda_hi: float
    n_cols: int
    primal_indices: np.ndarray
    primal_base: np.ndarray
    primal_slope: np.ndarray
    dual_indices: np.ndarray
    dual_base: np.ndarray
    dual_slope: np.ndarray
    entering: Optional[int] = None
    leaving: Optional[int] = None

    def contains(self, lam: float) -> bool:
        tol = INTERVAL_TOL * (1.0 + abs(lam))
        return (lam >= self.lambda_lo - tol) and (lam <= self.lambda_hi + tol)

    def primal_map(self) -> Dict[int, Tuple[float, float]]:
        return {
            int(j): (float(b), float(s))
            for j, b, s in zip(self.primal_indices, self.primal_base, self.primal_slope)
        }

    def dual_map(self) -> Dict[int, Tuple[float, float]]:
        return {
            int(j): (float(b), float(s))
            for j, b, s in zip(self.dual_indices, self.dual_base, self.dual_slope)
        }


def evaluate_primal(segment: PathSegment, lam: float) -> np.ndarray:
    """Dense primal solution of a segment at a given lambda.

    Raises ValueError if lam lies outside the segment's interval (up to a
    small tolerance).
    """
    if not segment.contains(lam):
        raise ValueError(
            f"lambda={lam} outside segment interval "
            f"[{segment.lambda_lo}, {segment.lambda_hi}]"
        )
    x = np.zeros(segment.n_cols)
    x[segment.primal_indices] = segment.primal_base + lam * segment.primal_slope
    return x


def evaluate_dual(segment: PathSegment, lam: float) -> np.ndarray:
    """Dense reduced-cost vector of a segment at a given lambda (basic
    coordinates are zero)."""
    if not segment.contains(lam):
        raise ValueError(
            f"lambda={lam} outside segment interval "
            f"[{segment.lambda_lo}, {segment.lambda_hi}]"
        )
    z = np.zeros(segment.n_cols)
    z[segment.dual_indices] = segment.dual_base + lam * segment.dual_slope
    return z


class PivotKind(Enum):
    PRIMAL = "primal"
    DUAL = "dual"


@dataclass(frozen=True)
class PivotEvent:
    """Record of one basis exchange at a breakpoint."""

    kind: PivotKind
    entering: int
    leaving: int
    lambda_star: float
    t: float
    t_bar: float
    s: float
    s_bar: float


@dataclass
class SolutionPath:
    """The full piecewise-linear path, highest lambda first."""

    segments: List[PathSegment] = field(default_factory=list)
    events: List[PivotEvent] = field(default_factory=list)
    termination: Termination = Termination.REACHED_TARGET
    terminal_lambda: float = float("nan")
    num_cols: int = 0
    slack_info: Optional[SlackInfo] = None

    @property
    def num_pivots(self) -> int:
        return len(self.events)

    def segment_at(self, lam: float) -> PathSegment:
        for seg in self.segments:
            if seg.contains(lam):
                return seg
        raise ValueError(f"lambda={lam} not covered by any segment")

    def breakpoints(self) -> List[float]:
        """Lambda values where the basis changed (each segment's lower end)."""
        return [seg.lambda_lo for seg in self.segments]
