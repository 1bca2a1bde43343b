"""Reductions from three sparse-learning estimators to parametric LPs.

Each builder emits a ParametricProgram whose lambda is the estimator's
regularization level, so one solve_path call yields the whole regularization
path. Free variables are handled by positive/negative splits (theta =
theta_plus - theta_minus with both halves >= 0), and each recover_* maps
standard-form solutions back to the statistical parameters.

Builders:
    build_dantzig  -- l1 minimization s.t. ||X'(y - X theta)||_inf <= lambda
    build_svm      -- l1-constrained soft-margin linear classifier
    build_diffnet  -- ||X D Z - Y||_inf <= lambda with D sparse (difference
                      of precision matrices when X, Z are covariances)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from .core import (
    ParametricProgram,
    PathSegment,
    ProgramKind,
    SolutionPath,
    Termination,
)
from .errors import ComplementarityViolation

# Entries larger than this (in absolute value) count as support.
SUPPORT_TOL = 1e-9
# theta_plus * theta_minus above this at a breakpoint signals an engine bug.
COMPL_TOL = 1e-12


@dataclass(frozen=True)
class DantzigInstance:
    """Regression data: design X (n x d) and response y (n,)."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if X.shape[0] != y.shape[0]:
            raise ValueError("X row count must match len(y)")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class SvmInstance:
    """Classification data: features X (n x d), labels y in {-1, +1}."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).reshape(-1)
        if X.shape[0] != y.shape[0]:
            raise ValueError("X row count must match len(y)")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class DiffNetInstance:
    """Data for the matrix problem min ||D||_1 s.t. ||X D Z - Y||_inf <= lambda.

    The differential-network case sets X = S_X, Z = S_Y, Y = S_X - S_Y
    (empirical covariances), for which D estimates the difference of the two
    precision matrices.
    """

    X: np.ndarray
    Z: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        Z = np.atleast_2d(np.asarray(self.Z, dtype=float))
        Y = np.atleast_2d(np.asarray(self.Y, dtype=float))
        if Y.shape != (X.shape[0], Z.shape[1]):
            raise ValueError(
                f"Y must be {X.shape[0]}x{Z.shape[1]} to match X rows and Z columns"
            )
        for name, M in (("X", X), ("Z", Z), ("Y", Y)):
            object.__setattr__(self, name, M)

    @classmethod
    def from_covariances(cls, S_X: np.ndarray, S_Y: np.ndarray) -> "DiffNetInstance":
        S_X = np.asarray(S_X, dtype=float)
        S_Y = np.asarray(S_Y, dtype=float)
        if S_X.shape != S_Y.shape or S_X.shape[0] != S_X.shape[1]:
            raise ValueError("covariance matrices must be square and same shape")
        return cls(X=S_X, Z=S_Y, Y=S_X - S_Y)

    @property
    def dims(self) -> Tuple[int, int, int, int]:
        """(m1, d1, d2, m2): X is m1 x d1, D is d1 x d2, Z is d2 x m2."""
        return self.X.shape[0], self.X.shape[1], self.Z.shape[0], self.Z.shape[1]


@dataclass
class OriginalSegment:
    """One path piece in original coordinates: value(lam) = base + lam*slope.

    ``base``/``slope`` are d-vectors (Dantzig, SVM weights) or d1 x d2
    matrices (matrix problems). SVM segments additionally carry the affine
    intercept pieces.
    """

    lambda_lo: float
    lambda_hi: float
    base: np.ndarray
    slope: np.ndarray
    intercept_base: float = 0.0
    intercept_slope: float = 0.0

    def value(self, lam: float) -> np.ndarray:
        return self.base + lam * self.slope

    def intercept(self, lam: float) -> float:
        return self.intercept_base + lam * self.intercept_slope


@dataclass
class PathInOriginalCoords:
    """A recovered solution path plus per-breakpoint support sets."""

    segments: List[OriginalSegment] = field(default_factory=list)
    supports: List[FrozenSet[int]] = field(default_factory=list)
    termination: Termination = Termination.REACHED_TARGET
    terminal_lambda: float = float("nan")

    def segment_at(self, lam: float) -> OriginalSegment:
        for seg in self.segments:
            tol = 1e-9 * (1.0 + abs(lam))
            if seg.lambda_lo - tol <= lam <= seg.lambda_hi + tol:
                return seg
        raise ValueError(f"lambda={lam} not covered by any segment")

    def value_at(self, lam: float) -> np.ndarray:
        return self.segment_at(lam).value(lam)


def build_dantzig(inst: DantzigInstance) -> ParametricProgram:
    """LP for l1 minimization subject to ||X'(y - X theta)||_inf <= lambda.

    With theta = theta_plus - theta_minus and G = X'X, the two-sided bound
    |G theta - X'y| <= lambda becomes 2d <= rows over the 2d split columns:

        [[ G, -G],     [ X'y ]            c = -1 (both halves),
         [-G,  G]] x <= [-X'y ] + lambda,  c_bar = 0, b_bar = 1.

    The slack basis is optimal for every lambda >= ||X'y||_inf, so no phase-1
    is needed.
    """
    X, y = inst.X, inst.y
    G = X.T @ X
    g = X.T @ y
    d = G.shape[0]
    A = np.block([[G, -G], [-G, G]])
    b = np.concatenate([g, -g])
    return ParametricProgram(
        A=A,
        b=b,
        b_bar=np.ones(2 * d),
        c=-np.ones(2 * d),
        c_bar=np.zeros(2 * d),
        kind=ProgramKind.LESS_EQUAL,
    )


def build_svm(inst: SvmInstance) -> Tuple[ParametricProgram, List[int]]:
    """Equality-form LP for the l1-constrained soft-margin classifier.

    minimize sum(hinge) s.t. y_i(x_i' theta + theta_0) >= 1 - hinge_i and
    ||theta||_1 <= lambda. Columns, in order: hinge t_plus (n), surplus
    t_minus (n), theta_plus (d), theta_minus (d), theta0_plus, theta0_minus,
    norm slack w. Rows: n margin equalities (b=1) and one norm-budget row
    (b=0, b_bar=1).

    Returns the program and the canonical starting basis {t_plus block, w},
    which is primal-feasible for every lambda >= 0 (t_plus = 1, w = lambda).
    Whether it is *dual*-feasible at large lambda depends on the data — for
    generic data it is not, and initialize raises InfeasibleAtLargeLambda;
    sign-balanced data (sum_i y_i x_i = 0 and sum_i y_i = 0) admits the
    basis and yields the constant path theta = 0, hinge = 1.
    """
    X, y = inst.X, inst.y
    n, d = X.shape
    Z = y[:, None] * X
    cols = 2 * n + 2 * d + 3
    A = np.zeros((n + 1, cols))
    A[:n, 0:n] = np.eye(n)
    A[:n, n:2 * n] = -np.eye(n)
    A[:n, 2 * n:2 * n + d] = Z
    A[:n, 2 * n + d:2 * n + 2 * d] = -Z
    A[:n, 2 * n + 2 * d] = y
    A[:n, 2 * n + 2 * d + 1] = -y
    A[n, 2 * n:2 * n + 2 * d] = 1.0
    A[n, 2 * n + 2 * d + 2] = 1.0
    b = np.concatenate([np.ones(n), [0.0]])
    b_bar = np.concatenate([np.zeros(n), [1.0]])
    c = np.zeros(cols)
    c[:n] = -1.0
    program = ParametricProgram(
        A=A, b=b, b_bar=b_bar, c=c, c_bar=np.zeros(cols),
        kind=ProgramKind.EQUALITY,
    )
    basis = list(range(n)) + [2 * n + 2 * d + 2]
    return program, basis


def build_diffnet(inst: DiffNetInstance) -> ParametricProgram:
    """Inequality-form LP for min ||D||_1 s.t. ||X D Z - Y||_inf <= lambda.

    The product X D Z is vectorized column-major, vec(X D Z) = G vec(D) with
    G = Z' kron X, so the two-sided bound becomes the Dantzig-style block
    system over the split D = D_plus - D_minus:

        [ G  -G] [vec(D_plus) ]    [ vec(Y)]
        [-G   G] [vec(D_minus)] <= [-vec(Y)] + lambda.

    An intermediate product variable C = X D would carry its defining
    equalities with zero right-hand side; every basis would then hold C
    entries at exactly zero and the path would crawl through long degenerate
    stretches. Substituting C out keeps the same D-path with none of that.

    The slack start (D = 0, slacks = +-vec(Y) + lambda) is feasible and
    optimal for every lambda >= ||Y||_max, so no explicit basis is needed.
    """
    m1, d1, d2, m2 = inst.dims
    nD = d1 * d2
    nW = m1 * m2
    G = np.kron(inst.Z.T, inst.X)             # (m1*m2) x (d1*d2)
    vecY = inst.Y.flatten(order="F")

    A = np.zeros((2 * nW, 2 * nD))
    A[:nW, :nD] = G
    A[:nW, nD:] = -G
    A[nW:, :nD] = -G
    A[nW:, nD:] = G

    b = np.concatenate([vecY, -vecY])
    c = -np.ones(2 * nD)
    return ParametricProgram(
        A=A, b=b, b_bar=np.ones(2 * nW), c=c, c_bar=np.zeros(2 * nD),
        kind=ProgramKind.LESS_EQUAL,
    )


def _dense_affine(seg: PathSegment, limit: int) -> Tuple[np.ndarray, np.ndarray]:
    """Dense (base, slope) arrays over the first ``limit`` columns."""
    base = np.zeros(limit)
    slope = np.zeros(limit)
    keep = seg.primal_indices < limit
    base[seg.primal_indices[keep]] = seg.primal_base[keep]
    slope[seg.primal_indices[keep]] = seg.primal_slope[keep]
    return base, slope


def _breakpoint_of(seg: PathSegment) -> float:
    if np.isfinite(seg.lambda_lo):
        return seg.lambda_lo
    if np.isfinite(seg.lambda_hi):
        return seg.lambda_hi
    return 0.0


def _check_split_complement(
    plus: np.ndarray, minus: np.ndarray, lam: float, what: str
) -> None:
    worst = float(np.abs(plus * minus).max(initial=0.0))
    if worst > COMPL_TOL:
        raise ComplementarityViolation(
            f"{what} split has overlapping halves at lambda={lam:.6g} "
            f"(max product {worst:.3e})"
        )


def _support_of(values: np.ndarray) -> FrozenSet[int]:
    return frozenset(int(i) for i in np.flatnonzero(np.abs(values) > SUPPORT_TOL))


def recover_dantzig(path: SolutionPath, d: Optional[int] = None) -> PathInOriginalCoords:
    """Map a Dantzig path back to theta = theta_plus - theta_minus.

    ``d`` defaults to the width implied by the path's slack bookkeeping.
    Verifies split complementarity at every breakpoint and records the
    support set there.
    """
    if d is None:
        if path.slack_info is None:
            raise ValueError("d cannot be inferred: path has no slack info")
        d = path.slack_info.original_n // 2
    out = PathInOriginalCoords(
        termination=path.termination, terminal_lambda=path.terminal_lambda
    )
    for seg in path.segments:
        base, slope = _dense_affine(seg, 2 * d)
        lam = _breakpoint_of(seg)
        x = base + lam * slope
        _check_split_complement(x[:d], x[d:], lam, "theta")
        theta_base = base[:d] - base[d:]
        theta_slope = slope[:d] - slope[d:]
        out.segments.append(
            OriginalSegment(seg.lambda_lo, seg.lambda_hi, theta_base, theta_slope)
        )
        out.supports.append(_support_of(theta_base + lam * theta_slope))
    return out


def recover_svm(path: SolutionPath, inst: SvmInstance) -> PathInOriginalCoords:
    """Map an SVM path back to (theta, theta_0); predictions are
    sign(theta_0 + theta' z)."""
    n, d = inst.X.shape
    out = PathInOriginalCoords(
        termination=path.termination, terminal_lambda=path.terminal_lambda
    )
    for seg in path.segments:
        base, slope = _dense_affine(seg, 2 * n + 2 * d + 3)
        lam = _breakpoint_of(seg)
        x = base + lam * slope
        _check_split_complement(x[:n], x[n:2 * n], lam, "hinge")
        tp = slice(2 * n, 2 * n + d)
        tm = slice(2 * n + d, 2 * n + 2 * d)
        _check_split_complement(x[tp], x[tm], lam, "theta")
        i0 = 2 * n + 2 * d
        _check_split_complement(x[i0:i0 + 1], x[i0 + 1:i0 + 2], lam, "theta0")
        theta_base = base[tp] - base[tm]
        theta_slope = slope[tp] - slope[tm]
        out.segments.append(
            OriginalSegment(
                seg.lambda_lo,
                seg.lambda_hi,
                theta_base,
                theta_slope,
                intercept_base=base[i0] - base[i0 + 1],
                intercept_slope=slope[i0] - slope[i0 + 1],
            )
        )
        out.supports.append(_support_of(theta_base + lam * theta_slope))
    return out


def recover_diffnet(path: SolutionPath, inst: DiffNetInstance) -> PathInOriginalCoords:
    """Map a matrix-problem path back to D = D_plus - D_minus (d1 x d2).

    Support sets use column-major flat indices into D.
    """
    m1, d1, d2, m2 = inst.dims
    nD = d1 * d2
    out = PathInOriginalCoords(
        termination=path.termination, terminal_lambda=path.terminal_lambda
    )
    for seg in path.segments:
        base, slope = _dense_affine(seg, 2 * nD)
        lam = _breakpoint_of(seg)
        x = base + lam * slope
        _check_split_complement(x[:nD], x[nD:], lam, "D")
        flat_base = base[:nD] - base[nD:]
        flat_slope = slope[:nD] - slope[nD:]
        out.segments.append(
            OriginalSegment(
                seg.lambda_lo,
                seg.lambda_hi,
                flat_base.reshape((d1, d2), order="F"),
                flat_slope.reshape((d1, d2), order="F"),
            )
        )
        out.supports.append(_support_of(flat_base + lam * flat_slope))
    return out
