"""Path-following engine: track an optimal basis while lambda decreases.

For a parametric program (equality kind)

    maximize (c + lam c_bar)' x   s.t.   A x = b + lam b_bar,  x >= 0

a basis B induces the dictionary quantities

    x*_B = A_B^{-1} b          x~_B = A_B^{-1} b_bar
    z*_N = (A_B^{-1} A_N)' c_B - c_N
    z~_N = (A_B^{-1} A_N)' c_bar_B - c_bar_N

and the dictionary is optimal exactly for lam in [lambda_star, lambda_max]
where both x_B(lam) = x*_B + lam x~_B and z_N(lam) = z*_N + lam z~_N are
nonnegative. ``solve_path`` starts from a basis that is optimal for all large
lam, repeatedly computes the next breakpoint lambda_star, performs the pivot
that restores optimality just below it, and emits one affine path segment per
basis visited.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, TextIO, Tuple

import numpy as np

from . import linalg
from .core import (
    BasisPartition,
    ParametricProgram,
    PathSegment,
    PivotEvent,
    PivotKind,
    ProgramKind,
    SolutionPath,
    Termination,
    to_standard_form,
)
from .errors import (
    InfeasibleAtLargeLambda,
    InfeasibleProblem,
    NumericalFailure,
    UnboundedDirection,
    UpdateDegenerate,
)

logger = logging.getLogger(__name__)

# Sign tolerance for feasibility of base/perturbation entries.
FEAS_TOL = 1e-9
# Smallest denominator admitted to a ratio test.
RATIO_TOL = 1e-9
# Certificate residuals must stay below CERT_TOL * (1 + scale).
CERT_TOL = 1e-7
# Relative slack when comparing candidate breakpoints across families.
BREAKPOINT_RTOL = 1e-12


class TieBreak(Enum):
    """Tie-breaking policy for ratio tests (Bland-style; the only one)."""

    SMALLEST_INDEX = "smallest_index"


@dataclass
class SolveOptions:
    """Knobs for ``solve_path``.

    Attributes:
        lambda_target: stop once lambda_star falls to or below this value.
        max_pivots: hard cap on basis exchanges (IterationCap termination);
            None means 10x the column count of the standard-form program.
        feas_tol / ratio_tol / cert_tol: numerical tolerances (see module
            constants for defaults).
        tie_break: ratio-test tie policy; smallest column index is the only
            implemented rule.
        refresh_limit: pivots between from-scratch dictionary rebuilds.
        check_certificates: verify an optimality certificate after every
            pivot (with one refactorize-and-retry on failure).
        stop_callback: called with each newly emitted segment; returning
            True ends the path early (ReachedTarget).
        trace: writable text stream receiving one tab-separated line per
            pivot: pivot#, kind, entering, leaving, lambda_star, t, s.
    """

    lambda_target: float = 0.0
    max_pivots: Optional[int] = None
    feas_tol: float = FEAS_TOL
    ratio_tol: float = RATIO_TOL
    cert_tol: float = CERT_TOL
    tie_break: TieBreak = TieBreak.SMALLEST_INDEX
    refresh_limit: int = linalg.REFRESH_LIMIT
    check_certificates: bool = True
    stop_callback: Optional[Callable[[PathSegment], bool]] = None
    trace: Optional[TextIO] = None


@dataclass(frozen=True)
class TightConstraint:
    """The coordinate whose sign constraint becomes active at lambda_star."""

    column: int
    position: int
    in_basis: bool  # True: basic x-entry tight; False: nonbasic z-entry tight


@dataclass
class CertificateReport:
    """Residuals of an optimality certificate at a fixed lambda."""

    lambda_value: float
    primal_residual: float
    dual_residual: float
    complementarity: float
    duality_gap: float
    tolerance: float
    passed: bool


class DictionaryState:
    """Mutable solver state: partition, factorization, dictionary vectors."""

    def __init__(self, program: ParametricProgram, partition: BasisPartition):
        if program.kind is not ProgramKind.EQUALITY:
            raise ValueError("engine state requires an equality-kind program")
        if len(partition.basic) != program.m:
            raise ValueError(
                f"basis size {len(partition.basic)} != row count {program.m}"
            )
        self.program = program
        self.partition = partition
        self.fact: linalg.BasisFactorization = None  # set by refresh()
        self.xB_base = np.zeros(program.m)
        self.xB_pert = np.zeros(program.m)
        self.zN_base = np.zeros(program.n - program.m)
        self.zN_pert = np.zeros(program.n - program.m)
        self.objective_base = 0.0
        self.lambda_lo = float("-inf")
        self.lambda_hi = float("inf")
        self.refresh()

    def refresh(self) -> None:
        """Rebuild the factorization and all dictionary vectors from scratch."""
        p = self.program
        B = self.partition.basic
        N = self.partition.nonbasic
        self.fact = linalg.BasisFactorization(p.A[:, B])
        self.xB_base = self.fact.solve(p.b)
        self.xB_pert = self.fact.solve(p.b_bar)
        y = self.fact.solve_transpose(p.c[B])
        # (A' y)[N] instead of A[:, N]' y: the latter materializes a copy of
        # the nonbasic block, which dominates memory on wide problems.
        self.zN_base = (p.A.T @ y)[N] - p.c[N]
        if np.any(p.c_bar):
            y_bar = self.fact.solve_transpose(p.c_bar[B])
            self.zN_pert = (p.A.T @ y_bar)[N] - p.c_bar[N]
        else:
            self.zN_pert = np.zeros(len(N))
        self.objective_base = float(p.c[B] @ self.xB_base)

    def primal_at(self, lam: float) -> np.ndarray:
        x = np.zeros(self.program.n)
        x[self.partition.basic] = self.xB_base + lam * self.xB_pert
        return x

    def dual_at(self, lam: float) -> np.ndarray:
        z = np.zeros(self.program.n)
        z[self.partition.nonbasic] = self.zN_base + lam * self.zN_pert
        return z

    def segment(
        self,
        lambda_lo: float,
        lambda_hi: float,
        entering: Optional[int] = None,
        leaving: Optional[int] = None,
    ) -> PathSegment:
        return PathSegment(
            lambda_lo=lambda_lo,
            lambda_hi=lambda_hi,
            n_cols=self.program.n,
            primal_indices=self.partition.basic.copy(),
            primal_base=self.xB_base.copy(),
            primal_slope=self.xB_pert.copy(),
            dual_indices=self.partition.nonbasic.copy(),
            dual_base=self.zN_base.copy(),
            dual_slope=self.zN_pert.copy(),
            entering=entering,
            leaving=leaving,
        )


def initialize(
    p: ParametricProgram,
    basic: Sequence[int],
    feas_tol: float = FEAS_TOL,
    ratio_tol: float = RATIO_TOL,
) -> DictionaryState:
    """Build a DictionaryState and verify it is optimal for large lambda.

    Raises:
        SingularBasis: the chosen basis matrix cannot be factorized.
        InfeasibleAtLargeLambda: no lambda makes this dictionary optimal —
            some entry has a (near-)zero perturbation with a negative base,
            or the window [lambda_star, lambda_max] is empty.
    """
    partition = BasisPartition.from_basic(p.n, basic)
    state = DictionaryState(p, partition)

    for base, pert, what in (
        (state.xB_base, state.xB_pert, "basic value"),
        (state.zN_base, state.zN_pert, "reduced cost"),
    ):
        dead = (np.abs(pert) <= ratio_tol) & (base < -feas_tol)
        if np.any(dead):
            k = int(np.flatnonzero(dead)[0])
            raise InfeasibleAtLargeLambda(
                f"{what} at slot {k} is negative ({base[k]:.3e}) with no "
                "perturbation to repair it"
            )

    lam_star, _ = compute_lambda_star(state, ratio_tol)
    lam_max = compute_lambda_max(state, ratio_tol)
    if lam_star > lam_max + feas_tol * (1.0 + abs(lam_max)):
        raise InfeasibleAtLargeLambda(
            f"empty optimality window: lambda_star={lam_star:.6g} exceeds "
            f"lambda_max={lam_max:.6g}"
        )
    state.lambda_lo = lam_star
    state.lambda_hi = lam_max
    return state


def compute_lambda_star(
    state: DictionaryState, ratio_tol: float = RATIO_TOL
) -> Tuple[float, Optional[TightConstraint]]:
    """Smallest lambda for which the current dictionary stays optimal.

    Scans ``-base/pert`` over entries with positive perturbation in both the
    reduced-cost and basic-value families; the largest such ratio is the next
    breakpoint. Returns (-inf, None) when no entry constrains the dictionary
    from below. Within a family ties break toward the smaller column index;
    across families the nonbasic (reduced-cost) candidate wins ties.
    """
    best_lam = float("-inf")
    best: Optional[TightConstraint] = None

    for base, pert, cols, in_basis in (
        (state.zN_base, state.zN_pert, state.partition.nonbasic, False),
        (state.xB_base, state.xB_pert, state.partition.basic, True),
    ):
        mask = pert > ratio_tol
        if not np.any(mask):
            continue
        idx = np.flatnonzero(mask)
        ratios = -base[idx] / pert[idx]
        top = float(ratios.max())
        tie = idx[ratios >= top - BREAKPOINT_RTOL * (1.0 + abs(top))]
        pos = int(tie[np.argmin(cols[tie])])
        # the nonbasic family is scanned first, so it keeps cross-family ties
        if top > best_lam + BREAKPOINT_RTOL * (1.0 + abs(top)):
            best_lam = top
            best = TightConstraint(
                column=int(cols[pos]), position=pos, in_basis=in_basis
            )
    return best_lam, best


def compute_lambda_max(state: DictionaryState, ratio_tol: float = RATIO_TOL) -> float:
    """Largest lambda for which the current dictionary stays optimal (+inf
    when nothing constrains it from above)."""
    best = float("inf")
    for base, pert in (
        (state.zN_base, state.zN_pert),
        (state.xB_base, state.xB_pert),
    ):
        mask = pert < -ratio_tol
        if np.any(mask):
            best = min(best, float((-base[mask] / pert[mask]).min()))
    return best


def _ratio_pick(
    deltas: np.ndarray,
    values_at_lam: np.ndarray,
    cols: np.ndarray,
    feas_tol: float,
    ratio_tol: float,
) -> Optional[int]:
    """Position maximizing delta / value among positive deltas.

    Values below feas_tol (degenerate, possibly tiny-negative from roundoff)
    count as an infinite ratio and win outright. Ties break toward the
    smallest column index. Returns None when no delta exceeds ratio_tol.
    """
    cand = np.flatnonzero(deltas > ratio_tol)
    if cand.size == 0:
        return None
    vals = values_at_lam[cand]
    degenerate = cand[vals < feas_tol]
    if degenerate.size:
        return int(degenerate[np.argmin(cols[degenerate])])
    ratios = deltas[cand] / vals
    top = ratios.max()
    tie = cand[ratios >= top - 1e-12 * (1.0 + abs(top))]
    return int(tie[np.argmin(cols[tie])])


def _delta_z(state: DictionaryState, basic_pos: int) -> np.ndarray:
    """Row of the dictionary matrix: Delta z_N for leaving basic position."""
    e = np.zeros(state.program.m)
    e[basic_pos] = 1.0
    v = state.fact.solve_transpose(e)
    return -(state.program.A.T @ v)[state.partition.nonbasic]


def _exchange(
    state: DictionaryState,
    kB: int,
    kN: int,
    dxB: np.ndarray,
    dzN: np.ndarray,
    kind: PivotKind,
    lam_star: float,
) -> PivotEvent:
    """Apply the basis exchange at (basic pos kB) <-> (nonbasic pos kN).

    Step lengths are taken from the tight coordinates; all four dictionary
    vectors are updated in place and the swapped slots receive the step
    lengths themselves (the leaving variable's new reduced cost is (s, s_bar),
    the entering variable's new basic value is (t, t_bar)).
    """
    part = state.partition
    i = int(part.basic[kB])
    j = int(part.nonbasic[kN])
    dx_i = dxB[kB]
    dz_j = dzN[kN]

    t = state.xB_base[kB] / dx_i
    t_bar = state.xB_pert[kB] / dx_i
    s = state.zN_base[kN] / dz_j
    s_bar = state.zN_pert[kN] / dz_j

    # May raise UpdateDegenerate; state is untouched in that case.
    state.fact.replace_column(kB, state.program.A[:, j])

    state.xB_base -= t * dxB
    state.xB_base[kB] = t
    state.xB_pert -= t_bar * dxB
    state.xB_pert[kB] = t_bar
    state.zN_base -= s * dzN
    state.zN_base[kN] = s
    state.zN_pert -= s_bar * dzN
    state.zN_pert[kN] = s_bar

    part.swap(kB, kN)
    state.objective_base = float(state.program.c[part.basic] @ state.xB_base)
    return PivotEvent(
        kind=kind,
        entering=j,
        leaving=i,
        lambda_star=lam_star,
        t=float(t),
        t_bar=float(t_bar),
        s=float(s),
        s_bar=float(s_bar),
    )


def primal_pivot(
    state: DictionaryState,
    entering: int,
    lam_star: float,
    feas_tol: float = FEAS_TOL,
    ratio_tol: float = RATIO_TOL,
) -> PivotEvent:
    """Bring nonbasic column ``entering`` into the basis (its reduced cost
    hit zero at lam_star).

    The leaving variable maximizes Delta x_i / x_i(lam_star) over rows with
    Delta x_i > ratio_tol. Raises UnboundedDirection when no row blocks.
    """
    kN = state.partition.position(entering)
    dxB = state.fact.solve(state.program.A[:, entering])
    xvals = state.xB_base + lam_star * state.xB_pert
    kB = _ratio_pick(dxB, xvals, state.partition.basic, feas_tol, ratio_tol)
    if kB is None:
        raise UnboundedDirection(
            f"no blocking basic variable for entering column {entering}: "
            f"program is unbounded below lambda={lam_star:.6g}"
        )
    dzN = _delta_z(state, kB)
    return _exchange(state, kB, kN, dxB, dzN, PivotKind.PRIMAL, lam_star)


def dual_pivot(
    state: DictionaryState,
    leaving: int,
    lam_star: float,
    feas_tol: float = FEAS_TOL,
    ratio_tol: float = RATIO_TOL,
) -> PivotEvent:
    """Drop basic column ``leaving`` from the basis (its value hit zero at
    lam_star).

    The entering variable maximizes Delta z_j / z_j(lam_star) over columns
    with Delta z_j > ratio_tol. Raises InfeasibleProblem when none exists.
    """
    kB = state.partition.position(leaving)
    dzN = _delta_z(state, kB)
    zvals = state.zN_base + lam_star * state.zN_pert
    kN = _ratio_pick(dzN, zvals, state.partition.nonbasic, feas_tol, ratio_tol)
    if kN is None:
        raise InfeasibleProblem(
            f"no entering column for leaving basic variable {leaving}: "
            f"program is infeasible below lambda={lam_star:.6g}"
        )
    dxB = state.fact.solve(state.program.A[:, state.partition.nonbasic[kN]])
    return _exchange(state, kB, kN, dxB, dzN, PivotKind.DUAL, lam_star)


def verify_certificate(
    p: ParametricProgram,
    x: np.ndarray,
    z: np.ndarray,
    lam: float,
    basic: Optional[Sequence[int]] = None,
    tol: float = CERT_TOL,
) -> CertificateReport:
    """Check that (x, z) certify optimality of the LP at a fixed lambda.

    Dual multipliers y are recovered from the basis when ``basic`` is given
    (y = A_B^{-T} c_B(lam)), otherwise by least squares on A' y = z + c(lam);
    reduced costs are then recomputed from scratch, so drift in the caller's
    z does not mask dual infeasibility. Residuals:

        primal_residual:  ||A x - b(lam)||_inf, plus any negative x entry
        dual_residual:    max(0, -min_j zhat_j)
        complementarity:  max_j |x_j * z_j|
        duality_gap:      |c(lam)' x - b(lam)' y|

    Each must be <= tol * (1 + scale of the quantities involved).
    """
    if p.kind is not ProgramKind.EQUALITY:
        raise ValueError("certificates are checked on equality-kind programs")
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    cost = p.cost(lam)
    rhs = p.rhs(lam)

    if basic is not None:
        B = np.asarray(basic, dtype=np.intp)
        y = np.linalg.solve(p.A[:, B].T, cost[B])
    else:
        y, *_ = np.linalg.lstsq(p.A.T, z + cost, rcond=None)
    zhat = p.A.T @ y - cost

    rp = max(
        float(np.abs(p.A @ x - rhs).max()),
        float(max(0.0, -x.min(initial=0.0))),
    )
    rd = float(max(0.0, -zhat.min(initial=0.0)))
    rc = float(np.abs(x * z).max(initial=0.0))
    primal_obj = float(cost @ x)
    dual_obj = float(rhs @ y)
    gap = abs(primal_obj - dual_obj)

    ok = (
        rp <= tol * (1.0 + float(np.abs(rhs).max(initial=0.0)))
        and rd <= tol * (1.0 + float(np.abs(cost).max(initial=0.0)))
        and rc <= tol * (1.0 + float(np.abs(x).max(initial=0.0)) * float(np.abs(z).max(initial=0.0)))
        and gap <= tol * (1.0 + abs(primal_obj) + abs(dual_obj))
    )
    return CertificateReport(
        lambda_value=lam,
        primal_residual=rp,
        dual_residual=rd,
        complementarity=rc,
        duality_gap=gap,
        tolerance=tol,
        passed=ok,
    )


def _post_pivot_ok(state: DictionaryState, lam: float, opts: SolveOptions) -> bool:
    """Certificate plus drift check for the dictionary at ``lam``."""
    p = state.program
    B = state.partition.basic
    N = state.partition.nonbasic
    x = state.primal_at(lam)
    z = state.dual_at(lam)
    report = verify_certificate(p, x, z, lam, basic=B, tol=opts.cert_tol)
    if not report.passed:
        logger.debug("certificate failed at lambda=%g: %s", lam, report)
        return False
    # Maintained reduced costs must agree with from-scratch recomputation;
    # complementarity is structural for dictionary solutions, so this is the
    # check that actually catches accumulated update error in z.
    cost = p.cost(lam)
    y = state.fact.solve_transpose(cost[B])
    zhat_n = (p.A.T @ y)[N] - cost[N]
    scale = 1.0 + float(np.abs(zhat_n).max(initial=0.0))
    drift = float(np.abs(zhat_n - (state.zN_base + lam * state.zN_pert)).max(initial=0.0))
    if drift > opts.cert_tol * scale:
        logger.debug("dictionary drift %.3e at lambda=%g", drift, lam)
        return False
    return True


def _pivot_at(state: DictionaryState, tight: TightConstraint, lam_star: float,
              opts: SolveOptions) -> PivotEvent:
    if tight.in_basis:
        return dual_pivot(state, tight.column, lam_star, opts.feas_tol, opts.ratio_tol)
    return primal_pivot(state, tight.column, lam_star, opts.feas_tol, opts.ratio_tol)


def solve_path(
    p: ParametricProgram,
    options: Optional[SolveOptions] = None,
    initial_basis: Optional[Sequence[int]] = None,
    **kwargs,
) -> SolutionPath:
    """Follow the optimal-basis path of ``p`` from large lambda downward.

    Args:
        p: the parametric program. <= programs are converted to equality
            form internally (slack columns appended); the returned path is
            expressed in those standard-form coordinates and carries
            ``slack_info`` for mapping back.
        options: SolveOptions; keyword arguments override its fields
            (e.g. ``solve_path(p, lambda_target=1.5)``).
        initial_basis: basic column indices (standard-form numbering).
            Required for equality programs; defaults to the slack basis for
            <= programs.

    Returns:
        SolutionPath with one segment per dictionary visited (highest lambda
        first) and one PivotEvent per basis exchange.

    Raises:
        InfeasibleAtLargeLambda: the starting basis is never optimal.
        SingularBasis: the starting basis cannot be factorized.
        NumericalFailure is *not* raised: it is reported as a termination
        status after the refactorize-and-retry protocol fails.
    """
    opts = options or SolveOptions()
    if kwargs:
        opts = SolveOptions(**{**opts.__dict__, **kwargs})

    p_std, slack = to_standard_form(p)
    if initial_basis is not None:
        basic = list(initial_basis)
    elif slack is not None:
        basic = [slack.slack_index(r) for r in range(slack.num_rows)]
    else:
        raise ValueError("equality programs need an initial_basis")
    max_pivots = opts.max_pivots if opts.max_pivots is not None else 10 * p_std.n

    state = initialize(p_std, basic, opts.feas_tol, opts.ratio_tol)
    path = SolutionPath(num_cols=p_std.n, slack_info=slack)
    lam_hi = state.lambda_hi
    entering: Optional[int] = None
    leaving: Optional[int] = None
    pivots = 0
    pivots_since_refresh = 0

    while True:
        lam_star, tight = compute_lambda_star(state, opts.ratio_tol)
        state.lambda_lo, state.lambda_hi = lam_star, lam_hi
        seg = state.segment(lam_star, lam_hi, entering, leaving)
        path.segments.append(seg)

        if tight is None:  # optimal all the way down
            path.termination = Termination.REACHED_TARGET
            path.terminal_lambda = opts.lambda_target
            break
        if lam_star <= opts.lambda_target and (
            opts.lambda_target > 0.0 or lam_star > 0.0
        ):
            path.termination = Termination.REACHED_TARGET
            path.terminal_lambda = opts.lambda_target
            break
        if lam_star <= 0.0:
            path.termination = Termination.LAMBDA_NONPOSITIVE
            path.terminal_lambda = max(lam_star, 0.0) + 0.0  # drop -0.0
            break
        if opts.stop_callback is not None and opts.stop_callback(seg):
            path.termination = Termination.REACHED_TARGET
            path.terminal_lambda = lam_star
            break
        if pivots >= max_pivots:
            path.termination = Termination.ITERATION_CAP
            path.terminal_lambda = lam_star
            break

        snapshot = state.partition.copy()
        try:
            event = _try_pivot(state, snapshot, tight, lam_star, opts)
        except UnboundedDirection:
            path.termination = Termination.UNBOUNDED
            path.terminal_lambda = lam_star
            break
        except InfeasibleProblem:
            path.termination = Termination.INFEASIBLE
            path.terminal_lambda = lam_star
            break
        except NumericalFailure:
            path.termination = Termination.NUMERICAL_FAILURE
            path.terminal_lambda = lam_star
            break

        pivots += 1
        path.events.append(event)
        entering, leaving = event.entering, event.leaving
        if opts.trace is not None:
            opts.trace.write(
                f"{pivots}\t{event.kind.value}\t{event.entering}\t{event.leaving}"
                f"\t{event.lambda_star:.12g}\t{event.t:.6g}\t{event.s:.6g}\n"
            )
        logger.debug(
            "pivot %d (%s): entering=%d leaving=%d lambda*=%.9g",
            pivots, event.kind.value, event.entering, event.leaving, lam_star,
        )
        pivots_since_refresh += 1
        if pivots_since_refresh >= opts.refresh_limit:
            state.refresh()
            pivots_since_refresh = 0
        lam_hi = lam_star

    return path


def _try_pivot(
    state: DictionaryState,
    snapshot: BasisPartition,
    tight: TightConstraint,
    lam_star: float,
    opts: SolveOptions,
) -> PivotEvent:
    """One pivot with the certificate/retry protocol.

    On a failed post-pivot check (or a degenerate update), the partition is
    rolled back, everything is refactorized from scratch, the breakpoint is
    recomputed, and the pivot is retried once. A second failure is a
    NumericalFailure.
    """
    try:
        event = _exchange_checked(state, tight, lam_star, opts)
        if event is not None:
            return event
    except UpdateDegenerate:
        pass

    # Roll back and retry on fresh numbers.
    state.partition = snapshot
    state.refresh()
    lam2, tight2 = compute_lambda_star(state, opts.ratio_tol)
    if tight2 is None:
        raise NumericalFailure(
            "breakpoint vanished after refactorization (was "
            f"lambda*={lam_star:.6g})"
        )
    logger.info(
        "retrying pivot after refactorization: lambda*=%.9g -> %.9g",
        lam_star, lam2,
    )
    try:
        event = _exchange_checked(state, tight2, lam2, opts)
    except UpdateDegenerate as exc:
        raise NumericalFailure(f"degenerate update on retry: {exc}") from exc
    if event is None:
        raise NumericalFailure(
            f"certificate still failing after refactorization at "
            f"lambda*={lam2:.6g}"
        )
    return event


def _exchange_checked(
    state: DictionaryState,
    tight: TightConstraint,
    lam_star: float,
    opts: SolveOptions,
) -> Optional[PivotEvent]:
    """Pivot and validate; None signals a failed check (caller retries)."""
    event = _pivot_at(state, tight, lam_star, opts)
    if opts.check_certificates and not _post_pivot_ok(state, lam_star, opts):
        return None
    return event
