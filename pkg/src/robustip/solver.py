"""Separable convex minimization over a standard-form set by Graver-best augmentation.

Also hosts the pruned exhaustive enumerator that doubles as the package's
exact oracle, and enumeration-backed feasibility initialization.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    IntVector,
    SeparableConvexObjective,
    StandardFormSet,
    eval_objective,
    iter_solutions,
    linear_objective,
    membership,
    vadd,
    vscale,
)
from .errors import ResourceLimitError, ValidationError
from .graver import GraverBasis

DEFAULT_MAX_STEPS = 1_000_000
DEFAULT_NODE_CAP = 10_000_000


@dataclass(frozen=True)
class TraceStep:
    direction: IntVector
    step_length: int
    value_after: int


@dataclass(frozen=True)
class AugmentationTrace:
    """Record of one augmentation run: strictly decreasing feasible walk."""

    initial_point: IntVector
    initial_value: int
    steps: tuple[TraceStep, ...]
    final_point: IntVector
    final_value: int
    reason: str  # "optimal" or "cap"

    @property
    def optimal(self) -> bool:
        return self.reason == "optimal"


def enumerate_feasible(
    X: StandardFormSet, cap: int, *, node_cap: int = DEFAULT_NODE_CAP
) -> list[IntVector]:
    """All points of X in lexicographic order; fails if more than ``cap`` exist."""
    if cap < 1:
        raise ValidationError("enumerate_feasible: cap must be >= 1")
    out: list[IntVector] = []
    for p in iter_solutions(X.A, X.b, X.lower, X.upper, node_cap=node_cap):
        out.append(p)
        if len(out) > cap:
            raise ResourceLimitError(f"feasible set exceeds cap of {cap} points")
    return out


def find_feasible(
    X: StandardFormSet,
    hint: IntVector | None = None,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
) -> IntVector | None:
    """A feasible point of X, or None when X is provably empty.

    A valid hint is returned as-is; otherwise the first leaf of the
    ascending coordinate search is returned. Exhausting the node budget
    before either outcome raises ResourceLimitError (inconclusive), which
    is distinct from proven infeasibility.
    """
    if hint is not None and len(hint) == X.n and membership(X, hint):
        return hint
    for p in iter_solutions(X.A, X.b, X.lower, X.upper, node_cap=node_cap):
        return p
    return None


def max_step_length(X: StandardFormSet, x: IntVector, g: IntVector) -> int:
    """Largest integer lam >= 0 with x + lam*g inside the bounds of X.

    Equations are preserved automatically for kernel directions, so only
    the box matters; finite bounds make the result always finite.
    """
    lam = None
    for xi, gi, lo, hi in zip(x, g, X.lower, X.upper):
        if gi > 0:
            room = (hi - xi) // gi
        elif gi < 0:
            room = (xi - lo) // (-gi)
        else:
            continue
        if lam is None or room < lam:
            lam = room
    if lam is None:
        raise ValidationError("max_step_length: zero direction")
    return max(lam, 0)


def _best_lambda(phi, lam_max: int) -> tuple[int, int]:
    """Smallest minimizer of a convex integer sequence phi on [1, lam_max].

    Ternary search on the integer interval; on plateaus the interval
    shrinks toward smaller arguments.
    """
    lo, hi = 1, lam_max
    cache: dict[int, int] = {}

    def f(t: int) -> int:
        if t not in cache:
            cache[t] = phi(t)
        return cache[t]

    while hi - lo >= 3:
        third = (hi - lo) // 3
        m1 = lo + third
        m2 = hi - third
        if f(m1) <= f(m2):
            hi = m2 - 1
        else:
            lo = m1 + 1
    best_t = lo
    best_v = f(lo)
    for t in range(lo + 1, hi + 1):
        v = f(t)
        if v < best_v:
            best_t, best_v = t, v
    return best_t, best_v


def minimize_separable_convex(
    X: StandardFormSet,
    G: GraverBasis,
    f: SeparableConvexObjective,
    x0: IntVector,
    *,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> AugmentationTrace:
    """Graver-best augmentation to a certified minimum of f over X.

    Per round, every direction in the full ± basis is paired with its best
    step length (the objective restricted to a feasible ray is convex, so
    an integer ternary search finds it); the pair with the largest decrease
    is applied. No improving pair certifies optimality. Ties go to the
    lexicographically smallest direction, then the smallest step.
    """
    if not membership(X, x0):
        raise ValidationError("minimize_separable_convex: x0 is not feasible")
    if f.n != X.n:
        raise ValidationError("minimize_separable_convex: objective length mismatch")
    if not G.matches(X.A):
        raise ValidationError("minimize_separable_convex: basis does not match X.A")

    directions = G.full()
    pieces = f.pieces
    x = x0
    value = eval_objective(f, x)
    initial_value = value
    steps: list[TraceStep] = []
    reason = "cap"

    for _ in range(max_steps):
        best = None  # (new_value, direction, lam)
        for g in directions:
            lam_max = max_step_length(X, x, g)
            if lam_max < 1:
                continue
            moving = [(i, gi) for i, gi in enumerate(g) if gi]
            static = value - sum(
                max(s * x[i] + c for s, c in pieces[i]) for i, _ in moving
            )

            def phi(lam: int) -> int:
                tot = static
                for i, gi in moving:
                    t = x[i] + lam * gi
                    tot += max(s * t + c for s, c in pieces[i])
                return tot

            lam, val = _best_lambda(phi, lam_max)
            if val < value and (best is None or val < best[0]):
                best = (val, g, lam)
        if best is None:
            reason = "optimal"
            break
        value, g, lam = best
        x = vadd(x, vscale(lam, g))
        steps.append(TraceStep(direction=g, step_length=lam, value_after=value))

    return AugmentationTrace(
        initial_point=x0,
        initial_value=initial_value,
        steps=tuple(steps),
        final_point=x,
        final_value=value,
        reason=reason,
    )


def minimize_linear(
    X: StandardFormSet,
    G: GraverBasis,
    c: IntVector,
    x0: IntVector,
    *,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> AugmentationTrace:
    """Minimize c . x over X; linear objectives are separable convex."""
    if len(c) != X.n:
        raise ValidationError("minimize_linear: cost length mismatch")
    return minimize_separable_convex(
        X, G, linear_objective(c), x0, max_steps=max_steps
    )


def improving_pair(
    X: StandardFormSet,
    G: GraverBasis,
    f: SeparableConvexObjective,
    x: IntVector,
) -> tuple[IntVector, int] | None:
    """Independent re-check: any (direction, step) that strictly improves f at x.

    Sweeps every feasible step length rather than searching, so it does not
    share logic with the augmentation loop. None certifies local (hence
    global) optimality.
    """
    base = eval_objective(f, x)
    for g in G.full():
        lam_max = max_step_length(X, x, g)
        for lam in range(1, lam_max + 1):
            if eval_objective(f, vadd(x, vscale(lam, g))) < base:
                return g, lam
    return None
