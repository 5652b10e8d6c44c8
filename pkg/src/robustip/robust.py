"""The four robust counterparts of integer programming under cost uncertainty.

Decision-first problems (min over the set, max over the costs) and
adversary-first problems (max over the costs, min over the set), each with
an explicit cost list or an integer cost box. Two of the four are solved in
polynomial time through Graver-best augmentation; the two intractable ones
are solved exactly by bounded enumeration and report "inconclusive" rather
than guessing when their caps are hit. Profit-side problems reduce to the
cost-side ones by negating the cost set.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .core import (
    CostBox,
    CostList,
    CostModel,
    IntVector,
    StandardFormSet,
    box_objective,
    dot,
    membership,
    vneg,
)
from .errors import InfeasibleError, ResourceLimitError, ValidationError
from .graver import GraverBasis
from .solver import (
    AugmentationTrace,
    DEFAULT_MAX_STEPS,
    DEFAULT_NODE_CAP,
    enumerate_feasible,
    find_feasible,
    minimize_linear,
    minimize_separable_convex,
)

MIN_MAX_LIST = "minmax-list"
MIN_MAX_BOX = "minmax-box"
MAX_MIN_LIST = "maxmin-list"
MAX_MIN_BOX = "maxmin-box"

METHOD_GRAVER = "graver"
METHOD_EXACT_ENUMERATION = "exact-enumeration"

DEFAULT_POINT_CAP = 200_000
DEFAULT_VOLUME_CAP = 1_000_000


@dataclass(frozen=True)
class RobustReport:
    """Solved robust instance: value, outer optimizer, inner witness.

    For decision-first variants the optimizer is a point of X and the
    witness is an adversarial cost attaining the value; for adversary-first
    variants the roles are swapped. ``profit`` marks reports produced
    through the cost-to-profit negation identities.
    """

    variant: str
    value: int
    optimizer: IntVector
    witness: IntVector
    method: str
    profit: bool = False
    trace: AugmentationTrace | None = None
    stats: Mapping[str, int] = MappingProxyType({})

    def __post_init__(self):
        if self.variant not in (MIN_MAX_LIST, MIN_MAX_BOX, MAX_MIN_LIST, MAX_MIN_BOX):
            raise ValidationError(f"unknown variant {self.variant!r}")


def _check(condition: bool, label: str) -> None:
    if not condition:
        raise RuntimeError(f"internal witness inconsistency: {label}")


def _initial_point(
    X: StandardFormSet, x0: IntVector | None, node_cap: int
) -> IntVector:
    start = find_feasible(X, x0, node_cap=node_cap)
    if start is None:
        raise InfeasibleError("feasible set is empty")
    return start


def min_max_box(
    X: StandardFormSet,
    G: GraverBasis,
    d: IntVector,
    e: IntVector,
    *,
    x0: IntVector | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    node_cap: int = DEFAULT_NODE_CAP,
) -> RobustReport:
    """min over X of the worst cost in the box [d, e]; polynomial given G.

    The worst-case cost of x is the separable convex function
    sum_i max(d_i x_i, e_i x_i), minimized by Graver-best augmentation.
    """
    box = CostBox(d, e)
    if box.n != X.n:
        raise ValidationError("min_max_box: cost box length mismatch")
    start = _initial_point(X, x0, node_cap)
    trace = minimize_separable_convex(
        X, G, box_objective(d, e), start, max_steps=max_steps
    )
    if trace.reason != "optimal":
        raise ResourceLimitError("augmentation step cap exceeded")
    x_star = trace.final_point
    value, witness = box.max_at(x_star)
    _check(value == trace.final_value, "box worst case differs from final value")
    _check(dot(witness, x_star) == value, "witness cost does not attain value")
    return RobustReport(
        variant=MIN_MAX_BOX,
        value=value,
        optimizer=x_star,
        witness=witness,
        method=METHOD_GRAVER,
        trace=trace,
        stats=MappingProxyType({"augmentation_steps": len(trace.steps)}),
    )


def max_min_list(
    X: StandardFormSet,
    G: GraverBasis,
    costs: CostList,
    *,
    x0: IntVector | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    node_cap: int = DEFAULT_NODE_CAP,
) -> RobustReport:
    """max over listed costs c of (min over X of c . x); polynomial given G.

    One linear Graver solve per cost; ties between costs go to the earliest
    list position.
    """
    if costs.n != X.n:
        raise ValidationError("max_min_list: cost length mismatch")
    start = _initial_point(X, x0, node_cap)
    best = None  # (value, cost, inner argmin, trace)
    for c in costs.vectors:
        trace = minimize_linear(X, G, c, start, max_steps=max_steps)
        if trace.reason != "optimal":
            raise ResourceLimitError("augmentation step cap exceeded")
        if best is None or trace.final_value > best[0]:
            best = (trace.final_value, c, trace.final_point, trace)
    value, c_star, x_witness, trace = best
    _check(dot(c_star, x_witness) == value, "inner minimum does not attain value")
    _check(membership(X, x_witness), "witness point left the feasible set")
    return RobustReport(
        variant=MAX_MIN_LIST,
        value=value,
        optimizer=c_star,
        witness=x_witness,
        method=METHOD_GRAVER,
        trace=trace,
        stats=MappingProxyType({"costs_solved": len(costs.vectors)}),
    )


def min_max_list_exact(
    X: StandardFormSet,
    costs: CostList,
    *,
    point_cap: int = DEFAULT_POINT_CAP,
    node_cap: int = DEFAULT_NODE_CAP,
) -> RobustReport:
    """min over X of the worst listed cost, by exhaustive enumeration of X.

    This variant is NP-hard in general; the enumeration cap bounds the desk
    scale, and exceeding it raises ResourceLimitError (inconclusive).
    """
    if costs.n != X.n:
        raise ValidationError("min_max_list_exact: cost length mismatch")
    points = enumerate_feasible(X, point_cap, node_cap=node_cap)
    if not points:
        raise InfeasibleError("feasible set is empty")
    best = None  # (value, x, witness cost)
    for x in points:
        val, witness = costs.max_at(x)
        if best is None or val < best[0]:
            best = (val, x, witness)
    value, x_star, witness = best
    return RobustReport(
        variant=MIN_MAX_LIST,
        value=value,
        optimizer=x_star,
        witness=witness,
        method=METHOD_EXACT_ENUMERATION,
        stats=MappingProxyType({"points_enumerated": len(points)}),
    )


def max_min_box_exact(
    X: StandardFormSet,
    G: GraverBasis,
    d: IntVector,
    e: IntVector,
    *,
    x0: IntVector | None = None,
    volume_cap: int = DEFAULT_VOLUME_CAP,
    max_steps: int = DEFAULT_MAX_STEPS,
    node_cap: int = DEFAULT_NODE_CAP,
) -> RobustReport:
    """max over integer costs in [d, e] of (min over X of c . x).

    NP-hard in general: the outer box is enumerated exhaustively (capped),
    each inner minimum is a polynomial linear Graver solve. Ties go to the
    lexicographically smallest cost.
    """
    box = CostBox(d, e)
    if box.n != X.n:
        raise ValidationError("max_min_box_exact: cost box length mismatch")
    start = _initial_point(X, x0, node_cap)
    best = None  # (value, cost, inner argmin)
    count = 0
    for c in box.points(volume_cap=volume_cap):
        count += 1
        trace = minimize_linear(X, G, c, start, max_steps=max_steps)
        if trace.reason != "optimal":
            raise ResourceLimitError("augmentation step cap exceeded")
        if best is None or trace.final_value > best[0]:
            best = (trace.final_value, c, trace.final_point)
    value, c_star, x_witness = best
    _check(dot(c_star, x_witness) == value, "inner minimum does not attain value")
    return RobustReport(
        variant=MAX_MIN_BOX,
        value=value,
        optimizer=c_star,
        witness=x_witness,
        method=METHOD_EXACT_ENUMERATION,
        stats=MappingProxyType({"costs_enumerated": count}),
    )


PROFIT_DECISION_FIRST = "max-min"  # max over X, then min over costs
PROFIT_ADVERSARY_FIRST = "min-max"  # min over costs, then max over X


def dual_profit_variant(
    order: str,
    X: StandardFormSet,
    cost: CostModel,
    G: GraverBasis | None = None,
    **caps,
) -> RobustReport:
    """Profit-side problems via the negation identities.

    ``order`` "max-min" solves max_{x in X} min_{c in C} c.x; "min-max"
    solves min_{c in C} max_{x in X} c.x. Both negate the cost set, call
    the matching cost-side solver, negate the value, and map the witnesses
    back into the original cost set. Graver-requiring engines need G.
    """
    if order not in (PROFIT_DECISION_FIRST, PROFIT_ADVERSARY_FIRST):
        raise ValidationError(f"unknown profit order {order!r}")
    neg = cost.negated()
    if order == PROFIT_DECISION_FIRST:
        if isinstance(neg, CostBox):
            if G is None:
                raise ValidationError("profit max-min over a box needs a Graver basis")
            inner = min_max_box(X, G, neg.lo, neg.hi, **caps)
        else:
            inner = min_max_list_exact(X, neg, **caps)
        optimizer, witness = inner.optimizer, vneg(inner.witness)
    else:
        if isinstance(neg, CostList):
            if G is None:
                raise ValidationError("profit min-max over a list needs a Graver basis")
            inner = max_min_list(X, G, neg, **caps)
        else:
            if G is None:
                raise ValidationError("profit min-max over a box needs a Graver basis")
            inner = max_min_box_exact(X, G, neg.lo, neg.hi, **caps)
        optimizer, witness = vneg(inner.optimizer), inner.witness
    return RobustReport(
        variant=inner.variant,
        value=-inner.value,
        optimizer=optimizer,
        witness=witness,
        method=inner.method,
        profit=True,
        trace=inner.trace,
        stats=inner.stats,
    )


def report_checks(
    report: RobustReport,
    X: StandardFormSet,
    cost: CostModel,
    *,
    point_cap: int = DEFAULT_POINT_CAP,
    node_cap: int = DEFAULT_NODE_CAP,
) -> list[tuple[str, bool, str]]:
    """Re-derive a report's value from optimizer, witness and instance alone.

    Returns (check name, passed, detail) triples. The inner problem is
    re-evaluated: worst case directly for decision-first reports, an
    enumeration re-solve for adversary-first ones.
    """
    checks: list[tuple[str, bool, str]] = []

    def add(name: str, ok: bool, detail: str = "") -> None:
        checks.append((name, ok, detail))

    decision_first = report.variant in (MIN_MAX_LIST, MIN_MAX_BOX)
    x_vec = report.optimizer if decision_first else report.witness
    c_vec = report.witness if decision_first else report.optimizer

    ok_len = len(x_vec) == X.n and len(c_vec) == cost.n
    add("dimensions", ok_len)
    if not ok_len:
        return checks

    add("point_feasible", membership(X, x_vec), f"point {list(x_vec)}")
    if isinstance(cost, CostList):
        add("cost_in_model", c_vec in cost.vectors, "cost not in the list")
    else:
        inside = all(d <= v <= e for v, d, e in zip(c_vec, cost.lo, cost.hi))
        add("cost_in_model", inside, "cost outside the box")

    attained = dot(c_vec, x_vec)
    add(
        "witness_consistency",
        attained == report.value,
        f"c.x = {attained}, reported value {report.value}",
    )

    if report.profit:
        # inner re-solve identities are exercised through the cost-side tests
        return checks

    if decision_first:
        worst, _ = cost.max_at(x_vec)
        add("inner_reeval", worst == report.value, f"worst case {worst}")
    else:
        try:
            points = enumerate_feasible(X, point_cap, node_cap=node_cap)
            inner = min(dot(c_vec, p) for p in points)
            add("inner_reeval", inner == report.value, f"inner minimum {inner}")
        except ResourceLimitError:
            add("inner_reeval", True, "skipped: enumeration cap")
    return checks
