"""Shared brute-force oracles and samplers for the test suite.

Everything here is deliberately independent of the solver paths it checks:
plain loops over explicitly enumerated points and cost vectors.
"""
from itertools import product

from robustip import CostBox, CostList, IntMatrix, compute_graver, gen_random
from robustip.core import dot
from robustip.solver import enumerate_feasible


def box_points(lo, hi):
    return [tuple(c) for c in product(*[range(d, e + 1) for d, e in zip(lo, hi)])]


def box_vertices(lo, hi):
    return [tuple(c) for c in product(*[(d, e) if d != e else (d,) for d, e in zip(lo, hi)])]


def worst_case(cost, x):
    if isinstance(cost, CostList):
        return max(dot(c, x) for c in cost.vectors)
    return max(dot(c, x) for c in box_vertices(cost.lo, cost.hi))


def best_case(cost, x):
    if isinstance(cost, CostList):
        return min(dot(c, x) for c in cost.vectors)
    return min(dot(c, x) for c in box_points(cost.lo, cost.hi))


def brute_min_max(points, cost):
    return min(worst_case(cost, x) for x in points)


def brute_max_min(points, cost):
    if isinstance(cost, CostList):
        candidates = cost.vectors
    else:
        candidates = box_points(cost.lo, cost.hi)
    return max(min(dot(c, x) for x in points) for c in candidates)


def brute_profit_max_min(points, cost):
    """max over x of the best (smallest) cost: profit decision-first."""
    return max(best_case(cost, x) for x in points)


def brute_profit_min_max(points, cost):
    """min over costs of max over x: profit adversary-first."""
    if isinstance(cost, CostList):
        candidates = cost.vectors
    else:
        candidates = box_points(cost.lo, cost.hi)
    return min(max(dot(c, x) for x in points) for c in candidates)


def has_equal_partition(a):
    """Subset-sum check by direct enumeration; independent of any solver."""
    total = sum(a)
    if total % 2:
        return False
    half = total // 2
    sums = {0}
    for v in a:
        sums |= {s + v for s in sums}
    return half in sums


# shape schedule keeping |X| and box volumes at desk scale
_WIDTH_BY_N = {1: 3, 2: 3, 3: 3, 4: 2, 5: 2, 6: 1}


def oracle_instance(seed, cost_kind):
    """Seeded random instance sized for exhaustive double enumeration."""
    n = 3 + seed % 4
    rows = 1 + (seed // 4) % 2
    return gen_random(
        n,
        rows,
        seed,
        entry_bound=2,
        width=_WIDTH_BY_N[n],
        base_bound=3,
        cost_kind=cost_kind,
        list_size=1 + seed % 5,
        cost_bound=2,
        cost_width=1 + seed % 2,
        point_cap=5000,
    )


def solved_instance(seed, cost_kind):
    """Instance plus its Graver basis and enumerated points."""
    inst = oracle_instance(seed, cost_kind)
    X = inst.feasible_set
    basis = compute_graver(X.A)
    points = enumerate_feasible(X, 5000)
    return inst, basis, points


def random_small_matrix(rng):
    m = rng.randint(1, 3)
    n = rng.randint(2, 5)
    return IntMatrix.from_rows(
        [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
    )
