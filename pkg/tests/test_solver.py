import random

import pytest

from robustip import (
    GraverBasis,
    IntMatrix,
    ResourceLimitError,
    StandardFormSet,
    ValidationError,
    box_objective,
    compute_graver,
    enumerate_feasible,
    eval_objective,
    find_feasible,
    gen_partition_maxmin,
    gen_partition_minmax,
    gen_random,
    improving_pair,
    linear_objective,
    max_step_length,
    membership,
    minimize_linear,
    minimize_separable_convex,
)
from helpers import worst_case


def interval_set(lo, hi):
    """One free integer variable in [lo, hi] (single all-zero equation row)."""
    A = IntMatrix.zero(1, 1)
    return StandardFormSet(A=A, b=(0,), lower=(lo,), upper=(hi,)), GraverBasis.from_elements(A, [(1,)])


class TestEnumeration:
    def test_pinned_instance_has_exactly_two_points(self):
        inst = gen_partition_maxmin((1, 2, 3))
        pts = enumerate_feasible(inst.feasible_set, 10)
        assert pts == [(-6, 1, 2, 3, 1), (0, -1, -2, -3, 0)]

    def test_contradictory_row(self):
        X = StandardFormSet(A=IntMatrix.from_rows([[0]]), b=(1,), lower=(0,), upper=(9,))
        assert enumerate_feasible(X, 10) == []

    def test_free_binary_cube_with_pinned_head(self):
        inst = gen_partition_minmax((1, 2))
        pts = enumerate_feasible(inst.feasible_set, 10)
        assert len(pts) == 4
        assert all(p[0] == 1 for p in pts)

    def test_cap_exceeded(self):
        X = StandardFormSet(A=IntMatrix.zero(0, 3), b=(), lower=(0, 0, 0), upper=(3, 3, 3))
        with pytest.raises(ResourceLimitError):
            enumerate_feasible(X, 10)

    def test_lexicographic_order(self):
        X = StandardFormSet(
            A=IntMatrix.from_rows([[1, 1]]), b=(1,), lower=(-1, -1), upper=(2, 2)
        )
        pts = enumerate_feasible(X, 10)
        assert pts == sorted(pts)
        assert set(pts) == {(-1, 2), (0, 1), (1, 0), (2, -1)}


class TestFindFeasible:
    def test_valid_hint_returned(self):
        inst = gen_partition_maxmin((2, 3))
        hint = inst.known_points[1]
        assert find_feasible(inst.feasible_set, hint) == hint

    def test_invalid_hint_falls_back_to_search(self):
        inst = gen_partition_minmax((1, 2))
        assert find_feasible(inst.feasible_set, (9, 9, 9)) == (1, 0, 0)

    def test_no_hint_first_leaf(self):
        inst = gen_partition_minmax((1, 2))
        assert find_feasible(inst.feasible_set) == (1, 0, 0)

    def test_proven_infeasible_is_none(self):
        X = StandardFormSet(A=IntMatrix.from_rows([[0]]), b=(1,), lower=(0,), upper=(9,))
        assert find_feasible(X) is None

    def test_budget_exhaustion_is_inconclusive(self):
        # infeasible by parity, which interval pruning cannot see; the walk
        # is cut before the search proves emptiness
        X = StandardFormSet(
            A=IntMatrix.from_rows([[2, 2]]), b=(1,), lower=(-30, -30), upper=(30, 30)
        )
        with pytest.raises(ResourceLimitError):
            find_feasible(X, node_cap=2)
        assert find_feasible(X) is None


class TestStepLength:
    def test_formula_against_sweep(self):
        rng = random.Random(17)
        for _ in range(60):
            inst = gen_random(n=4, rows=1, seed=rng.randint(0, 9999), width=3)
            X = inst.feasible_set
            x = inst.feasible_hint
            G = compute_graver(X.A)
            for g in G.full():
                lam = max_step_length(X, x, g)
                stepped = tuple(a + lam * b for a, b in zip(x, g))
                beyond = tuple(a + (lam + 1) * b for a, b in zip(x, g))
                assert membership(X, stepped)
                assert not membership(X, beyond)

    def test_zero_direction_rejected(self):
        X, _ = interval_set(0, 1)
        with pytest.raises(ValidationError):
            max_step_length(X, (0,), (0,))


class TestMinimize:
    def test_linear_walks_to_bound(self):
        X, G = interval_set(-2, 3)
        trace = minimize_linear(X, G, (1,), (3,))
        assert trace.final_point == (-2,) and trace.final_value == -2
        assert trace.reason == "optimal"

    def test_box_objective_interior_minimum(self):
        X, G = interval_set(-2, 3)
        trace = minimize_separable_convex(X, G, box_objective((-1,), (2,)), (3,))
        assert trace.final_point == (0,) and trace.final_value == 0

    def test_pinned_instance_stays_at_start(self):
        inst = gen_partition_maxmin((1, 2, 3))
        trace = minimize_linear(
            inst.feasible_set,
            inst.known_graver,
            (1, 1, 1, 1, 0),
            (0, -1, -2, -3, 0),
        )
        assert trace.final_point == (0, -1, -2, -3, 0)
        assert trace.final_value == -6

    def test_zero_cost_returns_start(self):
        X, G = interval_set(-2, 3)
        trace = minimize_linear(X, G, (0,), (1,))
        assert trace.final_point == (1,) and trace.final_value == 0
        assert trace.steps == ()

    def test_negative_cost_walks_up(self):
        X, G = interval_set(-2, 3)
        trace = minimize_linear(X, G, (-1,), (0,))
        assert trace.final_point == (3,) and trace.final_value == -3

    def test_infeasible_start_rejected(self):
        X, G = interval_set(-2, 3)
        with pytest.raises(ValidationError):
            minimize_linear(X, G, (1,), (9,))

    def test_mismatched_basis_rejected(self):
        X, _ = interval_set(-2, 3)
        other = GraverBasis.from_elements(IntMatrix.zero(1, 2), [(1, 0)])
        with pytest.raises(ValidationError):
            minimize_linear(X, other, (1,), (0,))

    def test_step_cap_reported(self):
        X, G = interval_set(0, 50)
        # force one-unit steps by an objective convex around a far point
        trace = minimize_separable_convex(
            X, G, box_objective((-1,), (-1,)), (0,), max_steps=1
        )
        assert trace.reason == "cap"
        assert len(trace.steps) == 1

    def test_trace_is_strictly_decreasing_and_feasible(self):
        rng = random.Random(4)
        for _ in range(25):
            inst = gen_random(n=4, rows=1, seed=rng.randint(0, 10**6), width=3)
            X = inst.feasible_set
            G = compute_graver(X.A)
            f = box_objective(*_random_box(rng, 4))
            trace = minimize_separable_convex(X, G, f, inst.feasible_hint)
            assert trace.reason == "optimal"
            x = trace.initial_point
            value = trace.initial_value
            assert eval_objective(f, x) == value
            for step in trace.steps:
                x = tuple(a + step.step_length * b for a, b in zip(x, step.direction))
                assert membership(X, x)
                assert eval_objective(f, x) == step.value_after
                assert step.value_after < value
                value = step.value_after
            assert x == trace.final_point and value == trace.final_value

    def test_matches_enumeration_oracle(self):
        rng = random.Random(12)
        for _ in range(30):
            inst = gen_random(
                n=rng.randint(2, 5), rows=rng.randint(1, 2), seed=rng.randint(0, 10**6)
            )
            X = inst.feasible_set
            G = compute_graver(X.A)
            pts = enumerate_feasible(X, 5000)
            lo, hi = _random_box(rng, X.n)
            f = box_objective(lo, hi)
            trace = minimize_separable_convex(X, G, f, inst.feasible_hint)
            assert trace.final_value == min(eval_objective(f, p) for p in pts)
            c = tuple(rng.randint(-3, 3) for _ in range(X.n))
            lin = minimize_linear(X, G, c, inst.feasible_hint)
            assert lin.final_value == min(sum(a * b for a, b in zip(c, p)) for p in pts)

    def test_final_point_admits_no_improving_pair(self):
        rng = random.Random(31)
        for _ in range(10):
            inst = gen_random(n=4, rows=2, seed=rng.randint(0, 10**6))
            X = inst.feasible_set
            G = compute_graver(X.A)
            f = box_objective(*_random_box(rng, 4))
            trace = minimize_separable_convex(X, G, f, inst.feasible_hint)
            assert improving_pair(X, G, f, trace.final_point) is None

    def test_improving_pair_found_when_start_suboptimal(self):
        X, G = interval_set(-2, 3)
        f = linear_objective((1,))
        assert improving_pair(X, G, f, (3,)) is not None


def _random_box(rng, n):
    lo = tuple(rng.randint(-2, 2) for _ in range(n))
    hi = tuple(v + rng.randint(0, 2) for v in lo)
    return lo, hi
