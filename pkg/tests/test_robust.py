import random

import pytest

from robustip import (
    CostBox,
    CostList,
    GraverBasis,
    InfeasibleError,
    IntMatrix,
    ResourceLimitError,
    StandardFormSet,
    ValidationError,
    compute_graver,
    dual_profit_variant,
    enumerate_feasible,
    gen_partition_maxmin,
    gen_partition_minmax,
    max_min_box_exact,
    max_min_list,
    min_max_box,
    min_max_list_exact,
    minimize_linear,
    report_checks,
)
from robustip.robust import RobustReport
from helpers import (
    brute_max_min,
    brute_min_max,
    brute_profit_max_min,
    brute_profit_min_max,
    box_vertices,
    solved_instance,
    worst_case,
)


def interval_set(lo, hi):
    A = IntMatrix.zero(1, 1)
    return StandardFormSet(A=A, b=(0,), lower=(lo,), upper=(hi,)), GraverBasis.from_elements(A, [(1,)])


def checks_pass(report, X, cost):
    return all(ok for _, ok, _ in report_checks(report, X, cost))


class TestMinMaxBox:
    def test_interval_example(self):
        X, G = interval_set(-2, 3)
        rep = min_max_box(X, G, (-1,), (2,))
        assert rep.value == 0 and rep.optimizer == (0,)
        assert rep.method == "graver"
        assert checks_pass(rep, X, CostBox((-1,), (2,)))

    def test_degenerate_box_is_linear(self):
        rng = random.Random(2)
        for seed in range(8):
            inst, G, pts = solved_instance(seed, "box")
            X = inst.feasible_set
            c = tuple(rng.randint(-2, 2) for _ in range(X.n))
            rep = min_max_box(X, G, c, c, x0=inst.feasible_hint)
            lin = minimize_linear(X, G, c, inst.feasible_hint)
            assert rep.value == lin.final_value

    def test_matches_vertex_oracle(self):
        for seed in range(12):
            inst, G, pts = solved_instance(seed, "box")
            X, box = inst.feasible_set, inst.cost
            rep = min_max_box(X, G, box.lo, box.hi, x0=inst.feasible_hint)
            assert rep.value == brute_min_max(pts, box)
            assert checks_pass(rep, X, box)

    def test_witness_zero_coordinates_take_upper_bound(self):
        X, G = interval_set(0, 0)
        rep = min_max_box(X, G, (-5,), (7,))
        assert rep.optimizer == (0,) and rep.witness == (7,)

    def test_infeasible(self):
        X = StandardFormSet(A=IntMatrix.from_rows([[0]]), b=(1,), lower=(0,), upper=(1,))
        G = GraverBasis.from_elements(X.A, [(1,)])
        with pytest.raises(InfeasibleError):
            min_max_box(X, G, (0,), (1,))


class TestMaxMinList:
    def test_singleton_reduces_to_linear(self):
        X, G = interval_set(-2, 3)
        rep = max_min_list(X, G, CostList(((1,),)))
        assert rep.value == -2 and rep.witness == (-2,)
        assert rep.optimizer == (1,)

    def test_matches_double_oracle(self):
        for seed in range(12):
            inst, G, pts = solved_instance(seed, "list")
            X, costs = inst.feasible_set, inst.cost
            rep = max_min_list(X, G, costs, x0=inst.feasible_hint)
            assert rep.value == brute_max_min(pts, costs)
            assert checks_pass(rep, X, costs)

    def test_ties_go_to_first_listed(self):
        X, G = interval_set(0, 1)
        rep = max_min_list(X, G, CostList(((1,), (1,))))
        assert rep.optimizer == (1,)

    def test_pinned_instance_with_two_extreme_rows(self):
        inst = gen_partition_maxmin((1, 2, 3))
        X = inst.feasible_set
        costs = CostList((inst.cost.lo, inst.cost.hi))
        rep = max_min_list(X, G := inst.known_graver, costs, x0=inst.feasible_hint)
        pts = enumerate_feasible(X, 10)
        assert rep.value == brute_max_min(pts, costs)
        assert rep.value <= -3  # never beats half the total


class TestMinMaxListExact:
    def test_partition_values(self):
        inst = gen_partition_minmax((1, 2, 3))
        rep = min_max_list_exact(inst.feasible_set, inst.cost)
        assert rep.value == 3
        assert rep.method == "exact-enumeration"
        inst2 = gen_partition_minmax((2, 3, 4))
        assert min_max_list_exact(inst2.feasible_set, inst2.cost).value == 5

    def test_single_cost_is_plain_minimum(self):
        X, _ = interval_set(-2, 3)
        rep = min_max_list_exact(X, CostList(((1,),)))
        assert rep.value == -2

    def test_cap_is_inconclusive(self):
        inst = gen_partition_minmax((1, 1, 1, 1, 1))
        with pytest.raises(ResourceLimitError):
            min_max_list_exact(inst.feasible_set, inst.cost, point_cap=3)

    def test_matches_oracle_and_checks(self):
        for seed in range(10):
            inst, _, pts = solved_instance(seed, "list")
            rep = min_max_list_exact(inst.feasible_set, inst.cost)
            assert rep.value == brute_min_max(pts, inst.cost)
            assert checks_pass(rep, inst.feasible_set, inst.cost)


class TestMaxMinBoxExact:
    def test_partition_values(self):
        inst = gen_partition_maxmin((1, 2, 3))
        rep = max_min_box_exact(
            inst.feasible_set, inst.known_graver, inst.cost.lo, inst.cost.hi,
            x0=inst.feasible_hint,
        )
        assert rep.value == -3
        inst2 = gen_partition_maxmin((1, 1, 1))
        rep2 = max_min_box_exact(
            inst2.feasible_set, inst2.known_graver, inst2.cost.lo, inst2.cost.hi,
            x0=inst2.feasible_hint,
        )
        assert rep2.value == -2

    def test_degenerate_box(self):
        X, G = interval_set(-2, 3)
        rep = max_min_box_exact(X, G, (2,), (2,))
        lin = minimize_linear(X, G, (2,), (0,))
        assert rep.value == lin.final_value and rep.optimizer == (2,)

    def test_volume_cap_is_inconclusive(self):
        inst = gen_partition_maxmin((1, 1, 1, 1))
        with pytest.raises(ResourceLimitError):
            max_min_box_exact(
                inst.feasible_set, inst.known_graver, inst.cost.lo, inst.cost.hi,
                volume_cap=3,
            )

    def test_matches_oracle_and_checks(self):
        for seed in range(8):
            inst, G, pts = solved_instance(seed, "box")
            box = inst.cost
            rep = max_min_box_exact(
                inst.feasible_set, G, box.lo, box.hi, x0=inst.feasible_hint
            )
            assert rep.value == brute_max_min(pts, box)
            assert checks_pass(rep, inst.feasible_set, box)


class TestDuality:
    def test_weak_duality_lists(self):
        for seed in range(10):
            inst, G, pts = solved_instance(seed, "list")
            maxmin = max_min_list(inst.feasible_set, G, inst.cost, x0=inst.feasible_hint)
            minmax = min_max_list_exact(inst.feasible_set, inst.cost)
            assert maxmin.value <= minmax.value

    def test_weak_duality_boxes(self):
        for seed in range(8):
            inst, G, pts = solved_instance(seed, "box")
            box = inst.cost
            maxmin = max_min_box_exact(
                inst.feasible_set, G, box.lo, box.hi, x0=inst.feasible_hint
            )
            minmax = min_max_box(inst.feasible_set, G, box.lo, box.hi, x0=inst.feasible_hint)
            assert maxmin.value <= minmax.value

    def test_box_reduces_to_vertex_list(self):
        for seed in range(8):
            inst, G, pts = solved_instance(seed, "box")
            box = inst.cost
            minmax = min_max_box(inst.feasible_set, G, box.lo, box.hi, x0=inst.feasible_hint)
            vertex_list = CostList(tuple(box_vertices(box.lo, box.hi)))
            exact = min_max_list_exact(inst.feasible_set, vertex_list)
            assert minmax.value == exact.value


class TestProfitDuals:
    def test_singleton_profit_max_min_is_plain_maximum(self):
        X, G = interval_set(-2, 3)
        rep = dual_profit_variant("max-min", X, CostList(((2,),)))
        assert rep.value == 6 and rep.profit

    def test_unit_profit_box_on_binary_cube(self):
        n = 3
        A = IntMatrix.zero(1, n)
        X = StandardFormSet(A=A, b=(0,), lower=(0,) * n, upper=(1,) * n)
        G = compute_graver(A)
        rep = dual_profit_variant("max-min", X, CostBox((1,) * n, (1,) * n), G)
        assert rep.value == n

    def test_identities_against_double_enumeration(self):
        for seed in range(6):
            for kind in ("box", "list"):
                inst, G, pts = solved_instance(seed, kind)
                X, cost = inst.feasible_set, inst.cost
                decision_first = dual_profit_variant(
                    "max-min", X, cost, G, x0=inst.feasible_hint
                )
                assert decision_first.value == brute_profit_max_min(pts, cost)
                adversary_first = dual_profit_variant(
                    "min-max", X, cost, G, x0=inst.feasible_hint
                )
                assert adversary_first.value == brute_profit_min_max(pts, cost)

    def test_witnesses_map_back_into_original_cost_set(self):
        inst, G, pts = solved_instance(3, "box")
        X, box = inst.feasible_set, inst.cost
        rep = dual_profit_variant("max-min", X, box, G, x0=inst.feasible_hint)
        assert all(d <= v <= e for v, d, e in zip(rep.witness, box.lo, box.hi))
        assert sum(a * b for a, b in zip(rep.witness, rep.optimizer)) == rep.value

    def test_unknown_order_rejected(self):
        X, G = interval_set(0, 1)
        with pytest.raises(ValidationError):
            dual_profit_variant("sideways", X, CostList(((1,),)), G)

    def test_graver_required_for_graver_engines(self):
        X, _ = interval_set(0, 1)
        with pytest.raises(ValidationError):
            dual_profit_variant("max-min", X, CostBox((0,), (1,)))


class TestReportChecks:
    def test_tampered_value_fails_witness_consistency(self):
        inst = gen_partition_minmax((1, 2, 3))
        rep = min_max_list_exact(inst.feasible_set, inst.cost)
        tampered = RobustReport(
            variant=rep.variant,
            value=rep.value + 1,
            optimizer=rep.optimizer,
            witness=rep.witness,
            method=rep.method,
        )
        outcomes = dict(
            (name, ok) for name, ok, _ in report_checks(tampered, inst.feasible_set, inst.cost)
        )
        assert outcomes["witness_consistency"] is False

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValidationError):
            RobustReport(
                variant="robust-ish", value=0, optimizer=(0,), witness=(0,), method="graver"
            )
