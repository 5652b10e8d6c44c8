import pytest
from hypothesis import given, strategies as st

from robustip import (
    CostBox,
    CostList,
    DimensionError,
    IntMatrix,
    SeparableConvexObjective,
    StandardFormSet,
    ValidationError,
    box_objective,
    conformal_leq,
    eval_objective,
    gen_partition_maxmin,
    linear_objective,
    membership,
)
from helpers import box_vertices

small_vec = st.lists(st.integers(-9, 9), min_size=1, max_size=6)


class TestConformalOrder:
    def test_examples(self):
        assert conformal_leq((1, 0), (2, 1))
        assert not conformal_leq((1, -1), (2, 1))
        assert conformal_leq((0, 0), (5, -7))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            conformal_leq((1,), (1, 2))

    def test_zero_below_everything(self):
        for y in [(5, -7), (0,), (-1, -2, -3)]:
            assert conformal_leq((0,) * len(y), y)

    @given(small_vec)
    def test_reflexive(self, x):
        assert conformal_leq(tuple(x), tuple(x))

    @given(st.integers(1, 5), st.data())
    def test_antisymmetric(self, n, data):
        x = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=n, max_size=n)))
        y = tuple(data.draw(st.lists(st.integers(-4, 4), min_size=n, max_size=n)))
        if conformal_leq(x, y) and conformal_leq(y, x):
            assert x == y

    @given(st.integers(1, 5), st.data())
    def test_transitive(self, n, data):
        draw = lambda: tuple(data.draw(st.lists(st.integers(-4, 4), min_size=n, max_size=n)))
        x, y, z = draw(), draw(), draw()
        if conformal_leq(x, y) and conformal_leq(y, z):
            assert conformal_leq(x, z)


class TestObjective:
    def test_eval_examples(self):
        f = box_objective((-1,), (2,))
        assert eval_objective(f, (-1,)) == 1
        assert eval_objective(f, (0,)) == 0
        f2 = box_objective((1, 0), (3, 2))
        assert eval_objective(f2, (2, -1)) == 6

    def test_box_objective_examples(self):
        assert eval_objective(box_objective((0,), (0,)), (7,)) == 0
        f = box_objective((-2,), (5,))
        assert eval_objective(f, (3,)) == 15
        assert eval_objective(f, (-3,)) == 6
        linear = box_objective((1,), (1,))
        assert linear.pieces == (((1, 0),),)
        assert eval_objective(linear, (4,)) == 4

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            eval_objective(box_objective((0,), (1,)), (1, 2))

    def test_box_requires_ordered_bounds(self):
        with pytest.raises(ValidationError):
            box_objective((3,), (1,))

    def test_canonicalization_drops_dominated_piece(self):
        f = SeparableConvexObjective((((0, 0), (1, 0), (2, 0)),))
        assert f.pieces == (((0, 0), (2, 0)),)

    def test_equal_slopes_keep_best_intercept(self):
        f = SeparableConvexObjective((((1, 0), (1, 5), (1, -2)),))
        assert f.pieces == (((1, 5),),)

    def test_empty_pieces_rejected(self):
        with pytest.raises(ValidationError):
            SeparableConvexObjective(((),))

    @given(
        st.lists(
            st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=6
        ),
        st.integers(-8, 8),
    )
    def test_envelope_preserves_values(self, pieces, t):
        f = SeparableConvexObjective((tuple(pieces),))
        raw = max(s * t + c for s, c in pieces)
        assert eval_objective(f, (t,)) == raw

    def test_slopes_strictly_increase_after_canonicalization(self):
        f = SeparableConvexObjective((((2, 1), (-1, 0), (2, 3), (0, 0)),))
        slopes = [s for s, _ in f.pieces[0]]
        assert slopes == sorted(set(slopes))

    def test_box_objective_matches_vertex_maximum(self):
        lo = (-2, 0, -1, 1)
        hi = (1, 2, -1, 3)
        f = box_objective(lo, hi)
        for x in [(-2, 1, 0, 4), (0, 0, 0, 0), (3, -2, 1, -1)]:
            vertex = max(sum(c * v for c, v in zip(cv, x)) for cv in box_vertices(lo, hi))
            assert eval_objective(f, x) == vertex

    def test_linear_objective(self):
        f = linear_objective((2, -3))
        assert eval_objective(f, (4, 1)) == 5


class TestMembership:
    def test_known_points_of_pinned_instance(self):
        inst = gen_partition_maxmin((1, 2, 3))
        X = inst.feasible_set
        assert membership(X, (0, -1, -2, -3, 0))
        assert membership(X, (-6, 1, 2, 3, 1))
        assert not membership(X, (0, 0, 0, 0, 0))

    def test_bound_violation(self):
        X = StandardFormSet(
            A=IntMatrix.zero(1, 2), b=(0,), lower=(0, 0), upper=(1, 1)
        )
        assert not membership(X, (2, 0))
        assert membership(X, (1, 1))

    def test_dimension_mismatch(self):
        X = StandardFormSet(A=IntMatrix.zero(1, 2), b=(0,), lower=(0, 0), upper=(1, 1))
        with pytest.raises(DimensionError):
            membership(X, (0,))

    def test_brute_force_consistency(self):
        A = IntMatrix.from_rows([[1, 1, -1]])
        X = StandardFormSet(A=A, b=(1,), lower=(-1, -1, -1), upper=(2, 2, 2))
        from itertools import product

        for x in product(range(-1, 3), repeat=3):
            expected = (
                sum(a * v for a, v in zip((1, 1, -1), x)) == 1
                and all(-1 <= v <= 2 for v in x)
            )
            assert membership(X, x) == expected


class TestTypes:
    def test_standard_form_validation(self):
        with pytest.raises(ValidationError):
            StandardFormSet(
                A=IntMatrix.zero(1, 2), b=(0,), lower=(2, 0), upper=(1, 1)
            )
        with pytest.raises(DimensionError):
            StandardFormSet(A=IntMatrix.zero(1, 2), b=(0, 0), lower=(0, 0), upper=(1, 1))

    def test_matrix_shape_checks(self):
        with pytest.raises(DimensionError):
            IntMatrix(((1, 2), (3,)), 2)
        assert IntMatrix.zero(0, 3).shape == (0, 3)
        assert IntMatrix.identity(2).entries == ((1, 0), (0, 1))

    def test_matrix_apply_exact_with_big_integers(self):
        A = IntMatrix.from_rows([[10**30, -1]])
        assert A.apply((10**30, 1)) == (10**60 - 1,)

    def test_fingerprint_distinguishes_shapes(self):
        flat = IntMatrix.from_rows([[1, 2, 3, 4]])
        square = IntMatrix.from_rows([[1, 2], [3, 4]])
        assert flat.fingerprint() != square.fingerprint()

    def test_cost_models_validate(self):
        with pytest.raises(ValidationError):
            CostList(())
        with pytest.raises(DimensionError):
            CostList(((1, 2), (1,)))
        with pytest.raises(ValidationError):
            CostBox((2,), (1,))

    def test_cost_box_witness_rule(self):
        box = CostBox((-1, -1, -1), (2, 2, 2))
        value, witness = box.max_at((3, -2, 0))
        assert witness == (2, -1, 2)
        assert value == 6 + 2 + 0

    def test_cost_list_tie_goes_to_first(self):
        costs = CostList(((1, 0), (0, 1)))
        value, witness = costs.max_at((1, 1))
        assert value == 1 and witness == (1, 0)
