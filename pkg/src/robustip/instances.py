"""Instance families: PARTITION reductions, multicommodity flow, 3-dimensional
transportation, and seeded random instances for oracle testing.

Variable and row orderings are fixed so that the flow and transportation
equation matrices are literally n-fold products of their documented block
pairs (identity permutations); FORMATS.md spells the layouts out.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .core import (
    CostBox,
    CostList,
    CostModel,
    IntMatrix,
    IntVector,
    StandardFormSet,
    as_vector,
    membership,
)
from .errors import DimensionError, InfeasibleError, ValidationError
from .graver import GraverBasis, nfold_product


@dataclass(frozen=True)
class PartitionMinMaxInstance:
    """Decision-first robust instance encoding an equal-sum PARTITION question.

    Over x = (x_0, x_1..x_n) with x_0 pinned to 1 and the rest binary, the
    two costs (0, a) and (a_0, -a) give worst case
    max(sum_{i in I(x)} a_i, a_0 - sum_{i in I(x)} a_i) where
    I(x) = {i >= 1 : x_i = 1}; the minimum equals a_0/2 exactly when a
    splits into two equal halves.
    """

    a: IntVector
    total: int
    feasible_set: StandardFormSet
    cost: CostList
    known_graver: GraverBasis
    feasible_hint: IntVector
    threshold: Fraction
    provenance: dict

    @property
    def name(self) -> str:
        return "partition-minmax"


@dataclass(frozen=True)
class PartitionMaxMinInstance:
    """Adversary-first robust instance encoding the same PARTITION question.

    The equations pin x to one of exactly two points, (0, -a, 0) and
    (-a_0, a, 1); the adversary picks a binary subset row from the cost box
    and the best it can force is -a_0/2 exactly when a is partitionable.
    """

    a: IntVector
    total: int
    feasible_set: StandardFormSet
    cost: CostBox
    known_graver: GraverBasis
    known_points: tuple[IntVector, IntVector]
    feasible_hint: IntVector
    threshold: Fraction
    provenance: dict

    @property
    def name(self) -> str:
        return "partition-maxmin"


def _positive_vector(a: Sequence[int]) -> IntVector:
    vec = as_vector(a, what="a")
    if not vec:
        raise ValidationError("a must be nonempty")
    for i, v in enumerate(vec):
        if v < 1:
            raise ValidationError(f"a[{i}] = {v}: entries must be positive")
    return vec


def gen_partition_minmax(a: Sequence[int]) -> PartitionMinMaxInstance:
    a = _positive_vector(a)
    n = len(a)
    total = sum(a)
    A = IntMatrix.zero(1, n + 1)
    sfs = StandardFormSet(
        A=A,
        b=(0,),
        lower=(1,) + (0,) * n,
        upper=(1,) * (n + 1),
    )
    c1 = (0,) + a
    c2 = (total,) + tuple(-v for v in a)
    units = [tuple(1 if j == i else 0 for j in range(n + 1)) for i in range(n + 1)]
    return PartitionMinMaxInstance(
        a=a,
        total=total,
        feasible_set=sfs,
        cost=CostList((c1, c2)),
        known_graver=GraverBasis.from_elements(A, units),
        feasible_hint=(1,) + (0,) * n,
        threshold=Fraction(total, 2),
        provenance={"generator": "partition-minmax", "parameters": {"a": list(a)}},
    )


def gen_partition_maxmin(a: Sequence[int]) -> PartitionMaxMinInstance:
    a = _positive_vector(a)
    n = len(a)
    total = sum(a)
    rows = []
    rows.append(tuple(1 if j == 0 else 0 for j in range(n + 1)) + (total,))
    for i in range(1, n + 1):
        rows.append(
            tuple(1 if j == i else 0 for j in range(n + 1)) + (-2 * a[i - 1],)
        )
    A = IntMatrix(tuple(rows), n + 2)
    b = (0,) + tuple(-v for v in a)
    sfs = StandardFormSet(
        A=A,
        b=b,
        lower=(-total,) * (n + 1) + (0,),
        upper=(total,) * (n + 1) + (1,),
    )
    box = CostBox(
        lo=(1,) + (0,) * n + (0,),
        hi=(1,) + (1,) * n + (0,),
    )
    element = (-total,) + tuple(2 * v for v in a) + (1,)
    point_zero = (0,) + tuple(-v for v in a) + (0,)
    point_one = (-total,) + a + (1,)
    return PartitionMaxMinInstance(
        a=a,
        total=total,
        feasible_set=sfs,
        cost=box,
        known_graver=GraverBasis.from_elements(A, [element]),
        known_points=(point_zero, point_one),
        feasible_hint=point_zero,
        threshold=Fraction(-total, 2),
        provenance={"generator": "partition-maxmin", "parameters": {"a": list(a)}},
    )


def _tensor(data, dims: tuple[int, ...], label: str) -> tuple:
    """Validate a nested integer list against the given dimensions."""
    if len(dims) == 1:
        vec = as_vector(data, what=label)
        if len(vec) != dims[0]:
            raise ValidationError(f"{label}: expected {dims[0]} entries, got {len(vec)}")
        return vec
    if not isinstance(data, (list, tuple)) or len(data) != dims[0]:
        raise ValidationError(f"{label}: expected {dims[0]} entries")
    return tuple(
        _tensor(row, dims[1:], f"{label}[{i}]") for i, row in enumerate(data)
    )


def _nonneg(tensor, label: str) -> None:
    if isinstance(tensor, tuple):
        for i, item in enumerate(tensor):
            _nonneg(item, f"{label}[{i}]")
    elif tensor < 0:
        raise ValidationError(f"{label} = {tensor}: must be nonnegative")


@dataclass(frozen=True)
class MCFInstance:
    """Integer multicommodity flow in equality standard form.

    A slack commodity 0 with zero cost absorbs unused channel capacity, so
    the capacity constraints become equalities. Variables are ordered
    consumer-major: position(j, k, i) = j*(l+1)*m + k*m + i with commodity
    k = 0 the slack. Rows are the supply equations for all (k, i), then per
    consumer the demand equations (k = 0..l) and capacity equations
    (i = 0..m-1); that ordering makes the equation matrix exactly the
    n-fold product of (nfold_top, nfold_bottom) with n = number of
    consumers.
    """

    commodities: int
    suppliers: int
    consumers: int
    supplies: tuple
    demands: tuple
    capacities: tuple
    slack_supplies: IntVector
    slack_demands: IntVector
    feasible_set: StandardFormSet
    cost: CostModel
    known_graver: GraverBasis | None
    feasible_hint: IntVector | None
    provenance: dict
    nfold_top: IntMatrix
    nfold_bottom: IntMatrix
    copies: int

    @property
    def name(self) -> str:
        return "mcf"

    def position(self, j: int, k: int, i: int) -> int:
        return j * (self.commodities + 1) * self.suppliers + k * self.suppliers + i


def build_mcf(
    supplies: Sequence[Sequence[int]],
    demands: Sequence[Sequence[int]],
    capacities: Sequence[Sequence[int]],
    cost: CostModel,
) -> MCFInstance:
    """Standard-form robust multicommodity flow with an explicit slack commodity.

    ``supplies`` is l x m, ``demands`` l x n, ``capacities`` m x n. ``cost``
    covers the raw commodities only, flat index (k*m + i)*n + j; the builder
    prepends zero-cost slack coordinates and reorders to the instance's
    consumer-major variable layout.
    """
    if not supplies or not supplies[0]:
        raise ValidationError("supplies must be a nonempty l x m table")
    l = len(supplies)
    m = len(supplies[0])
    if not demands or len(demands) != l:
        raise ValidationError(f"demands: expected {l} commodity rows")
    if not demands[0]:
        raise ValidationError("demands: need at least one consumer")
    n = len(demands[0])
    s = _tensor(supplies, (l, m), "supplies")
    d = _tensor(demands, (l, n), "demands")
    u = _tensor(capacities, (m, n), "capacities")
    for t, lbl in ((s, "supplies"), (d, "demands"), (u, "capacities")):
        _nonneg(t, lbl)

    for k in range(l):
        if sum(s[k]) != sum(d[k]):
            raise InfeasibleError(
                f"commodity {k}: total supply {sum(s[k])} != total demand {sum(d[k])}"
            )
    slack_s = tuple(sum(u[i]) - sum(s[k][i] for k in range(l)) for i in range(m))
    slack_d = tuple(
        sum(u[i][j] for i in range(m)) - sum(d[k][j] for k in range(l))
        for j in range(n)
    )
    for i, v in enumerate(slack_s):
        if v < 0:
            raise ValidationError(
                f"slack supply of supplier {i} is {v}; capacities cannot carry the supplies"
            )
    for j, v in enumerate(slack_d):
        if v < 0:
            raise ValidationError(
                f"slack demand of consumer {j} is {v}; capacities cannot carry the demands"
            )

    K = l + 1  # commodities including slack
    t = K * m  # variables per consumer block
    nvars = n * t

    def pos(j: int, k: int, i: int) -> int:
        return j * t + k * m + i

    # supply table including slack commodity 0
    s_full = (slack_s,) + s
    d_full = (slack_d,) + d

    rows: list[tuple[int, ...]] = []
    b: list[int] = []
    for k in range(K):
        for i in range(m):
            row = [0] * nvars
            for j in range(n):
                row[pos(j, k, i)] = 1
            rows.append(tuple(row))
            b.append(s_full[k][i])
    for j in range(n):
        for k in range(K):
            row = [0] * nvars
            for i in range(m):
                row[pos(j, k, i)] = 1
            rows.append(tuple(row))
            b.append(d_full[k][j])
        for i in range(m):
            row = [0] * nvars
            for k in range(K):
                row[pos(j, k, i)] = 1
            rows.append(tuple(row))
            b.append(u[i][j])

    upper = [0] * nvars
    for j in range(n):
        for k in range(K):
            for i in range(m):
                upper[pos(j, k, i)] = u[i][j]
    sfs = StandardFormSet(
        A=IntMatrix(tuple(rows), nvars),
        b=tuple(b),
        lower=(0,) * nvars,
        upper=tuple(upper),
    )

    # block pair: identity band over the (k, i) grid, demand + capacity rows per consumer
    top = IntMatrix.identity(t)
    bottom_rows: list[tuple[int, ...]] = []
    for k in range(K):
        bottom_rows.append(tuple(1 if q // m == k else 0 for q in range(t)))
    for i in range(m):
        bottom_rows.append(tuple(1 if q % m == i else 0 for q in range(t)))
    bottom = IntMatrix(tuple(bottom_rows), t)

    raw_n = l * m * n
    if cost.n != raw_n:
        raise DimensionError(
            f"cost covers {cost.n} variables, raw problem has {raw_n}"
        )

    def lift(raw: IntVector) -> IntVector:
        out = [0] * nvars
        for k in range(l):
            for i in range(m):
                for j in range(n):
                    out[pos(j, k + 1, i)] = raw[(k * m + i) * n + j]
        return tuple(out)

    if isinstance(cost, CostList):
        lifted: CostModel = CostList(tuple(lift(c) for c in cost.vectors))
    else:
        lifted = CostBox(lift(cost.lo), lift(cost.hi))

    hint = _northwest_hint(l, m, n, s, d, u, pos, nvars)
    if hint is not None and not membership(sfs, hint):
        hint = None

    return MCFInstance(
        commodities=l,
        suppliers=m,
        consumers=n,
        supplies=s,
        demands=d,
        capacities=u,
        slack_supplies=slack_s,
        slack_demands=slack_d,
        feasible_set=sfs,
        cost=lifted,
        known_graver=None,
        feasible_hint=hint,
        provenance={
            "generator": "mcf",
            "parameters": {"l": l, "m": m, "n": n},
        },
        nfold_top=top,
        nfold_bottom=bottom,
        copies=n,
    )


def _northwest_hint(l, m, n, s, d, u, pos, nvars) -> IntVector | None:
    """Per-commodity northwest-corner fill; valid only if slack stays nonnegative."""
    x = [0] * nvars
    used = [[0] * n for _ in range(m)]
    for k in range(l):
        rs = list(s[k])
        rd = list(d[k])
        for i in range(m):
            for j in range(n):
                t = min(rs[i], rd[j])
                if t:
                    x[pos(j, k + 1, i)] = t
                    used[i][j] += t
                    rs[i] -= t
                    rd[j] -= t
    for i in range(m):
        for j in range(n):
            slack = u[i][j] - used[i][j]
            if slack < 0:
                return None
            x[pos(j, 0, i)] = slack
    return tuple(x)


@dataclass(frozen=True)
class Transport3Instance:
    """Integer 3-dimensional transportation table with all line sums fixed.

    Variables x[i][j][k] are ordered slice-major in the last axis:
    position(k, i, j) = k*l*m + i*m + j. Rows are the sum-over-k equations
    for every (i, j), then per slice k the sum-over-i equations (one per j)
    and the sum-over-j equations (one per i); the equation matrix is the
    n-fold product of (nfold_top, nfold_bottom) with n = size of the last
    axis.
    """

    dims: tuple[int, int, int]
    line_sums_jk: tuple
    line_sums_ik: tuple
    line_sums_ij: tuple
    feasible_set: StandardFormSet
    cost: CostModel
    known_graver: GraverBasis | None
    feasible_hint: IntVector | None
    provenance: dict
    nfold_top: IntMatrix
    nfold_bottom: IntMatrix
    copies: int

    @property
    def name(self) -> str:
        return "transport3"

    def position(self, k: int, i: int, j: int) -> int:
        l, m, _ = self.dims
        return k * l * m + i * m + j


def build_transport3(
    u: Sequence[Sequence[int]],
    v: Sequence[Sequence[int]],
    w: Sequence[Sequence[int]],
    cost: CostModel,
) -> Transport3Instance:
    """Three-dimensional transportation set from its line sums.

    ``u`` is m x n (sums over the first axis), ``v`` l x n (sums over the
    second), ``w`` l x m (sums over the third). ``cost`` uses the raw flat
    index (i*m + j)*n + k. Inconsistent grand totals are rejected as
    provably infeasible.
    """
    if not w or not w[0]:
        raise ValidationError("w must be a nonempty l x m table")
    l = len(w)
    m = len(w[0])
    if not u or not u[0]:
        raise ValidationError("u must be a nonempty m x n table")
    n = len(u[0])
    uu = _tensor(u, (m, n), "u")
    vv = _tensor(v, (l, n), "v")
    ww = _tensor(w, (l, m), "w")
    for tt, lbl in ((uu, "u"), (vv, "v"), (ww, "w")):
        _nonneg(tt, lbl)

    total_u = sum(sum(r) for r in uu)
    total_v = sum(sum(r) for r in vv)
    total_w = sum(sum(r) for r in ww)
    if not (total_u == total_v == total_w):
        raise InfeasibleError(
            f"grand totals differ: sum(u) = {total_u}, sum(v) = {total_v}, "
            f"sum(w) = {total_w}"
        )

    t = l * m
    nvars = n * t

    def pos(k: int, i: int, j: int) -> int:
        return k * t + i * m + j

    rows: list[tuple[int, ...]] = []
    b: list[int] = []
    for i in range(l):
        for j in range(m):
            row = [0] * nvars
            for k in range(n):
                row[pos(k, i, j)] = 1
            rows.append(tuple(row))
            b.append(ww[i][j])
    for k in range(n):
        for j in range(m):
            row = [0] * nvars
            for i in range(l):
                row[pos(k, i, j)] = 1
            rows.append(tuple(row))
            b.append(uu[j][k])
        for i in range(l):
            row = [0] * nvars
            for j in range(m):
                row[pos(k, i, j)] = 1
            rows.append(tuple(row))
            b.append(vv[i][k])

    upper = [0] * nvars
    for k in range(n):
        for i in range(l):
            for j in range(m):
                upper[pos(k, i, j)] = min(uu[j][k], vv[i][k], ww[i][j])
    sfs = StandardFormSet(
        A=IntMatrix(tuple(rows), nvars),
        b=tuple(b),
        lower=(0,) * nvars,
        upper=tuple(upper),
    )

    top = IntMatrix.identity(t)
    bottom_rows: list[tuple[int, ...]] = []
    for j in range(m):
        bottom_rows.append(tuple(1 if q % m == j else 0 for q in range(t)))
    for i in range(l):
        bottom_rows.append(tuple(1 if q // m == i else 0 for q in range(t)))
    bottom = IntMatrix(tuple(bottom_rows), t)

    raw_n = l * m * n
    if cost.n != raw_n:
        raise DimensionError(
            f"cost covers {cost.n} variables, table has {raw_n}"
        )

    def lift(raw: IntVector) -> IntVector:
        out = [0] * nvars
        for i in range(l):
            for j in range(m):
                for k in range(n):
                    out[pos(k, i, j)] = raw[(i * m + j) * n + k]
        return tuple(out)

    if isinstance(cost, CostList):
        lifted: CostModel = CostList(tuple(lift(c) for c in cost.vectors))
    else:
        lifted = CostBox(lift(cost.lo), lift(cost.hi))

    return Transport3Instance(
        dims=(l, m, n),
        line_sums_jk=uu,
        line_sums_ik=vv,
        line_sums_ij=ww,
        feasible_set=sfs,
        cost=lifted,
        known_graver=None,
        feasible_hint=None,
        provenance={
            "generator": "transport3",
            "parameters": {"l": l, "m": m, "n": n},
        },
        nfold_top=top,
        nfold_bottom=bottom,
        copies=n,
    )


def check_nfold_structure(
    X: StandardFormSet,
    top: IntMatrix,
    bottom: IntMatrix,
    n: int,
    row_perm: Sequence[int] | None = None,
    col_perm: Sequence[int] | None = None,
) -> bool:
    """True iff permuting X.A's rows/columns yields the n-fold product exactly.

    ``row_perm[i]`` names the row of X.A that becomes row i of the
    candidate n-fold matrix (likewise for columns); None means identity.
    """
    product = nfold_product(top, bottom, n)
    A = X.A
    if A.shape != product.shape:
        raise DimensionError(
            f"matrix is {A.shape}, n-fold product is {product.shape}"
        )
    rows, cols = A.shape
    row_perm = tuple(row_perm) if row_perm is not None else tuple(range(rows))
    col_perm = tuple(col_perm) if col_perm is not None else tuple(range(cols))
    if sorted(row_perm) != list(range(rows)) or sorted(col_perm) != list(range(cols)):
        raise ValidationError("row/column permutations must be permutations")
    for i in range(rows):
        src = A.entries[row_perm[i]]
        tgt = product.entries[i]
        for j in range(cols):
            if src[col_perm[j]] != tgt[j]:
                return False
    return True


@dataclass(frozen=True)
class RandomInstance:
    """Seeded random standard-form set with a cost model; always feasible."""

    feasible_set: StandardFormSet
    cost: CostModel
    known_graver: GraverBasis | None
    feasible_hint: IntVector
    provenance: dict

    @property
    def name(self) -> str:
        return "random"


def gen_random(
    n: int,
    rows: int,
    seed: int,
    *,
    entry_bound: int = 2,
    width: int = 2,
    base_bound: int = 3,
    cost_kind: str = "box",
    list_size: int = 3,
    cost_bound: int = 2,
    cost_width: int = 2,
    point_cap: int = 5000,
) -> RandomInstance:
    """Reproducible random instance; identical arguments give identical output.

    The right-hand side is built from a sampled in-box point, so the set is
    nonempty by construction and that point is emitted as the feasible
    hint. The box volume (width + 1)^n must stay under ``point_cap``, which
    bounds |X| up front. The set is drawn before the cost model, so two
    calls differing only in cost parameters share the same feasible set.
    """
    if n < 1 or rows < 0:
        raise ValidationError("gen_random: need n >= 1 and rows >= 0")
    if entry_bound < 0 or width < 0 or cost_bound < 0 or cost_width < 0:
        raise ValidationError("gen_random: bounds must be nonnegative")
    if (width + 1) ** n > point_cap:
        raise ValidationError(
            f"gen_random: box may hold {(width + 1) ** n} points, cap is {point_cap}"
        )
    if cost_kind not in ("box", "list"):
        raise ValidationError(f"gen_random: unknown cost kind {cost_kind!r}")
    if cost_kind == "list" and list_size < 1:
        raise ValidationError("gen_random: list_size must be >= 1")

    rng = random.Random(seed)
    A = IntMatrix(
        tuple(
            tuple(rng.randint(-entry_bound, entry_bound) for _ in range(n))
            for _ in range(rows)
        ),
        n,
    )
    lower = []
    upper = []
    for _ in range(n):
        lo = rng.randint(-base_bound, base_bound)
        lower.append(lo)
        upper.append(lo + rng.randint(0, width))
    anchor = tuple(rng.randint(lo, hi) for lo, hi in zip(lower, upper))
    sfs = StandardFormSet(
        A=A, b=A.apply(anchor), lower=tuple(lower), upper=tuple(upper)
    )

    cost: CostModel
    if cost_kind == "box":
        d = []
        e = []
        for _ in range(n):
            lo = rng.randint(-cost_bound, cost_bound)
            d.append(lo)
            e.append(lo + rng.randint(0, cost_width))
        cost = CostBox(tuple(d), tuple(e))
    else:
        cost = CostList(
            tuple(
                tuple(rng.randint(-cost_bound, cost_bound) for _ in range(n))
                for _ in range(list_size)
            )
        )

    return RandomInstance(
        feasible_set=sfs,
        cost=cost,
        known_graver=None,
        feasible_hint=anchor,
        provenance={
            "generator": "random",
            "parameters": {
                "n": n,
                "rows": rows,
                "entry_bound": entry_bound,
                "width": width,
                "base_bound": base_bound,
                "cost_kind": cost_kind,
                "list_size": list_size,
                "cost_bound": cost_bound,
                "cost_width": cost_width,
                "point_cap": point_cap,
            },
            "seed": seed,
        },
    )


Instance = Union[
    PartitionMinMaxInstance,
    PartitionMaxMinInstance,
    MCFInstance,
    Transport3Instance,
    RandomInstance,
]
