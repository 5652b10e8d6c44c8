"""Exact integer primitives: vectors, matrices, feasible sets, cost models.

Everything is built on Python's arbitrary-precision ints, so arithmetic is
exact by construction and can never silently wrap. All types are immutable
after construction and all operations are pure functions.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .errors import DimensionError, ResourceLimitError, ValidationError

# Vectors are plain tuples of ints; they are hashable, cheap and immutable.
IntVector = tuple[int, ...]


def as_vector(values: Iterable[int], *, what: str = "vector") -> IntVector:
    vec = tuple(values)
    for i, v in enumerate(vec):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValidationError(f"{what}[{i}]: expected an integer, got {v!r}")
    return vec


def vadd(x: IntVector, y: IntVector) -> IntVector:
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: IntVector, y: IntVector) -> IntVector:
    return tuple(a - b for a, b in zip(x, y))


def vneg(x: IntVector) -> IntVector:
    return tuple(-a for a in x)


def vscale(k: int, x: IntVector) -> IntVector:
    return tuple(k * a for a in x)


def dot(x: IntVector, y: IntVector) -> int:
    if len(x) != len(y):
        raise DimensionError(f"dot: lengths differ ({len(x)} vs {len(y)})")
    return sum(a * b for a, b in zip(x, y))


def conformal_leq(x: IntVector, y: IntVector) -> bool:
    """Conformal (sign-compatible, componentwise dominated) partial order.

    True iff x_i * y_i >= 0 and |x_i| <= |y_i| for every coordinate.
    """
    if len(x) != len(y):
        raise DimensionError(f"conformal_leq: lengths differ ({len(x)} vs {len(y)})")
    return all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(x, y))


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major. Allows 0 rows (free systems)."""

    entries: tuple[IntVector, ...]
    cols: int

    def __post_init__(self):
        if self.cols < 0:
            raise DimensionError("matrix cannot have negative column count")
        for i, row in enumerate(self.entries):
            if len(row) != self.cols:
                raise DimensionError(
                    f"row {i} has {len(row)} entries, expected {self.cols}"
                )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], *, cols: int | None = None) -> "IntMatrix":
        entries = tuple(as_vector(r, what=f"A[{i}]") for i, r in enumerate(rows))
        if cols is None:
            if not entries:
                raise DimensionError("cannot infer column count of an empty matrix")
            cols = len(entries[0])
        return cls(entries, cols)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(tuple((0,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> IntVector:
        return self.entries[i]

    def apply(self, x: IntVector) -> IntVector:
        """Matrix-vector product A @ x, exact."""
        if len(x) != self.cols:
            raise DimensionError(f"apply: vector has length {len(x)}, matrix has {self.cols} columns")
        return tuple(sum(a * v for a, v in zip(row, x)) for row in self.entries)

    def nonzero_count(self) -> int:
        return sum(1 for row in self.entries for a in row if a != 0)

    def fingerprint(self) -> str:
        """Stable SHA-256 over the shape and entries."""
        text = f"{self.rows}x{self.cols}|" + ";".join(
            ",".join(str(a) for a in row) for row in self.entries
        )
        return hashlib.sha256(text.encode("ascii")).hexdigest()


@dataclass(frozen=True)
class StandardFormSet:
    """Feasible set {x integer : A x = b, lower <= x <= upper}.

    Bounds are mandatory and finite; every solver in this package relies on
    the box being bounded.
    """

    A: IntMatrix
    b: IntVector
    lower: IntVector
    upper: IntVector

    def __post_init__(self):
        n = self.A.cols
        if len(self.b) != self.A.rows:
            raise DimensionError(f"b has length {len(self.b)}, A has {self.A.rows} rows")
        if len(self.lower) != n or len(self.upper) != n:
            raise DimensionError(
                f"bounds have lengths {len(self.lower)}/{len(self.upper)}, expected {n}"
            )
        for i, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if lo > hi:
                raise ValidationError(f"bound {i}: lower {lo} exceeds upper {hi}")

    @property
    def n(self) -> int:
        return self.A.cols

    def box_volume(self) -> int:
        vol = 1
        for lo, hi in zip(self.lower, self.upper):
            vol *= hi - lo + 1
        return vol


def membership(sfs: StandardFormSet, x: IntVector) -> bool:
    """True iff A x = b and the box bounds hold."""
    if len(x) != sfs.n:
        raise DimensionError(f"membership: point has length {len(x)}, set has {sfs.n} variables")
    if any(v < lo or v > hi for v, lo, hi in zip(x, sfs.lower, sfs.upper)):
        return False
    return sfs.A.apply(x) == sfs.b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


_PROPAGATION_ROUNDS = 6


def iter_solutions(
    A: IntMatrix,
    b: IntVector,
    lower: IntVector,
    upper: IntVector,
    *,
    node_cap: int = 10_000_000,
) -> Iterator[IntVector]:
    """Yield all integer points of {A x = b, lower <= x <= upper} in
    lexicographically ascending order.

    Depth-first assignment over coordinates in ascending order with
    interval-arithmetic pruning: at each node every row's residual is
    checked against (and propagated back into) the bound intervals of the
    unassigned variables, so a partial assignment dies as soon as some
    residual becomes unreachable. Raises ResourceLimitError once more than
    ``node_cap`` assignments have been tried.
    """
    m, n = A.rows, A.cols
    if len(b) != m or len(lower) != n or len(upper) != n:
        raise DimensionError("iter_solutions: inconsistent dimensions")
    rows = A.entries
    row_support = [
        tuple(j for j in range(n) if rows[r][j]) for r in range(m)
    ]

    x = [0] * n
    nodes = 0

    def tighten(k: int, residual, lo, hi):
        """Shrink bounds of variables k.. from the row residuals; None = dead end."""
        for _ in range(_PROPAGATION_ROUNDS):
            changed = False
            for r in range(m):
                R = residual[r]
                mn = mx = 0
                live = []
                for j in row_support[r]:
                    if j < k:
                        continue
                    c = rows[r][j]
                    if c > 0:
                        mn += c * lo[j]
                        mx += c * hi[j]
                    else:
                        mn += c * hi[j]
                        mx += c * lo[j]
                    live.append((j, c))
                if R < mn or R > mx:
                    return False
                for j, c in live:
                    if c > 0:
                        t_mn, t_mx = c * lo[j], c * hi[j]
                    else:
                        t_mn, t_mx = c * hi[j], c * lo[j]
                    # c * x_j must land in [R - (mx - t_mx), R - (mn - t_mn)]
                    a1 = R - (mx - t_mx)
                    a2 = R - (mn - t_mn)
                    if c > 0:
                        new_lo = _ceil_div(a1, c)
                        new_hi = a2 // c
                    else:
                        new_lo = _ceil_div(a2, c)
                        new_hi = a1 // c
                    if new_lo > lo[j]:
                        lo[j] = new_lo
                        changed = True
                    if new_hi < hi[j]:
                        hi[j] = new_hi
                        changed = True
                    if lo[j] > hi[j]:
                        return False
            if not changed:
                break
        return True

    def walk(k: int, residual, lo, hi) -> Iterator[IntVector]:
        nonlocal nodes
        lo = lo.copy()
        hi = hi.copy()
        if not tighten(k, residual, lo, hi):
            return
        if k == n:
            yield tuple(x)
            return
        col = [rows[r][k] for r in range(m)]
        for v in range(lo[k], hi[k] + 1):
            nodes += 1
            if nodes > node_cap:
                raise ResourceLimitError(
                    f"enumeration abandoned after {node_cap} search nodes"
                )
            x[k] = v
            yield from walk(
                k + 1, [residual[r] - col[r] * v for r in range(m)], lo, hi
            )

    yield from walk(0, list(b), list(lower), list(upper))


@dataclass(frozen=True)
class CostList:
    """Explicit list of candidate cost vectors."""

    vectors: tuple[IntVector, ...]

    def __post_init__(self):
        if not self.vectors:
            raise ValidationError("cost list must contain at least one vector")
        n = len(self.vectors[0])
        for i, v in enumerate(self.vectors):
            if len(v) != n:
                raise DimensionError(f"cost vector {i} has length {len(v)}, expected {n}")

    @property
    def n(self) -> int:
        return len(self.vectors[0])

    def max_at(self, x: IntVector) -> tuple[int, IntVector]:
        """Worst-case (largest) cost of x; ties resolved by list order."""
        best_val = None
        best_c = None
        for c in self.vectors:
            val = dot(c, x)
            if best_val is None or val > best_val:
                best_val, best_c = val, c
        return best_val, best_c

    def negated(self) -> "CostList":
        return CostList(tuple(vneg(c) for c in self.vectors))


@dataclass(frozen=True)
class CostBox:
    """Box of integer cost vectors {c : lo <= c <= hi}."""

    lo: IntVector
    hi: IntVector

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DimensionError(
                f"box bounds have lengths {len(self.lo)} and {len(self.hi)}"
            )
        for i, (d, e) in enumerate(zip(self.lo, self.hi)):
            if d > e:
                raise ValidationError(f"cost bound {i}: lower {d} exceeds upper {e}")

    @property
    def n(self) -> int:
        return len(self.lo)

    def volume(self) -> int:
        vol = 1
        for d, e in zip(self.lo, self.hi):
            vol *= e - d + 1
        return vol

    def max_at(self, x: IntVector) -> tuple[int, IntVector]:
        """Worst-case cost of x over the box and a witnessing cost vector.

        At coordinates where x_i = 0 any choice is a maximizer; the upper
        bound is used so the witness is deterministic.
        """
        if len(x) != self.n:
            raise DimensionError("max_at: length mismatch")
        witness = tuple(e if v >= 0 else d for v, d, e in zip(x, self.lo, self.hi))
        return dot(witness, x), witness

    def vertices(self) -> Iterator[IntVector]:
        """All 2^n sign-vertices (lo_i / hi_i choices); exponential, test-scale only."""
        n = self.n
        for mask in range(1 << n):
            yield tuple(
                self.hi[i] if mask >> i & 1 else self.lo[i] for i in range(n)
            )

    def negated(self) -> "CostBox":
        return CostBox(vneg(self.hi), vneg(self.lo))

    def points(self, *, volume_cap: int) -> Iterator[IntVector]:
        """All integer vectors in the box, lexicographically ascending."""
        if self.volume() > volume_cap:
            raise ResourceLimitError(
                f"cost box holds {self.volume()} vectors, cap is {volume_cap}"
            )

        def rec(i: int, prefix: list[int]) -> Iterator[IntVector]:
            if i == self.n:
                yield tuple(prefix)
                return
            for v in range(self.lo[i], self.hi[i] + 1):
                prefix.append(v)
                yield from rec(i + 1, prefix)
                prefix.pop()

        yield from rec(0, [])


CostModel = Union[CostList, CostBox]


@dataclass(frozen=True)
class SeparableConvexObjective:
    """Sum of per-coordinate convex piecewise-linear functions.

    Each coordinate function is the max of finitely many affine pieces
    (slope, intercept). Pieces are canonicalized on construction: equal
    slopes merged keeping the larger intercept, pieces below the upper
    envelope dropped, remainder sorted by strictly increasing slope.
    Convexity is then automatic.
    """

    pieces: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        canon = tuple(
            _upper_envelope(coord, index=i) for i, coord in enumerate(self.pieces)
        )
        object.__setattr__(self, "pieces", canon)

    @property
    def n(self) -> int:
        return len(self.pieces)

    def coordinate_value(self, i: int, t: int) -> int:
        return max(s * t + c for s, c in self.pieces[i])


def _upper_envelope(
    raw: Sequence[tuple[int, int]], *, index: int
) -> tuple[tuple[int, int], ...]:
    if not raw:
        raise ValidationError(f"objective coordinate {index}: no affine pieces")
    best_intercept: dict[int, int] = {}
    for s, c in raw:
        for v in (s, c):
            if isinstance(v, bool) or not isinstance(v, int):
                raise ValidationError(
                    f"objective coordinate {index}: non-integer piece {(s, c)!r}"
                )
        if s not in best_intercept or c > best_intercept[s]:
            best_intercept[s] = c
    lines = sorted(best_intercept.items())
    env: list[tuple[int, int]] = []
    for s, c in lines:
        while len(env) >= 2:
            s_a, c_a = env[-2]
            s_b, c_b = env[-1]
            # drop the middle line when it never rises above the outer two
            if (s_b - s_a) * (c_a - c) <= (c_a - c_b) * (s - s_a):
                env.pop()
            else:
                break
        env.append((s, c))
    return tuple(env)


def eval_objective(f: SeparableConvexObjective, x: IntVector) -> int:
    """Exact value sum_i f_i(x_i)."""
    if len(x) != f.n:
        raise DimensionError(f"eval_objective: point has length {len(x)}, objective has {f.n}")
    total = 0
    for coord_pieces, t in zip(f.pieces, x):
        total += max(s * t + c for s, c in coord_pieces)
    return total


def box_objective(d: IntVector, e: IntVector) -> SeparableConvexObjective:
    """Worst-case objective of a cost box: f_i(t) = max(d_i t, e_i t)."""
    if len(d) != len(e):
        raise DimensionError("box_objective: bound lengths differ")
    for i, (lo, hi) in enumerate(zip(d, e)):
        if lo > hi:
            raise ValidationError(f"box_objective: bound {i} has lower {lo} > upper {hi}")
    return SeparableConvexObjective(tuple(((lo, 0), (hi, 0)) for lo, hi in zip(d, e)))


def linear_objective(c: IntVector) -> SeparableConvexObjective:
    """f(x) = c . x as a (trivially convex) separable objective."""
    return SeparableConvexObjective(tuple(((ci, 0),) for ci in c))
