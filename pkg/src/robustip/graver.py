"""Graver bases: computation by a completion procedure, verification, n-fold products.

The Graver basis of an integer matrix A is the set of conformally minimal
nonzero integer vectors in the kernel of A. It is computed here by the
generic pair-completion procedure seeded with a lattice basis of the
integer kernel; this is worst-case exponential, which is why every entry
point takes explicit resource caps.
"""
from __future__ import annotations

import bisect
from collections import deque
from dataclasses import dataclass

from .core import IntMatrix, IntVector, conformal_leq, iter_solutions, vadd, vneg, vscale, vsub
from .errors import DimensionError, ResourceLimitError, ValidationError

DEFAULT_MAX_ELEMENTS = 100_000
DEFAULT_MAX_PAIR_OPS = 10_000_000


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (x, y, g) with x*a + y*b == g = gcd(a, b)."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def kernel_lattice_basis(A: IntMatrix) -> list[IntVector]:
    """Basis of the lattice ker(A) ∩ Z^n by unimodular column elimination.

    Works on the stacked matrix [A; I] with exact integer column operations
    (determinant ±1), so the returned vectors generate every integer kernel
    point, not merely a full-rank sublattice.
    """
    m, n = A.rows, A.cols
    # cols[j] = A-part (length m) followed by the identity companion (length n)
    cols = [[A.entries[r][j] for r in range(m)] + [1 if t == j else 0 for t in range(n)]
            for j in range(n)]
    p = 0
    for i in range(m):
        live = [j for j in range(p, n) if cols[j][i] != 0]
        if not live:
            continue
        j0 = live[0]
        for j in live[1:]:
            a, b = cols[j0][i], cols[j][i]
            x, y, g = xgcd(a, b)
            ag, bg = a // g, b // g
            old0, old1 = cols[j0], cols[j]
            cols[j0] = [x * u + y * v for u, v in zip(old0, old1)]
            cols[j] = [-bg * u + ag * v for u, v in zip(old0, old1)]
        cols[p], cols[j0] = cols[j0], cols[p]
        p += 1
    return [tuple(cols[j][m:]) for j in range(p, n)]


def canonical_sign(g: IntVector) -> IntVector:
    """Representative of {g, -g} whose first nonzero entry is positive."""
    for v in g:
        if v > 0:
            return g
        if v < 0:
            return vneg(g)
    return g


def _sign_masks(v: IntVector) -> tuple[int, int]:
    pos = neg = 0
    for i, a in enumerate(v):
        if a > 0:
            pos |= 1 << i
        elif a < 0:
            neg |= 1 << i
    return pos, neg


@dataclass(frozen=True)
class GraverBasis:
    """Finite set of conformally minimal kernel vectors of one matrix.

    Only one representative per antipodal pair is stored (canonical sign:
    first nonzero entry positive, lexicographically sorted); the full basis
    is ``elements`` together with all negations.
    """

    matrix_sha: str
    n: int
    elements: tuple[IntVector, ...]

    @classmethod
    def from_elements(cls, A: IntMatrix, vectors) -> "GraverBasis":
        zero = (0,) * A.cols
        canon = set()
        for g in vectors:
            g = tuple(g)
            if len(g) != A.cols:
                raise DimensionError(
                    f"basis element has length {len(g)}, matrix has {A.cols} columns"
                )
            if g == zero:
                raise ValidationError("basis element must be nonzero")
            if A.apply(g) != (0,) * A.rows:
                raise ValidationError(f"basis element {g} is not in the kernel")
            canon.add(canonical_sign(g))
        return cls(A.fingerprint(), A.cols, tuple(sorted(canon)))

    def full(self) -> list[IntVector]:
        """Both signs of every element, lexicographically sorted."""
        out = set(self.elements)
        out.update(vneg(g) for g in self.elements)
        return sorted(out)

    def matches(self, A: IntMatrix) -> bool:
        return self.matrix_sha == A.fingerprint() and self.n == A.cols

    def __len__(self) -> int:
        return len(self.elements)


def _normal_form(s: IntVector, sorted_elems: list[IntVector], masks: dict) -> IntVector:
    """Reduce s by conformally dominated elements until none applies.

    The reducer is always the lexicographically smallest eligible element;
    scanning the sorted pool in order makes the first hit that element.
    """
    r = s
    zero = (0,) * len(s)
    while r != zero:
        pos_r, neg_r = _sign_masks(r)
        rabs = [abs(v) for v in r]
        hit = None
        for h in sorted_elems:
            ph, nh = masks[h]
            if ph & ~pos_r or nh & ~neg_r:
                continue
            if all(abs(a) <= b for a, b in zip(h, rabs) if a):
                hit = h
                break
        if hit is None:
            return r
        r = vsub(r, hit)
    return r


def _pair_is_canonical(f: IntVector, g: IntVector) -> bool:
    """Keep one pair per antipodal class {f, g} / {-f, -g}.

    The mirrored pair's sum is the negation of this pair's sum, and the
    pool stays closed under negation, so processing one member certifies
    both.
    """
    return min(f, g) <= min(vneg(f), vneg(g))


def _complete_pure(
    seeds: list[IntVector], n: int, max_elements: int, max_pair_ops: int
) -> list[IntVector]:
    """Reference completion loop on Python big ints; exact for any magnitude."""
    zero = (0,) * n
    pool: set[IntVector] = set()
    for v in seeds:
        pool.add(v)
        pool.add(vneg(v))
    if len(pool) > max_elements:
        raise ResourceLimitError(
            f"completion pool exceeded {max_elements} elements"
        )
    sorted_elems = sorted(pool)
    masks = {v: _sign_masks(v) for v in sorted_elems}

    def cancels(f: IntVector, g: IntVector) -> bool:
        pf, nf = masks[f]
        pg, ng = masks[g]
        return bool(pf & ng or nf & pg)

    # queue entries: (f, g) pairwise sums and (h,) re-queued vectors
    queue: deque[tuple] = deque()
    for i, f in enumerate(sorted_elems):
        for g in sorted_elems[i + 1:]:
            if cancels(f, g) and vadd(f, g) != zero and _pair_is_canonical(f, g):
                queue.append((f, g))

    ops = 0
    while queue:
        ops += 1
        if ops > max_pair_ops:
            raise ResourceLimitError(
                f"completion abandoned after {max_pair_ops} pair reductions"
            )
        entry = queue.popleft()
        if len(entry) == 2:
            f, g = entry
            if f not in pool or g not in pool:
                continue  # stale pair: an endpoint has been evicted
            s = vadd(f, g)
        else:
            s = entry[0]
        r = _normal_form(s, sorted_elems, masks)
        if r == zero:
            continue
        r_neg = vneg(r)
        pos_r, neg_r = _sign_masks(r)
        pos_n, neg_n = neg_r, pos_r

        # evict pool elements dominated by the new element (or its negation);
        # they are re-queued and their later reduction to zero re-certifies
        # anything they ever reduced
        doomed = []
        for h in sorted_elems:
            ph, nh = masks[h]
            if not (pos_r & ~ph or neg_r & ~nh):
                if all(abs(a) <= abs(b) for a, b in zip(r, h)):
                    doomed.append(h)
                    continue
            if not (pos_n & ~ph or neg_n & ~nh):
                if all(abs(a) <= abs(b) for a, b in zip(r_neg, h)):
                    doomed.append(h)
        for h in doomed:
            pool.discard(h)
            del masks[h]
            idx = bisect.bisect_left(sorted_elems, h)
            del sorted_elems[idx]
        for h in sorted({canonical_sign(h) for h in doomed}):
            queue.append((h,))

        for x in sorted((r, r_neg)):
            bisect.insort(sorted_elems, x)
            masks[x] = _sign_masks(x)
            pool.add(x)
        if len(pool) > max_elements:
            raise ResourceLimitError(
                f"completion pool exceeded {max_elements} elements"
            )
        snapshot = [h for h in sorted_elems if h != r and h != r_neg]
        for x in sorted((r, r_neg)):
            for h in snapshot:
                if cancels(x, h) and vadd(x, h) != zero and _pair_is_canonical(x, h):
                    queue.append((x, h))

    return _minimal_elements(sorted_elems, masks)


def compute_graver(
    A: IntMatrix,
    *,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    max_pair_ops: int = DEFAULT_MAX_PAIR_OPS,
) -> GraverBasis:
    """Exact Graver basis of A via the pair-completion procedure.

    Seed with ± an integer kernel lattice basis; repeatedly pop an entry
    from a FIFO queue (pairwise sums, plus re-queued vectors), reduce it to
    a conformal normal form, and insert nonzero normal forms together with
    their negations; on closure keep the conformally minimal elements and
    canonicalize signs.

    Three sound prunings keep the run tractable: pairs that never cancel in
    any coordinate always reduce to zero and are skipped at enqueue time;
    one pair per antipodal class is processed; and pool elements
    conformally dominated by a newly inserted normal form are evicted and
    re-queued as plain vectors. None of them change the result, which is
    the unique Graver basis of A.

    When available, a compiled fixed-width engine runs the same loop with a
    mandatory overflow guard; any risk of wraparound aborts it and the
    arbitrary-precision loop takes over. Hitting either cap raises
    ResourceLimitError; a truncated basis is never returned.
    """
    if A.cols < 1:
        raise DimensionError("compute_graver: matrix must have at least one column")
    seeds = kernel_lattice_basis(A)
    if not seeds:
        return GraverBasis(A.fingerprint(), A.cols, ())

    completed = _try_fast_engine(seeds, A.cols, max_elements, max_pair_ops)
    if completed is None:
        completed = _complete_pure(seeds, A.cols, max_elements, max_pair_ops)
        minimal = completed
    else:
        minimal = _minimal_elements(completed)
    return GraverBasis.from_elements(A, minimal)


_fast_engine = None
_fast_probe_done = False


def _try_fast_engine(seeds, n, max_elements, max_pair_ops):
    global _fast_engine, _fast_probe_done
    if not _fast_probe_done:
        _fast_probe_done = True
        try:
            from . import _fastgraver

            if _fastgraver.available:
                _fast_engine = _fastgraver.complete_fast
        except ImportError:  # pragma: no cover
            _fast_engine = None
    if _fast_engine is None:
        return None
    return _fast_engine(seeds, n, max_elements, max_pair_ops)


def _minimal_elements(vectors: list[IntVector], masks: dict | None = None) -> list[IntVector]:
    """Conformally minimal members of a set (full ± set expected)."""
    if masks is None:
        masks = {v: _sign_masks(v) for v in vectors}
    out = []
    for g in vectors:
        pg, ng = masks[g]
        dominated = False
        for h in vectors:
            if h == g:
                continue
            ph, nh = masks[h]
            if ph & ~pg or nh & ~ng:
                continue
            if all(abs(a) <= abs(b) for a, b in zip(h, g)):
                dominated = True
                break
        if not dominated:
            out.append(g)
    return out


def brute_force_graver(
    A: IntMatrix, radius: int, *, node_cap: int = 10_000_000
) -> frozenset[IntVector]:
    """Oracle: conformally minimal nonzero kernel vectors with entries in [-radius, radius].

    Exhaustive (pruned) enumeration; equal to the true Graver basis whenever
    ``radius`` dominates the largest absolute entry occurring in it.
    """
    if radius < 1:
        raise ValidationError("brute_force_graver: radius must be >= 1")
    n = A.cols
    zero = (0,) * n
    points = [
        p
        for p in iter_solutions(
            A, (0,) * A.rows, (-radius,) * n, (radius,) * n, node_cap=node_cap
        )
        if p != zero
    ]
    return frozenset(_minimal_elements(points))


@dataclass(frozen=True)
class GraverVerification:
    """Outcome of the three Graver-basis checks at one enumeration radius."""

    radius: int
    kernel_ok: bool
    kernel_failures: tuple[IntVector, ...]
    incomparability_ok: bool
    comparable_pairs: tuple[tuple[IntVector, IntVector], ...]
    decomposition_ok: bool
    undecomposable: tuple[IntVector, ...]
    points_checked: int

    @property
    def passed(self) -> bool:
        return self.kernel_ok and self.incomparability_ok and self.decomposition_ok

    def summary(self) -> list[tuple[str, bool]]:
        return [
            ("kernel_membership", self.kernel_ok),
            ("pairwise_incomparability", self.incomparability_ok),
            ("conformal_decomposition", self.decomposition_ok),
        ]


def greedy_conformal_decomposition(
    z: IntVector, basis_full: list[IntVector]
) -> list[tuple[IntVector, int]] | None:
    """Write z as sum of positive multiples of basis elements conformal to z.

    Greedy: repeatedly subtract the largest conformal multiple of the
    lexicographically smallest element dominated by the remainder. Returns
    the (element, multiplier) list, or None if the remainder gets stuck,
    which disproves the defining positive-sum property.
    """
    r = z
    zero = (0,) * len(z)
    parts: list[tuple[IntVector, int]] = []
    while r != zero:
        step = None
        for g in basis_full:
            if conformal_leq(g, r) and g != zero:
                step = g
                break
        if step is None:
            return None
        lam = min(b // a for a, b in zip(step, r) if a)
        parts.append((step, lam))
        r = vsub(r, vscale(lam, step))
    return parts


def verify_graver(
    A: IntMatrix,
    basis: GraverBasis,
    radius: int,
    *,
    node_cap: int = 10_000_000,
) -> GraverVerification:
    """Check a claimed Graver basis against its definition.

    (a) every element lies in ker(A) and is nonzero;
    (b) no two distinct members of the full ± set are conformally comparable;
    (c) every nonzero kernel point with entries in [-radius, radius] admits
        a greedy conformal decomposition over the basis.
    """
    if basis.n != A.cols:
        raise DimensionError("verify_graver: basis length does not match matrix")
    full = basis.full()
    zero_rhs = (0,) * A.rows
    zero = (0,) * A.cols

    kernel_failures = tuple(
        g for g in full if g == zero or A.apply(g) != zero_rhs
    )

    masks = {g: _sign_masks(g) for g in full}
    comparable = []
    for g in full:
        pg, ng = masks[g]
        for h in full:
            if h == g:
                continue
            ph, nh = masks[h]
            if ph & ~pg or nh & ~ng:
                continue
            if all(abs(a) <= abs(b) for a, b in zip(h, g)):
                comparable.append((h, g))
    comparable_pairs = tuple(sorted(set(comparable)))

    undecomposable = []
    points_checked = 0
    n = A.cols
    for z in iter_solutions(
        A, zero_rhs, (-radius,) * n, (radius,) * n, node_cap=node_cap
    ):
        if z == zero:
            continue
        points_checked += 1
        if greedy_conformal_decomposition(z, full) is None:
            undecomposable.append(z)

    return GraverVerification(
        radius=radius,
        kernel_ok=not kernel_failures,
        kernel_failures=kernel_failures,
        incomparability_ok=not comparable_pairs,
        comparable_pairs=comparable_pairs,
        decomposition_ok=not undecomposable,
        undecomposable=tuple(undecomposable),
        points_checked=points_checked,
    )


def nfold_product(A1: IntMatrix, A2: IntMatrix, n: int) -> IntMatrix:
    """Block matrix with A1 repeated across the top band and A2 block-diagonal.

    For an (r x t) top block and (s x t) bottom block the result is
    (r + n*s) x (n*t).
    """
    if A1.cols != A2.cols:
        raise DimensionError(
            f"nfold_product: blocks have {A1.cols} and {A2.cols} columns"
        )
    if n < 1:
        raise ValidationError("nfold_product: n must be >= 1")
    t = A1.cols
    rows: list[IntVector] = []
    for row in A1.entries:
        rows.append(tuple(row) * n)
    zero_block = (0,) * t
    for block in range(n):
        for row in A2.entries:
            parts: list[int] = []
            for j in range(n):
                parts.extend(row if j == block else zero_block)
            rows.append(tuple(parts))
    return IntMatrix(tuple(rows), n * t)
