"""Compiled fixed-width engine for the Graver completion loop.

Runs the identical algorithm as the arbitrary-precision loop in graver.py
(FIFO pair queue, lexicographically smallest conformal reducer, eviction
with re-queueing, antipodal pair halving) on int64 arrays. Any magnitude
approaching the overflow guard aborts the run and the caller falls back to
exact big-int arithmetic, so results are exact either way; the final basis
is the unique Graver basis, identical for both engines.

numba and numpy are optional: importing this module without them leaves
``available`` False and the reference loop is used instead.
"""
from __future__ import annotations

from .errors import ResourceLimitError

try:
    import numpy as np
    from numba import njit

    available = True
except ImportError:  # pragma: no cover - exercised only without numba
    available = False

# |entry| beyond this aborts the fixed-width engine (sums stay below 2^41)
MAGNITUDE_LIMIT = 1 << 40

STATUS_OK = 0
STATUS_OVERFLOW = 1
STATUS_MAX_ELEMENTS = 2
STATUS_MAX_PAIR_OPS = 3

if available:

    @njit(cache=True)
    def _row_masks(H, row, n):
        pos = np.int64(0)
        neg = np.int64(0)
        for t in range(n):
            v = H[row, t]
            if v > 0:
                pos |= np.int64(1) << t
            elif v < 0:
                neg |= np.int64(1) << t
        return pos, neg

    @njit(cache=True)
    def _row_lex_less(H, a, b, n):
        for t in range(n):
            if H[a, t] != H[b, t]:
                return H[a, t] < H[b, t]
        return False

    @njit(cache=True)
    def _pair_canonical(H, i, j, n):
        # one representative per {(f, g), (-f, -g)}: min(f, g) <= -max(f, g)
        small = i if _row_lex_less(H, i, j, n) else j
        large = j if small == i else i
        for t in range(n):
            a = H[small, t]
            b = -H[large, t]
            if a != b:
                return a < b
        return True

    @njit(cache=True)
    def _sum_is_zero(H, i, j, n):
        for t in range(n):
            if H[i, t] + H[j, t] != 0:
                return False
        return True

    @njit(cache=True)
    def _complete_kernel(seeds, max_elements, max_pair_ops):
        n = seeds.shape[1]
        one = np.int64(1)

        cap = 256
        while cap < 2 * seeds.shape[0]:
            cap *= 2
        H = np.zeros((cap, n), dtype=np.int64)
        HABS = np.zeros((cap, n), dtype=np.int64)
        POS = np.zeros(cap, dtype=np.int64)
        NEG = np.zeros(cap, dtype=np.int64)
        alive = np.zeros(cap, dtype=np.bool_)
        k = 0
        alive_count = 0

        qcap = 1024
        qi = np.zeros(qcap, dtype=np.int64)
        qj = np.zeros(qcap, dtype=np.int64)
        head = 0
        tail = 0

        # seed rows (already lex sorted, both signs, all nonzero)
        for s in range(seeds.shape[0]):
            for t in range(n):
                v = seeds[s, t]
                H[k, t] = v
                HABS[k, t] = v if v >= 0 else -v
            POS[k], NEG[k] = _row_masks(H, k, n)
            alive[k] = True
            k += 1
            alive_count += 1

        for i in range(k):
            for j in range(i + 1, k):
                if (POS[i] & NEG[j]) == 0 and (NEG[i] & POS[j]) == 0:
                    continue
                if _sum_is_zero(H, i, j, n):
                    continue
                if not _pair_canonical(H, i, j, n):
                    continue
                if tail == qcap:
                    qcap *= 2
                    nqi = np.zeros(qcap, dtype=np.int64)
                    nqj = np.zeros(qcap, dtype=np.int64)
                    nqi[:tail] = qi[:tail]
                    nqj[:tail] = qj[:tail]
                    qi = nqi
                    qj = nqj
                qi[tail] = i
                qj[tail] = j
                tail += 1

        s_vec = np.zeros(n, dtype=np.int64)
        s_abs = np.zeros(n, dtype=np.int64)
        ops = 0

        while head < tail:
            ops += 1
            if ops > max_pair_ops:
                return H, alive, k, STATUS_MAX_PAIR_OPS
            pi = qi[head]
            pj = qj[head]
            head += 1
            if pj >= 0:
                if not (alive[pi] and alive[pj]):
                    continue
                for t in range(n):
                    s_vec[t] = H[pi, t] + H[pj, t]
            else:
                for t in range(n):
                    s_vec[t] = H[pi, t]

            # normal form: subtract the lex-smallest conformally dominated element
            while True:
                nonzero = False
                pos_r = np.int64(0)
                neg_r = np.int64(0)
                for t in range(n):
                    v = s_vec[t]
                    s_abs[t] = v if v >= 0 else -v
                    if v > 0:
                        pos_r |= one << t
                        nonzero = True
                    elif v < 0:
                        neg_r |= one << t
                        nonzero = True
                if not nonzero:
                    break
                best = -1
                for idx in range(k):
                    if not alive[idx]:
                        continue
                    if (POS[idx] & ~pos_r) != 0 or (NEG[idx] & ~neg_r) != 0:
                        continue
                    ok = True
                    for t in range(n):
                        if HABS[idx, t] > s_abs[t]:
                            ok = False
                            break
                    if ok:
                        if best < 0 or _row_lex_less(H, idx, best, n):
                            best = idx
                if best < 0:
                    break
                for t in range(n):
                    s_vec[t] -= H[best, t]

            nonzero = False
            big = False
            for t in range(n):
                if s_vec[t] != 0:
                    nonzero = True
                if s_abs[t] > MAGNITUDE_LIMIT:
                    big = True
            if not nonzero:
                continue
            if big:
                return H, alive, k, STATUS_OVERFLOW

            pos_r = np.int64(0)
            neg_r = np.int64(0)
            for t in range(n):
                if s_vec[t] > 0:
                    pos_r |= one << t
                elif s_vec[t] < 0:
                    neg_r |= one << t

            # evict alive rows dominated by the new element or its negation,
            # re-queueing one representative per antipodal class
            for idx in range(k):
                if not alive[idx]:
                    continue
                dominated = False
                if (pos_r & ~POS[idx]) == 0 and (neg_r & ~NEG[idx]) == 0:
                    dominated = True
                    for t in range(n):
                        if s_abs[t] > HABS[idx, t]:
                            dominated = False
                            break
                if not dominated and (neg_r & ~POS[idx]) == 0 and (pos_r & ~NEG[idx]) == 0:
                    dominated = True
                    for t in range(n):
                        if s_abs[t] > HABS[idx, t]:
                            dominated = False
                            break
                if dominated:
                    alive[idx] = False
                    alive_count -= 1
                    canonical = False
                    for t in range(n):
                        if H[idx, t] != 0:
                            canonical = H[idx, t] > 0
                            break
                    if canonical:
                        if tail == qcap:
                            qcap *= 2
                            nqi = np.zeros(qcap, dtype=np.int64)
                            nqj = np.zeros(qcap, dtype=np.int64)
                            nqi[:tail] = qi[:tail]
                            nqj[:tail] = qj[:tail]
                            qi = nqi
                            qj = nqj
                        qi[tail] = idx
                        qj[tail] = -1
                        tail += 1

            # insert the normal form and its negation (lex-smaller first)
            if k + 2 > cap:
                cap *= 2
                nH = np.zeros((cap, n), dtype=np.int64)
                nA = np.zeros((cap, n), dtype=np.int64)
                nP = np.zeros(cap, dtype=np.int64)
                nN = np.zeros(cap, dtype=np.int64)
                nal = np.zeros(cap, dtype=np.bool_)
                nH[:k] = H[:k]
                nA[:k] = HABS[:k]
                nP[:k] = POS[:k]
                nN[:k] = NEG[:k]
                nal[:k] = alive[:k]
                H, HABS, POS, NEG, alive = nH, nA, nP, nN, nal

            neg_first = False
            for t in range(n):
                if s_vec[t] != 0:
                    neg_first = s_vec[t] > 0
                    break
            old_k = k
            for which in range(2):
                flip = (which == 0) == neg_first  # lex-smaller sign first
                row = k
                for t in range(n):
                    v = -s_vec[t] if flip else s_vec[t]
                    H[row, t] = v
                    HABS[row, t] = v if v >= 0 else -v
                POS[row], NEG[row] = _row_masks(H, row, n)
                alive[row] = True
                k += 1
                alive_count += 1
            if alive_count > max_elements:
                return H, alive, k, STATUS_MAX_ELEMENTS

            for row in range(old_k, k):
                for idx in range(old_k):
                    if not alive[idx]:
                        continue
                    if (POS[row] & NEG[idx]) == 0 and (NEG[row] & POS[idx]) == 0:
                        continue
                    if _sum_is_zero(H, row, idx, n):
                        continue
                    if not _pair_canonical(H, row, idx, n):
                        continue
                    if tail == qcap:
                        qcap *= 2
                        nqi = np.zeros(qcap, dtype=np.int64)
                        nqj = np.zeros(qcap, dtype=np.int64)
                        nqi[:tail] = qi[:tail]
                        nqj[:tail] = qj[:tail]
                        qi = nqi
                        qj = nqj
                    qi[tail] = row
                    qj[tail] = idx
                    tail += 1

        return H, alive, k, STATUS_OK


def complete_fast(seeds, n, max_elements, max_pair_ops):
    """Run the compiled completion; None means "use the exact engine instead".

    Resource caps raise ResourceLimitError exactly like the reference loop;
    overflow risk and unsupported shapes fall back silently.
    """
    if not available or n == 0 or n > 63:
        return None
    if 2 * len(seeds) > max_elements:
        raise ResourceLimitError(f"completion pool exceeded {max_elements} elements")
    for v in seeds:
        for entry in v:
            if abs(entry) > MAGNITUDE_LIMIT:
                return None
    rows = []
    for v in seeds:
        rows.append(tuple(v))
        rows.append(tuple(-a for a in v))
    rows.sort()
    arr = np.array(rows, dtype=np.int64)
    H, alive, k, status = _complete_kernel(
        arr, np.int64(max_elements), np.int64(max_pair_ops)
    )
    if status == STATUS_OVERFLOW:
        return None
    if status == STATUS_MAX_ELEMENTS:
        raise ResourceLimitError(f"completion pool exceeded {max_elements} elements")
    if status == STATUS_MAX_PAIR_OPS:
        raise ResourceLimitError(
            f"completion abandoned after {max_pair_ops} pair reductions"
        )
    out = []
    for row in range(k):
        if alive[row]:
            out.append(tuple(int(v) for v in H[row]))
    return out
