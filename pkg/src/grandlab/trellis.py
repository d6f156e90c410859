"""Syndrome trellis and serial list search for constraint-satisfying patterns.

The trellis has one section per code bit; the state entering section i is the
partial syndrome (a ``delta``-bit integer) of bits 0..i-1 against a
``delta``-row constraint matrix.  Paths from state 0 to the target syndrome
are exactly the patterns e with H1 e^T = target.  An edge with bit 1 at
section i costs reliab[i]; bit 0 is free.

Search runs off a single backward sweep that stores, per (section, state),
the exact cheapest completion cost to the target and the winning bit (bit 0
wins ties).  The best path is the completion walk from (0, state 0).  Later
paths come from a detour heap: an emitted path may deviate once at any
section strictly after its own branch point and then follow the
backward-optimal completion; the candidate key is prefix + deviating edge +
completion, which is the exact full-path weight.  Since every stored path's
suffix beyond its branch point is itself a backward-optimal completion and
completions are memoryless, the (parent, branch section) decomposition of
any feasible path is unique: each of the 2^(n - rank(H1)) patterns is
emitted exactly once, in non-decreasing key order with ties broken by
(branch section ascending, new bit 0 before 1, parent id ascending).

Only the cheapest un-popped detour of each path sits in the heap at any
time; popping a candidate re-scans its parent for the next sibling.  That
keeps heap size proportional to the number of emitted paths instead of
paths x sections, without changing the emission order.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, ContractError
from .gf2 import BitMatrix, BitVector, matvec_packed
from .meter import NullMeter, heap_op_cost

MAX_DELTA = 20

# Test-only fault hook: reverses the branch-section tie in the detour order.
# Shipped value is False; the CLI selftest mutation check flips it.
_TIE_BRANCH_DESCENDING = False

_INF = math.inf


@dataclass(frozen=True)
class SyndromeTrellis:
    """Static trellis description; columns[i] packs H1's column i as an int."""

    n: int
    delta: int
    state_count: int
    columns: tuple[int, ...]
    target: int
    reliab: tuple[float, ...]


def build_trellis(
    h1: BitMatrix,
    z: BitVector | None,
    reliab: Sequence[float],
    *,
    target: int | None = None,
    meter=None,
) -> SyndromeTrellis:
    """Trellis for the solution set of H1 e^T = H1 z^T (or an explicit target)."""
    delta = h1.rows
    n = h1.cols
    if delta > MAX_DELTA:
        raise ConfigError(f"delta={delta} exceeds the practical bound {MAX_DELTA}")
    if len(reliab) != n:
        raise ContractError(f"reliab length {len(reliab)} != {n} sections")
    if target is None:
        if z is None:
            raise ContractError("need either z or an explicit target")
        if z.n != n:
            raise ContractError(f"z length {z.n} != {n} columns")
        target = matvec_packed(h1.row_ints(), z.bits)
        if meter is not None:
            meter.record("search_init", bops=delta * n, flops=0)
    if target >> delta:
        raise ContractError(f"target 0x{target:x} does not fit in {delta} bits")
    return SyndromeTrellis(
        n=n,
        delta=delta,
        state_count=1 << delta,
        columns=tuple(h1.column_bits()),
        target=target,
        reliab=tuple(float(v) for v in reliab),
    )


def forward_pass(trellis: SyndromeTrellis) -> np.ndarray:
    """Best prefix metric per (section, state); diagnostic counterpart of the sweep."""
    n, s_count = trellis.n, trellis.state_count
    f = np.full((n + 1, s_count), _INF)
    f[0, 0] = 0.0
    states = np.arange(s_count, dtype=np.int64)
    for i in range(n):
        cur = f[i]
        moved = np.full(s_count, _INF)
        moved[states ^ trellis.columns[i]] = cur + trellis.reliab[i]
        f[i + 1] = np.minimum(cur, moved)  # b=0 keeps the state and wins ties
    return f


class SlvaSearch:
    """Iterator over constraint-satisfying patterns in non-decreasing soft weight.

    Yields (pattern, key) pairs; the key is the exact accumulated path weight
    used for ordering.  Raises StopIteration once all feasible patterns are
    out.  ``vectorized`` switches the per-path detour scans between a plain
    loop and numpy (bit-identical arithmetic, chosen by length by default).
    """

    def __init__(self, trellis: SyndromeTrellis, meter=None, vectorized: bool | None = None):
        self._t = trellis
        self._meter = meter if meter is not None else NullMeter()
        n, s_count = trellis.n, trellis.state_count
        self._vector = (n >= 64) if vectorized is None else vectorized

        r = np.asarray(trellis.reliab, dtype=np.float64)
        cols_np = np.asarray(trellis.columns, dtype=np.int64)
        b = np.full((n + 1, s_count), _INF)
        b[n, trellis.target] = 0.0
        dec = np.zeros((n, s_count), dtype=bool)
        states = np.arange(s_count, dtype=np.int64)
        for i in range(n - 1, -1, -1):
            nxt = b[i + 1]
            cost1 = r[i] + nxt[states ^ trellis.columns[i]]
            take1 = cost1 < nxt  # strict: bit 0 wins exact ties
            dec[i] = take1
            b[i] = np.where(take1, cost1, nxt)
        self._meter.record("search_init", bops=trellis.delta * n * s_count, flops=2 * n * s_count)

        self._B = b
        self._B_list = b.tolist()
        self._dec = dec.tolist()
        self._r = [float(v) for v in r]
        self._r_np = r
        self._cols = list(trellis.columns)
        self._cols_np = cols_np
        self._row_idx = np.arange(1, n + 1)
        self._m_idx = np.arange(n)

        # per emitted path: packed bits, branch section, fold cost of
        # bits[0..bp], and the state entering section bp+1
        self._bits: list[int] = []
        self._bp: list[int] = []
        self._prefix: list[float] = []
        self._state: list[int] = []
        self._heap: list[tuple] = []
        self._started = False
        self.emitted = 0

    # -- helpers ------------------------------------------------------------

    def _m_order(self, m: int) -> int:
        return self._t.n - 1 - m if _TIE_BRANCH_DESCENDING else m

    def _completion(self, i: int, s: int) -> int:
        """Bits of the backward-optimal suffix from (section i, state s)."""
        bits = 0
        dec = self._dec
        cols = self._cols
        n = self._t.n
        while i < n:
            if dec[i][s]:
                bits |= 1 << i
                s ^= cols[i]
            i += 1
        return bits

    def _prefix_state_at(self, pid: int, m: int) -> tuple[float, int]:
        """Fold cost of bits[0..m-1] and the state entering section m."""
        bits = self._bits[pid]
        pref = self._prefix[pid]
        s = self._state[pid]
        r = self._r
        cols = self._cols
        for i in range(self._bp[pid] + 1, m):
            if bits >> i & 1:
                pref += r[i]
                s ^= cols[i]
        return pref, s

    def _scan_python(self, pid: int, after):
        bits = self._bits[pid]
        pref = self._prefix[pid]
        s = self._state[pid]
        r = self._r
        cols = self._cols
        blist = self._B_list
        n = self._t.n
        best_key = _INF
        best_m = -1
        best_bit = 0
        a_key, a_mo = after if after is not None else (None, None)
        for m in range(self._bp[pid] + 1, n):
            bit = bits >> m & 1
            if bit:
                key = pref + blist[m + 1][s]
                alt = 0
            else:
                key = (pref + r[m]) + blist[m + 1][s ^ cols[m]]
                alt = 1
            if key < _INF and (after is None or key > a_key or (key == a_key and self._m_order(m) > a_mo)):
                if key < best_key or (key == best_key and self._m_order(m) < self._m_order(best_m)):
                    best_key, best_m, best_bit = key, m, alt
            if bit:
                pref += r[m]
                s ^= cols[m]
        if best_m < 0:
            return None
        return best_key, best_m, best_bit

    def _scan_numpy(self, pid: int, after):
        n = self._t.n
        raw = self._bits[pid].to_bytes((n + 7) // 8, "little")
        bits_arr = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n]
        on = bits_arr == 1
        edge = bits_arr * self._r_np
        prefix = np.empty(n)
        prefix[0] = 0.0
        np.cumsum(edge[:-1], out=prefix[1:])
        states_after = np.bitwise_xor.accumulate(np.where(on, self._cols_np, 0))
        before = np.empty(n, dtype=np.int64)
        before[0] = 0
        before[1:] = states_after[:-1]
        alt_state = np.where(on, before, before ^ self._cols_np)
        alt_edge = np.where(on, 0.0, self._r_np)
        keys = (prefix + alt_edge) + self._B[self._row_idx, alt_state]
        bp = self._bp[pid]
        if bp >= 0:
            keys[: bp + 1] = _INF
        if after is not None:
            a_key, a_mo = after
            mo = self._m_idx if not _TIE_BRANCH_DESCENDING else (n - 1) - self._m_idx
            keys = np.where((keys < a_key) | ((keys == a_key) & (mo <= a_mo)), _INF, keys)
        if not _TIE_BRANCH_DESCENDING:
            m = int(np.argmin(keys))
        else:
            m = n - 1 - int(np.argmin(keys[::-1]))
        key = float(keys[m])
        if key == _INF:
            return None
        return key, m, int(1 - bits_arr[m])

    def _push_detour(self, pid: int, after=None) -> None:
        scan = self._scan_numpy if self._vector else self._scan_python
        cand = scan(pid, after)
        if cand is None:
            return
        key, m, bit = cand
        cost = heap_op_cost(len(self._heap))
        self._meter.record("search_step", bops=cost, flops=cost)
        heapq.heappush(self._heap, (key, self._m_order(m), bit, pid, m))

    def _store(self, bits: int, bp: int, prefix: float, state: int) -> int:
        self._bits.append(bits)
        self._bp.append(bp)
        self._prefix.append(prefix)
        self._state.append(state)
        return len(self._bits) - 1

    # -- iteration ----------------------------------------------------------

    def __iter__(self) -> "SlvaSearch":
        return self

    def __next__(self) -> tuple[BitVector, float]:
        t = self._t
        meter = self._meter
        if not self._started:
            self._started = True
            key = self._B_list[0][0]
            if key == _INF:
                raise StopIteration  # target unreachable (rank-deficient H1 only)
            meter.record("search_init", bops=0, flops=t.n)  # first completion walk
            bits = self._completion(0, 0)
            pid = self._store(bits, bp=-1, prefix=0.0, state=0)
            self._push_detour(pid)
            self.emitted += 1
            return BitVector(t.n, bits), key
        if not self._heap:
            raise StopIteration
        cost = heap_op_cost(len(self._heap))
        meter.record("search_step", bops=cost, flops=cost)
        key, m_ord, bit, parent, m = heapq.heappop(self._heap)
        self._push_detour(parent, after=(key, m_ord))
        pref_m, s_m = self._prefix_state_at(parent, m)
        if bit:
            new_prefix = pref_m + self._r[m]
            s_after = s_m ^ self._cols[m]
        else:
            new_prefix = pref_m
            s_after = s_m
        bits = self._bits[parent] & ((1 << m) - 1)
        if bit:
            bits |= 1 << m
        bits |= self._completion(m + 1, s_after)
        meter.record("search_step", bops=t.delta * t.n, flops=2 * t.n)
        pid = self._store(bits, bp=m, prefix=new_prefix, state=s_after)
        self._push_detour(pid)
        self.emitted += 1
        return BitVector(t.n, bits), key


def best_path(trellis: SyndromeTrellis, meter=None) -> tuple[BitVector, float]:
    """Cheapest constraint-satisfying pattern and its weight."""
    return next(SlvaSearch(trellis, meter))


def next_path(search: SlvaSearch) -> tuple[BitVector, float]:
    """Explicit-name alias for advancing a search by one emission."""
    return next(search)
