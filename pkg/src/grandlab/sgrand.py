"""Soft-input GRAND: try error patterns from most to least likely.

Bit positions are first ranked by reliability |r_i| (ascending, stable).  In
that sorted domain, every pattern is a set of flipped indices, and the
patterns form a binary tree: a popped node with frontier f (its largest flip)
spawns ``extend`` = flips + {f+1} and ``shift`` = flips - {f} + {f+1}.  Each
subset is reachable exactly once, children never weigh less than parents, so
a min-heap pops all 2^n patterns in non-decreasing soft weight.  Decoding
pops until a pattern satisfies every parity check or the budget l_max is
spent.

Node weights are fold-left sums of sorted-domain reliabilities (each node
also remembers the sum excluding its frontier), so equal flip sets always
carry bit-identical weights no matter how they were reached.  Equal-weight
nodes pop in lexicographic flip-set order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .codes import LinearCode
from .channel import ReceivedFrame, soft_weight
from .errors import ConfigError
from .gf2 import BitVector, mat_vec_mul
from .meter import NullMeter, heap_op_cost, sort_cost
from .result import DecodeResult


@dataclass(frozen=True)
class SortContext:
    """Reliability ranking: perm[j] = original index of the j-th least reliable bit."""

    perm: tuple[int, ...]
    sorted_reliab: tuple[float, ...]


def sort_by_reliability(reliab: Sequence[float], meter=None) -> SortContext:
    """Stable ascending sort of reliabilities (ties keep ascending index order)."""
    values = [float(v) for v in reliab]
    perm = sorted(range(len(values)), key=values.__getitem__)
    if meter is not None:
        cost = sort_cost(len(values))
        meter.record("sorting", bops=cost, flops=cost)
    return SortContext(perm=tuple(perm), sorted_reliab=tuple(values[i] for i in perm))


@dataclass(frozen=True)
class PatternNode:
    """One guess in the sorted domain; frontier is the largest flip (-1 if none)."""

    flips: tuple[int, ...]
    weight: float
    frontier: int


class PatternStream:
    """Iterator over all flip sets in non-decreasing soft weight.

    Heap entries are (weight, flips, weight-without-frontier); the third
    element never takes part in ordering because (weight, flips) is unique.
    """

    def __init__(self, ctx: SortContext, meter=None):
        self._sr = ctx.sorted_reliab
        self._n = len(ctx.sorted_reliab)
        self._meter = meter if meter is not None else NullMeter()
        self._heap: list[tuple[float, tuple[int, ...], float]] = [(0.0, (), 0.0)]

    def __iter__(self) -> "PatternStream":
        return self

    def __next__(self) -> PatternNode:
        heap = self._heap
        if not heap:
            raise StopIteration
        meter = self._meter
        cost = heap_op_cost(len(heap))
        meter.record("search_step", bops=cost, flops=cost)
        weight, flips, prefix = heapq.heappop(heap)
        frontier = flips[-1] if flips else -1
        nxt = frontier + 1
        if nxt < self._n:
            step = self._sr[nxt]
            cost = heap_op_cost(len(heap))
            meter.record("search_step", bops=1 + cost, flops=cost)
            heapq.heappush(heap, (weight + step, flips + (nxt,), weight))
            if flips:
                # shift re-sums from the stored prefix: fold-left weights stay exact
                cost = heap_op_cost(len(heap))
                meter.record("search_step", bops=self._n + cost, flops=cost)
                heapq.heappush(heap, (prefix + step, flips[:-1] + (nxt,), prefix))
        return PatternNode(flips=flips, weight=weight, frontier=frontier)


def sgrand_decode(
    code: LinearCode, frame: ReceivedFrame, l_max: int, meter=None
) -> DecodeResult:
    """Pop up to l_max patterns; first one passing H(z+e)=0 wins (it is ML)."""
    if l_max < 1:
        raise ConfigError(f"l_max must be >= 1, got {l_max}")
    meter = meter if meter is not None else NullMeter()
    reliab = [float(v) for v in frame.reliab]
    ctx = sort_by_reliability(reliab, meter)
    perm = ctx.perm
    stream = PatternStream(ctx, meter)
    z = frame.z
    n = code.n

    found = False
    e_opt = BitVector.zeros(n)
    searches = 0
    for _ in range(l_max):
        try:
            node = next(stream)
        except StopIteration:  # full enumeration exhausted (tiny codes only)
            break
        searches += 1
        meter.searches += 1
        ebits = 0
        for j in node.flips:
            ebits |= 1 << perm[j]
        e = BitVector(n, ebits)
        if mat_vec_mul(code.H, z ^ e, meter=meter, phase="checking").is_zero():
            found = True
            e_opt = e
            break
    # not found: e_opt stays zero and searches already equals l_max (every pop
    # was spent) unless the stream ran dry first, which reports the true count
    return DecodeResult(
        v=z ^ e_opt,
        e_opt=e_opt,
        gamma=soft_weight(e_opt, reliab),
        searches=searches,
        found=found,
        counters=meter.counters(),
    )
