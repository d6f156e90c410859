"""Operation counting for decoder complexity measurements.

Counts are split into binary operations (BOPs) and floating-point operations
(FLOPs) across four phases: ``sorting``, ``search_init``, ``search_step`` and
``checking``.  The accounting convention, applied uniformly by every decoder:

* one BOP = one bit AND/XOR/compare; one FLOP = one real add/compare/multiply;
* a dense GF(2) matrix-vector product costs rows x cols BOPs (charged by
  ``mat_vec_mul`` when a meter is attached), regardless of implementation
  shortcuts;
* a ``delta``-bit trellis state XOR costs ``delta`` BOPs;
* a push or pop on a heap of current size s is charged the model bound
  ceil(log2(s+1)) FLOPs (metric comparisons) plus the same number of BOPs
  (index moves) -- deterministic, rather than data-dependent sift counts;
* sorting n reals is charged n*ceil(log2 n) FLOPs and as many BOPs.

Meters are pass-through sinks: hot loops take either an ``OpMeter`` or the
do-nothing ``NullMeter``.  Snapshots merge associatively, so per-worker
counters can be combined in any grouping without changing totals.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

PHASES = ("sorting", "search_init", "search_step", "checking")


@dataclass(frozen=True)
class OpCounters:
    """Immutable per-phase totals; ``searches`` is the number of patterns tried."""

    bops_sorting: int = 0
    flops_sorting: int = 0
    bops_search_init: int = 0
    flops_search_init: int = 0
    bops_search_step: int = 0
    flops_search_step: int = 0
    bops_checking: int = 0
    flops_checking: int = 0
    searches: int = 0

    @property
    def bops(self) -> int:
        return self.bops_sorting + self.bops_search_init + self.bops_search_step + self.bops_checking

    @property
    def flops(self) -> int:
        return self.flops_sorting + self.flops_search_init + self.flops_search_step + self.flops_checking

    def phase(self, name: str) -> tuple[int, int]:
        return getattr(self, f"bops_{name}"), getattr(self, f"flops_{name}")


def merge(a: OpCounters, b: OpCounters) -> OpCounters:
    """Fieldwise sum; associative and commutative."""
    return OpCounters(**{f.name: getattr(a, f.name) + getattr(b, f.name) for f in fields(OpCounters)})


class OpMeter:
    """Mutable counting sink."""

    __slots__ = ("_bops", "_flops", "searches")

    def __init__(self):
        self._bops = dict.fromkeys(PHASES, 0)
        self._flops = dict.fromkeys(PHASES, 0)
        self.searches = 0

    def record(self, phase: str, bops: int = 0, flops: int = 0) -> None:
        self._bops[phase] += bops
        self._flops[phase] += flops

    def phase(self, name: str) -> tuple[int, int]:
        return self._bops[name], self._flops[name]

    def counters(self) -> OpCounters:
        return OpCounters(
            bops_sorting=self._bops["sorting"],
            flops_sorting=self._flops["sorting"],
            bops_search_init=self._bops["search_init"],
            flops_search_init=self._flops["search_init"],
            bops_search_step=self._bops["search_step"],
            flops_search_step=self._flops["search_step"],
            bops_checking=self._bops["checking"],
            flops_checking=self._flops["checking"],
            searches=self.searches,
        )


class NullMeter:
    """Same interface, no counting; for throughput runs."""

    __slots__ = ("searches",)

    def __init__(self):
        self.searches = 0

    def record(self, phase: str, bops: int = 0, flops: int = 0) -> None:
        pass

    def phase(self, name: str) -> tuple[int, int]:
        return 0, 0

    def counters(self) -> OpCounters:
        return OpCounters(searches=self.searches)


def heap_op_cost(size: int) -> int:
    """Model cost of one push/pop on a heap of the given current size."""
    return size.bit_length()


def sort_cost(n: int) -> int:
    """Model comparison count for sorting n keys: n * ceil(log2 n)."""
    return n * (n - 1).bit_length() if n > 1 else 0
