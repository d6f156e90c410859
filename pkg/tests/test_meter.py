"""Counter arithmetic: merge laws and the cost-model helpers."""

import random

from hypothesis import given, strategies as st

from grandlab.meter import NullMeter, OpCounters, OpMeter, PHASES, heap_op_cost, merge, sort_cost


def random_counters(rnd):
    return OpCounters(*[rnd.randint(0, 10**6) for _ in range(9)])


def test_record_accumulates_per_phase():
    m = OpMeter()
    m.record("checking", bops=10)
    m.record("checking", bops=5, flops=2)
    m.record("sorting", flops=7)
    assert m.phase("checking") == (15, 2)
    assert m.phase("sorting") == (0, 7)
    snap = m.counters()
    assert snap.bops == 15 and snap.flops == 9


def test_merge_identity_and_totals():
    rnd = random.Random(1)
    a = random_counters(rnd)
    assert merge(a, OpCounters()) == a
    b = random_counters(rnd)
    assert merge(a, b).bops == a.bops + b.bops
    assert merge(a, b).searches == a.searches + b.searches


@given(st.integers(0, 3))
def test_merge_associative_commutative(seed):
    rnd = random.Random(seed)
    a, b, c = (random_counters(rnd) for _ in range(3))
    assert merge(a, b) == merge(b, a)
    assert merge(merge(a, b), c) == merge(a, merge(b, c))


def test_three_way_split_equals_serial():
    # the same record stream split across three meters merges to the serial total
    events = [(PHASES[i % 4], i, 2 * i) for i in range(30)]
    serial = OpMeter()
    parts = [OpMeter(), OpMeter(), OpMeter()]
    for i, (ph, b, f) in enumerate(events):
        serial.record(ph, b, f)
        parts[i % 3].record(ph, b, f)
    merged = merge(merge(parts[0].counters(), parts[1].counters()), parts[2].counters())
    assert merged == serial.counters()


def test_null_meter_counts_nothing():
    m = NullMeter()
    m.record("checking", bops=100, flops=100)
    assert m.counters() == OpCounters()


def test_cost_model_helpers():
    assert [heap_op_cost(s) for s in (0, 1, 2, 3, 4, 7, 8)] == [0, 1, 2, 2, 3, 3, 4]
    assert sort_cost(0) == 0 and sort_cost(1) == 0
    assert sort_cost(2) == 2  # 2 * ceil(log2 2)
    assert sort_cost(7) == 21  # 7 * 3
    assert sort_cost(8) == 24  # 8 * 3
