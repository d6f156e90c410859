"""Monte Carlo frame-error harness.

One point = (code, decoder, delta, l_max, Eb/N0).  Frames run through
encode -> BPSK -> AWGN -> decode; a frame error is v != c regardless of the
decoder's found flag (an abandoned frame returns the hard decision, which is
occasionally correct by luck).  Every frame draws its information bits and
noise from a substream keyed by (seed, frame index), so results are a pure
function of the config; workers only change wall time.

Parallel runs hand out fixed-size chunks of consecutive frame indices and
merge results back in index order.  The early-stopping rule (stop once
target_frame_errors have accumulated) is applied by scanning that ordered
stream, which lands on the same cutoff frame for every worker count.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, IO, Sequence

from .channel import awgn_transmit, make_frame_rng, modulate_bpsk, receive, sigma_from_ebn0
from .codes import LinearCode, encode
from .errors import ConfigError
from .gf2 import BitVector
from .meter import OpMeter
from .pcgrand import pcgrand_decode
from .sgrand import sgrand_decode

DECODERS = ("sgrand", "pcgrand")
INFO_SOURCES = ("random", "all_zero")
MAX_FRAMES_CAP = 10**7
_CHUNK = 256

CSV_COLUMNS = (
    "code", "decoder", "delta", "l_max", "ebn0_db",
    "frames", "frame_errors", "fer", "l_avg", "abandon_count",
    "bops_avg", "flops_avg",
    "bops_sorting", "flops_sorting",
    "bops_search", "flops_search",
    "bops_check", "flops_check",
    "seed", "wall_seconds",
)


@dataclass(frozen=True)
class SimConfig:
    code: LinearCode
    decoder: str
    l_max: int
    ebn0_list: tuple[float, ...]
    delta: int = 0
    max_frames: int = MAX_FRAMES_CAP
    target_frame_errors: int = 100
    seed: int = 0
    info_source: str = "random"
    workers: int = 1

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ConfigError(f"unknown decoder {self.decoder!r}; expected one of {DECODERS}")
        if self.info_source not in INFO_SOURCES:
            raise ConfigError(f"unknown info_source {self.info_source!r}")
        if self.l_max < 1:
            raise ConfigError(f"l_max must be >= 1, got {self.l_max}")
        if not 1 <= self.max_frames <= MAX_FRAMES_CAP:
            raise ConfigError(f"max_frames must be in [1, {MAX_FRAMES_CAP}], got {self.max_frames}")
        if self.target_frame_errors < 1:
            raise ConfigError(f"target_frame_errors must be >= 1, got {self.target_frame_errors}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if not self.ebn0_list:
            raise ConfigError("ebn0_list is empty")
        nk = self.code.n - self.code.k
        if self.decoder == "pcgrand" and not 0 <= self.delta <= nk:
            raise ConfigError(f"delta={self.delta} outside [0, {nk}] for {self.code.name}")


@dataclass(frozen=True)
class FrameStat:
    """Outcome of one decoded frame (worker -> merger payload)."""

    error: bool
    abandoned: bool
    searches: int
    bops_sorting: int
    flops_sorting: int
    bops_search: int
    flops_search: int
    bops_check: int
    flops_check: int


@dataclass(frozen=True)
class SimRecord:
    code: str
    decoder: str
    delta: int
    l_max: int
    ebn0_db: float
    frames: int
    frame_errors: int
    fer: float
    l_avg: float
    abandon_count: int
    bops_avg: float
    flops_avg: float
    bops_sorting: float
    flops_sorting: float
    bops_search: float
    flops_search: float
    bops_check: float
    flops_check: float
    seed: int
    wall_seconds: float

    def row(self) -> list:
        return [getattr(self, c) for c in CSV_COLUMNS]


def decode_one_frame(config: SimConfig, ebn0_db: float, frame_idx: int) -> FrameStat:
    """Generate, transmit, and decode frame ``frame_idx``; pure in its arguments."""
    code = config.code
    sigma = sigma_from_ebn0(ebn0_db, code.rate)
    rng = make_frame_rng(config.seed, frame_idx)
    if config.info_source == "random":
        u_arr = rng.integers(0, 2, size=code.k, dtype="uint8")
        u = BitVector.from_bits(int(b) for b in u_arr)
    else:
        u = BitVector.zeros(code.k)
    c = encode(code, u)
    y = awgn_transmit(modulate_bpsk(c), sigma, rng)
    frame = receive(y, sigma)

    meter = OpMeter()
    if config.decoder == "sgrand":
        res = sgrand_decode(code, frame, config.l_max, meter)
    else:
        res = pcgrand_decode(code, frame, config.delta, config.l_max, meter)

    init_b, init_f = meter.phase("search_init")
    step_b, step_f = meter.phase("search_step")
    return FrameStat(
        error=res.v != c,
        abandoned=not res.found,
        searches=res.searches,
        bops_sorting=meter.phase("sorting")[0],
        flops_sorting=meter.phase("sorting")[1],
        bops_search=init_b + step_b,
        flops_search=init_f + step_f,
        bops_check=meter.phase("checking")[0],
        flops_check=meter.phase("checking")[1],
    )


def _decode_range(config: SimConfig, ebn0_db: float, start: int, count: int) -> list[FrameStat]:
    return [decode_one_frame(config, ebn0_db, start + i) for i in range(count)]


def _stat_stream(config: SimConfig, ebn0_db: float):
    """Yield FrameStats in frame order, parallelizing in chunks when asked."""
    if config.workers == 1:
        for idx in range(config.max_frames):
            yield decode_one_frame(config, ebn0_db, idx)
        return
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        start = 0
        while start < config.max_frames:
            starts = []
            while len(starts) < config.workers and start < config.max_frames:
                starts.append((start, min(_CHUNK, config.max_frames - start)))
                start += min(_CHUNK, config.max_frames - start)
            futures = [pool.submit(_decode_range, config, ebn0_db, s, cnt) for s, cnt in starts]
            for fut in futures:  # submission order == frame order
                yield from fut.result()


def run_point(config: SimConfig, ebn0_db: float, sink: Callable[[SimRecord], None] | None = None) -> SimRecord:
    """Measure one Eb/N0 point, stopping at target_frame_errors or max_frames."""
    t0 = time.perf_counter()
    frames = 0
    errors = 0
    abandons = 0
    searches_total = 0
    b_sort = f_sort = b_search = f_search = b_check = f_check = 0

    for stat in _stat_stream(config, ebn0_db):
        frames += 1
        errors += stat.error
        abandons += stat.abandoned
        searches_total += stat.searches
        b_sort += stat.bops_sorting
        f_sort += stat.flops_sorting
        b_search += stat.bops_search
        f_search += stat.flops_search
        b_check += stat.bops_check
        f_check += stat.flops_check
        if errors >= config.target_frame_errors:
            break

    record = SimRecord(
        code=config.code.name,
        decoder=config.decoder,
        delta=config.delta if config.decoder == "pcgrand" else 0,
        l_max=config.l_max,
        ebn0_db=ebn0_db,
        frames=frames,
        frame_errors=errors,
        fer=errors / frames,
        l_avg=searches_total / frames,
        abandon_count=abandons,
        bops_avg=(b_sort + b_search + b_check) / frames,
        flops_avg=(f_sort + f_search + f_check) / frames,
        bops_sorting=b_sort / frames,
        flops_sorting=f_sort / frames,
        bops_search=b_search / frames,
        flops_search=f_search / frames,
        bops_check=b_check / frames,
        flops_check=f_check / frames,
        seed=config.seed,
        wall_seconds=time.perf_counter() - t0,
    )
    if sink is not None:
        sink(record)
    return record


def run_sweep(config: SimConfig, sink: Callable[[SimRecord], None] | None = None) -> list[SimRecord]:
    """One record per Eb/N0 point, in list order."""
    return [run_point(config, ebn0, sink) for ebn0 in config.ebn0_list]


def write_csv(records: Sequence[SimRecord], out: IO[str]) -> None:
    """Exact schema; float cells use repr so identical runs are byte-identical."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in rec.row()])


def read_csv(inp: IO[str]) -> list[dict]:
    """Rows as dicts with numeric fields parsed back."""
    reader = csv.DictReader(inp)
    if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
        raise ConfigError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for raw in reader:
        row = dict(raw)
        for key in ("delta", "l_max", "frames", "frame_errors", "abandon_count", "seed"):
            row[key] = int(raw[key])
        for key in (
            "ebn0_db", "fer", "l_avg", "bops_avg", "flops_avg",
            "bops_sorting", "flops_sorting", "bops_search", "flops_search",
            "bops_check", "flops_check", "wall_seconds",
        ):
            row[key] = float(raw[key])
        out.append(row)
    return out
