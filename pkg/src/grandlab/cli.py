"""Command-line front end.

Subcommands: simulate (sweep Eb/N0 points to CSV), decode-one (single LLR
vector, prints the decision and counters), code-info, convert-matrix, and
selftest (randomized oracle suites against brute-force references).  Exit
codes: 0 success, 1 runtime failure, 2 usage.  stdout carries only
human-readable text; machine output always goes to files.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .channel import (
    awgn_transmit,
    frame_from_llr,
    make_frame_rng,
    modulate_bpsk,
    receive,
    sigma_from_ebn0,
    soft_weight,
)
from .codes import builtin_names, encode, get_code
from .errors import CodeLoadError, ConfigError, ContractError, MatrixParseError
from .gf2 import BitMatrix, BitVector, load_matrix, rank, write_matrix
from .meter import OpMeter
from .pcgrand import pcgrand_decode
from .sgrand import sgrand_decode, sort_by_reliability, PatternStream
from .sim import SimConfig, run_sweep, write_csv
from .trellis import SlvaSearch, build_trellis


def parse_ebn0_grid(text: str) -> tuple[float, ...]:
    """Either "a,b,c" or inclusive "start:stop:step"."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError(f"grid step must be positive, got {step}")
        if stop < start:
            raise ValueError(f"grid stop {stop} below start {start}")
        values = []
        i = 0
        while True:
            v = start + i * step
            if v > stop + 1e-9:
                break
            values.append(round(v, 12))
            i += 1
        return tuple(values)
    values = tuple(float(p) for p in text.split(",") if p.strip())
    if not values:
        raise ValueError(f"empty Eb/N0 list {text!r}")
    return values


def _ebn0_arg(text: str) -> tuple[float, ...]:
    # surface parse_ebn0_grid's own message instead of argparse's generic one
    try:
        return parse_ebn0_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_cli_code(args):
    h_file = getattr(args, "h_file", None)
    if h_file is None and getattr(args, "g_file", None) is not None:
        raise ConfigError("--g-file only accompanies --h-file; pass the parity-check matrix too")
    name = args.code
    if name is None:
        # without an explicit label, file-backed codes are named after the file
        # so CSV rows and progress lines never claim a registry code they aren't
        name = Path(h_file).stem if h_file is not None else "hamming-7-4"
    return get_code(
        name,
        h_file=h_file,
        g_file=getattr(args, "g_file", None),
        fmt=getattr(args, "matrix_format", "dense"),
    )


# -- simulate ------------------------------------------------------------------


def cmd_simulate(args) -> int:
    code = _load_cli_code(args)
    config = SimConfig(
        code=code,
        decoder=args.decoder,
        delta=args.delta,
        l_max=args.lmax,
        ebn0_list=args.ebn0,
        max_frames=args.max_frames,
        target_frame_errors=args.target_errors,
        seed=args.seed,
        info_source=args.info,
        workers=args.workers,
    )

    def progress(rec):
        print(
            f"{rec.code} {rec.decoder} delta={rec.delta} ebn0={rec.ebn0_db:g} dB: "
            f"fer={rec.fer:.3e} ({rec.frame_errors}/{rec.frames} frames) "
            f"l_avg={rec.l_avg:.2f} [{rec.wall_seconds:.1f}s]"
        )

    # reject an unwritable destination before the sweep, not hours into it
    with open(args.out, "a"):
        pass
    records = run_sweep(config, sink=progress)
    with open(args.out, "w", newline="") as fh:
        write_csv(records, fh)
    print(f"wrote {len(records)} rows to {args.out}")
    return 0


# -- decode-one ----------------------------------------------------------------


def cmd_decode_one(args) -> int:
    code = _load_cli_code(args)
    with open(args.llr) as fh:
        try:
            llr = [float(line) for line in fh if line.strip()]
        except ValueError:
            raise ConfigError(f"{args.llr}: LLR entries must be numbers, one per line") from None
    if len(llr) != code.n:
        raise ConfigError(f"LLR file has {len(llr)} entries; {code.name} needs n={code.n}")
    frame = frame_from_llr(llr)
    meter = OpMeter()
    if args.decoder == "sgrand":
        res = sgrand_decode(code, frame, args.lmax, meter=meter)
    else:
        res = pcgrand_decode(code, frame, args.delta, args.lmax, meter=meter)
    c = res.counters
    print(f"code: {code.name} (n={code.n}, k={code.k})")
    print(f"decoder: {args.decoder}" + (f" delta={args.delta}" if args.decoder == "pcgrand" else ""))
    print(f"found: {'yes' if res.found else 'no (hard decision returned)'}")
    print(f"searches: {res.searches}")
    print(f"gamma: {res.gamma!r}")
    print(f"z: {frame.z.to01()}")
    print(f"e_opt: {res.e_opt.to01()} support={list(res.e_opt.support())}")
    print(f"v: {res.v.to01()}")
    print(
        f"ops: bops={c.bops} flops={c.flops} "
        f"(sorting {c.phase('sorting')}, search_init {c.phase('search_init')}, "
        f"search_step {c.phase('search_step')}, checking {c.phase('checking')})"
    )
    return 0


# -- code-info -----------------------------------------------------------------


def cmd_code_info(args) -> int:
    code = _load_cli_code(args)
    print(f"name: {code.name}")
    print(f"n: {code.n}")
    print(f"k: {code.k}")
    print(f"redundancy: {code.n - code.k}")
    print(f"rate: {code.rate:.6f}")
    print(f"G: {code.G.rows}x{code.G.cols} (rank {rank(code.G)})")
    print(f"H: {code.H.rows}x{code.H.cols} (rank {rank(code.H)})")
    if args.dump:
        m = code.G if args.dump == "G" else code.H
        text = write_matrix(m, args.dump_format)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
            print(f"wrote {args.dump} to {args.out}")
        else:
            print(text, end="" if text.endswith("\n") else "\n")
    return 0


# -- convert-matrix --------------------------------------------------------------


def cmd_convert_matrix(args) -> int:
    with open(args.infile) as fh:
        m = load_matrix(fh.read(), args.source_format)
    with open(args.out, "w") as fh:
        fh.write(write_matrix(m, args.dest_format))
    print(f"{args.infile} ({args.source_format}, {m.rows}x{m.cols}) -> {args.out} ({args.dest_format})")
    return 0


# -- selftest -------------------------------------------------------------------
#
# Randomized comparisons against brute-force references, runnable from a
# shipped install (no test framework needed).  Each suite returns
# (ok, detail).


def _fold_weight(support, reliab) -> float:
    total = 0.0
    for i in support:
        total += reliab[i]
    return total


def _brute_coset(h1: BitMatrix, target: int, reliab) -> list[tuple[float, int]]:
    n = h1.cols
    cols = h1.column_bits()
    out = []
    for bits in range(1 << n):
        s = 0
        rem = bits
        while rem:
            low = rem & -rem
            s ^= cols[low.bit_length() - 1]
            rem ^= low
        if s == target:
            out.append((_fold_weight(BitVector(n, bits).support(), reliab), bits))
    out.sort(key=lambda t: t[0])
    return out


def _suite_slva(rng: random.Random, n_max: int, delta_max: int, trials: int) -> tuple[bool, str]:
    for t in range(trials):
        n = rng.randint(2, n_max)
        delta = rng.randint(0, min(delta_max, n))
        h1 = BitMatrix(delta, n, tuple(BitVector(n, rng.getrandbits(n)) for _ in range(delta)))
        z = BitVector(n, rng.getrandbits(n))
        reliab = [rng.uniform(0.01, 4.0) for _ in range(n)]
        trellis = build_trellis(h1, z, reliab)
        oracle = _brute_coset(h1, trellis.target, reliab)
        got = list(SlvaSearch(trellis))
        if len(got) != len(oracle):
            return False, f"trial {t}: emitted {len(got)} patterns, coset has {len(oracle)}"
        if len({p.bits for p, _ in got}) != len(got):
            return False, f"trial {t}: duplicate emission"
        if {p.bits for p, _ in got} != {bits for _, bits in oracle}:
            return False, f"trial {t}: emitted set differs from the coset"
        keys = [k for _, k in got]
        if any(a > b for a, b in zip(keys, keys[1:])):
            return False, f"trial {t}: keys not non-decreasing"
        for cut in range(1, len(keys) + 1):
            a = sorted(keys[:cut])
            b = oracle[:cut]
            if any(abs(x - y[0]) > 1e-9 for x, y in zip(a, b)):
                return False, f"trial {t}: weight prefix diverges at cut {cut}"
    return True, f"{trials} randomized coset enumerations matched brute force"


def _suite_sgrand(rng: random.Random, n_max: int, trials: int) -> tuple[bool, str]:
    for t in range(trials):
        n = rng.randint(2, min(n_max, 10))
        reliab = [rng.uniform(0.01, 4.0) for _ in range(n)]
        ctx = sort_by_reliability(reliab)
        expected = sorted(
            ((_fold_weight(flips, ctx.sorted_reliab), flips)
             for flips in _all_subsets(n)),
            key=lambda kv: (kv[0], kv[1]),
        )
        stream = PatternStream(ctx)
        for want_w, want_flips in expected:
            node = next(stream)
            if node.flips != want_flips:
                return False, f"trial {t}: pattern {node.flips} where {want_flips} expected"
            if abs(node.weight - want_w) > 1e-9:
                return False, f"trial {t}: weight {node.weight} != {want_w}"
        try:
            next(stream)
            return False, f"trial {t}: stream continued past 2^{n} patterns"
        except StopIteration:
            pass
    return True, f"{trials} full enumerations in brute-force order"


def _all_subsets(n: int):
    for bits in range(1 << n):
        yield tuple(i for i in range(n) if bits >> i & 1)


def _tie_probe_frames(code):
    """Constant-reliability single-error frames: order is pure tie-breaking."""
    frames = []
    for j in (0, 1, code.n - 2):
        y = np.ones(code.n)
        y[j] = -1.0
        frames.append(receive(y, 1.0))
    return frames


def _suite_equivalence(rng: random.Random, trials: int) -> tuple[bool, str]:
    codes = [get_code("hamming-7-4"), get_code("hamming-15-11")]
    checked = 0
    for code in codes:
        sigma = sigma_from_ebn0(2.0, code.rate)
        frames = list(_tie_probe_frames(code))
        for i in range(trials):
            c = encode(code, BitVector(code.k, rng.getrandbits(code.k)))
            y = awgn_transmit(modulate_bpsk(c), sigma, make_frame_rng(rng.getrandbits(32), i))
            frames.append(receive(y, sigma))
        for frame in frames:
            a = sgrand_decode(code, frame, 1 << code.n)
            b = pcgrand_decode(code, frame, 0, 1 << code.n)
            if (a.found, a.searches, a.v) != (b.found, b.searches, b.v):
                return False, (
                    f"{code.name}: found/searches/v diverged "
                    f"({a.found},{a.searches}) vs ({b.found},{b.searches})"
                )
            checked += 1
    return True, f"{checked} frames identical across both guessing orders"


def _suite_ml(rng: random.Random, trials: int) -> tuple[bool, str]:
    code = get_code("hamming-7-4")
    codewords = [encode(code, BitVector(code.k, u)) for u in range(1 << code.k)]
    sigma = sigma_from_ebn0(3.0, code.rate)
    nk = code.n - code.k
    for i in range(trials):
        c = encode(code, BitVector(code.k, rng.getrandbits(code.k)))
        y = awgn_transmit(modulate_bpsk(c), sigma, make_frame_rng(rng.getrandbits(32), i))
        frame = receive(y, sigma)
        ml_gamma = min(soft_weight(frame.z ^ w, frame.reliab) for w in codewords)
        results = [sgrand_decode(code, frame, 1 << code.n)]
        for delta in (0, 2, nk):
            results.append(pcgrand_decode(code, frame, delta, 1 << code.n))
        for res in results:
            if not res.found or res.gamma != ml_gamma:
                return False, f"frame {i}: gamma {res.gamma!r} != ML {ml_gamma!r}"
    return True, f"{trials} frames, every decoder hit the exhaustive optimum exactly"


SELFTEST_SUITES = ("slva", "sgrand", "pcgrand-sgrand-equivalence", "ml-equivalence")


def cmd_selftest(args) -> int:
    suites = args.suite or list(SELFTEST_SUITES)
    failures = 0
    for name in suites:
        rng = random.Random(args.seed)
        if name == "slva":
            ok, detail = _suite_slva(rng, args.n, args.delta, args.trials)
        elif name == "sgrand":
            ok, detail = _suite_sgrand(rng, args.n, args.trials)
        elif name == "pcgrand-sgrand-equivalence":
            ok, detail = _suite_equivalence(rng, args.trials)
        elif name == "ml-equivalence":
            ok, detail = _suite_ml(rng, args.trials)
        else:  # pragma: no cover - argparse choices guard this
            raise ConfigError(f"unknown suite {name}")
        print(f"{name}: {'PASS' if ok else 'FAIL'} - {detail}")
        failures += not ok
    return 1 if failures else 0


# -- parser ----------------------------------------------------------------------


def _add_code_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--code",
                   help=f"built-in name ({', '.join(builtin_names())}) or a label for "
                        "--h-file; defaults to hamming-7-4, or the file stem with --h-file")
    p.add_argument("--h-file", help="parity-check matrix file (overrides the registry)")
    p.add_argument("--g-file", help="generator matrix file (optional with --h-file)")
    p.add_argument("--matrix-format", choices=("dense", "alist"), default="dense")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grandlab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"grandlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo sweep to CSV")
    _add_code_flags(p)
    p.add_argument("--decoder", choices=("sgrand", "pcgrand"), required=True)
    p.add_argument("--delta", type=int, default=0, help="constrained rows (pcgrand only)")
    p.add_argument("--lmax", type=int, required=True, help="guess budget per frame")
    p.add_argument("--ebn0", type=_ebn0_arg, required=True,
                   help='dB grid: "start:stop:step" (inclusive) or "a,b,c"')
    p.add_argument("--max-frames", type=int, default=10**7)
    p.add_argument("--target-errors", type=int, default=100)
    p.add_argument("--info", choices=("random", "all_zero"), default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decode-one", help="decode a single LLR vector")
    _add_code_flags(p)
    p.add_argument("--llr", required=True, help="file with one LLR per line")
    p.add_argument("--decoder", choices=("sgrand", "pcgrand"), default="pcgrand")
    p.add_argument("--delta", type=int, default=0)
    p.add_argument("--lmax", type=int, default=1 << 20)
    p.set_defaults(func=cmd_decode_one)

    p = sub.add_parser("code-info", help="print code parameters")
    _add_code_flags(p)
    p.add_argument("--dump", choices=("G", "H"), help="also emit a matrix")
    p.add_argument("--dump-format", choices=("dense", "alist"), default="dense")
    p.add_argument("--out", help="matrix output path (stdout if omitted)")
    p.set_defaults(func=cmd_code_info)

    p = sub.add_parser("convert-matrix", help="translate between matrix file formats")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--from", dest="source_format", choices=("dense", "alist"), required=True)
    p.add_argument("--to", dest="dest_format", choices=("dense", "alist"), required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert_matrix)

    p = sub.add_parser("selftest", help="randomized oracle suites")
    p.add_argument("--suite", action="append", choices=SELFTEST_SUITES,
                   help="run one suite (repeatable); default runs all")
    p.add_argument("--n", type=int, default=10, help="max block length for random instances")
    p.add_argument("--delta", type=int, default=3, help="max constrained rows for random instances")
    p.add_argument("--trials", type=int, default=60)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CodeLoadError, ContractError, MatrixParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
