#!/usr/bin/env python3
"""Per-phase operation counts across Eb/N0 for a fixed decoder setup.

Complements the delta sweep: holds delta fixed and walks the SNR axis, so
the crossover where checking stops dominating setup becomes visible in the
bops_search / bops_check columns.

    python3 scripts/run_complexity_profile.py --decoder pcgrand --delta 4
"""

import argparse
import pathlib

from grandlab.cli import parse_ebn0_grid
from grandlab.codes import get_code
from grandlab.sim import SimConfig, run_sweep, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--code", default="bch-127-113")
    ap.add_argument("--decoder", choices=("sgrand", "pcgrand"), default="pcgrand")
    ap.add_argument("--delta", type=int, default=4)
    ap.add_argument("--ebn0", type=parse_ebn0_grid, default=parse_ebn0_grid("3:6:1"))
    ap.add_argument("--lmax", type=int, default=10**5)
    ap.add_argument("--target-errors", type=int, default=50)
    ap.add_argument("--max-frames", type=int, default=10**5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("results/complexity.csv"))
    args = ap.parse_args()

    config = SimConfig(
        code=get_code(args.code),
        decoder=args.decoder,
        delta=args.delta if args.decoder == "pcgrand" else 0,
        l_max=args.lmax,
        ebn0_list=args.ebn0,
        max_frames=args.max_frames,
        target_frame_errors=args.target_errors,
        seed=args.seed,
        workers=args.workers,
    )
    records = run_sweep(
        config,
        sink=lambda r: print(
            f"ebn0={r.ebn0_db:g}: bops(sort/search/check)="
            f"{r.bops_sorting:.2e}/{r.bops_search:.2e}/{r.bops_check:.2e} "
            f"flops={r.flops_avg:.2e} l_avg={r.l_avg:.1f}"
        ),
    )
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        write_csv(records, fh)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
