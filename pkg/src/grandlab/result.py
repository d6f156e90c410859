"""Decoder output shared by every guessing decoder."""

from __future__ import annotations

from dataclasses import dataclass

from .gf2 import BitVector
from .meter import OpCounters


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one decode attempt.

    ``gamma`` is always recomputed from ``e_opt`` with the shared soft-weight
    summation (ascending index order), so equal patterns compare bit-equal
    across decoders and oracles.  ``found`` False means the search budget ran
    out; the caller gets the hard decision back unchanged (e_opt = 0).
    """

    v: BitVector
    e_opt: BitVector
    gamma: float
    searches: int
    found: bool
    counters: OpCounters
