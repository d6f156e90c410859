"""BPSK-over-AWGN soft-decision front end.

Bits map to antipodal reals (0 -> +1, 1 -> -1); the receiver knows the noise
standard deviation, forms LLRs r_i = 2 y_i / sigma^2, hard decisions
z_i = [y_i < 0], and reliabilities |r_i|.  The soft weight of an error
pattern, Gamma(e) = sum of |r_i| over the support of e, is summed in index
order everywhere so equal patterns always produce bit-identical floats.

Per-frame randomness comes from a counter-based generator keyed by
(master seed, frame index), which makes frame streams independent of how
frames are distributed over workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .gf2 import BitVector

_KEY_MASK = (1 << 64) - 1


def sigma_from_ebn0(ebn0_db: float, rate: float) -> float:
    """Noise standard deviation for unit-energy BPSK at the given Eb/N0."""
    if rate <= 0:
        raise ConfigError(f"rate must be positive, got {rate}")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float
    rate: float
    sigma: float

    @classmethod
    def from_ebn0(cls, ebn0_db: float, rate: float) -> "ChannelParams":
        return cls(ebn0_db=ebn0_db, rate=rate, sigma=sigma_from_ebn0(ebn0_db, rate))


def modulate_bpsk(c: BitVector) -> np.ndarray:
    return 1.0 - 2.0 * np.array(c.to_list(), dtype=np.float64)


def make_frame_rng(seed: int, frame: int) -> np.random.Generator:
    """Counter-based substream for one frame; (seed, frame) is the Philox key."""
    key = np.array([seed & _KEY_MASK, frame & _KEY_MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def awgn_transmit(x: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    return x + sigma * rng.standard_normal(len(x))


def hard_decision(y: np.ndarray) -> BitVector:
    """z_i = 0 iff y_i >= 0 (zero maps to 0)."""
    bits = 0
    for i, v in enumerate(y):
        if v < 0:
            bits |= 1 << i
    return BitVector(len(y), bits)


def compute_llr(y: np.ndarray, sigma: float) -> np.ndarray:
    return (2.0 / (sigma * sigma)) * np.asarray(y, dtype=np.float64)


def soft_weight(e: BitVector, reliab: Sequence[float]) -> float:
    """Gamma(e): reliabilities summed over the support, in ascending index order."""
    total = 0.0
    bits = e.bits
    i = 0
    while bits:
        if bits & 1:
            total += float(reliab[i])
        bits >>= 1
        i += 1
    return total


@dataclass
class ReceivedFrame:
    """One frame after the matched filter: observations and derived soft inputs."""

    y: np.ndarray
    r: np.ndarray
    reliab: np.ndarray
    z: BitVector
    sigma: float


def receive(y: np.ndarray, sigma: float) -> ReceivedFrame:
    y = np.asarray(y, dtype=np.float64)
    r = compute_llr(y, sigma)
    return ReceivedFrame(y=y, r=r, reliab=np.abs(r), z=hard_decision(y), sigma=sigma)


def frame_from_llr(llr: Sequence[float]) -> ReceivedFrame:
    """Frame rebuilt from externally supplied LLRs (channel observations unknown)."""
    r = np.asarray(llr, dtype=np.float64)
    return ReceivedFrame(y=np.copy(r), r=r, reliab=np.abs(r), z=hard_decision(r), sigma=1.0)
