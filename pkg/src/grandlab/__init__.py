"""Guess-based maximum-likelihood decoding of binary linear block codes.

Three decoders over a shared soft-decision front end: a priority-queue soft
GRAND, a serial list search over a syndrome trellis, and the partially
constrained hybrid that drives the trellis with a slice of the parity-check
matrix and validates candidates against the rest.  A Monte Carlo harness
measures frame error rates and per-phase operation counts.
"""

__version__ = "0.1.0"
