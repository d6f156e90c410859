"""Binary linear block codes: constructors, loading, and a named registry.

A code is a (G, H) pair over GF(2) with G full rank k and H full rank n-k,
G H^T = 0.  Built-ins: the Hamming family (parameter m in 2..5, parity-check
columns are the nonzero m-bit patterns in ascending integer order) and the
double-error-correcting [127,113] BCH code (narrow-sense, generator
polynomial lcm of the minimal polynomials of alpha and alpha^3 over GF(2^7)
built on the primitive polynomial x^7 + x + 1).  File-backed codes load from
the dense-text or alist matrix formats and are verified on load.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import CodeLoadError
from .gf2 import BitMatrix, BitVector, load_matrix, mat_vec_mul, null_space_basis, rank


@dataclass(frozen=True)
class LinearCode:
    name: str
    n: int
    k: int
    G: BitMatrix
    H: BitMatrix

    @property
    def rate(self) -> float:
        return self.k / self.n


def validate_code(code: LinearCode) -> LinearCode:
    """Check structural invariants; raises CodeLoadError naming the failure."""
    if code.G.rows != code.k or code.G.cols != code.n:
        raise CodeLoadError(f"{code.name}: G is {code.G.rows}x{code.G.cols}, expected {code.k}x{code.n}")
    if code.H.rows != code.n - code.k or code.H.cols != code.n:
        raise CodeLoadError(
            f"{code.name}: H is {code.H.rows}x{code.H.cols}, expected {code.n - code.k}x{code.n}"
        )
    if rank(code.G) != code.k:
        raise CodeLoadError(f"{code.name}: G is rank deficient (rank {rank(code.G)} < k={code.k})")
    if rank(code.H) != code.n - code.k:
        raise CodeLoadError(
            f"{code.name}: H is rank deficient (rank {rank(code.H)} < n-k={code.n - code.k})"
        )
    for h in code.H.row_data:
        if not mat_vec_mul(code.G, h).is_zero():
            raise CodeLoadError(f"{code.name}: G H^T != 0")
    return code


def encode(code: LinearCode, u: BitVector) -> BitVector:
    """c = u G: XOR of the generator rows selected by the info bits."""
    if u.n != code.k:
        raise CodeLoadError(f"info word length {u.n} != k={code.k}")
    c = 0
    ubits = u.bits
    for row in code.G.row_data:
        if ubits & 1:
            c ^= row.bits
        ubits >>= 1
    return BitVector(code.n, c)


def hamming_code(m: int) -> LinearCode:
    """[2^m - 1, 2^m - 1 - m] Hamming code; H column i is the binary of i+1."""
    if not 2 <= m <= 5:
        raise CodeLoadError(f"hamming parameter m={m} outside 2..5")
    n = (1 << m) - 1
    h = BitMatrix.from_lists([[(i + 1) >> j & 1 for i in range(n)] for j in range(m)])
    g = null_space_basis(h)
    code = LinearCode(name=f"hamming-{n}-{n - m}", n=n, k=n - m, G=g, H=h)
    return validate_code(code)


# ---------------------------------------------------------------------------
# GF(2^7) scaffolding for the BCH generator polynomial
# ---------------------------------------------------------------------------

_GF_M = 7
_GF_PRIM = 0b10000011  # x^7 + x + 1
_GF_ORDER = (1 << _GF_M) - 1  # 127


@functools.lru_cache(maxsize=1)
def _gf_tables() -> tuple[list[int], list[int]]:
    exp = [0] * (2 * _GF_ORDER)
    log = [0] * (1 << _GF_M)
    x = 1
    for i in range(_GF_ORDER):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x >> _GF_M:
            x ^= _GF_PRIM
    for i in range(_GF_ORDER, 2 * _GF_ORDER):
        exp[i] = exp[i - _GF_ORDER]
    return exp, log


def _gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    exp, log = _gf_tables()
    return exp[log[a] + log[b]]


def _cyclotomic_coset(s: int) -> list[int]:
    coset = []
    e = s
    while e not in coset:
        coset.append(e)
        e = (e * 2) % _GF_ORDER
    return coset


def _minimal_polynomial(s: int) -> int:
    """Minimal polynomial of alpha^s over GF(2), packed with bit i = coeff of x^i."""
    exp, _ = _gf_tables()
    poly = [1]  # coefficients in GF(2^7), index = degree
    for e in _cyclotomic_coset(s):
        root = exp[e]
        nxt = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] ^= c
            nxt[i] ^= _gf_mul(c, root)
        poly = nxt
    packed = 0
    for i, c in enumerate(poly):
        if c not in (0, 1):
            raise CodeLoadError(f"minimal polynomial of alpha^{s} has a non-binary coefficient")
        packed |= c << i
    return packed


def _poly_mul_gf2(a: int, b: int) -> int:
    out = 0
    shift = 0
    while b:
        if b & 1:
            out ^= a << shift
        b >>= 1
        shift += 1
    return out


@functools.lru_cache(maxsize=1)
def bch_generator_polynomial() -> int:
    """g(x) = m1(x) m3(x), degree 14; bit i = coefficient of x^i."""
    return _poly_mul_gf2(_minimal_polynomial(1), _minimal_polynomial(3))


def bch_code_127_113() -> LinearCode:
    """Narrow-sense double-error-correcting BCH code of length 127.

    The generator matrix is the cyclic (non-systematic) one: row i holds
    x^i * g(x).  H is a basis of the dual, derived from the null space of G.
    """
    n, k = 127, 113
    g_poly = bch_generator_polynomial()
    if g_poly.bit_length() - 1 != n - k:
        raise CodeLoadError(f"generator polynomial degree {g_poly.bit_length() - 1} != {n - k}")
    g = BitMatrix.from_rows([BitVector(n, g_poly << i) for i in range(k)])
    h = null_space_basis(g)
    code = LinearCode(name="bch-127-113", n=n, k=k, G=g, H=h)
    return validate_code(code)


# ---------------------------------------------------------------------------
# loading and registry
# ---------------------------------------------------------------------------


def load_code(
    name: str,
    h_text: str,
    fmt: str = "dense",
    g_text: str | None = None,
    g_fmt: str | None = None,
) -> LinearCode:
    """Build a code from matrix text; G defaults to a null-space basis of H."""
    h = load_matrix(h_text, fmt)
    n = h.cols
    k = n - h.rows
    if k <= 0:
        raise CodeLoadError(f"{name}: H of shape {h.rows}x{h.cols} leaves no information bits")
    if rank(h) != h.rows:
        raise CodeLoadError(f"{name}: H is rank deficient (rank {rank(h)} < rows {h.rows})")
    if g_text is not None:
        g = load_matrix(g_text, g_fmt or fmt)
        if g.cols != n:
            raise CodeLoadError(f"{name}: G has {g.cols} columns, H has {n}")
    else:
        g = null_space_basis(h)
    return validate_code(LinearCode(name=name, n=n, k=g.rows, G=g, H=h))


_BUILTINS = {
    "hamming-3-1": lambda: hamming_code(2),
    "hamming-7-4": lambda: hamming_code(3),
    "hamming-15-11": lambda: hamming_code(4),
    "hamming-31-26": lambda: hamming_code(5),
    "bch-127-113": bch_code_127_113,
}


def builtin_names() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


@functools.lru_cache(maxsize=None)
def _builtin(name: str) -> LinearCode:
    return _BUILTINS[name]()


def get_code(
    name: str,
    h_file: str | None = None,
    g_file: str | None = None,
    fmt: str = "dense",
) -> LinearCode:
    """Fetch a built-in code by registry name, or load a file-backed one.

    File-backed codes (e.g. externally supplied polar constructions) are
    declared by passing matrix paths; the registry name is then just a label.
    """
    if h_file is None:
        if name not in _BUILTINS:
            raise CodeLoadError(
                f"unknown code {name!r} and no matrix file given; built-ins: {', '.join(builtin_names())}"
            )
        return _builtin(name)
    with open(h_file) as fh:
        h_text = fh.read()
    g_text = None
    if g_file is not None:
        with open(g_file) as fg:
            g_text = fg.read()
    return load_code(name, h_text, fmt=fmt, g_text=g_text)
