"""Dense GF(2) vectors and matrices with bit-packed storage.

Rows live in Python arbitrary-precision integers, so XOR and popcount run
word-at-a-time; bit i of a vector is ``(bits >> i) & 1``.  Everything here is
immutable after construction.  Two on-disk formats are supported: a dense
text format (``"ROWS COLS"`` header line followed by one 0/1 string per row)
and the sparse alist layout used for published parity-check matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ContractError, MatrixParseError


@dataclass(frozen=True)
class BitVector:
    """Fixed-length GF(2) vector; ``bits`` packs entry i at bit position i."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0:
            raise ContractError(f"negative length {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ContractError(f"bits 0x{self.bits:x} out of range for length {self.n}")

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, 0)

    @classmethod
    def from_bits(cls, entries: Iterable[int]) -> "BitVector":
        bits = 0
        n = 0
        for e in entries:
            if e not in (0, 1):
                raise ContractError(f"entry {e!r} is not a bit")
            bits |= e << n
            n += 1
        return cls(n, bits)

    @classmethod
    def from01(cls, text: str) -> "BitVector":
        return cls.from_bits(int(c) for c in text)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ContractError(f"length mismatch {self.n} != {other.n}")
        return BitVector(self.n, self.bits ^ other.bits)

    def weight(self) -> int:
        """Hamming weight."""
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> tuple[int, ...]:
        """Indices of the nonzero entries, ascending."""
        return tuple(i for i in range(self.n) if (self.bits >> i) & 1)

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.n)]

    def to01(self) -> str:
        return "".join("01"[b] for b in self.to_list())


@dataclass(frozen=True)
class BitMatrix:
    """GF(2) matrix stored as a tuple of BitVector rows."""

    rows: int
    cols: int
    row_data: tuple[BitVector, ...]

    def __post_init__(self):
        if len(self.row_data) != self.rows:
            raise ContractError(f"declared {self.rows} rows, got {len(self.row_data)}")
        for r in self.row_data:
            if r.n != self.cols:
                raise ContractError(f"row length {r.n} != declared cols {self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector], cols: int | None = None) -> "BitMatrix":
        rows = tuple(rows)
        if cols is None:
            if not rows:
                raise ContractError("cannot infer cols of an empty matrix")
            cols = rows[0].n
        return cls(len(rows), cols, rows)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "BitMatrix":
        rows = tuple(BitVector.from_bits(r) for r in entries)
        return cls.from_rows(rows, cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, tuple(BitVector.zeros(cols) for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(BitVector(n, 1 << i) for i in range(n)))

    def row_ints(self) -> list[int]:
        """Packed row integers (hot-loop view; bit i of row j = entry [j][i])."""
        return [r.bits for r in self.row_data]

    def column_bits(self) -> list[int]:
        """Packed column integers: bit j of entry i is row j's bit at column i."""
        cols = [0] * self.cols
        for j, r in enumerate(self.row_data):
            bits = r.bits
            while bits:
                low = bits & -bits
                cols[low.bit_length() - 1] |= 1 << j
                bits ^= low
        return cols

    def transpose(self) -> "BitMatrix":
        cols = self.column_bits()
        return BitMatrix(self.cols, self.rows, tuple(BitVector(self.rows, c) for c in cols))

    def to_lists(self) -> list[list[int]]:
        return [r.to_list() for r in self.row_data]


def mat_vec_mul(m: BitMatrix, v: BitVector, meter=None, phase: str = "checking") -> BitVector:
    """GF(2) product M·v (length = m.rows).

    When a meter is attached the multiply is charged at the dense-model rate
    of rows x cols BOPs to the given phase, independent of sparsity.
    """
    if v.n != m.cols:
        raise ContractError(f"vector length {v.n} != matrix cols {m.cols}")
    if meter is not None:
        meter.record(phase, bops=m.rows * m.cols, flops=0)
    out = 0
    vb = v.bits
    for j, r in enumerate(m.row_data):
        out |= ((r.bits & vb).bit_count() & 1) << j
    return BitVector(m.rows, out)


def matvec_packed(row_ints: list[int], v_bits: int) -> int:
    """mat_vec_mul on raw packed ints (no metering, no wrapping)."""
    out = 0
    for j, r in enumerate(row_ints):
        out |= ((r & v_bits).bit_count() & 1) << j
    return out


def split_rows(
    m: BitMatrix, delta: int, row_perm: Sequence[int] | None = None
) -> tuple[BitMatrix, BitMatrix]:
    """Split M into its first ``delta`` rows and the rest.

    An optional ``row_perm`` (a permutation of range(rows)) is applied first,
    so any row subset can be steered into the top block.
    """
    if not 0 <= delta <= m.rows:
        raise ContractError(f"delta {delta} outside [0, {m.rows}]")
    rows = m.row_data
    if row_perm is not None:
        if sorted(row_perm) != list(range(m.rows)):
            raise ContractError("row_perm is not a permutation of the row indices")
        rows = tuple(rows[i] for i in row_perm)
    top = BitMatrix(delta, m.cols, rows[:delta])
    bottom = BitMatrix(m.rows - delta, m.cols, rows[delta:])
    return top, bottom


def vstack(top: BitMatrix, bottom: BitMatrix) -> BitMatrix:
    if top.cols != bottom.cols:
        raise ContractError(f"column mismatch {top.cols} != {bottom.cols}")
    return BitMatrix(top.rows + bottom.rows, top.cols, top.row_data + bottom.row_data)


def row_reduce(m: BitMatrix) -> tuple[BitMatrix, int, tuple[int, ...]]:
    """Reduced row-echelon form over GF(2): (reduced, rank, pivot columns)."""
    rows = m.row_ints()
    pivots: list[int] = []
    rank = 0
    for col in range(m.cols):
        mask = 1 << col
        pivot = next((i for i in range(rank, m.rows) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(m.rows):
            if i != rank and rows[i] & mask:
                rows[i] ^= rows[rank]
        pivots.append(col)
        rank += 1
    reduced = BitMatrix(m.rows, m.cols, tuple(BitVector(m.cols, r) for r in rows))
    return reduced, rank, tuple(pivots)


def rank(m: BitMatrix) -> int:
    return row_reduce(m)[1]


def null_space_basis(m: BitMatrix) -> BitMatrix:
    """Rows form a basis of {x : M x = 0}; (cols - rank) rows, one per free column."""
    reduced, rnk, pivots = row_reduce(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    red_rows = reduced.row_ints()
    basis = []
    for f in free:
        x = 1 << f
        for i, p in enumerate(pivots):
            if (red_rows[i] >> f) & 1:
                x |= 1 << p
        basis.append(BitVector(m.cols, x))
    return BitMatrix(len(basis), m.cols, tuple(basis))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _tokens(line: str) -> list[str]:
    return line.split()


def write_matrix(m: BitMatrix, fmt: str = "dense") -> str:
    if fmt == "dense":
        lines = [f"{m.rows} {m.cols}"]
        lines += [r.to01() for r in m.row_data]
        return "\n".join(lines) + "\n"
    if fmt == "alist":
        col_idx = [[] for _ in range(m.cols)]
        row_idx = [[] for _ in range(m.rows)]
        for j, r in enumerate(m.row_data):
            for i in r.support():
                col_idx[i].append(j + 1)
                row_idx[j].append(i + 1)
        max_col = max((len(c) for c in col_idx), default=0)
        max_row = max((len(r) for r in row_idx), default=0)
        lines = [
            f"{m.cols} {m.rows}",
            f"{max_col} {max_row}",
            " ".join(str(len(c)) for c in col_idx),
            " ".join(str(len(r)) for r in row_idx),
        ]
        lines += [" ".join(str(j) for j in c) for c in col_idx]
        lines += [" ".join(str(i) for i in r) for r in row_idx]
        return "\n".join(lines) + "\n"
    raise ContractError(f"unknown matrix format {fmt!r}")


def _parse_dense(lines: list[str]) -> BitMatrix:
    if not lines:
        raise MatrixParseError(1, "empty input")
    header = _tokens(lines[0])
    if len(header) != 2:
        raise MatrixParseError(1, f"expected 'ROWS COLS', got {lines[0]!r}")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError:
        raise MatrixParseError(1, f"non-integer dimensions {lines[0]!r}") from None
    if rows < 0 or cols < 0:
        raise MatrixParseError(1, f"negative dimensions {rows}x{cols}")
    if len(lines) < rows + 1:
        raise MatrixParseError(len(lines) + 1, f"expected {rows} row lines, found {len(lines) - 1}")
    if len(lines) > rows + 1:
        raise MatrixParseError(rows + 2, f"unexpected trailing content {lines[rows + 1]!r}")
    data = []
    for j in range(rows):
        line = lines[1 + j].strip()
        if len(line) != cols or set(line) - {"0", "1"}:
            raise MatrixParseError(j + 2, f"expected {cols} chars of 0/1, got {line!r}")
        data.append(BitVector.from01(line))
    return BitMatrix(rows, cols, tuple(data))


def _parse_alist(lines: list[str]) -> BitMatrix:
    def ints(line_no: int, expect: int | None = None) -> list[int]:
        # a missing trailing line reads as empty; degree checks flag real truncation
        toks = _tokens(lines[line_no - 1]) if line_no <= len(lines) else []
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise MatrixParseError(line_no, f"non-integer token in {lines[line_no - 1]!r}") from None
        if expect is not None and len(vals) != expect:
            raise MatrixParseError(line_no, f"expected {expect} integers, got {len(vals)}")
        return vals

    dims = ints(1, 2)
    cols, rows = dims
    if cols < 0 or rows < 0:
        raise MatrixParseError(1, f"negative dimensions {cols}x{rows}")
    maxdeg = ints(2, 2)
    col_deg = ints(3, cols)
    row_deg = ints(4, rows)
    if col_deg and max(col_deg, default=0) > maxdeg[0]:
        raise MatrixParseError(3, "column degree exceeds declared maximum")
    if row_deg and max(row_deg, default=0) > maxdeg[1]:
        raise MatrixParseError(4, "row degree exceeds declared maximum")
    row_bits = [0] * rows
    for i in range(cols):
        line_no = 5 + i
        # trailing zero padding is tolerated (the common published variant)
        vals = [v for v in ints(line_no) if v != 0]
        if len(vals) != col_deg[i]:
            raise MatrixParseError(line_no, f"column {i}: {len(vals)} entries, degree says {col_deg[i]}")
        for j in vals:
            if not 1 <= j <= rows:
                raise MatrixParseError(line_no, f"row index {j} outside 1..{rows}")
            row_bits[j - 1] |= 1 << i
    # row blocks are redundant but must be present and consistent
    check_bits = [0] * rows
    for j in range(rows):
        line_no = 5 + cols + j
        vals = [v for v in ints(line_no) if v != 0]
        if len(vals) != row_deg[j]:
            raise MatrixParseError(line_no, f"row {j}: {len(vals)} entries, degree says {row_deg[j]}")
        for i in vals:
            if not 1 <= i <= cols:
                raise MatrixParseError(line_no, f"column index {i} outside 1..{cols}")
            check_bits[j] |= 1 << (i - 1)
    if check_bits != row_bits:
        raise MatrixParseError(5 + cols, "row blocks disagree with column blocks")
    extra = 5 + cols + rows - 1
    for k in range(extra, len(lines)):
        if lines[k].strip():
            raise MatrixParseError(k + 1, f"unexpected trailing content {lines[k]!r}")
    return BitMatrix(rows, cols, tuple(BitVector(cols, b) for b in row_bits))


def load_matrix(text: str, fmt: str = "dense") -> BitMatrix:
    """Parse a matrix from text; raises MatrixParseError with a line number."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if fmt == "dense":
        return _parse_dense(lines)
    if fmt == "alist":
        return _parse_alist(lines)
    raise ContractError(f"unknown matrix format {fmt!r}")
