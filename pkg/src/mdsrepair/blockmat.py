"""2x2 blocks and 2x4 repair matrices over GF(2^m).

A Block is a 2x2 matrix stored row-major.  Every block falls in exactly
one of four classes:

    ZERO  both columns zero
    L     first column zero, both entries of the second column nonzero
    R     second column zero, both entries of the first column nonzero
    M     everything else; the invertible blocks are the M subclass with
          nonzero determinant (``Block.is_invertible``)

The L/R definitions are deliberately strict: a singular block such as
[1,0,0,0] is class M even though it has a zero column.  Downstream
bandwidth accounting charges strict L/R blocks one symbol and M blocks
two, so the distinction is load-bearing.

A RepairMat is a rank-2 2x4 matrix [M1 | M2].  Two repair matrices with
the same row space repair the same node set, so searches range over one
canonical representative per 2-dimensional row space of F_q^4: the
reduced row echelon form, enumerated in lexicographic order by pivot
columns and then by the free entries.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .gf2m import GF2m


class BlockTag(Enum):
    ZERO = "zero"
    L = "L"
    R = "R"
    M = "M"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BlockClass:
    """Class tag plus the invertibility refinement (M_inv is M with det != 0)."""

    tag: BlockTag
    invertible: bool

    @property
    def is_minv(self) -> bool:
        return self.tag is BlockTag.M and self.invertible


@dataclass(frozen=True)
class Block:
    """A 2x2 matrix over GF(2^m), entries row-major (b11, b12, b21, b22)."""

    field: GF2m
    entries: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        if len(self.entries) != 4:
            raise ValueError(f"a block has 4 entries, got {len(self.entries)}")
        if any(not 0 <= e < self.field.q for e in self.entries):
            raise ValueError(f"entries {self.entries} out of range for {self.field!r}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, field: GF2m) -> "Block":
        return cls(field, (0, 0, 0, 0))

    @classmethod
    def identity(cls, field: GF2m) -> "Block":
        return cls(field, (1, 0, 0, 1))

    @classmethod
    def scalar(cls, field: GF2m, c: int) -> "Block":
        return cls(field, (c, 0, 0, c))

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "Block") -> "Block":
        self.field.check_same(other.field)
        a, b = self.entries, other.entries
        return Block(self.field, (a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2], a[3] ^ b[3]))

    def __matmul__(self, other: "Block") -> "Block":
        self.field.check_same(other.field)
        f = self.field
        a11, a12, a21, a22 = self.entries
        b11, b12, b21, b22 = other.entries
        return Block(
            f,
            (
                f.mul(a11, b11) ^ f.mul(a12, b21),
                f.mul(a11, b12) ^ f.mul(a12, b22),
                f.mul(a21, b11) ^ f.mul(a22, b21),
                f.mul(a21, b12) ^ f.mul(a22, b22),
            ),
        )

    def mul_vec(self, v: tuple[int, int]) -> tuple[int, int]:
        f = self.field
        b11, b12, b21, b22 = self.entries
        return (f.mul(b11, v[0]) ^ f.mul(b12, v[1]), f.mul(b21, v[0]) ^ f.mul(b22, v[1]))

    def det(self) -> int:
        f = self.field
        b11, b12, b21, b22 = self.entries
        return f.mul(b11, b22) ^ f.mul(b12, b21)

    @property
    def is_invertible(self) -> bool:
        return self.det() != 0

    def inverse(self) -> "Block":
        d = self.det()
        if d == 0:
            raise ZeroDivisionError(f"block {self.entries} is singular")
        f = self.field
        dinv = f.inv(d)
        b11, b12, b21, b22 = self.entries
        return Block(f, (f.mul(dinv, b22), f.mul(dinv, b12), f.mul(dinv, b21), f.mul(dinv, b11)))

    def is_zero(self) -> bool:
        return self.entries == (0, 0, 0, 0)

    def classify(self) -> BlockClass:
        b11, b12, b21, b22 = self.entries
        if self.is_zero():
            return BlockClass(BlockTag.ZERO, False)
        if b11 == 0 and b21 == 0 and b12 != 0 and b22 != 0:
            return BlockClass(BlockTag.L, False)
        if b12 == 0 and b22 == 0 and b11 != 0 and b21 != 0:
            return BlockClass(BlockTag.R, False)
        return BlockClass(BlockTag.M, self.det() != 0)

    def __repr__(self) -> str:
        return f"Block{self.entries}"


def classify(block: Block) -> BlockClass:
    """Class of a block, with invertibility as a refinement flag."""
    return block.classify()


# ---------------------------------------------------------------------------
# 2x4 repair matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RepairMat:
    """A 2x4 matrix [M1 | M2] over GF(2^m), rows stored as 4-tuples."""

    field: GF2m
    rows: tuple[tuple[int, int, int, int], tuple[int, int, int, int]]

    def __post_init__(self) -> None:
        if len(self.rows) != 2 or any(len(r) != 4 for r in self.rows):
            raise ValueError("a repair matrix has 2 rows of 4 entries")
        if any(not 0 <= e < self.field.q for r in self.rows for e in r):
            raise ValueError(f"entries {self.rows} out of range for {self.field!r}")

    @property
    def m1(self) -> Block:
        r0, r1 = self.rows
        return Block(self.field, (r0[0], r0[1], r1[0], r1[1]))

    @property
    def m2(self) -> Block:
        r0, r1 = self.rows
        return Block(self.field, (r0[2], r0[3], r1[2], r1[3]))

    @classmethod
    def from_halves(cls, m1: Block, m2: Block) -> "RepairMat":
        m1.field.check_same(m2.field)
        a = m1.entries
        b = m2.entries
        return cls(m1.field, ((a[0], a[1], b[0], b[1]), (a[2], a[3], b[2], b[3])))

    def left_mul(self, t: Block) -> "RepairMat":
        """Row transform t @ self for an arbitrary 2x2 t."""
        t.field.check_same(self.field)
        f = self.field
        t11, t12, t21, t22 = t.entries
        r0, r1 = self.rows
        top = tuple(f.mul(t11, r0[j]) ^ f.mul(t12, r1[j]) for j in range(4))
        bot = tuple(f.mul(t21, r0[j]) ^ f.mul(t22, r1[j]) for j in range(4))
        return RepairMat(f, (top, bot))

    def rank(self) -> int:
        return rank2x4(self)

    def rref(self) -> "RepairMat":
        """Canonical representative of this matrix's row space."""
        f = self.field
        rows = [list(self.rows[0]), list(self.rows[1])]
        pivot_row = 0
        for col in range(4):
            src = next((r for r in range(pivot_row, 2) if rows[r][col] != 0), None)
            if src is None:
                continue
            rows[pivot_row], rows[src] = rows[src], rows[pivot_row]
            scale = f.inv(rows[pivot_row][col])
            rows[pivot_row] = [f.mul(scale, e) for e in rows[pivot_row]]
            for r in range(2):
                if r != pivot_row and rows[r][col] != 0:
                    c = rows[r][col]
                    rows[r] = [rows[r][j] ^ f.mul(c, rows[pivot_row][j]) for j in range(4)]
            pivot_row += 1
            if pivot_row == 2:
                break
        return RepairMat(f, (tuple(rows[0]), tuple(rows[1])))

    def __repr__(self) -> str:
        return f"RepairMat{self.rows}"


def rank2x4(mat: RepairMat) -> int:
    """Row rank over the field; 0, 1 or 2."""
    f = mat.field
    r0, r1 = (list(mat.rows[0]), list(mat.rows[1]))
    if all(e == 0 for e in r0):
        r0, r1 = r1, r0
    if all(e == 0 for e in r0):
        return 0
    lead = next(j for j in range(4) if r0[j] != 0)
    if r1[lead] != 0:
        c = f.mul(r1[lead], f.inv(r0[lead]))
        r1 = [r1[j] ^ f.mul(c, r0[j]) for j in range(4)]
    return 1 if all(e == 0 for e in r1) else 2


def count_row_spaces(q: int) -> int:
    """Number of 2-dimensional subspaces of F_q^4 (Gaussian binomial [4,2]_q)."""
    return (q * q + 1) * (q * q + q + 1)


# Pivot column pairs in lexicographic order; for pivots (c1, c2) the free
# entries sit in row 1 at columns > c1 excluding c2, and in row 2 at
# columns > c2.  Everything else is pinned by the echelon shape.
_PIVOT_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _free_columns(c1: int, c2: int) -> tuple[list[int], list[int]]:
    row1 = [j for j in range(c1 + 1, 4) if j != c2]
    row2 = [j for j in range(c2 + 1, 4)]
    return row1, row2


@lru_cache(maxsize=8)
def _canonical_rows(q: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    out: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for c1, c2 in _PIVOT_PAIRS:
        free1, free2 = _free_columns(c1, c2)
        k = len(free1) + len(free2)
        for values in itertools.product(range(q), repeat=k):
            row1 = [0, 0, 0, 0]
            row2 = [0, 0, 0, 0]
            row1[c1] = 1
            row2[c2] = 1
            for j, v in zip(free1, values[: len(free1)]):
                row1[j] = v
            for j, v in zip(free2, values[len(free1):]):
                row2[j] = v
            out.append((tuple(row1), tuple(row2)))
    assert len(out) == count_row_spaces(q)
    return tuple(out)


def enumerate_row_spaces(field: GF2m) -> list[RepairMat]:
    """One canonical rank-2 representative per 2-dimensional row space.

    The list is deterministic: pivot pairs ascend lexicographically and
    free entries count up in row-major order, so index positions double
    as tie-break keys for search winners.
    """
    return [RepairMat(field, rows) for rows in _canonical_rows(field.q)]


@lru_cache(maxsize=8)
def canonical_matrix_array(q: int) -> np.ndarray:
    """The canonical matrices of ``enumerate_row_spaces`` as an (C, 8) array.

    Row layout is (row1 | row2), matching RepairMat.rows flattened; the
    array order is identical to the object enumeration.
    """
    rows = _canonical_rows(q)
    return np.asarray([r0 + r1 for r0, r1 in rows], dtype=np.uint8)


@lru_cache(maxsize=8)
def canonical_index_map(q: int) -> dict[tuple[int, ...], int]:
    """Flattened canonical rows -> index in the enumeration order."""
    rows = _canonical_rows(q)
    return {r0 + r1: i for i, (r0, r1) in enumerate(rows)}


def canonical_index(mat: RepairMat) -> int:
    """Index of this matrix's row space in the canonical enumeration."""
    r = mat.rref()
    if rank2x4(r) != 2:
        raise ValueError(f"matrix {mat.rows} does not span a 2-dimensional row space")
    return canonical_index_map(mat.field.q)[r.rows[0] + r.rows[1]]
