"""GF(2^m) finite field arithmetic.

Elements are plain integers in [0, 2^m) whose binary digits are the
coefficients of a polynomial over GF(2); arithmetic is done modulo an
irreducible polynomial of degree m.  Addition is XOR, so every element
is its own additive inverse (characteristic 2), which the block-matrix
layer above this module relies on.

Default irreducible polynomials, one per extension degree:
    m=2 : x^2 + x + 1                -> 0b111               = 7
    m=3 : x^3 + x + 1                -> 0b1011              = 11
    m=4 : x^4 + x + 1                -> 0b10011             = 19
    m=5 : x^5 + x^2 + 1              -> 0b100101            = 37
    m=6 : x^6 + x + 1                -> 0b1000011           = 67
    m=7 : x^7 + x^3 + 1              -> 0b10001001          = 137
    m=8 : x^8 + x^4 + x^3 + x^2 + 1  -> 0b100011101         = 285
    (degrees 9..16 follow the same low-weight convention, see table)

Multiplication is carry-less shift-and-XOR with reduction; for m <= 8 a
log/antilog table built from a generator element is used as a fast path
(results are identical, which the test suite checks exhaustively).
"""

from __future__ import annotations

import numpy as np

# Low-weight irreducible polynomial per extension degree, as a bitmask.
DEFAULT_POLYNOMIALS: dict[int, int] = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}

# GF(2) itself (m=1) is supported so that degenerate-field edge cases are
# testable; the interesting range for codes starts at m=2.
MIN_DEGREE = 1
MAX_DEGREE = 16


def poly_degree(poly: int) -> int:
    """Degree of a GF(2) polynomial given as a bitmask (-1 for the zero poly)."""
    return poly.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    """Remainder of carry-less division of a by b over GF(2)."""
    db = poly_degree(b)
    while poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Check irreducibility over GF(2) by trial division.

    Divisors only need to be tested up to degree m/2; candidate divisors
    are every polynomial of degree 1..m//2, which is cheap for m <= 16.
    """
    m = poly_degree(poly)
    if m < 1:
        return False
    if m == 1:
        return True
    if poly & 1 == 0:  # divisible by x
        return False
    for d in range(1, m // 2 + 1):
        for div in range(1 << d, 1 << (d + 1)):
            if _poly_mod(poly, div) == 0:
                return False
    return True


class GF2m:
    """The field GF(2^m) with a fixed reduction polynomial.

    Instances are immutable after construction and compare equal iff they
    share (m, poly), so a field object can be used as the context tag for
    elements, blocks and codes.  All operations are pure.
    """

    __slots__ = ("m", "poly", "q", "_exp", "_log", "_np_exp", "_np_log")

    # ``mul_array`` gathers through a uint8 antilog table indexed by int16
    # log sums, so elementwise products of uint8 arrays stay uint8; the
    # kernels in ``search`` lean on that to keep memory traffic small.

    def __init__(self, m: int, poly: int | None = None) -> None:
        if not MIN_DEGREE <= m <= MAX_DEGREE:
            raise ValueError(f"extension degree m={m} out of range [{MIN_DEGREE}, {MAX_DEGREE}]")
        if poly is None:
            poly = DEFAULT_POLYNOMIALS[m]
        if poly_degree(poly) != m:
            raise ValueError(
                f"reduction polynomial {poly:#b} has degree {poly_degree(poly)}, expected {m}"
            )
        if not is_irreducible(poly):
            raise ValueError(f"reduction polynomial {poly:#b} is reducible over GF(2)")
        self.m = m
        self.poly = poly
        self.q = 1 << m
        if m <= 8:
            self._build_tables()
        else:
            self._exp = None
            self._log = None
        self._np_exp = None
        self._np_log = None

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------

    def _build_tables(self) -> None:
        """Build doubled antilog and log tables from a generator element.

        x itself need not generate the multiplicative group for every
        irreducible polynomial, so search for the smallest element of
        order q-1 before filling the tables.
        """
        q = self.q
        if q == 2:  # trivial multiplicative group
            self._exp = [1, 1]
            self._log = [0, 0]
            return
        gen = None
        for g in range(2, q):
            order = 1
            v = self.mul_nolut(g, g)
            while v != g:
                v = self.mul_nolut(v, g)
                order += 1
            if order == q - 1:
                gen = g
                break
        assert gen is not None, "every finite field has a generator"
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        v = 1
        for i in range(q - 1):
            exp[i] = v
            exp[i + q - 1] = v
            log[v] = i
            v = self.mul_nolut(v, gen)
        self._exp = exp
        self._log = log

    # ------------------------------------------------------------------
    # scalar arithmetic
    # ------------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        """Field addition (XOR); doubles as subtraction in characteristic 2."""
        return a ^ b

    sub = add

    def mul_nolut(self, a: int, b: int) -> int:
        """Carry-less shift-and-XOR product reduced modulo the field polynomial."""
        p = 0
        top = 1 << self.m
        while b:
            if b & 1:
                p ^= a
            a <<= 1
            if a & top:
                a ^= self.poly
            b >>= 1
        return p

    def mul(self, a: int, b: int) -> int:
        if self._exp is None:
            return self.mul_nolut(a, b)
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        """Multiplicative inverse; raises ZeroDivisionError for 0."""
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF(2^{self.m})")
        if self._exp is not None:
            return self._exp[(self.q - 1) - self._log[a]]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # ------------------------------------------------------------------
    # iteration and vectorized views
    # ------------------------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def nonzero_elements(self) -> range:
        return range(1, self.q)

    @property
    def np_exp(self) -> np.ndarray:
        """Doubled antilog table as a numpy array (m <= 8 only)."""
        if self._exp is None:
            raise ValueError(f"log/antilog tables are only kept for m <= 8, not m={self.m}")
        if self._np_exp is None:
            self._np_exp = np.asarray(self._exp, dtype=np.uint8)
        return self._np_exp

    @property
    def np_log(self) -> np.ndarray:
        """Log table as a numpy array; entry 0 is a placeholder (m <= 8 only)."""
        if self._log is None:
            raise ValueError(f"log/antilog tables are only kept for m <= 8, not m={self.m}")
        if self._np_log is None:
            self._np_log = np.asarray(self._log, dtype=np.int16)
        return self._np_log

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise field product of two integer arrays (broadcasting)."""
        a = np.asarray(a)
        b = np.asarray(b)
        prod = self.np_exp[self.np_log[a] + self.np_log[b]]
        out = np.where((a == 0) | (b == 0), np.uint8(0), prod)
        dtype = np.result_type(a.dtype, b.dtype)
        return out if dtype == np.uint8 else out.astype(dtype)

    # ------------------------------------------------------------------
    # identity
    # ------------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF2m) and self.m == other.m and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.m, self.poly))

    def __repr__(self) -> str:
        return f"GF2m(m={self.m}, poly={self.poly:#b})"

    def check_same(self, other: "GF2m") -> None:
        """Raise if two contexts differ; mixing fields is always a bug."""
        if self != other:
            raise ValueError(f"field context mismatch: {self!r} vs {other!r}")


def field_new(m: int, poly: int | str | None = "default") -> GF2m:
    """Construct a field context; poly may be a bitmask or "default"."""
    if poly == "default" or poly is None:
        return GF2m(m)
    if isinstance(poly, str):
        raise ValueError(f"unrecognized polynomial spec {poly!r}")
    return GF2m(m, poly)
