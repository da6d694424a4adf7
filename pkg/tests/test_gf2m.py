"""Field arithmetic tests.

Oracles used here and nowhere else:
  * a log/antilog table built by repeated multiplication by x with manual
    polynomial reduction (independent of GF2m internals),
  * exhaustive search for inverses over all nonzero elements.
"""

import pytest
from hypothesis import given, strategies as st

from mdsrepair.gf2m import (
    DEFAULT_POLYNOMIALS,
    GF2m,
    field_new,
    is_irreducible,
    poly_degree,
)


def shift_xor_mul(m: int, poly: int, a: int, b: int) -> int:
    """Reference carry-less product written separately from the library."""
    result = 0
    for bit in range(m):
        if (b >> bit) & 1:
            result ^= a << bit
    for deg in range(2 * m - 2, m - 1, -1):
        if (result >> deg) & 1:
            result ^= poly << (deg - m)
    return result


class TestConstruction:
    def test_default_gf16(self):
        f = field_new(4, "default")
        assert (f.m, f.poly, f.q) == (4, 0b10011, 16)

    def test_default_gf4(self):
        assert field_new(2).q == 4

    def test_rejects_x4_plus_x3(self):
        # 0b11000 is x^4 + x^3 = x^3 (x + 1): wrong shape twice over
        with pytest.raises(ValueError, match="0b11000"):
            field_new(4, 0b11000)

    def test_rejects_wrong_degree(self):
        with pytest.raises(ValueError, match="degree"):
            field_new(4, 0b111)

    def test_rejects_reducible_of_right_degree(self):
        # x^4 + 1 = (x + 1)^4
        with pytest.raises(ValueError, match="reducible"):
            field_new(4, 0b10001)

    def test_all_default_polynomials_are_irreducible(self):
        for m, poly in DEFAULT_POLYNOMIALS.items():
            assert poly_degree(poly) == m
            assert is_irreducible(poly), f"default for m={m} is reducible"

    def test_context_equality(self):
        assert GF2m(4) == GF2m(4, 0b10011)
        assert GF2m(4) != GF2m(4, 0b11001)
        with pytest.raises(ValueError, match="mismatch"):
            GF2m(4).check_same(GF2m(2))


class TestAdd:
    def test_paper_row_value(self):
        # 1 + 3 = 2 is the entry that builds the worked example's row
        assert GF2m(4).add(1, 3) == 2

    def test_self_inverse_and_identity(self):
        f = GF2m(4)
        for a in f.elements():
            assert f.add(a, a) == 0
            assert f.add(a, 0) == a


class TestMul:
    def test_known_products_gf16(self):
        f = GF2m(4)
        assert f.mul(2, 2) == 4
        assert f.mul(2, 9) == 1
        for a in f.elements():
            assert f.mul(a, 1) == a

    def test_matches_log_table_oracle(self):
        # Build the oracle table by repeated multiplication by x.
        for m in (2, 3, 4):
            f = GF2m(m)
            x_powers = [1]
            while len(x_powers) < f.q - 1:
                x_powers.append(shift_xor_mul(m, f.poly, x_powers[-1], 2))
            log = {v: i for i, v in enumerate(x_powers)}
            if len(log) == f.q - 1:  # x generates the group for these polys
                for a in f.nonzero_elements():
                    for b in f.nonzero_elements():
                        expected = x_powers[(log[a] + log[b]) % (f.q - 1)]
                        assert f.mul(a, b) == expected

    def test_table_path_equals_carryless_path(self):
        for m in (1, 2, 3, 4):
            f = GF2m(m)
            for a in f.elements():
                for b in f.elements():
                    assert f.mul(a, b) == f.mul_nolut(a, b)

    def test_table_path_equals_carryless_path_sampled_gf256(self):
        import random

        f = GF2m(8)
        rng = random.Random(99)
        for _ in range(2000):
            a, b = rng.randrange(256), rng.randrange(256)
            assert f.mul(a, b) == f.mul_nolut(a, b)

    def test_associative_and_distributive_exhaustive_small(self):
        for m in (2, 4):
            f = GF2m(m)
            elems = list(f.elements())
            for a in elems:
                for b in elems:
                    for c in elems:
                        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))

    def test_add_associative_exhaustive_gf16(self):
        f = GF2m(4)
        for a in f.elements():
            for b in f.elements():
                for c in f.elements():
                    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))


class TestInv:
    def test_known_inverses_gf16(self):
        f = GF2m(4)
        assert f.inv(2) == 9
        assert f.inv(5) == 11
        assert f.inv(1) == 1

    def test_exhaustive_search_oracle_gf16(self):
        f = GF2m(4)
        for a in f.nonzero_elements():
            candidates = [b for b in f.nonzero_elements() if f.mul(a, b) == 1]
            assert candidates == [f.inv(a)]

    def test_inverse_contract_up_to_gf256(self):
        for m in (2, 3, 4, 8):
            f = GF2m(m)
            for a in f.nonzero_elements():
                assert f.mul(a, f.inv(a)) == 1

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            GF2m(4).inv(0)


class TestVectorized:
    def test_mul_array_matches_scalar(self):
        import numpy as np

        for m in (2, 4, 8):
            f = GF2m(m)
            a = np.arange(f.q, dtype=np.uint8)
            b = np.roll(a, 3)
            out = f.mul_array(a, b)
            assert out.dtype == np.uint8
            for i in range(f.q):
                assert int(out[i]) == f.mul(int(a[i]), int(b[i]))

    def test_tables_refused_above_gf256(self):
        f = GF2m(9)
        with pytest.raises(ValueError, match="m <= 8"):
            _ = f.np_exp
        # carry-less arithmetic still works
        assert f.mul(3, f.inv(3)) == 1


@given(st.integers(min_value=0, max_value=15), st.integers(min_value=0, max_value=15))
def test_mul_commutes_gf16(a, b):
    f = GF2m(4)
    assert f.mul(a, b) == f.mul(b, a)


@given(st.integers(min_value=2, max_value=8), st.data())
def test_field_axioms_sampled(m, data):
    f = GF2m(m)
    a = data.draw(st.integers(min_value=0, max_value=f.q - 1))
    b = data.draw(st.integers(min_value=0, max_value=f.q - 1))
    c = data.draw(st.integers(min_value=0, max_value=f.q - 1))
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
