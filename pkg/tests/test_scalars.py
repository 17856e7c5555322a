"""Scalar layer: rationals, fresh variables, sparse polynomial arithmetic."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from chtrace.scalars import (
    Polynomial,
    VarAllocator,
    mono_exponents,
    mono_mul,
    poly_add,
    poly_mul,
    rat,
    render_monomial,
    render_rational,
)


def var(i):
    return Polynomial.variable(i)


def const(q):
    return Polynomial.const(q)


class TestRational:
    def test_reduced_form(self):
        q = rat(6, 4)
        assert q.numerator == 3 and q.denominator == 2

    def test_zero_is_canonical(self):
        assert rat(0, 7) == rat(0) and rat(0).denominator == 1

    def test_negative_denominator_normalizes(self):
        q = rat(1, -2)
        assert q.numerator == -1 and q.denominator == 2

    def test_big_integers_stay_exact(self):
        q = rat(2**100, 3) * rat(3, 2**100)
        assert q == 1


class TestFreshVars:
    def test_zero_count(self):
        assert VarAllocator().fresh_vars(0) == []

    def test_monotone_counter(self):
        alloc = VarAllocator()
        assert alloc.fresh_vars(3) == [0, 1, 2]
        assert alloc.fresh_vars(2) == [3, 4]

    def test_sixteen_distinct(self):
        ids = VarAllocator().fresh_vars(16)
        assert len(set(ids)) == 16

    def test_negative_rejected(self):
        import pytest

        with pytest.raises(ValueError):
            VarAllocator().fresh_vars(-1)


class TestPolyOps:
    def test_additive_inverse(self):
        p = var(0)
        assert poly_add(p, -p).is_zero()

    def test_halves_sum_to_one(self):
        assert poly_add(const(rat(1, 2)), const(rat(1, 2))) == const(1)

    def test_like_term_collection(self):
        t0, t1 = var(0), var(1)
        left = poly_add(poly_mul(t0, t1) + t0, poly_mul(t0, t1))
        expected = poly_mul(t0, t1) * 2 + t0
        assert left == expected

    def test_difference_of_squares(self):
        t0, t1 = var(0), var(1)
        assert poly_mul(t0 + t1, t0 - t1) == poly_mul(t0, t0) - poly_mul(t1, t1)

    def test_mul_by_zero(self):
        p = var(0) + const(3)
        assert poly_mul(p, Polynomial.zero()).is_zero()

    def test_scalar_factors_cancel(self):
        left = poly_mul(var(0) * rat(1, 2), var(1) * 2)
        assert left == poly_mul(var(0), var(1))

    def test_normal_form_uniqueness(self):
        # Same polynomial assembled two ways has identical term dicts.
        t0, t1 = var(0), var(1)
        a = poly_mul(t0 + t1, t0 + t1)
        b = poly_mul(t0, t0) + poly_mul(t0, t1) * 2 + poly_mul(t1, t1)
        assert a.terms == b.terms

    def test_substitute_and_evaluate(self):
        p = poly_mul(var(0), var(0)) + var(1) * 3
        assert p.substitute(0, 2) == const(4) + var(1) * 3
        assert p.evaluate({0: 2, 1: 1}) == 7
        assert p.evaluate({0: 2}) == 4  # unassigned variables default to 0

    def test_deep_coefficient_exactness(self):
        # Degree-4 products with huge coefficients must not lose precision.
        p = var(0) * rat(2**80 + 1, 3)
        q = p * p * p * p
        ((mono, coeff),) = q.terms.items()
        assert mono == (0, 0, 0, 0)
        assert coeff == Fraction(2**80 + 1, 3) ** 4

    def test_multinomial_coefficient(self):
        s = var(0) + var(1) + var(2) + var(3)
        p = poly_mul(poly_mul(s, s), poly_mul(s, s))
        assert p.terms[(0, 1, 2, 3)] == 24
        assert p.terms[(0, 0, 0, 0)] == 1


# Small random polynomials for the ring-axiom properties.
coeffs = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)
monomials = st.lists(st.integers(min_value=0, max_value=4), max_size=3).map(
    lambda vs: tuple(sorted(vs))
)
polys = st.dictionaries(monomials, coeffs, max_size=4).map(Polynomial)


class TestRingAxioms:
    @settings(max_examples=60, deadline=None)
    @given(polys, polys, polys)
    def test_add_mul_associative(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert poly_mul(poly_mul(p, q), r) == poly_mul(p, poly_mul(q, r))

    @settings(max_examples=60, deadline=None)
    @given(polys, polys)
    def test_commutative(self, p, q):
        assert p + q == q + p
        assert poly_mul(p, q) == poly_mul(q, p)

    @settings(max_examples=60, deadline=None)
    @given(polys, polys, polys)
    def test_distributive(self, p, q, r):
        assert poly_mul(p, q + r) == poly_mul(p, q) + poly_mul(p, r)

    @settings(max_examples=40, deadline=None)
    @given(polys)
    def test_units_and_inverse(self, p):
        assert p + Polynomial.zero() == p
        assert poly_mul(p, const(1)) == p
        assert (p - p).is_zero()


class TestRendering:
    def test_monomial_format(self):
        m = mono_mul((3, 3), (7,))
        assert render_monomial(m) == "t3^2*t7"
        assert render_monomial(()) == "1"

    def test_exponent_view(self):
        assert mono_exponents((0, 0, 3)) == {0: 2, 3: 1}

    def test_rational_format(self):
        assert render_rational(rat(-1, 2)) == "-1/2"
        assert render_rational(rat(4, 2)) == "2"

    def test_polynomial_render(self):
        p = var(0) * rat(1, 2) + const(1)
        assert p.render() == "1 + 1/2*t0"
        assert Polynomial.zero().render() == "0"
        assert (-var(3)).render() == "-t3"
