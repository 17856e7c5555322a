"""Exact scalar substrate: arbitrary-precision rationals, a fresh-variable
allocator, and sparse multivariate commutative polynomials.

Polynomials carry the indeterminate coefficients of generic ring elements, so
every identity check downstream reduces to asking whether a handful of these
polynomials are exactly zero.  All arithmetic is exact; nothing here ever
rounds.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Iterable, Mapping

# Arbitrary-precision rational scalar.  Fraction already guarantees the
# invariants we need: always reduced, denominator >= 1, zero is 0/1.
Rational = Fraction

R_ZERO = Fraction(0)
R_ONE = Fraction(1)
R_HALF = Fraction(1, 2)


def rat(numerator: int, denominator: int = 1) -> Rational:
    """Build an exact rational scalar."""
    return Fraction(numerator, denominator)


class VarAllocator:
    """Monotone allocator of variable ids.

    Ids are never reused within one verification run; the counter is the only
    mutable state in the scalar layer and is lock-serialized.
    """

    __slots__ = ("_next", "_lock")

    def __init__(self) -> None:
        self._next = 0
        self._lock = threading.Lock()

    def fresh_vars(self, n: int) -> list[int]:
        """Allocate ``n`` consecutive, previously unallocated variable ids."""
        if n < 0:
            raise ValueError("variable count must be non-negative")
        with self._lock:
            start = self._next
            self._next += n
        return list(range(start, start + n))

    def fresh(self) -> int:
        return self.fresh_vars(1)[0]


# A monomial is a sorted tuple of variable ids; repetition encodes the
# exponent, so t0^2*t3 is (0, 0, 3) and the empty tuple is 1.  Sorted-tuple
# merging keeps products canonical without a separate normal-form pass.
Monomial = tuple

MONO_ONE: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b))


def mono_degree(m: Monomial) -> int:
    return len(m)


def mono_exponents(m: Monomial) -> dict[int, int]:
    """Exponent map of a monomial: keys strictly increasing, no zero exponents."""
    exps: dict[int, int] = {}
    for v in m:
        exps[v] = exps.get(v, 0) + 1
    return exps


def render_rational(q: Rational) -> str:
    return str(q)


def render_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for v, e in mono_exponents(m).items():
        parts.append(f"t{v}" if e == 1 else f"t{v}^{e}")
    return "*".join(parts)


def _mul_term_dicts(a: dict, b: dict) -> dict:
    """Multiply two term dicts {monomial: coeff}; zero terms are elided."""
    out: dict = {}
    get = out.get
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            if m1:
                m = tuple(sorted(m1 + m2)) if m2 else m1
            else:
                m = m2
            c = c1 * c2
            prev = get(m)
            if prev is None:
                out[m] = c
            else:
                s = prev + c
                if s:
                    out[m] = s
                else:
                    del out[m]
    return out


class Polynomial:
    """Sparse multivariate commutative polynomial over Rational.

    ``terms`` maps monomials to nonzero coefficients; equality is term-set
    equality, which makes it a normal form: two polynomials are equal as
    functions iff their term dicts coincide.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Rational] | None = None) -> None:
        if terms:
            self.terms = {m: Fraction(c) for m, c in terms.items() if c}
        else:
            self.terms = {}

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        # Internal fast path: caller guarantees canonical form.
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    @classmethod
    def const(cls, q: Rational | int) -> "Polynomial":
        q = Fraction(q)
        return cls._raw({MONO_ONE: q} if q else {})

    @classmethod
    def variable(cls, var_id: int) -> "Polynomial":
        return cls._raw({(var_id,): R_ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Polynomial.const(other).terms
        return NotImplemented

    __hash__ = None  # mutable-dict backed; not usable as a dict key

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        get = out.get
        for m, c in other.terms.items():
            prev = get(m)
            if prev is None:
                out[m] = c
            else:
                s = prev + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial._raw(_mul_term_dicts(self.terms, other.terms))
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return Polynomial.zero()
            return Polynomial._raw({m: c * q for m, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1 by convention."""
        if not self.terms:
            return -1
        return max(len(m) for m in self.terms)

    def variables(self) -> set:
        vs: set = set()
        for m in self.terms:
            vs.update(m)
        return vs

    def substitute(self, var_id: int, value: Rational | int) -> "Polynomial":
        """Evaluate one variable at an exact rational value."""
        value = Fraction(value)
        out: dict = {}
        get = out.get
        for m, c in self.terms.items():
            k = 0
            rest = []
            for v in m:
                if v == var_id:
                    k += 1
                else:
                    rest.append(v)
            if k:
                c = c * value ** k
                if not c:
                    continue
                m = tuple(rest)
            prev = get(m)
            if prev is None:
                out[m] = c
            else:
                s = prev + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(out)

    def evaluate(self, assignment: Mapping[int, Rational]) -> Rational:
        """Evaluate at a full assignment; unassigned variables default to 0."""
        total = R_ZERO
        for m, c in self.terms.items():
            val = c
            for v in m:
                val *= Fraction(assignment.get(v, 0))
                if not val:
                    break
            total += val
        return total

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda mm: (len(mm), mm)):
            c = self.terms[m]
            if not m:
                parts.append(render_rational(c))
            elif c == 1:
                parts.append(render_monomial(m))
            elif c == -1:
                parts.append("-" + render_monomial(m))
            else:
                parts.append(f"{render_rational(c)}*{render_monomial(m)}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Polynomial({self.render()})"


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    """Termwise sum with zero terms elided."""
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Distributive product in normal form."""
    return p * q


def poly_sum(ps: Iterable[Polynomial]) -> Polynomial:
    total = Polynomial.zero()
    for p in ps:
        total = total + p
    return total
