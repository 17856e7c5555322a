"""2x2 matrices over a kernel ring.

Entry products never commute, so scalar multiplication comes in a left and a
right flavor and the trace is an ordinary ring element, never auto-centralized.
Identity evaluators must place every trace factor exactly where the identity
writes it.
"""

from __future__ import annotations

from fractions import Fraction

from .kernel import RingDescriptor, RingElement, RingMismatchError
from .scalars import Rational


class Mat2:
    """2x2 matrix with entries in one ring descriptor."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: RingDescriptor, rows) -> None:
        self.ring = ring
        self.rows = (
            (rows[0][0], rows[0][1]),
            (rows[1][0], rows[1][1]),
        )
        for row in self.rows:
            for e in row:
                if e.ring.spec != ring.spec:
                    raise RingMismatchError(
                        f"entry over {e.ring.spec} in a matrix over {ring.spec}"
                    )

    @classmethod
    def identity(cls, ring: RingDescriptor) -> "Mat2":
        one = ring.unit()
        z = ring.zero()
        return cls(ring, ((one, z), (z, one)))

    @classmethod
    def zero(cls, ring: RingDescriptor) -> "Mat2":
        z = ring.zero()
        return cls(ring, ((z, z), (z, z)))

    def _check(self, other: "Mat2") -> None:
        if self.ring.spec != other.ring.spec:
            raise RingMismatchError(
                f"matrices over {self.ring.spec} and {other.ring.spec}"
            )

    def __add__(self, other: "Mat2") -> "Mat2":
        self._check(other)
        a, b = self.rows, other.rows
        return Mat2(
            self.ring,
            (
                (a[0][0] + b[0][0], a[0][1] + b[0][1]),
                (a[1][0] + b[1][0], a[1][1] + b[1][1]),
            ),
        )

    def __neg__(self) -> "Mat2":
        a = self.rows
        return Mat2(self.ring, ((-a[0][0], -a[0][1]), (-a[1][0], -a[1][1])))

    def __sub__(self, other: "Mat2") -> "Mat2":
        return self + (-other)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        self._check(other)
        a, b = self.rows, other.rows
        return Mat2(
            self.ring,
            (
                (
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ),
                (
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ),
            ),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat2):
            return NotImplemented
        self._check(other)
        return self.rows == other.rows

    __hash__ = None

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def trace(self) -> RingElement:
        """m11 + m22; an ordinary, generally non-central ring element."""
        return self.rows[0][0] + self.rows[1][1]

    def scale(self, q: Rational | int) -> "Mat2":
        """Entrywise multiplication by an exact rational (central) scalar."""
        q = Fraction(q)
        a = self.rows
        return Mat2(
            self.ring,
            (
                (a[0][0].scale(q), a[0][1].scale(q)),
                (a[1][0].scale(q), a[1][1].scale(q)),
            ),
        )

    def render(self) -> str:
        a = self.rows
        return (
            f"[[{a[0][0].render()}, {a[0][1].render()}], "
            f"[{a[1][0].render()}, {a[1][1].render()}]]"
        )

    def __repr__(self) -> str:
        return f"<Mat2 over {self.ring.spec}: {self.render()}>"


def mat_mul(m: Mat2, n: Mat2) -> Mat2:
    """Standard 2x2 product; entry products keep their written order."""
    return m @ n


def trace(m: Mat2) -> RingElement:
    return m.trace()


def scalar_left(r: RingElement, m: Mat2) -> Mat2:
    """Entrywise r * m_ij."""
    if r.ring.spec != m.ring.spec:
        raise RingMismatchError(
            f"scalar over {r.ring.spec} against a matrix over {m.ring.spec}"
        )
    a = m.rows
    return Mat2(
        m.ring,
        ((r * a[0][0], r * a[0][1]), (r * a[1][0], r * a[1][1])),
    )


def scalar_right(m: Mat2, r: RingElement) -> Mat2:
    """Entrywise m_ij * r; differs from scalar_left whenever r is not central."""
    if r.ring.spec != m.ring.spec:
        raise RingMismatchError(
            f"scalar over {r.ring.spec} against a matrix over {m.ring.spec}"
        )
    a = m.rows
    return Mat2(
        m.ring,
        ((a[0][0] * r, a[0][1] * r), (a[1][0] * r, a[1][1] * r)),
    )


def mat_pow(m: Mat2, k: int) -> Mat2:
    """Left-associated repeated product; k = 0 gives the identity matrix."""
    if k < 0:
        raise ValueError("exponent must be non-negative")
    acc = Mat2.identity(m.ring)
    for _ in range(k):
        acc = acc @ m
    return acc
