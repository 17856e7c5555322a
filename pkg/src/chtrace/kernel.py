"""Finite-dimensional associative unital rings presented by structure constants.

Every ring is a ``RingDescriptor``: a basis, a unit vector, and a sparse
multiplication table b_i * b_j = sum_k c_ijk b_k with exact rational structure
constants.  Elements carry Polynomial coordinates so one element with fresh
variables in every slot stands for "an arbitrary element of the ring".

Constructors cover the rational base ring, Grassmann algebras on r
anticommuting generators, equal-diagonal 3x3 upper-triangular rings over an
inner ring, and full n x n matrix rings (the negative control).
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .scalars import Polynomial, R_ONE, Rational, VarAllocator, render_rational

MAX_DIM = 64

# Slot order for the equal-diagonal upper-triangular construction:
# diagonal, (1,2), (1,3), (2,3).
U3_SLOTS = ("I", "E12", "E13", "E23")
U3_I, U3_E12, U3_E13, U3_E23 = 0, 1, 2, 3


class RingMismatchError(ValueError):
    """Two elements from different ring descriptors were combined."""


class DimensionBoundError(ValueError):
    """A constructor argument exceeds the desk-scale dimension bounds."""


class BudgetExceededError(RuntimeError):
    """Estimated coefficient-term work exceeded the configured budget."""


# Active term budget, if any: a [used, limit] pair local to the current task.
_BUDGET: ContextVar = ContextVar("chtrace_term_budget", default=None)


@contextmanager
def term_budget(limit: int) -> Iterator[None]:
    """Abort any enclosed ring arithmetic once ~limit term products were spent."""
    token = _BUDGET.set([0, limit])
    try:
        yield
    finally:
        _BUDGET.reset(token)


Table = dict  # (i, j) -> tuple[(k, Rational), ...], zero products omitted


@dataclass(frozen=True)
class RingDescriptor:
    """A finite-dimensional associative unital ring with a fixed basis.

    Descriptor identity is the construction expression ``spec``: two
    descriptors describe the same ring exactly when their specs coincide,
    which is what element arithmetic checks before combining operands.
    """

    spec: str
    kind: str  # "rat" | "grassmann" | "u3star" | "full"
    dim: int
    basis_labels: tuple
    unit_coords: dict
    table: Table
    grassmann_r: int = 0
    full_n: int = 0
    inner: "RingDescriptor | None" = None

    def __repr__(self) -> str:
        return f"RingDescriptor({self.spec}, dim={self.dim})"

    def same_ring(self, other: "RingDescriptor") -> bool:
        return self.spec == other.spec

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def unit(self) -> "RingElement":
        coords = {i: Polynomial.const(c) for i, c in self.unit_coords.items()}
        return RingElement(self, coords)

    def basis_element(self, i: int) -> "RingElement":
        if not 0 <= i < self.dim:
            raise IndexError(f"basis index {i} out of range for dim {self.dim}")
        return RingElement(self, {i: Polynomial.const(1)})

    def element(self, coords: Mapping[int, Polynomial]) -> "RingElement":
        clean = {}
        for i in sorted(coords):
            p = coords[i]
            if not 0 <= i < self.dim:
                raise IndexError(f"basis index {i} out of range for dim {self.dim}")
            if p:
                clean[i] = p
        return RingElement(self, clean)

    def from_rational(self, q: Rational | int) -> "RingElement":
        return self.unit().scale(Fraction(q))

    def generic_element(self, alloc: VarAllocator) -> "RingElement":
        """One fresh variable per basis monomial: sum_i t_i * b_i."""
        ids = alloc.fresh_vars(self.dim)
        return RingElement(
            self, {i: Polynomial.variable(v) for i, v in enumerate(ids)}
        )


class RingElement:
    """Sparse element of a descriptor ring: basis index -> Polynomial coordinate."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: RingDescriptor, coords: dict) -> None:
        self.ring = ring
        self.coords = coords

    def _check(self, other: "RingElement") -> None:
        if self.ring.spec != other.ring.spec:
            raise RingMismatchError(
                f"elements of {self.ring.spec} and {other.ring.spec} cannot be combined"
            )

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        out = dict(self.coords)
        for i, p in other.coords.items():
            q = out.get(i)
            if q is None:
                out[i] = p
            else:
                s = q + p
                if s:
                    out[i] = s
                else:
                    del out[i]
        return RingElement(self.ring, out)

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, {i: -p for i, p in self.coords.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        table = self.ring.table
        budget = _BUDGET.get()
        acc: dict = {}
        for i, p in self.coords.items():
            pt = p.terms
            np = len(pt)
            for j, q in other.coords.items():
                ent = table.get((i, j))
                if not ent:
                    continue
                qt = q.terms
                if budget is not None:
                    budget[0] += np * len(qt)
                    if budget[0] > budget[1]:
                        raise BudgetExceededError(
                            f"term budget exceeded ({budget[0]} > {budget[1]})"
                        )
                prod = _mul_terms(pt, qt)
                for k, c in ent:
                    tgt = acc.get(k)
                    if tgt is None:
                        tgt = acc[k] = {}
                    get = tgt.get
                    if c == 1:
                        for m, cc in prod.items():
                            prev = get(m)
                            if prev is None:
                                tgt[m] = cc
                            else:
                                s = prev + cc
                                if s:
                                    tgt[m] = s
                                else:
                                    del tgt[m]
                    else:
                        for m, cc in prod.items():
                            cc = cc * c
                            prev = get(m)
                            if prev is None:
                                tgt[m] = cc
                            else:
                                s = prev + cc
                                if s:
                                    tgt[m] = s
                                else:
                                    del tgt[m]
        coords = {
            k: Polynomial._raw(d) for k, d in sorted(acc.items()) if d
        }
        return RingElement(self.ring, coords)

    def scale(self, q: Rational | int) -> "RingElement":
        q = Fraction(q)
        if not q:
            return self.ring.zero()
        return RingElement(self.ring, {i: p * q for i, p in self.coords.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        self._check(other)
        return self.coords == other.coords

    __hash__ = None

    def term_count(self) -> int:
        return sum(len(p.terms) for p in self.coords.values())

    def render(self) -> str:
        if not self.coords:
            return "0"
        parts = []
        for i in sorted(self.coords):
            label = self.ring.basis_labels[i]
            body = self.coords[i].render()
            if label == "1":
                parts.append(f"({body})")
            else:
                parts.append(f"({body})*{label}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<{self.ring.spec}: {self.render()}>"


def _mul_terms(a: dict, b: dict) -> dict:
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


def elem_mul(x: RingElement, y: RingElement) -> RingElement:
    """Bilinear extension of the structure table."""
    return x * y


def commutator(x: RingElement, y: RingElement) -> RingElement:
    """xy - yx."""
    return x * y - y * x


def generic_element(ring: RingDescriptor, alloc: VarAllocator) -> RingElement:
    return ring.generic_element(alloc)


# ---------------------------------------------------------------------------
# Constructors


def make_rat() -> RingDescriptor:
    """The one-dimensional base ring; with Polynomial coordinates it doubles
    as a commutative polynomial ring over the rationals."""
    return RingDescriptor(
        spec="rat",
        kind="rat",
        dim=1,
        basis_labels=("1",),
        unit_coords={0: R_ONE},
        table={(0, 0): ((0, R_ONE),)},
    )


def _grassmann_sign(s_mask: int, t_mask: int, r: int) -> int:
    # (-1)^inv where inv counts pairs (s, t), s in S, t in T, s > t.
    inv = 0
    below = 0  # number of T-generators strictly below the current S-generator
    for g in range(1, r + 1):
        bit = 1 << (g - 1)
        if s_mask & bit:
            inv += below
        if t_mask & bit:
            below += 1
    return -1 if inv & 1 else 1


def make_grassmann(r: int) -> RingDescriptor:
    """Grassmann algebra on r anticommuting generators v1..vr.

    Basis is indexed by subsets of {1..r} (bitmask order); v_S * v_T vanishes
    on overlap and otherwise picks up the sign of sorting S followed by T.
    """
    if not 1 <= r <= 8:
        raise DimensionBoundError(f"grassmann generator count must be in 1..8, got {r}")
    dim = 1 << r
    labels = []
    for mask in range(dim):
        if mask == 0:
            labels.append("1")
        else:
            labels.append("".join(f"v{g}" for g in range(1, r + 1) if mask & (1 << (g - 1))))
    table: Table = {}
    for s in range(dim):
        for t in range(dim):
            if s & t:
                continue
            sign = _grassmann_sign(s, t, r)
            table[(s, t)] = ((s | t, Fraction(sign)),)
    return RingDescriptor(
        spec=f"grassmann:{r}",
        kind="grassmann",
        dim=dim,
        basis_labels=tuple(labels),
        unit_coords={0: R_ONE},
        table=table,
        grassmann_r=r,
    )


def _prime_label(label: str) -> str:
    # One extra prime per nesting level, applied to every tensor factor.
    return "⊗".join(part + "′" for part in label.split("⊗"))


def make_u3star(inner: RingDescriptor) -> RingDescriptor:
    """Equal-diagonal 3x3 upper-triangular ring over ``inner``.

    An element is a tuple (a, b, c, d) standing for a*I + b*E12 + c*E13 + d*E23;
    multiplication follows (a,b,c,d)(a',b',c',d') =
    (aa', ab'+ba', ac'+ca'+bd', ad'+da').
    """
    dim = 4 * inner.dim
    if dim > MAX_DIM:
        raise DimensionBoundError(
            f"u3star over {inner.spec} would have dim {dim} > {MAX_DIM}"
        )
    d = inner.dim
    if inner.kind == "rat":
        labels = list(U3_SLOTS)
    else:
        labels = [
            f"{slot}⊗{_prime_label(inner.basis_labels[i])}"
            for slot in U3_SLOTS
            for i in range(d)
        ]

    # Nonzero slot products: I acts as identity on each side, and E12*E23 = E13.
    slot_products = {
        (U3_I, U3_I): U3_I,
        (U3_I, U3_E12): U3_E12,
        (U3_I, U3_E13): U3_E13,
        (U3_I, U3_E23): U3_E23,
        (U3_E12, U3_I): U3_E12,
        (U3_E13, U3_I): U3_E13,
        (U3_E23, U3_I): U3_E23,
        (U3_E12, U3_E23): U3_E13,
    }
    table: Table = {}
    for (s1, s2), s_out in slot_products.items():
        base = s_out * d
        for i in range(d):
            for j in range(d):
                ent = inner.table.get((i, j))
                if not ent:
                    continue
                table[(s1 * d + i, s2 * d + j)] = tuple(
                    (base + k, c) for k, c in ent
                )
    unit_coords = {U3_I * d + i: c for i, c in inner.unit_coords.items()}
    return RingDescriptor(
        spec=f"u3star({inner.spec})",
        kind="u3star",
        dim=dim,
        basis_labels=tuple(labels),
        unit_coords=unit_coords,
        table=table,
        inner=inner,
    )


def make_full(n: int) -> RingDescriptor:
    """Full n x n matrix ring on the matrix units E_ij (negative control)."""
    if not 2 <= n <= 4:
        raise DimensionBoundError(f"full matrix size must be in 2..4, got {n}")
    dim = n * n
    labels = tuple(f"E{i + 1}{j + 1}" for i in range(n) for j in range(n))
    table: Table = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    if j != k:
                        continue
                    table[(i * n + j, k * n + l)] = ((i * n + l, R_ONE),)
    unit_coords = {i * n + i: R_ONE for i in range(n)}
    return RingDescriptor(
        spec=f"full:{n}",
        kind="full",
        dim=dim,
        basis_labels=labels,
        unit_coords=unit_coords,
        table=table,
        full_n=n,
    )


# ---------------------------------------------------------------------------
# Equal-diagonal upper-triangular helpers


def _require_u3star(ring: RingDescriptor) -> RingDescriptor:
    if ring.kind != "u3star" or ring.inner is None:
        raise ValueError(f"{ring.spec} was not built by make_u3star")
    return ring.inner


def u3star_component(x: RingElement, slot: int) -> RingElement:
    """Inner-ring component of one slot of an equal-diagonal element."""
    inner = _require_u3star(x.ring)
    d = inner.dim
    lo = slot * d
    coords = {i - lo: p for i, p in x.coords.items() if lo <= i < lo + d}
    return RingElement(inner, coords)


def u3star_assemble(ring: RingDescriptor, a, b, c, d) -> RingElement:
    """Element of a u3star ring from its four inner-ring components."""
    inner = _require_u3star(ring)
    dd = inner.dim
    coords: dict = {}
    for slot, comp in ((U3_I, a), (U3_E12, b), (U3_E13, c), (U3_E23, d)):
        for i, p in comp.coords.items():
            coords[slot * dd + i] = p
    return ring.element(coords)


def u3star_slot_element(ring: RingDescriptor, slot: int) -> RingElement:
    """The element (unit of the inner ring) placed in one slot, e.g. E12."""
    inner = _require_u3star(ring)
    return u3star_assemble(
        ring,
        *(inner.unit() if s == slot else inner.zero() for s in range(4)),
    )


def u3star_embed_oracle(x: RingElement):
    """Embed an equal-diagonal element as a literal 3x3 matrix over the inner
    ring: [[a, b, c], [0, a, d], [0, 0, a]].

    The 3x3 matrix product over the inner ring is an independent oracle for
    the tuple multiplication law.
    """
    inner = _require_u3star(x.ring)
    a = u3star_component(x, U3_I)
    b = u3star_component(x, U3_E12)
    c = u3star_component(x, U3_E13)
    d = u3star_component(x, U3_E23)
    z = inner.zero()
    return [[a, b, c], [z, a, d], [z, z, a]]


def mat3_mul(x, y):
    """Plain 3x3 matrix product over a ring; used as the embedding oracle."""
    n = 3
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for k in range(n):
                term = x[i][k] * y[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def u3star_commutator_parts(x: RingElement, y: RingElement):
    """Split [x, y] in a u3star ring into (center, strict, alpha).

    With x = (a, b, c, d) and y = (e, f, g, h):
      center = [a, e]                       (inner ring)
      strict = ([a,f]+[b,e]) E12 + ([a,g]+[c,e]) E13 + ([a,h]+[d,e]) E23
      alpha  = b h - f d                    (inner ring)
    and [x, y] = center * I + strict + alpha * E13.
    """
    x._check(y)
    inner = _require_u3star(x.ring)
    a = u3star_component(x, U3_I)
    b = u3star_component(x, U3_E12)
    c = u3star_component(x, U3_E13)
    d = u3star_component(x, U3_E23)
    e = u3star_component(y, U3_I)
    f = u3star_component(y, U3_E12)
    g = u3star_component(y, U3_E13)
    h = u3star_component(y, U3_E23)
    center = commutator(a, e)
    strict = u3star_assemble(
        x.ring,
        inner.zero(),
        commutator(a, f) + commutator(b, e),
        commutator(a, g) + commutator(c, e),
        commutator(a, h) + commutator(d, e),
    )
    alpha = b * h - f * d
    return center, strict, alpha


# ---------------------------------------------------------------------------
# Exhaustive kernel oracles (used by the selftest command and the test suite)


def check_associativity(ring: RingDescriptor) -> None:
    """(b_i b_j) b_k == b_i (b_j b_k) for all basis triples; raises on failure."""
    basis = [ring.basis_element(i) for i in range(ring.dim)]
    products = {}
    for i in range(ring.dim):
        for j in range(ring.dim):
            products[(i, j)] = basis[i] * basis[j]
    for i in range(ring.dim):
        for j in range(ring.dim):
            left = products[(i, j)]
            for k in range(ring.dim):
                if left * basis[k] != basis[i] * products[(j, k)]:
                    raise AssertionError(
                        f"associativity fails in {ring.spec} at basis triple "
                        f"({i}, {j}, {k})"
                    )


def check_unit_laws(ring: RingDescriptor) -> None:
    """unit * b_i == b_i * unit == b_i for every basis element."""
    one = ring.unit()
    for i in range(ring.dim):
        b = ring.basis_element(i)
        if one * b != b or b * one != b:
            raise AssertionError(f"unit law fails in {ring.spec} at basis index {i}")


def check_grassmann_relation(ring: RingDescriptor) -> None:
    """v_i v_j + v_j v_i == 0 for all generator pairs i <= j."""
    if ring.kind != "grassmann":
        raise ValueError(f"{ring.spec} is not a grassmann ring")
    r = ring.grassmann_r
    for i in range(1, r + 1):
        vi = ring.basis_element(1 << (i - 1))
        for j in range(i, r + 1):
            vj = ring.basis_element(1 << (j - 1))
            if not (vi * vj + vj * vi).is_zero():
                raise AssertionError(
                    f"anticommutation fails in {ring.spec} for generators ({i}, {j})"
                )


def check_u3star_embedding(ring: RingDescriptor) -> None:
    """Tuple multiplication agrees with the 3x3 embedding on all basis pairs."""
    _require_u3star(ring)
    basis = [ring.basis_element(i) for i in range(ring.dim)]
    for i in range(ring.dim):
        ei = u3star_embed_oracle(basis[i])
        for j in range(ring.dim):
            via_table = u3star_embed_oracle(basis[i] * basis[j])
            via_mat3 = mat3_mul(ei, u3star_embed_oracle(basis[j]))
            for r in range(3):
                for s in range(3):
                    if via_table[r][s] != via_mat3[r][s]:
                        raise AssertionError(
                            f"embedding mismatch in {ring.spec} at basis pair "
                            f"({i}, {j}) entry ({r + 1}, {s + 1})"
                        )
