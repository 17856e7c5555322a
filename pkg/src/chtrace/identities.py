"""Evaluators for every checked identity, bracket, and recursion.

Each evaluator returns a residual (a Mat2 or a RingElement) that the verifier
tests for exact zero.  Trace factors are ring elements inserted at exactly the
written position, so left, right, and interleaved placements stay distinct.

The two degree-4 trace identities (``thm37`` and ``domokos``) are transcribed
as explicit term tables: a rational coefficient plus an ordered factor list.
``thm37`` is transcribed independently of ``cor36`` on purpose; their generic
equality over a full matrix ring is the transcription check, and any mismatch
surfaces as a term-level diff rather than a silent fix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .kernel import RingDescriptor, RingElement, commutator
from .matrices import Mat2, scalar_right
from .scalars import R_HALF, Rational, render_monomial, render_rational

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)
EIGHTH = Fraction(1, 8)


class TraceConditionError(ValueError):
    """A required exact trace hypothesis does not hold for the input."""


# ---------------------------------------------------------------------------
# Brackets


def lie_nilpotent_bracket(m: int, xs: Sequence[RingElement]) -> RingElement:
    """Left-normed iterated commutator [[..[[x1,x2],x3]..], x_{m+1}]."""
    if m < 1:
        raise ValueError("bracket index m must be >= 1")
    if len(xs) != m + 1:
        raise ValueError(f"need {m + 1} arguments for index {m}, got {len(xs)}")
    acc = commutator(xs[0], xs[1])
    for x in xs[2:]:
        acc = commutator(acc, x)
    return acc


def lie_solvable_bracket(k: int, xs: Sequence[RingElement]) -> RingElement:
    """Balanced binary bracket on 2^k arguments; k = 1 is the plain commutator."""
    if k < 1:
        raise ValueError("bracket index k must be >= 1")
    if len(xs) != 1 << k:
        raise ValueError(f"need {1 << k} arguments for index {k}, got {len(xs)}")
    if k == 1:
        return commutator(xs[0], xs[1])
    half = len(xs) // 2
    return commutator(
        lie_solvable_bracket(k - 1, xs[:half]),
        lie_solvable_bracket(k - 1, xs[half:]),
    )


def comm_product(x, y, u, v) -> RingElement:
    """[x, y] [u, v] -- the product of two commutators."""
    return commutator(x, y) * commutator(u, v)


def double_comm_z(x, y, z) -> RingElement:
    """[[x, y], z]."""
    return commutator(commutator(x, y), z)


def lie_solv2(x, y, u, v) -> RingElement:
    """[[x, y], [u, v]] -- commutators commuting with commutators."""
    return commutator(commutator(x, y), commutator(u, v))


def lie_solv2_tied(x, y, z) -> RingElement:
    """[[x, y], [x, z]] -- the tied-first-argument weakening of lie_solv2."""
    return commutator(commutator(x, y), commutator(x, z))


# ---------------------------------------------------------------------------
# Term-table machinery

Factor = object  # Mat2 | RingElement


def product_of_factors(ring: RingDescriptor, factors: Sequence[Factor]) -> Mat2:
    """Multiply matrix and scalar factors left to right.

    A RingElement factor r acts as the matrix r*I at its written position,
    which is what keeps trace placement order-exact.
    """
    acc = Mat2.identity(ring)
    for f in factors:
        if isinstance(f, Mat2):
            acc = acc @ f
        else:
            acc = scalar_right(acc, f)
    return acc


def sum_of_terms(ring: RingDescriptor, terms) -> Mat2:
    acc = Mat2.zero(ring)
    for coeff, factors in terms:
        term = product_of_factors(ring, factors)
        if coeff != 1:
            term = term.scale(coeff)
        acc = acc + term
    return acc


# ---------------------------------------------------------------------------
# Quadratic identities


def _comm_entries(m: Mat2):
    (a11, a12), (a21, a22) = m.rows
    return a11, a12, a21, a22


def prop31_display(a: Mat2) -> Mat2:
    """Commutator matrix equal to A^2 - tr(A)A + (tr^2(A) - tr(A^2))/2 * I."""
    a11, a12, a21, a22 = _comm_entries(a)
    diag = (commutator(a11, a22) + commutator(a12, a21)).scale(HALF)
    return Mat2(
        a.ring,
        (
            (diag, commutator(a12, a22)),
            (commutator(a21, a11), -diag),
        ),
    )


def prop31_residual(a: Mat2) -> Mat2:
    """Exact 2x2 trace identity; the residual is zero over every ring."""
    ring = a.ring
    t = a.trace()
    a2 = a @ a
    t2 = a2.trace()
    lhs = sum_of_terms(
        ring,
        (
            (1, [a2]),
            (-1, [t, a]),
            (HALF, [t, t]),
            (-HALF, [t2]),
        ),
    )
    return lhs - prop31_display(a)


def _require_traceless(m: Mat2, who: str) -> None:
    if not m.trace().is_zero():
        raise TraceConditionError(f"{who} requires an exactly traceless input")


def cor32_display(b: Mat2) -> Mat2:
    b11, b12, b21, _ = _comm_entries(b)
    diag = commutator(b12, b21).scale(HALF)
    return Mat2(
        b.ring,
        (
            (diag, -commutator(b12, b11)),
            (commutator(b21, b11), -diag),
        ),
    )


def cor32_residual(b: Mat2) -> Mat2:
    """Traceless specialization of the exact identity: B^2 - tr(B^2)/2 * I."""
    _require_traceless(b, "cor32")
    ring = b.ring
    b2 = b @ b
    lhs = sum_of_terms(ring, ((1, [b2]), (-HALF, [b2.trace()])))
    return lhs - cor32_display(b)


# ---------------------------------------------------------------------------
# Degree-4 identities for traceless matrices


def _half_square_step(c: Mat2) -> Mat2:
    """C |-> C^2 - tr(C^2)/2 * I, the step the whole degree-4 family iterates."""
    c2 = c @ c
    return sum_of_terms(c.ring, ((1, [c2]), (-HALF, [c2.trace()])))


def thm33_residual(c: Mat2) -> Mat2:
    """Apply the half-square step twice; zero over rings where commutators
    sharing a first argument commute ([[x,y],[x,z]] = 0)."""
    _require_traceless(c, "thm33")
    return _half_square_step(_half_square_step(c))


def thm33_display(c: Mat2) -> Mat2:
    """Double-commutator matrix the two half-square steps expand to,
    unconditionally, over every ring."""
    _require_traceless(c, "thm33")
    c11, c12, c21, _ = _comm_entries(c)
    f = commutator(c12, c11)
    g = commutator(c21, c11)
    e = commutator(c12, c21)
    return Mat2(
        c.ring,
        (
            (-commutator(f, g), commutator(f, e)),
            (commutator(g, e), commutator(f, g)),
        ),
    ).scale(HALF)


def cor34_residual(c: Mat2) -> Mat2:
    """Expanded form: C^4 - tr(C^2)/2 C^2 - C^2 tr(C^2)/2
    + (tr^2(C^2) - tr(C^4))/2 * I."""
    _require_traceless(c, "cor34")
    ring = c.ring
    c2 = c @ c
    c4 = c2 @ c2
    t2 = c2.trace()
    t4 = c4.trace()
    return sum_of_terms(
        ring,
        (
            (1, [c4]),
            (-HALF, [t2, c2]),
            (-HALF, [c2, t2]),
            (HALF, [t2, t2]),
            (-HALF, [t4]),
        ),
    )


def cor35_check(c: Mat2) -> Mat2:
    """Return C^4 after verifying tr(C) = tr(C^2) = tr(C^4) = 0 exactly.

    Hypothesis violations raise: a vacuous pass here would mask bugs in the
    input family.
    """
    if not c.trace().is_zero():
        raise TraceConditionError("cor35 requires tr(C) = 0")
    c2 = c @ c
    if not c2.trace().is_zero():
        raise TraceConditionError("cor35 requires tr(C^2) = 0")
    c4 = c2 @ c2
    if not c4.trace().is_zero():
        raise TraceConditionError("cor35 requires tr(C^4) = 0")
    return c4


def center_matrix(a: Mat2) -> Mat2:
    """A - tr(A)/2 * I, the traceless part of A."""
    t = a.trace()
    i = Mat2.identity(a.ring)
    return a - scalar_right(i, t).scale(HALF)


def cor36_residual(a: Mat2) -> Mat2:
    """Degree-4 identity for arbitrary A via its traceless part."""
    return cor34_residual(center_matrix(a))


# ---------------------------------------------------------------------------
# The order-sensitive degree-4 trace identity (full display)


def thm37_residual(a: Mat2) -> Mat2:
    """Fully expanded degree-4 trace identity with exact left/right/interleaved
    trace placement; transcribed term by term, independently of cor36."""
    ring = a.ring
    a2 = a @ a
    a3 = a2 @ a
    a4 = a3 @ a
    t = a.trace()
    t2 = a2.trace()
    t3 = a3.trace()
    t4 = a4.trace()
    # Nested trace scalars, evaluated inside-out at their written positions.
    w = product_of_factors(ring, [a, t, a]).trace()      # tr(A tr(A) A)
    u1 = product_of_factors(ring, [a2, t, a]).trace()    # tr(A^2 tr(A) A)
    u2 = product_of_factors(ring, [a, t, a2]).trace()    # tr(A tr(A) A^2)
    u3 = product_of_factors(ring, [a, t, t, a]).trace()  # tr(A tr^2(A) A)
    terms = (
        (1, [a4]),
        (-HALF, [a2, t, a]),
        (-HALF, [a, t, a2]),
        (-HALF, [a3, t]),
        (-HALF, [t, a3]),
        (HALF, [a2, t, t]),
        (HALF, [t, t, a2]),
        (-HALF, [a2, t2]),
        (-HALF, [t2, a2]),
        (QUARTER, [a, t, a, t]),
        (QUARTER, [t, a, t, a]),
        (QUARTER, [t, a2, t]),
        (QUARTER, [a, t, t, a]),
        (-QUARTER, [t, a, t, t]),
        (-QUARTER, [t, t, a, t]),
        (QUARTER, [t, a, t2]),
        (QUARTER, [t2, a, t]),
        (-QUARTER, [a, t, t, t]),
        (-QUARTER, [t, t, t, a]),
        (QUARTER, [a, t, t2]),
        (QUARTER, [t2, t, a]),
        (-HALF, [t, t, t2]),
        (-HALF, [t2, t, t]),
        (HALF, [t2, t2]),
        (QUARTER, [u1]),
        (QUARTER, [u2]),
        (QUARTER, [t3, t]),
        (QUARTER, [t, t3]),
        (-EIGHTH, [t, w]),
        (-EIGHTH, [w, t]),
        (-EIGHTH, [u3]),
        (-EIGHTH, [t, t2, t]),
        (HALF, [t, t, t, t]),
        (-HALF, [t4]),
    )
    return sum_of_terms(ring, terms)


def domokos_residual(a: Mat2) -> Mat2:
    """Degree-4 trace identity with left-placed coefficients; vanishes over
    rings where every double commutator [[x,y],z] is zero."""
    ring = a.ring
    a2 = a @ a
    a3 = a2 @ a
    t = a.trace()
    t2 = a2.trace()
    t3 = a3.trace()
    terms = (
        (1, [a3, a]),
        (-2, [t, a3]),
        (2, [t, t, a2]),
        (-1, [t2, a2]),
        (HALF, [t, t2, a]),
        (HALF, [t2, t, a]),
        (-1, [t, t, t, a]),
        (QUARTER, [t, t, t, t]),
        (QUARTER, [t2, t2]),
        (Fraction(-5, 8), [t, t, t2]),
        (EIGHTH, [t2, t, t]),
        (-HALF, [t3, t]),
        (HALF, [t, t3]),
    )
    return sum_of_terms(ring, terms)


# ---------------------------------------------------------------------------
# The half-square recursion


def ck_sequence(c: Mat2, k: int) -> list:
    """[C_0, .., C_k] with C_0 = C and C_{i+1} = C_i^2 - tr(C_i^2)/2 * I.

    Requires tr(C) = 0 and k <= 3 (the degree doubles at every step); every
    element of the sequence is verified exactly traceless.
    """
    _require_traceless(c, "ck_sequence")
    if not 0 <= k <= 3:
        raise ValueError("recursion depth k must be in 0..3")
    seq = [c]
    for _ in range(k):
        nxt = _half_square_step(seq[-1])
        if not nxt.trace().is_zero():
            raise AssertionError("half-square step produced a nonzero trace")
        seq.append(nxt)
    return seq


# ---------------------------------------------------------------------------
# Term-level diff (for the transcription cross-checks)


def term_diff(m: Mat2, n: Mat2) -> list:
    """Term-level difference of two matrices over one ring.

    Returns one record per mismatching coefficient:
    (entry, basis label, monomial, coefficient in m, coefficient in n).
    Empty list means the matrices are identical.
    """
    m._check(n)
    labels = m.ring.basis_labels
    out = []
    for i in range(2):
        for j in range(2):
            em, en = m.rows[i][j], n.rows[i][j]
            for b in sorted(set(em.coords) | set(en.coords)):
                pm = em.coords.get(b)
                pn = en.coords.get(b)
                tm = pm.terms if pm else {}
                tn = pn.terms if pn else {}
                for mono in sorted(set(tm) | set(tn), key=lambda mm: (len(mm), mm)):
                    cm = tm.get(mono)
                    cn = tn.get(mono)
                    if cm != cn:
                        out.append(
                            {
                                "entry": f"({i + 1},{j + 1})",
                                "basis": labels[b],
                                "monomial": render_monomial(mono),
                                "left": render_rational(cm) if cm is not None else "0",
                                "right": render_rational(cn) if cn is not None else "0",
                            }
                        )
    return out


# ---------------------------------------------------------------------------
# Identity registry

# Input kinds the verifier knows how to instantiate generically:
#   ring_args     n independent generic ring elements
#   matrix        a fully generic 2x2 matrix
#   traceless     a generic traceless 2x2 matrix [[x, y], [z, -x]]
#   odd_matrix    [[c, d], [e, -c]] with generic grade-1 odd entries
#                 (grassmann rings only; the trace hypotheses then hold exactly)
@dataclass(frozen=True)
class IdentityDef:
    name: str
    kind: str
    arg_names: tuple
    degree: int
    evaluate: Callable
    parameterized: bool = False
    describe: str = ""


def _eval_lie_solv_k(k: int):
    def run(*xs):
        return lie_solvable_bracket(k, xs)

    return run


def _eval_lie_nilp_m(m: int):
    def run(*xs):
        return lie_nilpotent_bracket(m, xs)

    return run


def _eval_ck_vanish(k: int):
    def run(c: Mat2) -> Mat2:
        return ck_sequence(c, k)[-1]

    return run


def identity_def(name: str, k: int | None = None, m: int | None = None) -> IdentityDef:
    """Resolve a registry name (instantiating parameterized families)."""
    if name == "lie_solv_k":
        kk = 2 if k is None else k
        if not 1 <= kk <= 3:
            raise ValueError("lie_solv_k index must be in 1..3")
        return IdentityDef(
            name="lie_solv_k",
            kind="ring_args",
            arg_names=tuple(f"x{i + 1}" for i in range(1 << kk)),
            degree=1 << kk,
            evaluate=_eval_lie_solv_k(kk),
            parameterized=True,
            describe=f"balanced bracket on {1 << kk} elements vanishes",
        )
    if name == "lie_nilp_m":
        mm = 2 if m is None else m
        if not 1 <= mm <= 6:
            raise ValueError("lie_nilp_m index must be in 1..6")
        return IdentityDef(
            name="lie_nilp_m",
            kind="ring_args",
            arg_names=tuple(f"x{i + 1}" for i in range(mm + 1)),
            degree=mm + 1,
            evaluate=_eval_lie_nilp_m(mm),
            parameterized=True,
            describe=f"left-normed bracket on {mm + 1} elements vanishes",
        )
    if name == "ck_vanish":
        kk = 2 if k is None else k
        if not 1 <= kk <= 3:
            raise ValueError("ck_vanish depth must be in 1..3")
        return IdentityDef(
            name="ck_vanish",
            kind="traceless",
            arg_names=("x", "y", "z"),
            degree=1 << kk,
            evaluate=_eval_ck_vanish(kk),
            parameterized=True,
            describe=f"half-square recursion reaches zero at depth {kk}",
        )
    try:
        return _FIXED_IDENTITIES[name]
    except KeyError:
        raise KeyError(f"unknown identity name: {name!r}") from None


_FIXED_IDENTITIES = {
    d.name: d
    for d in (
        IdentityDef(
            "comm_product",
            "ring_args",
            ("x", "y", "u", "v"),
            4,
            comm_product,
            describe="[x,y][u,v] vanishes",
        ),
        IdentityDef(
            "double_comm_z",
            "ring_args",
            ("x", "y", "z"),
            3,
            double_comm_z,
            describe="[[x,y],z] vanishes",
        ),
        IdentityDef(
            "lie_solv2",
            "ring_args",
            ("x", "y", "u", "v"),
            4,
            lie_solv2,
            describe="[[x,y],[u,v]] vanishes",
        ),
        IdentityDef(
            "lie_solv2_tied",
            "ring_args",
            ("x", "y", "z"),
            4,
            lie_solv2_tied,
            describe="[[x,y],[x,z]] vanishes",
        ),
        IdentityDef(
            "prop31",
            "matrix",
            ("a11", "a12", "a21", "a22"),
            2,
            prop31_residual,
            describe="exact quadratic trace identity (unconditional)",
        ),
        IdentityDef(
            "cor32",
            "traceless",
            ("x", "y", "z"),
            2,
            cor32_residual,
            describe="traceless quadratic trace identity (unconditional)",
        ),
        IdentityDef(
            "thm33",
            "traceless",
            ("x", "y", "z"),
            4,
            thm33_residual,
            describe="double half-square step vanishes",
        ),
        IdentityDef(
            "cor34",
            "traceless",
            ("x", "y", "z"),
            4,
            cor34_residual,
            describe="expanded degree-4 identity for traceless matrices",
        ),
        IdentityDef(
            "cor35",
            "odd_matrix",
            ("c", "d", "e"),
            4,
            cor35_check,
            describe="C^4 vanishes under three exact trace hypotheses",
        ),
        IdentityDef(
            "cor36",
            "matrix",
            ("a11", "a12", "a21", "a22"),
            4,
            cor36_residual,
            describe="degree-4 identity via the traceless part",
        ),
        IdentityDef(
            "thm37",
            "matrix",
            ("a11", "a12", "a21", "a22"),
            4,
            thm37_residual,
            describe="order-sensitive degree-4 trace identity (full display)",
        ),
        IdentityDef(
            "domokos",
            "matrix",
            ("a11", "a12", "a21", "a22"),
            4,
            domokos_residual,
            describe="left-coefficient degree-4 trace identity",
        ),
    )
}

IDENTITY_NAMES = tuple(
    list(_FIXED_IDENTITIES) + ["lie_solv_k", "lie_nilp_m", "ck_vanish"]
)

# Pairs of independent evaluators that must agree over every ring.
BRIDGE_NAMES = (
    "thm33_display_bridge",   # thm33_residual == thm33_display
    "cor34_thm33_bridge",     # cor34_residual == thm33_residual
    "thm37_cor36_bridge",     # thm37_residual == cor36_residual
)


def bridge_pair(name: str):
    """The two evaluators and input kind behind a bridge check."""
    if name == "thm33_display_bridge":
        return thm33_residual, thm33_display, "traceless"
    if name == "cor34_thm33_bridge":
        return cor34_residual, thm33_residual, "traceless"
    if name == "thm37_cor36_bridge":
        return thm37_residual, cor36_residual, "matrix"
    raise KeyError(f"unknown bridge name: {name!r}")
