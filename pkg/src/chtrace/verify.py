"""Generic verification, deterministic witness search, and the implication probe.

A generic check substitutes one fresh variable per basis monomial into every
argument slot and asks whether the residual's coordinates are the zero
polynomial.  Because those coordinates are polynomial identities in the
generic variables, a generic pass certifies the identity for all elements of
the ring over any commutative coefficient extension.

When a generic check fails, a concrete witness is extracted deterministically
by sequential substitution: walk the variables of the first nonzero residual
coordinate in ascending order and keep the smallest value in 0..deg that
leaves the polynomial nonzero.  Re-evaluating the identity at the resulting
concrete elements reproduces the reported value exactly.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .identities import (
    IdentityDef,
    TraceConditionError,
    bridge_pair,
    identity_def,
    term_diff,
)
from .kernel import (
    BudgetExceededError,
    RingDescriptor,
    RingElement,
    term_budget,
)
from .matrices import Mat2
from .scalars import Polynomial, Rational, VarAllocator, render_rational

TERM_BUDGET = 10 ** 8


@dataclass(frozen=True)
class Witness:
    """Concrete assignment that makes a residual coordinate nonzero."""

    assignment: dict
    residual_coordinate: str
    value: str


@dataclass
class VerifyReport:
    """Machine-readable outcome of one identity check or witness search."""

    command: str
    identity: str
    algebra: str
    dim: int
    generic_vars: int
    holds: bool
    witness: Witness | None
    elapsed_ms: float
    diff: list | None = None

    def facts(self) -> dict:
        """All report content except timing, in a fixed order."""
        w = None
        if self.witness is not None:
            w = {
                "assignment": dict(self.witness.assignment),
                "residual_coordinate": self.witness.residual_coordinate,
                "value": self.witness.value,
            }
        out = {
            "command": self.command,
            "identity": self.identity,
            "algebra": self.algebra,
            "dim": self.dim,
            "generic_vars": self.generic_vars,
            "holds": self.holds,
            "witness": w,
        }
        if self.diff is not None:
            out["diff"] = self.diff
        return out


@dataclass(frozen=True)
class WitnessPool:
    """Ordered, duplicate-free candidate elements for the tuple search."""

    name: str
    elements: tuple
    labels: tuple

    @classmethod
    def basis(cls, ring: RingDescriptor) -> "WitnessPool":
        return cls(
            name="basis",
            elements=tuple(ring.basis_element(i) for i in range(ring.dim)),
            labels=tuple(ring.basis_labels),
        )

    @classmethod
    def sums2(cls, ring: RingDescriptor) -> "WitnessPool":
        """Basis monomials plus all pairwise sums b_i + b_j, i < j."""
        elems = [ring.basis_element(i) for i in range(ring.dim)]
        labels = list(ring.basis_labels)
        for i in range(ring.dim):
            for j in range(i + 1, ring.dim):
                elems.append(elems[i] + elems[j])
                labels.append(f"{ring.basis_labels[i]}+{ring.basis_labels[j]}")
        return cls(name="sums:2", elements=tuple(elems), labels=tuple(labels))

    @classmethod
    def named(cls, name: str, ring: RingDescriptor) -> "WitnessPool":
        if name == "basis":
            return cls.basis(ring)
        if name == "sums:2":
            return cls.sums2(ring)
        raise ValueError(f"unknown pool name: {name!r}")


# ---------------------------------------------------------------------------
# Generic input construction


def _generic_ring_args(ring: RingDescriptor, names: Sequence[str], alloc: VarAllocator):
    args = []
    var_map = {}
    for name in names:
        e = ring.generic_element(alloc)
        args.append(e)
        var_map[name] = e
    return args, var_map


def _generic_matrix(ring: RingDescriptor, alloc: VarAllocator):
    entries = {name: ring.generic_element(alloc) for name in ("a11", "a12", "a21", "a22")}
    m = Mat2(
        ring,
        (
            (entries["a11"], entries["a12"]),
            (entries["a21"], entries["a22"]),
        ),
    )
    return [m], entries


def _generic_traceless(ring: RingDescriptor, alloc: VarAllocator):
    # [[x, y], [z, -x]] enforces tr = 0 exactly without constraint solving.
    parts = {name: ring.generic_element(alloc) for name in ("x", "y", "z")}
    m = Mat2(ring, ((parts["x"], parts["y"]), (parts["z"], -parts["x"])))
    return [m], parts


def _generic_odd_matrix(ring: RingDescriptor, alloc: VarAllocator):
    # Grade-1 odd elements square to zero and pairwise anticommute, which makes
    # the three trace hypotheses of cor35 hold exactly.
    if ring.kind != "grassmann":
        raise TraceConditionError(
            "the odd-entry input family needs a grassmann algebra; "
            f"got {ring.spec}"
        )
    gen_indices = [1 << i for i in range(ring.grassmann_r)]
    parts = {}
    for name in ("c", "d", "e"):
        ids = alloc.fresh_vars(len(gen_indices))
        parts[name] = ring.element(
            {b: Polynomial.variable(v) for b, v in zip(gen_indices, ids)}
        )
    m = Mat2(ring, ((parts["c"], parts["d"]), (parts["e"], -parts["c"])))
    return [m], parts


def _build_inputs(kind: str, ring: RingDescriptor, arg_names, alloc: VarAllocator):
    if kind == "ring_args":
        return _generic_ring_args(ring, arg_names, alloc)
    if kind == "matrix":
        return _generic_matrix(ring, alloc)
    if kind == "traceless":
        return _generic_traceless(ring, alloc)
    if kind == "odd_matrix":
        return _generic_odd_matrix(ring, alloc)
    raise ValueError(f"unknown input kind: {kind!r}")


# ---------------------------------------------------------------------------
# Residual flattening and witness extraction


def _residual_coords(residual) -> list:
    """Flatten a residual to [(coordinate label, polynomial)] in scan order."""
    out = []
    if isinstance(residual, Mat2):
        labels = residual.ring.basis_labels
        for i in range(2):
            for j in range(2):
                e = residual.rows[i][j]
                for b in sorted(e.coords):
                    out.append((f"({i + 1},{j + 1})[{labels[b]}]", e.coords[b]))
    else:
        labels = residual.ring.basis_labels
        for b in sorted(residual.coords):
            out.append((f"[{labels[b]}]", residual.coords[b]))
    return out


def _pit_point(poly: Polynomial) -> tuple:
    """Deterministic nonzero point of a nonzero polynomial.

    For each variable in ascending order, keep the smallest value in
    0..deg_v that leaves the partially evaluated polynomial nonzero; a
    nonzero polynomial of degree d in one variable cannot vanish at d + 1
    distinct points, so the scan never dead-ends.
    """
    assignment = {}
    p = poly
    for v in sorted(poly.variables()):
        if v not in p.variables():
            assignment[v] = 0
            continue
        deg_v = max(sum(1 for x in m if x == v) for m in p.terms)
        for val in range(deg_v + 1):
            q = p.substitute(v, val)
            if not q.is_zero():
                assignment[v] = val
                p = q
                break
        else:  # pragma: no cover - impossible by the root-count argument
            raise AssertionError("sequential substitution found no nonzero value")
    value = p.terms.get((), None)
    if value is None or len(p.terms) != 1:  # pragma: no cover
        raise AssertionError("assignment did not reduce the polynomial to a constant")
    return assignment, value


def _concrete_from_assignment(var_map: dict, assignment: dict):
    """Rebuild each named generic argument as a concrete rational element."""
    concrete = {}
    for name, elem in var_map.items():
        coords = {}
        for b, p in elem.coords.items():
            val = p.evaluate(assignment)
            if val:
                coords[b] = Polynomial.const(val)
        concrete[name] = RingElement(elem.ring, coords)
    return concrete


def _rebuild_args(kind: str, ring: RingDescriptor, concrete: dict):
    if kind == "ring_args":
        return list(concrete.values())
    if kind in ("matrix",):
        return [
            Mat2(
                ring,
                (
                    (concrete["a11"], concrete["a12"]),
                    (concrete["a21"], concrete["a22"]),
                ),
            )
        ]
    if kind in ("traceless",):
        return [
            Mat2(
                ring,
                ((concrete["x"], concrete["y"]), (concrete["z"], -concrete["x"])),
            )
        ]
    if kind == "odd_matrix":
        return [
            Mat2(
                ring,
                ((concrete["c"], concrete["d"]), (concrete["e"], -concrete["c"])),
            )
        ]
    raise ValueError(f"unknown input kind: {kind!r}")


def _extract_witness(ident: IdentityDef, ring: RingDescriptor, coords, var_map) -> Witness:
    coord_label, poly = next((lab, p) for lab, p in coords if not p.is_zero())
    assignment, predicted = _pit_point(poly)
    concrete = _concrete_from_assignment(var_map, assignment)
    args = _rebuild_args(ident.kind, ring, concrete)
    with term_budget(TERM_BUDGET):
        re_residual = ident.evaluate(*args)
    re_coords = dict(_residual_coords(re_residual))
    re_poly = re_coords.get(coord_label)
    re_value = re_poly.terms.get((), Fraction(0)) if re_poly else Fraction(0)
    if re_value != predicted:  # pragma: no cover - internal soundness guard
        raise AssertionError(
            f"witness re-evaluation mismatch at {coord_label}: "
            f"{re_value} != {predicted}"
        )
    return Witness(
        assignment={name: concrete[name].render() for name in var_map},
        residual_coordinate=coord_label,
        value=render_rational(predicted),
    )


# ---------------------------------------------------------------------------
# Budget estimation (fail fast on obviously oversized generic jobs)


def estimate_generic_terms(ident: IdentityDef, ring: RingDescriptor) -> int:
    # Parameterized families (brackets, the half-square recursion) rely on the
    # dynamic in-evaluation guard: their closed-form worst case is wildly
    # pessimistic for sparse tables, and the recursion is often trivial once an
    # intermediate step reaches zero.
    if ident.parameterized or ident.kind == "ring_args":
        return 0
    nvars = len(ident.arg_names) * ring.dim
    if ident.kind == "odd_matrix":
        nvars = len(ident.arg_names) * max(ring.grassmann_r, 1)
    monos = comb(nvars + ident.degree, ident.degree)
    return monos * ring.dim * 4


def _check_static_budget(ident: IdentityDef, ring: RingDescriptor) -> None:
    est = estimate_generic_terms(ident, ring)
    if est > TERM_BUDGET:
        raise BudgetExceededError(
            f"estimated coefficient-term count {est} exceeds budget {TERM_BUDGET} "
            f"for {ident.name} over {ring.spec}"
        )


# ---------------------------------------------------------------------------
# Verification entry points


def verify_generic(
    identity: str,
    ring: RingDescriptor,
    *,
    k: int | None = None,
    m: int | None = None,
) -> VerifyReport:
    """Substitute generic elements, evaluate the residual, and test exact zero."""
    start = time.perf_counter()
    ident = identity_def(identity, k=k, m=m)
    _check_static_budget(ident, ring)
    alloc = VarAllocator()
    args, var_map = _build_inputs(ident.kind, ring, ident.arg_names, alloc)
    nvars = sum(len(e.coords) for e in var_map.values())
    with term_budget(TERM_BUDGET):
        residual = ident.evaluate(*args)
    coords = _residual_coords(residual)
    holds = all(p.is_zero() for _, p in coords)
    witness = None
    if not holds:
        witness = _extract_witness(ident, ring, coords, var_map)
    return VerifyReport(
        command="verify",
        identity=ident.name,
        algebra=ring.spec,
        dim=ring.dim,
        generic_vars=nvars,
        holds=holds,
        witness=witness,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
    )


def verify_bridge(bridge: str, ring: RingDescriptor) -> VerifyReport:
    """Check that two independently transcribed evaluators agree generically.

    On mismatch the report carries a term-level diff instead of an assignment
    witness; agreement is the transcription check for the big displays.
    """
    start = time.perf_counter()
    left_fn, right_fn, kind = bridge_pair(bridge)
    alloc = VarAllocator()
    args, var_map = _build_inputs(kind, ring, ("x", "y", "z"), alloc)
    nvars = sum(len(e.coords) for e in var_map.values())
    with term_budget(TERM_BUDGET):
        left = left_fn(*args)
        right = right_fn(*args)
    holds = left == right
    diff = None if holds else term_diff(left, right)
    return VerifyReport(
        command="verify",
        identity=bridge,
        algebra=ring.spec,
        dim=ring.dim,
        generic_vars=nvars,
        holds=holds,
        witness=None,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
        diff=diff,
    )


SEARCHABLE = (
    "comm_product",
    "double_comm_z",
    "lie_solv2",
    "lie_solv2_tied",
    "domokos",
    "thm37",
)


def _search_args(ident: IdentityDef, ring: RingDescriptor, pool: WitnessPool, idx):
    elems = [pool.elements[i] for i in idx]
    if ident.kind == "ring_args":
        return elems
    # Matrix expressions draw the four entries from the pool in reading order.
    return [Mat2(ring, ((elems[0], elems[1]), (elems[2], elems[3])))]


def _search_arity(ident: IdentityDef) -> int:
    return 4 if ident.kind != "ring_args" else len(ident.arg_names)


def _scan_range(identity, spec, pool_name, start, stop):
    """Scan tuple ranks [start, stop); return the first hit or None.

    Module-level so process pools can ship it to workers; the ring is rebuilt
    from its construction expression on the worker side.
    """
    from .specparse import parse_algebra_spec

    ring = parse_algebra_spec(spec).build()
    pool = WitnessPool.named(pool_name, ring)
    ident = identity_def(identity)
    arity = _search_arity(ident)
    n = len(pool.elements)
    for rank in range(start, stop):
        idx = []
        r = rank
        for _ in range(arity):
            idx.append(r % n)
            r //= n
        idx.reverse()
        args = _search_args(ident, ring, pool, idx)
        value = ident.evaluate(*args)
        if not value.is_zero():
            return rank, tuple(idx)
    return None


def search_witness(
    expr: str,
    ring: RingDescriptor,
    pool: WitnessPool | None = None,
    limit: int | None = None,
    jobs: int = 1,
) -> VerifyReport:
    """Deterministic lexicographic tuple search for a nonzero evaluation.

    holds=False means a witness was found (the expression is not an identity
    within the pool); holds=True means the whole scanned prefix evaluated to
    zero.
    """
    start_time = time.perf_counter()
    if expr not in SEARCHABLE:
        raise KeyError(f"expression {expr!r} is not searchable; pick one of {SEARCHABLE}")
    ident = identity_def(expr)
    if pool is None:
        pool = WitnessPool.basis(ring)
    arity = _search_arity(ident)
    n = len(pool.elements)
    total = n ** arity
    if limit is not None:
        if limit < 1:
            raise ValueError("limit must be >= 1")
        total = min(total, limit)
    hit = None
    if jobs <= 1:
        hit = _scan_range(expr, ring.spec, pool.name, 0, total)
    else:
        chunk = max(1, min(4096, (total + jobs - 1) // jobs))
        starts = list(range(0, total, chunk))
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futures = [
                ex.submit(_scan_range, expr, ring.spec, pool.name, s, min(s + chunk, total))
                for s in starts
            ]
            # Chunks are consumed in rank order, so the first hit seen is the
            # lexicographically first overall.
            for fut in futures:
                res = fut.result()
                if res is not None:
                    hit = res
                    for other in futures:
                        other.cancel()
                    break
    witness = None
    holds = hit is None
    if hit is not None:
        _, idx = hit
        args = _search_args(ident, ring, pool, idx)
        value = ident.evaluate(*args)
        coords = _residual_coords(value)
        coord_label, poly = next((lab, p) for lab, p in coords if not p.is_zero())
        names = ident.arg_names if ident.kind == "ring_args" else ("a11", "a12", "a21", "a22")
        witness = Witness(
            assignment={name: pool.labels[i] for name, i in zip(names, idx)},
            residual_coordinate=coord_label,
            value=poly.render(),
        )
    return VerifyReport(
        command="search",
        identity=ident.name,
        algebra=ring.spec,
        dim=ring.dim,
        generic_vars=0,
        holds=holds,
        witness=witness,
        elapsed_ms=(time.perf_counter() - start_time) * 1000.0,
    )


# ---------------------------------------------------------------------------
# Composite checks


@dataclass
class ProbeOutcome:
    """Outcome of the implication probe between the tied and the free
    commutator-commutation identities."""

    algebra: str
    status: str  # hypothesis_fails | counterexample_found | consistent_not_proof
    note: str
    hypothesis: VerifyReport
    search: VerifyReport | None
    elapsed_ms: float


def probe_question(
    ring: RingDescriptor,
    pool: WitnessPool | None = None,
    limit: int | None = None,
    jobs: int = 1,
) -> ProbeOutcome:
    """Check [[x,y],[x,z]] = 0 generically; if it holds, hunt for a nonzero
    [[x,y],[u,v]] over the pool.

    A hit would separate the two identities and is reported prominently; no
    hit is only evidence, never a proof, and the outcome says so explicitly.
    """
    start = time.perf_counter()
    hyp = verify_generic("lie_solv2_tied", ring)
    if not hyp.holds:
        return ProbeOutcome(
            algebra=ring.spec,
            status="hypothesis_fails",
            note="the ring does not satisfy [[x,y],[x,z]]=0; probe inapplicable",
            hypothesis=hyp,
            search=None,
            elapsed_ms=(time.perf_counter() - start) * 1000.0,
        )
    found = search_witness("lie_solv2", ring, pool=pool, limit=limit, jobs=jobs)
    if not found.holds:
        status = "counterexample_found"
        note = (
            "[[x,y],[x,z]]=0 holds generically but [[x,y],[u,v]] has a nonzero "
            "witness: the tied identity does NOT imply the free one"
        )
    else:
        status = "consistent_not_proof"
        note = (
            "no witness in pool: consistent with the implication, not a proof"
        )
    return ProbeOutcome(
        algebra=ring.spec,
        status=status,
        note=note,
        hypothesis=hyp,
        search=found,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
    )


@dataclass
class U3StarImplicationOutcome:
    """Hypotheses on S versus the conclusion on the equal-diagonal ring over S."""

    algebra: str
    u3star_algebra: str
    status: str  # instantiated | vacuous | refuted
    note: str
    hyp_comm_product: VerifyReport
    hyp_double_comm_z: VerifyReport
    conclusion: VerifyReport
    elapsed_ms: float


def verify_thm21_hypotheses(ring: RingDescriptor) -> U3StarImplicationOutcome:
    """Generically check [x,y][u,v]=0 and [[x,y],z]=0 on S, and
    [[x,y],[u,v]]=0 on the equal-diagonal upper-triangular ring over S."""
    from .kernel import make_u3star

    start = time.perf_counter()
    hyp1 = verify_generic("comm_product", ring)
    hyp2 = verify_generic("double_comm_z", ring)
    outer = make_u3star(ring)
    concl = verify_generic("lie_solv2", outer)
    if hyp1.holds and hyp2.holds:
        if concl.holds:
            status = "instantiated"
            note = "both hypotheses and the conclusion hold"
        else:  # pragma: no cover - would contradict a proved implication
            status = "refuted"
            note = "hypotheses hold but the conclusion fails"
    else:
        status = "vacuous"
        note = (
            "hypotheses fail on the base ring; the conclusion report is "
            "informational only"
        )
    return U3StarImplicationOutcome(
        algebra=ring.spec,
        u3star_algebra=outer.spec,
        status=status,
        note=note,
        hyp_comm_product=hyp1,
        hyp_double_comm_z=hyp2,
        conclusion=concl,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
    )
