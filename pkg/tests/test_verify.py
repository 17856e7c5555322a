"""Verifier: generic checks, witness extraction and soundness, pool search,
the implication probe, and the base-ring/u3star implication check."""

import pytest

from chtrace.identities import identity_def
from chtrace.kernel import BudgetExceededError, make_full, make_grassmann, make_u3star, make_rat
from chtrace.matrices import Mat2
from chtrace.scalars import Polynomial
from chtrace.specparse import build_algebra
from chtrace.verify import (
    SEARCHABLE,
    WitnessPool,
    probe_question,
    search_witness,
    verify_bridge,
    verify_generic,
    verify_thm21_hypotheses,
)

F2 = make_full(2)
UU = make_u3star(make_u3star(make_rat()))
G4 = make_grassmann(4)


def reevaluate(identity_name, ring, witness):
    """Independent witness replay: parse the rendered elements back into ring
    elements and re-run the evaluator at the concrete point."""
    ident = identity_def(identity_name)
    elems = {
        name: _parse_element(ring, rendered)
        for name, rendered in witness.assignment.items()
    }
    if ident.kind == "ring_args":
        args = [elems[n] for n in ident.arg_names]
    elif ident.kind == "matrix":
        args = [
            Mat2(
                ring,
                ((elems["a11"], elems["a12"]), (elems["a21"], elems["a22"])),
            )
        ]
    else:
        args = [Mat2(ring, ((elems["x"], elems["y"]), (elems["z"], -elems["x"])))]
    residual = ident.evaluate(*args)
    return residual


def _parse_element(ring, rendered):
    """Parse the "(coeff)*label + ..." element rendering used in reports."""
    from fractions import Fraction

    if rendered == "0":
        return ring.zero()
    label_to_index = {lab: i for i, lab in enumerate(ring.basis_labels)}
    coords = {}
    for part in rendered.split(" + "):
        if ")*" in part:
            coeff_text, label = part.split(")*")
            coeff_text = coeff_text[1:]
        else:
            coeff_text, label = part[1:-1], "1"
        coords[label_to_index[label]] = Polynomial.const(Fraction(coeff_text))
    return ring.element(coords)


class TestVerifyGeneric:
    def test_unconditional_identity_over_full(self):
        r = verify_generic("prop31", F2)
        assert r.holds and r.witness is None
        assert r.generic_vars == 16 and r.dim == 4

    def test_headline_ring_passes_thm37(self):
        r = verify_generic("thm37", UU)
        assert r.holds
        assert r.generic_vars == 64

    def test_negative_control_produces_witness(self):
        r = verify_generic("thm37", F2)
        assert not r.holds
        assert r.witness is not None

    def test_witness_replay_is_exact(self):
        for name in ("lie_solv2_tied", "lie_solv2", "thm37", "domokos"):
            r = verify_generic(name, F2)
            assert not r.holds
            residual = reevaluate(name, F2, r.witness)
            coord = r.witness.residual_coordinate
            coords = _flatten(residual)
            assert coords[coord].render() == r.witness.value

    def test_generic_vars_counts_traceless_parameterization(self):
        r = verify_generic("cor32", F2)
        assert r.holds
        assert r.generic_vars == 12  # three generic entries, dim 4

    def test_cor35_odd_family_over_grassmann(self):
        r = verify_generic("cor35", make_grassmann(6))
        assert r.holds
        assert r.generic_vars == 18  # three grade-1 elements over six generators

    def test_cor35_rejects_non_grassmann_ring(self):
        from chtrace.identities import TraceConditionError

        with pytest.raises(TraceConditionError):
            verify_generic("cor35", F2)

    def test_ck_vanish_depths(self):
        assert verify_generic("ck_vanish", G4, k=2).holds
        assert not verify_generic("ck_vanish", F2, k=2).holds
        # Depth 3 is trivial once depth 2 already reached zero.
        assert verify_generic("ck_vanish", G4, k=3).holds

    def test_static_budget_guard(self):
        with pytest.raises(BudgetExceededError):
            verify_generic("thm37", make_grassmann(6))


def _flatten(residual):
    from chtrace.verify import _residual_coords

    return dict(_residual_coords(residual))


class TestBridges:
    @pytest.mark.parametrize(
        "bridge",
        ["thm33_display_bridge", "cor34_thm33_bridge", "thm37_cor36_bridge"],
    )
    def test_bridges_hold_over_full(self, bridge):
        r = verify_bridge(bridge, F2)
        assert r.holds
        assert r.diff is None


class TestSearch:
    def test_comm_product_witness_in_nested_ring(self):
        r = search_witness("comm_product", UU)
        assert not r.holds
        w = r.witness
        assert w.assignment == {
            "x": "I⊗E12′",
            "y": "I⊗E23′",
            "u": "E12⊗I′",
            "v": "E23⊗I′",
        }
        assert w.residual_coordinate == "[E13⊗E13′]"
        assert w.value == "1"

    def test_double_comm_witness_lands_in_top_corner(self):
        r = search_witness("double_comm_z", UU)
        assert not r.holds
        # The value has the shape (commutator of the base ring) * E13.
        assert r.witness.residual_coordinate.startswith("[E13")

    def test_search_agrees_with_generic_pass(self):
        # Generic holds implies no witness exists in any pool over that ring.
        u1 = build_algebra("u3star(rat)")
        assert verify_generic("comm_product", u1).holds
        assert search_witness("comm_product", u1).holds
        assert verify_generic("lie_solv2", UU).holds
        assert search_witness("lie_solv2", UU).holds

    def test_grassmann_does_not_kill_free_commutator_products(self):
        # [x,y][x,z] = 0 holds with a tied first argument, but the four-
        # variable product [x,y][u,v] is nonzero: disjoint generator pairs
        # multiply to the top-degree monomial.
        r = verify_generic("comm_product", G4)
        assert not r.holds
        s = search_witness("comm_product", G4)
        assert not s.holds
        assert s.witness.residual_coordinate == "[v1v2v3v4]"

    def test_limit_truncates_scan(self):
        r = search_witness("comm_product", UU, limit=10)
        assert r.holds  # the first witness lives beyond rank 10

    def test_witness_replay(self):
        r = search_witness("double_comm_z", UU)
        pool = WitnessPool.basis(UU)
        label_to_elem = dict(zip(pool.labels, pool.elements))
        args = [label_to_elem[r.witness.assignment[n]] for n in ("x", "y", "z")]
        residual = identity_def("double_comm_z").evaluate(*args)
        coords = _flatten(residual)
        assert coords[r.witness.residual_coordinate].render() == r.witness.value

    def test_parallel_scan_matches_serial(self):
        serial = search_witness("double_comm_z", UU, jobs=1)
        parallel = search_witness("double_comm_z", UU, jobs=2)
        assert serial.facts() == parallel.facts()

    def test_unknown_expression_rejected(self):
        with pytest.raises(KeyError):
            search_witness("prop31", F2)
        assert "thm37" in SEARCHABLE

    def test_sums_pool_is_larger(self):
        pool = WitnessPool.sums2(F2)
        assert len(pool.elements) == 4 + 6


class TestProbe:
    def test_nested_ring_is_consistent_not_proof(self):
        out = probe_question(UU)
        assert out.status == "consistent_not_proof"
        assert out.hypothesis.holds
        assert out.search is not None and out.search.holds
        assert "not a proof" in out.note

    def test_full_ring_fails_hypothesis(self):
        out = probe_question(F2)
        assert out.status == "hypothesis_fails"
        assert out.search is None

    def test_grassmann_is_consistent(self):
        out = probe_question(G4)
        assert out.status == "consistent_not_proof"


class TestImplicationSuite:
    def test_commutative_base(self):
        out = verify_thm21_hypotheses(make_rat())
        assert out.status == "instantiated"
        assert out.conclusion.algebra == "u3star(rat)"

    def test_single_u3star_base(self):
        out = verify_thm21_hypotheses(build_algebra("u3star(rat)"))
        assert out.status == "instantiated"
        assert out.hyp_comm_product.holds
        assert out.hyp_double_comm_z.holds
        assert out.conclusion.holds
        assert out.conclusion.algebra == "u3star(u3star(rat))"

    def test_full_base_is_vacuous(self):
        out = verify_thm21_hypotheses(F2)
        assert out.status == "vacuous"
        assert not out.hyp_comm_product.holds
        assert "informational" in out.note


class TestDeterminism:
    def test_reports_are_reproducible(self):
        import json

        def snapshot():
            parts = [
                verify_generic("thm37", F2).facts(),
                verify_generic("lie_solv2", UU).facts(),
                search_witness("comm_product", UU).facts(),
            ]
            return json.dumps(parts, ensure_ascii=False)

        assert snapshot() == snapshot()
