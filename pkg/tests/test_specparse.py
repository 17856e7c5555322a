"""Algebra-spec grammar: round-trips, positions, bounds."""

import pytest

from chtrace.specparse import (
    AlgebraSpecError,
    build_algebra,
    canonical_algebra_spec,
    parse_algebra_spec,
)

VALID = [
    ("rat", 1),
    ("grassmann:1", 2),
    ("grassmann:4", 16),
    ("grassmann:8", 256),
    ("full:2", 4),
    ("full:4", 16),
    ("u3star(rat)", 4),
    ("u3star(u3star(rat))", 16),
    ("u3star(u3star(u3star(rat)))", 64),
    ("u3star(grassmann:4)", 64),
    ("u3star(full:3)", 36),
]


@pytest.mark.parametrize("text,dim", VALID)
def test_round_trip_and_dims(text, dim):
    node = parse_algebra_spec(text)
    assert node.render() == text
    assert node.dim() == dim
    assert canonical_algebra_spec(text) == text


def test_whitespace_is_stripped():
    assert canonical_algebra_spec("  rat \n") == "rat"


def test_build_produces_matching_descriptor():
    ring = build_algebra("u3star(grassmann:2)")
    assert ring.spec == "u3star(grassmann:2)"
    assert ring.dim == 16


class TestSyntaxErrors:
    def test_unbalanced_parenthesis_position(self):
        with pytest.raises(AlgebraSpecError) as exc:
            parse_algebra_spec("u3star(grassmann:9")
        assert exc.value.position == 18
        assert "unbalanced parenthesis" in str(exc.value)
        assert "at column 18" in str(exc.value)
        # The out-of-range generator count is reported alongside.
        assert "9 outside 1..8" in str(exc.value)

    def test_unknown_constructor(self):
        with pytest.raises(AlgebraSpecError) as exc:
            parse_algebra_spec("quaternions")
        assert exc.value.position == 0
        assert "expected one of" in str(exc.value)

    def test_missing_integer(self):
        with pytest.raises(AlgebraSpecError) as exc:
            parse_algebra_spec("grassmann:")
        assert exc.value.position == 10

    def test_trailing_garbage(self):
        with pytest.raises(AlgebraSpecError) as exc:
            parse_algebra_spec("rat)")
        assert "trailing" in str(exc.value)
        assert exc.value.position == 3

    def test_inner_error_position(self):
        with pytest.raises(AlgebraSpecError) as exc:
            parse_algebra_spec("u3star(zzz)")
        assert exc.value.position == 7


class TestBounds:
    @pytest.mark.parametrize(
        "text,fragment",
        [
            ("grassmann:9", "9 outside 1..8"),
            ("grassmann:0", "0 outside 1..8"),
            ("full:5", "5 outside 2..4"),
            ("full:1", "1 outside 2..4"),
            ("u3star(grassmann:5)", "dim 128 > 64"),
            ("u3star(u3star(u3star(u3star(rat))))", "dim 256 > 64"),
        ],
    )
    def test_bounds_reported(self, text, fragment):
        with pytest.raises(AlgebraSpecError) as exc:
            parse_algebra_spec(text)
        assert fragment in str(exc.value)

    def test_boundary_dimension_allowed(self):
        assert parse_algebra_spec("u3star(grassmann:4)").dim() == 64
        assert parse_algebra_spec("u3star(u3star(u3star(rat)))").dim() == 64
        assert parse_algebra_spec("u3star(full:4)").dim() == 64
