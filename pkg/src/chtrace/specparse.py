"""Recursive-descent parser for the algebra-spec mini-language.

Grammar:

    spec := "rat" | "grassmann:" INT | "full:" INT | "u3star(" spec ")"

The grammar is whitespace-free; inputs are stripped before parsing and error
positions are 0-based offsets into the stripped text.  Dimension bounds are
enforced after the grammar: out-of-range numbers are collected during the
parse and reported together, including alongside a syntax error when both
problems are present.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kernel import (
    MAX_DIM,
    RingDescriptor,
    make_full,
    make_grassmann,
    make_rat,
    make_u3star,
)


class AlgebraSpecError(ValueError):
    """Syntax or bounds error in an algebra spec, with an offset when syntactic."""

    def __init__(self, message: str, position: int | None = None) -> None:
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class RatSpec:
    def render(self) -> str:
        return "rat"

    def dim(self) -> int:
        return 1

    def build(self) -> RingDescriptor:
        return make_rat()


@dataclass(frozen=True)
class GrassmannSpec:
    r: int

    def render(self) -> str:
        return f"grassmann:{self.r}"

    def dim(self) -> int:
        return 1 << self.r

    def build(self) -> RingDescriptor:
        return make_grassmann(self.r)


@dataclass(frozen=True)
class FullSpec:
    n: int

    def render(self) -> str:
        return f"full:{self.n}"

    def dim(self) -> int:
        return self.n * self.n

    def build(self) -> RingDescriptor:
        return make_full(self.n)


@dataclass(frozen=True)
class U3StarSpec:
    inner: object

    def render(self) -> str:
        return f"u3star({self.inner.render()})"

    def dim(self) -> int:
        return 4 * self.inner.dim()

    def build(self) -> RingDescriptor:
        return make_u3star(self.inner.build())


AlgebraSpec = object  # RatSpec | GrassmannSpec | FullSpec | U3StarSpec


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0
        self.bound_notes: list = []

    def fail(self, message: str) -> AlgebraSpecError:
        note = f"; note: {'; '.join(self.bound_notes)}" if self.bound_notes else ""
        return AlgebraSpecError(f"{message} at column {self.pos}{note}", self.pos)

    def eat(self, literal: str) -> bool:
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.fail("expected an integer")
        return int(self.text[start : self.pos])

    def spec(self) -> AlgebraSpec:
        if self.eat("rat"):
            return RatSpec()
        if self.eat("grassmann:"):
            r = self.integer()
            if not 1 <= r <= 8:
                self.bound_notes.append(
                    f"grassmann generator count {r} outside 1..8"
                )
            return GrassmannSpec(r)
        if self.eat("full:"):
            n = self.integer()
            if not 2 <= n <= 4:
                self.bound_notes.append(f"full matrix size {n} outside 2..4")
            return FullSpec(n)
        if self.eat("u3star("):
            inner = self.spec()
            if not self.eat(")"):
                raise self.fail("unbalanced parenthesis: expected ')'")
            node = U3StarSpec(inner)
            if node.dim() > MAX_DIM and inner.dim() <= MAX_DIM:
                self.bound_notes.append(
                    f"u3star({inner.render()}) has dim {node.dim()} > {MAX_DIM}"
                )
            return node
        raise self.fail(
            "expected one of 'rat', 'grassmann:INT', 'full:INT', 'u3star('"
        )


def parse_algebra_spec(text: str) -> AlgebraSpec:
    """Parse an algebra spec or fail with a position-annotated error."""
    stripped = text.strip()
    parser = _Parser(stripped)
    node = parser.spec()
    if parser.pos != len(stripped):
        raise parser.fail("unexpected trailing input")
    if parser.bound_notes:
        raise AlgebraSpecError(
            "dimension bounds violated: " + "; ".join(parser.bound_notes)
        )
    return node


def canonical_algebra_spec(text: str) -> str:
    """Canonical rendering; stable under re-parsing."""
    return parse_algebra_spec(text).render()


def build_algebra(text: str) -> RingDescriptor:
    """Parse and construct the ring in one step."""
    return parse_algebra_spec(text).build()
