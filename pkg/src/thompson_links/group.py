"""Thompson's group F as reduced tree pairs.

Products are read left to right: ``a * b`` means "apply ``a``, then ``b``",
matching the right action of F on [0, 1].  With this convention
``x0**-1 * x1 * x0 == x2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .trees import (LEAF, ParseError, Tree, TreePair, leaf_words, parse_pair,
                    reduce_branches, serialize_pair, subtree_at, union)

WRAP_CODES = ("00", "01", "10", "11")


class AttachError(RuntimeError):
    """Gluing two reduced pairs produced a reducible pair (cannot happen unless there is a bug)."""


@dataclass(frozen=True)
class Element:
    pair: TreePair
    _branches: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        branches = reduce_branches(self.pair.branch_words())
        if len(branches) != self.pair.leaves:
            object.__setattr__(self, "pair", TreePair.from_branches(branches))
        object.__setattr__(self, "_branches", tuple(branches))

    @classmethod
    def from_branches(cls, branches: Sequence[tuple[str, str]]) -> Element:
        return cls(TreePair.from_branches(branches))

    @classmethod
    def identity(cls) -> Element:
        return cls(TreePair(LEAF, LEAF))

    @property
    def branches(self) -> tuple[tuple[str, str], ...]:
        return self._branches

    @property
    def leaves(self) -> int:
        return len(self._branches)

    def is_identity(self) -> bool:
        return self.leaves == 1

    def __mul__(self, other: Element) -> Element:
        return multiply(self, other)

    def __pow__(self, k: int) -> Element:
        base = self if k >= 0 else inverse(self)
        result = Element.identity()
        for _ in range(abs(k)):
            result = multiply(result, base)
        return result

    def inverse(self) -> Element:
        return inverse(self)

    def __str__(self) -> str:
        return serialize_pair(self.pair)


def _expand(branches, refinement: Tree, along_target: bool):
    """Subdivide each branch so that its target (or source) side matches ``refinement``."""
    out = []
    for u, v in branches:
        key = v if along_target else u
        for x in leaf_words(subtree_at(refinement, key)):
            out.append((u + x, v + x))
    return out


def multiply(a: Element, b: Element) -> Element:
    common = union(a.pair.minus, b.pair.plus)
    left = _expand(a.branches, common, along_target=True)
    right = _expand(b.branches, common, along_target=False)
    return Element.from_branches([(u, w) for (u, _), (_, w) in zip(left, right)])


def inverse(a: Element) -> Element:
    return Element(a.pair.swap())


def flip(a: Element) -> Element:
    """Conjugate by the reflection t -> 1 - t (mirror both trees)."""
    return Element(a.pair.mirror())


@lru_cache(maxsize=None)
def generator(n: int) -> Element:
    """x_n: identity on [0, 1 - 2**-n], a rescaled x_0 on [1 - 2**-n, 1]."""
    if n < 0:
        raise ValueError(f"generator index must be non-negative, got {n}")
    ones = "1" * n
    fixed = [("1" * k + "0",) * 2 for k in range(n)]
    moved = [(ones + "00", ones + "0"), (ones + "01", ones + "10"), (ones + "1", ones + "11")]
    return Element.from_branches(fixed + moved)


_TOKEN = re.compile(r"\s*x_?(-?\d+)(?:\s*\^\s*\(?\s*([+-]?\d+)\s*\)?)?\s*")


def parse_word(text: str) -> Element:
    """Left-to-right product of generator powers, e.g. ``"x1^2 x2^-1 x1^-1"``."""
    pos = 0
    result = Element.identity()
    if not text.strip():
        raise ParseError("empty word", 0)
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"expected generator 'xN' or 'xN^k', found {text[pos:pos + 8]!r}", pos)
        index = int(m.group(1))
        if index < 0:
            raise ParseError(f"negative generator index x{index}", m.start(1))
        power = int(m.group(2)) if m.group(2) is not None else 1
        result = result * generator(index) ** power
        pos = m.end()
    return result


def parse_element(text: str) -> Element:
    """Accept either the pair grammar (contains ';') or a generator word."""
    if ";" in text:
        return Element(parse_pair(text))
    return parse_word(text)


def attach(a: Element, i: int, b: Element) -> Element:
    """Glue ``b`` into the ``i``-th leaf of both trees of ``a``.

    Each branch ``u -> v`` of ``b`` becomes ``s+u -> t+v`` where ``s -> t`` is
    the ``i``-th branch of ``a``.  The glued pair of two reduced pairs is
    already reduced, so the result is checked rather than re-reduced.
    """
    if not 0 <= i < a.leaves:
        raise IndexError(f"leaf index {i} out of range for {a.leaves} leaves")
    s, t = a.branches[i]
    glued = list(a.branches[:i]) + [(s + u, t + v) for u, v in b.branches] + list(a.branches[i + 1:])
    if len(reduce_branches(glued)) != len(glued):
        raise AttachError(f"attaching at leaf {i} produced a reducible pair")
    return Element.from_branches(glued)


def branch_index(g: Element, source: str, target: str | None = None) -> int:
    target = source if target is None else target
    try:
        return g.branches.index((source, target))
    except ValueError:
        raise KeyError(f"{source}->{target} is not a branch of {g}") from None


def refine_to(branches: Sequence[tuple[str, str]], word: str) -> tuple[list[tuple[str, str]], int]:
    """Insert carets until ``word`` is a source leaf; return the new branches and its index.

    ``word`` must extend the source of some branch ``s -> t``; that branch is
    split along the path to ``word``, so the result represents the same element.
    """
    for i, (s, t) in enumerate(branches):
        if word.startswith(s):
            break
    else:
        raise KeyError(f"{word!r} does not extend any source leaf")
    rest = word[len(s):]
    pieces = []
    for k, bit in enumerate(rest):
        sibling = rest[:k] + ("1" if bit == "0" else "0")
        pieces.append((k, bit, (s + sibling, t + sibling)))
    left = [br for _, bit, br in pieces if bit == "1"]
    right = [br for _, bit, br in reversed(pieces) if bit == "0"]
    out = list(branches[:i]) + left + [(word, t + rest)] + right + list(branches[i + 1:])
    return out, i + len(left)


def attach_at(a: Element, word: str, b: Element) -> Element:
    """Glue ``b`` at the leaf ``word`` of a refinement of ``a``.

    Equivalent to :func:`attach` when ``word`` is already a source leaf.  When
    carets had to be inserted, the glued pair is reduced as long as ``b`` is
    not the identity; attaching the identity gives back ``a``.
    """
    branches, i = refine_to(a.branches, word)
    s, t = branches[i]
    glued = branches[:i] + [(s + u, t + v) for u, v in b.branches] + branches[i + 1:]
    if not b.is_identity() and len(reduce_branches(glued)) != len(glued):
        raise AttachError(f"attaching at {word!r} produced a reducible pair")
    return Element.from_branches(glued)


# Wrapper elements W_w.  wrap(w, g) glues g at the leaf w, so on the interval
# of w it is an affine copy of g.  W_00 is a reduced pair with branch 00 -> 00
# whose link is the unknot, found by exhaustive search.  W_01 is x1 with its
# branch 0 -> 0 split to expose 01 -> 01.  Any element with a branch 01 -> 01
# fixes 1/2, so its link is split and wrapping at 01 adds an unknotted
# component; stabilizer constructions near 1/2 avoid it.  W_10 and W_11 are
# the mirror images.
_WRAPPER_TEXT = {
    "00": "((.,(.,.)),.);((.,.),(.,.))",
}


@lru_cache(maxsize=None)
def wrapper(code: str) -> Element:
    if code not in WRAP_CODES:
        raise ValueError(f"unknown wrap code {code!r}; expected one of {WRAP_CODES}")
    if code == "00":
        return Element(parse_pair(_WRAPPER_TEXT["00"]))
    if code == "01":
        return generator(1)
    return flip(wrapper("01" if code == "10" else "00"))


def wrap(code: str, g: Element) -> Element:
    return attach_at(wrapper(code), code, g)
