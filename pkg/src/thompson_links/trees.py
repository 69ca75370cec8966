"""Full binary trees, tree pairs, caret reduction/insertion and text I/O.

A tree is a nested tuple: the empty tuple ``()`` is a leaf and a 2-tuple
``(left, right)`` is an internal node.  Tuples give value semantics and
hashing for free, which the group layer relies on for equality.

Leaves are addressed by binary words (``str`` over ``"01"``): ``"0"`` means
"go left".  The empty word addresses the root.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

Tree = tuple
LEAF: Tree = ()
CARET: Tree = ((), ())


class TreeError(ValueError):
    pass


class ParseError(ValueError):
    """Malformed tree or pair text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def is_leaf(t: Tree) -> bool:
    return not t


def leaf_count(t: Tree) -> int:
    if not t:
        return 1
    return leaf_count(t[0]) + leaf_count(t[1])


def leaf_words(t: Tree) -> list[str]:
    """Leaf addresses from left to right."""
    out: list[str] = []
    stack = [(t, "")]
    while stack:
        node, word = stack.pop()
        if not node:
            out.append(word)
        else:
            stack.append((node[1], word + "1"))
            stack.append((node[0], word + "0"))
    return out


def tree_from_words(words: Sequence[str]) -> Tree:
    """Inverse of :func:`leaf_words`; ``words`` must be a complete prefix code in order."""
    pos = 0

    def build(prefix: str) -> Tree:
        nonlocal pos
        if pos >= len(words):
            raise TreeError(f"leaf words do not form a full binary tree: missing {prefix!r}")
        w = words[pos]
        if w == prefix:
            pos += 1
            return LEAF
        if not w.startswith(prefix):
            raise TreeError(f"leaf words do not form a full binary tree near {w!r}")
        return (build(prefix + "0"), build(prefix + "1"))

    t = build("")
    if pos != len(words):
        raise TreeError("leaf words do not form a full binary tree: trailing words")
    return t


def mirror(t: Tree) -> Tree:
    if not t:
        return t
    return (mirror(t[1]), mirror(t[0]))


def leaf_interval(word: str) -> tuple[Fraction, Fraction]:
    """Closed dyadic interval ``[a, a + 2**-len(word)]`` addressed by ``word``."""
    a = Fraction(int(word, 2), 2 ** len(word)) if word else Fraction(0)
    return a, a + Fraction(1, 2 ** len(word))


def subtree_at(t: Tree, word: str) -> Tree:
    for bit in word:
        if not t:
            raise TreeError(f"address {word!r} runs past a leaf")
        t = t[int(bit)]
    return t


def graft(t: Tree, word: str, sub: Tree) -> Tree:
    """Replace the leaf at ``word`` with ``sub``."""
    if not word:
        if t:
            raise TreeError("graft target is not a leaf")
        return sub
    if not t:
        raise TreeError(f"address {word!r} runs past a leaf")
    if word[0] == "0":
        return (graft(t[0], word[1:], sub), t[1])
    return (t[0], graft(t[1], word[1:], sub))


def union(a: Tree, b: Tree) -> Tree:
    """Smallest tree containing both ``a`` and ``b`` as rooted subtrees."""
    if not a:
        return b
    if not b:
        return a
    return (union(a[0], b[0]), union(a[1], b[1]))


# -- enumeration and sampling -------------------------------------------------


@lru_cache(maxsize=None)
def all_trees(n: int) -> tuple[Tree, ...]:
    """Every full binary tree with ``n`` leaves, ordered by serialization."""
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    if n == 1:
        return (LEAF,)
    found = [(left, right)
             for k in range(1, n)
             for left in all_trees(k)
             for right in all_trees(n - k)]
    return tuple(sorted(found, key=serialize_tree))


def random_tree(n: int, rng: random.Random, max_depth: int | None = None) -> Tree:
    """Random full tree with ``n`` leaves, built by splitting random leaves."""
    words = [""]
    while len(words) < n:
        candidates = [i for i, w in enumerate(words) if max_depth is None or len(w) < max_depth]
        if not candidates:
            break
        i = rng.choice(candidates)
        w = words[i]
        words[i:i + 1] = [w + "0", w + "1"]
    return tree_from_words(words)


# -- tree pairs ----------------------------------------------------------------


class Branch(NamedTuple):
    source: str
    target: str
    index: int


@dataclass(frozen=True)
class TreePair:
    plus: Tree
    minus: Tree

    def __post_init__(self):
        if leaf_count(self.plus) != leaf_count(self.minus):
            raise TreeError(
                f"leaf counts differ: {leaf_count(self.plus)} vs {leaf_count(self.minus)}")

    @classmethod
    def from_branches(cls, branches: Sequence[tuple[str, str]]) -> TreePair:
        return cls(tree_from_words([u for u, _ in branches]),
                   tree_from_words([v for _, v in branches]))

    @property
    def leaves(self) -> int:
        return leaf_count(self.plus)

    def branch_words(self) -> list[tuple[str, str]]:
        return list(zip(leaf_words(self.plus), leaf_words(self.minus)))

    def branches(self) -> list[Branch]:
        return [Branch(u, v, i) for i, (u, v) in enumerate(self.branch_words())]

    def swap(self) -> TreePair:
        return TreePair(self.minus, self.plus)

    def mirror(self) -> TreePair:
        return TreePair(mirror(self.plus), mirror(self.minus))

    def insert_caret(self, i: int) -> TreePair:
        n = self.leaves
        if not 0 <= i < n:
            raise IndexError(f"leaf index {i} out of range for {n} leaves")
        u, v = self.branch_words()[i]
        return TreePair(graft(self.plus, u, CARET), graft(self.minus, v, CARET))

    def reducible_indices(self) -> list[int]:
        bw = self.branch_words()
        return [i for i in range(len(bw) - 1) if _siblings(bw[i], bw[i + 1])]

    def is_reduced(self) -> bool:
        return not self.reducible_indices()

    def remove_caret(self, i: int) -> TreePair:
        """Undo an insertion at leaves ``i, i+1`` (must share a parent in both trees)."""
        bw = self.branch_words()
        if not (0 <= i < len(bw) - 1 and _siblings(bw[i], bw[i + 1])):
            raise TreeError(f"leaves {i}, {i + 1} do not form a common caret")
        (u, v), _ = bw[i], bw[i + 1]
        return TreePair.from_branches(bw[:i] + [(u[:-1], v[:-1])] + bw[i + 2:])

    def reduce(self) -> TreePair:
        branches = reduce_branches(self.branch_words())
        if len(branches) == self.leaves:
            return self
        return TreePair.from_branches(branches)

    def __str__(self) -> str:
        return serialize_pair(self)


def _siblings(a: tuple[str, str], b: tuple[str, str]) -> bool:
    (u0, v0), (u1, v1) = a, b
    return (u0[-1:] == "0" and v0[-1:] == "0"
            and u1 == u0[:-1] + "1" and v1 == v0[:-1] + "1")


def reduce_branches(branches: Sequence[tuple[str, str]]) -> list[tuple[str, str]]:
    """Remove common carets until none is left.

    A stack pass suffices: a merge can only create a new reducible pair with
    the branch to its left, which is re-checked immediately.
    """
    stack: list[tuple[str, str]] = []
    for br in branches:
        stack.append(br)
        while len(stack) >= 2 and _siblings(stack[-2], stack[-1]):
            u, v = stack[-2]
            del stack[-2:]
            stack.append((u[:-1], v[:-1]))
    return stack


def all_pairs(n: int, reduced_only: bool = True) -> Iterator[TreePair]:
    for plus in all_trees(n):
        for minus in all_trees(n):
            p = TreePair(plus, minus)
            if not reduced_only or p.is_reduced():
                yield p


def random_pair(n: int, rng: random.Random, max_depth: int | None = None) -> TreePair:
    a = random_tree(n, rng, max_depth)
    b = random_tree(leaf_count(a), rng, max_depth)
    while leaf_count(b) != leaf_count(a):
        b = random_tree(leaf_count(a), rng, max_depth)
    return TreePair(a, b)


# -- text format ---------------------------------------------------------------
#   tree := "." | "(" tree "," tree ")"      pair := tree ";" tree


def serialize_tree(t: Tree) -> str:
    if not t:
        return "."
    return f"({serialize_tree(t[0])},{serialize_tree(t[1])})"


def serialize_pair(p: TreePair) -> str:
    return f"{serialize_tree(p.plus)};{serialize_tree(p.minus)}"


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        got = self.peek()
        if got != ch:
            raise ParseError(f"expected {ch!r}, found {got or 'end of input'!r}", self.pos)
        self.pos += 1

    def tree(self) -> Tree:
        ch = self.peek()
        if ch == ".":
            self.pos += 1
            return LEAF
        if ch == "(":
            self.pos += 1
            left = self.tree()
            self.expect(",")
            right = self.tree()
            self.expect(")")
            return (left, right)
        raise ParseError(f"expected '.' or '(', found {ch or 'end of input'!r}", self.pos)

    def end(self) -> None:
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)


def parse_tree(text: str) -> Tree:
    r = _Reader(text)
    t = r.tree()
    r.end()
    return t


def parse_pair(text: str) -> TreePair:
    r = _Reader(text)
    plus = r.tree()
    r.expect(";")
    at = r.pos
    minus = r.tree()
    r.end()
    try:
        return TreePair(plus, minus)
    except TreeError as exc:
        raise ParseError(str(exc), at) from None
