"""Elements of Stab(r) with prescribed links.

The strategy: find a nontrivial element ``f`` fixing ``r`` whose link is the
unknot and which is the identity on some dyadic interval ``[v]`` not
containing ``r`` in its interior.  Gluing any ``g`` at ``v`` then gives an
element that still fixes ``r`` and whose link is the connected sum of the
unknot with the link of ``g``, i.e. the link of ``g``.

Such ``f`` come from a small table of basic elements (identity on one of
seven intervals tiling [0, 7/16], plus their mirror images) and, for r just
below 1/2, from a family of elements that are the identity on
``[0 1^m 0]`` for every m >= 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import jones
from .analysis import (BinaryExpansion, InsufficientPrecision, first_zero_after,
                       fixes, fixes_interval)
from .group import Element, attach, flip
from .trees import CARET, LEAF, Branch, TreePair, leaf_interval, leaf_words, tree_from_words

__all__ = [
    "RNotInRange", "RIsHalf", "InsufficientPrecision", "VerificationError",
    "BasicElementRecord", "BASIC_WORDS", "basic_element", "basic_table",
    "near_half_element", "unknot_stabilizer", "unknot_site", "alexander_element",
    "stab_half_join",
]


class RNotInRange(ValueError):
    pass


class RIsHalf(ValueError):
    """Every element fixing 1/2 has a split link, so no unknot element exists."""


class VerificationError(RuntimeError):
    """A constructed element failed its runtime check (signals a bug)."""


def _unknot(g: Element) -> bool:
    return jones.fingerprint(g, cap=None) == jones.UNKNOT


# -- basic elements ------------------------------------------------------------

# (u, pair text, word v of an identity branch v -> v away from [u]).  Every
# pair was found by exhaustive search over reduced pairs with at most 9
# leaves that share the leaf u (and v) at the same index in both trees.
_BASIC_TEXT = (
    ("000", "(((.,(.,.)),.),(.,.));(((.,.),.),((.,.),.))", None),
    ("00100", "(((.,((.,(.,.)),.)),.),(.,.));(((.,((.,.),.)),.),((.,.),.))", None),
    ("00101", "((((.,.),((.,.),(.,.))),.),(.,.));(((.,(((.,.),.),.)),.),((.,.),.))", "11"),
    ("0011", "(((((.,(.,.)),.),(.,.)),(.,.)),.);(((((.,.),.),((.,.),.)),.),(.,.))", "00000"),
    ("0100", "((.,((.,(.,.)),.)),(.,(.,.)));((.,((.,.),.)),(.,((.,.),.)))", None),
    ("0101", "((((.,(.,.)),.),((.,.),(.,.))),.);((((.,.),.),(((.,.),.),.)),(.,.))", "0000"),
    ("0110", "((((.,(.,.)),.),(.,(.,(.,.)))),.);((((.,.),.),((.,.),(.,.))),(.,.))", "0000"),
)

BASE_WORDS = tuple(u for u, _, _ in _BASIC_TEXT)


def _flip_word(w: str) -> str:
    return w.translate(str.maketrans("01", "10"))


MIRROR_WORDS = tuple(_flip_word(u) for u in BASE_WORDS)
BASIC_WORDS = BASE_WORDS + MIRROR_WORDS


@dataclass(frozen=True)
class BasicElementRecord:
    u: str
    element: Element
    attach_branch: Branch

    def check(self) -> None:
        """Raise VerificationError unless every defining property holds."""
        g, u = self.element, self.u
        v = self.attach_branch.source
        problems = []
        if g.is_identity():
            problems.append("element is the identity")
        if (u, u) not in g.branches:
            problems.append(f"no branch {u}->{u}")
        if self.attach_branch.target != v or g.branches[self.attach_branch.index] != (v, v):
            problems.append(f"attach branch {v} is not an identity branch")
        if v.startswith(u) or u.startswith(v):
            problems.append(f"attach branch {v} overlaps [{u}]")
        if not _unknot(g):
            problems.append("link is not the unknot")
        if problems:
            raise VerificationError(f"basic element {u}: " + "; ".join(problems))


def _first_free_identity(g: Element, u: str) -> str:
    for s, t in g.branches:
        if s == t and not (s.startswith(u) or u.startswith(s)):
            return s
    raise VerificationError(f"basic element {u} has no identity branch away from [{u}]")


def _record(u: str, g: Element, v: str | None) -> BasicElementRecord:
    v = v or _first_free_identity(g, u)
    return BasicElementRecord(u, g, Branch(v, v, g.branches.index((v, v))))


@lru_cache(maxsize=None)
def basic_table() -> dict[str, BasicElementRecord]:
    """All fourteen records, verified once."""
    from .trees import parse_pair
    table = {}
    for u, text, v in _BASIC_TEXT:
        table[u] = _record(u, Element(parse_pair(text)), v)
    for u, text, v in _BASIC_TEXT:
        rec = table[u]
        fu = _flip_word(u)
        fv = _flip_word(rec.attach_branch.source)
        table[fu] = _record(fu, flip(rec.element), fv)
    for rec in table.values():
        rec.check()
    return table


def basic_element(u: str) -> BasicElementRecord:
    try:
        return basic_table()[u]
    except KeyError:
        raise KeyError(f"no basic element for address {u!r}; known: {', '.join(BASIC_WORDS)}") from None


# -- elements fixing [0 1^m 0] --------------------------------------------------


def _spine_tree(m: int, left: list, right: list) -> tuple:
    """Tree with leaf 0 1^m 0, subtrees ``left`` hung at 0 1^j 0 (j < m) and ``right`` at 0 1^m 1, 1."""
    words = []
    for j, t in enumerate(left):
        words += ["0" + "1" * j + "0" + x for x in leaf_words(t)]
    words.append("0" + "1" * m + "0")
    for site, t in zip(["0" + "1" * m + "1", "1"], right):
        words += [site + x for x in leaf_words(t)]
    return tree_from_words(words)


@lru_cache(maxsize=None)
def near_half_element(m: int) -> Element:
    """Nontrivial unknot element with branch ``0 1^m 0 -> 0 1^m 0``, for m >= 3.

    The two trees share the spine 0, 01, ..., 0 1^m.  Along it the plus tree
    carries two carets and then the block ``((.,.),.)`` repeated m - 3 times,
    while the minus tree carries two leaves and then ``(.,(.,.))``.  Each block
    adds three crossings that cancel in pairs, so the link stays the unknot for
    every m; this is re-checked here for each m that is used.
    """
    if m < 3:
        raise ValueError("the spine family starts at m = 3")
    plus_block, minus_block = (CARET, LEAF), (LEAF, CARET)
    plus = _spine_tree(m, [CARET, CARET] + [plus_block] * (m - 3) + [LEAF], [LEAF, CARET])
    minus = _spine_tree(m, [LEAF, LEAF] + [minus_block] * (m - 3) + [minus_block], [CARET, LEAF])
    g = Element(TreePair(plus, minus))
    w = "0" + "1" * m + "0"
    if g.leaves != 3 * m or (w, w) not in g.branches or not _unknot(g):
        raise VerificationError(f"spine element for m = {m} failed its check")
    return g


# -- the unknot stabilizer -----------------------------------------------------

SEVEN_SIXTEENTHS = Fraction(7, 16)
NINE_SIXTEENTHS = Fraction(9, 16)
HALF = Fraction(1, 2)


def _as_point(r) -> Fraction | BinaryExpansion:
    """Exact points become Fractions; finite-precision expansions are kept as they are.

    Only a few leading digits are ever needed, so periodic expansions with
    long periods are never written out.
    """
    if isinstance(r, BinaryExpansion):
        if r.truncated:
            return r
        r = r.value()
    r = Fraction(r)
    if not 0 < r < 1:
        raise RNotInRange(f"r = {r} is not in (0, 1)")
    if r == HALF:
        raise RIsHalf("r = 1/2: every element of Stab(1/2) produces a split link")
    return r


def _mirror(r: Fraction | BinaryExpansion) -> Fraction | BinaryExpansion:
    if isinstance(r, BinaryExpansion):
        return BinaryExpansion(_flip_word(r.preperiod), truncated=True)
    return 1 - r


def _table_word(r: Fraction | BinaryExpansion, words) -> str | None:
    """First table word whose closed interval contains every point consistent with r."""
    lo, hi = r.interval() if isinstance(r, BinaryExpansion) else (r, r)
    for u in words:
        a, b = leaf_interval(u)
        if a <= lo and hi <= b:
            return u
    return None


def _region(r: Fraction | BinaryExpansion) -> str:
    """'A' for (0, 7/16], 'B' for [9/16, 1), 'C' for (7/16, 1/2), 'D' for (1/2, 9/16)."""
    if not isinstance(r, BinaryExpansion):
        if r <= SEVEN_SIXTEENTHS:
            return "A"
        if r >= NINE_SIXTEENTHS:
            return "B"
        return "C" if r < HALF else "D"
    known = r.preperiod
    if known.startswith("0111"):
        return "C"
    if known.startswith("1000"):
        return "D"
    if _table_word(r, BASE_WORDS):
        return "A"
    if _table_word(r, MIRROR_WORDS):
        return "B"
    raise InsufficientPrecision(f"{r}: not enough digits to locate r")


def _ones_after_first_digit(r: Fraction | BinaryExpansion) -> int:
    """m for r = 0.0 1^m 0 ... (terminating expansion for dyadic r)."""
    if isinstance(r, BinaryExpansion):
        return first_zero_after(r, 1) - 1
    y, m = 2 * r, 0
    while True:
        y *= 2
        if y < 1:
            return m
        y -= 1
        m += 1


def unknot_site(r) -> tuple[Element, int]:
    """An unknot element ``f`` fixing ``r`` and the index of a branch to glue into.

    ``r`` lies outside the interior of that branch's source interval, so
    gluing anything there keeps ``r`` fixed.  For the table elements the
    branch is an identity branch; for the spine elements it is the first
    branch, whose interval [000] is far from r.
    """
    r = _as_point(r)
    region = _region(r)
    if region == "A" or region == "B":
        u = _table_word(r, BASE_WORDS if region == "A" else MIRROR_WORDS)
        if u is None:
            raise InsufficientPrecision(f"{r}: not enough digits to locate r")
        rec = basic_element(u)
        return rec.element, rec.attach_branch.index
    if region == "D":
        g, i = unknot_site(_mirror(r))
        return flip(g), g.leaves - 1 - i
    # r = 0.0 1^m 0 beta with m >= 3: the spine element is the identity on [0 1^m 0]
    return near_half_element(_ones_after_first_digit(r)), 0


def unknot_stabilizer(r) -> Element:
    """Nontrivial element fixing ``r`` whose link is the unknot."""
    f, _ = unknot_site(r)
    _check_fixes(f, r)
    return f


def _check_fixes(f: Element, r) -> None:
    if isinstance(r, BinaryExpansion):
        lo, hi = r.interval()
        ok = fixes_interval(f, lo, hi) if r.truncated else fixes(f, r.value())
    else:
        ok = fixes(f, r)
    if not ok:
        raise VerificationError(f"constructed element does not fix {r}")


def alexander_element(r, g: Element, cap: int | None = None) -> Element:
    """Element fixing ``r`` with the same link as ``g``; each guarantee is checked before returning."""
    if not isinstance(r, BinaryExpansion):
        r = Fraction(r)
        if r in (0, 1):
            return g
        if not 0 < r < 1:
            raise RNotInRange(f"r = {r} is not in [0, 1]")
    f, i = unknot_site(r)
    h = attach(f, i, g)
    _check_fixes(h, r)
    if h.is_identity():
        raise VerificationError("constructed element is the identity")
    if jones.fingerprint(h, cap=cap) != jones.fingerprint(g, cap=cap):
        raise VerificationError("constructed element has a different link fingerprint")
    return h


def stab_half_join(a: Element, b: Element) -> Element:
    """The element acting as ``a`` on [0, 1/2] and as ``b`` on [1/2, 1]."""
    branches = [("0" + u, "0" + v) for u, v in a.branches]
    branches += [("1" + u, "1" + v) for u, v in b.branches]
    return Element.from_branches(branches)
