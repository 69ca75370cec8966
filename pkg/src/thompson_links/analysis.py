"""Exact piecewise-linear semantics of F and subgroup membership tests.

All arithmetic is over :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

from .group import Element
from .trees import ParseError, leaf_interval

Point = tuple[Fraction, Fraction]


class PLMapError(ValueError):
    pass


class InsufficientPrecision(ValueError):
    """A finite digit string ran out before the required digit was found."""


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def _log2_power(q: Fraction) -> int | None:
    """k with q == 2**k, or None."""
    num, den = q.numerator, q.denominator
    if num <= 0:
        return None
    if den == 1 and num & (num - 1) == 0:
        return num.bit_length() - 1
    if num == 1 and den & (den - 1) == 0:
        return -(den.bit_length() - 1)
    return None


@dataclass(frozen=True)
class PLMap:
    breakpoints: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if len(pts) < 2 or pts[0] != (0, 0) or pts[-1] != (1, 1):
            raise PLMapError("a PL map of [0,1] must start at (0,0) and end at (1,1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x1 > x0 and y1 > y0):
                raise PLMapError(f"breakpoints not strictly increasing at ({x1}, {y1})")
            if _log2_power((y1 - y0) / (x1 - x0)) is None:
                raise PLMapError(f"slope {(y1 - y0) / (x1 - x0)} on [{x0}, {x1}] is not a power of 2")
        for x, y in pts:
            if not (_is_dyadic(x) and _is_dyadic(y)):
                raise PLMapError(f"breakpoint ({x}, {y}) is not dyadic")

    def slopes(self) -> list[Fraction]:
        return list(self._slopes)

    @cached_property
    def _slopes(self) -> tuple[Fraction, ...]:
        pts = self.breakpoints
        return tuple((y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(pts, pts[1:]))

    @cached_property
    def _xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.breakpoints)

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)


def _simplify(points: Sequence[Point]) -> tuple[Point, ...]:
    """Drop breakpoints where the slope does not change."""
    out = [points[0]]
    for p, q in zip(points[1:], points[2:]):
        a = out[-1]
        if (p[1] - a[1]) * (q[0] - p[0]) != (q[1] - p[1]) * (p[0] - a[0]):
            out.append(p)
    out.append(points[-1])
    return tuple(out)


def to_pl_map(g: Element) -> PLMap:
    """Send the i-th leaf interval of the source tree affinely onto the i-th of the target tree."""
    pts = [(Fraction(0), Fraction(0))]
    for u, v in g.branches:
        pts.append((leaf_interval(u)[1], leaf_interval(v)[1]))
    return PLMap(_simplify(pts))


def evaluate(m: PLMap | Element, x) -> Fraction:
    if isinstance(m, Element):
        m = to_pl_map(m)
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"{x} is outside [0, 1]")
    i = max(bisect_left(m._xs, x), 1) - 1
    x0, y0 = m.breakpoints[i]
    return y0 + (x - x0) * m._slopes[i]


def compose(first: PLMap, second: PLMap) -> PLMap:
    """``second`` after ``first`` (the map for ``first_element * second_element``)."""
    xs = {x for x, _ in first.breakpoints}
    inv = inverse_map(first)
    xs |= {evaluate(inv, x) for x, _ in second.breakpoints}
    return PLMap(_simplify([(x, evaluate(second, evaluate(first, x))) for x in sorted(xs)]))


def inverse_map(m: PLMap) -> PLMap:
    return PLMap(tuple((y, x) for x, y in m.breakpoints))


def from_pl_map(m: PLMap) -> Element:
    """Recover the element: subdivide [0,1] dyadically until each piece maps affinely onto a dyadic interval."""
    pts = m.breakpoints
    interior = [x for x, _ in pts[1:-1]]
    branches = []
    stack = [""]
    while stack:
        u = stack.pop()
        a, b = leaf_interval(u)
        if not any(a < x < b for x in interior):
            fa, fb = evaluate(m, a), evaluate(m, b)
            width = fb - fa
            k = _log2_power(width)
            if k is not None and k <= 0 and (fa / width).denominator == 1:
                n = -k
                branches.append((u, format(int(fa / width), f"0{n}b") if n else ""))
                continue
        stack.append(u + "1")
        stack.append(u + "0")
    return Element.from_branches(branches)


def fixes(g: Element, r) -> bool:
    return evaluate(to_pl_map(g), Fraction(r)) == Fraction(r)


def fixes_interval(g: Element, lo, hi) -> bool:
    """True iff ``g`` is the identity on the whole closed interval ``[lo, hi]``."""
    m = to_pl_map(g)
    lo, hi = Fraction(lo), Fraction(hi)
    if evaluate(m, lo) != lo or evaluate(m, hi) != hi:
        return False
    return not any(lo < x < hi for x, _ in m.breakpoints)


# -- membership ----------------------------------------------------------------


def endpoint_slopes(g: Element) -> tuple[Fraction, Fraction]:
    s = to_pl_map(g).slopes()
    return s[0], s[-1]


def is_in_commutator(g: Element) -> bool:
    """F' is exactly the set of elements that are the identity near 0 and near 1."""
    left, right = endpoint_slopes(g)
    return left == 1 and right == 1


def is_in_rectangular(g: Element, a: int, b: int) -> bool:
    if a < 1 or b < 1:
        raise ValueError("rectangular subgroup parameters must be positive")
    left, right = endpoint_slopes(g)
    return _log2_power(left) % a == 0 and _log2_power(right) % b == 0


# -- binary expansions ---------------------------------------------------------


@dataclass(frozen=True)
class BinaryExpansion:
    """``0.<preperiod>(<period>)``; an empty period means the digits stop (0 tail).

    ``truncated`` marks a finite-precision digit string whose tail is unknown.
    """

    preperiod: str
    period: str = ""
    truncated: bool = False

    def __post_init__(self):
        if set(self.preperiod + self.period) - {"0", "1"}:
            raise ValueError("binary digits must be 0 or 1")
        if self.truncated and self.period:
            raise ValueError("a truncated expansion has no period")

    @classmethod
    def of(cls, r) -> BinaryExpansion:
        """Eventually periodic expansion of a rational in [0, 1) by long division."""
        r = Fraction(r)
        if not 0 <= r < 1:
            raise ValueError(f"{r} is outside [0, 1)")
        seen: dict[Fraction, int] = {}
        bits = []
        while r and r not in seen:
            seen[r] = len(bits)
            r *= 2
            if r >= 1:
                bits.append("1")
                r -= 1
            else:
                bits.append("0")
        s = "".join(bits)
        if not r:
            return cls(s)
        k = seen[r]
        return cls(s[:k], s[k:])

    def digit(self, i: int) -> str:
        if i < len(self.preperiod):
            return self.preperiod[i]
        if self.truncated:
            raise InsufficientPrecision(
                f"digit {i + 1} requested but only {len(self.preperiod)} are known")
        if not self.period:
            return "0"
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def digits(self, k: int) -> str:
        return "".join(self.digit(i) for i in range(k))

    def value(self) -> Fraction:
        """Exact value; for truncated strings, the left end of the possible range."""
        pre = Fraction(int(self.preperiod, 2), 2 ** len(self.preperiod)) if self.preperiod else Fraction(0)
        if not self.period or self.truncated:
            return pre
        p = len(self.period)
        tail = Fraction(int(self.period, 2), 2 ** p - 1)
        return pre + tail / 2 ** len(self.preperiod)

    def interval(self) -> tuple[Fraction, Fraction]:
        """Set of reals consistent with the digits: a point, or a dyadic interval if truncated."""
        if self.truncated:
            return leaf_interval(self.preperiod)
        v = self.value()
        return v, v

    def __str__(self) -> str:
        s = "0." + (self.preperiod or ("" if self.period else "0"))
        if self.period:
            s += f"({self.period})"
        if self.truncated:
            s += "..."
        return s


def digits(r, k: int) -> str:
    """First ``k`` binary digits of a rational in [0, 1), computed by exact doubling."""
    return BinaryExpansion.of(r).digits(k)


def first_zero_after(e: BinaryExpansion, pos: int) -> int:
    """Index of the first ``0`` digit at or after ``pos``."""
    if not e.truncated and e.period and "0" not in e.period:
        start = len(e.preperiod)
        tail = [i for i in range(pos, start) if e.preperiod[i] == "0"]
        if tail:
            return tail[0]
        raise ValueError(f"{e} has no 0 digit at or after position {pos}")
    i = pos
    while True:
        if e.digit(i) == "0":
            return i
        i += 1


# -- literals ------------------------------------------------------------------

_RATIONAL = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_BINARY = re.compile(r"\s*0?\.([01]*)(?:\(([01]+)\))?(\.\.\.)?\s*$")

Number = Union[Fraction, BinaryExpansion]


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise ParseError(f"not a rational literal: {text!r}", 0)
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError("zero denominator", text.index("/") + 1)
    return Fraction(int(m.group(1)), den)


def parse_binary(text: str) -> BinaryExpansion:
    """``0.0111``, ``0.0111(01)`` (periodic) or ``0.0111...`` (finite precision)."""
    m = _BINARY.match(text)
    if not m:
        raise ParseError(f"not a binary literal: {text!r}", 0)
    if m.group(2) and m.group(3):
        raise ParseError("a periodic literal cannot also be truncated", m.start(3))
    return BinaryExpansion(m.group(1), m.group(2) or "", truncated=bool(m.group(3)))


def parse_number(text: str) -> Number:
    """A point of [0, 1]: a rational ``p/q`` or a binary literal."""
    if "." in text:
        e = parse_binary(text)
        return e if e.truncated else e.value()
    return parse_rational(text)
