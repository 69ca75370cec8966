"""Integer Laurent polynomials in one variable ``A``."""

from __future__ import annotations

from typing import Iterable, Mapping


class LaurentPoly:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            acc[e] = acc.get(e, 0) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def monomial(cls, exp: int, coef: int = 1) -> LaurentPoly:
        return cls({exp: coef})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(self._terms + other._terms)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly((e, -c) for e, c in self._terms)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other) -> LaurentPoly:
        if isinstance(other, int):
            return LaurentPoly((e, c * other) for e, c in self._terms)
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            if len(self._terms) != 1 or abs(self._terms[0][1]) != 1:
                raise ValueError("only signed monomials can be inverted")
            (e, c), = self._terms
            return LaurentPoly({e * k: c ** -k})
        result = LaurentPoly({0: 1})
        for _ in range(k):
            result = result * self
        return result

    def mirror(self) -> LaurentPoly:
        """Substitute A -> 1/A."""
        return LaurentPoly((-e, c) for e, c in self._terms)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else f"{mag}*") + ("A" if e == 1 else f"A^{e}")
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


A = LaurentPoly({1: 1})
ONE = LaurentPoly({0: 1})
DELTA = LaurentPoly({2: -1, -2: -1})
