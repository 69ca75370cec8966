"""Acceptance criteria, one test per criterion, each with its own time limit.

Run under pytest (a summary section lists one PASS/FAIL line per criterion)
or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_RESULTS  # noqa: E402
from thompson_links import jones  # noqa: E402
from thompson_links.cli import TREFOIL_TEXT  # noqa: E402
from thompson_links.analysis import (compose, evaluate, fixes, fixes_interval, is_in_commutator,  # noqa: E402
                                     parse_number, to_pl_map)
from thompson_links.group import (AttachError, Element, attach, generator, parse_element,  # noqa: E402
                                  parse_word, wrap)
from thompson_links.laurent import DELTA, LaurentPoly  # noqa: E402
from thompson_links.stabilizer import (BASE_WORDS, MIRROR_WORDS, alexander_element,  # noqa: E402
                                       basic_table, stab_half_join)
from thompson_links.trees import all_pairs, leaf_interval, random_pair  # noqa: E402

SEED = 20261019
x0, x1, x2 = generator(0), generator(1), generator(2)
TREFOIL = parse_element(TREFOIL_TEXT)
LEFT_TREFOIL_F = LaurentPoly({-16: -1, -12: 1, -4: 1})


class CriterionFailed(AssertionError):
    pass


def check(cond: bool, message: str) -> None:
    if not cond:
        raise CriterionFailed(message)


def run_criterion(number: int, title: str, limit: float, body) -> str:
    """Run ``body``, time it against ``limit`` seconds and record one summary line."""
    start = time.perf_counter()
    error = None
    try:
        detail = body() or ""
    except CriterionFailed as exc:
        error, detail = exc, str(exc)
    elapsed = time.perf_counter() - start
    if error is None and elapsed >= limit:
        error = CriterionFailed(f"took {elapsed:.1f} s, limit {limit:g} s")
        detail = str(error)
    status = "PASS" if error is None else "FAIL"
    line = f"[{status}] criterion {number:2d} {title}: {elapsed:.2f} s (limit {limit:g} s) {detail}".rstrip()
    ACCEPTANCE_RESULTS[number] = line
    print(line)
    if error is not None:
        raise error
    return line


def _random_element(rng: random.Random, lo: int, hi: int, max_depth: int | None = None) -> Element:
    return Element(random_pair(rng.randint(lo, hi), rng, max_depth))


def _nontrivial(rng: random.Random, lo: int, hi: int) -> Element:
    while True:
        g = _random_element(rng, lo, hi)
        if not g.is_identity():
            return g


# -- 1 -----------------------------------------------------------------------------


def criterion_1():
    rng = random.Random(SEED + 1)
    e = Element.identity()
    for _ in range(1000):
        a, b, c = (_random_element(rng, 1, 12, max_depth=6) for _ in range(3))
        check((a * b) * c == a * (b * c), f"associativity fails for {a}, {b}, {c}")
        check((a * a.inverse()).is_identity() and (a.inverse() * a).is_identity(), f"inverse fails for {a}")
        check(a * e == a and e * a == a, f"identity law fails for {a}")
        p = random_pair(rng.randint(1, 12), rng, 6)
        r = p.reduce()
        check(r.reduce() == r and r.is_reduced(), f"reduce is not idempotent on {p}")
        q = p.insert_caret(rng.randrange(p.leaves))
        check(q.reduce() == r, f"caret insertion changes the reduced form of {p}")
    return "1000 triples"


# -- 2 -----------------------------------------------------------------------------


def criterion_2():
    rng = random.Random(SEED + 2)
    for _ in range(500):
        a, b = _random_element(rng, 1, 10), _random_element(rng, 1, 10)
        ma, mb, mab = to_pl_map(a), to_pl_map(b), to_pl_map(a * b)
        m = compose(ma, mb)
        check(mab == m, f"PL map of {a}*{b} differs from the composite")
        for _ in range(50):
            q = rng.randint(1, 10 ** 6)
            x = Fraction(rng.randint(0, q), q)
            check(evaluate(mab, x) == evaluate(m, x) == evaluate(mb, evaluate(ma, x)),
                  f"pointwise mismatch at {x}")
    return "500 pairs x 50 points"


# -- 3 -----------------------------------------------------------------------------


def criterion_3():
    check(jones.fingerprint(Element.identity()) == jones.UNKNOT, "identity is not the unknot")
    fx = jones.fingerprint(x0)
    check(fx == jones.UNKNOT and fx.components == 1, "x0 is not the unknot")
    f3 = jones.fingerprint(x0 ** 3)
    check(f3.components == 2 and f3.determinant == 0, f"x0^3 gave {f3}")
    check(jones.is_unlink_fingerprint(f3), "x0^3 is not the two-component unlink")
    for k in range(4, 9):
        a, b = jones.fingerprint(x0 ** k), jones.fingerprint(x0 ** (k - 3))
        check(a.kauffman_f == b.kauffman_f, f"kauffman_f of x0^{k} differs from x0^{k - 3}")
        check(a == b, f"fingerprint of x0^{k} differs from x0^{k - 3}")
    return "k = 4..8"


# -- 4 -----------------------------------------------------------------------------


def criterion_4():
    rng = random.Random(SEED + 4)
    for _ in range(200):
        p = random_pair(rng.randint(1, 9), rng).reduce()
        q = p.insert_caret(rng.randrange(p.leaves))
        a, b = jones.fingerprint(p), jones.fingerprint(q)
        check(b.components == a.components + 1, f"components did not grow by one for {p}")
        check(all(n == m * pr for (pr, n), (_, m) in zip(b.colorings, a.colorings)),
              f"colorings not multiplied by p for {p}")
        check(b.kauffman_f == a.kauffman_f * DELTA, f"bracket not multiplied by delta for {p}")
        check(b.determinant == 0, f"determinant not 0 after insertion for {p}")
    return "200 insertions"


# -- 5 -----------------------------------------------------------------------------


def criterion_5():
    rng = random.Random(SEED + 5)
    for _ in range(200):
        g, h = _nontrivial(rng, 2, 7), _nontrivial(rng, 2, 7)
        i = rng.randrange(g.leaves)
        try:
            gh = attach(g, i, h)
        except AttachError as exc:
            raise CriterionFailed(f"attach produced a reducible pair: {exc}")
        a, b, c = jones.fingerprint(g), jones.fingerprint(h), jones.fingerprint(gh)
        check(c.components == a.components + b.components - 1, f"components for {g}, {i}, {h}")
        check(c.determinant == a.determinant * b.determinant, f"determinant for {g}, {i}, {h}")
        check(all(nc * p == na * nb for (p, nc), (_, na), (_, nb) in zip(c.colorings, a.colorings, b.colorings)),
              f"colorings for {g}, {i}, {h}")
        check(c.kauffman_f == a.kauffman_f * b.kauffman_f, f"kauffman_f for {g}, {i}, {h}")
    return "200 triples"


# -- 6 -----------------------------------------------------------------------------


def criterion_6():
    rng = random.Random(SEED + 6)
    gs = [_random_element(rng, 1, 8) for _ in range(100)]
    bad = {}
    for code in ("00", "01", "10", "11"):
        for g in gs:
            if jones.fingerprint(wrap(code, g), cap=None) != jones.fingerprint(g, cap=None):
                bad[code] = bad.get(code, 0) + 1
    summary = ", ".join(f"{code}: {bad.get(code, 0)}/100 differ" for code in ("00", "01", "10", "11"))
    check(not bad, summary + " (a branch 01->01 fixes 1/2, which forces a split link)")
    return summary


# -- 7 -----------------------------------------------------------------------------


def _tiling(words, lo, hi) -> bool:
    ivs = sorted(leaf_interval(u) for u in words)
    return ivs[0][0] == lo and ivs[-1][1] == hi and all(a[1] == b[0] for a, b in zip(ivs, ivs[1:]))


def criterion_7():
    basic_table.cache_clear()
    table = basic_table()       # every record is checked while the table is built
    check(len(table) == 14, f"{len(table)} records")
    for u, rec in table.items():
        g, v = rec.element, rec.attach_branch.source
        check(not g.is_identity(), f"{u}: identity")
        check((u, u) in g.branches, f"{u}: no u->u branch")
        check(jones.fingerprint(g, cap=None) == jones.UNKNOT, f"{u}: not the unknot")
        (a, b), (c, d) = leaf_interval(u), leaf_interval(v)
        check(g.branches[rec.attach_branch.index] == (v, v) and (d <= a or b <= c), f"{u}: attach branch")
    check(_tiling(BASE_WORDS, 0, Fraction(7, 16)), "base intervals do not tile [0, 7/16]")
    check(_tiling(MIRROR_WORDS, Fraction(9, 16), 1), "mirror intervals do not tile [9/16, 1]")
    return "14 records"


# -- 8 -----------------------------------------------------------------------------

THEOREM_POINTS = ["1/3", "1/8", "7/16", "15/32", "5/11", "117/256", "9/16", "2/3", "0.0111(01)"]


def determinant_five_knot(leaves: int):
    """First reduced pair (in enumeration order) whose link is a knot of determinant 5."""
    for p in all_pairs(leaves):
        d = jones.to_diagram(p)
        if jones.determinant(d) == 5 and jones.components(d) == 1:
            return Element(p)
    return None


def criterion_8():
    target5 = determinant_five_knot(6)
    note = "6-leaf determinant-5 element"
    if target5 is None:
        target5 = determinant_five_knot(7)
        note = "no 6-leaf pair has determinant 5; used the first 7-leaf one"
    check(target5 is not None, "no determinant-5 knot found")
    targets = {"trefoil": TREFOIL, "x0^3": x0 ** 3, "det5": target5}
    for text in THEOREM_POINTS:
        r = parse_number(text)
        for name, g in targets.items():
            h = alexander_element(r, g)
            check(fixes(h, r), f"{name} at r = {text} does not fix r")
            check(not h.is_identity(), f"{name} at r = {text} is the identity")
            check(jones.fingerprint(h, cap=None) == jones.fingerprint(g, cap=None),
                  f"{name} at r = {text}: fingerprint mismatch")
    return f"{len(THEOREM_POINTS)} points x 3 targets ({note})"


# -- 9 -----------------------------------------------------------------------------


def criterion_9():
    rng = random.Random(SEED + 9)
    half = Fraction(1, 2)
    for _ in range(100):
        a, b = _nontrivial(rng, 1, 7), _random_element(rng, 1, 7)
        if rng.random() < 0.5:
            a, b = b, a
        h = stab_half_join(a, b)
        fp = jones.fingerprint(h, cap=None)
        check(fixes(h, half), f"join of {a}, {b} does not fix 1/2")
        check(fp.determinant == 0 and fp.components >= 2, f"join of {a}, {b} is not split")
        for g, other in ((a, b), (b, a)):
            if other.is_identity():
                for side in (stab_half_join(g, other), stab_half_join(other, g)):
                    check(jones.fingerprint(side, cap=None) == jones.fingerprint(g, cap=None).with_split_unknot(),
                          f"one-sided join of {g} is not L(g) plus an unknot")
    return "100 joins"


# -- 10 ----------------------------------------------------------------------------


def criterion_10():
    found = []
    for p in all_pairs(5):
        fp = jones.fingerprint(p)
        if (fp.components, fp.determinant, fp.coloring(3)) == (1, 3, 9) \
                and fp.kauffman_f in (LEFT_TREFOIL_F, LEFT_TREFOIL_F.mirror()):
            found.append(p)
    check(bool(found), "no trefoil among 5-leaf pairs")
    return f"{len(found)} trefoil pair(s), first {found[0]}"


# -- 11 ----------------------------------------------------------------------------


def zwrz_words(rng: random.Random, count: int):
    """Random normal forms a_{i1}^{e1} ... a_{-j1}^{f1} ... t^m with a = x1^2 x2^-1 x1^-1, t = x0."""
    a, t = parse_word("x1^2 x2^-1 x1^-1"), x0

    def a_(n):
        return t ** -n * a * t ** n

    def exps(k):
        return [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in range(k)]

    for _ in range(count):
        pos = sorted(rng.sample(range(0, 5), rng.randint(0, 3)))
        neg = sorted(rng.sample(range(1, 5), rng.randint(0, 2)))
        w = Element.identity()
        for i, e in zip(pos, exps(len(pos))):
            w = w * a_(i) ** e
        for j, f in zip(neg, exps(len(neg))):
            w = w * a_(-j) ** f
        yield w * t ** rng.randint(-3, 3)


def criterion_11():
    a = parse_word("x1^2 x2^-1 x1^-1")
    check(a == x1 ** 2 * x2.inverse() * x1.inverse(), "parse_word mismatch")
    words = [a] + list(zwrz_words(random.Random(SEED + 11), 60))
    for w in words:
        fp = jones.fingerprint(w, cap=None)
        check(jones.is_unlink_fingerprint(fp) and fp.determinant in (0, 1), f"{w} is not an unlink")
    u, v = x0 * x1.inverse(), x0.inverse() * x1 * x0
    c = x0 ** -2 * x1 * x0 ** 2
    for s in (v, c):
        rel = u.inverse() * s.inverse() * u * s
        check(is_in_commutator(rel), "a defining relator is not in the commutator subgroup")
    check(not is_in_commutator(x0), "x0 accepted as a commutator")
    check(fixes_interval(a, 0, Fraction(1, 2)), "a is not the identity on [0, 1/2]")
    return f"{len(words)} words"


CRITERIA = [
    (1, "group laws", 10, criterion_1),
    (2, "PL homomorphism", 10, criterion_2),
    (3, "Jones values", 30, criterion_3),
    (4, "caret insertion", 60, criterion_4),
    (5, "connected sum", 60, criterion_5),
    (6, "wrap invariance", 60, criterion_6),
    (7, "basic table", 5, criterion_7),
    (8, "stabilizer theorem", 120, criterion_8),
    (9, "Stab(1/2) obstruction", 60, criterion_9),
    (10, "trefoil at 5 leaves", 30, criterion_10),
    (11, "unlink corpus", 60, criterion_11),
]


@pytest.mark.parametrize("number,title,limit,body", CRITERIA, ids=[f"criterion_{n}" for n, *_ in CRITERIA])
def test_criterion(number, title, limit, body):
    run_criterion(number, title, limit, body)


def main() -> int:
    failed = 0
    for number, title, limit, body in CRITERIA:
        try:
            run_criterion(number, title, limit, body)
        except CriterionFailed:
            failed += 1
    print(f"{len(CRITERIA) - failed}/{len(CRITERIA)} criteria passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
