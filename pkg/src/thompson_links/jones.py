"""Jones's construction: tree pair -> plane graph -> link diagram, and link invariants.

Drawing convention (only the cyclic orders matter): leaves sit on a
horizontal line, the source tree hangs above it, the target tree is
reflected below it.  The split vertex of either tree for the gap between
leaves ``i-1`` and ``i`` sits directly over (under) that gap and is joined
to its partner in the other tree by a vertical *gap edge*; the two roots are
joined around the outside by the *outer edge*.  Counterclockwise edge order:

* source-tree vertex: parent, left child, gap, right child
* target-tree vertex: parent, right child, gap, left child

so opposite slots pair parent/outer with gap ("vertical strand") and left
with right ("horizontal strand").  The vertical strand goes over at every
vertex.  The vertical strands of a common caret and its gap edge then lie
on top at both of their crossings, so the caret contributes a split unknot
(a Reidemeister-II clasp).  Alternating the sense between the two trees
would make that pair a Hopf link instead.  ``mirror=True`` swaps every
crossing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .group import Element
from .laurent import DELTA, ONE, LaurentPoly
from .trees import TreePair, leaf_words

COLORING_PRIMES = (2, 3, 5, 7)
DEFAULT_BRACKET_CAP = 24

PLUS_SLOTS = ("parent", "left", "gap", "right")
MINUS_SLOTS = ("parent", "right", "gap", "left")


class CrossingCapExceeded(RuntimeError):
    pass


# -- plane graph ---------------------------------------------------------------


class GraphEdge(NamedTuple):
    a: tuple
    b: tuple
    kind: str  # "tree+", "tree-", "gap" or "outer"


@dataclass
class DiagramGraph:
    """The 4-valent plane graph with leaves kept as 2-valent vertices.

    Vertices are ``("+", word)`` / ``("-", word)`` for internal nodes and
    ``("leaf", j)`` for leaves.  Edge ends are ``(vertex, role)``.
    """

    leaves: int
    vertices: list[tuple]
    edges: list[GraphEdge]

    def degree(self, v: tuple) -> int:
        return sum((e.a[0] == v) + (e.b[0] == v) for e in self.edges)

    def split_vertex(self, side: str, gap: int) -> tuple:
        return next(v for v in self.vertices if v[0] == side and self._gap_of[v] == gap)

    _gap_of: dict = field(default_factory=dict, repr=False)


def _lca(a: str, b: str) -> str:
    k = 0
    while k < min(len(a), len(b)) and a[k] == b[k]:
        k += 1
    return a[:k]


def build_graph(p: TreePair) -> DiagramGraph:
    up, down = leaf_words(p.plus), leaf_words(p.minus)
    n = len(up)
    if n == 1:
        leaf = ("leaf", 0)
        return DiagramGraph(1, [leaf], [GraphEdge((leaf, "up"), (leaf, "down"), "outer")])

    vertices: list[tuple] = []
    gap_of: dict[tuple, int] = {}
    for side, words in (("+", up), ("-", down)):
        for i in range(1, n):
            v = (side, _lca(words[i - 1], words[i]))
            vertices.append(v)
            gap_of[v] = i
    vertices += [("leaf", j) for j in range(n)]

    edges: list[GraphEdge] = []
    for side, words in (("+", up), ("-", down)):
        leaf_of = {w: j for j, w in enumerate(words)}
        internal = {v[1] for v in vertices if v[0] == side}
        for w in sorted(internal):
            for bit, role in (("0", "left"), ("1", "right")):
                child = w + bit
                end = ((side, child), "parent") if child in internal else (("leaf", leaf_of[child]), "up" if side == "+" else "down")
                edges.append(GraphEdge(((side, w), role), end, "tree" + side))
    for i in range(1, n):
        edges.append(GraphEdge((("+", _lca(up[i - 1], up[i])), "gap"),
                               (("-", _lca(down[i - 1], down[i])), "gap"), "gap"))
    edges.append(GraphEdge((("+", ""), "parent"), (("-", ""), "parent"), "outer"))
    g = DiagramGraph(n, vertices, edges)
    g._gap_of = gap_of
    return g


# -- link diagrams -------------------------------------------------------------


class Crossing(NamedTuple):
    """Four edge ids in counterclockwise order; ``over`` is 0 (slots 0,2) or 1 (slots 1,3)."""

    edges: tuple[int, int, int, int]
    over: int
    label: str = ""


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Crossing, ...]
    free_loops: int = 0

    def __post_init__(self):
        seen: dict[int, int] = {}
        for c in self.crossings:
            for e in c.edges:
                seen[e] = seen.get(e, 0) + 1
        bad = [e for e, k in seen.items() if k != 2]
        if bad:
            raise ValueError(f"edges {bad} do not occur exactly twice")

    @property
    def ends(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {}
        for ci, c in enumerate(self.crossings):
            for k, e in enumerate(c.edges):
                out.setdefault(e, []).append((ci, k))
        return out

    def mirror(self) -> LinkDiagram:
        return LinkDiagram(tuple(c._replace(over=1 - c.over) for c in self.crossings), self.free_loops)

    def __len__(self) -> int:
        return len(self.crossings)


def to_diagram(p: TreePair | Element, mirror: bool = False) -> LinkDiagram:
    if isinstance(p, Element):
        p = p.pair
    g = build_graph(p)
    if g.leaves == 1:
        return LinkDiagram((), free_loops=1)

    index = {v: i for i, v in enumerate(sorted((v for v in g.vertices if v[0] != "leaf"),
                                               key=lambda v: (g._gap_of[v], v[0] == "-")))}
    slots: dict[tuple, list[int]] = {v: [0, 0, 0, 0] for v in index}
    leaf_half: dict[int, dict[str, tuple]] = {}
    eid = 0

    def place(end: tuple, e: int) -> None:
        v, role = end
        order = PLUS_SLOTS if v[0] == "+" else MINUS_SLOTS
        slots[v][order.index(role)] = e

    for edge in g.edges:
        leaf_end = next((end for end in (edge.a, edge.b) if end[0][0] == "leaf"), None)
        if leaf_end is not None:
            other = edge.b if leaf_end is edge.a else edge.a
            leaf_half.setdefault(leaf_end[0][1], {})[leaf_end[1]] = other
            continue
        eid += 1
        place(edge.a, eid)
        place(edge.b, eid)
    for j in sorted(leaf_half):
        eid += 1
        place(leaf_half[j]["up"], eid)
        place(leaf_half[j]["down"], eid)

    crossings = []
    for v in sorted(index, key=index.get):
        over = 1 if mirror else 0
        crossings.append(Crossing(tuple(slots[v]), over, f"{v[0]}{g._gap_of[v]}"))
    return LinkDiagram(tuple(crossings))


def _traverse(d: LinkDiagram) -> list[list[tuple[int, int, int]]]:
    """Closed strands as lists of (edge, crossing entered, slot entered)."""
    ends = d.ends
    visited: set[int] = set()
    comps = []
    for start in sorted(ends):
        if start in visited:
            continue
        path = []
        e, (c, k) = start, ends[start][1]
        while e not in visited:
            visited.add(e)
            path.append((e, c, k))
            out = (k + 2) % 4
            e = d.crossings[c].edges[out]
            a, b = ends[e]
            # leave through (c, out); arrive at the edge's other end
            c, k = b if a == (c, out) else a
        comps.append(path)
    return comps


def components(d: LinkDiagram) -> int:
    return len(_traverse(d)) + d.free_loops


def _orientation(d: LinkDiagram):
    """Component id per edge and the set of (crossing, slot) where a strand enters."""
    comp_of: dict[int, int] = {}
    entering: set[tuple[int, int]] = set()
    for ci, path in enumerate(_traverse(d)):
        for e, c, k in path:
            comp_of[e] = ci
            entering.add((c, k))
    return comp_of, entering


def crossing_signs(d: LinkDiagram) -> list[int]:
    """+1/-1 per crossing under the orientation chosen by :func:`_traverse`."""
    _, entering = _orientation(d)
    signs = []
    for ci, c in enumerate(d.crossings):
        under = 1 - c.over
        u_in = under if (ci, under) in entering else under + 2
        o_in = c.over if (ci, c.over) in entering else c.over + 2
        signs.append(-1 if o_in == (u_in + 1) % 4 else 1)
    return signs


def self_writhe(d: LinkDiagram) -> int:
    """Sum of signs over crossings of a component with itself (independent of orientations)."""
    comp_of, _ = _orientation(d)
    total = 0
    for c, s in zip(d.crossings, crossing_signs(d)):
        if comp_of[c.edges[0]] == comp_of[c.edges[1]]:
            total += s
    return total


def writhe(d: LinkDiagram) -> int:
    return sum(crossing_signs(d))


# -- Fox colorings and determinant ---------------------------------------------


def arcs(d: LinkDiagram) -> tuple[dict[int, int], int]:
    """Map edge -> arc id, and the number of arcs (free loops count as arcs)."""
    parent = {e: e for e in d.ends}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in d.crossings:
        a, b = find(c.edges[c.over]), find(c.edges[c.over + 2])
        if a != b:
            parent[a] = b
    roots = sorted({find(e) for e in parent})
    ident = {r: i for i, r in enumerate(roots)}
    return {e: ident[find(e)] for e in parent}, len(roots) + d.free_loops


def coloring_matrix(d: LinkDiagram) -> tuple[list[list[int]], int]:
    arc_of, n_arcs = arcs(d)
    rows = []
    for c in d.crossings:
        row = [0] * n_arcs
        row[arc_of[c.edges[c.over]]] += 2
        row[arc_of[c.edges[1 - c.over]]] -= 1
        row[arc_of[c.edges[3 - c.over]]] -= 1
        rows.append(row)
    return rows, n_arcs


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def colorings(d: LinkDiagram, p: int) -> int:
    """Number of Fox p-colorings (constant ones included)."""
    rows, n_arcs = coloring_matrix(d)
    return p ** (n_arcs - rank_mod_p(rows, p))


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def determinant(d: LinkDiagram) -> int:
    rows, n_arcs = coloring_matrix(d)
    if not rows:
        return 1 if n_arcs == 1 else 0
    if n_arcs != len(rows):
        # some component never passes under: it lifts off, so the link splits
        return 0
    return abs(bareiss_det([r[1:] for r in rows[1:]]))


# -- Kauffman bracket ----------------------------------------------------------


def _a_smoothing(c: Crossing) -> tuple[tuple[int, int], tuple[int, int]]:
    """Slot pairs joined by the A-smoothing: each under slot with its counterclockwise successor."""
    u = 1 - c.over
    return (u, u + 1), (u + 2, (u + 3) % 4)


def _b_smoothing(c: Crossing) -> tuple[tuple[int, int], tuple[int, int]]:
    u = 1 - c.over
    return (u, (u + 3) % 4), (u + 1, u + 2)


def _crossing_order(d: LinkDiagram) -> list[int]:
    """Greedy order keeping the frontier of half-processed edges small."""
    n = len(d.crossings)
    done: set[int] = set()
    open_edges: dict[int, int] = {}
    order = []
    while len(order) < n:
        best = max((ci for ci in range(n) if ci not in done),
                   key=lambda ci: (sum(open_edges.get(e, 0) for e in d.crossings[ci].edges), -ci))
        done.add(best)
        order.append(best)
        for e in d.crossings[best].edges:
            open_edges[e] = open_edges.get(e, 0) + 1
            if open_edges[e] == 2:
                del open_edges[e]
    return order


def _join(partner: dict[int, int], x: int, y: int) -> int:
    """Add a smoothing arc between the current ends of edges x and y; return loops closed."""
    if x == y:
        return 1
    px, py = partner.pop(x, None), partner.pop(y, None)
    if px == y:
        return 1
    left = x if px is None else px
    right = y if py is None else py
    partner[left] = right
    partner[right] = left
    return 0


def kauffman_bracket(d: LinkDiagram, cap: int | None = DEFAULT_BRACKET_CAP) -> LaurentPoly:
    """Bracket with <unknot> = 1 and delta = -A^2 - A^-2 per extra loop.

    The state sum is evaluated crossing by crossing, keeping one Laurent
    polynomial per (frontier pairing, loop count) so that it never
    enumerates all 2^c states explicitly.
    """
    if cap is not None and len(d.crossings) > cap:
        raise CrossingCapExceeded(f"{len(d.crossings)} crossings exceed the bracket cap {cap}")
    states: dict[tuple, dict[int, int]] = {((), 0): {0: 1}}
    for ci in _crossing_order(d):
        c = d.crossings[ci]
        nxt: dict[tuple, dict[int, int]] = {}
        for (pairing, loops), poly in states.items():
            for shift, arcs_ in ((1, _a_smoothing(c)), (-1, _b_smoothing(c))):
                partner = {}
                for a, b in pairing:
                    partner[a] = b
                    partner[b] = a
                closed = loops
                for s, t in arcs_:
                    closed += _join(partner, c.edges[s], c.edges[t])
                key = (tuple(sorted((a, b) for a, b in partner.items() if a < b)), closed)
                bucket = nxt.setdefault(key, {})
                for e, coef in poly.items():
                    bucket[e + shift] = bucket.get(e + shift, 0) + coef
        states = nxt
    total = LaurentPoly()
    for (_, loops), poly in states.items():
        total = total + LaurentPoly(poly) * DELTA ** (loops + d.free_loops - 1)
    return total


def kauffman_f(d: LinkDiagram, cap: int | None = DEFAULT_BRACKET_CAP) -> LaurentPoly:
    """(-A^3)^(-w) <D> with w the self-writhe, so the result ignores component orientations."""
    w = self_writhe(d)
    return LaurentPoly({-3 * w: (-1) ** (w % 2)}) * kauffman_bracket(d, cap)


# -- fingerprints --------------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    components: int
    determinant: int
    colorings: tuple[tuple[int, int], ...]
    kauffman_f: LaurentPoly

    def coloring(self, p: int) -> int:
        return dict(self.colorings)[p]

    def as_dict(self) -> dict:
        return {
            "components": self.components,
            "determinant": self.determinant,
            "colorings": {str(p): n for p, n in self.colorings},
            "kauffman_f": str(self.kauffman_f),
        }

    def with_split_unknot(self) -> Fingerprint:
        """The fingerprint of this link plus one unlinked unknot."""
        return Fingerprint(self.components + 1, 0,
                           tuple((p, n * p) for p, n in self.colorings),
                           self.kauffman_f * DELTA)

    def connected_sum(self, other: Fingerprint) -> Fingerprint:
        cols = dict(other.colorings)
        return Fingerprint(self.components + other.components - 1,
                           self.determinant * other.determinant,
                           tuple((p, n * cols[p] // p) for p, n in self.colorings),
                           self.kauffman_f * other.kauffman_f)


UNKNOT = Fingerprint(1, 1, tuple((p, p) for p in COLORING_PRIMES), ONE)


def fingerprint(d: LinkDiagram | TreePair | Element, cap: int | None = DEFAULT_BRACKET_CAP,
                mirror: bool = False) -> Fingerprint:
    if not isinstance(d, LinkDiagram):
        d = to_diagram(d, mirror=mirror)
    return Fingerprint(components(d), determinant(d),
                       tuple((p, colorings(d, p)) for p in COLORING_PRIMES),
                       kauffman_f(d, cap))


def is_unlink_fingerprint(fp: Fingerprint) -> bool:
    k = fp.components
    return (fp.determinant == (1 if k == 1 else 0)
            and all(n == p ** k for p, n in fp.colorings)
            and fp.kauffman_f == DELTA ** (k - 1))


# -- PD codes ------------------------------------------------------------------


def pd_code(d: LinkDiagram) -> list[tuple[int, int, int, int]]:
    """``X(a,b,c,d)``: start at the incoming under edge and go counterclockwise.

    Edges are renumbered 1, 2, ... consecutively along each component in
    its direction of travel.
    """
    label: dict[int, int] = {}
    entering: set[tuple[int, int]] = set()
    for path in _traverse(d):
        for e, c, k in path:
            label[e] = len(label) + 1
            entering.add((c, k))
    out = []
    for ci, c in enumerate(d.crossings):
        under = 1 - c.over
        start = under if (ci, under) in entering else under + 2
        out.append(tuple(label[c.edges[(start + i) % 4]] for i in range(4)))
    return out


def format_pd(d: LinkDiagram) -> str:
    return "\n".join(f"X({a},{b},{c},{e})" for a, b, c, e in pd_code(d))


_PD_X = re.compile(r"X\s*[\[(]\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*[\])]")


def parse_pd(text: str) -> LinkDiagram:
    """Read ``X(a,b,c,d)`` records (first slot is an under strand)."""
    crossings = [Crossing(tuple(int(x) for x in m.groups()), over=1) for m in _PD_X.finditer(text)]
    return LinkDiagram(tuple(crossings))


# -- SVG -----------------------------------------------------------------------


def _layout(p: TreePair):
    """Coordinates: leaf j at (j, 0), split vertex for gap i at (i - 1/2, +-height)."""
    g = build_graph(p)
    n = g.leaves
    pos: dict[tuple, tuple[float, float]] = {("leaf", j): (float(j), 0.0) for j in range(n)}
    for side, tree in (("+", p.plus), ("-", p.minus)):
        sign = 1 if side == "+" else -1

        def height(t) -> int:
            return 0 if not t else 1 + max(height(t[0]), height(t[1]))

        def walk(t, word):
            if t:
                pos[(side, word)] = (g._gap_of[(side, word)] - 0.5, sign * height(t))
                walk(t[0], word + "0")
                walk(t[1], word + "1")

        if n > 1:
            walk(tree, "")
    return g, pos


def render_svg(p: TreePair | Element, mirror: bool = False, scale: float = 40.0) -> str:
    """Draw the plane graph with crossing information (over strands drawn unbroken)."""
    if isinstance(p, Element):
        p = p.pair
    g, pos = _layout(p)
    n = g.leaves
    top = max((y for _, y in pos.values()), default=0) + 1
    bottom = min((y for _, y in pos.values()), default=0) - 1
    right = n - 0.5 + 1
    width, height_px = (right + 1.5) * scale, (top - bottom + 1) * scale

    def xy(pt):
        x, y = pt
        return (x + 1.0) * scale, (top + 0.5 - y) * scale

    def line(a, b, color="black", w=2.0, extra=""):
        (x1, y1), (x2, y2) = xy(a), xy(b)
        return (f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                f'stroke="{color}" stroke-width="{w}"{extra}/>')

    body = [f'<line x1="0" y1="{xy((0, 0))[1]:.1f}" x2="{width:.1f}" y2="{xy((0, 0))[1]:.1f}" '
            f'stroke="#bbb" stroke-dasharray="4 4"/>']
    segments = []  # (vertex-or-None, from, to, kind)
    for e in g.edges:
        a, b = pos[e.a[0]], pos[e.b[0]]
        if e.kind == "outer":
            if n == 1:
                c = (0.0, 0.0)
                pts = [c, (0.0, top - 0.5), (right, top - 0.5), (right, bottom + 0.5), (0.0, bottom + 0.5), c]
            else:
                pts = [a, (a[0], top - 0.5), (right, top - 0.5), (right, bottom + 0.5), (b[0], bottom + 0.5), b]
            for s, t in zip(pts, pts[1:]):
                segments.append((s, t))
        else:
            segments.append((a, b))
    body += [line(s, t) for s, t in segments]

    if n > 1:
        d = to_diagram(p, mirror=mirror)
        verts = sorted((v for v in g.vertices if v[0] != "leaf"), key=lambda v: (g._gap_of[v], v[0] == "-"))
        for v, c in zip(verts, d.crossings):
            order = PLUS_SLOTS if v[0] == "+" else MINUS_SLOTS
            over_roles = (order[c.over], order[c.over + 2])
            centre = pos[v]
            for e in g.edges:
                for end, far in ((e.a, e.b), (e.b, e.a)):
                    if end[0] == v and end[1] in over_roles:
                        if e.kind == "outer":
                            tgt = (centre[0], centre[1] + (0.5 if v[0] == "+" else -0.5))
                        else:
                            tgt = pos[far[0]]
                        mid = (centre[0] + 0.35 * (tgt[0] - centre[0]), centre[1] + 0.35 * (tgt[1] - centre[1]))
                        body.append(line(centre, mid, "white", 8.0))
                        body.append(line(centre, mid))
    for (kind, key), (x, y) in pos.items():
        if kind == "leaf":
            cx, cy = xy((x, y))
            body.append(f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="3" fill="#555"/>')

    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0f}" '
            f'height="{height_px:.0f}" viewBox="0 0 {width:.1f} {height_px:.1f}">\n'
            f'<title>{p}</title>\n' + "\n".join(body) + "\n</svg>\n")
