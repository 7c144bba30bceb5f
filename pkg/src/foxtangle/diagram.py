"""Combinatorial virtual tangle diagrams and their Fox colorings.

A diagram is stored as a set of edges ``0..E-1`` together with a list of
boundary slots and a list of crossings.  Every slot holds an edge id, and
every edge occupies exactly two slots in total (an edge is a segment of a
strand between two events).  A classical crossing names the two edges of the
over-strand and the two edges of the under-strand; a virtual crossing names
the two edges of each strand that passes through it.

Arcs are obtained by cutting the diagram only at under-crossings: the two
over-edges of a classical crossing lie on one arc, and so do the two edges of
either strand of a virtual crossing.  A coloring assigns a ring element to
each arc, subject to ``x + z = 2y`` at classical crossings, where ``y`` colors
the over-arc and ``x``, ``z`` the two under-edges.

Diagrams are usually built from the top down with :class:`StripBuilder`, or
from a :class:`TangleRecipe` via :func:`compile_recipe`.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    ArcMismatch,
    DiagramMismatch,
    InconsistentSeed,
    InvalidColoring,
    MalformedDiagram,
    MalformedRecipe,
    TrivialBoundary,
)
from .hurwitz import BraidWord, format_word, parse_word
from .linalg import kernel_basis, kernel_mod
from .vectors import BoundaryVector, RingSpec, Z, diff_gcd, is_trivial, two_adic_valuation

CLASSICAL = "classical"
VIRTUAL = "virtual"


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def labels(self) -> List[int]:
        """Dense component labels, numbered by smallest member."""
        out, seen = [], {}
        for x in range(len(self.parent)):
            r = self.find(x)
            out.append(seen.setdefault(r, len(seen)))
        return out


@dataclass(frozen=True)
class Crossing:
    """Classical: ``a`` is the over-strand, ``b`` the under-strand.  Virtual: two passing strands."""

    kind: str
    a: Tuple[int, int]
    b: Tuple[int, int]

    @classmethod
    def classical(cls, over, under) -> "Crossing":
        return cls(CLASSICAL, tuple(over), tuple(under))

    @classmethod
    def virtual(cls, pair1, pair2) -> "Crossing":
        return cls(VIRTUAL, tuple(pair1), tuple(pair2))

    @property
    def is_virtual(self) -> bool:
        return self.kind == VIRTUAL

    @property
    def over(self) -> Tuple[int, int]:
        return self.a

    @property
    def under(self) -> Tuple[int, int]:
        return self.b

    def slots(self) -> Tuple[int, int, int, int]:
        return self.a + self.b

    def to_json(self) -> dict:
        if self.is_virtual:
            return {"kind": VIRTUAL, "pair1": list(self.a), "pair2": list(self.b)}
        return {"kind": CLASSICAL, "over": list(self.a), "under": list(self.b)}

    @classmethod
    def from_json(cls, obj: dict) -> "Crossing":
        try:
            if obj["kind"] == CLASSICAL:
                return cls.classical(obj["over"], obj["under"])
            if obj["kind"] == VIRTUAL:
                return cls.virtual(obj["pair1"], obj["pair2"])
        except (KeyError, TypeError) as exc:
            raise MalformedDiagram(f"bad crossing record {obj!r}") from exc
        raise MalformedDiagram(f"unknown crossing kind {obj.get('kind')!r}")


@dataclass(frozen=True)
class Strings:
    component: Tuple[int, ...]  # edge -> component id
    pairing: Tuple[Tuple[int, int], ...]  # boundary positions (1-based) joined by each string
    loops: Tuple[int, ...]  # component ids without boundary endpoints

    @property
    def count(self) -> int:
        return len(self.pairing)


@dataclass(frozen=True)
class TangleDiagram:
    m: int
    num_edges: int
    boundary: Tuple[int, ...]
    crossings: Tuple[Crossing, ...]
    loops_allowed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(int(e) for e in self.boundary))
        object.__setattr__(self, "crossings", tuple(self.crossings))
        if self.m < 1 or len(self.boundary) != 2 * self.m:
            raise MalformedDiagram(f"boundary must list 2m = {2 * self.m} slots, got {len(self.boundary)}")
        if any(c.kind not in (CLASSICAL, VIRTUAL) for c in self.crossings):
            raise MalformedDiagram("unknown crossing kind")
        uses = [0] * self.num_edges
        for e in self.boundary + tuple(s for c in self.crossings for s in c.slots()):
            if not 0 <= e < self.num_edges:
                raise MalformedDiagram(f"edge {e} out of range")
            uses[e] += 1
        bad = [e for e, k in enumerate(uses) if k != 2]
        if bad:
            raise MalformedDiagram(f"edges {bad[:5]} do not have exactly two ends")
        st = self.strings
        if st.count != self.m:
            raise MalformedDiagram(f"expected {self.m} strings, found {st.count}")
        if st.loops and not self.loops_allowed:
            raise MalformedDiagram("diagram has loop components but loops are not allowed")

    @cached_property
    def arc_of(self) -> Tuple[int, ...]:
        uf = _UnionFind(self.num_edges)
        for c in self.crossings:
            uf.union(*c.a)
            if c.is_virtual:
                uf.union(*c.b)
        return tuple(uf.labels())

    @property
    def num_arcs(self) -> int:
        return max(self.arc_of, default=-1) + 1

    @cached_property
    def strings(self) -> Strings:
        uf = _UnionFind(self.num_edges)
        for c in self.crossings:
            uf.union(*c.a)
            uf.union(*c.b)
        comp = tuple(uf.labels())
        ends: Dict[int, List[int]] = {}
        for pos, e in enumerate(self.boundary, start=1):
            ends.setdefault(comp[e], []).append(pos)
        pairing = []
        for positions in ends.values():
            if len(positions) != 2:
                raise MalformedDiagram(f"a string meets the boundary at {positions}")
            pairing.append(tuple(positions))
        loops = tuple(sorted(set(comp) - set(ends)))
        return Strings(comp, tuple(sorted(pairing)), loops)

    def count_virtual(self) -> int:
        return sum(1 for c in self.crossings if c.is_virtual)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "edges": self.num_edges,
            "boundary": list(self.boundary),
            "crossings": [c.to_json() for c in self.crossings],
            "loops_allowed": self.loops_allowed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TangleDiagram":
        try:
            return cls(
                m=int(obj["m"]),
                num_edges=int(obj["edges"]),
                boundary=tuple(obj["boundary"]),
                crossings=tuple(Crossing.from_json(c) for c in obj["crossings"]),
                loops_allowed=bool(obj.get("loops_allowed", False)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedDiagram):
                raise
            raise MalformedDiagram(f"bad diagram record: {exc}") from exc


@dataclass(frozen=True)
class Coloring:
    ring: RingSpec
    values: Tuple[int, ...]  # indexed by arc id

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.ring.canon(int(x)) for x in self.values))

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "coloring": {str(i): x for i, x in enumerate(self.values)}}

    @classmethod
    def from_json(cls, obj: dict) -> "Coloring":
        try:
            ring = RingSpec.from_json(obj["ring"])
            raw = obj["coloring"]
            values = [raw[str(i)] for i in range(len(raw))]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidColoring(f"bad coloring record: {exc}") from exc
        return cls(ring, tuple(values))


def arcs(d: TangleDiagram) -> List[List[int]]:
    """The arcs of ``d`` as sorted edge lists, in arc-id order."""
    out: List[List[int]] = [[] for _ in range(d.num_arcs)]
    for e, a in enumerate(d.arc_of):
        out[a].append(e)
    return out


def strings(d: TangleDiagram) -> Strings:
    return d.strings


def count_virtual(d: TangleDiagram) -> int:
    return d.count_virtual()


def _check_arcs(d: TangleDiagram, c: Coloring):
    if len(c.values) != d.num_arcs:
        raise ArcMismatch(f"coloring has {len(c.values)} values for {d.num_arcs} arcs")


def verify(d: TangleDiagram, c: Coloring) -> bool:
    _check_arcs(d, c)
    col = lambda e: c.values[d.arc_of[e]]  # noqa: E731
    for x in d.crossings:
        if x.is_virtual:
            continue
        lhs = col(x.under[0]) + col(x.under[1]) - 2 * col(x.over[0])
        if c.ring.canon(lhs) != 0:
            return False
    return True


def boundary_vector(d: TangleDiagram, c: Coloring) -> BoundaryVector:
    if not verify(d, c):
        raise InvalidColoring("coloring violates a crossing relation")
    return BoundaryVector(tuple(c.values[d.arc_of[e]] for e in d.boundary), c.ring)


def combine(c1: Coloring, c2: Coloring, a: int, b: int) -> Coloring:
    if c1.ring != c2.ring or len(c1.values) != len(c2.values):
        raise DiagramMismatch("colorings belong to different diagrams or rings")
    return Coloring(c1.ring, tuple(a * x + b * y for x, y in zip(c1.values, c2.values)))


def constant_coloring(d: TangleDiagram, a: int, ring: RingSpec = Z) -> Coloring:
    return Coloring(ring, (a,) * d.num_arcs)


def relation_matrix(d: TangleDiagram) -> List[List[int]]:
    """One row ``x + z - 2y`` per classical crossing, one column per arc."""
    rows = []
    for x in d.crossings:
        if x.is_virtual:
            continue
        row = [0] * d.num_arcs
        row[d.arc_of[x.under[0]]] += 1
        row[d.arc_of[x.under[1]]] += 1
        row[d.arc_of[x.over[0]]] -= 2
        rows.append(row)
    return rows


@dataclass(frozen=True)
class ColoringModule:
    """All colorings of a diagram.

    Over the integers ``generators`` is a basis and every order is ``None``.
    Over Z/p each generator comes with its additive order, a divisor of p,
    and the module is the direct sum of the cyclic groups they span.
    """

    ring: RingSpec
    generators: Tuple[Tuple[int, ...], ...]
    orders: Tuple[Optional[int], ...]

    @property
    def rank(self) -> int:
        return len(self.generators)

    def colorings(self) -> List[Coloring]:
        return [Coloring(self.ring, g) for g in self.generators]

    def sample(self, rng: random.Random, bound: int = 5) -> Coloring:
        total = [0] * (len(self.generators[0]) if self.generators else 0)
        for g, order in zip(self.generators, self.orders):
            k = rng.randrange(order) if order else rng.randint(-bound, bound)
            total = [t + k * x for t, x in zip(total, g)]
        return Coloring(self.ring, tuple(total))

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "rank": self.rank,
            "generators": [list(g) for g in self.generators],
            "orders": list(self.orders),
        }


def solve(d: TangleDiagram, ring: RingSpec = Z) -> ColoringModule:
    A = relation_matrix(d)
    n = d.num_arcs
    if ring.is_integers:
        basis = kernel_basis(A, n)
        return ColoringModule(ring, tuple(tuple(b) for b in basis), (None,) * len(basis))
    gens = kernel_mod(A, n, ring.p)
    return ColoringModule(ring, tuple(tuple(g) for g, _ in gens), tuple(o for _, o in gens))


def check_congruences(d: TangleDiagram, c: Coloring) -> bool:
    """Arc colors agree with a_1 modulo 2^k, and along each string modulo 2^(k+1)."""
    if not c.ring.is_integers:
        raise ValueError("congruence check is defined for integer colorings")
    v = boundary_vector(d, c)
    if is_trivial(v):
        raise TrivialBoundary("k is undefined for a trivial boundary vector")
    k = two_adic_valuation(diff_gcd(v.entries))
    lo, hi = 2 ** k, 2 ** (k + 1)
    a1 = v.entries[0]
    if any((x - a1) % lo for x in c.values):
        return False
    first: Dict[int, int] = {}
    comp = d.strings.component
    for e in range(d.num_edges):
        x = c.values[d.arc_of[e]]
        ref = first.setdefault(comp[e], x)
        if (x - ref) % hi:
            return False
    return True


# -- construction -----------------------------------------------------------


class StripBuilder:
    """Build a diagram from the top down, propagating colors from the top endpoints.

    The open strand ends are kept as a row of positions ``1..width``.  Braid
    letters and virtual swaps act on adjacent positions; ``cup`` opens two new
    positions joined by a fresh edge and ``cap`` joins two adjacent ones.  The
    boundary is read left to right along the top, then right to left along
    the bottom.
    """

    def __init__(self, seed: Sequence[int], ring: RingSpec = Z, loops_allowed: bool = False):
        self.ring = ring
        self.loops_allowed = loops_allowed
        self._colors: List[int] = []
        self._alias: List[int] = []
        self._crossings: List[Tuple[str, List[int], List[int]]] = []
        self.top: List[int] = []
        self.row: List[Tuple[int, int]] = []
        for c in seed:
            e = self._edge(c)
            self.top.append(e)
            self.row.append((e, self.ring.canon(c)))

    @property
    def width(self) -> int:
        return len(self.row)

    @property
    def colors(self) -> List[int]:
        return [c for _, c in self.row]

    def _edge(self, color: int) -> int:
        self._colors.append(self.ring.canon(color))
        self._alias.append(len(self._alias))
        return len(self._alias) - 1

    def _pair(self, i: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        if not 1 <= i < self.width:
            raise MalformedRecipe(f"position {i} out of range for width {self.width}")
        return self.row[i - 1], self.row[i]

    def gen(self, i: int, sign: int = 1):
        (ex, x), (ey, y) = self._pair(i)
        if sign > 0:
            # right strand passes over to the left
            z = self.ring.canon(2 * y - x)
            ey2, ex2 = self._edge(y), self._edge(z)
            self._crossings.append((CLASSICAL, [ey, ey2], [ex, ex2]))
            self.row[i - 1: i + 1] = [(ey2, y), (ex2, z)]
        else:
            z = self.ring.canon(2 * x - y)
            ey2, ex2 = self._edge(z), self._edge(x)
            self._crossings.append((CLASSICAL, [ex, ex2], [ey, ey2]))
            self.row[i - 1: i + 1] = [(ey2, z), (ex2, x)]

    def braid(self, w: BraidWord, offset: int = 0):
        for i, s in w.letters:
            self.gen(i + offset, s)

    def virtual(self, i: int):
        (ex, x), (ey, y) = self._pair(i)
        ex2, ey2 = self._edge(x), self._edge(y)
        self._crossings.append((VIRTUAL, [ex, ex2], [ey, ey2]))
        self.row[i - 1: i + 1] = [(ey2, y), (ex2, x)]

    def cup(self, i: int, color: int):
        """Open a new arc occupying positions i and i+1 (existing positions shift right)."""
        if not 1 <= i <= self.width + 1:
            raise MalformedRecipe(f"cup position {i} out of range for width {self.width}")
        e = self._edge(color)
        c = self.ring.canon(color)
        self.row[i - 1: i - 1] = [(e, c), (e, c)]

    def _root(self, e: int) -> int:
        while self._alias[e] != e:
            e = self._alias[e]
        return e

    def cap(self, i: int):
        (ex, x), (ey, y) = self._pair(i)
        if x != y:
            raise InconsistentSeed(f"cap at {i} joins colors {x} and {y}")
        rx, ry = self._root(ex), self._root(ey)
        if rx == ry:
            raise MalformedRecipe(f"cap at {i} would close a loop with no crossing")
        self._alias[max(rx, ry)] = min(rx, ry)
        del self.row[i - 1: i + 1]

    def finish(self) -> Tuple[TangleDiagram, Coloring]:
        bottom = [e for e, _ in reversed(self.row)]
        order: Dict[int, int] = {}

        def ren(e: int) -> int:
            return order.setdefault(self._root(e), len(order))

        boundary = [ren(e) for e in self.top + bottom]
        crossings = []
        for kind, a, b in self._crossings:
            a2, b2 = tuple(ren(e) for e in a), tuple(ren(e) for e in b)
            crossings.append(Crossing(kind, a2, b2))
        evenness = len(boundary)
        if evenness % 2:
            raise MalformedRecipe(f"odd number of boundary points ({evenness})")
        d = TangleDiagram(evenness // 2, len(order), tuple(boundary), tuple(crossings), self.loops_allowed)
        edge_color = [0] * d.num_edges
        for old, new in order.items():
            edge_color[new] = self._colors[old]
        values = [None] * d.num_arcs
        for e, a in enumerate(d.arc_of):
            if values[a] is None:
                values[a] = edge_color[e]
            elif values[a] != edge_color[e]:
                raise InconsistentSeed("colors disagree along an arc")
        return d, Coloring(self.ring, tuple(values))


@dataclass(frozen=True)
class Stage:
    """One step of a recipe.  ``kind`` is one of braid, virtual, cup, cap."""

    kind: str
    word: Optional[BraidWord] = None
    offset: int = 0
    position: int = 0
    color: int = 0

    def to_json(self) -> dict:
        if self.kind == "braid":
            return {"kind": "braid", "strands": self.word.strands, "offset": self.offset,
                    "word": format_word(self.word)}
        if self.kind == "cup":
            return {"kind": "cup", "position": self.position, "color": self.color}
        return {"kind": self.kind, "position": self.position}

    @classmethod
    def from_json(cls, obj: dict) -> "Stage":
        try:
            kind = obj["kind"]
            if kind == "braid":
                return cls("braid", word=parse_word(obj["word"], int(obj["strands"])),
                           offset=int(obj.get("offset", 0)))
            if kind == "cup":
                return cls("cup", position=int(obj["position"]), color=int(obj["color"]))
            if kind in ("virtual", "cap"):
                return cls(kind, position=int(obj["position"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedRecipe(f"bad stage record {obj!r}") from exc
        raise MalformedRecipe(f"unknown stage kind {kind!r}")


def braid_stage(word: BraidWord, offset: int = 0) -> Stage:
    return Stage("braid", word=word, offset=offset)


def virtual_stage(i: int) -> Stage:
    return Stage("virtual", position=i)


def cup_stage(i: int, color: int) -> Stage:
    return Stage("cup", position=i, color=color)


def cap_stage(i: int) -> Stage:
    return Stage("cap", position=i)


def closure_stages(pairs: Iterable[int]) -> List[Stage]:
    """Caps joining bottom positions (p, p+1) for each listed p, applied right to left."""
    return [cap_stage(p) for p in sorted(pairs, reverse=True)]


@dataclass(frozen=True)
class TangleRecipe:
    """A top-down construction plan: seed colors on the top endpoints, then stages.

    The seed colors propagate through the stages, so compiling a recipe
    yields both a diagram and a coloring of it.
    """

    seed: Tuple[int, ...]
    stages: Tuple[Stage, ...] = ()
    ring: RingSpec = Z
    loops_allowed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "seed", tuple(int(x) for x in self.seed))
        object.__setattr__(self, "stages", tuple(self.stages))
        if sum(1 for s in self.stages if s.kind == "virtual") > 1:
            raise MalformedRecipe("a recipe may contain at most one virtual crossing")

    def to_json(self) -> dict:
        return {
            "seed": list(self.seed),
            "ring": self.ring.to_json(),
            "loops_allowed": self.loops_allowed,
            "stages": [s.to_json() for s in self.stages],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TangleRecipe":
        try:
            return cls(
                seed=tuple(obj["seed"]),
                stages=tuple(Stage.from_json(s) for s in obj["stages"]),
                ring=RingSpec.from_json(obj.get("ring", "z")),
                loops_allowed=bool(obj.get("loops_allowed", False)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MalformedRecipe):
                raise
            raise MalformedRecipe(f"bad recipe record: {exc}") from exc


def compile_recipe(r: TangleRecipe) -> Tuple[TangleDiagram, Coloring]:
    b = StripBuilder(r.seed, r.ring, r.loops_allowed)
    for s in r.stages:
        if s.kind == "braid":
            b.braid(s.word, s.offset)
        elif s.kind == "virtual":
            b.virtual(s.position)
        elif s.kind == "cup":
            b.cup(s.position, s.color)
        elif s.kind == "cap":
            b.cap(s.position)
        else:
            raise MalformedRecipe(f"unknown stage kind {s.kind!r}")
    return b.finish()


# -- serialization ----------------------------------------------------------


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    if hasattr(obj, "to_json"):
        obj = obj.to_json()
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def load_diagram(path) -> TangleDiagram:
    with open(path) as fh:
        obj = json.load(fh)
    return TangleDiagram.from_json(obj.get("diagram", obj))


def load_coloring(path) -> Coloring:
    with open(path) as fh:
        return Coloring.from_json(json.load(fh))


def load_recipe(path) -> TangleRecipe:
    with open(path) as fh:
        return TangleRecipe.from_json(json.load(fh))
