"""Hurwitz action of the braid group B_2m on integer vectors.

``sigma_i`` sends the adjacent pair ``(x, y)`` at positions ``i, i+1`` to
``(y, 2y - x)``.  Orbits of nontrivial vectors are classified by the
alternating sum, the difference gcd ``d`` and the residues modulo ``2d``.

Normal forms are produced constructively.  The vector is first rescaled to a
primitive one (difference gcd 1).  For 2m >= 6 a triple of neighbours is
collapsed into a single entry followed by an equal pair; an equal pair is
transparent to every other entry, so it is parked at the right end and the
problem recurses on 2m - 2 entries.  Four entries are handled by a direct
Euclid-style computation on the difference vector.  Every returned witness is
re-checked by running the action.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import (
    BudgetExhausted,
    DeltaNonZero,
    IndexOutOfRange,
    LengthMismatch,
    NotEquivalent,
    RequiresMAtLeast2,
    StrandMismatch,
    TrivialVector,
)
from .vectors import BoundaryVector, as_vector, delta, diff_gcd, invariants, is_trivial

Letter = Tuple[int, int]

DEFAULT_SEARCH_DEPTH = 14


def search_depth_default() -> int:
    value = os.environ.get("TANGLE_SEARCH_DEPTH")
    return int(value) if value else DEFAULT_SEARCH_DEPTH


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple((int(i), int(s)) for i, s in self.letters)
        for i, s in letters:
            if not 1 <= i < self.strands:
                raise IndexOutOfRange(f"generator s{i} out of range for {self.strands} strands")
            if s not in (1, -1):
                raise ValueError(f"letter sign must be +1 or -1, got {s}")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise StrandMismatch("cannot concatenate words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def __str__(self):
        return format_word(self)

    def shifted(self, offset: int, strands: int) -> "BraidWord":
        """The same word acting on strands ``offset+1, offset+2, ...`` of a wider braid."""
        return BraidWord(strands, tuple((i + offset, s) for i, s in self.letters))


def inverse(w: BraidWord) -> BraidWord:
    return BraidWord(w.strands, tuple((i, -s) for i, s in reversed(w.letters)))


def free_reduce(w: BraidWord) -> BraidWord:
    """Cancel adjacent ``s_i s_i^-1`` pairs."""
    out: List[Letter] = []
    for i, s in w.letters:
        if out and out[-1] == (i, -s):
            out.pop()
        else:
            out.append((i, s))
    return BraidWord(w.strands, tuple(out))


def format_word(w: BraidWord) -> str:
    return " ".join(f"s{i}" if s > 0 else f"s{i}^-1" for i, s in w.letters)


def parse_word(text: str, strands: int) -> BraidWord:
    letters = []
    for tok in text.split():
        body, _, exp = tok.partition("^")
        if not body.startswith("s") or not body[1:].isdigit():
            raise ValueError(f"bad braid token {tok!r}")
        sign = 1
        if exp:
            if exp not in ("1", "-1", "+1"):
                raise ValueError(f"bad exponent in {tok!r}")
            sign = -1 if exp == "-1" else 1
        letters.append((int(body[1:]), sign))
    return BraidWord(strands, tuple(letters))


# --- the action -------------------------------------------------------------

def _act_list(vec: List[int], letters: Iterable[Letter]) -> List[int]:
    for i, s in letters:
        x, y = vec[i - 1], vec[i]
        if s > 0:
            vec[i - 1], vec[i] = y, 2 * y - x
        else:
            vec[i - 1], vec[i] = 2 * x - y, x
    return vec


def _integer_vector(v) -> BoundaryVector:
    v = as_vector(v)
    if not v.ring.is_integers:
        raise ValueError("the Hurwitz action is defined on integer vectors")
    return v


def act_gen(v, i: int, sign: int = 1) -> BoundaryVector:
    v = _integer_vector(v)
    if not 1 <= i < len(v):
        raise IndexOutOfRange(f"generator s{i} out of range for {len(v)} strands")
    return BoundaryVector(tuple(_act_list(list(v.entries), [(i, sign)])))


def act(v, w: BraidWord) -> BoundaryVector:
    v = _integer_vector(v)
    if w.strands != len(v):
        raise StrandMismatch(f"word on {w.strands} strands applied to a vector of length {len(v)}")
    return BoundaryVector(tuple(_act_list(list(v.entries), w.letters)))


# --- orbit invariants -------------------------------------------------------

def orbit_equivalent(v, u) -> bool:
    v, u = _integer_vector(v), _integer_vector(u)
    if len(v) != len(u):
        raise LengthMismatch(f"lengths {len(v)} and {len(u)} differ")
    if is_trivial(v) or is_trivial(u):
        return v.entries == u.entries
    iv, iu = invariants(v), invariants(u)
    return (iv.delta, iv.d, iv.m_multiset) == (iu.delta, iu.d, iu.m_multiset)


# --- normal form results ----------------------------------------------------

@dataclass(frozen=True)
class GeneralForm:
    a: int
    lam: int
    i: int
    d: int

    def vector(self, n: int) -> Tuple[int, ...]:
        a, d = self.a, self.d
        return (a,) * (self.i - 1) + (a + self.lam * d,) + (a + d,) * (n - self.i)


@dataclass(frozen=True)
class DeltaZeroForm:
    a: int
    b: int
    r: int
    s: int

    def vector(self) -> Tuple[int, ...]:
        return (self.a,) * (2 * self.r) + (self.b,) * (2 * self.s)


@dataclass(frozen=True)
class NormalFormResult:
    source: BoundaryVector
    normal: BoundaryVector
    witness: BraidWord
    shape: object

    def __post_init__(self):
        if act(self.source, self.witness) != self.normal:
            raise AssertionError("normal-form witness does not reach the normal form")
        n = len(self.normal)
        if isinstance(self.shape, GeneralForm):
            if not 1 < self.shape.i < n or self.shape.vector(n) != self.normal.entries:
                raise AssertionError(f"normal form does not have the declared shape {self.shape}")
        elif isinstance(self.shape, DeltaZeroForm):
            if self.shape.r + self.shape.s != n // 2 or self.shape.vector() != self.normal.entries:
                raise AssertionError(f"normal form does not have the declared shape {self.shape}")
        else:
            raise TypeError(f"unknown shape {self.shape!r}")


# --- constructive reduction of primitive vectors ----------------------------

class _Tracker:
    """A working vector together with the word applied to it so far."""

    def __init__(self, entries: Sequence[int]):
        self.vec = list(entries)
        self.letters: List[Letter] = []

    def gen(self, i: int, s: int = 1):
        self.letters.append((i, s))
        _act_list(self.vec, [(i, s)])

    def power(self, i: int, t: int):
        s = 1 if t > 0 else -1
        for _ in range(abs(t)):
            self.gen(i, s)

    def extend(self, letters: Iterable[Letter]):
        letters = list(letters)
        self.letters.extend(letters)
        _act_list(self.vec, letters)

    def diff(self, j: int) -> int:
        # difference between positions j+1 and j (1-based)
        return self.vec[j] - self.vec[j - 1]


def _canonical_target(n: int, D: int, q: int) -> Tuple[int, int]:
    """(i, lambda) of the canonical shape (0^{i-1}, lambda, 1^{n-i}) for a primitive orbit.

    The even-``i`` variant is preferred whenever it exists.
    """
    odd_d = D % 2
    tail = q - odd_d  # number of trailing ones for even i
    if 2 <= tail <= n - 2:
        return n - tail, -D
    tail = q - (1 - odd_d)
    if tail % 2 == 1 and 1 <= tail <= n - 3:
        return n - tail, D + 1
    raise AssertionError(f"no canonical shape for n={n}, delta={D}, odd count={q}")


def _shape_vector(n: int, i: int, lam: int) -> List[int]:
    return [0] * (i - 1) + [lam] + [1] * (n - i)


def _translation_word(vec: Sequence[int], p: int) -> Tuple[List[Letter], int]:
    """A word translating ``vec`` by a constant 2g, where positions p, p+1 differ by g = +-1.

    Returns the letters and the translation amount.
    """
    n = len(vec)
    t = _Tracker(vec)
    orig = list(vec)
    pos = p
    # park the unit pair at the right end; the entries it passes are unchanged
    while pos + 1 < n:
        t.gen(pos + 1)
        t.gen(pos)
        pos += 1
    g_cur = t.vec[pos] - t.vec[pos - 1]
    # sweep it to the front; every entry it passes is shifted by 2 * g_cur
    while pos > 1:
        t.gen(pos - 1)
        t.gen(pos)
        pos -= 1
    # return it to position p, passed entries unchanged
    while pos < p:
        t.gen(pos + 1)
        t.gen(pos)
        pos += 1
    shift = 2 * g_cur
    g = t.vec[p] - t.vec[p - 1]
    k, rem = divmod(orig[p - 1] + shift - t.vec[p - 1], g)
    assert rem == 0 and abs(g) == 1
    t.power(p, k)
    assert t.vec == [a + shift for a in orig]
    return t.letters, shift


def _translate(t: _Tracker, p: int, amount: int):
    if amount == 0:
        return
    letters, shift = _translation_word(t.vec, p)
    times, rem = divmod(amount, shift)
    assert rem == 0
    if times < 0:
        letters = [(i, -s) for i, s in reversed(letters)]
    for _ in range(abs(times)):
        t.extend(letters)


def _sl2_to_unit(t: _Tracker) -> int:
    """Drive (x2, x3) to (g, 0) with g > 0 using sigma_2, sigma_3 only; returns g.

    Neither generator moves the first entry: sigma_3 adds x3 to x2 and
    sigma_2 subtracts x2 from x3.
    """
    x = t.diff
    while x(3) != 0:
        if x(2) == 0:
            t.power(3, 1)
            continue
        t.power(2, x(3) // x(2))
        if x(3) == 0:
            break
        t.power(3, -(x(2) // x(3)))
    if x(2) < 0:
        t.extend([(2, 1), (3, 1), (3, 1), (2, 1)])
    return x(2)


def _to_unit_state(t: _Tracker):
    """Reach (a, a - D, a - D + 1, a - D + 1), where x2 = 1 and x3 = 0."""
    if _sl2_to_unit(t) != 1:
        # (g, 0) -> (0, g); then sigma_1 makes x2 = D + g, coprime to g
        t.extend([(2, -1), (3, -1)])
        t.gen(1)
        _sl2_to_unit(t)


def _reduce4(vec: Sequence[int]) -> Tuple[List[Letter], int, int]:
    """Reduce a primitive 4-vector to its canonical shape; returns (letters, i, lambda)."""
    t = _Tracker(vec)
    D = t.vec[0] - t.vec[1] + t.vec[2] - t.vec[3]
    q = sum(a % 2 for a in t.vec)
    i_target, lam = _canonical_target(4, D, q)
    target = _shape_vector(4, i_target, lam)
    scratch = _Tracker(target)
    _to_unit_state(scratch)
    _to_unit_state(t)
    if (t.vec[0] - scratch.vec[0]) % 2:
        # only for even D: (1, 0) -> (1, 1) makes x1 = -D - 1 odd, and sigma_1 flips a
        t.gen(2, -1)
        t.gen(1)
        _sl2_to_unit(t)
    _translate(t, 2, scratch.vec[0] - t.vec[0])
    t.extend(inverse(BraidWord(4, tuple(scratch.letters))).letters)
    assert t.vec == target, (vec, t.vec, i_target, lam)
    return t.letters, i_target, lam


def _pair_move_right(t: _Tracker, p: int):
    """(c, c, y) at p..p+2 -> (y, c, c)."""
    t.gen(p + 1, -1)
    t.gen(p, -1)


def _pair_move_left(t: _Tracker, p: int):
    """(y, c, c) at p..p+2 -> (c, c, y)."""
    t.gen(p, 1)
    t.gen(p + 1, 1)


def _pair_reflect_about_left(t: _Tracker, q: int):
    """(y, c, c) at q..q+2 -> (y, 2y - c, 2y - c)."""
    t.gen(q, -1)
    t.gen(q + 1, -1)
    _pair_move_right(t, q)


def _contraction_index(vec: Sequence[int]) -> Optional[int]:
    n = len(vec)
    for j in range(1, n - 1):
        s = vec[j - 1] - vec[j] + vec[j + 1]
        contracted = list(vec[: j - 1]) + [s] + list(vec[j + 2:])
        if diff_gcd(contracted) == 1:
            return j
    return None


def _euclid_pair(t: _Tracker, j: int):
    """Make positions j+1 and j+2 equal using sigma_j and sigma_{j+1} only."""
    while t.diff(j + 1) != 0:
        if t.diff(j) == 0:
            t.power(j + 1, 1)  # diff_j += diff_{j+1}
            continue
        t.power(j, t.diff(j + 1) // t.diff(j))  # diff_{j+1} -= k diff_j
        if t.diff(j + 1) == 0:
            break
        t.power(j + 1, -(t.diff(j) // t.diff(j + 1)))


def _reduce_primitive(vec: Sequence[int], fallback_depth: int) -> Tuple[List[Letter], int, int]:
    n = len(vec)
    if n == 4:
        return _reduce4(vec)
    t = _Tracker(vec)
    j = _contraction_index(t.vec)
    if j is None:
        prefix = _find_contractible(t.vec, fallback_depth)
        t.extend(prefix)
        j = _contraction_index(t.vec)
    _euclid_pair(t, j)
    p = j + 1
    while p + 1 < n:
        _pair_move_right(t, p)
        p += 1
    sub_letters, i, lam = _reduce_primitive(t.vec[: n - 2], fallback_depth)
    t.extend(sub_letters)
    # prefix is (0^{i-1}, lam, 1^{n-2-i}); fix the parked pair value to 0 or 1
    c = t.vec[-1]
    bit = c % 2
    while c != bit:
        if c > bit:
            # c -> 2 - c (about the 1 at n-2), then -> c - 2 (about the 0 at 1)
            _pair_reflect_about_left(t, n - 2)
            _reflect_about_front(t, n)
        else:
            _reflect_about_front(t, n)
            _pair_reflect_about_left(t, n - 2)
        c = t.vec[-1]
    if bit == 0:
        for p in range(n - 1, 1, -1):
            _pair_move_left(t, p - 1)
        i += 2
    return t.letters, i, lam


def _reflect_about_front(t: _Tracker, n: int):
    """Reflect the pair parked at n-1, n about the entry at position 1."""
    for p in range(n - 1, 2, -1):
        _pair_move_left(t, p - 1)
    _pair_reflect_about_left(t, 1)
    for p in range(2, n - 1):
        _pair_move_right(t, p)


def _find_contractible(vec: Sequence[int], depth: int) -> List[Letter]:
    n = len(vec)
    gens = [(i, s) for i in range(1, n) for s in (1, -1)]
    seen = {tuple(vec)}
    queue = deque([(tuple(vec), [])])
    while queue:
        state, word = queue.popleft()
        if len(word) >= depth:
            continue
        for g in gens:
            nxt = tuple(_act_list(list(state), [g]))
            if nxt in seen:
                continue
            if _contraction_index(nxt) is not None:
                return word + [g]
            seen.add(nxt)
            queue.append((nxt, word + [g]))
    raise BudgetExhausted(f"no contractible neighbour within depth {depth}")


def _odd_to_even_word(D: int) -> List[Letter]:
    """Letters taking (0, D+1, 1, 1) to (0, 0, -D, 1) for odd D."""
    k = (D - 1) // 2
    s = -1 if k > 0 else 1
    return ([(1, -1)] + [(2, s)] * abs(k) + [(1, 1), (3, 1), (2, 1), (1, -1), (2, 1)]
            + [(3, s)] * abs(k) + [(1, 1), (2, 1)])


def _canonicalize_primitive(vec: Sequence[int], fallback_depth: int) -> Tuple[List[Letter], int, int]:
    """Reduce a primitive vector to the unique preferred shape for its orbit."""
    n = len(vec)
    pre = _descend(vec)
    letters, i, lam = _reduce_primitive(_act_list(list(vec), pre), fallback_depth)
    letters = pre + letters
    D = sum(a if k % 2 == 0 else -a for k, a in enumerate(vec))
    q = sum(a % 2 for a in vec)
    i_pref, lam_pref = _canonical_target(n, D, q)
    if i != i_pref:
        # only happens for odd alternating sum: trade (0, D+1, 1, 1) for (0, 0, -D, 1)
        assert D % 2 and i % 2 and i_pref == i + 1
        offset = i - 2
        letters = letters + [(k + offset, s) for k, s in _odd_to_even_word(D)]
        i, lam = i_pref, lam_pref
    return _free_reduce(letters), i, lam


def _potential(vec: Sequence[int]) -> int:
    return sum(abs(vec[k + 1] - vec[k]) for k in range(len(vec) - 1)) + abs(vec[0]) // 2


def _descend(vec: Sequence[int]) -> List[Letter]:
    """Greedy steepest descent on the difference potential; stops at a local minimum."""
    n = len(vec)
    gens = [(i, s) for i in range(1, n) for s in (1, -1)]
    cur = list(vec)
    best = _potential(cur)
    out: List[Letter] = []
    while True:
        step = None
        for g in gens:
            cand = _act_list(list(cur), [g])
            p = _potential(cand)
            if p < best:
                best, step, nxt = p, g, cand
        if step is None:
            return out
        out.append(step)
        cur = nxt


def _free_reduce(letters: Sequence[Letter]) -> List[Letter]:
    out: List[Letter] = []
    for g in letters:
        if out and out[-1][0] == g[0] and out[-1][1] == -g[1]:
            out.pop()
        else:
            out.append(g)
    return out


def _canonical(v: BoundaryVector, fallback_depth: Optional[int] = None) -> Tuple[BraidWord, GeneralForm]:
    if fallback_depth is None:
        fallback_depth = search_depth_default()
    n = len(v)
    d = diff_gcd(v.entries)
    c0 = v.entries[0] % d
    prim = [(a - c0) // d for a in v.entries]
    letters, i, lam = _canonicalize_primitive(prim, fallback_depth)
    return BraidWord(n, tuple(letters)), GeneralForm(a=c0, lam=lam, i=i, d=d)


def normal_form_general(v, fallback_depth: Optional[int] = None) -> NormalFormResult:
    """Witness for ``v . beta = (a,...,a, a + lam*d, a+d,...,a+d)`` with 1 < i < 2m.

    The parameters are chosen canonically: ``0 <= a < d`` and, among the two
    possible positions, the even ``i`` whenever it exists.  Two vectors in
    the same orbit therefore get the same normal form.
    """
    v = _integer_vector(v)
    if is_trivial(v):
        raise TrivialVector(f"{v} is trivial")
    if v.m < 2:
        raise RequiresMAtLeast2("the general normal form needs 2m >= 4 entries")
    word, shape = _canonical(v, fallback_depth)
    normal = BoundaryVector(shape.vector(len(v)))
    return NormalFormResult(source=v, normal=normal, witness=word, shape=shape)


def normal_form_delta0(v, fallback_depth: Optional[int] = None) -> NormalFormResult:
    """Witness for ``v . beta = (a x 2r, b x 2s)``; requires a zero alternating sum."""
    v = _integer_vector(v)
    if delta(v) != 0:
        raise DeltaNonZero(f"alternating sum of {v} is {delta(v)}")
    n = len(v)
    if is_trivial(v):
        shape = DeltaZeroForm(a=v.entries[0], b=v.entries[0], r=v.m, s=0)
        return NormalFormResult(v, v, BraidWord(n), shape)
    word, g = _canonical(v, fallback_depth)
    # zero alternating sum forces lam = 0 with i even: (a^i, (a+d)^{n-i})
    assert g.lam == 0 and g.i % 2 == 0
    shape = DeltaZeroForm(a=g.a, b=g.a + g.d, r=g.i // 2, s=(n - g.i) // 2)
    return NormalFormResult(v, BoundaryVector(shape.vector()), word, shape)


def connect(v, u, fallback_depth: Optional[int] = None) -> BraidWord:
    """A word ``w`` with ``act(v, w) == u``; raises NotEquivalent across orbits."""
    v, u = _integer_vector(v), _integer_vector(u)
    if not orbit_equivalent(v, u):
        raise NotEquivalent(f"{v} and {u} lie in different orbits")
    n = len(v)
    if v == u:
        return BraidWord(n)
    if n == 2:
        w = _connect_two(v, u)
    else:
        wv, sv = _canonical(v, fallback_depth)
        wu, su = _canonical(u, fallback_depth)
        assert sv == su
        w = free_reduce(wv * inverse(wu))
    if act(v, w) != u:
        raise AssertionError("connecting word failed verification")
    return w


def _connect_two(v: BoundaryVector, u: BoundaryVector) -> BraidWord:
    # on two strands sigma_1^t translates the pair by t times its difference
    g = v[1] - v[0]
    t = (u[0] - v[0]) // g
    s = 1 if t > 0 else -1
    return BraidWord(2, ((1, s),) * abs(t))


def bfs_witness(v, u, max_depth: int) -> Optional[BraidWord]:
    """Shortest word of length <= max_depth taking v to u, by bidirectional search.

    Returns None when nothing is found; that says nothing about equivalence
    beyond the depth bound.  Ties are broken by generator order, so the
    result is deterministic.
    """
    v, u = _integer_vector(v), _integer_vector(u)
    if len(v) != len(u):
        raise LengthMismatch(f"lengths {len(v)} and {len(u)} differ")
    n = len(v)
    start, goal = v.entries, u.entries
    if start == goal:
        return BraidWord(n)
    gens = [(i, s) for i in range(1, n) for s in (1, -1)]
    # parent maps: state -> (previous state, letter) in the direction of search
    fwd = {start: None}
    bwd = {goal: None}
    fwd_layer, bwd_layer = [start], [goal]
    depth_f = depth_b = 0
    while depth_f + depth_b < max_depth and fwd_layer and bwd_layer:
        grow_forward = len(fwd_layer) <= len(bwd_layer)
        layer, seen, other = (fwd_layer, fwd, bwd) if grow_forward else (bwd_layer, bwd, fwd)
        nxt_layer = []
        meet = None
        for state in layer:
            for g in gens:
                # backward steps apply inverse generators
                letter = g if grow_forward else (g[0], -g[1])
                nxt = tuple(_act_list(list(state), [letter]))
                if nxt in seen:
                    continue
                seen[nxt] = (state, g)
                nxt_layer.append(nxt)
                if nxt in other and meet is None:
                    meet = nxt
            if meet is not None:
                break
        if grow_forward:
            fwd_layer, depth_f = nxt_layer, depth_f + 1
        else:
            bwd_layer, depth_b = nxt_layer, depth_b + 1
        if meet is not None:
            return _splice(n, fwd, bwd, meet, v, u)
    return None


def _splice(n, fwd, bwd, meet, v, u) -> BraidWord:
    head = []
    state = meet
    while fwd[state] is not None:
        state, g = fwd[state]
        head.append(g)
    head.reverse()
    tail = []
    state = meet
    while bwd[state] is not None:
        state, g = bwd[state]
        tail.append(g)
    w = BraidWord(n, tuple(head + tail))
    assert act(v, w) == u
    return w
