"""Decision procedures and witness constructions for boundary color vectors.

Over a ring R (the integers or Z/p with p odd) a vector v is the boundary of

* an R-colored classical tangle diagram iff its alternating sum vanishes;
* a Z-colored virtual tangle diagram iff v is trivial, or m >= 2 and
  2^(k+1) divides the alternating sum, where 2^k exactly divides d(v);
* a Z/p-colored virtual tangle diagram always;
* a Z-colored virtual tangle diagram with loops allowed iff the number of
  odd entries is even.

Every ``construct_*`` function returns a :class:`Witness` whose recipe has
been compiled and checked: the coloring verifies, the boundary equals the
input vector, and there is at most one virtual crossing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Optional, Tuple

from . import hurwitz
from .diagram import (
    Coloring,
    TangleDiagram,
    TangleRecipe,
    boundary_vector,
    braid_stage,
    cap_stage,
    closure_stages,
    compile_recipe,
    cup_stage,
    virtual_stage,
)
from .errors import NotRealizable
from .hurwitz import BraidWord
from .vectors import (
    BoundaryVector,
    Z,
    as_vector,
    delta,
    diff_gcd,
    is_trivial,
    odd_count,
    two_adic_valuation,
)


class Reason(Enum):
    TRIVIAL = "trivial"
    DELTA_ZERO = "delta-zero"
    DELTA_NONZERO = "delta-nonzero"
    DIVISIBILITY_HOLDS = "divisibility-holds"
    DIVISIBILITY_FAILS = "divisibility-fails"
    ONE_STRING_NONTRIVIAL = "one-string-nontrivial"
    MIXED_PARITY_EVEN = "mixed-parity-even"
    MIXED_PARITY_ODD = "mixed-parity-odd"
    ALWAYS_MOD_P = "always-mod-p"
    LOOPS_PARITY = "loops-parity"


@dataclass(frozen=True)
class RealizabilityVerdict:
    realizable: bool
    reason: Reason
    k: Optional[int] = None
    delta: Optional[int] = None
    trace: Tuple[Tuple[int, ...], ...] = ()

    def __bool__(self):
        return self.realizable

    def to_json(self) -> dict:
        return {
            "realizable": self.realizable,
            "reason": self.reason.value,
            "k": self.k,
            "delta": self.delta,
            "trace": [list(t) for t in self.trace],
        }


@dataclass(frozen=True)
class Witness:
    recipe: TangleRecipe
    diagram: TangleDiagram
    coloring: Coloring
    properties: FrozenSet[str] = field(default_factory=frozenset)

    @property
    def boundary(self) -> BoundaryVector:
        return boundary_vector(self.diagram, self.coloring)


def _finish(recipe: TangleRecipe, target: BoundaryVector, properties) -> Witness:
    diagram, coloring = compile_recipe(recipe)
    got = boundary_vector(diagram, coloring)
    if got != target:
        raise AssertionError(f"witness boundary {got} differs from target {target}")
    if diagram.count_virtual() > 1:
        raise AssertionError("witness has more than one virtual crossing")
    return Witness(recipe, diagram, coloring, frozenset(properties))


def _pairs_closure(n: int):
    return closure_stages(range(1, n, 2))


def _require_integers(v: BoundaryVector):
    if not v.ring.is_integers:
        raise ValueError("this operation is defined for integer vectors")


# -- classical -----------------------------------------------------------------


def classical_realizable(v) -> RealizabilityVerdict:
    v = as_vector(v)
    dl = delta(v)
    if is_trivial(v):
        return RealizabilityVerdict(True, Reason.TRIVIAL, delta=dl)
    if dl == 0:
        return RealizabilityVerdict(True, Reason.DELTA_ZERO, delta=dl)
    return RealizabilityVerdict(False, Reason.DELTA_NONZERO, delta=dl)


def _classical_stages(v: BoundaryVector) -> list:
    """Braid to (a x 2r, b x 2s), then cap neighbouring bottom endpoints."""
    nf = hurwitz.normal_form_delta0(v)
    stages = [braid_stage(nf.witness)] if len(nf.witness) else []
    return stages + _pairs_closure(len(v))


def _lift_zero_delta(v: BoundaryVector) -> BoundaryVector:
    """Integer lift with zero alternating sum; only the last entry leaves {0..p-1}."""
    b = list(v.entries)
    b[-1] = sum(x if i % 2 == 0 else -x for i, x in enumerate(b[:-1]))
    return BoundaryVector(tuple(b))


def construct_classical(v) -> Witness:
    v = as_vector(v)
    if delta(v) != 0:
        raise NotRealizable(f"alternating sum of {v} is {delta(v)}, not zero")
    lift = v if v.ring.is_integers else _lift_zero_delta(v)
    recipe = TangleRecipe(v.entries, tuple(_classical_stages(lift)), v.ring)
    return _finish(recipe, v, {"P1"})


# -- virtual over the integers ----------------------------------------------------


def virtual_realizable_z(v) -> RealizabilityVerdict:
    v = as_vector(v)
    _require_integers(v)
    dl = delta(v)
    if is_trivial(v):
        return RealizabilityVerdict(True, Reason.TRIVIAL, delta=dl)
    k = two_adic_valuation(diff_gcd(v.entries))
    if v.m == 1:
        return RealizabilityVerdict(False, Reason.ONE_STRING_NONTRIVIAL, k=k, delta=dl)
    ok = dl % (2 ** (k + 1)) == 0
    return RealizabilityVerdict(ok, Reason.DIVISIBILITY_HOLDS if ok else Reason.DIVISIBILITY_FAILS, k=k, delta=dl)


def reduce_trace(v) -> RealizabilityVerdict:
    """Decide by parity reduction: shift all-odd vectors down by one, halve all-even ones.

    Both rules keep a nontrivial vector nontrivial and shrink its spread, so
    the loop stops at a vector with mixed parities, which is realizable iff
    it has an even number of odd entries.
    """
    v = as_vector(v)
    _require_integers(v)
    if is_trivial(v):
        return RealizabilityVerdict(True, Reason.TRIVIAL, delta=delta(v))
    cur = list(v.entries)
    trace = []
    while True:
        odd = sum(x % 2 for x in cur)
        if odd == len(cur):
            cur = [x - 1 for x in cur]
        elif odd == 0:
            cur = [x // 2 for x in cur]
        else:
            break
        trace.append(tuple(cur))
    ok = odd % 2 == 0
    return RealizabilityVerdict(
        ok, Reason.MIXED_PARITY_EVEN if ok else Reason.MIXED_PARITY_ODD, delta=delta(v), trace=tuple(trace)
    )


def _virtual_plan(v: BoundaryVector, nf) -> Tuple[BraidWord, Tuple[int, ...], int]:
    """The braid to an intermediate vector, and where the virtual crossing goes.

    Returns ``(beta, target, j)``: beta takes v to ``target``, and swapping
    positions j, j+1 of ``target`` gives a vector with zero alternating sum.
    With ``nf.normal = a + d * (0,...,0, lam, 1,...,1)`` (lam at position i)
    the target is ``a + d * (0,...,0, h, 1-h, 1,...,1)`` with h at position i
    when i is even and lam = 2h, and ``a + d * (0,...,0, 1-h, h, 1,...,1)``
    with h at position i when i is odd and lam = 2h - 1.
    """
    g = nf.shape
    n = len(v)
    i, lam = g.i, g.lam
    if i % 2 == 0:
        h = lam // 2
        base = [0] * (i - 1) + [h, 1 - h] + [1] * (n - i - 1)
        j = i + 1
    else:
        h = (lam + 1) // 2
        base = [0] * (i - 2) + [1 - h, h] + [1] * (n - i)
        j = i - 2
    target = tuple(g.a + g.d * x for x in base)
    beta = nf.witness * hurwitz.connect(nf.normal, BoundaryVector(target))
    assert hurwitz.act(v, beta).entries == target
    return beta, target, j


def construct_virtual_z(v, normal_form: Optional[hurwitz.NormalFormResult] = None) -> Witness:
    """Braid v to a normal form, then to a vector one virtual swap away from zero alternating sum.

    Any act-verified general normal form of v may be supplied; by default the
    canonical one is used.
    """
    v = as_vector(v)
    _require_integers(v)
    verdict = virtual_realizable_z(v)
    if not verdict.realizable:
        raise NotRealizable(f"{v} is not realizable: {verdict.reason.value}")
    if delta(v) == 0 and normal_form is None:
        # a classical witness already has at most one virtual crossing
        w = construct_classical(v)
        return Witness(w.recipe, w.diagram, w.coloring, frozenset({"P1", "P2"}))
    nf = normal_form or hurwitz.normal_form_general(v)
    if nf.source != v or not isinstance(nf.shape, hurwitz.GeneralForm):
        raise ValueError("normal_form must be a general normal form of v")
    beta, target, j = _virtual_plan(v, nf)
    swapped = list(target)
    swapped[j - 1], swapped[j] = swapped[j], swapped[j - 1]
    lower = BoundaryVector(tuple(swapped))
    assert delta(lower) == 0
    stages = [braid_stage(beta), virtual_stage(j)] + _classical_stages(lower)
    recipe = TangleRecipe(v.entries, tuple(stages))
    return _finish(recipe, v, {"P2", "P3"})


# -- modulo p ---------------------------------------------------------------------


def virtual_realizable_zp(v) -> RealizabilityVerdict:
    v = as_vector(v)
    if v.ring.is_integers:
        raise ValueError("expected a vector over Z/p")
    if is_trivial(v):
        return RealizabilityVerdict(True, Reason.TRIVIAL, delta=delta(v))
    return RealizabilityVerdict(True, Reason.ALWAYS_MOD_P, delta=delta(v))


def parity_adjusted_lift(v: BoundaryVector) -> BoundaryVector:
    """An integer lift with mixed parities and an even number of odd entries.

    The plain lift to {0..p-1} is used when it qualifies; otherwise p is
    added where needed so that exactly the first two entries are odd.
    """
    b = list(v.entries)
    odd = sum(x % 2 for x in b)
    if 0 < odd < len(b) and odd % 2 == 0:
        return BoundaryVector(tuple(b))
    for idx, x in enumerate(b):
        want = 1 if idx < 2 else 0
        if x % 2 != want:
            b[idx] = x + v.ring.p
    return BoundaryVector(tuple(b))


def _one_string_zp(v: BoundaryVector) -> TangleRecipe:
    """A single string with one virtual crossing and a twist of p - 1 crossings.

    A cup of color c = (a1 + a2)/2 is opened between the two endpoints; its
    right half crosses the a2 strand virtually, and the twist of the middle
    pair turns (c, a2) into (2c - a2, c) = (a1, c) modulo p, so both caps
    join equal colors.  The twist has an even number of crossings, so the
    strands end where they started and the result is one string.
    """
    p = v.ring.p
    a1, a2 = v.entries
    c = (a1 + a2) * (p + 1) // 2
    twist = BraidWord(4, ((2, 1),) * (p - 1))
    stages = (cup_stage(2, c), virtual_stage(3), braid_stage(twist), cap_stage(3), cap_stage(1))
    return TangleRecipe(v.entries, stages, v.ring)


def construct_zp(v) -> Witness:
    v = as_vector(v)
    if v.ring.is_integers:
        raise ValueError("expected a vector over Z/p")
    if is_trivial(v):
        recipe = TangleRecipe(v.entries, tuple(_pairs_closure(len(v))), v.ring)
        return _finish(recipe, v, {"P1", "P2"})
    if v.m == 1:
        return _finish(_one_string_zp(v), v, {"P2"})
    lift = parity_adjusted_lift(v)
    inner = construct_virtual_z(lift)
    recipe = TangleRecipe(v.entries, inner.recipe.stages, v.ring)
    return _finish(recipe, v, inner.properties)


# -- loops -----------------------------------------------------------------------


def loops_realizable_z(v) -> RealizabilityVerdict:
    v = as_vector(v)
    _require_integers(v)
    ok = odd_count(v) % 2 == 0
    return RealizabilityVerdict(ok, Reason.LOOPS_PARITY, delta=delta(v))


def construct_with_loop(v) -> Witness:
    """Change the last entry by the alternating sum using a loop, then close classically.

    The loop, colored ``a_2m + delta/2``, passes over the last strand and
    then through one virtual crossing; below it the boundary reads
    ``w = (a_1, ..., a_2m + delta)`` with zero alternating sum.
    """
    v = as_vector(v)
    _require_integers(v)
    if not loops_realizable_z(v).realizable:
        raise NotRealizable(f"{v} has an odd number of odd entries")
    n = len(v)
    dl = delta(v)
    loop_color = v.entries[-1] + dl // 2
    w = BoundaryVector(v.entries[:-1] + (v.entries[-1] + dl,))
    stages = [
        cup_stage(n + 1, loop_color),
        braid_stage(BraidWord(n + 2, ((n, 1),))),
        virtual_stage(n + 1),
        cap_stage(n),
    ] + _classical_stages(w)
    recipe = TangleRecipe(v.entries, tuple(stages), Z, loops_allowed=True)
    return _finish(recipe, v, {"P2"})


def realizable(v, loops: bool = False, classical: bool = False) -> RealizabilityVerdict:
    """Dispatch on ring and options."""
    v = as_vector(v)
    if classical:
        return classical_realizable(v)
    if not v.ring.is_integers:
        return virtual_realizable_zp(v)
    if loops:
        return loops_realizable_z(v)
    return virtual_realizable_z(v)


def realize(v, loops: bool = False, classical: bool = False) -> Witness:
    v = as_vector(v)
    if classical:
        return construct_classical(v)
    if not v.ring.is_integers:
        return construct_zp(v)
    if loops and not virtual_realizable_z(v).realizable:
        return construct_with_loop(v)
    return construct_virtual_z(v)
