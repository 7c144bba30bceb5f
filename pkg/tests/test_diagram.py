import random

import pytest
from hypothesis import given, settings, strategies as st

from _gen import random_diagram
from foxtangle import diagram as dg
from foxtangle.diagram import Coloring, Crossing, StripBuilder, TangleDiagram, TangleRecipe
from foxtangle.errors import (
    ArcMismatch,
    DiagramMismatch,
    InconsistentSeed,
    InvalidColoring,
    MalformedDiagram,
    MalformedRecipe,
    TrivialBoundary,
)
from foxtangle.hurwitz import BraidWord
from foxtangle.realize import construct_virtual_z
from foxtangle.vectors import RingSpec, Z, delta, invariants, is_trivial


def crossingless(m):
    return TangleDiagram(m, m, tuple(e for i in range(m) for e in (i, i)), ())


def one_crossing():
    # strand 0-1 over, strand 2-3 under; boundary reads 0,1 on top and 3,2 at the bottom
    return TangleDiagram(2, 4, (0, 2, 3, 1), (Crossing.classical((2, 3), (0, 1)),))


def one_virtual():
    return TangleDiagram(2, 4, (0, 2, 3, 1), (Crossing.virtual((0, 1), (2, 3)),))


def test_structure_validation():
    with pytest.raises(MalformedDiagram):
        TangleDiagram(1, 2, (0, 1), ())
    with pytest.raises(MalformedDiagram):
        TangleDiagram(2, 2, (0, 0, 1), ())
    with pytest.raises(MalformedDiagram):
        TangleDiagram(1, 1, (0, 0), (Crossing.classical((0, 0), (0, 0)),))


def test_arcs_examples():
    assert len(dg.arcs(crossingless(3))) == 3
    assert len(dg.arcs(one_crossing())) == 3
    assert len(dg.arcs(one_virtual())) == 2


def test_strings_examples():
    st_ = dg.strings(crossingless(2))
    assert st_.pairing == ((1, 2), (3, 4)) and st_.loops == ()
    assert dg.strings(one_crossing()).pairing == ((1, 4), (2, 3))


def test_loop_only_when_allowed():
    b = StripBuilder([0, 0])
    b.cup(3, 0)
    b.gen(2, 1)
    b.virtual(3)
    with pytest.raises(MalformedDiagram):
        b.cap(2)
        b.cap(1)
        b.finish()
    b = StripBuilder([0, 0], loops_allowed=True)
    b.cup(3, 0)
    b.gen(2, 1)
    b.virtual(3)
    b.cap(2)
    b.cap(1)
    d, c = b.finish()
    assert len(d.strings.loops) == 1


def test_verify_examples():
    d = one_crossing()
    arc = d.arc_of
    assert dg.verify(d, dg.constant_coloring(d, 7))
    vals = [0] * 3
    vals[arc[0]], vals[arc[2]], vals[arc[1]] = 0, 1, 2
    assert dg.verify(d, Coloring(Z, tuple(vals)))
    vals[arc[1]] = 3
    assert not dg.verify(d, Coloring(Z, tuple(vals)))
    with pytest.raises(InvalidColoring):
        dg.boundary_vector(d, Coloring(Z, tuple(vals)))
    with pytest.raises(ArcMismatch):
        dg.verify(d, Coloring(Z, (0, 0)))


def test_boundary_vector_of_one_generator():
    r = TangleRecipe((0, 1), (dg.braid_stage(BraidWord(2, ((1, 1),))),))
    d, c = dg.compile_recipe(r)
    assert dg.boundary_vector(d, c).entries == (0, 1, 2, 1)
    assert delta(dg.boundary_vector(d, c)) == 0


def test_constant_boundary():
    d = crossingless(3)
    assert dg.boundary_vector(d, dg.constant_coloring(d, 4)).entries == (4,) * 6


def test_two_crossing_example_reconstruction():
    w = construct_virtual_z((0, 3, 3, 2))
    assert dg.boundary_vector(w.diagram, w.coloring).entries == (0, 3, 3, 2)
    assert w.diagram.count_virtual() == 1


def test_solve_examples():
    assert dg.solve(crossingless(3)).rank == 3
    assert dg.solve(one_crossing()).rank == 2
    mod = dg.solve(one_crossing(), RingSpec.mod(9))
    assert sorted(mod.orders) == [9, 9]


def test_solve_one_string_virtual_is_constant():
    d, _ = dg.compile_recipe(TangleRecipe((0, 0), (
        dg.cup_stage(2, 0), dg.virtual_stage(3), dg.braid_stage(BraidWord(4, ((2, 1),) * 4)),
        dg.cap_stage(3), dg.cap_stage(1))))
    mod = dg.solve(d)
    assert mod.rank == 1
    assert len(set(mod.generators[0])) == 1


def test_combine():
    d = one_crossing()
    c = dg.solve(d).colorings()[0]
    e1 = dg.constant_coloring(d, 1)
    assert dg.combine(c, c, 1, 0) == c
    mixed = dg.combine(e1, c, 3, 5)
    assert dg.verify(d, mixed)
    bv, bc = dg.boundary_vector(d, mixed), dg.boundary_vector(d, c)
    assert bv.entries == tuple(3 + 5 * x for x in bc.entries)
    with pytest.raises(DiagramMismatch):
        dg.combine(c, Coloring(RingSpec.mod(3), c.values), 1, 1)


def test_compile_errors():
    with pytest.raises(InconsistentSeed):
        dg.compile_recipe(TangleRecipe((0, 1), (dg.cap_stage(1),)))
    with pytest.raises(MalformedRecipe):
        TangleRecipe((0, 0, 0, 0), (dg.virtual_stage(1), dg.virtual_stage(2)))
    with pytest.raises(MalformedRecipe):
        dg.compile_recipe(TangleRecipe((0, 0), (dg.virtual_stage(2),)))
    with pytest.raises(MalformedRecipe):
        dg.compile_recipe(TangleRecipe((0, 0), (dg.cup_stage(1, 3), dg.cap_stage(1))))


def test_compile_constant_closure():
    d, c = dg.compile_recipe(TangleRecipe((5, 5, 5, 5), tuple(dg.closure_stages([1, 3]))))
    assert dg.boundary_vector(d, c).entries == (5, 5, 5, 5)
    assert d.crossings == () and d.strings.pairing == ((1, 2), (3, 4))


def test_check_congruences():
    w = construct_virtual_z((0, 3, 3, 2))
    assert dg.check_congruences(w.diagram, w.coloring)
    d = crossingless(2)
    with pytest.raises(TrivialBoundary):
        dg.check_congruences(d, dg.constant_coloring(d, 2))


def test_count_virtual():
    assert dg.count_virtual(one_crossing()) == 0
    assert dg.count_virtual(one_virtual()) == 1


def test_json_round_trip(tmp_path):
    w = construct_virtual_z((0, 3, 3, 2))
    for obj, loader, name in ((w.diagram, dg.load_diagram, "d.json"), (w.coloring, dg.load_coloring, "c.json"),
                              (w.recipe, dg.load_recipe, "r.json")):
        text = dg.dumps(obj)
        path = tmp_path / name
        path.write_text(text)
        back = loader(path)
        assert back == obj
        assert dg.dumps(back) == text


def test_compile_is_deterministic():
    w = construct_virtual_z((1, 4, -2, 5, 0, 0))
    d1, c1 = dg.compile_recipe(w.recipe)
    d2, c2 = dg.compile_recipe(w.recipe)
    assert dg.dumps(d1) == dg.dumps(d2) and c1 == c2


def test_from_json_errors():
    with pytest.raises(MalformedDiagram):
        TangleDiagram.from_json({"m": 1})
    with pytest.raises(MalformedDiagram):
        Crossing.from_json({"kind": "weird"})
    with pytest.raises(MalformedRecipe):
        TangleRecipe.from_json({"seed": [0], "stages": [{"kind": "twirl"}]})


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_random_diagrams_satisfy_boundary_constraints(seed, virtual):
    rng = random.Random(seed)
    m = rng.choice((1, 2, 3))
    d = random_diagram(rng, m, virtual=virtual)
    mod = dg.solve(d)
    c1, c2 = mod.sample(rng), mod.sample(rng)
    assert dg.verify(d, c1) and dg.verify(d, c2)
    assert dg.verify(d, dg.combine(c1, c2, rng.randint(-3, 3), rng.randint(-3, 3)))
    v = dg.boundary_vector(d, c1)
    if not virtual:
        assert delta(v) == 0
    if m == 1:
        assert all(len(set(g)) == 1 for g in mod.generators)
    if not is_trivial(v):
        k = invariants(v).k
        assert delta(v) % 2 ** (k + 1) == 0
        assert dg.check_congruences(d, c1)
        # string endpoints share their color modulo 2^(k+1)
        for i, j in d.strings.pairing:
            assert (v[i - 1] - v[j - 1]) % 2 ** (k + 1) == 0
