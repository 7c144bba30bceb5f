import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from _gen import random_vector, random_word
from foxtangle import hurwitz as H
from foxtangle.errors import (
    BudgetExhausted,
    DeltaNonZero,
    IndexOutOfRange,
    LengthMismatch,
    NotEquivalent,
    RequiresMAtLeast2,
    StrandMismatch,
    TrivialVector,
)
from foxtangle.hurwitz import BraidWord, act, act_gen, inverse
from foxtangle.vectors import BoundaryVector, delta, invariants, is_trivial

vectors = st.integers(2, 4).flatmap(lambda m: st.lists(st.integers(-20, 20), min_size=2 * m, max_size=2 * m))


def words_for(n):
    return st.lists(st.tuples(st.integers(1, n - 1), st.sampled_from((1, -1))), max_size=15).map(
        lambda ls: BraidWord(n, tuple(ls))
    )


def test_act_gen_examples():
    assert act_gen((0, 1), 1).entries == (1, 2)
    assert act_gen((1, 7, -5, -11), 2).entries == (1, -5, -17, -11)
    assert act_gen(act_gen((0, 1), 1), 1, -1).entries == (0, 1)
    with pytest.raises(IndexOutOfRange):
        act_gen((0, 1), 2)


def test_act_examples():
    assert act((3, 4), BraidWord(2)).entries == (3, 4)
    assert act((0, 1, 2, 3), BraidWord(4, ((1, 1),))).entries == (1, 2, 2, 3)
    with pytest.raises(StrandMismatch):
        act((0, 1, 2, 3), BraidWord(6))


def test_word_validation_and_format():
    with pytest.raises(IndexOutOfRange):
        BraidWord(4, ((4, 1),))
    w = H.parse_word("s1 s2^-1  s3", 4)
    assert w.letters == ((1, 1), (2, -1), (3, 1))
    assert H.format_word(w) == "s1 s2^-1 s3"
    assert H.parse_word("", 4).letters == ()
    with pytest.raises(ValueError):
        H.parse_word("t1", 4)


def test_inverse_examples():
    assert inverse(BraidWord(4)).letters == ()
    assert inverse(BraidWord(4, ((1, 1),))).letters == ((1, -1),)
    assert inverse(BraidWord(4, ((1, 1), (2, -1)))).letters == ((2, 1), (1, -1))


def test_orbit_equivalent_examples():
    assert H.orbit_equivalent((0, 1, 2, 3), (0, 3, 2, 1))
    assert H.bfs_witness((0, 1, 2, 3), (0, 3, 2, 1), 10) is not None
    assert not H.orbit_equivalent((0, 1, 2, 3), (0, 1, 2, 5))
    assert not H.orbit_equivalent((1, 1, 1, 1), (2, 2, 2, 2))
    assert H.orbit_equivalent((1, 1, 1, 1), (1, 1, 1, 1))
    with pytest.raises(LengthMismatch):
        H.orbit_equivalent((0, 1), (0, 1, 2, 3))


def test_bfs_witness_examples():
    assert H.bfs_witness((0, 1, 2, 3), (0, 1, 2, 3), 0).letters == ()
    assert H.bfs_witness((0, 1), (1, 2), 1).letters == ((1, 1),)
    assert H.bfs_witness((0, 1, 2, 3), (0, 1, 2, 5), 8) is None


def test_bfs_witness_is_shortest():
    rng = random.Random(3)
    for _ in range(30):
        v = random_vector(rng, 2, 3)
        w = random_word(rng, 4, 4)
        u = act(v, w)
        found = H.bfs_witness(v, u, 8)
        assert found is not None and len(found) <= len(w)
        assert act(v, found) == u


def test_normal_form_general_examples():
    for v in ((0, 2, 1, 1), (0, 1, 0, 1)):
        r = H.normal_form_general(v)
        assert act(v, r.witness) == r.normal
        assert r.shape.d == 1
    with pytest.raises(TrivialVector):
        H.normal_form_general((5, 5, 5, 5))
    with pytest.raises(RequiresMAtLeast2):
        H.normal_form_general((0, 1))


def test_normal_form_delta0_examples():
    r = H.normal_form_delta0((4, 4, 4, 4))
    assert r.witness.letters == () and r.normal.entries == (4, 4, 4, 4)
    r = H.normal_form_delta0((0, 1, 2, 1))
    a, b = r.shape.a, r.shape.b
    assert r.normal.entries == (a,) * (2 * r.shape.r) + (b,) * (2 * r.shape.s)
    with pytest.raises(DeltaNonZero):
        H.normal_form_delta0((0, 3, 3, 2))


def test_normal_form_rejects_wrong_witness():
    with pytest.raises(AssertionError):
        H.NormalFormResult(BoundaryVector((0, 1, 2, 3)), BoundaryVector((0, 1, 2, 3)),
                           BraidWord(4, ((1, 1),)), H.GeneralForm(0, 2, 3, 1))


def test_normal_form_is_a_complete_invariant_on_a_box():
    classes = {}
    for v in itertools.product(range(-2, 3), repeat=4):
        if is_trivial(v):
            continue
        rep = invariants(v)
        classes.setdefault((rep.delta, rep.d, rep.m_multiset), set()).add(H.normal_form_general(v).normal)
    assert all(len(s) == 1 for s in classes.values())
    normals = [next(iter(s)) for s in classes.values()]
    assert len(set(normals)) == len(normals)


def test_connect_examples():
    v = (3, -1, 4, 1, 5, -9)
    assert act(v, H.connect(v, v)) == BoundaryVector(v)
    w = BraidWord(6, ((2, 1), (5, -1), (1, 1), (3, 1)))
    u = act(v, w)
    assert act(v, H.connect(v, u)) == u
    with pytest.raises(NotEquivalent):
        H.connect((0, 1, 2, 3), (0, 1, 2, 5))


def test_connect_two_strands():
    v = (2, 5)
    u = act(v, BraidWord(2, ((1, -1),) * 4))
    assert act(v, H.connect(v, u)) == u


def test_search_depth_env(monkeypatch):
    monkeypatch.setenv("TANGLE_SEARCH_DEPTH", "3")
    assert H.search_depth_default() == 3


def test_contractible_search_budget():
    # no coprime triple is available and depth 0 forbids searching
    with pytest.raises(BudgetExhausted):
        H._find_contractible([0, 2, 0, 2, 1, 3], 0)


@given(vectors, st.data())
def test_conservation(v, data):
    w = data.draw(words_for(len(v)))
    u = act(v, w)
    assert delta(u) == delta(v)
    if not is_trivial(v):
        a, b = invariants(v), invariants(u)
        assert (a.d, a.m_multiset) == (b.d, b.m_multiset)
    assert act(u, inverse(w)) == BoundaryVector(tuple(v))


@given(vectors, st.data())
def test_action_is_a_right_action(v, data):
    n = len(v)
    w1, w2 = data.draw(words_for(n)), data.draw(words_for(n))
    assert act(v, w1 * w2) == act(act(v, w1), w2)


@given(vectors, st.data())
def test_free_reduce_keeps_the_action(v, data):
    n = len(v)
    w = data.draw(words_for(n))
    r = H.free_reduce(w * inverse(w) * w)
    assert act(v, r) == act(v, w)
    assert len(r) <= len(w)
    assert all(a != (b[0], -b[1]) for a, b in zip(r.letters, r.letters[1:]))


@given(st.lists(st.integers(-8, 8), min_size=4, max_size=4))
def test_trivial_vectors_are_fixed(v):
    c = v[0]
    for i in (1, 2, 3):
        assert act_gen((c,) * 4, i).entries == (c,) * 4


@settings(max_examples=60, deadline=None)
@given(vectors)
def test_normal_form_soundness(v):
    if is_trivial(v):
        return
    r = H.normal_form_general(v)
    assert act(v, r.witness) == r.normal
    assert r.shape.vector(len(v)) == r.normal.entries
    if delta(v) == 0:
        r0 = H.normal_form_delta0(v)
        assert act(v, r0.witness) == r0.normal


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_oracle_consistency(v, u):
    found = H.bfs_witness(v, u, 6)
    if found is not None:
        assert H.orbit_equivalent(v, u)
    if not H.orbit_equivalent(v, u):
        assert found is None
