from itertools import product as iproduct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from doctrinelab.poset import (FinPoset, MonotoneMap, is_heyting_hom, is_msl_hom,
                               lattice_ops, left_adjoint, right_adjoint)
from doctrinelab.verdicts import StructureMissing

from oracles import direct_image, preimage


def chain(n):
    elems = [f"c{i}" for i in range(n)]
    return FinPoset(elems, [(elems[i], elems[j])
                            for i in range(n) for j in range(i, n)])


TWO = chain(2)
THREE = chain(3)


def test_poset_rejects_non_orders():
    with pytest.raises(ValueError):
        FinPoset(["a", "b"], [("a", "b"), ("b", "a"), ("a", "a"), ("b", "b")])
    with pytest.raises(ValueError):
        FinPoset(["a", "b", "c"],
                 [("a", "b"), ("b", "c")] + [(e, e) for e in "abc"])


def test_two_chain_ops():
    ops = lattice_ops(TWO)
    bot, top = "c0", "c1"
    assert ops.top == top and ops.bottom == bot
    assert ops.meet[(top, bot)] == bot and ops.join[(top, bot)] == top
    # a -> b is top unless a = top and b = bot
    for a in TWO.elements:
        for b in TWO.elements:
            expected = bot if (a == top and b == bot) else top
            assert ops.heyting_implication[(a, b)] == expected


def sierpinski_frame():
    # open sets of the Sierpinski space ordered by inclusion: 0 < {a} < X
    return FinPoset(["empty", "a", "X"],
                    [("empty", "a"), ("a", "X"), ("empty", "X"),
                     ("empty", "empty"), ("a", "a"), ("X", "X")])


def test_sierpinski_negation_by_greatest_oracle():
    p = sierpinski_frame()
    ops = p.ops
    # oracle: greatest c with c meet {a} <= empty, by brute force
    candidates = [c for c in p.elements
                  if p.leq(ops.meet[(c, "a")], "empty")]
    greatest = [c for c in candidates
                if all(p.leq(o, c) for o in candidates)]
    assert greatest == ["empty"]
    assert ops.heyting_implication[("a", "empty")] == "empty"


def test_two_maximal_elements_no_top():
    p = FinPoset(["a", "b", "x", "y"],
                 [("a", "x"), ("a", "y"), ("b", "x"), ("b", "y")]
                 + [(e, e) for e in "abxy"])
    ops = p.ops
    assert ops.top is None
    assert ops.join is None


def test_left_adjoint_of_identity():
    u = MonotoneMap.identity(THREE)
    adj = left_adjoint(u)
    assert adj is not None and adj.table == {e: e for e in THREE.elements}


def powerset_poset(n):
    masks = list(range(1 << n))
    return FinPoset([f"e{m}" for m in masks],
                    [(f"e{a}", f"e{b}") for a in masks for b in masks
                     if a & ~b == 0])


def test_preimage_left_adjoint_is_direct_image():
    # u = preimage along the projection (g, a) -> g for |G| = |A| = 2:
    # fiber(G) -> fiber(GxA); its left adjoint must be the direct image
    images = tuple(p // 2 for p in range(4))
    fiber_g, fiber_ga = powerset_poset(2), powerset_poset(4)
    u = MonotoneMap(fiber_g, fiber_ga, {f"e{m}": f"e{preimage(images, m)}"
                                        for m in range(4)})
    adj = left_adjoint(u)
    assert adj is not None
    for m in range(16):
        assert adj.table[f"e{m}"] == f"e{direct_image(images, m)}"


def test_missing_left_adjoint():
    # bottom |-> bottom, top |-> middle: nothing lies above the 3-chain top
    u = MonotoneMap(TWO, THREE, {"c0": "c0", "c1": "c1"})
    assert left_adjoint(u) is None
    # the right adjoint exists: greatest b with u(b) <= a
    assert right_adjoint(u) is not None


def test_adjoint_uniqueness_exhaustive():
    u = MonotoneMap(TWO, THREE, {"c0": "c0", "c1": "c2"})
    adj = left_adjoint(u)
    assert adj is not None
    satisfying = []
    for images in iproduct(TWO.elements, repeat=3):
        table = dict(zip(THREE.elements, images))
        if all(TWO.leq(table[a], b) == THREE.leq(a, u.table[b])
               for a in THREE.elements for b in TWO.elements):
            satisfying.append(table)
    assert satisfying == [adj.table]


_SHAPE_POOL = [chain(1), chain(2), chain(3), powerset_poset(2),
               sierpinski_frame()]


@st.composite
def monotone_maps(draw):
    src = draw(st.sampled_from(_SHAPE_POOL))
    tgt = draw(st.sampled_from(_SHAPE_POOL))
    table = {}
    for e in src.elements:
        table[e] = draw(st.sampled_from(tgt.elements))
    for a in src.elements:
        for b in src.elements:
            if src.leq(a, b) and not tgt.leq(table[a], table[b]):
                table[b] = tgt.ops.top if tgt.ops.top else table[a]
    for a in src.elements:
        for b in src.elements:
            if src.leq(a, b) and not tgt.leq(table[a], table[b]):
                table = {e: table[src.elements[0]] for e in src.elements}
                break
    return MonotoneMap(src, tgt, table)


@given(monotone_maps())
@settings(max_examples=150, deadline=None)
def test_adjunction_laws(u):
    adj = left_adjoint(u)
    if adj is not None:
        for a in u.target.elements:
            assert u.target.leq(a, u.table[adj.table[a]])  # unit
        for b in u.source.elements:
            assert u.source.leq(adj.table[u.table[b]], b)  # counit
    radj = right_adjoint(u)
    if radj is not None:
        for a in u.target.elements:
            assert u.target.leq(u.table[radj.table[a]], a)
        for b in u.source.elements:
            assert u.source.leq(b, radj.table[u.table[b]])


def test_msl_hom_identity_and_failure():
    assert is_msl_hom(MonotoneMap.identity(THREE))
    with pytest.raises(StructureMissing):
        topless = FinPoset(["a", "b"], [("a", "a"), ("b", "b")])
        is_msl_hom(MonotoneMap.identity(topless))


def test_heyting_hom_sierpinski_point_failure():
    # preimage along the closed-point inclusion 1 -> S: sends empty, {a} to
    # empty and X to the point; implication is not preserved
    frame_s = sierpinski_frame()
    frame_1 = chain(2)
    m = MonotoneMap(frame_s, frame_1,
                    {"empty": "c0", "a": "c0", "X": "c1"})
    v = is_heyting_hom(m)
    assert v.is_refuted
    assert v.counterexample["kind"] == "hom_implication"


def test_heyting_hom_boolean_preimage():
    images = (0, 1, 1)
    big, small = powerset_poset(2), powerset_poset(3)
    m = MonotoneMap(big, small, {f"e{mask}": f"e{preimage(images, mask)}"
                                 for mask in range(4)})
    assert is_heyting_hom(m)


def test_reversed_swaps_bounds():
    ops = THREE.reversed().ops
    assert ops.top == "c0" and ops.bottom == "c2"
    assert THREE.reversed().reversed().same_order(THREE)


@pytest.mark.parametrize("p", [TWO, THREE, sierpinski_frame(),
                               powerset_poset(2), powerset_poset(3)])
def test_heyting_implication_residuation(p):
    """c <= (a -> b) iff c meet a <= b, over every triple."""
    ops = p.ops
    assert ops.heyting_implication is not None
    for a in p.elements:
        for b in p.elements:
            impl = ops.heyting_implication[(a, b)]
            for c in p.elements:
                assert p.leq(c, impl) == p.leq(ops.meet[(c, a)], b)
