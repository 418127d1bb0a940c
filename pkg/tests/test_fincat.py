import pytest

from doctrinelab.fincat import Arrow, ArrowClass, FinCategory
from doctrinelab.recheck import recheck
from doctrinelab.verdicts import MalformedCategory

from oracles import parse_arrow


def one_object_category():
    return FinCategory(["A"], [Arrow("id", "A", "A")], {"A": "id"},
                       {("id", "id"): "id"})


def test_one_object_category_validates():
    assert one_object_category().validate()


def test_missing_composite_is_distinct_error():
    arrows = [Arrow("id", "A", "A"), Arrow("f", "A", "A")]
    c = FinCategory(["A"], arrows, {"A": "id"},
                    {("id", "id"): "id", ("f", "id"): "f", ("id", "f"): "f"})
    with pytest.raises(MalformedCategory, match="incomplete table"):
        c.validate()


def test_identity_law_violation_refuted():
    arrows = [Arrow("id", "A", "A"), Arrow("f", "A", "A")]
    c = FinCategory(["A"], arrows, {"A": "id"},
                    {("id", "id"): "id", ("f", "id"): "id",
                     ("id", "f"): "f", ("f", "f"): "f"})
    v = c.validate()
    assert v.is_refuted and v.counterexample["kind"] == "identity_law"


def test_ps_window_validates(ps20):
    assert ps20.base.validate()


def test_diagonal_is_pair_of_identities(ps20):
    base = ps20.base
    delta = base.diagonal("S2")
    row = base.products[("S2", "S2")]
    assert base.compose(row.proj1, delta) == base.identity["S2"]
    assert base.compose(row.proj2, delta) == base.identity["S2"]
    dom, cod, images = parse_arrow(delta)
    assert images == (0, 3)  # x |-> (x, x) under pair coding


def test_ps_product_sizes(ps20):
    # oracle: the cartesian product of {0} and {0,1} has two pairs
    row = ps20.base.product("S1", "S2")
    assert ps20.base.sizes[row.obj] == 2


def test_product_with_terminal_is_iso(ps20, ps11, sier, triv, sl3):
    for d in (ps20, ps11, sier, triv, sl3):
        base = d.base
        t = base.terminal()
        for a in base.window:
            row = base.products[(a, t)]
            # proj1 is an isomorphism
            assert base.is_iso(row.proj1), (d.name, a)


def test_pair_uniqueness(ps20):
    base = ps20.base
    f = "S2>S2:1,0"
    g = "S2>S1:0,0"
    h = base.pair(f, g)
    row = base.products[("S2", "S1")]
    assert base.compose(row.proj1, h) == f
    assert base.compose(row.proj2, h) == g
    mediators = [k for k in base.hom("S2", row.obj)
                 if base.compose(row.proj1, k) == f
                 and base.compose(row.proj2, k) == g]
    assert mediators == [h]


def test_pullback_along_identity(ps20):
    base = ps20.base
    g = "S1>S2:0"
    s = base.pullback(base.identity["S2"], g)
    assert s is not None
    assert base.verify_square_is_pullback(s)
    assert base.sizes[s.apex] == base.sizes["S1"]


def test_ps_pullback_of_disjoint_points_is_empty(ps20):
    # oracle: pullback of {0} -> {0,1} <- {1} in sets is empty
    s = ps20.base.pullback("S1>S2:0", "S1>S2:1")
    assert s is not None and s.apex == "S0"


def test_thin_pullback_is_meet(sl3):
    s = sl3.base.pullback("L1>L2", "L0>L2")
    assert s is not None and s.apex == "L0"
    assert sl3.base.verify_square_is_pullback(s)


def test_identities_monic(ps20):
    for o in ps20.base.window:
        assert ps20.base.is_monic(ps20.base.identity[o])


def test_noninjective_map_not_monic(ps20):
    v = ps20.base.is_monic("S2>S1:0,0")
    assert v.is_refuted
    g, h = v.counterexample["pair"]
    assert g != h
    assert recheck(ps20, v)


def test_empty_set_stable_initial(ps20):
    assert ps20.base.is_stable_initial("S0")
    v = ps20.base.is_stable_initial("S1")
    assert v.is_refuted
    assert recheck(ps20, v)


def test_subobjects_of_two_element_set(ps20):
    sub = ps20.base.subobject_poset("S2")
    assert len(sub) == 4
    ops = sub.ops
    assert ops.top is not None and ops.bottom is not None
    atoms = [e for e in sub.elements
             if e not in (ops.top, ops.bottom)]
    assert len(atoms) == 2
    a, b = atoms
    assert not sub.leq(a, b) and not sub.leq(b, a)


def test_projection_class_stable_on_catalog(ps20, ps11, sier, triv, sl3):
    for d in (ps20, ps11, sier, triv, sl3):
        prj = d.base.projection_class()
        assert d.base.is_pullback_stable(prj), d.name


def test_thin_class_stability_iff_meet_closed(sl3):
    base = sl3.base
    not_closed = ArrowClass("test", ("L1>L2",))
    v = base.is_pullback_stable(not_closed)
    assert v.is_refuted
    assert recheck(sl3, v)
    closed = ArrowClass("test2", ("L1>L2", "L0>L1", "L0>L2",
                                  "L0>L0", "L1>L1", "L2>L2"))
    assert base.is_pullback_stable(closed)


def test_window_descriptor_mentions_presentation(ps20):
    assert "finset" in ps20.base.window_descriptor


def test_unmaterialized_product_window_exceeded(ps20):
    from doctrinelab.verdicts import WindowExceeded
    with pytest.raises(WindowExceeded):
        ps20.base.product("S4", "S4")
