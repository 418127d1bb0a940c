import pytest

from doctrinelab.doctrine import (Doctrine, frobenius, has_bottoms, has_tops,
                                  is_existential, is_pi_doctrine, is_primary,
                                  is_propositional, is_sigma_doctrine,
                                  validate_doctrine)
from doctrinelab.poset import FinPoset, MonotoneMap
from doctrinelab.recheck import recheck
from doctrinelab.verdicts import ShapeMismatch

from oracles import direct_image, forall_image, parse_arrow


def test_triv_validates(triv):
    assert validate_doctrine(triv)


def test_ps_validates(ps20):
    assert validate_doctrine(ps20)


def _fault_injected(ps20, breaker):
    """Copy of PS(2,0) with one reindex table tampered with."""
    reindex = dict(ps20.reindex)
    name, table = breaker(ps20)
    old = reindex[name]
    reindex[name] = MonotoneMap(old.source, old.target, table, validate=False)
    return Doctrine(ps20.base, ps20.fibers, reindex, name="PS-broken")


def test_fault_injected_composite_refuted(ps20):
    def b(d):
        name = "S2>S2:1,0"
        table = dict(d.reindex[name].table)
        table["e1"], table["e2"] = table["e2"], table["e1"]
        return name, table
    broken = _fault_injected(ps20, b)
    v = validate_doctrine(broken)
    assert v.is_refuted
    assert v.counterexample["kind"] in ("functor_composition", "not_monotone",
                                        "functor_identity")
    assert recheck(broken, v)


def test_shape_mismatch_distinct(ps20):
    reindex = dict(ps20.reindex)
    del reindex["S1>S2:0"]
    broken = Doctrine(ps20.base, ps20.fibers, reindex, name="PS-shapeless")
    with pytest.raises(ShapeMismatch):
        validate_doctrine(broken)


def test_ps_primary_and_propositional(ps20):
    assert is_primary(ps20)
    assert is_propositional(ps20)
    assert has_tops(ps20) and has_bottoms(ps20)


def test_sier_primary_not_propositional(sier):
    assert is_primary(sier)
    v = is_propositional(sier)
    assert v.is_refuted
    assert v.counterexample["arrow"] == "U>S:1"
    assert recheck(sier, v)


def test_antichain_fiber_not_applicable(triv):
    antichain = FinPoset(["x", "y"], [("x", "x"), ("y", "y")])
    fibers = {o: antichain for o in triv.base.objects}
    reindex = {n: MonotoneMap.identity(antichain) for n in triv.base.arrows}
    d = Doctrine(triv.base, fibers, reindex, name="antichain")
    v = is_primary(d)
    assert v.is_na and "no meets" in v.reason


def test_ps_sigma_pi_doctrine(ps20):
    assert is_sigma_doctrine(ps20)
    assert is_pi_doctrine(ps20)
    assert is_sigma_doctrine(ps20, restricted=True)
    assert is_pi_doctrine(ps20, restricted=True)


def test_bc_against_set_oracles(ps20):
    """Adjoints along every projection agree with the direct/forall image."""
    base = ps20.base
    for row in base.first_level_rows:
        nb = base.sizes[row.right]
        for proj, oracle_axis in ((row.proj1, 1), (row.proj2, 0)):
            _, cod_size, images = parse_arrow(proj)
            sigma = ps20.sigma(proj)
            pi = ps20.pi(proj)
            assert sigma is not None and pi is not None
            for e in ps20.fibers[row.obj].elements:
                mask = int(e[1:])
                assert sigma.table[e] == f"e{direct_image(images, mask)}"
                assert pi.table[e] == f"e{forall_image(images, cod_size, mask)}"


def test_triv_sigma_trivially(triv):
    assert is_sigma_doctrine(triv)
    assert is_pi_doctrine(triv)


def test_missing_adjoint_not_applicable():
    # 2-object thin base with a fiber map lacking a left adjoint:
    # reindex sends bottom |-> bottom, top |-> middle of a 3-chain
    from doctrinelab.catalog import semilattice_category
    base, _ = semilattice_category(["a", "b"], [("a", "b")])
    two = FinPoset(["c0", "c1"], [("c0", "c1"), ("c0", "c0"), ("c1", "c1")])
    three = FinPoset(["d0", "d1", "d2"],
                     [("d0", "d1"), ("d1", "d2"), ("d0", "d2"),
                      ("d0", "d0"), ("d1", "d1"), ("d2", "d2")])
    fibers = {"a": three, "b": two}
    reindex = {
        base.identity["a"]: MonotoneMap.identity(three),
        base.identity["b"]: MonotoneMap.identity(two),
        "a>b": MonotoneMap(two, three, {"c0": "d0", "c1": "d1"}),
    }
    d = Doctrine(base, fibers, reindex, name="no-adjoint")
    assert validate_doctrine(d)
    v = is_sigma_doctrine(d)
    assert v.is_na and "adjoint missing" in v.reason


def test_frobenius_and_existential(ps20, triv):
    assert frobenius(ps20)
    assert is_existential(ps20)
    assert is_existential(triv)


def test_fault_injected_sigma_refutes_frobenius_or_bc(ps20):
    # break one projection's reindexing so its adjoint is no longer the image
    def b(d):
        row = d.base.products[("S2", "S2")]
        name = row.proj1
        table = dict(d.reindex[name].table)
        table["e1"], table["e2"] = table["e2"], table["e1"]
        return name, table
    broken = _fault_injected(ps20, b)
    results = [validate_doctrine(broken), is_sigma_doctrine(broken),
               frobenius(broken)]
    assert any(v.is_refuted for v in results)


def test_full_bc_implies_restricted_on_catalog(ps20, ps11, sier, triv, sl3):
    for d in (ps20, ps11, sier, triv, sl3):
        if is_sigma_doctrine(d):
            assert is_sigma_doctrine(d, restricted=True), d.name
        if is_pi_doctrine(d):
            assert is_pi_doctrine(d, restricted=True), d.name


def test_classification_cached(ps20):
    first = is_primary(ps20)
    assert is_primary(ps20) is first


def test_empty_fiber_validates_but_blocks_choice_lemmas():
    # degenerate fibers pass validation; the choice lemmas go not-applicable
    from doctrinelab import theorems
    from doctrinelab.catalog import semilattice_category
    base, _ = semilattice_category(["a"], [("a", "a")])
    empty = FinPoset((), ())
    d = Doctrine(base, {"a": empty},
                 {base.identity["a"]: MonotoneMap(empty, empty, {},
                                                  validate=False)},
                 name="empty-fiber")
    assert validate_doctrine(d)
    r = theorems.check_theorem("zero", d)
    assert not r.hypotheses_hold and r.conclusion.is_na
