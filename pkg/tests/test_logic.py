from doctrinelab import logic
from doctrinelab.recheck import recheck

from oracles import mask_of, pair_code


def test_ps_equality_is_the_diagonal(ps20):
    eq = logic.find_equality(ps20)
    assert eq is not None
    # delta over S2 lives in the fiber over S4; the diagonal pairs are the
    # product codes (0,0) and (1,1)
    diagonal = mask_of([pair_code(0, 0, 2), pair_code(1, 1, 2)])
    assert eq.over("S2") == f"e{diagonal}"
    assert eq.over("S1") == "e1"
    assert eq.over("S0") == "e0"
    assert logic.is_elementary(ps20)


def test_ps_equality_witness_unique(ps20):
    for a in ps20.base.window:
        assert len(logic.equality_candidates(ps20, a)) == 1


def test_triv_equality(triv):
    eq = logic.find_equality(triv)
    assert eq is not None
    assert all(delta == "t" for delta in eq.delta.values())


def test_sier_not_elementary(sier):
    v = logic.is_elementary(sier)
    assert v.is_refuted
    assert v.counterexample == {"kind": "no_equality_predicate", "object": "S"}
    assert recheck(sier, v)


def test_substitutive_frozen_example(ps20):
    eq = logic.find_equality(ps20)
    base = ps20.base
    row = base.products[("S2", "S2")]
    psi = "e1"  # the subset {0}
    ops = ps20.fibers[row.obj].ops
    lhs = ops.meet[(ps20.star(row.proj1, psi), eq.over("S2"))]
    rhs = ops.meet[(ps20.star(row.proj2, psi), eq.over("S2"))]
    # both sides are {(0,0)}, the single product point 0
    assert lhs == rhs == f"e{1 << pair_code(0, 0, 2)}"


def test_substitutive_catalog(ps20, ps11, triv, sl3):
    for d in (ps20, ps11, triv, sl3):
        eq = logic.find_equality(d)
        if eq is not None:
            assert logic.check_substitutive(d, eq), d.name


# -- comprehension ----------------------------------------------------------------

def test_comprehension_of_top_is_iso(ps20, ps11, sier, triv, sl3):
    for d in (ps20, ps11, sier, triv, sl3):
        if not logic.has_comprehension(d):
            continue
        for a in d.base.window:
            top = d.top(a)
            w = logic.comprehension(d, a, top)
            assert w is not None and d.base.is_iso(w.arrow), (d.name, a)


def test_ps_comprehension_of_singleton(ps20):
    w = logic.comprehension(ps20, "S2", "e1")
    assert w.arrow == "S1>S2:0"
    assert ps20.base.sizes[ps20.base.dom(w.arrow)] == 1
    assert ps20.base.is_monic(w.arrow)


def test_sier_comprehension_is_subspace_inclusion(sier):
    # alpha = {a}, the open point
    w = logic.comprehension(sier, "S", "e1")
    assert w is not None and w.arrow == "U>S:0"
    assert logic.is_full_comprehension(sier)


def test_full_comprehension_order_law(ps20):
    assert logic.is_full_comprehension(ps20)
    table = logic.comprehension_table(ps20)
    for a in ps20.base.window:
        fiber = ps20.fibers[a]
        for alpha in fiber.elements:
            w = table[(a, alpha)]
            top = ps20.top(ps20.base.dom(w.arrow))
            for beta in fiber.elements:
                assert fiber.leq(alpha, beta) == (ps20.star(w.arrow, beta) == top)


def test_comprehension_squares_are_pullbacks(ps20, sier):
    for d in (ps20, sier):
        for s in logic.comprehension_squares(d):
            assert d.base.verify_square_is_pullback(s), (d.name, s)


# -- co-comprehension --------------------------------------------------------------

def test_ps_cocomprehension_is_complement_inclusion(ps20):
    w = logic.cocomprehension(ps20, "S2", "e1")
    assert w.arrow == "S1>S2:1"  # inclusion of {1}
    assert logic.is_full_cocomprehension(ps20)


def test_sier_cocomprehension_is_closed_inclusion(sier):
    w = logic.cocomprehension(sier, "S", "e1")
    assert w is not None and w.arrow == "U>S:1"  # the closed point b
    assert logic.is_full_cocomprehension(sier)


def test_cocomprehension_of_bottom_is_iso(ps20, triv):
    for d in (ps20, triv):
        for a in d.base.window:
            w = logic.cocomprehension(d, a, d.bottom(a))
            assert w is not None and d.base.is_iso(w.arrow)


def test_dual_order_law(ps20):
    table = logic.cocomprehension_table(ps20)
    for a in ps20.base.window:
        fiber = ps20.fibers[a]
        for alpha in fiber.elements:
            for beta in fiber.elements:
                w_beta = table[(a, beta)]
                bottom = ps20.bottom(ps20.base.dom(w_beta.arrow))
                assert fiber.leq(alpha, beta) == \
                    (ps20.star(w_beta.arrow, alpha) == bottom)


# -- negation -----------------------------------------------------------------------

def test_ps_negation_is_complement_and_classical(ps20):
    table = logic.negation(ps20)
    assert table is not None
    assert table.neg("S2", "e1") == "e2"
    assert table.neg("S2", "e0") == "e3"
    assert logic.is_classical(ps20)


def test_sier_negation_fails_naturality(sier):
    v = logic.has_negation(sier)
    assert v.is_refuted
    ce = v.counterexample
    assert ce["kind"] == "negation_not_natural"
    assert ce["arrow"] == "U>S:1" and ce["beta"] == "e1"
    # f*(not {a}) = empty while not(f*{a}) = top of the point fiber
    assert ce["reindexed_negation"] == "e0"
    assert ce["negation_of_reindexed"] == "e1"
    assert recheck(sier, v)
    assert logic.negation(sier) is None


def test_triv_negation_classical(triv):
    table = logic.negation(triv)
    assert table is not None
    assert all(t == {"t": "t"} for t in table.tables.values())
    assert logic.is_classical(triv)


# -- implication --------------------------------------------------------------------

def test_ps_boolean_implication_passes(ps20):
    tables = logic.heyting_implication_tables(ps20)
    assert tables is not None
    assert logic.implication_axioms(ps20, tables)


def test_triv_implication_passes(triv):
    tables = logic.heyting_implication_tables(triv)
    assert logic.implication_axioms(triv, tables)


def test_projection_implication_refuted(ps20):
    # first projection (a -> b) := a breaks axiom a
    first = {}
    second = {}
    for o in ps20.scope_objects:
        fiber = ps20.fibers[o]
        first[o] = {(a, b): a for a in fiber.elements for b in fiber.elements}
        second[o] = {(a, b): b for a in fiber.elements for b in fiber.elements}
    v = logic.implication_axioms(ps20, first)
    assert v.is_refuted
    # axiom iii and iv-a both genuinely fail; the checker reports the first
    assert v.counterexample["kind"] in ("implication_pi_exchange",
                                        "implication_axiom_a",
                                        "implication_axiom_c")
    assert recheck(ps20, v)
    # second projection (a -> b) := b satisfies a-c but breaks d
    v2 = logic.implication_axioms(ps20, second)
    assert v2.is_refuted
    assert v2.counterexample["kind"] == "implication_axiom_d"
    assert recheck(ps20, v2)


# -- weak power objects ---------------------------------------------------------------

def test_triv_power_object_is_terminal(triv):
    for a in triv.base.window:
        w = logic.weak_power_object(triv, a)
        assert w is not None and w.power == "S1"
    assert logic.is_higher_order(triv)


def test_ps11_power_object(ps11):
    w = logic.weak_power_object(ps11, "S1")
    assert w is not None
    assert w.power == "S2"
    assert w.membership == "e1"
    # defining property: every predicate over S1 x Y is classified
    base = ps11.base
    for y in base.window:
        row = base.products[("S1", y)]
        for phi in ps11.fibers[row.obj].elements:
            chi = w.chi[(y, phi)]
            lifted = base.times(base.identity["S1"], chi)
            assert ps11.star(lifted, w.membership) == phi
    assert logic.is_higher_order(ps11)


def test_ps20_higher_order_na_window(ps20):
    v = logic.is_higher_order(ps20)
    assert v.is_na and "window" in v.reason


# -- axiom of choice ----------------------------------------------------------------

def test_ps_ac_frozen_example(ps20):
    # psi = {(x,0),(x,1)} in the fiber over S2 x S2 with Gamma = A = S2:
    # its projection is {x} and the first constant-0 witness is accepted
    psi = f"e{mask_of([pair_code(0, 0, 2), pair_code(0, 1, 2)])}"
    row = ps20.base.products[("S2", "S2")]
    sigma = ps20.sigma(row.proj1)
    assert sigma.table[psi] == "e1"
    e = logic.epsilon(ps20, "S2", "S2", psi)
    assert e == "S2>S2:0,0"


def test_ps_ac_empty_relation(ps20):
    e = logic.epsilon(ps20, "S2", "S2", "e0")
    assert e is not None  # any arrow works, the first is chosen
    assert e == "S2>S2:0,0"


def test_ps_ac_holds(ps20):
    verdict, eps = logic.ac_check(ps20)
    assert verdict
    initials = set(ps20.base.stable_initials)
    for a in ps20.base.window:
        if a in initials:
            continue
        for gamma in ps20.base.window:
            row = ps20.base.products[(gamma, a)]
            for psi in ps20.fibers[row.obj].elements:
                assert eps.get(gamma, a, psi) is not None


def test_sl3_ac_refuted_by_hom_emptiness(sl3):
    verdict, _ = logic.ac_check(sl3)
    assert verdict.is_refuted
    ce = verdict.counterexample
    assert ce["Gamma"] == "L2" and ce["A"] == "L1" and ce["candidates"] == 0
    assert recheck(sl3, verdict)


def test_epsilon_choice_independence(ps20):
    # any two accepted witnesses give the same substitution value
    verdict, eps = logic.ac_check(ps20)
    base = ps20.base
    for (gamma, a, psi), chosen in eps.entries.items():
        row = base.products[(gamma, a)]
        target = ps20.sigma(row.proj1).table[psi]
        for e in base.hom(gamma, a):
            val = ps20.star(base.pair(base.identity[gamma], e), psi)
            if val == target:
                assert val == ps20.star(
                    base.pair(base.identity[gamma], chosen), psi)


# -- triposes ------------------------------------------------------------------------

def test_tripos_checkers(ps11, triv, sier, ps20):
    assert logic.is_tripos(ps11)
    assert logic.is_tripos_via_characterization(ps11)
    assert logic.is_tripos(triv)
    assert logic.is_tripos_via_characterization(triv)
    assert logic.is_tripos(sier).is_refuted
    assert logic.is_tripos(ps20).is_na  # higher order is window-limited


def test_validate_witness_helper(ps20):
    w = logic.comprehension(ps20, "S2", "e1")
    assert logic.validate_witness(ps20, w)
    bad = logic.ComprehensionWitness("S2", "e1", "S1>S2:1", dual=False)
    assert not logic.validate_witness(ps20, bad)
