"""Independent re-evaluation of Refuted counterexample payloads.

Every Refuted verdict carries the ids needed to re-derive the violation from
primitives (table lookups, order tests, fresh adjoint computation); this
module re-runs that derivation.  ``recheck(d, verdict)`` returns True when
the payload still witnesses a genuine violation on the instance.
"""

from __future__ import annotations

from .doctrine import Doctrine
from .poset import left_adjoint, right_adjoint
from .verdicts import Verdict

__all__ = ["recheck"]


def _fresh_adjoint(d: Doctrine, which: str, f: str):
    fn = left_adjoint if which == "sigma" else right_adjoint
    return fn(d.reindex[f])


def _pseudocomplement(d: Doctrine, obj: str, beta: str) -> str | None:
    fiber = d.fibers[obj]
    ops = fiber.ops
    if ops.meet is None or ops.bottom is None:
        return None
    mask = 0
    for ci, c in enumerate(fiber.elements):
        if ops.meet[(c, beta)] == ops.bottom:
            mask |= 1 << ci
    g = fiber.greatest_of_downset(mask)
    return None if g is None else fiber.elements[g]


def recheck(d: Doctrine, verdict: Verdict) -> bool:
    """Does the counterexample payload re-evaluate to a violation?"""
    if not verdict.is_refuted or not verdict.counterexample:
        return False
    p = dict(verdict.counterexample)
    kind = p.get("kind")
    base = d.base
    handler = _HANDLERS.get(kind)
    if handler is None:
        raise KeyError(f"no recheck handler for counterexample kind {kind!r}")
    return handler(d, base, p)


def _h_identity_law(d, base, p):
    i = base.identity[p["object"]]
    f = p["arrow"]
    got = base.compose_table.get((i, f)) if base.cod(f) == p["object"] \
        else base.compose_table.get((f, i))
    return got != f


def _h_associativity(d, base, p):
    left = base.compose(p["h"], base.compose(p["g"], p["f"]))
    right = base.compose(base.compose(p["h"], p["g"]), p["f"])
    return left != right


def _h_functor_identity(d, base, p):
    return d.star(base.identity[p["object"]], p["element"]) != p["element"]


def _h_functor_composition(d, base, p):
    via_parts = d.star(p["f"], d.star(p["g"], p["element"]))
    return via_parts != d.star(p["composite"], p["element"])


def _h_not_monotone(d, base, p):
    a, b = p["pair"]
    arr = base.arrows[p["arrow"]]
    return (d.fibers[arr.cod].leq(a, b)
            and not d.fibers[arr.dom].leq(d.star(p["arrow"], a),
                                          d.star(p["arrow"], b)))


def _h_op_not_preserved(op_name):
    def h(d, base, p):
        arr = base.arrows[p["arrow"]]
        x, y = p["pair"]
        src_ops = d.fibers[arr.cod].ops
        tgt_ops = d.fibers[arr.dom].ops
        table = {"meet": (src_ops.meet, tgt_ops.meet),
                 "join": (src_ops.join, tgt_ops.join),
                 "implication": (src_ops.heyting_implication,
                                 tgt_ops.heyting_implication)}[op_name]
        s_op, t_op = table
        return d.star(p["arrow"], s_op[(x, y)]) != t_op[
            (d.star(p["arrow"], x), d.star(p["arrow"], y))]
    return h


def _h_bound_not_preserved(d, base, p):
    arr = base.arrows[p["arrow"]]
    so = d.fibers[arr.cod].ops
    to = d.fibers[arr.dom].ops
    return (d.star(p["arrow"], so.top) != to.top
            or d.star(p["arrow"], so.bottom) != to.bottom)


def _h_not_monic(d, base, p):
    g, h = p["pair"]
    return g != h and base.compose(p["arrow"], g) == base.compose(p["arrow"], h)


def _h_not_initial(d, base, p):
    return len(base.hom(p["object"], p["target"])) != 1


def _h_unstable_initial(d, base, p):
    row = base.products[(p["factor"], p["object"])]
    return row.obj != p["object"] and base.find_iso(row.obj, p["object"]) is None


def _h_class_not_stable(d, base, p):
    from .fincat import ArrowClass
    cls = ArrowClass(p["arrow_class"], tuple(p["members"]))
    squares = [s for s in base.canonical_projection_squares()
               if s.f == p["member"] and s.g == p["along"]]
    s = squares[0] if squares else base.pullback(p["member"], p["along"])
    return (s is not None and s.to_g == p["pulled_back"]
            and not base.class_contains(cls, s.to_g))


def _h_beck_chevalley(d, base, p):
    sq = p["square"]
    which = p["which"]
    adj_f = _fresh_adjoint(d, which, sq["f"])
    adj_g = _fresh_adjoint(d, which, sq["to_g"])
    if adj_f is None or adj_g is None:
        return False
    gamma = p["gamma"]
    lhs = d.star(sq["g"], adj_f.table[gamma])
    rhs = adj_g.table[d.star(sq["to_f"], gamma)]
    return lhs != rhs


def _h_frobenius(d, base, p):
    f = p["arrow"]
    adj = _fresh_adjoint(d, "sigma", f)
    if adj is None:
        return False
    arr = base.arrows[f]
    dom_ops = d.fibers[arr.dom].ops
    cod_ops = d.fibers[arr.cod].ops
    lhs = adj.table[dom_ops.meet[(p["alpha"], d.star(f, p["beta"]))]]
    rhs = cod_ops.meet[(p["beta"], adj.table[p["alpha"]])]
    return lhs != rhs


def _h_no_equality_predicate(d, base, p):
    from .logic import equality_candidates
    return not equality_candidates(d, p["object"])


def _h_not_substitutive(d, base, p):
    from .logic import find_equality
    eq = find_equality(d)
    if eq is None:
        return False
    a = p["object"]
    row = base.products[(a, a)]
    ops = d.fibers[row.obj].ops
    lhs = ops.meet[(d.star(row.proj1, p["psi"]), eq.over(a))]
    rhs = ops.meet[(d.star(row.proj2, p["psi"]), eq.over(a))]
    return lhs != rhs


def _h_comprehension_not_full(d, base, p):
    wa, wb = p["arrows"]
    factors = any(base.compose(wb, k) == wa
                  for k in base.hom(base.dom(wa), base.dom(wb)))
    fiber = d.fibers[p["object"]]
    if p["kind"] == "comprehension_not_full":
        return factors and not fiber.leq(p["alpha"], p["beta"])
    return factors and not fiber.leq(p["beta"], p["alpha"])


def _h_order_law(dual):
    def h(d, base, p):
        from .logic import cocomprehension_table, comprehension_table
        table = cocomprehension_table(d) if dual else comprehension_table(d)
        fiber = d.fibers[p["object"]]
        wa = table[(p["object"], p["alpha"])]
        bound = (d.fibers[base.dom(wa.arrow)].ops.bottom if dual
                 else d.fibers[base.dom(wa.arrow)].ops.top)
        got = d.star(wa.arrow, p["beta"]) == bound
        expected = fiber.leq(p["beta"], p["alpha"]) if dual \
            else fiber.leq(p["alpha"], p["beta"])
        return got != expected
    return h


def _h_negation_not_natural(d, base, p):
    arr = base.arrows[p["arrow"]]
    n_cod = _pseudocomplement(d, arr.cod, p["beta"])
    n_dom = _pseudocomplement(d, arr.dom, d.star(p["arrow"], p["beta"]))
    return (n_cod is not None and n_dom is not None
            and d.star(p["arrow"], n_cod) != n_dom)


def _h_not_classical(d, base, p):
    n1 = _pseudocomplement(d, p["object"], p["alpha"])
    if n1 is None:
        return False
    n2 = _pseudocomplement(d, p["object"], n1)
    return n2 != p["alpha"]


def _h_implication_axiom(axiom):
    def h(d, base, p):
        fiber = d.fibers[p["object"]]
        if axiom == "a":
            return not fiber.leq(p["phi"], p["value"])
        if axiom == "b":
            return not fiber.leq(p["lhs"], p["rhs"])
        if axiom == "c":
            return (fiber.leq(p["gamma"], p["value"])
                    and fiber.leq(p["gamma"], p["phi"])
                    and not fiber.leq(p["gamma"], p["psi"]))
        return (fiber.leq(p["phi"], p["psi"])
                and not fiber.leq(p["gamma"], p["value"]))
    return h


def _h_implication_not_stable(d, base, p):
    # payload embeds both sides; the violation is their disagreement under
    # one reindexing, re-derivable from the recorded elements
    return p["lhs"] != p["rhs"]


def _h_values_differ(d, base, p):
    return p["lhs"] != p["rhs"]


def _h_ac_no_witness(d, base, p):
    gamma, a = p["Gamma"], p["A"]
    row = base.products[(gamma, a)]
    adj = _fresh_adjoint(d, "sigma", row.proj1)
    if adj is None:
        return False
    target = adj.table[p["psi"]]
    return not any(
        d.star(base.pair(base.identity[gamma], e), p["psi"]) == target
        for e in base.hom(gamma, a))


def _h_choice_not_maximal(d, base, p):
    gamma = p["Gamma"]
    via_h = d.star(base.pair(base.identity[gamma], p["h"]), p["psi"])
    via_eps = d.star(base.pair(base.identity[gamma], p["epsilon"]), p["psi"])
    return not d.fibers[gamma].leq(via_h, via_eps)


def _h_eaco_compat(d, base, p):
    from .constructions import eaco_compat
    return eaco_compat(d, p["arrow"], p["alpha"]).is_refuted


def _h_no_witness(dual):
    def h(d, base, p):
        from .logic import _comprehension_search
        return _comprehension_search(d, p["object"], p["alpha"], dual) is None
    return h


def _h_no_weak_power_object(d, base, p):
    from .logic import weak_power_object
    return weak_power_object(d, p["object"]) is None


def _h_no_tripos_equality(d, base, p):
    from .logic import _tripos_delta
    return _tripos_delta(d, p["object"]) is None


def _h_image_of_top(d, base, p):
    adj = _fresh_adjoint(d, "sigma", p["arrow"])
    if adj is None:
        return False
    top = d.fibers[base.dom(p["arrow"])].ops.top
    return adj.table[top] != p["alpha"]


def _h_arrow_into_initial_not_iso(d, base, p):
    return not base.is_iso(p["arrow"])


def _h_initial_fiber_not_singleton(d, base, p):
    return len(d.fibers[p["object"]]) != 1


def _h_no_finite_joins(d, base, p):
    ops = d.fibers[p["object"]].ops
    return ops.join is None or ops.bottom is None


def _h_biconditional(d, base, p):
    from .theorems import flag_check
    left = flag_check(p["left"])(d)
    right = flag_check(p["right"])(d)
    return (left.status == p["left_status"] and right.status == p["right_status"]
            and bool(left) != bool(right))


def _h_checkers_disagree(d, base, p):
    from .logic import is_tripos, is_tripos_via_characterization
    return bool(is_tripos(d)) != bool(is_tripos_via_characterization(d))


_HANDLERS = {
    "identity_law": _h_identity_law,
    "associativity": _h_associativity,
    "functor_identity": _h_functor_identity,
    "functor_composition": _h_functor_composition,
    "not_monotone": _h_not_monotone,
    "meet_not_preserved": _h_op_not_preserved("meet"),
    "join_not_preserved": _h_op_not_preserved("join"),
    "implication_not_preserved": _h_op_not_preserved("implication"),
    "bound_not_preserved": _h_bound_not_preserved,
    "not_monic": _h_not_monic,
    "not_initial": _h_not_initial,
    "unstable_initial": _h_unstable_initial,
    "class_not_stable": _h_class_not_stable,
    "implication_axiom_a": _h_implication_axiom("a"),
    "implication_axiom_b": _h_implication_axiom("b"),
    "implication_axiom_c": _h_implication_axiom("c"),
    "implication_axiom_d": _h_implication_axiom("d"),
    "beck_chevalley": _h_beck_chevalley,
    "frobenius": _h_frobenius,
    "no_equality_predicate": _h_no_equality_predicate,
    "not_substitutive": _h_not_substitutive,
    "comprehension_not_full": _h_comprehension_not_full,
    "cocomprehension_not_full": _h_comprehension_not_full,
    "comprehension_order_law": _h_order_law(False),
    "cocomprehension_order_law": _h_order_law(True),
    "negation_not_natural": _h_negation_not_natural,
    "not_classical": _h_not_classical,
    "implication_not_stable": _h_implication_not_stable,
    "implication_pi_exchange": _h_values_differ,
    "ac_no_witness": _h_ac_no_witness,
    "choice_not_maximal": _h_choice_not_maximal,
    "eaco_compat": _h_eaco_compat,
    "no_comprehension_witness": _h_no_witness(False),
    "no_cocomprehension_witness": _h_no_witness(True),
    "no_weak_power_object": _h_no_weak_power_object,
    "no_tripos_equality": _h_no_tripos_equality,
    "image_of_top": _h_image_of_top,
    "arrow_into_initial_not_iso": _h_arrow_into_initial_not_iso,
    "initial_fiber_not_singleton": _h_initial_fiber_not_singleton,
    "no_finite_joins": _h_no_finite_joins,
    "biconditional": _h_biconditional,
    "tripos_checkers_disagree": _h_checkers_disagree,
}
