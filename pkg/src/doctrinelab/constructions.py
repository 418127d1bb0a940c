"""Derived constructions: existential quantification from equality,
implication from comprehension and Pi, co-comprehension from negation,
graphs, the order-reversed dual doctrine, and the eaco/heaco pipeline that
manufactures a tripos on the dual.
"""

from __future__ import annotations

from typing import Mapping

from .doctrine import Doctrine, is_existential, is_sigma_doctrine
from .logic import (ComprehensionWitness, EpsilonTable, ac_check,
                    cocomprehension_class, cocomprehension_squares,
                    cocomprehension_table, comprehension_table, find_equality,
                    is_elementary, is_full_cocomprehension, is_full_comprehension,
                    is_higher_order, is_tripos, negation, validate_witness)
from .poset import MonotoneMap
from .verdicts import StructureMissing, Verdict, combine

__all__ = [
    "derived_sigma",
    "derived_implication",
    "derived_implication_tables",
    "cocomp_from_negation",
    "graph",
    "dualize",
    "eaco_compat",
    "eaco_compat_all",
    "is_eaco",
    "is_heaco",
    "heaco_to_tripos",
]


def derived_sigma(d: Doctrine, f: str, alpha: str) -> str:
    """Left adjoint along any arrow, computed from the equality predicate:
    the image of ``alpha`` is the projection-quantified graph formula."""
    eq = find_equality(d)
    if eq is None:
        raise StructureMissing("derived sigma needs an elementary doctrine")
    if not is_existential(d):
        raise StructureMissing("derived sigma needs an existential doctrine")
    base = d.base
    a, b = base.dom(f), base.cod(f)
    row = base.products[(a, b)]
    ops = d.fibers[row.obj].ops
    f_times_id = base.times(f, base.identity[b])
    graph_part = d.star(f_times_id, eq.over(b))
    alpha_part = d.star(row.proj1, alpha)
    adj = d.sigma(row.proj2)
    if adj is None:
        raise StructureMissing(f"no left adjoint along projection {row.proj2}")
    return adj.table[ops.meet[(graph_part, alpha_part)]]


def derived_implication(d: Doctrine, obj: str, phi: str, psi: str) -> str:
    """phi -> psi as the Pi along the comprehension of phi of the restriction
    of psi."""
    w = comprehension_table(d).get((obj, phi))
    if w is None:
        raise StructureMissing(f"no comprehension witness for {phi} over {obj}")
    adj = d.pi(w.arrow)
    if adj is None:
        raise StructureMissing(f"no right adjoint along {w.arrow}")
    return adj.table[d.star(w.arrow, psi)]


def derived_implication_tables(d: Doctrine) -> dict[str, Mapping] | None:
    """The comprehension-derived implication on every window fiber, or None
    when some witness or adjoint is missing."""
    table = comprehension_table(d)
    out: dict[str, Mapping] = {}
    for obj in d.base.window:
        fiber = d.fibers[obj]
        tab: dict[tuple[str, str], str] = {}
        for phi in fiber.elements:
            w = table.get((obj, phi))
            if w is None:
                return None
            adj = d.pi(w.arrow)
            if adj is None:
                return None
            restrict = d.reindex[w.arrow].table
            for psi in fiber.elements:
                tab[(phi, psi)] = adj.table[restrict[psi]]
        out[obj] = tab
    return out


def cocomp_from_negation(d: Doctrine, obj: str, alpha: str) -> ComprehensionWitness:
    """The co-comprehension of ``alpha`` as the comprehension of its negation."""
    neg = negation(d)
    if neg is None:
        raise StructureMissing("no negation table")
    w = comprehension_table(d).get((obj, neg.neg(obj, alpha)))
    if w is None:
        raise StructureMissing(
            f"no comprehension witness for the negation of {alpha} over {obj}")
    out = ComprehensionWitness(obj, alpha, w.arrow, dual=True)
    if not validate_witness(d, out):
        raise StructureMissing(
            f"comprehension of the negation of {alpha} fails the"
            " co-comprehension universal property")
    return out


def graph(d: Doctrine, f: str) -> str:
    """The graph of ``f: X -> A``: the codomain equality predicate pulled
    back along ``f x id``; an element of the fiber over X x A."""
    eq = find_equality(d)
    if eq is None:
        raise StructureMissing("graphs need an elementary doctrine")
    base = d.base
    a = base.cod(f)
    if a not in eq.delta:
        raise StructureMissing(f"no equality predicate over {a}")
    return d.star(base.times(f, base.identity[a]), eq.over(a))


def dualize(d: Doctrine) -> Doctrine:
    """Order-reversed fibers, identical reindexing tables."""
    fibers = {o: p.reversed() for o, p in d.fibers.items()}
    reindex = {}
    for n, m in d.reindex.items():
        arr = d.base.arrows[n]
        reindex[n] = MonotoneMap(fibers[arr.cod], fibers[arr.dom], m.table,
                                 validate=False)
    source = dict(d.source)
    source["dual"] = not source.get("dual", False)
    suffix = "^op"
    name = d.name[:-len(suffix)] if d.name.endswith(suffix) else d.name + suffix
    return Doctrine(d.base, fibers, reindex, name=name, source=source)


# -- eaco / heaco --------------------------------------------------------------

def _choice_value(d: Doctrine, eps: EpsilonTable,
                  w: ComprehensionWitness) -> str | None:
    """<epsilon, id>* of the graph of a co-comprehension arrow ``w``; when the
    domain is stable initial the bottom-assignment left adjoint evaluates the
    projection-quantified graph instead."""
    base = d.base
    u, b = base.dom(w.arrow), base.cod(w.arrow)
    g = graph(d, w.arrow)
    if base.is_stable_initial(u):
        bot = d.bottom(b)
        if bot is None:
            return None
        return bot
    psi_swapped = d.star(base.swap(b, u), g)
    e = eps.get(b, u, psi_swapped)
    if e is None:
        e = _fresh_epsilon(d, b, u, psi_swapped)
        if e is None:
            return None
    return d.star(base.pair(e, base.identity[b]), g)


def _fresh_epsilon(d: Doctrine, gamma: str, a: str, psi: str) -> str | None:
    from .logic import epsilon
    return epsilon(d, gamma, a, psi)


def eaco_compat(d: Doctrine, f: str, alpha: str) -> Verdict:
    """The choice-versus-substitution equation for one arrow and predicate."""
    eq = is_elementary(d)
    if not eq:
        return Verdict.not_applicable(f"not elementary: {eq.reason or 'refuted'}")
    cocomp = is_full_cocomprehension(d)
    if not cocomp:
        return Verdict.not_applicable("no full co-comprehension")
    ac, eps = ac_check(d)
    if not ac:
        return Verdict.not_applicable(f"AC does not hold: {ac.reason or 'refuted'}")
    base = d.base
    a = base.cod(f)
    table = cocomprehension_table(d)
    w_a = table.get((a, alpha))
    pulled = d.star(f, alpha)
    w_x = table.get((base.dom(f), pulled))
    if w_a is None or w_x is None:
        return Verdict.not_applicable("missing co-comprehension witness")
    lhs_val = _choice_value(d, eps, w_a)
    rhs_val = _choice_value(d, eps, w_x)
    if lhs_val is None or rhs_val is None:
        return Verdict.not_applicable("no epsilon witness for a graph")
    lhs = d.star(f, lhs_val)
    if lhs != rhs_val:
        return Verdict.refuted(kind="eaco_compat", arrow=f, alpha=alpha,
                               lhs=lhs, rhs=rhs_val)
    return Verdict.holds(d.window_descriptor)


def eaco_compat_all(d: Doctrine) -> Verdict:
    def compute() -> Verdict:
        for f in d.base.window_arrows:
            for alpha in d.fibers[d.base.cod(f)].elements:
                v = eaco_compat(d, f, alpha)
                if not v:
                    return v
        return Verdict.holds(d.window_descriptor)
    return d.cached(("eaco_compat_all",), compute)


def is_eaco(d: Doctrine) -> Verdict:
    """Elementary, full co-comprehension, AC, and the compatibility equation."""
    def compute() -> Verdict:
        return combine(d.window_descriptor,
                       is_elementary(d),
                       is_full_cocomprehension(d),
                       ac_check(d)[0],
                       eaco_compat_all(d))
    return d.cached(("is_eaco",), compute)


def is_heaco(d: Doctrine) -> Verdict:
    def compute() -> Verdict:
        return combine(d.window_descriptor, is_eaco(d), is_higher_order(d))
    return d.cached(("is_heaco",), compute)


def heaco_to_tripos(d: Doctrine) -> tuple[Doctrine, Verdict]:
    """The dual of a heaco, with the verdict that it is a tripos with full
    comprehension; the restricted Beck-Chevalley condition over the
    co-comprehension class is re-verified directly so a failure localizes."""
    clauses = [("elementary", is_elementary(d)),
               ("full_cocomprehension", is_full_cocomprehension(d)),
               ("ac", ac_check(d)[0]),
               ("compatibility", eaco_compat_all(d)),
               ("higher_order", is_higher_order(d))]
    failed = [name for name, v in clauses if not v]
    dual = dualize(d)
    if failed:
        return dual, Verdict.not_applicable(
            "heaco checklist failed at: " + ", ".join(failed))
    restricted = is_sigma_doctrine(d, cocomprehension_class(d), restricted=True,
                                   squares=cocomprehension_squares(d))
    return dual, combine(d.window_descriptor,
                         restricted,
                         is_tripos(dual),
                         is_full_comprehension(dual))
