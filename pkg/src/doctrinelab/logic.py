"""Logical structure over a doctrine: equality predicates, comprehension and
co-comprehension, negation, implication axioms, weak power objects, the
epsilon-style axiom of choice, and the two tripos checkers.

Search-based witnesses are chosen deterministically: candidate arrows in
canonical order (smallest domain first, then arrow id), candidate fiber
elements in fiber order.  A failed search is conclusive (Refuted) when the
candidate pool is fully known, and NotApplicable when the pool is truncated
by the window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .doctrine import (Doctrine, has_bottoms, has_tops, is_pi_doctrine,
                       is_primary, is_propositional, is_sigma_doctrine)
from .fincat import ArrowClass, Square
from .verdicts import Verdict, combine

__all__ = [
    "EqualityWitness",
    "ComprehensionWitness",
    "PowerObjectWitness",
    "NegationTable",
    "EpsilonTable",
    "find_equality",
    "is_elementary",
    "check_substitutive",
    "comprehension",
    "comprehension_table",
    "has_comprehension",
    "is_full_comprehension",
    "comprehension_class",
    "comprehension_squares",
    "cocomprehension",
    "cocomprehension_table",
    "has_cocomprehension",
    "is_full_cocomprehension",
    "cocomprehension_class",
    "cocomprehension_squares",
    "negation",
    "has_negation",
    "is_classical",
    "implication_axioms",
    "heyting_implication_tables",
    "weak_power_object",
    "is_higher_order",
    "ac_check",
    "epsilon",
    "is_tripos",
    "is_tripos_via_characterization",
]


@dataclass(frozen=True)
class EqualityWitness:
    """Chosen equality predicate per window object."""
    delta: Mapping[str, str]

    def over(self, obj: str) -> str:
        return self.delta[obj]


@dataclass(frozen=True)
class ComprehensionWitness:
    obj: str
    alpha: str
    arrow: str
    dual: bool = False


@dataclass(frozen=True)
class PowerObjectWitness:
    obj: str
    power: str
    membership: str
    chi: Mapping[tuple[str, str], str]


@dataclass(frozen=True)
class NegationTable:
    tables: Mapping[str, Mapping[str, str]]

    def neg(self, obj: str, e: str) -> str:
        return self.tables[obj][e]


@dataclass(frozen=True)
class EpsilonTable:
    entries: Mapping[tuple[str, str, str], str]

    def get(self, gamma: str, a: str, psi: str) -> str | None:
        return self.entries.get((gamma, a, psi))


def _search_failure(d: Doctrine, reason: str, **payload) -> Verdict:
    if d.base.presentation.truncated:
        return Verdict.not_applicable(f"window: {reason}")
    return Verdict.refuted(kind=reason, **payload)


# -- equality predicates ------------------------------------------------------

def _delta_validates(d: Doctrine, a: str, delta: str) -> bool:
    """Adjunction test for a candidate equality predicate over ``a``."""
    base = d.base
    row_aa = base.products[(a, a)]
    for x in base.window:
        row = base.products[(x, a)]
        triple = base.products[(row.obj, a)]
        p_obj, t_obj = row.obj, triple.obj
        pf, tf = d.fibers[p_obj], d.fibers[t_obj]
        ops = tf.ops
        if ops.meet is None:
            return False
        q1 = triple.proj1
        pi23 = base.pair(base.compose(row.proj2, q1), triple.proj2)
        mono = base.pair(base.identity[p_obj], row.proj2)  # id_X x Delta_A
        q1_star = d.reindex[q1].table
        pi23_star = d.reindex[pi23].table
        r = d.reindex[mono]
        delta_pull = pi23_star[delta]
        # L(psi) = <pi1,pi2>*psi  meet  <pi2,pi3>*delta
        l_idx = {}
        for psi in pf.elements:
            l_idx[psi] = tf.index[ops.meet[(q1_star[psi], delta_pull)]]
        r_idx = {phi: pf.index[r.table[phi]] for phi in tf.elements}
        for psi in pf.elements:
            pi = pf.index[psi]
            li = l_idx[psi]
            for phi in tf.elements:
                if tf.leq_idx(li, tf.index[phi]) != pf.leq_idx(pi, r_idx[phi]):
                    return False
    return True


def equality_candidates(d: Doctrine, a: str) -> list[str]:
    """All fiber elements over AxA that validate the adjunction for ``a``."""
    base = d.base
    row_aa = base.products[(a, a)]
    fiber_aa = d.fibers[row_aa.obj]
    diag_star = d.reindex[base.diagonal(a)].table
    top_a = d.top(a)
    out = []
    for delta in fiber_aa.elements:
        if top_a is not None and not d.fibers[a].leq(top_a, diag_star[delta]):
            continue  # reflexivity is necessary whenever a top exists
        if _delta_validates(d, a, delta):
            out.append(delta)
    return out


def find_equality(d: Doctrine) -> EqualityWitness | None:
    def compute():
        if not is_primary(d):
            return None
        delta = {}
        for a in d.base.window:
            found = None
            for cand in equality_candidates(d, a):
                found = cand
                break
            if found is None:
                return None
            delta[a] = found
        return EqualityWitness(delta)
    return d.cached(("find_equality",), compute)


def is_elementary(d: Doctrine) -> Verdict:
    def compute() -> Verdict:
        primary = is_primary(d)
        if not primary:
            return primary if primary.is_refuted else Verdict.not_applicable(
                f"not primary: {primary.reason}")
        for a in d.base.window:
            if not equality_candidates(d, a):
                # candidate pool is the full fiber, each rejection is a
                # window counterexample, so absence is conclusive
                return Verdict.refuted(kind="no_equality_predicate", object=a)
        return Verdict.holds(d.window_descriptor)
    return d.cached(("is_elementary",), compute)


def check_substitutive(d: Doctrine, witness: EqualityWitness) -> Verdict:
    base = d.base
    for a in base.window:
        if a not in witness.delta:
            return Verdict.not_applicable(f"no equality predicate over {a}")
        row = base.products[(a, a)]
        ops = d.fibers[row.obj].ops
        if ops.meet is None:
            return Verdict.not_applicable(f"no meets in fiber({row.obj})")
        delta = witness.delta[a]
        p1_star = d.reindex[row.proj1].table
        p2_star = d.reindex[row.proj2].table
        for psi in d.fibers[a].elements:
            lhs = ops.meet[(p1_star[psi], delta)]
            rhs = ops.meet[(p2_star[psi], delta)]
            if lhs != rhs:
                return Verdict.refuted(kind="not_substitutive", object=a,
                                       psi=psi, lhs=lhs, rhs=rhs)
    return Verdict.holds(d.window_descriptor)


# -- comprehension and co-comprehension ---------------------------------------

def _bound(d: Doctrine, obj: str, dual: bool) -> str | None:
    ops = d.fibers[obj].ops
    return ops.bottom if dual else ops.top


def _comprehension_search(d: Doctrine, a: str, alpha: str,
                          dual: bool) -> ComprehensionWitness | None:
    base = d.base
    matching = []
    for f in base.window_arrows_into(a):
        if d.star(f, alpha) == _bound(d, base.dom(f), dual):
            matching.append(f)
    for m in matching:
        dm = base.dom(m)
        ok = True
        for f in matching:
            ks = [k for k in base.hom(base.dom(f), dm)
                  if base.compose(m, k) == f]
            if len(ks) != 1:
                ok = False
                break
        if ok:
            return ComprehensionWitness(a, alpha, m, dual)
    return None


def comprehension(d: Doctrine, a: str, alpha: str) -> ComprehensionWitness | None:
    """The chosen comprehension monic of ``alpha`` over window object ``a``."""
    table = comprehension_table(d)
    return table.get((a, alpha))


def validate_witness(d: Doctrine, w: ComprehensionWitness) -> bool:
    """Does the arrow satisfy the (co-)comprehension universal property?"""
    base = d.base
    if d.star(w.arrow, w.alpha) != _bound(d, base.dom(w.arrow), w.dual):
        return False
    dm = base.dom(w.arrow)
    for f in base.window_arrows_into(w.obj):
        if d.star(f, w.alpha) != _bound(d, base.dom(f), w.dual):
            continue
        ks = [k for k in base.hom(base.dom(f), dm)
              if base.compose(w.arrow, k) == f]
        if len(ks) != 1:
            return False
    return True


def cocomprehension(d: Doctrine, a: str, alpha: str) -> ComprehensionWitness | None:
    table = cocomprehension_table(d)
    return table.get((a, alpha))


def _witness_table(d: Doctrine, dual: bool) -> dict:
    def compute():
        out = {}
        for a in d.base.window:
            if _bound(d, a, dual) is None:
                continue
            for alpha in d.fibers[a].elements:
                w = _comprehension_search(d, a, alpha, dual)
                if w is not None:
                    out[(a, alpha)] = w
        return out
    return d.cached(("witness_table", dual), compute)


def comprehension_table(d: Doctrine) -> dict:
    return _witness_table(d, dual=False)


def cocomprehension_table(d: Doctrine) -> dict:
    return _witness_table(d, dual=True)


def _has_witnesses(d: Doctrine, dual: bool) -> Verdict:
    name = "co-comprehension" if dual else "comprehension"
    bounds = has_bottoms(d) if dual else has_tops(d)
    if not bounds:
        return Verdict.not_applicable(
            f"{name} needs {'bottoms' if dual else 'tops'}: {bounds.reason}")
    table = _witness_table(d, dual)
    for a in d.base.window:
        for alpha in d.fibers[a].elements:
            if (a, alpha) not in table:
                return _search_failure(d, f"no_{name.replace('-', '')}_witness",
                                       object=a, alpha=alpha)
    return Verdict.holds(d.window_descriptor)


def has_comprehension(d: Doctrine) -> Verdict:
    return d.cached(("has_comprehension",), lambda: _has_witnesses(d, False))


def has_cocomprehension(d: Doctrine) -> Verdict:
    return d.cached(("has_cocomprehension",), lambda: _has_witnesses(d, True))


def _fullness(d: Doctrine, dual: bool) -> Verdict:
    exists = has_cocomprehension(d) if dual else has_comprehension(d)
    if not exists:
        return exists
    table = _witness_table(d, dual)
    base = d.base
    for a in base.window:
        fiber = d.fibers[a]
        for alpha in fiber.elements:
            wa = table[(a, alpha)].arrow
            for beta in fiber.elements:
                wb = table[(a, beta)].arrow
                factors = any(base.compose(wb, k) == wa
                              for k in base.hom(base.dom(wa), base.dom(wb)))
                if dual:
                    # contravariant: ceil(alpha) through ceil(beta) forces beta <= alpha
                    if factors and not fiber.leq(beta, alpha):
                        return Verdict.refuted(kind="cocomprehension_not_full",
                                               object=a, alpha=alpha, beta=beta,
                                               arrows=[wa, wb])
                    expected = fiber.leq(beta, alpha)
                    got = d.star(wa, beta) == _bound(d, base.dom(wa), True)
                    if expected != got:
                        return Verdict.refuted(kind="cocomprehension_order_law",
                                               object=a, alpha=alpha, beta=beta)
                else:
                    if factors and not fiber.leq(alpha, beta):
                        return Verdict.refuted(kind="comprehension_not_full",
                                               object=a, alpha=alpha, beta=beta,
                                               arrows=[wa, wb])
                    expected = fiber.leq(alpha, beta)
                    got = d.star(wa, beta) == _bound(d, base.dom(wa), False)
                    if expected != got:
                        return Verdict.refuted(kind="comprehension_order_law",
                                               object=a, alpha=alpha, beta=beta)
    return Verdict.holds(d.window_descriptor)


def is_full_comprehension(d: Doctrine) -> Verdict:
    return d.cached(("is_full_comprehension",), lambda: _fullness(d, False))


def is_full_cocomprehension(d: Doctrine) -> Verdict:
    return d.cached(("is_full_cocomprehension",), lambda: _fullness(d, True))


def _witness_class(d: Doctrine, dual: bool) -> ArrowClass:
    table = _witness_table(d, dual)
    members = sorted({w.arrow for w in table.values()},
                     key=d.base.arrow_order.__getitem__)
    return ArrowClass("cocomprehension" if dual else "comprehension",
                      tuple(members))


def comprehension_class(d: Doctrine) -> ArrowClass:
    return _witness_class(d, False)


def cocomprehension_class(d: Doctrine) -> ArrowClass:
    return _witness_class(d, True)


def _witness_squares(d: Doctrine, dual: bool) -> tuple[Square, ...]:
    """The canonical square of each witness pulled back along each window
    arrow; its limiting property is a separate verifiable invariant."""
    def compute():
        table = _witness_table(d, dual)
        base = d.base
        squares = []
        for (a, alpha), w in sorted(table.items()):
            for f in base.window_arrows_into(a):
                x = base.dom(f)
                pulled = table.get((x, d.star(f, alpha)))
                if pulled is None:
                    continue
                via = base.compose(f, pulled.arrow)
                qs = [k for k in base.hom(base.dom(pulled.arrow), base.dom(w.arrow))
                      if base.compose(w.arrow, k) == via]
                if len(qs) != 1:
                    continue
                squares.append(Square(apex=base.dom(pulled.arrow), to_f=qs[0],
                                      to_g=pulled.arrow, f=w.arrow, g=f))
        uniq = {}
        for s in squares:
            uniq.setdefault((s.f, s.g, s.to_f, s.to_g), s)
        return tuple(uniq[k] for k in sorted(uniq))
    return d.cached(("witness_squares", dual), compute)


def comprehension_squares(d: Doctrine) -> tuple[Square, ...]:
    return _witness_squares(d, False)


def cocomprehension_squares(d: Doctrine) -> tuple[Square, ...]:
    return _witness_squares(d, True)


# -- negation -----------------------------------------------------------------

def negation(d: Doctrine) -> NegationTable | None:
    verdict, table = _negation_impl(d)
    return table if verdict else None


def has_negation(d: Doctrine) -> Verdict:
    return _negation_impl(d)[0]


def _negation_impl(d: Doctrine) -> tuple[Verdict, NegationTable | None]:
    def compute():
        primary = is_primary(d)
        if not primary:
            return (primary if primary.is_refuted else Verdict.not_applicable(
                f"negation needs a primary doctrine: {primary.reason}"), None)
        bottoms = has_bottoms(d)
        if not bottoms:
            return (Verdict.not_applicable(
                f"negation needs bottoms: {bottoms.reason}"), None)
        tables: dict[str, dict[str, str]] = {}
        for a in d.base.window:
            fiber = d.fibers[a]
            ops = fiber.ops
            bot_idx = fiber.index[ops.bottom]
            tab = {}
            for beta in fiber.elements:
                mask = 0
                for ci, c in enumerate(fiber.elements):
                    if fiber.index[ops.meet[(c, beta)]] == bot_idx:
                        mask |= 1 << ci
                g = fiber.greatest_of_downset(mask)
                if g is None:
                    return (Verdict.not_applicable(
                        f"no pseudocomplement for {beta} in fiber({a})"), None)
                tab[beta] = fiber.elements[g]
            tables[a] = tab
        window = set(d.base.window)
        for f in d.base.window_arrows:
            a = d.base.arrows[f]
            star = d.reindex[f].table
            for beta in d.fibers[a.cod].elements:
                if star[tables[a.cod][beta]] != tables[a.dom][star[beta]]:
                    return (Verdict.refuted(
                        kind="negation_not_natural", arrow=f, beta=beta,
                        reindexed_negation=star[tables[a.cod][beta]],
                        negation_of_reindexed=tables[a.dom][star[beta]]), None)
        return Verdict.holds(d.window_descriptor), NegationTable(tables)
    return d.cached(("negation",), compute)


def is_classical(d: Doctrine) -> Verdict:
    def compute() -> Verdict:
        verdict, table = _negation_impl(d)
        if not verdict:
            return verdict if verdict.is_refuted else Verdict.not_applicable(
                f"no negation: {verdict.reason}")
        for a in d.base.window:
            for alpha in d.fibers[a].elements:
                nn = table.tables[a][table.tables[a][alpha]]
                if nn != alpha:
                    return Verdict.refuted(kind="not_classical", object=a,
                                           alpha=alpha, double_negation=nn)
        return Verdict.holds(d.window_descriptor)
    return d.cached(("is_classical",), compute)


# -- implication --------------------------------------------------------------

def heyting_implication_tables(d: Doctrine) -> dict[str, Mapping] | None:
    """Fiberwise Heyting implication on every scope fiber, if available."""
    out = {}
    for o in d.scope_objects:
        impl = d.fibers[o].ops.heyting_implication
        if impl is None:
            return None
        out[o] = impl
    return out


def implication_axioms(d: Doctrine, impl: Mapping[str, Mapping]) -> Verdict:
    """Stability under reindexing, the exchange law with Pi along projections,
    and the four pointwise axioms, over the fibers the tables cover."""
    covered = set(impl)
    base = d.base
    for f in base.window_arrows:
        a = base.arrows[f]
        if a.dom not in covered or a.cod not in covered:
            continue
        star = d.reindex[f].table
        for (x, y), xy in impl[a.cod].items():
            if star[xy] != impl[a.dom][(star[x], star[y])]:
                return Verdict.refuted(kind="implication_not_stable", arrow=f,
                                       pair=[x, y], lhs=star[xy],
                                       rhs=impl[a.dom][(star[x], star[y])])
    checked_pi = False
    for row in base.first_level_rows:
        if row.obj not in covered:
            continue
        for proj, factor in ((row.proj2, row.right), (row.proj1, row.left)):
            if factor not in covered:
                continue
            adj = d.pi(proj)
            if adj is None:
                return Verdict.not_applicable(f"no Pi along projection {proj}")
            checked_pi = True
            star = d.reindex[proj].table
            for alpha in d.fibers[factor].elements:
                pa = star[alpha]
                for beta in d.fibers[row.obj].elements:
                    lhs = adj.table[impl[row.obj][(pa, beta)]]
                    rhs = impl[factor][(alpha, adj.table[beta])]
                    if lhs != rhs:
                        return Verdict.refuted(kind="implication_pi_exchange",
                                               projection=proj, alpha=alpha,
                                               beta=beta, lhs=lhs, rhs=rhs)
    for o in sorted(covered, key=lambda o: base.obj_index(o)
                    if o in base._obj_index else 0):
        fiber = d.fibers[o]
        tab = impl[o]
        for phi in fiber.elements:
            for psi in fiber.elements:
                if not fiber.leq(phi, tab[(psi, phi)]):
                    return Verdict.refuted(kind="implication_axiom_a", object=o,
                                           phi=phi, psi=psi,
                                           value=tab[(psi, phi)])
                if fiber.leq(phi, psi):
                    for gamma in fiber.elements:
                        if not fiber.leq(gamma, tab[(phi, psi)]):
                            return Verdict.refuted(kind="implication_axiom_d",
                                                   object=o, phi=phi, psi=psi,
                                                   gamma=gamma,
                                                   value=tab[(phi, psi)])
        for gamma in fiber.elements:
            for phi in fiber.elements:
                for psi in fiber.elements:
                    lhs = tab[(gamma, tab[(phi, psi)])]
                    rhs = tab[(tab[(gamma, phi)], tab[(gamma, psi)])]
                    if not fiber.leq(lhs, rhs):
                        return Verdict.refuted(kind="implication_axiom_b",
                                               object=o, gamma=gamma, phi=phi,
                                               psi=psi, lhs=lhs, rhs=rhs)
                    if (fiber.leq(gamma, tab[(phi, psi)]) and fiber.leq(gamma, phi)
                            and not fiber.leq(gamma, psi)):
                        return Verdict.refuted(kind="implication_axiom_c",
                                               object=o, gamma=gamma, phi=phi,
                                               psi=psi, value=tab[(phi, psi)])
    return Verdict.holds(d.window_descriptor)


# -- weak power objects -------------------------------------------------------

def weak_power_object(d: Doctrine, a: str) -> PowerObjectWitness | None:
    def compute():
        base = d.base
        pool = list(dict.fromkeys(list(base.window) + list(base.power_pool)))
        pool.sort(key=base.obj_index)
        for p in pool:
            row = base.products.get((a, p))
            if row is None:
                continue
            for mem in d.fibers[row.obj].elements:
                chi: dict[tuple[str, str], str] = {}
                ok = True
                for y in base.window:
                    row_y = base.products.get((a, y))
                    if row_y is None:
                        ok = False
                        break
                    for phi in d.fibers[row_y.obj].elements:
                        found = None
                        for c in base.hom(y, p):
                            lifted = base.times(base.identity[a], c)
                            if d.star(lifted, mem) == phi:
                                found = c
                                break
                        if found is None:
                            ok = False
                            break
                        chi[(y, phi)] = found
                    if not ok:
                        break
                if ok:
                    return PowerObjectWitness(a, p, mem, chi)
        return None
    return d.cached(("weak_power_object", a), compute)


def is_higher_order(d: Doctrine) -> Verdict:
    def compute() -> Verdict:
        for a in d.base.window:
            if weak_power_object(d, a) is None:
                return _search_failure(d, "no_weak_power_object", object=a)
        return Verdict.holds(d.window_descriptor)
    return d.cached(("is_higher_order",), compute)


# -- axiom of choice ----------------------------------------------------------

def ac_check(d: Doctrine) -> tuple[Verdict, EpsilonTable]:
    def compute():
        base = d.base
        entries: dict[tuple[str, str, str], str] = {}
        initials = set(base.stable_initials)
        for a in base.window:
            if a in initials:
                continue
            for gamma in base.window:
                row = base.products[(gamma, a)]
                adj = d.sigma(row.proj1)
                if adj is None:
                    return (Verdict.not_applicable(
                        f"sigma missing along projection {row.proj1}"),
                        EpsilonTable(entries))
                candidates = base.hom(gamma, a)
                for psi in d.fibers[row.obj].elements:
                    target = adj.table[psi]
                    found = None
                    for e in candidates:
                        graph = base.pair(base.identity[gamma], e)
                        if d.star(graph, psi) == target:
                            found = e
                            break
                    if found is None:
                        return (Verdict.refuted(
                            kind="ac_no_witness", Gamma=gamma, A=a, psi=psi,
                            sigma_psi=target, candidates=len(candidates)),
                            EpsilonTable(entries))
                    entries[(gamma, a, psi)] = found
        return Verdict.holds(d.window_descriptor), EpsilonTable(entries)
    return d.cached(("ac_check",), compute)


def epsilon(d: Doctrine, gamma: str, a: str, psi: str) -> str | None:
    """The chosen witness arrow for one relation, independent of ac_check."""
    base = d.base
    if base.is_stable_initial(a):
        return None
    row = base.products[(gamma, a)]
    adj = d.sigma(row.proj1)
    if adj is None:
        return None
    target = adj.table[psi]
    for e in base.hom(gamma, a):
        if d.star(base.pair(base.identity[gamma], e), psi) == target:
            return e
    return None


# -- triposes -----------------------------------------------------------------

def _tripos_delta(d: Doctrine, x: str) -> str | None:
    """delta with  top <= Delta*(alpha)  iff  delta <= alpha, if any."""
    base = d.base
    row = base.products[(x, x)]
    fiber_xx = d.fibers[row.obj]
    top_x = d.top(x)
    if top_x is None:
        return None
    diag_star = d.reindex[base.diagonal(x)].table
    fx = d.fibers[x]
    for delta in fiber_xx.elements:
        di = fiber_xx.index[delta]
        if all((fx.leq(top_x, diag_star[alpha])) == fiber_xx.leq_idx(di, fiber_xx.index[alpha])
               for alpha in fiber_xx.elements):
            return delta
    return None


def is_tripos(d: Doctrine) -> Verdict:
    """Propositional + Sigma- and Pi-doctrine + equality by the adjoint-free
    characterization + weak power objects."""
    def compute() -> Verdict:
        prop = is_propositional(d)
        if not prop:
            return prop if prop.is_refuted else Verdict.not_applicable(
                f"not propositional: {prop.reason}")
        prj = d.base.projection_class()
        parts = [is_sigma_doctrine(d, prj), is_pi_doctrine(d, prj)]
        for part in parts:
            if not part:
                return part
        for x in d.base.window:
            if _tripos_delta(d, x) is None:
                return Verdict.refuted(kind="no_tripos_equality", object=x)
        ho = is_higher_order(d)
        if not ho:
            return ho
        return Verdict.holds(d.window_descriptor)
    return d.cached(("is_tripos",), compute)


def is_tripos_via_characterization(
        d: Doctrine, impl: Mapping[str, Mapping] | None = None) -> Verdict:
    """Pi-doctrine + implicational (supplied or Heyting tables) + higher order."""
    def compute() -> Verdict:
        tables = impl if impl is not None else heyting_implication_tables(d)
        if tables is None:
            return Verdict.not_applicable(
                "no implication tables: fibers are not Heyting algebras")
        return combine(d.window_descriptor,
                       is_pi_doctrine(d),
                       implication_axioms(d, tables),
                       is_higher_order(d))
    if impl is not None:
        return compute()
    return d.cached(("is_tripos_via_characterization",), compute)
