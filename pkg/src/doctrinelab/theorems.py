"""Executable theorem registry and the small-doctrine enumerator.

Each registry entry re-checks its hypotheses on the given instance (silent
hypothesis failure yields NotApplicable, never a vacuous Holds) and then
evaluates the conclusion.  A report whose hypotheses hold and whose
conclusion is Refuted contradicts a proved statement and is treated as a
release blocker by the acceptance suite.

The enumerator walks doctrines over thin bases (chains of bounded meet
semilattices), assigning canonical fiber posets and cover reindex maps, and
prunes isomorphic instances by minimizing the reindex tables over fiber
automorphisms.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

from . import logic
from .catalog import semilattice_category
from .constructions import (derived_implication_tables, dualize, is_eaco,
                            is_heaco)
from .doctrine import (Doctrine, frobenius, has_bottoms, has_tops, is_existential,
                       is_pi_doctrine, is_primary, is_propositional,
                       is_sigma_doctrine, validate_doctrine)
from .fincat import FinCategory
from .ioformat import instance_hash
from .poset import FinPoset, MonotoneMap
from .verdicts import Verdict, combine

__all__ = [
    "TheoremReport",
    "REGISTRY",
    "theorem_ids",
    "check_theorem",
    "check_all",
    "is_implicational",
    "classify",
    "CLASSIFY_FLAGS",
    "FilterExpr",
    "parse_filter",
    "enumerate_doctrines",
    "chain_base",
    "fiber_shapes",
]


# -- classification flags -------------------------------------------------------

def _substitutive(d: Doctrine) -> Verdict:
    w = logic.find_equality(d)
    if w is None:
        return Verdict.not_applicable("no equality predicate")
    return logic.check_substitutive(d, w)


def is_implicational(d: Doctrine) -> Verdict:
    """Implication axioms for the canonical candidate operation: the Heyting
    table when fibers are Heyting, else the comprehension-derived table."""
    def compute() -> Verdict:
        tables = logic.heyting_implication_tables(d)
        if tables is None:
            tables = derived_implication_tables(d)
        if tables is None:
            return Verdict.not_applicable("no candidate implication tables")
        return logic.implication_axioms(d, tables)
    return d.cached(("is_implicational",), compute)


def _finite_joins(d: Doctrine) -> Verdict:
    for o in d.base.window:
        ops = d.fibers[o].ops
        if ops.join is None or ops.bottom is None:
            return Verdict.refuted(kind="no_finite_joins", object=o,
                                   missing="join" if ops.join is None else "bottom")
    return Verdict.holds(d.window_descriptor)


CLASSIFY_FLAGS: tuple[tuple[str, Callable[[Doctrine], Verdict]], ...] = (
    ("functorial", validate_doctrine),
    ("primary", is_primary),
    ("has_tops", has_tops),
    ("has_bottoms", has_bottoms),
    ("elementary", logic.is_elementary),
    ("substitutive", _substitutive),
    ("sigma", lambda d: is_sigma_doctrine(d)),
    ("restricted_sigma", lambda d: is_sigma_doctrine(d, restricted=True)),
    ("pi", lambda d: is_pi_doctrine(d)),
    ("restricted_pi", lambda d: is_pi_doctrine(d, restricted=True)),
    ("frobenius", lambda d: frobenius(d)),
    ("existential", is_existential),
    ("comprehension", logic.has_comprehension),
    ("full_comp", logic.is_full_comprehension),
    ("higher_order", logic.is_higher_order),
    ("propositional", is_propositional),
    ("implicational", is_implicational),
    ("tripos", logic.is_tripos),
    ("tripos_char", logic.is_tripos_via_characterization),
    ("cocomprehension", logic.has_cocomprehension),
    ("full_cocomp", logic.is_full_cocomprehension),
    ("negation", logic.has_negation),
    ("classical", logic.is_classical),
    ("ac", lambda d: logic.ac_check(d)[0]),
    ("finite_joins", _finite_joins),
    ("eaco", is_eaco),
    ("heaco", is_heaco),
)

_FLAG_MAP: dict[str, Callable[[Doctrine], Verdict]] = dict(CLASSIFY_FLAGS)
_FLAG_ALIASES = {"comp": "comprehension", "cocomp": "cocomprehension",
                 "full_comprehension": "full_comp",
                 "full_cocomprehension": "full_cocomp"}


def flag_check(name: str) -> Callable[[Doctrine], Verdict]:
    canonical = _FLAG_ALIASES.get(name, name)
    fn = _FLAG_MAP.get(canonical)
    if fn is None:
        raise KeyError(f"unknown classification flag {name!r}")
    return fn


def classify(d: Doctrine) -> dict[str, Verdict]:
    """Every classification flag, in definitional order."""
    return {name: fn(d) for name, fn in CLASSIFY_FLAGS}


def witness_report(d: Doctrine) -> dict:
    """The chosen witness tables, for the machine report: equality
    predicates, (co-)comprehension arrows, negation, epsilon entries and
    power objects, whatever the instance supports."""
    out: dict = {}
    eq = logic.find_equality(d)
    if eq is not None:
        out["delta"] = dict(eq.delta)
    comp = logic.comprehension_table(d)
    if comp:
        out["comprehension"] = {f"{a}|{alpha}": w.arrow
                                for (a, alpha), w in sorted(comp.items())}
    cocomp = logic.cocomprehension_table(d)
    if cocomp:
        out["cocomprehension"] = {f"{a}|{alpha}": w.arrow
                                  for (a, alpha), w in sorted(cocomp.items())}
    neg = logic.negation(d)
    if neg is not None:
        out["negation"] = {a: dict(t) for a, t in sorted(neg.tables.items())}
    ac, eps = logic.ac_check(d)
    if eps.entries:
        out["epsilon"] = {f"{g}|{a}|{psi}": arrow
                          for (g, a, psi), arrow in sorted(eps.entries.items())}
    powers = {}
    for a in d.base.window:
        w = logic.weak_power_object(d, a)
        if w is not None:
            powers[a] = {"power": w.power, "membership": w.membership}
    if powers:
        out["power_objects"] = powers
    return out


# -- filter expressions ----------------------------------------------------------

@dataclass(frozen=True)
class FilterExpr:
    kind: str                      # "flag" | "not" | "and" | "or"
    name: str | None = None
    args: tuple["FilterExpr", ...] = ()

    def evaluate(self, d: Doctrine) -> bool:
        if self.kind == "flag":
            return bool(flag_check(self.name)(d))
        if self.kind == "not":
            return not self.args[0].evaluate(d)
        if self.kind == "and":
            return all(a.evaluate(d) for a in self.args)
        return any(a.evaluate(d) for a in self.args)


def parse_filter(text: str) -> FilterExpr:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()&|!":
            tokens.append(c)
            i += 1
        else:
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i:
                raise ValueError(f"bad character {c!r} in filter")
            tokens.append(text[i:j])
            i = j
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of filter expression")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            raise ValueError(f"expected {expected!r}, found {tok!r}")
        pos += 1
        return tok

    def parse_or():
        args = [parse_and()]
        while peek() == "|":
            take()
            args.append(parse_and())
        return args[0] if len(args) == 1 else FilterExpr("or", args=tuple(args))

    def parse_and():
        args = [parse_not()]
        while peek() == "&":
            take()
            args.append(parse_not())
        return args[0] if len(args) == 1 else FilterExpr("and", args=tuple(args))

    def parse_not():
        if peek() == "!":
            take()
            return FilterExpr("not", args=(parse_not(),))
        if peek() == "(":
            take()
            inner = parse_or()
            take(")")
            return inner
        name = take()
        if name in "()&|!":
            raise ValueError(f"unexpected token {name!r}")
        flag_check(name)  # raises on unknown flags
        return FilterExpr("flag", name=name)

    expr = parse_or()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in filter: {tokens[pos:]}")
    return expr


# -- theorem registry -------------------------------------------------------------

@dataclass(frozen=True)
class TheoremReport:
    theorem: str
    instance: str
    instance_hash: str
    hypotheses: tuple[tuple[str, Verdict], ...]
    conclusion: Verdict
    wall_ms: float
    instance_document: Mapping | None = None

    @property
    def hypotheses_hold(self) -> bool:
        return all(bool(v) for _, v in self.hypotheses)

    @property
    def is_violation(self) -> bool:
        """Hypotheses satisfied, conclusion refuted: contradicts a theorem."""
        return self.hypotheses_hold and self.conclusion.is_refuted

    def to_json(self, timing: bool = False) -> dict:
        # the embedded document makes the record self-contained: rebuilding
        # the instance from it reproduces the verdict with no instance store
        out = {
            "theorem": self.theorem,
            "instance": self.instance,
            "instance_hash": self.instance_hash,
            "instance_document": self.instance_document,
            "hypotheses": {n: v.to_json() for n, v in self.hypotheses},
            "conclusion": self.conclusion.to_json(),
            "violation": self.is_violation,
        }
        if timing:
            out["wall_ms"] = round(self.wall_ms, 3)
        return out


def _restricted_sigma_comp(d: Doctrine) -> Verdict:
    comp = logic.has_comprehension(d)
    if not comp:
        return Verdict.not_applicable("no comprehension class")
    return is_sigma_doctrine(d, logic.comprehension_class(d), restricted=True,
                             squares=logic.comprehension_squares(d))


def _restricted_pi_comp(d: Doctrine) -> Verdict:
    comp = logic.has_comprehension(d)
    if not comp:
        return Verdict.not_applicable("no comprehension class")
    return is_pi_doctrine(d, logic.comprehension_class(d), restricted=True,
                          squares=logic.comprehension_squares(d))


def _restricted_sigma_cocomp(d: Doctrine) -> Verdict:
    cocomp = logic.has_cocomprehension(d)
    if not cocomp:
        return Verdict.not_applicable("no co-comprehension class")
    return is_sigma_doctrine(d, logic.cocomprehension_class(d), restricted=True,
                             squares=logic.cocomprehension_squares(d))


def _frobenius_comp(d: Doctrine) -> Verdict:
    comp = logic.has_comprehension(d)
    if not comp:
        return Verdict.not_applicable("no comprehension class")
    return frobenius(d, logic.comprehension_class(d))


def _nonloso_conclusion(d: Doctrine) -> Verdict:
    # sub-claim: quantifying the top along a comprehension arrow recovers
    # the comprehended predicate
    table = logic.comprehension_table(d)
    for (a, alpha), w in sorted(table.items()):
        adj = d.sigma(w.arrow)
        if adj is None:
            return Verdict.not_applicable(f"sigma missing along {w.arrow}")
        top = d.top(d.base.dom(w.arrow))
        if adj.table[top] != alpha:
            return Verdict.refuted(kind="image_of_top", object=a, alpha=alpha,
                                   arrow=w.arrow, image=adj.table[top])
    return combine(d.window_descriptor, _restricted_sigma_comp(d))


def _bingo_conclusion(d: Doctrine) -> Verdict:
    tables = derived_implication_tables(d)
    if tables is None:
        return Verdict.not_applicable("derived implication undefined")
    return logic.implication_axioms(d, tables)


def _derived_assignment_passes(d: Doctrine) -> Verdict:
    return _bingo_conclusion(d)


def _biconditional(left_name: str, left: Verdict, right_name: str,
                   right: Verdict, window: str) -> Verdict:
    if left.is_na:
        return Verdict.not_applicable(f"{left_name}: {left.reason}")
    if right.is_na:
        return Verdict.not_applicable(f"{right_name}: {right.reason}")
    if bool(left) == bool(right):
        return Verdict.holds(window)
    return Verdict.refuted(kind="biconditional", left=left_name,
                           left_status=left.status, right=right_name,
                           right_status=right.status,
                           left_payload=left.counterexample,
                           right_payload=right.counterexample)


def _negation_iii_conclusion(d: Doctrine) -> Verdict:
    return _biconditional("full_cocomp", logic.is_full_cocomprehension(d),
                          "classical", logic.is_classical(d),
                          d.window_descriptor)


def _has_stable_initial(d: Doctrine) -> Verdict:
    if d.base.stable_initials:
        return Verdict.holds(d.window_descriptor)
    return Verdict.not_applicable("no stable initial object in the window")


def _fibers_nonempty(d: Doctrine) -> Verdict:
    for o in d.scope_objects:
        if not len(d.fibers[o]):
            return Verdict.not_applicable(f"fiber({o}) is empty")
    return Verdict.holds(d.window_descriptor)


def _zero_conclusion(d: Doctrine) -> Verdict:
    base = d.base
    for zero in base.stable_initials:
        for x in base.window:
            for k in base.hom(x, zero):
                if not base.is_iso(k):
                    return Verdict.refuted(kind="arrow_into_initial_not_iso",
                                           arrow=k, initial=zero)
    return Verdict.holds(d.window_descriptor)


def _bc_lemma_conclusion(d: Doctrine) -> Verdict:
    ac, eps = logic.ac_check(d)
    base = d.base
    initials = set(base.stable_initials)
    for a in base.window:
        if a in initials:
            continue
        for gamma in base.window:
            row = base.products[(gamma, a)]
            fiber = d.fibers[row.obj]
            for psi in fiber.elements:
                e = eps.get(gamma, a, psi)
                if e is None:
                    return Verdict.not_applicable(
                        f"no epsilon for ({gamma},{a},{psi})")
                chosen = d.star(base.pair(base.identity[gamma], e), psi)
                for h in base.hom(gamma, a):
                    val = d.star(base.pair(base.identity[gamma], h), psi)
                    if not d.fibers[gamma].leq(val, chosen):
                        return Verdict.refuted(kind="choice_not_maximal",
                                               Gamma=gamma, A=a, psi=psi,
                                               h=h, epsilon=e, via_h=val,
                                               via_epsilon=chosen)
    return Verdict.holds(d.window_descriptor)


def _p0_singleton_if_initial(d: Doctrine) -> Verdict:
    for zero in d.base.stable_initials:
        if len(d.fibers[zero]) != 1:
            return Verdict.not_applicable(
                f"fiber({zero}) of the stable initial is not a singleton")
    return Verdict.holds(d.window_descriptor)


def _p0_singleton_conclusion(d: Doctrine) -> Verdict:
    for zero in d.base.stable_initials:
        if len(d.fibers[zero]) != 1:
            return Verdict.refuted(kind="initial_fiber_not_singleton",
                                   object=zero, size=len(d.fibers[zero]))
    return Verdict.holds(d.window_descriptor)


def _ac_holds(d: Doctrine) -> Verdict:
    return logic.ac_check(d)[0]


def _dual_tripos_conclusion(d: Doctrine) -> Verdict:
    dual = dualize(d)
    return combine(d.window_descriptor, logic.is_tripos(dual),
                   logic.is_full_comprehension(dual))


def _caratterino_conclusion(d: Doctrine) -> Verdict:
    return _biconditional("implicational", is_implicational(d),
                          "tripos", logic.is_tripos(d), d.window_descriptor)


def _prop1_conclusion(d: Doctrine) -> Verdict:
    direct = logic.is_tripos(d)
    char = logic.is_tripos_via_characterization(d)
    if direct.is_na or char.is_na:
        return Verdict.not_applicable(
            "not both checkers applicable: "
            f"direct={direct.status}, characterization={char.status}")
    if bool(direct) == bool(char):
        return Verdict.holds(d.window_descriptor)
    return Verdict.refuted(kind="tripos_checkers_disagree",
                           direct=direct.to_json(), characterization=char.to_json())


@dataclass(frozen=True)
class TheoremCheck:
    id: str
    title: str
    hypotheses: tuple[tuple[str, Callable[[Doctrine], Verdict]], ...]
    conclusion_name: str
    conclusion: Callable[[Doctrine], Verdict]


REGISTRY: dict[str, TheoremCheck] = {t.id: t for t in (
    TheoremCheck(
        "nonloso",
        "full comprehension with Frobenius left adjoints along the "
        "comprehension class gives the restricted Beck-Chevalley condition",
        (("primary", is_primary),
         ("full_comp", logic.is_full_comprehension),
         ("frobenius_comp", _frobenius_comp)),
        "restricted_sigma_comp_and_image_of_top", _nonloso_conclusion),
    TheoremCheck(
        "bingo",
        "a Pi-doctrine with full comprehension and restricted Beck-Chevalley "
        "over the comprehension class is implicational",
        (("pi", is_pi_doctrine),
         ("full_comp", logic.is_full_comprehension),
         ("restricted_pi_comp", _restricted_pi_comp)),
        "derived_implication_axioms", _bingo_conclusion),
    TheoremCheck(
        "bingo_converse",
        "if the derived assignment is implicational, comprehension is full",
        (("pi", is_pi_doctrine),
         ("comprehension", logic.has_comprehension),
         ("derived_assignment_passes", _derived_assignment_passes)),
        "full_comp", logic.is_full_comprehension),
    TheoremCheck(
        "negation_i",
        "comprehension plus negation gives co-comprehension",
        (("comprehension", logic.has_comprehension),
         ("negation", logic.has_negation)),
        "cocomprehension", logic.has_cocomprehension),
    TheoremCheck(
        "negation_ii",
        "restricted Beck-Chevalley passes from the comprehension class to "
        "the co-comprehension class",
        (("comprehension", logic.has_comprehension),
         ("negation", logic.has_negation),
         ("restricted_sigma_comp", _restricted_sigma_comp)),
        "restricted_sigma_cocomp", _restricted_sigma_cocomp),
    TheoremCheck(
        "negation_iii",
        "under full comprehension and negation: full co-comprehension iff "
        "classical",
        (("comprehension", logic.has_comprehension),
         ("negation", logic.has_negation),
         ("full_comp", logic.is_full_comprehension)),
        "full_cocomp_iff_classical", _negation_iii_conclusion),
    TheoremCheck(
        "zero",
        "under choice with nonempty fibers, arrows into a stable initial "
        "object are isomorphisms",
        (("ac", _ac_holds),
         ("stable_initial", _has_stable_initial),
         ("fibers_nonempty", _fibers_nonempty)),
        "arrows_into_initial_iso", _zero_conclusion),
    TheoremCheck(
        "bc_lemma",
        "the chosen witness dominates every substitution instance",
        (("ac", _ac_holds),),
        "choice_dominates", _bc_lemma_conclusion),
    TheoremCheck(
        "nonne0",
        "choice with bottoms (and singleton fiber over a stable initial) "
        "makes projections Beck-Chevalley",
        (("ac", _ac_holds),
         ("has_bottoms", has_bottoms),
         ("p0_singleton", _p0_singleton_if_initial)),
        "sigma_doctrine", lambda d: is_sigma_doctrine(d)),
    TheoremCheck(
        "nonne1",
        "a primary doctrine with choice, bottoms and singleton initial fiber "
        "is existential",
        (("primary", is_primary),
         ("ac", _ac_holds),
         ("has_bottoms", has_bottoms),
         ("p0_singleton", _p0_singleton_if_initial)),
        "existential", is_existential),
    TheoremCheck(
        "sinistra",
        "a higher order Sigma-doctrine with full co-comprehension and "
        "restricted Beck-Chevalley over it dualizes to a tripos with full "
        "comprehension",
        (("higher_order", logic.is_higher_order),
         ("sigma", lambda d: is_sigma_doctrine(d)),
         ("full_cocomp", logic.is_full_cocomprehension),
         ("restricted_sigma_cocomp", _restricted_sigma_cocomp)),
        "dual_tripos_with_full_comp", _dual_tripos_conclusion),
    TheoremCheck(
        "checazzo2",
        "the fiber over a stable initial object of an eaco is a singleton",
        (("eaco", is_eaco),
         ("stable_initial", _has_stable_initial)),
        "initial_fiber_singleton", _p0_singleton_conclusion),
    TheoremCheck(
        "eaco_existential",
        "every eaco is existential",
        (("eaco", is_eaco),),
        "existential", is_existential),
    TheoremCheck(
        "baggins",
        "every eaco satisfies restricted Beck-Chevalley over the "
        "co-comprehension class",
        (("eaco", is_eaco),),
        "restricted_sigma_cocomp", _restricted_sigma_cocomp),
    TheoremCheck(
        "frodo",
        "every heaco is a Pi-doctrine",
        (("heaco", is_heaco),),
        "pi_doctrine", lambda d: is_pi_doctrine(d)),
    TheoremCheck(
        "finite_joins",
        "fibers of a heaco have finite joins",
        (("heaco", is_heaco),),
        "finite_joins", _finite_joins),
    TheoremCheck(
        "caratterino",
        "a heaco is implicational iff it is a tripos",
        (("heaco", is_heaco),),
        "implicational_iff_tripos", _caratterino_conclusion),
    TheoremCheck(
        "prop1_equiv",
        "the tripos definition and its implicational characterization agree",
        (),
        "checkers_agree", _prop1_conclusion),
)}


def theorem_ids() -> list[str]:
    return list(REGISTRY)


def check_theorem(tid: str, d: Doctrine) -> TheoremReport:
    check = REGISTRY.get(tid)
    if check is None:
        raise KeyError(f"unknown theorem id {tid!r}")
    start = time.perf_counter()
    hyps: list[tuple[str, Verdict]] = []
    all_hold = True
    for name, fn in check.hypotheses:
        v = fn(d)
        hyps.append((name, v))
        if not v:
            all_hold = False
            break
    if all_hold:
        conclusion = check.conclusion(d)
    else:
        failed = hyps[-1][0]
        conclusion = Verdict.not_applicable(f"hypothesis {failed!r} not satisfied")
    wall = (time.perf_counter() - start) * 1000.0
    from .ioformat import to_document
    return TheoremReport(tid, d.name, instance_hash(d), tuple(hyps),
                         conclusion, wall, instance_document=to_document(d))


def check_all(d: Doctrine) -> list[TheoremReport]:
    return [check_theorem(tid, d) for tid in REGISTRY]


# -- enumeration ------------------------------------------------------------------

_SHAPE_DEFS: tuple[tuple[str, int, tuple[tuple[int, int], ...]], ...] = (
    ("P1", 1, ()),
    ("C2", 2, ((0, 1),)),
    ("A2", 2, ()),
    ("C3", 3, ((0, 1), (1, 2), (0, 2))),
    ("V3", 3, ((0, 1), (0, 2))),
    ("L3", 3, ((0, 2), (1, 2))),
    ("N21", 3, ((0, 1),)),
    ("A3", 3, ()),
)

_SHAPES: dict[str, FinPoset] = {}
_AUTS: dict[str, tuple[tuple[int, ...], ...]] = {}
_MONO: dict[tuple[str, str], tuple[tuple[int, ...], ...]] = {}
_MAP_CACHE: dict[tuple[str, str, tuple[int, ...]], MonotoneMap] = {}


def fiber_shapes(max_size: int = 3, min_size: int = 1) -> list[str]:
    _init_shapes()
    return [sid for sid, n, _ in _SHAPE_DEFS if min_size <= n <= max_size]


def _init_shapes() -> None:
    if _SHAPES:
        return
    for sid, n, pairs in _SHAPE_DEFS:
        elements = [f"u{i}" for i in range(n)]
        leq = [(f"u{i}", f"u{j}") for i, j in pairs]
        _SHAPES[sid] = FinPoset(elements, leq + [(e, e) for e in elements])
    for sid, p in _SHAPES.items():
        n = len(p.elements)
        auts = []
        for perm in itertools.permutations(range(n)):
            if all(p.leq_idx(i, j) == p.leq_idx(perm[i], perm[j])
                   for i in range(n) for j in range(n)):
                auts.append(perm)
        _AUTS[sid] = tuple(auts)
    for sa, pa in _SHAPES.items():
        for sb, pb in _SHAPES.items():
            na, nb = len(pa.elements), len(pb.elements)
            maps = []
            for img in itertools.product(range(nb), repeat=na):
                if all(not pa.leq_idx(i, j) or pb.leq_idx(img[i], img[j])
                       for i in range(na) for j in range(na)):
                    maps.append(img)
            _MONO[(sa, sb)] = tuple(maps)


def _interned_map(src_shape: str, dst_shape: str,
                  table: tuple[int, ...]) -> MonotoneMap:
    key = (src_shape, dst_shape, table)
    got = _MAP_CACHE.get(key)
    if got is None:
        src, dst = _SHAPES[src_shape], _SHAPES[dst_shape]
        got = MonotoneMap(src, dst,
                          {src.elements[i]: dst.elements[t]
                           for i, t in enumerate(table)}, validate=False)
        _MAP_CACHE[key] = got
    return got


_CHAIN_BASES: dict[int, FinCategory] = {}


def chain_base(n: int) -> FinCategory:
    """The n-element chain as a thin cartesian base (meets are products)."""
    got = _CHAIN_BASES.get(n)
    if got is None:
        elements = [f"L{i}" for i in range(n)]
        leq = [(f"L{i}", f"L{j}") for i in range(n) for j in range(i, n)]
        got, _ = semilattice_category(elements, leq, kind=f"chain{n}")
        _CHAIN_BASES[n] = got
    return got


def _canonical_key(shapes: tuple[str, ...],
                   covers: tuple[tuple[int, ...], ...]) -> tuple:
    """Minimal encoding of the cover tables over fiber automorphisms."""
    _init_shapes()
    best = None
    aut_lists = [_AUTS[s] for s in shapes]
    for auts in itertools.product(*aut_lists):
        invs = []
        for a in auts:
            inv = [0] * len(a)
            for i, v in enumerate(a):
                inv[v] = i
            invs.append(tuple(inv))
        encoded = tuple(
            tuple(auts[i][covers[i][invs[i + 1][x]]]
                  for x in range(len(covers[i])))
            for i in range(len(covers)))
        if best is None or encoded < best:
            best = encoded
    return (shapes, best)


def enumerate_doctrines(max_base: int = 3, max_fiber: int = 3,
                        min_fiber: int = 1,
                        filter_expr: FilterExpr | str | None = None,
                        budget: int = 100_000,
                        max_emit: int | None = None,
                        bases: Sequence[FinCategory] | None = None,
                        stats: dict | None = None) -> Iterator[Doctrine]:
    """Pairwise non-isomorphic doctrines over thin chain bases.

    ``budget`` caps the raw candidates examined; ``stats`` (if given) is
    filled with candidate/emitted counts and whether the budget ran out.
    """
    _init_shapes()
    env_budget = os.environ.get("DOCTRINELAB_BUDGET")
    if env_budget:
        budget = min(budget, int(env_budget))
    if isinstance(filter_expr, str):
        filter_expr = parse_filter(filter_expr)
    shapes = fiber_shapes(max_fiber, min_fiber)
    if bases is None:
        bases = [chain_base(n) for n in range(1, max_base + 1)]
    counters = stats if stats is not None else {}
    counters.update({"candidates": 0, "emitted": 0, "budget_exhausted": False})
    seen: set = set()
    emitted = 0
    for base in bases:
        n = len(base.objects)
        objs = base.objects
        cover_arrows = [base.hom(objs[i], objs[i + 1])[0] for i in range(n - 1)]
        for shape_assign in itertools.product(shapes, repeat=n):
            cover_options = [_MONO[(shape_assign[i + 1], shape_assign[i])]
                             for i in range(n - 1)]
            for covers in itertools.product(*cover_options):
                counters["candidates"] += 1
                if counters["candidates"] > budget:
                    counters["budget_exhausted"] = True
                    return
                key = (id(base),) + _canonical_key(shape_assign, covers)
                if key in seen:
                    continue
                seen.add(key)
                d = _build_thin_doctrine(base, shape_assign, covers,
                                         f"enum-{n}-{counters['candidates']}")
                if filter_expr is not None and not filter_expr.evaluate(d):
                    continue
                counters["emitted"] += 1
                emitted += 1
                yield d
                if max_emit is not None and emitted >= max_emit:
                    return


def _build_thin_doctrine(base: FinCategory, shapes: Sequence[str],
                         covers: Sequence[tuple[int, ...]],
                         name: str) -> Doctrine:
    objs = base.objects
    n = len(objs)
    fibers = {objs[i]: _SHAPES[shapes[i]] for i in range(n)}
    tables: dict[tuple[int, int], tuple[int, ...]] = {}
    for i in range(n - 1):
        tables[(i, i + 1)] = covers[i]
    for span in range(2, n):
        for i in range(n - span):
            j = i + span
            lower = tables[(i, j - 1)]
            top = tables[(j - 1, j)]
            tables[(i, j)] = tuple(lower[x] for x in top)
    reindex = {}
    for a in base.arrows.values():
        i, j = int(a.dom[1:]), int(a.cod[1:])
        if i == j:
            table = tuple(range(len(_SHAPES[shapes[i]].elements)))
        else:
            table = tables[(i, j)]
        reindex[a.name] = _interned_map(shapes[j], shapes[i], table)
    return Doctrine(base, fibers, reindex, name=name,
                    source={"kind": "explicit"})
