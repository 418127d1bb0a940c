"""Doctrines: a base category with one finite poset per object and
contravariant monotone reindexing, plus the structural classification
predicates (primary, propositional, Sigma/Pi with Beck-Chevalley, Frobenius,
existential).

All classification entry points are memoized per instance under a
(check id, arguments) key: the theorem harness re-queries the same
predicates many times and verdicts embed the window descriptor, so cached
results are never silently over-claimed.
"""

from __future__ import annotations

from functools import cached_property
from typing import Callable, Iterable, Mapping

from .fincat import ArrowClass, FinCategory, Square
from .poset import FinPoset, MonotoneMap, left_adjoint, right_adjoint
from .verdicts import ShapeMismatch, Verdict, combine

__all__ = [
    "Doctrine",
    "validate_doctrine",
    "is_primary",
    "has_tops",
    "has_bottoms",
    "is_propositional",
    "is_sigma_doctrine",
    "is_pi_doctrine",
    "frobenius",
    "is_existential",
    "bc_squares",
]


class Doctrine:
    """A finite doctrine: base category, fibers, reindexing."""

    def __init__(self, base: FinCategory, fibers: Mapping[str, FinPoset],
                 reindex: Mapping[str, MonotoneMap], name: str = "doctrine",
                 source: Mapping | None = None,
                 declared: Mapping | None = None):
        self.base = base
        self.fibers = dict(fibers)
        self.reindex = dict(reindex)
        self.name = name
        self.source = dict(source) if source else {"kind": "explicit"}
        self.declared = dict(declared) if declared else {}
        self._cache: dict = {}

    def fiber(self, obj: str) -> FinPoset:
        return self.fibers[obj]

    def star(self, f: str, element: str) -> str:
        """Reindex a single fiber element along the arrow ``f``."""
        return self.reindex[f].table[element]

    def cached(self, key, compute: Callable):
        got = self._cache.get(key)
        if got is None:
            got = compute()
            self._cache[key] = got
        return got

    @property
    def window(self) -> tuple[str, ...]:
        return self.base.window

    @property
    def window_descriptor(self) -> str:
        return self.base.window_descriptor

    @cached_property
    def scope_objects(self) -> tuple[str, ...]:
        """Window objects plus first-level product carriers: the fibers the
        quantified logic actually touches (triple carriers join only through
        the equality-predicate adjunction)."""
        seen = list(self.base.window)
        for r in self.base.first_level_rows:
            if r.obj not in seen:
                seen.append(r.obj)
        return tuple(sorted(seen, key=self.base.obj_index))

    @cached_property
    def scope_arrows(self) -> tuple[str, ...]:
        scope = set(self.scope_objects)
        names = [n for n, a in self.base.arrows.items()
                 if a.dom in scope and a.cod in scope]
        return tuple(self.base.sort_arrows(names))

    def sigma(self, f: str) -> MonotoneMap | None:
        """Left adjoint to reindexing along ``f``, if it exists."""
        return self.cached(("sigma", f), lambda: left_adjoint(self.reindex[f]))

    def pi(self, f: str) -> MonotoneMap | None:
        """Right adjoint to reindexing along ``f``, if it exists."""
        return self.cached(("pi", f), lambda: right_adjoint(self.reindex[f]))

    def top(self, obj: str) -> str | None:
        return self.fibers[obj].ops.top

    def bottom(self, obj: str) -> str | None:
        return self.fibers[obj].ops.bottom

    def meet(self, obj: str, a: str, b: str) -> str:
        return self.fibers[obj].ops.meet[(a, b)]

    def __repr__(self) -> str:
        return f"Doctrine({self.name!r}, {self.base!r})"


def validate_doctrine(d: Doctrine) -> Verdict:
    """Functoriality and monotonicity of the reindexing over all tables.

    Shape problems (missing or misplaced reindex maps) raise
    :class:`ShapeMismatch`; law violations are Refuted with the offending
    arrows and element.
    """
    def compute() -> Verdict:
        base = d.base
        for o in base.objects:
            if o not in d.fibers:
                raise ShapeMismatch(f"no fiber for object {o}")
        for n, a in base.arrows.items():
            m = d.reindex.get(n)
            if m is None:
                raise ShapeMismatch(f"no reindex map for arrow {n}")
            if not m.source.same_order(d.fibers[a.cod]) and m.source is not d.fibers[a.cod]:
                raise ShapeMismatch(f"reindex({n}) source is not fiber({a.cod})")
            if not m.target.same_order(d.fibers[a.dom]) and m.target is not d.fibers[a.dom]:
                raise ShapeMismatch(f"reindex({n}) target is not fiber({a.dom})")
        for o in base.objects:
            m = d.reindex[base.identity[o]]
            for e in d.fibers[o].elements:
                if m.table[e] != e:
                    return Verdict.refuted(kind="functor_identity", object=o,
                                           element=e, image=m.table[e])
        for n, a in base.arrows.items():
            m = d.reindex[n]
            src, tgt = d.fibers[a.cod], d.fibers[a.dom]
            it = m.idx_table
            for i in range(len(src.elements)):
                mask = src.uppers[i]
                while mask:
                    j = (mask & -mask).bit_length() - 1
                    if not tgt.leq_idx(it[i], it[j]):
                        return Verdict.refuted(
                            kind="not_monotone", arrow=n,
                            pair=[src.elements[i], src.elements[j]],
                            images=[tgt.elements[it[i]], tgt.elements[it[j]]])
                    mask &= mask - 1
        for (g, f), gf in base.compose_table.items():
            mg, mf, mgf = d.reindex[g], d.reindex[f], d.reindex[gf]
            for e in mg.source.elements:
                if mf.table[mg.table[e]] != mgf.table[e]:
                    return Verdict.refuted(kind="functor_composition", f=f, g=g,
                                           composite=gf, element=e,
                                           via_composite=mgf.table[e],
                                           via_parts=mf.table[mg.table[e]])
        return Verdict.holds(d.window_descriptor)

    return d.cached(("validate_doctrine",), compute)


def has_tops(d: Doctrine) -> Verdict:
    def compute() -> Verdict:
        for o in d.scope_objects:
            if d.fibers[o].ops.top is None:
                return Verdict.not_applicable(f"no top element in fiber({o})")
        return Verdict.holds(d.window_descriptor)
    return d.cached(("has_tops",), compute)


def has_bottoms(d: Doctrine) -> Verdict:
    def compute() -> Verdict:
        for o in d.scope_objects:
            if d.fibers[o].ops.bottom is None:
                return Verdict.not_applicable(f"no bottom element in fiber({o})")
        return Verdict.holds(d.window_descriptor)
    return d.cached(("has_bottoms",), compute)


def is_primary(d: Doctrine) -> Verdict:
    """Do all scope fibers have binary meets, preserved by reindexing?"""
    def compute() -> Verdict:
        for o in d.scope_objects:
            if d.fibers[o].ops.meet is None:
                return Verdict.not_applicable(f"no meets in fiber({o})")
        for n in d.scope_arrows:
            a = d.base.arrows[n]
            m = d.reindex[n]
            src_meet = d.fibers[a.cod].ops.meet
            tgt_meet = d.fibers[a.dom].ops.meet
            for (x, y), xy in src_meet.items():
                if m.table[xy] != tgt_meet[(m.table[x], m.table[y])]:
                    return Verdict.refuted(kind="meet_not_preserved", arrow=n,
                                           pair=[x, y], image_of_meet=m.table[xy],
                                           meet_of_images=tgt_meet[(m.table[x], m.table[y])])
        return Verdict.holds(d.window_descriptor)
    return d.cached(("is_primary",), compute)


def is_propositional(d: Doctrine) -> Verdict:
    """Are all scope fibers Heyting algebras, with reindexing a Heyting hom?"""
    def compute() -> Verdict:
        for o in d.scope_objects:
            if not d.fibers[o].ops.is_heyting:
                return Verdict.not_applicable(f"fiber({o}) is not a Heyting algebra")
        for n in d.scope_arrows:
            a = d.base.arrows[n]
            m = d.reindex[n]
            so = d.fibers[a.cod].ops
            to = d.fibers[a.dom].ops
            if m.table[so.top] != to.top or m.table[so.bottom] != to.bottom:
                return Verdict.refuted(kind="bound_not_preserved", arrow=n,
                                       top=[m.table[so.top], to.top],
                                       bottom=[m.table[so.bottom], to.bottom])
            for opname, sop, top_ in (("meet", so.meet, to.meet),
                                      ("join", so.join, to.join),
                                      ("implication", so.heyting_implication,
                                       to.heyting_implication)):
                for (x, y), xy in sop.items():
                    if m.table[xy] != top_[(m.table[x], m.table[y])]:
                        return Verdict.refuted(kind=f"{opname}_not_preserved",
                                               arrow=n, pair=[x, y],
                                               image_of_op=m.table[xy],
                                               op_of_images=top_[(m.table[x], m.table[y])])
        return Verdict.holds(d.window_descriptor)
    return d.cached(("is_propositional",), compute)


def bc_squares(d: Doctrine, cls: ArrowClass,
               extra: Iterable[Square] = ()) -> tuple[Square, ...]:
    """The window pullback squares over which Beck-Chevalley is quantified.

    For the projection class these are the product-table squares plus any
    window pullbacks of window-arrow members found by search; witness-based
    classes (comprehension, co-comprehension) pass their canonical squares
    through ``extra``.
    """
    def compute() -> tuple[Square, ...]:
        squares: list[Square] = list(extra)
        base = d.base
        members = set(cls.members)
        if cls.name == "Prj":
            squares.extend(base.canonical_projection_squares())
        window_arrows = set(base.window_arrows)
        for f in cls.members:
            if f not in window_arrows:
                continue
            for h in base.window_arrows_into(base.cod(f)):
                s = base.pullback(f, h)
                if s is not None:
                    squares.append(s)
        uniq: dict[tuple, Square] = {}
        for s in squares:
            uniq.setdefault((s.f, s.g, s.to_f, s.to_g), s)
        return tuple(uniq[k] for k in sorted(uniq))

    return d.cached(("bc_squares", cls.name, cls.members, tuple(extra)), compute)


def _adjoints_exist(d: Doctrine, cls: ArrowClass, which: str) -> Verdict | None:
    getter = d.sigma if which == "sigma" else d.pi
    for f in cls.members:
        if getter(f) is None:
            return Verdict.not_applicable(f"{which} adjoint missing at {f}")
    return None


def _bc_check(d: Doctrine, cls: ArrowClass, squares: Iterable[Square],
              which: str, restricted: bool) -> Verdict:
    getter = d.sigma if which == "sigma" else d.pi
    for s in squares:
        adj_f = getter(s.f)
        adj_g = getter(s.to_g)
        if adj_f is None:
            return Verdict.not_applicable(f"{which} adjoint missing at {s.f}")
        if adj_g is None:
            return Verdict.not_applicable(f"{which} adjoint missing at {s.to_g}")
        h_star = d.reindex[s.g]
        k_star = d.reindex[s.to_f]
        dom_fiber = d.fibers[d.base.dom(s.f)]
        if restricted:
            f_star = d.reindex[s.f]
            gammas = sorted({f_star.table[xi]
                             for xi in d.fibers[d.base.cod(s.f)].elements},
                            key=dom_fiber.index.__getitem__)
        else:
            gammas = list(dom_fiber.elements)
        for gamma in gammas:
            lhs = h_star.table[adj_f.table[gamma]]
            rhs = adj_g.table[k_star.table[gamma]]
            if lhs != rhs:
                return Verdict.refuted(kind="beck_chevalley", which=which,
                                       arrow_class=cls.name,
                                       restricted=restricted,
                                       square=vars(s), gamma=gamma,
                                       lhs=lhs, rhs=rhs)
    return Verdict.holds(d.window_descriptor)


def is_sigma_doctrine(d: Doctrine, cls: ArrowClass | None = None,
                      restricted: bool = False,
                      squares: Iterable[Square] | None = None) -> Verdict:
    """Left adjoints along the class with (restricted) Beck-Chevalley."""
    if cls is None:
        cls = d.base.projection_class()

    def compute() -> Verdict:
        stable = d.base.is_pullback_stable(cls) if squares is None else None
        if stable is not None and stable.is_refuted:
            return Verdict.not_applicable(
                f"class {cls.name} not pullback-stable: {stable.counterexample}")
        missing = _adjoints_exist(d, cls, "sigma")
        if missing is not None:
            return missing
        sqs = tuple(squares) if squares is not None else bc_squares(d, cls)
        return _bc_check(d, cls, sqs, "sigma", restricted)

    key = ("is_sigma_doctrine", cls.name, cls.members, restricted,
           None if squares is None else tuple(squares))
    return d.cached(key, compute)


def is_pi_doctrine(d: Doctrine, cls: ArrowClass | None = None,
                   restricted: bool = False,
                   squares: Iterable[Square] | None = None) -> Verdict:
    """Right adjoints along the class with (restricted) Beck-Chevalley."""
    if cls is None:
        cls = d.base.projection_class()

    def compute() -> Verdict:
        stable = d.base.is_pullback_stable(cls) if squares is None else None
        if stable is not None and stable.is_refuted:
            return Verdict.not_applicable(
                f"class {cls.name} not pullback-stable: {stable.counterexample}")
        missing = _adjoints_exist(d, cls, "pi")
        if missing is not None:
            return missing
        sqs = tuple(squares) if squares is not None else bc_squares(d, cls)
        return _bc_check(d, cls, sqs, "pi", restricted)

    key = ("is_pi_doctrine", cls.name, cls.members, restricted,
           None if squares is None else tuple(squares))
    return d.cached(key, compute)


def frobenius(d: Doctrine, cls: ArrowClass | None = None) -> Verdict:
    """Sigma_f(alpha and f*beta) = beta and Sigma_f(alpha) over the class."""
    if cls is None:
        cls = d.base.projection_class()

    def compute() -> Verdict:
        primary = is_primary(d)
        if not primary:
            return primary if primary.is_refuted else Verdict.not_applicable(
                f"not primary: {primary.reason}")
        for f in cls.members:
            adj = d.sigma(f)
            if adj is None:
                return Verdict.not_applicable(f"sigma adjoint missing at {f}")
            a = d.base.arrows[f]
            dom_ops = d.fibers[a.dom].ops
            cod_ops = d.fibers[a.cod].ops
            if dom_ops.meet is None or cod_ops.meet is None:
                return Verdict.not_applicable(f"no meets around {f}")
            f_star = d.reindex[f].table
            for alpha in d.fibers[a.dom].elements:
                for beta in d.fibers[a.cod].elements:
                    lhs = adj.table[dom_ops.meet[(alpha, f_star[beta])]]
                    rhs = cod_ops.meet[(beta, adj.table[alpha])]
                    if lhs != rhs:
                        return Verdict.refuted(kind="frobenius", arrow=f,
                                               alpha=alpha, beta=beta,
                                               lhs=lhs, rhs=rhs)
        return Verdict.holds(d.window_descriptor)

    return d.cached(("frobenius", cls.name, cls.members), compute)


def is_existential(d: Doctrine) -> Verdict:
    """Sigma-doctrine over projections satisfying Frobenius reciprocity."""
    def compute() -> Verdict:
        prj = d.base.projection_class()
        return combine(d.window_descriptor,
                       is_primary(d),
                       is_sigma_doctrine(d, prj, restricted=False),
                       frobenius(d, prj))
    return d.cached(("is_existential",), compute)
