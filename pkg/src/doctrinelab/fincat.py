"""Finite cartesian base categories with explicit tables and a quantification window.

A :class:`FinCategory` always holds explicit finite data (objects, arrows,
a total composition table over composable pairs, chosen products).  The
``window`` is the subset of objects over which universally quantified checks
range; for genuinely finite bases it is all objects, for windows into an
ambient infinite category (finite sets, finite spaces) it is the declared
generation bound and verdicts carry its descriptor.

Concrete windows are materialized by :class:`ConcreteBuilder`, which closes a
generator set under composition and under pairing into the chosen products.
Arrows of concrete categories are tabulated functions, so composites are
deduplicated extensionally and the composition table is total by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .poset import FinPoset
from .verdicts import (MalformedCategory, StructureMissing, Verdict,
                       WindowExceeded)

__all__ = [
    "Arrow",
    "Product",
    "Square",
    "ArrowClass",
    "Presentation",
    "FinCategory",
    "ConcreteBuilder",
]


@dataclass(frozen=True)
class Arrow:
    name: str
    dom: str
    cod: str


@dataclass(frozen=True)
class Product:
    """A chosen binary product: carrier with its two projections."""
    left: str
    right: str
    obj: str
    proj1: str
    proj2: str


@dataclass(frozen=True)
class Square:
    """Commuting square around a chosen pullback of ``f`` along ``g``::

        apex --to_g--> dom(g)
          |               |
        to_f              g
          |               |
        dom(f) --f--> cod(f)=cod(g)
    """
    apex: str
    to_f: str
    to_g: str
    f: str
    g: str


@dataclass(frozen=True)
class ArrowClass:
    """A class of arrows given by chosen representative members.

    ``pullback_stable`` records a verified closure flag; None means not yet
    checked (the Beck-Chevalley machinery re-verifies stability anyway)."""
    name: str
    members: tuple[str, ...]
    pullback_stable: bool | None = None


@dataclass(frozen=True)
class Presentation:
    kind: str
    spec: tuple
    truncated: bool = False

    def descriptor(self) -> str:
        if not self.spec:
            return self.kind
        return f"{self.kind}({','.join(str(s) for s in self.spec)})"


class FinCategory:
    """Objects, arrows, composition, chosen products, and the window."""

    def __init__(self, objects: Sequence[str], arrows: Iterable[Arrow],
                 identity: Mapping[str, str],
                 compose: Mapping[tuple[str, str], str],
                 window: Sequence[str] | None = None,
                 products: Mapping[tuple[str, str], Product] | None = None,
                 terminal: str | None = None,
                 presentation: Presentation = Presentation("explicit", ()),
                 sizes: Mapping[str, int] | None = None,
                 power_pool: Sequence[str] | None = None,
                 tables: Mapping[str, tuple[int, ...]] | None = None):
        self.objects = tuple(objects)
        self._obj_index = {o: i for i, o in enumerate(self.objects)}
        if len(self._obj_index) != len(self.objects):
            raise MalformedCategory("duplicate object ids")
        self.arrows: dict[str, Arrow] = {}
        for a in arrows:
            if a.dom not in self._obj_index or a.cod not in self._obj_index:
                raise MalformedCategory(f"arrow {a.name} references undeclared object")
            if a.name in self.arrows:
                raise MalformedCategory(f"duplicate arrow id {a.name}")
            self.arrows[a.name] = a
        self.identity = dict(identity)
        for o in self.objects:
            i = self.identity.get(o)
            if i is None or i not in self.arrows:
                raise MalformedCategory(f"missing identity for {o}")
            if self.arrows[i].dom != o or self.arrows[i].cod != o:
                raise MalformedCategory(f"identity of {o} is not an endo-arrow")
        self.compose_table = dict(compose)
        for (g, f), gf in self.compose_table.items():
            if g not in self.arrows or f not in self.arrows or gf not in self.arrows:
                raise MalformedCategory(f"composition entry ({g},{f}) references unknown arrow")
        self.window = tuple(window) if window is not None else self.objects
        for o in self.window:
            if o not in self._obj_index:
                raise MalformedCategory(f"window object {o} undeclared")
        self.products: dict[tuple[str, str], Product] = dict(products or {})
        self.terminal_obj = terminal
        self.presentation = presentation
        self.sizes = dict(sizes) if sizes else None
        self.power_pool = tuple(power_pool) if power_pool is not None else self.window
        self.tables = dict(tables) if tables is not None else None
        self._product_ok: dict[tuple[str, str], Any] = {}
        self._pullback_cache: dict[tuple[str, str], Square | None] = {}

    # -- basic structure ---------------------------------------------------

    def obj_index(self, o: str) -> int:
        return self._obj_index[o]

    def arrow(self, name: str) -> Arrow:
        return self.arrows[name]

    def dom(self, name: str) -> str:
        return self.arrows[name].dom

    def cod(self, name: str) -> str:
        return self.arrows[name].cod

    @cached_property
    def arrow_order(self) -> dict[str, int]:
        key = lambda n: (self._obj_index[self.arrows[n].dom],
                         self._obj_index[self.arrows[n].cod], n)
        return {n: i for i, n in enumerate(sorted(self.arrows, key=key))}

    def sort_arrows(self, names: Iterable[str]) -> list[str]:
        order = self.arrow_order
        return sorted(names, key=order.__getitem__)

    @cached_property
    def _hom(self) -> dict[tuple[str, str], tuple[str, ...]]:
        buckets: dict[tuple[str, str], list[str]] = {}
        for n, a in self.arrows.items():
            buckets.setdefault((a.dom, a.cod), []).append(n)
        return {k: tuple(self.sort_arrows(v)) for k, v in buckets.items()}

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        return self._hom.get((x, y), ())

    @cached_property
    def _from(self) -> dict[str, tuple[str, ...]]:
        buckets: dict[str, list[str]] = {o: [] for o in self.objects}
        for n, a in self.arrows.items():
            buckets[a.dom].append(n)
        return {k: tuple(self.sort_arrows(v)) for k, v in buckets.items()}

    @cached_property
    def _into(self) -> dict[str, tuple[str, ...]]:
        buckets: dict[str, list[str]] = {o: [] for o in self.objects}
        for n, a in self.arrows.items():
            buckets[a.cod].append(n)
        return {k: tuple(self.sort_arrows(v)) for k, v in buckets.items()}

    def arrows_from(self, o: str) -> tuple[str, ...]:
        return self._from[o]

    def arrows_into(self, o: str) -> tuple[str, ...]:
        return self._into[o]

    @cached_property
    def window_arrows(self) -> tuple[str, ...]:
        ws = set(self.window)
        names = [n for n, a in self.arrows.items() if a.dom in ws and a.cod in ws]
        return tuple(self.sort_arrows(names))

    def window_arrows_into(self, o: str) -> tuple[str, ...]:
        ws = set(self.window)
        return tuple(n for n in self.arrows_into(o) if self.arrows[n].dom in ws)

    def compose(self, g: str, f: str) -> str:
        """g after f.  Raises on a missing composite of a composable pair."""
        got = self.compose_table.get((g, f))
        if got is None:
            if self.cod(f) != self.dom(g):
                raise ValueError(f"{g} and {f} are not composable")
            raise MalformedCategory(f"incomplete table: ({g}) o ({f}) missing")
        return got

    def compose_many(self, *names: str) -> str:
        """Composite of a path listed codomain-first: compose_many(h, g, f)."""
        out = names[0]
        for f in names[1:]:
            out = self.compose(out, f)
        return out

    @property
    def window_descriptor(self) -> str:
        return (f"{self.presentation.descriptor()};window={len(self.window)}obj/"
                f"{len(self.arrows)}arr")

    # -- validation --------------------------------------------------------

    def validate(self) -> Verdict:
        """Identity and associativity laws over the materialized tables.

        Missing composites raise :class:`MalformedCategory`; genuine law
        violations come back as Refuted with the offending triple.
        """
        names = list(self.arrows)
        idx = {n: i for i, n in enumerate(names)}
        into: dict[str, list[int]] = {o: [] for o in self.objects}
        outof: dict[str, list[int]] = {o: [] for o in self.objects}
        for n, a in self.arrows.items():
            into[a.cod].append(idx[n])
            outof[a.dom].append(idx[n])
        n_arr = len(names)
        table = [[-1] * n_arr for _ in range(n_arr)]
        for f_i, f in enumerate(names):
            for g_i in outof[self.arrows[f].cod]:
                gf = self.compose_table.get((names[g_i], f))
                if gf is None:
                    raise MalformedCategory(
                        f"incomplete table: ({names[g_i]}) o ({f}) missing")
                a_gf = self.arrows[gf]
                if a_gf.dom != self.arrows[f].dom or a_gf.cod != self.arrows[names[g_i]].cod:
                    raise MalformedCategory(
                        f"composite ({names[g_i]}) o ({f}) has wrong endpoints")
                table[g_i][f_i] = idx[gf]
        for o in self.objects:
            i = idx[self.identity[o]]
            for f_i in into[o]:
                if table[i][f_i] != f_i:
                    return Verdict.refuted(kind="identity_law", object=o,
                                           arrow=names[f_i],
                                           composite=names[table[i][f_i]])
            for g_i in outof[o]:
                if table[g_i][i] != g_i:
                    return Verdict.refuted(kind="identity_law", object=o,
                                           arrow=names[g_i],
                                           composite=names[table[g_i][i]])
        for f_i, f in enumerate(names):
            cf = self.arrows[f].cod
            for g_i in outof[cf]:
                gf_i = table[g_i][f_i]
                cg = self.arrows[names[g_i]].cod
                for h_i in outof[cg]:
                    if table[h_i][gf_i] != table[table[h_i][g_i]][f_i]:
                        return Verdict.refuted(
                            kind="associativity", f=f, g=names[g_i], h=names[h_i],
                            left=names[table[h_i][gf_i]],
                            right=names[table[table[h_i][g_i]][f_i]])
        return Verdict.holds(self.window_descriptor)

    # -- products ----------------------------------------------------------

    def product(self, a: str, b: str) -> Product:
        row = self.products.get((a, b))
        if row is None:
            raise WindowExceeded(f"no materialized product for ({a},{b})")
        if not self.presentation.truncated:
            bad = self._verify_product(row)
            if bad is not None:
                raise MalformedCategory(f"not a product: ({a},{b}): {bad}")
        return row

    def _verify_product(self, row: Product) -> str | None:
        key = (row.left, row.right)
        if key in self._product_ok:
            return self._product_ok[key]
        result = None
        for x in self.window:
            for f in self.hom(x, row.left):
                for g in self.hom(x, row.right):
                    ms = [h for h in self.hom(x, row.obj)
                          if self.compose_table.get((row.proj1, h)) == f
                          and self.compose_table.get((row.proj2, h)) == g]
                    if len(ms) != 1:
                        result = f"{len(ms)} mediators for ({f},{g})"
                        break
                if result:
                    break
            if result:
                break
        self._product_ok[key] = result
        return result

    def pair(self, f: str, g: str) -> str:
        """The unique mediating arrow into the chosen product of the codomains."""
        af, ag = self.arrows[f], self.arrows[g]
        if af.dom != ag.dom:
            raise ValueError(f"pair({f},{g}): domains differ")
        row = self.product(af.cod, ag.cod)
        ms = [h for h in self.hom(af.dom, row.obj)
              if self.compose_table.get((row.proj1, h)) == f
              and self.compose_table.get((row.proj2, h)) == g]
        if not ms:
            raise MalformedCategory(f"not a product: no mediator for ({f},{g})")
        if len(ms) > 1:
            raise MalformedCategory(f"not a product: mediator for ({f},{g}) not unique")
        return ms[0]

    def terminal(self) -> str:
        if self.terminal_obj is None:
            raise StructureMissing("no terminal object declared")
        return self.terminal_obj

    def bang(self, x: str) -> str:
        """The unique arrow into the terminal object."""
        t = self.terminal()
        hom = self.hom(x, t)
        if len(hom) != 1:
            raise MalformedCategory(f"terminal {t} has {len(hom)} arrows from {x}")
        return hom[0]

    def diagonal(self, a: str) -> str:
        return self.pair(self.identity[a], self.identity[a])

    def times(self, f: str, g: str) -> str:
        """f x g between the chosen products of the endpoints."""
        row = self.product(self.dom(f), self.dom(g))
        return self.pair(self.compose(f, row.proj1), self.compose(g, row.proj2))

    def swap(self, a: str, b: str) -> str:
        row = self.product(a, b)
        return self.pair(row.proj2, row.proj1)

    # -- isomorphisms, monics, initials -------------------------------------

    def find_iso(self, a: str, b: str) -> tuple[str, str] | None:
        """A mutual inverse pair (u: a->b, v: b->a) within the window tables."""
        ida, idb = self.identity[a], self.identity[b]
        for u in self.hom(a, b):
            for v in self.hom(b, a):
                if (self.compose_table.get((v, u)) == ida
                        and self.compose_table.get((u, v)) == idb):
                    return u, v
        return None

    def is_iso(self, f: str) -> bool:
        a = self.arrows[f]
        for v in self.hom(a.cod, a.dom):
            if (self.compose_table.get((v, f)) == self.identity[a.dom]
                    and self.compose_table.get((f, v)) == self.identity[a.cod]):
                return True
        return False

    def is_monic(self, f: str) -> Verdict:
        af = self.arrows[f]
        for x in self.window:
            hom = self.hom(x, af.dom)
            for i, g in enumerate(hom):
                fg = self.compose(f, g)
                for h in hom[i + 1:]:
                    if self.compose(f, h) == fg:
                        return Verdict.refuted(kind="not_monic", arrow=f,
                                               pair=[g, h], composite=fg)
        return Verdict.holds(self.window_descriptor)

    def is_stable_initial(self, a: str) -> Verdict:
        for x in self.window:
            hom = self.hom(a, x)
            if len(hom) != 1:
                return Verdict.refuted(kind="not_initial", object=a, target=x,
                                       arrows=list(hom))
        for x in self.window:
            row = self.products.get((x, a))
            if row is None:
                raise WindowExceeded(f"no product ({x},{a}) to test stability")
            if row.obj != a and self.find_iso(row.obj, a) is None:
                return Verdict.refuted(kind="unstable_initial", object=a,
                                       factor=x, product=row.obj)
        return Verdict.holds(self.window_descriptor)

    @cached_property
    def stable_initials(self) -> tuple[str, ...]:
        return tuple(o for o in self.window if self.is_stable_initial(o))

    # -- pullbacks -----------------------------------------------------------

    def pullback(self, f: str, g: str) -> Square | None:
        """A limiting square over the cospan ``f, g``, if the window holds one.

        Mediating-arrow existence and uniqueness are verified against every
        competitor cone with a window apex.
        """
        af, ag = self.arrows[f], self.arrows[g]
        if af.cod != ag.cod:
            raise ValueError("pullback needs a cospan (equal codomains)")
        if (f, g) in self._pullback_cache:
            return self._pullback_cache[(f, g)]
        cones: list[tuple[str, str, str]] = []
        for y in self.window:
            for u in self.hom(y, af.dom):
                fu = self.compose(f, u)
                for v in self.hom(y, ag.dom):
                    if self.compose(g, v) == fu:
                        cones.append((y, u, v))
        found = None
        for q in self.objects:
            for p1 in self.hom(q, af.dom):
                fp1 = self.compose(f, p1)
                for p2 in self.hom(q, ag.dom):
                    if self.compose(g, p2) != fp1:
                        continue
                    if self._is_limiting(q, p1, p2, cones):
                        found = Square(apex=q, to_f=p1, to_g=p2, f=f, g=g)
                        break
                if found:
                    break
            if found:
                break
        self._pullback_cache[(f, g)] = found
        return found

    def _is_limiting(self, q: str, p1: str, p2: str,
                     cones: list[tuple[str, str, str]]) -> bool:
        for y, u, v in cones:
            ms = [k for k in self.hom(y, q)
                  if self.compose(p1, k) == u and self.compose(p2, k) == v]
            if len(ms) != 1:
                return False
        return True

    def verify_square_is_pullback(self, s: Square) -> Verdict:
        """Checks commutation plus window-limiting property of a given square."""
        if self.compose(s.f, s.to_f) != self.compose(s.g, s.to_g):
            return Verdict.refuted(kind="square_not_commuting", square=vars(s))
        for y in self.window:
            for u in self.hom(y, self.dom(s.f)):
                fu = self.compose(s.f, u)
                for v in self.hom(y, self.dom(s.g)):
                    if self.compose(s.g, v) != fu:
                        continue
                    ms = [k for k in self.hom(y, s.apex)
                          if self.compose(s.to_f, k) == u
                          and self.compose(s.to_g, k) == v]
                    if len(ms) != 1:
                        return Verdict.refuted(kind="square_not_limiting",
                                               square=vars(s), cone=[y, u, v],
                                               mediators=ms)
        return Verdict.holds(self.window_descriptor)

    # -- projections and arrow classes ---------------------------------------

    @cached_property
    def first_level_rows(self) -> tuple[Product, ...]:
        """Product rows whose factors are window or power-pool objects."""
        scope = set(self.window) | set(self.power_pool)
        rows = [r for (a, b), r in sorted(self.products.items())
                if a in scope and b in scope]
        return tuple(rows)

    def projection_class(self) -> ArrowClass:
        members: list[str] = []
        seen = set()
        for r in self.first_level_rows:
            for p in (r.proj1, r.proj2):
                if p not in seen:
                    seen.add(p)
                    members.append(p)
        return ArrowClass("Prj", tuple(self.sort_arrows(members)))

    def class_contains(self, cls: ArrowClass, f: str) -> bool:
        """Membership up to isomorphism over the codomain."""
        if f in cls.members:
            return True
        af = self.arrows[f]
        for m in cls.members:
            am = self.arrows[m]
            if am.cod != af.cod:
                continue
            for j in self.hom(af.dom, am.dom):
                if self.is_iso(j) and self.compose(m, j) == f:
                    return True
        return False

    def canonical_projection_squares(self) -> tuple[Square, ...]:
        """Each chosen projection pulled back along every window arrow into
        its codomain, with the apex taken from the product table."""
        squares: list[Square] = []
        for r in self.first_level_rows:
            for h in self.window_arrows_into(r.left):
                y = self.dom(h)
                apex_row = self.products.get((y, r.right))
                if apex_row is None:
                    continue
                squares.append(Square(apex=apex_row.obj,
                                      to_f=self.times(h, self.identity[r.right]),
                                      to_g=apex_row.proj1, f=r.proj1, g=h))
            for h in self.window_arrows_into(r.right):
                y = self.dom(h)
                apex_row = self.products.get((r.left, y))
                if apex_row is None:
                    continue
                squares.append(Square(apex=apex_row.obj,
                                      to_f=self.times(self.identity[r.left], h),
                                      to_g=apex_row.proj2, f=r.proj2, g=h))
        uniq: dict[tuple, Square] = {}
        for s in squares:
            uniq.setdefault((s.f, s.g, s.to_f, s.to_g), s)
        return tuple(uniq[k] for k in sorted(uniq))

    def is_pullback_stable(self, cls: ArrowClass) -> Verdict:
        """Is the class closed under the window pullbacks that exist?"""
        if cls.name == "Prj":
            for s in self.canonical_projection_squares():
                if not self.class_contains(cls, s.to_g):
                    return Verdict.refuted(kind="class_not_stable", member=s.f,
                                           along=s.g, pulled_back=s.to_g,
                                           arrow_class=cls.name,
                                           members=list(cls.members))
            return Verdict.holds(self.window_descriptor)
        window_arrows = set(self.window_arrows)
        for f in cls.members:
            if f not in window_arrows:
                continue
            for h in self.window_arrows_into(self.cod(f)):
                s = self.pullback(f, h)
                if s is None:
                    continue
                if not self.class_contains(cls, s.to_g):
                    return Verdict.refuted(kind="class_not_stable", member=f,
                                           along=h, pulled_back=s.to_g,
                                           arrow_class=cls.name,
                                           members=list(cls.members))
        return Verdict.holds(self.window_descriptor)

    # -- subobjects ------------------------------------------------------------

    def subobject_poset(self, a: str) -> FinPoset:
        """Window monics into ``a`` modulo mutual factorization, ordered by
        factorization; class representative is the least arrow id."""
        ws = set(self.window)
        monics = [m for m in self.window_arrows_into(a) if self.is_monic(m)]
        factors: dict[str, set[str]] = {}
        for m in monics:
            factors[m] = set()
            for m2 in monics:
                if any(self.compose(m2, k) == m
                       for k in self.hom(self.dom(m), self.dom(m2))):
                    factors[m].add(m2)
        reps: dict[str, str] = {}
        for m in monics:
            cls = [m2 for m2 in monics if m2 in factors[m] and m in factors[m2]]
            reps[m] = self.sort_arrows(cls)[0]
        elements = sorted(set(reps.values()), key=self.arrow_order.__getitem__)
        leq = [(r1, r2) for r1 in elements for r2 in elements if r2 in factors[r1]]
        return FinPoset(elements, leq)

    def __repr__(self) -> str:
        return (f"FinCategory({len(self.objects)} objects, {len(self.arrows)} arrows, "
                f"window={len(self.window)})")


class ConcreteBuilder:
    """Materializes a window category whose arrows are tabulated functions.

    Generators (all functions between window objects for a finite-sets
    window, all continuous maps for a spaces window) are closed under
    composition and under pairing of window-domain cospans into the declared
    product rows; the chosen structural arrows (projections, swaps, ``f x g``,
    and the diagonal pairing into each iterated row) are injected explicitly
    so that nothing with a large domain is ever fully enumerated.
    """

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self.carriers: dict[str, int] = {}
        self.window: list[str] = []
        self.power_pool: list[str] = []
        self.order: list[str] = []
        self.rows: dict[tuple[str, str], str] = {}
        self.terminal: str | None = None
        self._gens: list[tuple[str, str, tuple[int, ...]]] = []

    def add_object(self, name: str, size: int, window: bool = False,
                   pool: bool = False) -> str:
        if name in self.carriers:
            if self.carriers[name] != size:
                raise ValueError(f"object {name} redeclared with different size")
        else:
            self.carriers[name] = size
            self.order.append(name)
        if window and name not in self.window:
            self.window.append(name)
        if pool and name not in self.power_pool:
            self.power_pool.append(name)
        return name

    def add_arrow(self, dom: str, cod: str, images: Sequence[int]) -> None:
        self._gens.append((dom, cod, tuple(images)))

    def declare_product(self, left: str, right: str, carrier: str) -> None:
        """Point coding of the carrier is (i, j) -> i * |right| + j."""
        if self.carriers[carrier] != self.carriers[left] * self.carriers[right]:
            raise ValueError(f"carrier {carrier} has wrong size for {left}x{right}")
        self.rows[(left, right)] = carrier

    def _name(self, dom: str, cod: str, images: tuple[int, ...]) -> str:
        return f"{dom}>{cod}:{','.join(map(str, images))}"

    def close(self) -> FinCategory:
        arrow_of: dict[tuple[str, str, tuple[int, ...]], str] = {}
        arrows: dict[str, Arrow] = {}
        images: dict[str, tuple[int, ...]] = {}
        by_dom: dict[str, list[str]] = {o: [] for o in self.order}
        by_cod: dict[str, list[str]] = {o: [] for o in self.order}
        table: dict[tuple[str, str], str] = {}
        queue: list[str] = []

        def intern(dom: str, cod: str, img: tuple[int, ...]) -> str:
            key = (dom, cod, img)
            name = arrow_of.get(key)
            if name is None:
                name = self._name(dom, cod, img)
                arrow_of[key] = name
                arrows[name] = Arrow(name, dom, cod)
                images[name] = img
                by_dom[dom].append(name)
                by_cod[cod].append(name)
                queue.append(name)
            return name

        identity: dict[str, str] = {}
        for o in self.order:
            identity[o] = intern(o, o, tuple(range(self.carriers[o])))
        for dom, cod, img in self._gens:
            intern(dom, cod, img)

        projections: dict[tuple[str, str], tuple[str, str]] = {}
        for (a, b), carrier in self.rows.items():
            nb = self.carriers[b]
            size = self.carriers[carrier]
            p1 = intern(carrier, a, tuple(p // nb for p in range(size)))
            p2 = intern(carrier, b, tuple(p % nb for p in range(size)))
            projections[(a, b)] = (p1, p2)

        def comp_img(g: str, f: str) -> tuple[int, ...]:
            gi = images[g]
            return tuple(gi[x] for x in images[f])

        window_set = set(self.window)

        def process(name: str) -> None:
            a = arrows[name]
            for g in list(by_dom[a.cod]):
                if (g, name) not in table:
                    table[(g, name)] = intern(a.dom, arrows[g].cod, comp_img(g, name))
            for f in list(by_cod[a.dom]):
                if (name, f) not in table:
                    table[(name, f)] = intern(arrows[f].dom, a.cod, comp_img(name, f))
            if a.dom in window_set:
                for g in list(by_dom[a.dom]):
                    for f_, g_ in ((name, g), (g, name)):
                        row = self.rows.get((arrows[f_].cod, arrows[g_].cod))
                        if row is None:
                            continue
                        nb = self.carriers[arrows[g_].cod]
                        img = tuple(x * nb + y
                                    for x, y in zip(images[f_], images[g_]))
                        intern(a.dom, row, img)

        # Structural injections with non-window domains: f x g, swaps, and the
        # pairing <id, p2> : XA -> (XA)xA used by the equality-predicate functor.
        def inject_structural() -> None:
            scope = window_set | set(self.power_pool)
            gen_arrows = [n for n in list(arrows)
                          if arrows[n].dom in scope and arrows[n].cod in scope]
            for f in gen_arrows:
                for g in gen_arrows:
                    src = self.rows.get((arrows[f].dom, arrows[g].dom))
                    dst = self.rows.get((arrows[f].cod, arrows[g].cod))
                    if src is None or dst is None:
                        continue
                    nb_src = self.carriers[arrows[g].dom]
                    nb_dst = self.carriers[arrows[g].cod]
                    img = tuple(images[f][p // nb_src] * nb_dst + images[g][p % nb_src]
                                for p in range(self.carriers[src]))
                    intern(src, dst, img)
            for (a, b), carrier in list(self.rows.items()):
                if (b, a) in self.rows:
                    na, nb = self.carriers[a], self.carriers[b]
                    img = tuple((p % nb) * na + p // nb
                                for p in range(self.carriers[carrier]))
                    intern(carrier, self.rows[(b, a)], img)
            for (x, a), carrier in list(self.rows.items()):
                triple = self.rows.get((carrier, a))
                if triple is None:
                    continue
                na = self.carriers[a]
                img = tuple(p * na + p % na for p in range(self.carriers[carrier]))
                intern(carrier, triple, img)
                square = self.rows.get((a, a))
                if square is not None:
                    # p2 x id_A : (XxA)xA -> AxA, i.e. the <pi2, pi3> pairing.
                    img2 = tuple(((t // na) % na) * na + t % na
                                 for t in range(self.carriers[triple]))
                    intern(triple, square, img2)

        inject_structural()
        while queue:
            process(queue.pop())

        products: dict[tuple[str, str], Product] = {}
        for (a, b), carrier in self.rows.items():
            p1, p2 = projections[(a, b)]
            products[(a, b)] = Product(a, b, carrier, p1, p2)

        window_objs = [o for o in self.order if o in window_set]
        return FinCategory(self.order, arrows.values(), identity, table,
                           window=window_objs, products=products,
                           terminal=self.terminal,
                           presentation=self.presentation,
                           sizes=dict(self.carriers),
                           power_pool=list(self.power_pool) or None,
                           tables=images)
