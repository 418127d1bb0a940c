"""Built-in doctrine instances.

* ``PS(m,d)`` -- finite sets up to size ``m`` with all functions, fibers the
  powersets, reindexing by preimage; ``d`` power-closure steps add the
  powerset carriers to the candidate pool for power-object searches.
* ``SIER`` -- the empty, one-point and Sierpinski spaces with all continuous
  maps; fibers the open-set frames, reindexing by preimage.
* ``TRIV`` -- singleton fibers over the PS(1,1) base.
* ``SL3`` -- the 3-chain meet-semilattice as a thin base; fiber over U is the
  lattice of down-sets of the principal ideal of U.

Every constructor returns a validated, immutable doctrine; instances are
cached per id so the classification memo is shared across a session.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .doctrine import Doctrine
from .fincat import ConcreteBuilder, FinCategory, Arrow, Presentation, Product
from .poset import FinPoset, MonotoneMap
from .verdicts import InvalidTopology, WindowExceeded

__all__ = [
    "powerset_finset",
    "openset_space",
    "trivial_fiber",
    "semilattice_category",
    "subsets_over_semilattice",
    "SIERPINSKI_SPACES",
    "catalog_ids",
    "instance",
]

_POWERSET_FIBERS: dict[int, FinPoset] = {}
_SINGLETON_FIBER = FinPoset(("t",), [("t", "t")], validate=False)


def _powerset_fiber(size: int) -> FinPoset:
    got = _POWERSET_FIBERS.get(size)
    if got is None:
        n = 1 << size
        elements = tuple(f"e{m}" for m in range(n))
        uppers = []
        for m in range(n):
            u = 0
            for m2 in range(n):
                if m & ~m2 == 0:
                    u |= 1 << m2
            uppers.append(u)
        got = FinPoset(elements, (), validate=False, _masks=tuple(uppers))
        _POWERSET_FIBERS[size] = got
    return got


def _mask_fiber(masks: Sequence[int]) -> FinPoset:
    """Poset of the given point-set masks ordered by inclusion."""
    elements = tuple(f"e{m}" for m in masks)
    uppers = []
    for m in masks:
        u = 0
        for j, m2 in enumerate(masks):
            if m & ~m2 == 0:
                u |= 1 << j
        uppers.append(u)
    return FinPoset(elements, (), validate=False, _masks=tuple(uppers))


def _preimage_map(images: Sequence[int], src: FinPoset, tgt: FinPoset,
                  dom_size: int) -> MonotoneMap:
    table = {}
    for e in src.elements:
        mb = int(e[1:])
        ma = 0
        for x in range(dom_size):
            if mb >> images[x] & 1:
                ma |= 1 << x
        table[e] = f"e{ma}"
    return MonotoneMap(src, tgt, table, validate=False)


def _restricted_preimage_map(images: Sequence[int], src: FinPoset,
                             tgt: FinPoset, dom_size: int) -> MonotoneMap:
    """Preimage where the target fiber holds only some masks (opens)."""
    table = {}
    for e in src.elements:
        mb = int(e[1:])
        ma = 0
        for x in range(dom_size):
            if mb >> images[x] & 1:
                ma |= 1 << x
        key = f"e{ma}"
        if key not in tgt.index:
            raise InvalidTopology(f"preimage {ma} not an admissible fiber element")
        table[e] = key
    return MonotoneMap(src, tgt, table, validate=False)


def powerset_finset(max_size: int, power_depth: int = 0,
                    ceiling: int = 256) -> Doctrine:
    """The powerset doctrine over a window of finite sets."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    window_sizes = list(range(max_size + 1))
    pool_sizes: set[int] = set()
    reachable = set(window_sizes)
    for _ in range(power_depth):
        step = {1 << s for s in sorted(reachable)}
        pool_sizes |= step
        reachable |= step
    scope = sorted(set(window_sizes) | pool_sizes)
    for a in scope:
        for b in scope:
            if a * b > ceiling:
                raise WindowExceeded(
                    f"product of sizes {a}x{b} exceeds ceiling {ceiling}")

    b = ConcreteBuilder(Presentation(
        "finset", (max_size, power_depth), truncated=True))
    for s in scope:
        b.add_object(f"S{s}", s, window=s in window_sizes,
                     pool=s in pool_sizes)
    # all functions between scope sets (window-to-window generators plus the
    # power-pool candidates for chi searches)
    for a in scope:
        for c in scope:
            if a == 0:
                b.add_arrow("S0", f"S{c}", ())
                continue
            if c == 0:
                continue
            total = c ** a
            for code in range(total):
                img = []
                x = code
                for _ in range(a):
                    img.append(x % c)
                    x //= c
                b.add_arrow(f"S{a}", f"S{c}", tuple(img))
    rows: set[tuple[int, int]] = set()
    for a in scope:
        for c in scope:
            rows.add((a, c))
    for x in window_sizes:
        for a in window_sizes:
            rows.add((x * a, a))  # triple carrier for the equality functor
    sizes_needed = sorted({a * c for a, c in rows} - set(scope))
    for s in sizes_needed:
        if s > ceiling:
            raise WindowExceeded(f"carrier size {s} exceeds ceiling {ceiling}")
        b.add_object(f"S{s}", s)
    for a, c in sorted(rows):
        b.declare_product(f"S{a}", f"S{c}", f"S{a * c}")
    b.terminal = "S1"
    base = b.close()

    fibers = {o: _powerset_fiber(base.sizes[o]) for o in base.objects}
    reindex = {}
    for n, arr in base.arrows.items():
        reindex[n] = _preimage_map(base.tables[n], fibers[arr.cod],
                                   fibers[arr.dom], base.sizes[arr.dom])
    return Doctrine(base, fibers, reindex, name=f"PS({max_size},{power_depth})",
                    source={"kind": "catalog", "id": f"PS({max_size},{power_depth})",
                            "dual": False})


SIERPINSKI_SPACES: Mapping[str, tuple[tuple[str, ...], tuple[tuple[str, ...], ...]]] = {
    "E": ((), ((),)),
    "U": (("u",), ((), ("u",))),
    "S": (("a", "b"), ((), ("a",), ("a", "b"))),
}


def _validate_topology(name: str, points: Sequence[str],
                       opens: Sequence[Sequence[str]]) -> list[int]:
    index = {p: i for i, p in enumerate(points)}
    if len(index) != len(points):
        raise InvalidTopology(f"{name}: duplicate points")
    masks = []
    for op in opens:
        m = 0
        for p in op:
            if p not in index:
                raise InvalidTopology(f"{name}: open set mentions unknown point {p}")
            m |= 1 << index[p]
        masks.append(m)
    if len(set(masks)) != len(masks):
        raise InvalidTopology(f"{name}: duplicate open sets")
    full = (1 << len(points)) - 1
    mset = set(masks)
    if 0 not in mset or full not in mset:
        raise InvalidTopology(f"{name}: topology must contain the empty and full sets")
    for m1 in masks:
        for m2 in masks:
            if m1 | m2 not in mset or m1 & m2 not in mset:
                raise InvalidTopology(f"{name}: not closed under union/intersection")
    return sorted(masks)


def _specialization(points: Sequence[str], masks: Sequence[int]) -> list[int]:
    """uppers[i] = mask of points in every open set containing point i."""
    n = len(points)
    uppers = []
    for i in range(n):
        u = (1 << n) - 1
        for m in masks:
            if m >> i & 1:
                u &= m
        uppers.append(u | 1 << i)
    return uppers


def _upset_masks(uppers: Sequence[int]) -> list[int]:
    n = len(uppers)
    out = []
    for m in range(1 << n):
        ok = True
        mm = m
        while mm:
            i = (mm & -mm).bit_length() - 1
            if uppers[i] & ~m:
                ok = False
                break
            mm &= mm - 1
        if ok:
            out.append(m)
    return out


def openset_space(spaces: Mapping[str, tuple[Sequence[str], Sequence[Sequence[str]]]],
                  name: str = "opens") -> Doctrine:
    """Open-set doctrine over the given finite spaces and all continuous maps.

    The window is exactly the named spaces; pairwise products and the triple
    carriers are materialized with the product topology (continuity between
    finite spaces is monotonicity for the specialization orders).
    """
    names = list(spaces)
    uppers: dict[str, list[int]] = {}
    npoints: dict[str, int] = {}
    for nm in names:
        points, opens = spaces[nm]
        masks = _validate_topology(nm, points, opens)
        uppers[nm] = _specialization(points, masks)
        npoints[nm] = len(points)

    order = sorted(names, key=lambda nm: (npoints[nm], nm))
    b = ConcreteBuilder(Presentation(
        "opens", tuple((nm, npoints[nm]) for nm in order), truncated=True))
    for nm in order:
        b.add_object(nm, npoints[nm], window=True)

    def monotone_maps(src: str, dst: str) -> Iterable[tuple[int, ...]]:
        ns, nd = npoints[src], npoints[dst]
        if ns == 0:
            yield ()
            return
        if nd == 0:
            return
        ups, upd = uppers[src], uppers[dst]
        def rec(i: int, acc: list[int]):
            if i == ns:
                yield tuple(acc)
                return
            for y in range(nd):
                ok = True
                for j in range(i):
                    if ups[j] >> i & 1 and not upd[acc[j]] >> y & 1:
                        ok = False
                        break
                    if ups[i] >> j & 1 and not upd[y] >> acc[j] & 1:
                        ok = False
                        break
                if ok:
                    acc.append(y)
                    yield from rec(i + 1, acc)
                    acc.pop()
        yield from rec(0, [])

    for src in order:
        for dst in order:
            for img in monotone_maps(src, dst):
                b.add_arrow(src, dst, img)

    def product_uppers(ua: list[int], ub: list[int]) -> list[int]:
        na, nb = len(ua), len(ub)
        out = []
        for p in range(na * nb):
            i, j = p // nb, p % nb
            m = 0
            for q in range(na * nb):
                if ua[i] >> (q // nb) & 1 and ub[j] >> (q % nb) & 1:
                    m |= 1 << q
            out.append(m)
        return out

    carriers: dict[str, list[int]] = dict()
    def ensure_product(a: str, c: str) -> str:
        nm = f"({a}x{c})"
        if nm not in b.carriers:
            ua = carriers.get(a, uppers.get(a))
            uc = carriers.get(c, uppers.get(c))
            carriers[nm] = product_uppers(ua, uc)
            b.add_object(nm, len(carriers[nm]))
            b.declare_product(a, c, nm)
        return nm

    for a in order:
        for c in order:
            ensure_product(a, c)
    for x in order:
        for a in order:
            ensure_product(f"({x}x{a})", a)
    for nm in order:
        if npoints[nm] == 1:
            b.terminal = nm
            break
    base = b.close()

    all_uppers = {nm: carriers.get(nm, uppers.get(nm)) for nm in base.objects}
    fibers = {o: _mask_fiber(_upset_masks(all_uppers[o])) for o in base.objects}
    reindex = {}
    for n, arr in base.arrows.items():
        reindex[n] = _restricted_preimage_map(
            base.tables[n], fibers[arr.cod], fibers[arr.dom], base.sizes[arr.dom])
    return Doctrine(base, fibers, reindex, name=name,
                    source={"kind": "catalog", "id": name, "dual": False})


def trivial_fiber(base: FinCategory, name: str = "TRIV",
                  source: Mapping | None = None) -> Doctrine:
    """All fibers singletons; every law collapses."""
    fibers = {o: _SINGLETON_FIBER for o in base.objects}
    reindex = {n: MonotoneMap(_SINGLETON_FIBER, _SINGLETON_FIBER, {"t": "t"},
                              validate=False)
               for n in base.arrows}
    return Doctrine(base, fibers, reindex, name=name,
                    source=dict(source) if source else {"kind": "catalog",
                                                        "id": name, "dual": False})


def semilattice_category(elements: Sequence[str],
                         leq: Iterable[tuple[str, str]],
                         kind: str = "semilattice") -> tuple[FinCategory, FinPoset]:
    """A finite meet-semilattice as a thin base: products are meets."""
    order = FinPoset(elements, leq)
    ops = order.ops
    if ops.meet is None:
        raise ValueError("not a meet-semilattice: some binary meet is missing")
    objs = list(order.elements)
    arrows = []
    identity = {}
    arrow_name = {}
    for i, v in enumerate(objs):
        for j, u in enumerate(objs):
            if order.leq_idx(i, j):
                n = f"{v}>{u}"
                arrows.append(Arrow(n, v, u))
                arrow_name[(v, u)] = n
                if v == u:
                    identity[v] = n
    compose = {}
    for a in arrows:
        for g in arrows:
            if g.dom == a.cod:
                compose[(g.name, a.name)] = arrow_name[(a.dom, g.cod)]
    products = {}
    for v in objs:
        for u in objs:
            m = ops.meet[(v, u)]
            products[(v, u)] = Product(v, u, m, arrow_name[(m, v)],
                                       arrow_name[(m, u)])
    base = FinCategory(objs, arrows, identity, compose,
                       products=products, terminal=ops.top,
                       presentation=Presentation(kind, tuple(objs)))
    return base, order


def subsets_over_semilattice(elements: Sequence[str],
                             leq: Iterable[tuple[str, str]],
                             name: str = "SL") -> Doctrine:
    """Down-set fibers over a finite meet-semilattice viewed as a thin base."""
    base, order = semilattice_category(elements, leq, kind="downsets")
    objs = list(order.elements)

    idx = order.index
    downset_masks: dict[str, list[int]] = {}
    fibers = {}
    for u in objs:
        ideal = order.lowers[idx[u]]
        masks = []
        # nonempty down-sets: the empty predicate admits no comprehension
        # arrow over a thin base (no object has an empty principal ideal)
        for m in range(1, 1 << len(objs)):
            if m & ~ideal:
                continue
            ok = True
            mm = m
            while mm:
                i = (mm & -mm).bit_length() - 1
                if order.lowers[i] & ideal & ~m:
                    ok = False
                    break
                mm &= mm - 1
            if ok:
                masks.append(m)
        downset_masks[u] = masks
        fibers[u] = _mask_fiber(masks)
    reindex = {}
    for a in base.arrows.values():
        ideal_v = order.lowers[idx[a.dom]]
        table = {f"e{m}": f"e{m & ideal_v}" for m in downset_masks[a.cod]}
        reindex[a.name] = MonotoneMap(fibers[a.cod], fibers[a.dom], table,
                                      validate=False)
    return Doctrine(base, fibers, reindex, name=name,
                    source={"kind": "catalog", "id": name, "dual": False})


_PS_RE = re.compile(r"PS\((\d+),(\d+)\)$")
_CACHE: dict[str, Doctrine] = {}


def catalog_ids() -> list[str]:
    return ["PS(2,0)", "PS(1,1)", "SIER", "TRIV", "SL3"]


def instance(cid: str) -> Doctrine:
    """Build (and cache) a catalog instance by id."""
    got = _CACHE.get(cid)
    if got is not None:
        return got
    m = _PS_RE.match(cid)
    if m:
        d = powerset_finset(int(m.group(1)), int(m.group(2)))
    elif cid == "SIER":
        d = openset_space(SIERPINSKI_SPACES, name="SIER")
    elif cid == "TRIV":
        d = trivial_fiber(instance("PS(1,1)").base, name="TRIV")
    elif cid == "SL3":
        d = subsets_over_semilattice(
            ("L0", "L1", "L2"),
            [("L0", "L1"), ("L1", "L2"), ("L0", "L2")], name="SL3")
    else:
        raise KeyError(f"unknown catalog id {cid!r}")
    _CACHE[cid] = d
    return d
