"""Finite posets, lattice operations, monotone maps, Galois-connection adjoints.

Fibers of a doctrine are instances of :class:`FinPoset`.  The order is held
as per-element bitmasks so that meets, joins and adjoints reduce to integer
arithmetic; an up-closed (down-closed) subset has a least (greatest) element
exactly when its mask coincides with a principal filter (ideal), which is a
single dictionary lookup.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .verdicts import StructureMissing, Verdict

__all__ = [
    "FinPoset",
    "MonotoneMap",
    "LatticeOps",
    "lattice_ops",
    "left_adjoint",
    "right_adjoint",
    "is_msl_hom",
    "is_heyting_hom",
]


class FinPoset:
    """Immutable finite poset over string element ids."""

    __slots__ = ("elements", "index", "uppers", "lowers", "__dict__")

    def __init__(self, elements: Iterable[str], leq: Iterable[tuple[str, str]],
                 validate: bool = True, _masks: tuple[int, ...] | None = None):
        self.elements: tuple[str, ...] = tuple(elements)
        self.index: dict[str, int] = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        if len(self.index) != n:
            raise ValueError("duplicate element ids")
        if _masks is not None:
            uppers = list(_masks)
        else:
            uppers = [1 << i for i in range(n)]
            for a, b in leq:
                ia, ib = self.index[a], self.index[b]
                uppers[ia] |= 1 << ib
        self.uppers: tuple[int, ...] = tuple(uppers)
        lowers = [0] * n
        for i in range(n):
            m = uppers[i]
            while m:
                j = (m & -m).bit_length() - 1
                lowers[j] |= 1 << i
                m &= m - 1
        self.lowers: tuple[int, ...] = tuple(lowers)
        if validate:
            self._validate()

    def _validate(self) -> None:
        n = len(self.elements)
        for i in range(n):
            if not self.uppers[i] >> i & 1:
                raise ValueError(f"order not reflexive at {self.elements[i]}")
            m = self.uppers[i]
            acc = 0
            mm = m
            while mm:
                j = (mm & -mm).bit_length() - 1
                acc |= self.uppers[j]
                mm &= mm - 1
            if acc != m:
                raise ValueError(f"order not transitive at {self.elements[i]}")
            for j in range(n):
                if i != j and (m >> j & 1) and (self.uppers[j] >> i & 1):
                    raise ValueError(
                        f"order not antisymmetric: {self.elements[i]} ~ {self.elements[j]}")

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e: str) -> bool:
        return e in self.index

    def leq(self, a: str, b: str) -> bool:
        return bool(self.uppers[self.index[a]] >> self.index[b] & 1)

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self.uppers[i] >> j & 1)

    @cached_property
    def _principal_filters(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.uppers)}

    @cached_property
    def _principal_ideals(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.lowers)}

    def least_of_upset(self, mask: int) -> int | None:
        """Least element of an up-closed subset given as a bitmask."""
        return self._principal_filters.get(mask)

    def greatest_of_downset(self, mask: int) -> int | None:
        """Greatest element of a down-closed subset given as a bitmask."""
        return self._principal_ideals.get(mask)

    def pairs(self) -> Iterable[tuple[str, str]]:
        for i, a in enumerate(self.elements):
            m = self.uppers[i]
            while m:
                j = (m & -m).bit_length() - 1
                yield a, self.elements[j]
                m &= m - 1

    def reversed(self) -> "FinPoset":
        """The opposite order on the same elements."""
        return FinPoset(self.elements, (), validate=False, _masks=self.lowers)

    @cached_property
    def ops(self) -> "LatticeOps":
        return lattice_ops(self)

    def same_order(self, other: "FinPoset") -> bool:
        return self.elements == other.elements and self.uppers == other.uppers

    def __repr__(self) -> str:
        return f"FinPoset({len(self.elements)} elements)"


@dataclass(frozen=True)
class LatticeOps:
    """Partial lattice structure; each table is present only when the
    defining universal property holds for every required argument."""

    meet: Mapping[tuple[str, str], str] | None
    join: Mapping[tuple[str, str], str] | None
    top: str | None
    bottom: str | None
    heyting_implication: Mapping[tuple[str, str], str] | None

    @property
    def is_meet_semilattice(self) -> bool:
        return self.meet is not None

    @property
    def is_heyting(self) -> bool:
        return (self.meet is not None and self.join is not None
                and self.top is not None and self.bottom is not None
                and self.heyting_implication is not None)


def lattice_ops(p: FinPoset) -> LatticeOps:
    n = len(p.elements)
    full = (1 << n) - 1
    top = p.greatest_of_downset(full) if n else None
    bottom = p.least_of_upset(full) if n else None

    meet: dict[tuple[str, str], str] | None = {}
    meet_idx: list[list[int]] = [[-1] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            g = p.greatest_of_downset(p.lowers[i] & p.lowers[j])
            if g is None:
                meet = None
                break
            meet_idx[i][j] = g
            meet[(p.elements[i], p.elements[j])] = p.elements[g]
        if meet is None:
            break

    join: dict[tuple[str, str], str] | None = {}
    for i in range(n):
        for j in range(n):
            l = p.least_of_upset(p.uppers[i] & p.uppers[j])
            if l is None:
                join = None
                break
            join[(p.elements[i], p.elements[j])] = p.elements[l]
        if join is None:
            break

    impl: dict[tuple[str, str], str] | None
    if meet is None:
        impl = None
    else:
        impl = {}
        for a in range(n):
            for b in range(n):
                mask = 0
                for c in range(n):
                    if p.leq_idx(meet_idx[c][a], b):
                        mask |= 1 << c
                g = p.greatest_of_downset(mask)
                if g is None:
                    impl = None
                    break
                impl[(p.elements[a], p.elements[b])] = p.elements[g]
            if impl is None:
                break

    top_e = p.elements[top] if top is not None else None
    bot_e = p.elements[bottom] if bottom is not None else None
    return LatticeOps(meet, join, top_e, bot_e, impl)


class MonotoneMap:
    """A monotone function between finite posets, tabulated elementwise."""

    __slots__ = ("source", "target", "table", "__dict__")

    def __init__(self, source: FinPoset, target: FinPoset,
                 table: Mapping[str, str], validate: bool = True):
        self.source = source
        self.target = target
        self.table = dict(table)
        if validate:
            missing = [e for e in source.elements if e not in self.table]
            if missing:
                raise ValueError(f"table missing entries for {missing}")
            for e in self.table.values():
                if e not in target.index:
                    raise ValueError(f"table value {e!r} not in target poset")
            it = self.idx_table
            for i in range(len(source.elements)):
                m = source.uppers[i]
                while m:
                    j = (m & -m).bit_length() - 1
                    if not target.leq_idx(it[i], it[j]):
                        raise ValueError(
                            f"not monotone at {source.elements[i]} <= {source.elements[j]}")
                    m &= m - 1

    @cached_property
    def idx_table(self) -> tuple[int, ...]:
        return tuple(self.target.index[self.table[e]] for e in self.source.elements)

    def __call__(self, e: str) -> str:
        return self.table[e]

    def then(self, other: "MonotoneMap") -> "MonotoneMap":
        """Composite other . self (first self, then other)."""
        if other.source is not self.target and other.source.elements != self.target.elements:
            raise ValueError("composition shape mismatch")
        return MonotoneMap(self.source, other.target,
                           {e: other.table[v] for e, v in self.table.items()},
                           validate=False)

    @classmethod
    def identity(cls, p: FinPoset) -> "MonotoneMap":
        return cls(p, p, {e: e for e in p.elements}, validate=False)

    def same_table(self, other: "MonotoneMap") -> bool:
        return self.table == other.table

    def __repr__(self) -> str:
        return f"MonotoneMap({len(self.source)}->{len(self.target)})"


def left_adjoint(u: MonotoneMap) -> MonotoneMap | None:
    """The left adjoint L of ``u: B -> A``, i.e. ``L(a) <= b  iff  a <= u(b)``.

    Computed pointwise as the least element of ``{b : a <= u(b)}``; the set is
    up-closed, so the least element exists iff the set is a principal filter.
    Returns None when some least element is missing.
    """
    A, B = u.target, u.source
    it = u.idx_table
    table: dict[str, str] = {}
    for ia, a in enumerate(A.elements):
        mask = 0
        for ib in range(len(B.elements)):
            if A.leq_idx(ia, it[ib]):
                mask |= 1 << ib
        least = B.least_of_upset(mask)
        if least is None:
            return None
        table[a] = B.elements[least]
    return MonotoneMap(A, B, table, validate=False)


def right_adjoint(u: MonotoneMap) -> MonotoneMap | None:
    """The right adjoint R of ``u: B -> A``: ``b <= R(a)  iff  u(b) <= a``."""
    A, B = u.target, u.source
    it = u.idx_table
    table: dict[str, str] = {}
    for ia, a in enumerate(A.elements):
        mask = 0
        for ib in range(len(B.elements)):
            if A.leq_idx(it[ib], ia):
                mask |= 1 << ib
        greatest = B.greatest_of_downset(mask)
        if greatest is None:
            return None
        table[a] = B.elements[greatest]
    return MonotoneMap(A, B, table, validate=False)


def _window(m: MonotoneMap) -> str:
    return f"poset map {len(m.source)}->{len(m.target)}"


def is_msl_hom(m: MonotoneMap) -> Verdict:
    """Does ``m`` preserve binary meets and the top element?"""
    so, to = m.source.ops, m.target.ops
    if so.meet is None or so.top is None:
        raise StructureMissing("source is not a meet-semilattice with top")
    if to.meet is None or to.top is None:
        raise StructureMissing("target is not a meet-semilattice with top")
    if m.table[so.top] != to.top:
        return Verdict.refuted(kind="hom_top", element=so.top,
                               image=m.table[so.top], expected=to.top)
    for (a, b), ab in so.meet.items():
        if m.table[ab] != to.meet[(m.table[a], m.table[b])]:
            return Verdict.refuted(kind="hom_meet", pair=[a, b],
                                   image_of_meet=m.table[ab],
                                   meet_of_images=to.meet[(m.table[a], m.table[b])])
    return Verdict.holds(_window(m))


def is_heyting_hom(m: MonotoneMap) -> Verdict:
    """Does ``m`` preserve meets, joins, top, bottom and implication?"""
    so, to = m.source.ops, m.target.ops
    if not so.is_heyting:
        raise StructureMissing("source is not a Heyting algebra")
    if not to.is_heyting:
        raise StructureMissing("target is not a Heyting algebra")
    for name, sval, tval in (("top", so.top, to.top), ("bottom", so.bottom, to.bottom)):
        if m.table[sval] != tval:
            return Verdict.refuted(kind=f"hom_{name}", element=sval,
                                   image=m.table[sval], expected=tval)
    for op_name, s_op, t_op in (("meet", so.meet, to.meet),
                                ("join", so.join, to.join),
                                ("implication", so.heyting_implication,
                                 to.heyting_implication)):
        for (a, b), ab in s_op.items():
            if m.table[ab] != t_op[(m.table[a], m.table[b])]:
                return Verdict.refuted(kind=f"hom_{op_name}", pair=[a, b],
                                       image_of_op=m.table[ab],
                                       op_of_images=t_op[(m.table[a], m.table[b])])
    return Verdict.holds(_window(m))
