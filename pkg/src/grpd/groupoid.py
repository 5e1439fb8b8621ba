"""Finite groupoids: explicit object/arrow sets with structure-map tables.

Composition convention: ``comp[(g2, g1)]`` is "g1 then g2", defined exactly
when ``tgt[g1] == src[g2]``.  All values are immutable after construction and
every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import FiniteGroup
from .util import ReportBuilder, UnknownIdentifier, ValidationReport, ident_str, sort_key


@dataclass(frozen=True)
class FiniteGroupoid:
    objects: frozenset
    arrows: frozenset
    src: dict
    tgt: dict
    comp: dict
    unit: dict
    inv: dict

    def compose(self, g2, g1):
        try:
            return self.comp[(g2, g1)]
        except KeyError:
            raise UnknownIdentifier(
                f"arrows not composable: {ident_str(g2)} after {ident_str(g1)}"
            )

    def is_loop(self, a) -> bool:
        return self.src[a] == self.tgt[a]

    def n_objects(self) -> int:
        return len(self.objects)

    def n_arrows(self) -> int:
        return len(self.arrows)


@dataclass(frozen=True)
class IsotropyGroup:
    base: object
    elements: frozenset
    table: dict

    def to_group(self) -> FiniteGroup:
        identity = next(iter({a for a in self.elements if all(
            self.table.get((a, b)) == b and self.table.get((b, a)) == b
            for b in self.elements)}))
        inv = {}
        for a in self.elements:
            for b in self.elements:
                if self.table.get((a, b)) == identity and self.table.get((b, a)) == identity:
                    inv[a] = b
                    break
        return FiniteGroup(self.elements, dict(self.table), identity, inv)

    @property
    def order(self) -> int:
        return len(self.elements)


def validate(g: FiniteGroupoid) -> ValidationReport:
    """Check structural well-formedness and the groupoid axioms.

    Violations are report entries, never exceptions, so a broken table can be
    diagnosed in full.
    """
    rb = ReportBuilder()
    objs, arrs = g.objects, g.arrows

    for name, table, keys in (("src", g.src, arrs), ("tgt", g.tgt, arrs), ("unit", g.unit, objs), ("inv", g.inv, arrs)):
        for k in keys:
            if k not in table:
                rb.add("structure", f"{name} undefined on {ident_str(k)}")
        for k, v in table.items():
            if k not in keys:
                rb.add("structure", f"{name} defined on unknown {ident_str(k)}")
    for a, v in g.src.items():
        if v not in objs:
            rb.add("structure", f"src({ident_str(a)}) = {ident_str(v)} is not an object")
    for a, v in g.tgt.items():
        if v not in objs:
            rb.add("structure", f"tgt({ident_str(a)}) = {ident_str(v)} is not an object")
    for x, v in g.unit.items():
        if v not in arrs:
            rb.add("structure", f"unit({ident_str(x)}) = {ident_str(v)} is not an arrow")
    for a, v in g.inv.items():
        if v not in arrs:
            rb.add("structure", f"inv({ident_str(a)}) = {ident_str(v)} is not an arrow")
    for (g2, g1), v in g.comp.items():
        if g1 not in arrs or g2 not in arrs or v not in arrs:
            rb.add("structure", f"comp entry ({ident_str(g2)}, {ident_str(g1)}) uses unknown arrows")
    if not rb.report().ok:
        return rb.report()

    # comp defined exactly on composable pairs
    for g1 in arrs:
        for g2 in arrs:
            defined = (g2, g1) in g.comp
            composable = g.tgt[g1] == g.src[g2]
            if defined and not composable:
                rb.add("composition-domain",
                       f"comp({ident_str(g2)}, {ident_str(g1)}) defined but arrows do not chain")
            if composable and not defined:
                rb.add("composition-domain",
                       f"comp({ident_str(g2)}, {ident_str(g1)}) missing for chained arrows")
    if not rb.report().ok:
        return rb.report()

    for x in objs:
        u = g.unit[x]
        if g.src[u] != x or g.tgt[u] != x:
            rb.add("unit-endpoints", f"unit({ident_str(x)}) is not a loop at it")
    for (g2, g1), v in g.comp.items():
        if g.src[v] != g.src[g1] or g.tgt[v] != g.tgt[g2]:
            rb.add("composition-endpoints",
                   f"comp({ident_str(g2)}, {ident_str(g1)}) has wrong endpoints")
    for a in arrs:
        if g.comp.get((a, g.unit[g.src[a]])) != a or g.comp.get((g.unit[g.tgt[a]], a)) != a:
            rb.add("unit-law", f"unit laws fail at {ident_str(a)}")
    for a in arrs:
        ia = g.inv[a]
        if g.src[ia] != g.tgt[a] or g.tgt[ia] != g.src[a]:
            rb.add("inverse", f"inv({ident_str(a)}) has wrong endpoints")
            continue
        if g.comp.get((ia, a)) != g.unit[g.src[a]] or g.comp.get((a, ia)) != g.unit[g.tgt[a]]:
            rb.add("inverse", f"inverse laws fail at {ident_str(a)}")
    for g1 in arrs:
        for g2 in arrs:
            if g.tgt[g1] != g.src[g2]:
                continue
            for g3 in arrs:
                if g.tgt[g2] != g.src[g3]:
                    continue
                if g.comp[(g3, g.comp[(g2, g1)])] != g.comp[(g.comp[(g3, g2)], g1)]:
                    rb.add("associativity",
                           f"associativity fails on {ident_str((g3, g2, g1))}")
    return rb.report()


def _check_object(g: FiniteGroupoid, x):
    if x not in g.objects:
        raise UnknownIdentifier(f"unknown object {ident_str(x)}")


def hom_set(g: FiniteGroupoid, x, y) -> frozenset:
    _check_object(g, x)
    _check_object(g, y)
    return frozenset(a for a in g.arrows if g.src[a] == x and g.tgt[a] == y)


def hom_index(g: FiniteGroupoid) -> dict:
    """(src, tgt) -> list of arrows, for enumeration-heavy callers."""
    idx = {}
    for a in g.arrows:
        idx.setdefault((g.src[a], g.tgt[a]), []).append(a)
    return idx


def isotropy(g: FiniteGroupoid, x) -> IsotropyGroup:
    _check_object(g, x)
    els = hom_set(g, x, x)
    table = {(a, b): g.comp[(a, b)] for a in els for b in els}
    return IsotropyGroup(x, els, table)


def orbit(g: FiniteGroupoid, x) -> frozenset:
    _check_object(g, x)
    seen = {x}
    frontier = [x]
    nbrs = {}
    for a in g.arrows:
        nbrs.setdefault(g.src[a], set()).add(g.tgt[a])
        nbrs.setdefault(g.tgt[a], set()).add(g.src[a])
    while frontier:
        y = frontier.pop()
        for z in nbrs.get(y, ()):
            if z not in seen:
                seen.add(z)
                frontier.append(z)
    return frozenset(seen)


@dataclass(frozen=True)
class OrbitClass:
    objects: frozenset
    representative: object
    isotropy: FiniteGroup

    @property
    def size(self) -> int:
        return len(self.objects)


def orbit_partition(g: FiniteGroupoid) -> dict:
    """object -> canonical orbit representative (least by rendered identifier)."""
    rep = {}
    for x in sorted(g.objects, key=sort_key):
        if x in rep:
            continue
        orb = orbit(g, x)
        r = min(orb, key=sort_key)
        for y in orb:
            rep[y] = r
    return rep


def orbit_space(g: FiniteGroupoid) -> tuple:
    """Orbit classes, each tagged with a representative's isotropy group."""
    rep = orbit_partition(g)
    classes = {}
    for y, r in rep.items():
        classes.setdefault(r, set()).add(y)
    out = []
    for r in sorted(classes, key=sort_key):
        out.append(OrbitClass(frozenset(classes[r]), r, isotropy(g, r).to_group()))
    return tuple(out)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def discrete_groupoid(objects) -> FiniteGroupoid:
    objs = frozenset(objects)
    arrs = frozenset(("id", x) for x in objs)
    src = {("id", x): x for x in objs}
    comp = {((("id", x)), ("id", x)): ("id", x) for x in objs}
    return FiniteGroupoid(
        objects=objs,
        arrows=arrs,
        src=src,
        tgt=dict(src),
        comp=comp,
        unit={x: ("id", x) for x in objs},
        inv={a: a for a in arrs},
    )


def terminal_groupoid() -> FiniteGroupoid:
    return discrete_groupoid({"*"})


def pair_groupoid(objects) -> FiniteGroupoid:
    objs = frozenset(objects)
    arrs = frozenset((x, y) for x in objs for y in objs)
    comp = {}
    for x in objs:
        for y in objs:
            for z in objs:
                comp[((y, z), (x, y))] = (x, z)
    return FiniteGroupoid(
        objects=objs,
        arrows=arrs,
        src={(x, y): x for (x, y) in arrs},
        tgt={(x, y): y for (x, y) in arrs},
        comp=comp,
        unit={x: (x, x) for x in objs},
        inv={(x, y): (y, x) for (x, y) in arrs},
    )


def delooping(g: FiniteGroup, basepoint="*") -> FiniteGroupoid:
    """The one-object groupoid whose arrows are the elements of ``g``."""
    objs = frozenset({basepoint})
    arrs = frozenset(g.elements)
    return FiniteGroupoid(
        objects=objs,
        arrows=arrs,
        src={a: basepoint for a in arrs},
        tgt={a: basepoint for a in arrs},
        comp={(a, b): g.mul[(a, b)] for a in arrs for b in arrs},
        unit={basepoint: g.identity},
        inv=dict(g.inv),
    )


def disjoint_union(*gs: FiniteGroupoid) -> FiniteGroupoid:
    """Tag each summand's identifiers with its index."""
    objs, arrs = set(), set()
    src, tgt, comp, unit, inv = {}, {}, {}, {}, {}
    for i, g in enumerate(gs):
        t = lambda x, i=i: (i, x)
        objs |= {t(x) for x in g.objects}
        arrs |= {t(a) for a in g.arrows}
        src.update({t(a): t(g.src[a]) for a in g.arrows})
        tgt.update({t(a): t(g.tgt[a]) for a in g.arrows})
        unit.update({t(x): t(g.unit[x]) for x in g.objects})
        inv.update({t(a): t(g.inv[a]) for a in g.arrows})
        comp.update({(t(a), t(b)): t(v) for (a, b), v in g.comp.items()})
    return FiniteGroupoid(frozenset(objs), frozenset(arrs), src, tgt, comp, unit, inv)


def full_subgroupoid(g: FiniteGroupoid, objects) -> FiniteGroupoid:
    objs = frozenset(objects)
    unknown = objs - g.objects
    if unknown:
        raise UnknownIdentifier(f"unknown objects {sorted(map(ident_str, unknown))}")
    arrs = frozenset(a for a in g.arrows if g.src[a] in objs and g.tgt[a] in objs)
    return FiniteGroupoid(
        objects=objs,
        arrows=arrs,
        src={a: g.src[a] for a in arrs},
        tgt={a: g.tgt[a] for a in arrs},
        comp={k: v for k, v in g.comp.items() if k[0] in arrs and k[1] in arrs},
        unit={x: g.unit[x] for x in objs},
        inv={a: g.inv[a] for a in arrs},
    )


def loops(g: FiniteGroupoid) -> frozenset:
    return frozenset(a for a in g.arrows if g.src[a] == g.tgt[a])
