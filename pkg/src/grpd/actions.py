"""Finite group actions, translation groupoids and equivariant maps.

A ``GSet`` is a finite left action; its translation groupoid has the points as
objects and pairs (g, x): x -> g.x as arrows.  An equivariant map is *strong*
when every stabilizer acts transitively on its fiber; strongness is what makes
a map of quotients injective and is the finite-model residue of the immersion
conditions that this library drops.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groupoid import FiniteGroupoid
from .groups import FiniteGroup, coset_rep, generated_subgroup, left_cosets, subgroup
from .morphism import GroupoidMorphism
from .util import (
    MismatchError,
    ReportBuilder,
    UnknownIdentifier,
    ValidationReport,
    ident_str,
    sort_key,
)


@dataclass(frozen=True)
class GSet:
    group: FiniteGroup
    points: frozenset
    act: dict

    def apply(self, g, p):
        try:
            return self.act[(g, p)]
        except KeyError:
            raise UnknownIdentifier(f"action undefined on ({ident_str(g)}, {ident_str(p)})")


@dataclass(frozen=True)
class EquivariantMap:
    source: GSet
    target: GSet
    mapping: dict

    def __post_init__(self):
        if self.source.group != self.target.group:
            raise MismatchError("equivariant map needs a common group")

    def apply(self, p):
        try:
            return self.mapping[p]
        except KeyError:
            raise UnknownIdentifier(f"map undefined on {ident_str(p)}")


def validate_gset(a: GSet) -> ValidationReport:
    rb = ReportBuilder()
    g = a.group
    for key in a.act:
        el, p = key
        if el not in g.elements or p not in a.points:
            rb.add("structure", f"action key {ident_str(key)} unknown")
    for el in g.elements:
        for p in a.points:
            q = a.act.get((el, p))
            if q is None:
                rb.add("structure", f"action undefined on ({ident_str(el)}, {ident_str(p)})")
            elif q not in a.points:
                rb.add("structure", f"action value {ident_str(q)} not a point")
    if not rb.report().ok:
        return rb.report()
    for p in a.points:
        if a.act[(g.identity, p)] != p:
            rb.add("identity", f"identity moves {ident_str(p)}")
    for el in g.elements:
        for h in g.elements:
            for p in a.points:
                if a.act[(el, a.act[(h, p)])] != a.act[(g.mul[(el, h)], p)]:
                    rb.add("compatibility",
                           f"g(h.p) != (gh).p at ({ident_str(el)}, {ident_str(h)}, {ident_str(p)})")
    return rb.report()


def validate_equivariant(f: EquivariantMap) -> ValidationReport:
    rb = ReportBuilder()
    for p in f.source.points:
        if p not in f.mapping:
            rb.add("structure", f"map undefined on {ident_str(p)}")
        elif f.mapping[p] not in f.target.points:
            rb.add("structure", f"image {ident_str(f.mapping[p])} not a target point")
    if not rb.report().ok:
        return rb.report()
    for g in f.source.group.elements:
        for p in f.source.points:
            if f.mapping[f.source.act[(g, p)]] != f.target.act[(g, f.mapping[p])]:
                rb.add("equivariance", f"fails at ({ident_str(g)}, {ident_str(p)})")
    return rb.report()


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def trivial_gset(group: FiniteGroup, points) -> GSet:
    pts = frozenset(points)
    return GSet(group, pts, {(g, p): p for g in group.elements for p in pts})


def gset_from_generator_maps(group: FiniteGroup, points, gen_maps: dict) -> GSet:
    """Action defined by where a set of generators sends each point."""
    pts = frozenset(points)
    span = generated_subgroup(group, gen_maps.keys())
    if span.order != group.order:
        raise MismatchError("maps given for a non-generating set")
    act = {(group.identity, p): p for p in pts}
    # close under left multiplication by the generators
    frontier = [group.identity]
    known = {group.identity}
    while frontier:
        h = frontier.pop()
        for g, perm in gen_maps.items():
            gh = group.mul[(g, h)]
            if gh in known:
                continue
            for p in pts:
                act[(gh, p)] = perm[act[(h, p)]]
            known.add(gh)
            frontier.append(gh)
    return GSet(group, pts, act)


def coset_gset(group: FiniteGroup, sub: FiniteGroup) -> GSet:
    """Left translation on G/H; points are canonical coset representatives."""
    cosets = left_cosets(group, sub)
    rep_of = {}
    for c in cosets:
        r = coset_rep(group, c)
        for a in c:
            rep_of[a] = r
    pts = frozenset(rep_of[a] for a in group.elements)
    act = {(g, p): rep_of[group.mul[(g, p)]] for g in group.elements for p in pts}
    return GSet(group, pts, act)


def sub_gset(a: GSet, points) -> GSet:
    pts = frozenset(points)
    if not pts <= a.points:
        raise UnknownIdentifier("subset contains unknown points")
    for g in a.group.elements:
        for p in pts:
            if a.act[(g, p)] not in pts:
                raise MismatchError(f"subset not invariant: {ident_str(g)} leaves it at {ident_str(p)}")
    return GSet(a.group, pts, {(g, p): a.act[(g, p)] for g in a.group.elements for p in pts})


def union_gset(a: GSet, b: GSet) -> GSet:
    """Disjoint union of two actions of the same group, points tagged 0/1."""
    if a.group != b.group:
        raise MismatchError("disjoint union needs a common group")
    pts = {(0, p) for p in a.points} | {(1, p) for p in b.points}
    act = {}
    for g in a.group.elements:
        for p in a.points:
            act[(g, (0, p))] = (0, a.act[(g, p)])
        for p in b.points:
            act[(g, (1, p))] = (1, b.act[(g, p)])
    return GSet(a.group, frozenset(pts), act)


def product_gset(a: GSet, b: GSet) -> GSet:
    """The (G x H)-action on points(a) x points(b)."""
    from .groups import direct_product

    grp = direct_product(a.group, b.group)
    pts = frozenset((p, q) for p in a.points for q in b.points)
    act = {}
    for g in a.group.elements:
        for h in b.group.elements:
            for p in a.points:
                for q in b.points:
                    act[(((g, h)), (p, q))] = (a.act[(g, p)], b.act[(h, q)])
    return GSet(grp, pts, act)


def rename_points(a: GSet, names: dict) -> GSet:
    new = {p: names.get(p, p) for p in a.points}
    if len(set(new.values())) != len(new):
        raise MismatchError("renaming collapses points")
    pts = frozenset(new.values())
    act = {(g, new[p]): new[a.act[(g, p)]] for g in a.group.elements for p in a.points}
    return GSet(a.group, pts, act)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def translation_groupoid(a: GSet) -> FiniteGroupoid:
    """Objects are the points; (g, x) is the arrow x -> g.x."""
    g = a.group
    objs = a.points
    arrs = frozenset((el, p) for el in g.elements for p in a.points)
    src = {(el, p): p for (el, p) in arrs}
    tgt = {(el, p): a.act[(el, p)] for (el, p) in arrs}
    comp = {}
    for el1 in g.elements:
        for p in a.points:
            q = a.act[(el1, p)]
            for el2 in g.elements:
                comp[((el2, q), (el1, p))] = (g.mul[(el2, el1)], p)
    unit = {p: (g.identity, p) for p in a.points}
    inv = {(el, p): (g.inv[el], a.act[(el, p)]) for (el, p) in arrs}
    return FiniteGroupoid(objs, arrs, src, tgt, comp, unit, inv)


def stabilizer(a: GSet, p) -> FiniteGroup:
    if p not in a.points:
        raise UnknownIdentifier(f"unknown point {ident_str(p)}")
    els = frozenset(g for g in a.group.elements if a.act[(g, p)] == p)
    return subgroup(a.group, els)


def point_orbit(a: GSet, p) -> frozenset:
    if p not in a.points:
        raise UnknownIdentifier(f"unknown point {ident_str(p)}")
    return frozenset(a.act[(g, p)] for g in a.group.elements)


def gset_orbits(a: GSet) -> list:
    seen = set()
    out = []
    for p in sorted(a.points, key=sort_key):
        if p in seen:
            continue
        orb = point_orbit(a, p)
        seen |= orb
        out.append(orb)
    return out


def fixed_points(a: GSet, g) -> frozenset:
    if g not in a.group.elements:
        raise UnknownIdentifier(f"unknown element {ident_str(g)}")
    return frozenset(p for p in a.points if a.act[(g, p)] == p)


def fiber(f: EquivariantMap, p) -> frozenset:
    return frozenset(q for q in f.source.points if f.mapping[q] == p)


def strong_failure_witness(f: EquivariantMap):
    """None when strong; else (target point, fiber, unreached fiber point)."""
    for p in sorted(f.target.points, key=sort_key):
        fib = fiber(f, p)
        if not fib:
            continue
        q0 = min(fib, key=sort_key)
        reached = {f.source.act[(g, q0)] for g in stabilizer(f.target, p).elements}
        missed = fib - reached
        if missed:
            return (p, fib, min(missed, key=sort_key))
    return None


def is_strong(f: EquivariantMap) -> bool:
    """Every stabilizer acts transitively on its fiber."""
    return strong_failure_witness(f) is None


def build_sheeted_extension(a: GSet, n) -> tuple:
    """All |G| copies of a subset, with ((g, x) -> (hg, x)) action.

    Returns the extended action and the evaluation map (g, x) -> g.x into
    ``a``.  The subset need not be invariant.
    """
    n = frozenset(n)
    if not n <= a.points:
        raise UnknownIdentifier("subset contains unknown points")
    g = a.group
    pts = frozenset((el, x) for el in g.elements for x in n)
    act = {}
    for h in g.elements:
        for (el, x) in pts:
            act[(h, (el, x))] = (g.mul[(h, el)], x)
    ext = GSet(g, pts, act)
    iota = EquivariantMap(ext, a, {(el, x): a.act[(el, x)] for (el, x) in pts})
    return ext, iota


def check_sheet_criterion(a: GSet, n) -> bool:
    """For every g: n intersect g.n equals the g-fixed part of n.

    Equivalent to strongness of the sheeted extension of ``n``.
    """
    n = frozenset(n)
    if not n <= a.points:
        raise UnknownIdentifier("subset contains unknown points")
    for g in a.group.elements:
        moved = frozenset(a.act[(g, x)] for x in n)
        fixed = frozenset(x for x in n if a.act[(g, x)] == x)
        if n & moved != fixed:
            return False
    return True


def setwise_stabilizer(a: GSet, n) -> FiniteGroup:
    n = frozenset(n)
    els = frozenset(
        g for g in a.group.elements if frozenset(a.act[(g, x)] for x in n) == n
    )
    return subgroup(a.group, els)


def build_coset_extension(a: GSet, n) -> tuple:
    """The minimal-sheet extension: one copy of n per coset of its stabilizer.

    Sheets are labelled by canonical representatives of G/G_n where G_n is the
    setwise stabilizer; the sheet of alpha carries alpha.n and g sends
    (x, alpha) to (g.x, g.alpha).
    """
    n = frozenset(n)
    if not n <= a.points:
        raise UnknownIdentifier("subset contains unknown points")
    g = a.group
    gn = setwise_stabilizer(a, n)
    cosets = left_cosets(g, gn)
    rep_of = {}
    for c in cosets:
        r = coset_rep(g, c)
        for el in c:
            rep_of[el] = r
    pts = set()
    for c in cosets:
        r = coset_rep(g, c)
        for x in n:
            pts.add((a.act[(r, x)], r))
    act = {}
    for h in g.elements:
        for (x, r) in pts:
            act[(h, (x, r))] = (a.act[(h, x)], rep_of[g.mul[(h, r)]])
    ext = GSet(g, frozenset(pts), act)
    iota = EquivariantMap(ext, a, {(x, r): x for (x, r) in pts})
    return ext, iota


def induced_quotient_map(f: EquivariantMap) -> tuple:
    """The map on orbit spaces, plus whether it is injective.

    Orbits are named by their least points.  A strong map always comes out
    injective here.
    """
    src_orbits = gset_orbits(f.source)
    mapping = {}
    for orb in src_orbits:
        r = min(orb, key=sort_key)
        img_orbit = point_orbit(f.target, f.mapping[r])
        mapping[r] = min(img_orbit, key=sort_key)
    injective = len(set(mapping.values())) == len(mapping)
    return mapping, injective


def diagonal_embedding(a: GSet) -> tuple:
    """The diagonal of a squared action, as a morphism of translation groupoids.

    Points of the diagonal are triples (x, g, g.x); (h, k) sends (x, g, g.x)
    to (h.x, k g h^-1, (k g).x).  The morphism lands in the translation
    groupoid of the product action on pairs and forgets the middle label.
    """
    g = a.group
    square = product_gset(a, a)
    pts = frozenset((x, el, a.act[(el, x)]) for x in a.points for el in g.elements)
    act = {}
    for h in g.elements:
        for k in g.elements:
            for (x, el, y) in pts:
                el2 = g.mul[(k, g.mul[(el, g.inv[h])])]
                act[(((h, k)), (x, el, y))] = (a.act[(h, x)], el2, a.act[(g.mul[(k, el)], x)])
    diag = GSet(square.group, pts, act)
    dom = translation_groupoid(diag)
    cod = translation_groupoid(square)
    phi0 = {(x, el, y): (x, y) for (x, el, y) in pts}
    phi1 = {(pair, p): (pair, phi0[p]) for (pair, p) in dom.arrows}
    return dom, GroupoidMorphism(dom, cod, phi0, phi1)


def equivariant_bijection(a: GSet, b: GSet):
    """A point bijection commuting with the actions, or None (brute force).

    Works orbit by orbit: choosing the image of an orbit representative forces
    the rest of its orbit, so the search branches only over representatives.
    """
    if a.group != b.group or len(a.points) != len(b.points):
        return None
    gens = sorted(a.group.elements, key=sort_key)
    orbits_a = gset_orbits(a)

    def forced_by(rep, q):
        forced = {rep: q}
        frontier = [rep]
        while frontier:
            x = frontier.pop()
            for g in gens:
                gx = a.act[(g, x)]
                gy = b.act[(g, forced[x])]
                if gx in forced:
                    if forced[gx] != gy:
                        return None
                else:
                    forced[gx] = gy
                    frontier.append(gx)
        if len(set(forced.values())) != len(forced):
            return None
        return forced

    def rec(i, mapping, used):
        if i == len(orbits_a):
            return dict(mapping)
        rep = min(orbits_a[i], key=sort_key)
        for q in sorted(b.points - used, key=sort_key):
            forced = forced_by(rep, q)
            if forced is None or (set(forced.values()) & used):
                continue
            mapping.update(forced)
            got = rec(i + 1, mapping, used | set(forced.values()))
            if got is not None:
                return got
            for k in forced:
                del mapping[k]
        return None

    return rec(0, {}, set())
