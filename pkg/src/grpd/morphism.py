"""Functors between finite groupoids and the Morita-equivalence decision.

Morita equivalence of finite groupoids is decided by matching skeletons
(orbits tagged with isotropy groups up to isomorphism); a positive answer is
certified by an explicit zigzag of equivalences through the skeleton
subgroupoid, a negative one by the skeleton mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groupoid import (
    FiniteGroupoid,
    full_subgroupoid,
    hom_index,
    isotropy,
    orbit_partition,
)
from .groups import FiniteGroup, find_group_isomorphism, group_signature
from .util import (
    MismatchError,
    PreconditionError,
    ReportBuilder,
    ValidationReport,
    ident_str,
    sort_key,
)


@dataclass(frozen=True)
class GroupoidMorphism:
    domain: FiniteGroupoid
    codomain: FiniteGroupoid
    phi0: dict
    phi1: dict

    def obj(self, x):
        return self.phi0[x]

    def arr(self, a):
        return self.phi1[a]


def validate_functor(f: GroupoidMorphism) -> ValidationReport:
    rb = ReportBuilder()
    dom, cod = f.domain, f.codomain
    for x in dom.objects:
        y = f.phi0.get(x)
        if y is None:
            rb.add("structure", f"object map undefined on {ident_str(x)}")
        elif y not in cod.objects:
            rb.add("structure", f"object image {ident_str(y)} not in codomain")
    for a in dom.arrows:
        b = f.phi1.get(a)
        if b is None:
            rb.add("structure", f"arrow map undefined on {ident_str(a)}")
        elif b not in cod.arrows:
            rb.add("structure", f"arrow image {ident_str(b)} not in codomain")
    if not rb.report().ok:
        return rb.report()
    for a in dom.arrows:
        b = f.phi1[a]
        if cod.src[b] != f.phi0[dom.src[a]]:
            rb.add("source", f"source not preserved at {ident_str(a)}")
        if cod.tgt[b] != f.phi0[dom.tgt[a]]:
            rb.add("target", f"target not preserved at {ident_str(a)}")
    for x in dom.objects:
        if f.phi1[dom.unit[x]] != cod.unit[f.phi0[x]]:
            rb.add("unit", f"unit not preserved at {ident_str(x)}")
    for (g2, g1), v in dom.comp.items():
        img = cod.comp.get((f.phi1[g2], f.phi1[g1]))
        if img != f.phi1[v]:
            rb.add("composition",
                   f"composition not preserved on ({ident_str(g2)}, {ident_str(g1)})")
    return rb.report()


def identity_functor(g: FiniteGroupoid) -> GroupoidMorphism:
    return GroupoidMorphism(g, g, {x: x for x in g.objects}, {a: a for a in g.arrows})


def compose_functors(outer: GroupoidMorphism, inner: GroupoidMorphism) -> GroupoidMorphism:
    if inner.codomain != outer.domain:
        raise MismatchError("functors not composable")
    return GroupoidMorphism(
        inner.domain,
        outer.codomain,
        {x: outer.phi0[inner.phi0[x]] for x in inner.domain.objects},
        {a: outer.phi1[inner.phi1[a]] for a in inner.domain.arrows},
    )


def is_essentially_surjective(f: GroupoidMorphism) -> bool:
    cod = f.codomain
    rep = orbit_partition(cod)
    hit = {rep[f.phi0[y]] for y in f.domain.objects}
    return hit == set(rep.values())


def is_fully_faithful(f: GroupoidMorphism) -> bool:
    dom, cod = f.domain, f.codomain
    dom_idx = hom_index(dom)
    cod_idx = hom_index(cod)
    for y in dom.objects:
        for y2 in dom.objects:
            hom = dom_idx.get((y, y2), [])
            target = cod_idx.get((f.phi0[y], f.phi0[y2]), [])
            images = {f.phi1[a] for a in hom}
            if len(images) != len(hom) or images != set(target):
                return False
    return True


def is_equivalence(f: GroupoidMorphism) -> bool:
    return is_essentially_surjective(f) and is_fully_faithful(f)


def orbit_map(f: GroupoidMorphism) -> dict:
    """Induced map on orbit representatives (domain rep -> codomain rep)."""
    dom_rep = orbit_partition(f.domain)
    cod_rep = orbit_partition(f.codomain)
    return {r: cod_rep[f.phi0[r]] for r in set(dom_rep.values())}


def essential_injectivity_witness(f: GroupoidMorphism):
    """None if the orbit-space map is injective, else a colliding orbit pair."""
    omap = orbit_map(f)
    seen = {}
    for r in sorted(omap, key=sort_key):
        t = omap[r]
        if t in seen:
            return (seen[t], r, t)
        seen[t] = r
    return None


def is_essentially_injective(f: GroupoidMorphism) -> bool:
    return essential_injectivity_witness(f) is None


# ---------------------------------------------------------------------------
# fibered products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberedProduct:
    groupoid: FiniteGroupoid
    pr1: GroupoidMorphism
    pr2: GroupoidMorphism


def fibered_product(f: GroupoidMorphism, g: GroupoidMorphism) -> FiberedProduct:
    """The weak pullback of ``f`` and ``g`` along their common codomain.

    Objects are triples (y, a, z) with a: f0(y) -> g0(z); an arrow
    (h, a, k): (y, a, z) -> (y', a', z') exists for every h: y -> y' and
    k: z -> z' with a' = g1(k) a f1(h)^-1.
    """
    if f.codomain != g.codomain:
        raise MismatchError("fibered product needs a common codomain")
    base = f.codomain
    idx = hom_index(base)

    objs = set()
    for y in f.domain.objects:
        for z in g.domain.objects:
            for a in idx.get((f.phi0[y], g.phi0[z]), []):
                objs.add((y, a, z))

    arrs = set()
    src, tgt = {}, {}
    for h in f.domain.arrows:
        for k in g.domain.arrows:
            for a in idx.get((f.phi0[f.domain.src[h]], g.phi0[g.domain.src[k]]), []):
                arr = (h, a, k)
                arrs.add(arr)
                src[arr] = (f.domain.src[h], a, g.domain.src[k])
                a2 = base.comp[(base.comp[(g.phi1[k], a)], base.inv[f.phi1[h]])]
                tgt[arr] = (f.domain.tgt[h], a2, g.domain.tgt[k])

    unit = {}
    for (y, a, z) in objs:
        unit[(y, a, z)] = (f.domain.unit[y], a, g.domain.unit[z])
    inv = {}
    comp = {}
    for arr in arrs:
        h, a, k = arr
        a2 = tgt[arr][1]
        inv[arr] = (f.domain.inv[h], a2, g.domain.inv[k])
    for arr1 in arrs:
        for arr2 in arrs:
            if tgt[arr1] != src[arr2]:
                continue
            h2, _, k2 = arr2
            h1, a1, k1 = arr1
            comp[(arr2, arr1)] = (f.domain.comp[(h2, h1)], a1, g.domain.comp[(k2, k1)])

    prod = FiniteGroupoid(frozenset(objs), frozenset(arrs), src, tgt, comp, unit, inv)
    pr1 = GroupoidMorphism(
        prod, f.domain,
        {o: o[0] for o in objs}, {a: a[0] for a in arrs})
    pr2 = GroupoidMorphism(
        prod, g.domain,
        {o: o[2] for o in objs}, {a: a[2] for a in arrs})
    return FiberedProduct(prod, pr1, pr2)


def verify_pullback_equivalence(f: GroupoidMorphism, g: GroupoidMorphism) -> bool:
    """Pulling an equivalence back along any functor yields an equivalence."""
    if not is_equivalence(g):
        raise PreconditionError("second leg must be an equivalence")
    return is_equivalence(fibered_product(f, g).pr1)


# ---------------------------------------------------------------------------
# skeletons and Morita equivalence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkeletonEntry:
    orbit_size: int
    isotropy: FiniteGroup
    representative: object


@dataclass(frozen=True)
class Skeleton:
    entries: tuple

    def summary(self) -> list:
        return sorted((e.orbit_size, e.isotropy.order) for e in self.entries)


def skeleton(g: FiniteGroupoid) -> Skeleton:
    rep = orbit_partition(g)
    classes = {}
    for y, r in rep.items():
        classes.setdefault(r, set()).add(y)
    entries = []
    for r in sorted(classes, key=sort_key):
        entries.append(SkeletonEntry(len(classes[r]), isotropy(g, r).to_group(), r))
    return Skeleton(tuple(entries))


def skeletons_match(s1: Skeleton, s2: Skeleton):
    """Pair the entries up to isotropy-group isomorphism; None when impossible.

    Returns a list of (entry1, entry2, isomorphism dict).  Orbit sizes are a
    presentation artifact and are deliberately not part of the matching key;
    only the multiset of isotropy isomorphism classes matters.
    """
    if len(s1.entries) != len(s2.entries):
        return None
    remaining = list(s2.entries)
    pairing = []
    for e1 in s1.entries:
        found = None
        for e2 in remaining:
            if group_signature(e1.isotropy) != group_signature(e2.isotropy):
                continue
            iso = find_group_isomorphism(e1.isotropy, e2.isotropy)
            if iso is not None:
                found = (e2, iso)
                break
        if found is None:
            return None
        pairing.append((e1, found[0], found[1]))
        remaining.remove(found[0])
    return pairing


@dataclass(frozen=True)
class MoritaWitness:
    middle: FiniteGroupoid
    to_first: GroupoidMorphism
    to_second: GroupoidMorphism


def skeleton_subgroupoid(g: FiniteGroupoid) -> FiniteGroupoid:
    reps = {e.representative for e in skeleton(g).entries}
    return full_subgroupoid(g, reps)


def are_morita_equivalent(g1: FiniteGroupoid, g2: FiniteGroupoid):
    """Decide Morita equivalence; on success also return a zigzag witness.

    The witness is (middle, leg1, leg2) with both legs equivalences, where the
    middle is the skeleton subgroupoid of ``g1``.
    """
    pairing = skeletons_match(skeleton(g1), skeleton(g2))
    if pairing is None:
        return False, None
    middle = skeleton_subgroupoid(g1)
    leg1 = GroupoidMorphism(
        middle, g1,
        {x: x for x in middle.objects}, {a: a for a in middle.arrows})
    phi0, phi1 = {}, {}
    for e1, e2, iso in pairing:
        phi0[e1.representative] = e2.representative
        for a in e1.isotropy.elements:
            phi1[a] = iso[a]
    leg2 = GroupoidMorphism(middle, g2, phi0, phi1)
    if not (is_equivalence(leg1) and is_equivalence(leg2)):
        raise AssertionError("skeleton zigzag legs must be equivalences")
    return True, MoritaWitness(middle, leg1, leg2)


# ---------------------------------------------------------------------------
# brute-force functor and isomorphism search (small instances only)
# ---------------------------------------------------------------------------


def all_functors(dom: FiniteGroupoid, cod: FiniteGroupoid):
    """Yield every functor dom -> cod.  Exponential; keep inputs tiny."""
    objs = sorted(dom.objects, key=sort_key)
    arrs = sorted(dom.arrows, key=sort_key)
    cod_idx = hom_index(cod)

    def arrow_candidates(a, phi0):
        return cod_idx.get((phi0[dom.src[a]], phi0[dom.tgt[a]]), [])

    def assign_arrows(i, phi0, phi1):
        if i == len(arrs):
            f = GroupoidMorphism(dom, cod, dict(phi0), dict(phi1))
            if validate_functor(f).ok:
                yield f
            return
        a = arrs[i]
        if a in phi1:
            yield from assign_arrows(i + 1, phi0, phi1)
            return
        for b in arrow_candidates(a, phi0):
            phi1[a] = b
            ok = True
            # incremental composition check against already-assigned arrows
            for c in list(phi1):
                for lhs, rhs in ((a, c), (c, a)):
                    if dom.tgt[rhs] != dom.src[lhs]:
                        continue
                    v = dom.comp[(lhs, rhs)]
                    if v in phi1 and cod.comp.get((phi1[lhs], phi1[rhs])) != phi1[v]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                yield from assign_arrows(i + 1, phi0, phi1)
            del phi1[a]

    def assign_objects(i, phi0):
        if i == len(objs):
            phi1 = {dom.unit[x]: cod.unit[phi0[x]] for x in objs}
            yield from assign_arrows(0, phi0, phi1)
            return
        x = objs[i]
        for y in sorted(cod.objects, key=sort_key):
            phi0[x] = y
            yield from assign_objects(i + 1, phi0)
            del phi0[x]

    if not dom.objects:
        yield GroupoidMorphism(dom, cod, {}, {})
        return
    yield from assign_objects(0, {})


def find_groupoid_isomorphism(g1: FiniteGroupoid, g2: FiniteGroupoid, arrow_compat=None):
    """An invertible functor g1 -> g2, or None.

    ``arrow_compat(a1, a2)`` optionally restricts which arrow images are
    admissible, which is how callers express "commutes with the maps to a
    common codomain".
    """
    if len(g1.objects) != len(g2.objects) or len(g1.arrows) != len(g2.arrows):
        return None
    iso_sizes_1 = sorted(len(isotropy(g1, x).elements) for x in g1.objects)
    iso_sizes_2 = sorted(len(isotropy(g2, x).elements) for x in g2.objects)
    if iso_sizes_1 != iso_sizes_2:
        return None

    objs = sorted(g1.objects, key=sort_key)
    arrs = sorted(g1.arrows, key=sort_key)
    idx2 = hom_index(g2)

    def assign_arrows(i, phi0, phi1, used):
        if i == len(arrs):
            f = GroupoidMorphism(g1, g2, dict(phi0), dict(phi1))
            if validate_functor(f).ok:
                return f
            return None
        a = arrs[i]
        if a in phi1:
            return assign_arrows(i + 1, phi0, phi1, used)
        for b in idx2.get((phi0[g1.src[a]], phi0[g1.tgt[a]]), []):
            if b in used:
                continue
            if arrow_compat is not None and not arrow_compat(a, b):
                continue
            phi1[a] = b
            used.add(b)
            ok = True
            for c in list(phi1):
                for (lhs, rhs) in ((a, c), (c, a)):
                    if g1.tgt[rhs] != g1.src[lhs]:
                        continue
                    v = g1.comp[(lhs, rhs)]
                    if v in phi1 and g2.comp.get((phi1[lhs], phi1[rhs])) != phi1[v]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                got = assign_arrows(i + 1, phi0, phi1, used)
                if got is not None:
                    return got
            used.discard(b)
            del phi1[a]
        return None

    def assign_objects(i, phi0, used):
        if i == len(objs):
            phi1 = {g1.unit[x]: g2.unit[phi0[x]] for x in objs}
            if arrow_compat is not None:
                for x in objs:
                    if not arrow_compat(g1.unit[x], phi1[g1.unit[x]]):
                        return None
            if len(set(phi1.values())) != len(phi1):
                return None
            return assign_arrows(0, phi0, phi1, set(phi1.values()))
        x = objs[i]
        k1 = len(isotropy(g1, x).elements)
        for y in sorted(g2.objects, key=sort_key):
            if y in used:
                continue
            if len(isotropy(g2, y).elements) != k1:
                continue
            phi0[x] = y
            used.add(y)
            got = assign_objects(i + 1, phi0, used)
            if got is not None:
                return got
            used.discard(y)
            del phi0[x]
        return None

    if not objs:
        return GroupoidMorphism(g1, g2, {}, {})
    return assign_objects(0, {}, set())


def exhaustive_zigzag_morita(g1: FiniteGroupoid, g2: FiniteGroupoid) -> bool:
    """Oracle: search for a zigzag of equivalences through a bounded middle.

    The middle candidates are the skeleton subgroupoids of either side; all
    functors out of them are enumerated and tested for being equivalences.
    """
    for middle in (skeleton_subgroupoid(g1), skeleton_subgroupoid(g2)):
        to1 = any(is_equivalence(f) for f in all_functors(middle, g1))
        if not to1:
            continue
        to2 = any(is_equivalence(f) for f in all_functors(middle, g2))
        if to2:
            return True
    return False
