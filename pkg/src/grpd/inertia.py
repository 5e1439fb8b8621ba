"""Inertia groupoids: loops acted on by conjugation.

The loop set of a groupoid consists of its arrows with equal source and
target, anchored at that object.  The inertia groupoid has the loops as
objects; an arrow h with source beta(a) sends the loop a to h a h^-1 based at
the target of h.  Orbits of the inertia groupoid are the twisted sectors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groupoid import FiniteGroupoid, isotropy, loops, validate
from .morphism import GroupoidMorphism, validate_functor
from .util import InternalCheckError, PreconditionError, ident_str


@dataclass(frozen=True)
class InertiaGroupoid:
    base: FiniteGroupoid
    loops: frozenset
    groupoid: FiniteGroupoid

    def anchor(self, a):
        return self.base.src[a]


def loop_space(g: FiniteGroupoid) -> tuple:
    """The loops of ``g`` with their anchor map (loop -> base object)."""
    ls = loops(g)
    return ls, {a: g.src[a] for a in ls}


def _conjugate(g: FiniteGroupoid, h, a):
    """h a h^-1, a loop at src(h) transported to a loop at tgt(h)."""
    return g.comp[(h, g.comp[(a, g.inv[h])])]


def inertia(g: FiniteGroupoid) -> InertiaGroupoid:
    ls = loops(g)
    objs = frozenset(ls)
    arrs = frozenset((h, a) for h in g.arrows for a in ls if g.src[h] == g.src[a])
    src = {(h, a): a for (h, a) in arrs}
    tgt = {(h, a): _conjugate(g, h, a) for (h, a) in arrs}
    comp = {}
    for (h1, a1) in arrs:
        t1 = tgt[(h1, a1)]
        for h2 in g.arrows:
            if g.src[h2] != g.tgt[h1]:
                continue
            comp[(((h2, t1)), (h1, a1))] = (g.comp[(h2, h1)], a1)
    unit = {a: (g.unit[g.src[a]], a) for a in objs}
    inv = {(h, a): (g.inv[h], tgt[(h, a)]) for (h, a) in arrs}
    out = FiniteGroupoid(objs, arrs, src, tgt, comp, unit, inv)
    report = validate(out)
    if not report.ok:
        raise InternalCheckError(f"inertia construction broke an axiom: {report.violations[0]}")
    return InertiaGroupoid(g, ls, out)


def induced_inertia_morphism(f: GroupoidMorphism) -> GroupoidMorphism:
    """The functor between inertia groupoids induced by a functor of bases.

    Loops map by the arrow component; an inertia arrow (h, a) maps to
    (phi1(h), phi1(a)).
    """
    if not validate_functor(f).ok:
        raise PreconditionError("induced inertia morphism needs a valid functor")
    dom = inertia(f.domain).groupoid
    cod = inertia(f.codomain).groupoid
    phi0 = {a: f.phi1[a] for a in dom.objects}
    phi1 = {(h, a): (f.phi1[h], f.phi1[a]) for (h, a) in dom.arrows}
    out = GroupoidMorphism(dom, cod, phi0, phi1)
    report = validate_functor(out)
    if not report.ok:
        raise InternalCheckError(f"induced inertia morphism invalid: {report.violations[0]}")
    return out


def is_abelian(g: FiniteGroupoid) -> bool:
    """True when every isotropy group is abelian."""
    for x in g.objects:
        iso = isotropy(g, x)
        for a in iso.elements:
            for b in iso.elements:
                if iso.table[(a, b)] != iso.table[(b, a)]:
                    return False
    return True


@dataclass(frozen=True)
class InertiaEmbeddingReport:
    verdict: bool
    inertia_morphism: GroupoidMorphism
    embedding: object  # EmbeddingVerdict of the inertia morphism
    witness_pair: tuple | None

    def describe(self) -> str:
        if self.verdict:
            return "inertia morphism is an embedding"
        if self.witness_pair is not None:
            a, b = self.witness_pair
            return (
                "inertia morphism is not an embedding; loops "
                f"{ident_str(a)} and {ident_str(b)} share an image but no arrow connects them"
            )
        return "inertia morphism is not an embedding"


def check_inertia_embedding(f: GroupoidMorphism) -> InertiaEmbeddingReport:
    """Check whether the induced map of inertia groupoids is still an embedding.

    Requires ``f`` itself to pass the embedding predicate.  For a base with
    abelian isotropy the answer is always yes; non-abelian isotropy can break
    fiber transitivity upstairs, and the report then carries a witness pair of
    loops with no connecting arrow.
    """
    from .embedding import is_orbifold_embedding

    base = is_orbifold_embedding(f)
    if not base.verdict:
        raise PreconditionError("base morphism is not an embedding")
    lam = induced_inertia_morphism(f)
    verdict = is_orbifold_embedding(lam)
    witness = None
    if not verdict.verdict:
        chk = verdict.check("fiber_transitivity")
        if chk is not None and not chk.passed and chk.witness is not None:
            pair = chk.witness.get("pair")
            if pair is not None:
                witness = pair
    return InertiaEmbeddingReport(verdict.verdict, lam, verdict, witness)
