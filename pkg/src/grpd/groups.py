"""Finite groups as explicit multiplication tables.

Groups here are deliberately small (desk scale, order <= a few dozen); every
operation is a direct table computation.  Larger groups can be produced from a
presentation via coset enumeration, capped by ``max_elements``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations

from .util import (
    GrpdError,
    InputError,
    MismatchError,
    ReportBuilder,
    UnknownIdentifier,
    ValidationReport,
    shortlex_key,
)

# explicit n x n tables get unwieldy; presentations resolving beyond this are
# refused even when the enumeration itself finished
TABLE_CAP = 2048


@dataclass(frozen=True)
class FiniteGroup:
    elements: frozenset
    mul: dict
    identity: object
    inv: dict

    @property
    def order(self) -> int:
        return len(self.elements)

    def times(self, a, b):
        try:
            return self.mul[(a, b)]
        except KeyError:
            raise UnknownIdentifier(f"product {ident(a, b)} not in table")

    def invert(self, a):
        try:
            return self.inv[a]
        except KeyError:
            raise UnknownIdentifier(f"no inverse entry for {a!r}")

    def prod(self, *els):
        acc = self.identity
        for e in els:
            acc = self.times(acc, e)
        return acc

    def conj(self, g, h):
        """g h g^-1."""
        return self.times(self.times(g, h), self.invert(g))


def ident(*xs):
    return ", ".join(repr(x) for x in xs)


def validate_group(g: FiniteGroup) -> ValidationReport:
    rb = ReportBuilder()
    els = g.elements
    if g.identity not in els:
        rb.add("structure", f"identity {g.identity!r} not an element")
    for (a, b), c in g.mul.items():
        if a not in els or b not in els:
            rb.add("structure", f"table key {ident(a, b)} uses unknown element")
        if c not in els:
            rb.add("structure", f"table value {c!r} not an element")
    for a in els:
        for b in els:
            if (a, b) not in g.mul:
                rb.add("structure", f"table missing entry {ident(a, b)}")
    if not rb.report().ok:
        return rb.report()
    for a in els:
        if g.mul[(g.identity, a)] != a or g.mul[(a, g.identity)] != a:
            rb.add("identity", f"{a!r} not fixed by identity")
        b = g.inv.get(a)
        if b is None or b not in els:
            rb.add("structure", f"missing inverse entry for {a!r}")
        elif g.mul[(a, b)] != g.identity or g.mul[(b, a)] != g.identity:
            rb.add("inverse", f"inv({a!r}) = {b!r} fails")
    for a in els:
        for b in els:
            for c in els:
                if g.mul[(g.mul[(a, b)], c)] != g.mul[(a, g.mul[(b, c)])]:
                    rb.add("associativity", f"({a!r}*{b!r})*{c!r} != {a!r}*({b!r}*{c!r})")
    return rb.report()


def group_from_table(elements, mul) -> FiniteGroup:
    """Build a group from an explicit table, deriving identity and inverses."""
    els = frozenset(elements)
    identity = None
    for e in els:
        if all(mul.get((e, a)) == a and mul.get((a, e)) == a for a in els):
            identity = e
            break
    if identity is None:
        raise InputError("multiplication table has no two-sided identity")
    inv = {}
    for a in els:
        for b in els:
            if mul.get((a, b)) == identity and mul.get((b, a)) == identity:
                inv[a] = b
                break
        else:
            raise InputError(f"element {a!r} has no inverse in the table")
    g = FiniteGroup(els, dict(mul), identity, inv)
    report = validate_group(g)
    if not report.ok:
        raise InputError(f"table is not a group: {report.violations[0]}")
    return g


def trivial_group() -> FiniteGroup:
    return FiniteGroup(frozenset({"e"}), {("e", "e"): "e"}, "e", {"e": "e"})


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GrpdError("cyclic group needs n >= 1")
    els = [str(i) for i in range(n)]
    mul = {(a, b): str((int(a) + int(b)) % n) for a in els for b in els}
    inv = {a: str((-int(a)) % n) for a in els}
    return FiniteGroup(frozenset(els), mul, "0", inv)


def _perm_name(p: tuple) -> str:
    # cycle notation on letters 1..n, fixed points dropped; identity is "e"
    n = len(p)
    seen = [False] * n
    parts = []
    for i in range(n):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        parts.append("(" + "".join(str(k + 1) for k in cyc) + ")")
    return "".join(parts) if parts else "e"


def symmetric(n: int) -> FiniteGroup:
    """Symmetric group on letters 1..n, elements named in cycle notation."""
    if not 1 <= n <= 6:
        raise GrpdError("symmetric(n) supported for 1 <= n <= 6")
    perms = list(permutations(range(n)))
    name = {p: _perm_name(p) for p in perms}
    compose = lambda p, q: tuple(p[q[i]] for i in range(n))  # p after q
    mul = {}
    for p in perms:
        for q in perms:
            mul[(name[p], name[q])] = name[compose(p, q)]
    inv = {}
    for p in perms:
        ip = tuple(sorted(range(n), key=lambda i: p[i]))
        inv[name[p]] = name[ip]
    return FiniteGroup(frozenset(name.values()), mul, "e", inv)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    els = [(a, b) for a in g.elements for b in h.elements]
    mul = {}
    for a1, b1 in els:
        for a2, b2 in els:
            mul[((a1, b1), (a2, b2))] = (g.mul[(a1, a2)], h.mul[(b1, b2)])
    inv = {(a, b): (g.inv[a], h.inv[b]) for a, b in els}
    return FiniteGroup(frozenset(els), mul, (g.identity, h.identity), inv)


def klein_four() -> FiniteGroup:
    return direct_product(cyclic(2), cyclic(2))


# ---------------------------------------------------------------------------
# presentations: Todd-Coxeter enumeration of the trivial-subgroup cosets
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(\^(-?\d+))?$")


def _parse_word(text: str, gen_index: dict) -> list:
    """A word is whitespace-separated tokens like ``a``, ``b^3``, ``a^-1``.

    Returns a list of slot indices (2*i for generator i, 2*i+1 for inverse).
    """
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise InputError(f"cannot parse token {tok!r} in word {text!r}")
        name, _, exp = m.groups()
        if name not in gen_index:
            raise InputError(f"unknown generator {name!r} in word {text!r}")
        k = int(exp) if exp is not None else 1
        slot = 2 * gen_index[name]
        if k < 0:
            slot, k = slot ^ 1, -k
        letters.extend([slot] * k)
    return letters


def _parse_relation(text: str, gen_index: dict) -> list:
    """``lhs = rhs`` becomes the relator lhs * rhs^-1; a bare word is a relator."""
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        left = _parse_word(lhs, gen_index)
        right = _parse_word(rhs, gen_index)
        return left + [x ^ 1 for x in reversed(right)]
    return _parse_word(text, gen_index)


class _CosetTable:
    def __init__(self, ngens: int, cap: int):
        self.nslots = 2 * ngens
        self.rows = [[None] * self.nslots]
        self.parent = [0]
        self.cap = cap
        self.pending = []

    def find(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def lookup(self, c: int, x: int):
        d = self.rows[c][x]
        return None if d is None else self.find(d)

    def union(self, a: int, b: int):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if b < a:
            a, b = b, a
        self.parent[b] = a
        self.pending.append(b)

    def set_entry(self, c: int, x: int, d: int):
        c, d = self.find(c), self.find(d)
        e = self.lookup(c, x)
        if e is not None:
            if e != d:
                self.union(e, d)
            return
        self.rows[c][x] = d
        f = self.lookup(d, x ^ 1)
        if f is None:
            self.rows[d][x ^ 1] = c
        elif f != c:
            self.union(f, c)

    def process_pending(self):
        while self.pending:
            b = self.pending.pop()
            row = self.rows[b]
            self.rows[b] = [None] * self.nslots
            for x, d in enumerate(row):
                if d is not None:
                    self.set_entry(self.find(b), x, self.find(d))

    def define(self, c: int, x: int) -> int:
        n = len(self.rows)
        if n > 12 * self.cap + 1000:
            raise GrpdError("coset enumeration ran away; presentation may be infinite")
        self.rows.append([None] * self.nslots)
        self.parent.append(n)
        self.set_entry(c, x, n)
        return n

    def live(self) -> list:
        return [c for c in range(len(self.rows)) if self.find(c) == c]

    def scan_and_fill(self, c: int, word: list):
        f = self.find(c)
        b = f
        i, j = 0, len(word) - 1
        while True:
            while i <= j:
                d = self.lookup(f, word[i])
                if d is None:
                    break
                f, i = d, i + 1
            while j >= i:
                d = self.lookup(b, word[j] ^ 1)
                if d is None:
                    break
                b, j = d, j - 1
            if i > j:
                if f != b:
                    self.union(f, b)
                    self.process_pending()
                return
            if i == j:
                self.set_entry(f, word[i], b)
                self.process_pending()
                return
            self.define(f, word[i])


def _format_word(word: list, generators: list) -> str:
    if not word:
        return "e"
    runs = []
    for g in word:
        if runs and runs[-1][0] == g:
            runs[-1][1] += 1
        else:
            runs.append([g, 1])
    compact = all(len(generators[g]) == 1 for g, _ in runs)
    if compact:
        return "".join(generators[g] + (str(k) if k > 1 else "") for g, k in runs)
    return " ".join(generators[g] + (f"^{k}" if k > 1 else "") for g, k in runs)


def group_from_presentation(generators, relations, max_elements: int = 10000) -> FiniteGroup:
    """Resolve a finite presentation into an explicit group table.

    Elements are named by shortest positive words in the generators found by
    breadth-first search ("e" for the identity, then "a", "b", "a2", "ab", ...).
    Relations are strings: either a relator word ("a^6") or an equation
    ("b a b^-1 = a^-1").
    """
    generators = list(generators)
    if len(set(generators)) != len(generators):
        raise InputError("duplicate generator names")
    if "e" in generators:
        raise InputError("generator name 'e' clashes with the identity label")
    gen_index = {g: i for i, g in enumerate(generators)}
    relators = [_parse_relation(r, gen_index) for r in relations]
    relators = [r for r in relators if r]

    ct = _CosetTable(len(generators), max_elements)
    stable = False
    while not stable:
        stable = True
        before_rows = len(ct.rows)
        before_live = len(ct.live())
        for c in range(len(ct.rows)):
            if ct.find(c) != c:
                continue
            for rel in relators:
                ct.scan_and_fill(c, rel)
                if ct.find(c) != c:
                    break
            if ct.find(c) != c:
                continue
            for x in range(ct.nslots):
                if ct.lookup(c, x) is None:
                    ct.define(c, x)
        if len(ct.rows) != before_rows or len(ct.live()) != before_live:
            stable = False
        if len(ct.live()) > max_elements:
            raise GrpdError(
                f"presentation resolves to more than {max_elements} elements"
            )

    live = ct.live()
    n = len(live)
    if n > TABLE_CAP:
        raise GrpdError(
            f"presentation resolves to {n} elements; explicit tables are capped at {TABLE_CAP}"
        )
    index = {c: i for i, c in enumerate(live)}
    # positive-generator permutations of the live cosets
    act = [[index[ct.lookup(live[i], 2 * g)] for i in range(n)] for g in range(len(generators))]

    # breadth-first words from the identity coset
    root = index[ct.find(0)]
    words = {root: []}
    order_found = [root]
    queue = [root]
    while queue:
        cur = queue.pop(0)
        for g in range(len(generators)):
            nxt = act[g][cur]
            if nxt not in words:
                words[nxt] = words[cur] + [g]
                order_found.append(nxt)
                queue.append(nxt)
    if len(words) != n:
        raise GrpdError("generators do not act transitively; enumeration bug")

    names = {c: _format_word(words[c], generators) for c in range(n)}
    if len(set(names.values())) != n:
        names = {c: f"w{c}" for c in range(n)}  # defensive: formatter collision

    def apply_word(c, word):
        for g in word:
            c = act[g][c]
        return c

    mul = {}
    for d in range(n):
        wd = words[d]
        for c in range(n):
            mul[(names[c], names[d])] = names[apply_word(c, wd)]
    inv = {}
    for c in range(n):
        back = root
        for g in reversed(words[c]):
            # follow the inverse slot: find c' with act[g][c'] == back
            back = act[g].index(back)
        inv[names[c]] = names[back]
    return FiniteGroup(frozenset(names.values()), mul, names[root], inv)


def dihedral(n: int) -> FiniteGroup:
    return group_from_presentation(["r", "f"], [f"r^{n}", "f^2", "r f r f"])


def binary_dihedral_12() -> FiniteGroup:
    """Order-12 group <a,b | a^6 = b^4 = 1, b a b^-1 = a^-1, a^3 = b^2>."""
    return group_from_presentation(
        ["a", "b"], ["a^6", "b^4", "b a b^-1 = a^-1", "a^3 = b^2"]
    )


# ---------------------------------------------------------------------------
# subgroup machinery
# ---------------------------------------------------------------------------


def subgroup(g: FiniteGroup, elements) -> FiniteGroup:
    els = frozenset(elements)
    unknown = els - g.elements
    if unknown:
        raise UnknownIdentifier(f"not group elements: {sorted(map(str, unknown))}")
    for a in els:
        if g.inv[a] not in els:
            raise GrpdError(f"subset not closed under inverse at {a!r}")
        for b in els:
            if g.mul[(a, b)] not in els:
                raise GrpdError(f"subset not closed under product at {ident(a, b)}")
    if g.identity not in els:
        raise GrpdError("subset does not contain the identity")
    mul = {(a, b): g.mul[(a, b)] for a in els for b in els}
    inv = {a: g.inv[a] for a in els}
    return FiniteGroup(els, mul, g.identity, inv)


def generated_subgroup(g: FiniteGroup, gens) -> FiniteGroup:
    gens = list(gens)
    unknown = set(gens) - g.elements
    if unknown:
        raise UnknownIdentifier(f"not group elements: {sorted(map(str, unknown))}")
    closure = {g.identity}
    frontier = [g.identity]
    while frontier:
        a = frontier.pop()
        for b in gens:
            for c in (g.mul[(a, b)], g.mul[(a, g.inv[b])]):
                if c not in closure:
                    closure.add(c)
                    frontier.append(c)
    return subgroup(g, closure)


def left_cosets(g: FiniteGroup, h: FiniteGroup) -> list:
    """Left cosets aH, each a frozenset, ordered by their canonical reps."""
    if not h.elements <= g.elements:
        raise MismatchError("subgroup elements not contained in the group")
    seen = set()
    cosets = []
    for a in sorted(g.elements, key=shortlex_key):
        if a in seen:
            continue
        coset = frozenset(g.mul[(a, k)] for k in h.elements)
        seen |= coset
        cosets.append(coset)
    return sorted(cosets, key=lambda c: shortlex_key(coset_rep(g, c)))


def coset_rep(g: FiniteGroup, coset: frozenset):
    """Canonical representative: the identity if present, else shortlex-least."""
    if g.identity in coset:
        return g.identity
    return min(coset, key=shortlex_key)


def is_normal_subgroup(g: FiniteGroup, h: FiniteGroup) -> bool:
    return all(g.conj(a, k) in h.elements for a in g.elements for k in h.elements)


def quotient_group(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """G/H for normal H, elements named by canonical coset representatives."""
    if not is_normal_subgroup(g, h):
        raise GrpdError("quotient by a non-normal subgroup")
    cosets = left_cosets(g, h)
    rep_of = {}
    for c in cosets:
        r = coset_rep(g, c)
        for a in c:
            rep_of[a] = r
    reps = frozenset(rep_of[a] for a in g.elements)
    mul = {(a, b): rep_of[g.mul[(a, b)]] for a in reps for b in reps}
    inv = {a: rep_of[g.inv[a]] for a in reps}
    return FiniteGroup(reps, mul, rep_of[g.identity], inv)


def element_order(g: FiniteGroup, a) -> int:
    n, acc = 1, a
    while acc != g.identity:
        acc = g.mul[(acc, a)]
        n += 1
    return n


def is_abelian_group(g: FiniteGroup) -> bool:
    return all(g.mul[(a, b)] == g.mul[(b, a)] for a in g.elements for b in g.elements)


def center(g: FiniteGroup) -> frozenset:
    return frozenset(
        a for a in g.elements if all(g.mul[(a, b)] == g.mul[(b, a)] for b in g.elements)
    )


def centralizer(g: FiniteGroup, a) -> frozenset:
    if a not in g.elements:
        raise UnknownIdentifier(f"{a!r} not a group element")
    return frozenset(b for b in g.elements if g.mul[(a, b)] == g.mul[(b, a)])


def conjugacy_classes(g: FiniteGroup) -> list:
    seen = set()
    classes = []
    for a in sorted(g.elements, key=shortlex_key):
        if a in seen:
            continue
        cls = frozenset(g.conj(b, a) for b in g.elements)
        seen |= cls
        classes.append(cls)
    return classes


def generating_set(g: FiniteGroup) -> tuple:
    """A small (greedy) generating set; empty for the trivial group."""
    gens = []
    span = {g.identity}
    for a in sorted(g.elements, key=shortlex_key):
        if a in span:
            continue
        gens.append(a)
        span = set(generated_subgroup(g, gens).elements)
        if len(span) == g.order:
            break
    return tuple(gens)


def _hom_from_generator_images(g: FiniteGroup, h: FiniteGroup, gens, images):
    """Extend generator images to a total map, or None if inconsistent."""
    img = {g.identity: h.identity}
    for a, b in zip(gens, images):
        img[a] = b
    # BFS writing every element as (previous element) * generator
    frontier = list(img.keys())
    while frontier:
        a = frontier.pop()
        for x, y in zip(gens, images):
            c = g.mul[(a, x)]
            v = h.mul[(img[a], y)]
            if c in img:
                if img[c] != v:
                    return None
            else:
                img[c] = v
                frontier.append(c)
    if len(img) != g.order:
        return None  # gens did not generate; caller guards against this
    for a in g.elements:
        for b in g.elements:
            if img[g.mul[(a, b)]] != h.mul[(img[a], img[b])]:
                return None
    return img


def all_homomorphisms(g: FiniteGroup, h: FiniteGroup):
    """Yield every homomorphism G -> H as a dict (brute force)."""
    gens = generating_set(g)
    if not gens:
        yield {g.identity: h.identity}
        return
    orders = [element_order(g, a) for a in gens]

    def candidates(k):
        return [b for b in sorted(h.elements, key=shortlex_key) if orders[k] % element_order(h, b) == 0]

    def rec(k, chosen):
        if k == len(gens):
            img = _hom_from_generator_images(g, h, gens, chosen)
            if img is not None:
                yield img
            return
        for b in candidates(k):
            yield from rec(k + 1, chosen + [b])

    yield from rec(0, [])


def group_signature(g: FiniteGroup) -> tuple:
    orders = sorted(element_order(g, a) for a in g.elements)
    class_sizes = sorted(len(c) for c in conjugacy_classes(g))
    return (g.order, tuple(orders), is_abelian_group(g), len(center(g)), tuple(class_sizes))


def find_group_isomorphism(g: FiniteGroup, h: FiniteGroup):
    """An isomorphism G -> H as a dict, or None."""
    if group_signature(g) != group_signature(h):
        return None
    for img in all_homomorphisms(g, h):
        if len(set(img.values())) == g.order:
            return img
    return None


def groups_isomorphic(g: FiniteGroup, h: FiniteGroup) -> bool:
    return find_group_isomorphism(g, h) is not None
