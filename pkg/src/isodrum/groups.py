"""Finitely generated permutation groups with a stabilizer-chain backbone.

Orders, membership, element enumeration, orbits, stabilizers, conjugacy,
cosets, cores, maximality and normal closures.  Everything is deterministic:
searches run in a fixed order and witnesses are the first found in that
order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundExceeded
from .limits import enumeration_bound, index_bound
from .permutations import Permutation


class _Level:
    """One level of a stabilizer chain: a base point with its Schreier tree."""

    __slots__ = ("point", "gens", "sv", "_trans", "_trans_inv", "pending", "processed")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.gens: list[Permutation] = []
        # Schreier vector: orbit point -> (parent point, generator index)
        self.sv: dict[int, tuple] = {point: None}
        self._trans = {point: Permutation.identity(degree)}
        self._trans_inv = {point: self._trans[point]}
        self.pending: deque = deque()
        self.processed: set = set()

    def add_gen(self, g: Permutation):
        gi = len(self.gens)
        self.gens.append(g)
        new_points = []
        for p in list(self.sv):
            q = int(g.images[p])
            if q not in self.sv:
                self.sv[q] = (p, gi)
                new_points.append(q)
        frontier = deque(new_points)
        while frontier:
            p = frontier.popleft()
            for gj, h in enumerate(self.gens):
                q = int(h.images[p])
                if q not in self.sv:
                    self.sv[q] = (p, gj)
                    frontier.append(q)
                    new_points.append(q)
        for p in self.sv:
            self.pending.append((p, gi))
        for p in new_points:
            for gj in range(len(self.gens)):
                self.pending.append((p, gj))

    def transversal(self, p: int) -> Permutation:
        """Element u with u(point) == p, built along the Schreier tree."""
        cached = self._trans.get(p)
        if cached is not None:
            return cached
        path = []
        q = p
        while q not in self._trans:
            path.append(q)
            q = self.sv[q][0]
        u = self._trans[q]
        for r in reversed(path):
            parent, gi = self.sv[r]
            u = u * self.gens[gi]
            self._trans[r] = u
        return self._trans[p]

    def transversal_inv(self, p: int) -> Permutation:
        cached = self._trans_inv.get(p)
        if cached is None:
            cached = self.transversal(p).inverse()
            self._trans_inv[p] = cached
        return cached


class _Chain:
    """Deterministic incremental Schreier-Sims."""

    def __init__(self, degree: int):
        self.degree = degree
        self.levels: list[_Level] = []

    def sift(self, p: Permutation, start: int = 0):
        """Reduce p by transversal elements.

        Returns (j, residue) where the residue fixes the first j base points,
        with residue None when p is a member.
        """
        for j in range(start, len(self.levels)):
            lvl = self.levels[j]
            t = int(p.images[lvl.point])
            if t == lvl.point:
                continue
            if t not in lvl.sv:
                return j, p
            p = p * lvl.transversal_inv(t)
        return len(self.levels), (None if p.is_identity() else p)

    def contains(self, p: Permutation) -> bool:
        return self.sift(p)[1] is None

    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl.sv)
        return n

    def add_generator(self, g: Permutation) -> bool:
        if g.is_identity():
            return False
        j, residue = self.sift(g)
        if residue is None:
            return False
        self._install(j, residue)
        return True

    def _install(self, j: int, r: Permutation):
        # the residue fixes base points 0..j-1, so it is a strong generator
        # for every level up to j (lists are nested by construction)
        if j == len(self.levels):
            pt = min(r.moved_points())
            self.levels.append(_Level(pt, self.degree))
        for lvl in self.levels[: j + 1]:
            lvl.add_gen(r)

    def complete(self):
        """Process Schreier generators, deepest level first, to a fixpoint."""
        while True:
            i = len(self.levels) - 1
            while i >= 0 and not self.levels[i].pending:
                i -= 1
            if i < 0:
                return
            lvl = self.levels[i]
            p, gi = lvl.pending.popleft()
            if (p, gi) in lvl.processed:
                continue
            lvl.processed.add((p, gi))
            g = lvl.gens[gi]
            u = lvl.transversal(p) * g
            q = int(u.images[lvl.point])
            s = u * lvl.transversal_inv(q)
            if s.is_identity():
                continue
            j, residue = self.sift(s, i + 1)
            if residue is not None:
                self._install(j, residue)

    def base(self):
        return [lvl.point for lvl in self.levels]


class PermGroup:
    """A permutation group given by generators on 0..degree-1."""

    def __init__(self, degree: int, generators):
        gens = []
        seen = set()
        for g in generators:
            if not isinstance(g, Permutation):
                g = Permutation(g)
            if g.degree != degree:
                raise ValueError(f"generator degree {g.degree} != group degree {degree}")
            if g.is_identity() or g.key() in seen:
                continue
            seen.add(g.key())
            gens.append(g)
        self.degree = degree
        self.generators = tuple(gens)
        self._chain = None
        self._classes = None

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def chain(self) -> _Chain:
        if self._chain is None:
            chain = _Chain(self.degree)
            for g in self.generators:
                chain.add_generator(g)
            chain.complete()
            self._chain = chain
        return self._chain

    @property
    def order(self) -> int:
        return self.chain().order()

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        return self.chain().contains(p)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_transitive(self) -> bool:
        return self.degree > 0 and len(self.orbit(0)) == self.degree

    def orbit(self, x: int) -> frozenset:
        if not 0 <= x < self.degree:
            raise ValueError(f"point {x} out of range 0..{self.degree - 1}")
        seen = {x}
        queue = deque([x])
        while queue:
            p = queue.popleft()
            for g in self.generators:
                q = int(g.images[p])
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
        return frozenset(seen)

    def orbits(self):
        left = set(range(self.degree))
        out = []
        while left:
            x = min(left)
            orb = self.orbit(x)
            out.append(orb)
            left -= orb
        return out

    def stabilizer(self, x: int) -> "PermGroup":
        """Point stabilizer via Schreier generators, reduced by sifting."""
        if not 0 <= x < self.degree:
            raise ValueError(f"point {x} out of range 0..{self.degree - 1}")
        trans = {x: self.identity}
        queue = deque([x])
        order_pts = [x]
        while queue:
            p = queue.popleft()
            for g in self.generators:
                q = int(g.images[p])
                if q not in trans:
                    trans[q] = trans[p] * g
                    order_pts.append(q)
                    queue.append(q)
        sub = _Chain(self.degree)
        gens = []
        inv_cache = {}
        for p in order_pts:
            up = trans[p]
            for g in self.generators:
                q = int(g.images[p])
                tq_inv = inv_cache.get(q)
                if tq_inv is None:
                    tq_inv = trans[q].inverse()
                    inv_cache[q] = tq_inv
                s = up * g * tq_inv
                if not s.is_identity() and sub.add_generator(s):
                    sub.complete()
                    gens.append(s)
        H = PermGroup(self.degree, gens)
        H._chain = sub
        return H

    def elements(self, bound=None):
        """All elements, by chain traversal.  Raises BoundExceeded when large."""
        cap = enumeration_bound(bound)
        if self.order > cap:
            raise BoundExceeded(f"group order {self.order} exceeds bound {cap}")
        chain = self.chain()
        elems = [self.identity]
        for lvl in reversed(chain.levels):
            transversal = [lvl.transversal(p) for p in sorted(lvl.sv)]
            elems = [e * u for u in transversal for e in elems]
        return elems

    def random_element(self, rng) -> Permutation:
        """Uniform element: one transversal factor per level of the chain."""
        chain = self.chain()
        p = self.identity
        for lvl in chain.levels:
            pts = sorted(lvl.sv)
            p = lvl.transversal(pts[rng.randrange(len(pts))]) * p
        return p

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"


def build_chain(G: PermGroup) -> PermGroup:
    """Force construction of the stabilizer chain; returns the same group."""
    G.chain()
    return G


def orbit(G: PermGroup, x: int) -> frozenset:
    return G.orbit(x)


def stabilizer(G: PermGroup, x: int) -> PermGroup:
    return G.stabilizer(x)


def is_subgroup(H: PermGroup, G: PermGroup) -> bool:
    return H.degree == G.degree and all(g in G for g in H.generators)


def same_group(A: PermGroup, B: PermGroup) -> bool:
    return is_subgroup(A, B) and A.order == B.order


def is_conjugate(G: PermGroup, a: Permutation, b: Permutation, bound=None):
    """A conjugator g in G with g^-1 a g == b, or None.

    Breadth-first search over the conjugation orbit of a, so the witness is
    the first conjugator in BFS order.
    """
    if a not in G or b not in G:
        raise ValueError("elements are not members of the group")
    if a.cycle_type() != b.cycle_type():
        return None
    if a == b:
        return Permutation.identity(G.degree)
    cap = enumeration_bound(bound)
    seen = {a.key(): Permutation.identity(G.degree)}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        w = seen[x.key()]
        for g in G.generators:
            y = x.conjugate_by(g)
            if y.key() not in seen:
                wg = w * g
                if y == b:
                    return wg
                seen[y.key()] = wg
                queue.append(y)
                if len(seen) > cap:
                    raise BoundExceeded("conjugation orbit exceeds enumeration bound")
    return None


@dataclass
class ConjugacyClasses:
    """Partition of a group's element set into conjugacy classes."""

    group: PermGroup
    reps: list
    sizes: list
    class_of: dict = field(repr=False)
    elements: list = field(repr=False)

    def __len__(self):
        return len(self.reps)

    def index_of(self, p: Permutation) -> int:
        return self.class_of[p.key()]

    def members(self, i: int):
        return [e for e in self.elements if self.class_of[e.key()] == i]


def conjugacy_classes(G: PermGroup, bound=None) -> ConjugacyClasses:
    """Conjugacy classes by full enumeration; reps are lex-least members."""
    elems = G.elements(bound)
    by_key = {e.key(): e for e in elems}
    class_of = {}
    reps = []
    sizes = []
    for key in sorted(by_key):
        if key in class_of:
            continue
        rep = by_key[key]
        ci = len(reps)
        class_of[key] = ci
        size = 1
        queue = deque([rep])
        while queue:
            x = queue.popleft()
            for g in G.generators:
                y = x.conjugate_by(g)
                if y.key() not in class_of:
                    class_of[y.key()] = ci
                    size += 1
                    queue.append(y)
        reps.append(rep)
        sizes.append(size)
    return ConjugacyClasses(G, reps, sizes, class_of, elems)


def cached_classes(G: PermGroup, bound=None) -> ConjugacyClasses:
    if G._classes is None:
        G._classes = conjugacy_classes(G, bound)
    return G._classes


@dataclass
class CosetTable:
    """Cosets of a subgroup, keyed canonically.

    ``representatives[i]`` lies in coset i; representative 0 is the identity,
    so coset 0 is the subgroup itself.  ``index_of`` maps the canonical
    signature of a coset (the image key of its canonical representative) to
    its index.
    """

    parent: PermGroup
    subgroup: PermGroup
    representatives: list
    index_of: dict = field(repr=False)

    def __len__(self):
        return len(self.representatives)

    def signature(self, g: Permutation) -> bytes:
        return _coset_canonical(self.subgroup, g).key()

    def index_of_element(self, g: Permutation) -> int:
        return self.index_of[self.signature(g)]

    def action_of(self, g: Permutation) -> Permutation:
        """The permutation induced on coset indices by translation."""
        images = [self.index_of[self.signature(r * g)] for r in self.representatives]
        return Permutation(images)


def _coset_canonical(H: PermGroup, g: Permutation) -> Permutation:
    """Canonical representative of the coset of g modulo H.

    Minimizes the image tuple of H's base over the coset, level by level; the
    minimizing element is unique, which makes coset keys deterministic.
    """
    chain = H.chain()
    u = g
    for lvl in chain.levels:
        img = u.images
        p_star = min(lvl.sv, key=lambda p: img[p])
        if p_star != lvl.point:
            u = lvl.transversal(p_star) * u
    return u


def left_cosets(G: PermGroup, H: PermGroup, bound=None) -> CosetTable:
    """Coset table of H in G (translation action on the coset space).

    Tables are cached per (G, H) object pair; groups are immutable, so the
    cache never goes stale.
    """
    cache = getattr(G, "_coset_tables", None)
    if cache is None:
        cache = {}
        G._coset_tables = cache
    hit = cache.get(id(H))
    if hit is not None and hit.subgroup is H:
        return hit
    if not is_subgroup(H, G):
        raise ValueError("H is not a subgroup of G")
    cap = index_bound(bound)
    ident = G.identity
    reps = [ident]
    index_of = {_coset_canonical(H, ident).key(): 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        r = reps[i]
        for g in G.generators:
            r2 = r * g
            k = _coset_canonical(H, r2).key()
            if k not in index_of:
                if len(reps) >= cap:
                    raise BoundExceeded(f"coset count exceeds index bound {cap}")
                index_of[k] = len(reps)
                reps.append(r2)
                queue.append(len(reps) - 1)
    table = CosetTable(G, H, reps, index_of)
    cache[id(H)] = table
    return table


def coset_action(G: PermGroup, H: PermGroup, bound=None):
    """Action of G on the cosets of H.

    Returns (image group, mapping from each generator to its image).  The
    image is transitive of degree [G:H] and the kernel of the map is
    core(G, H).
    """
    table = left_cosets(G, H, bound)
    mapping = {}
    images = []
    for g in G.generators:
        pi = table.action_of(g)
        mapping[g] = pi
        images.append(pi)
    image = PermGroup(len(table), images)
    return image, mapping


def core(G: PermGroup, H: PermGroup, bound=None) -> PermGroup:
    """Largest normal subgroup of G inside H.

    Computed as the kernel of the coset action: the combined action on
    original points plus coset indices is stabilized pointwise over the coset
    block, and the surviving generators are restricted back.
    """
    table = left_cosets(G, H, bound)
    m = len(table)
    n = G.degree
    combined = PermGroup(
        n + m,
        [Permutation(np.concatenate([g.images, table.action_of(g).images + n]))
         for g in G.generators],
    )
    for c in range(n, n + m):
        if all(int(g.images[c]) == c for g in combined.generators):
            continue
        combined = combined.stabilizer(c)
    kernel_gens = [Permutation(g.images[:n]) for g in combined.generators]
    return PermGroup(n, kernel_gens)


def _minimal_block(gens, n, a, b):
    """Block size of the finest congruence merging points a and b (Atkinson)."""
    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        if rx > ry:
            rx, ry = ry, rx
        parent[ry] = rx
        return True

    queue = deque()
    if union(a, b):
        queue.append((a, b))
    while queue:
        x, y = queue.popleft()
        for g in gens:
            gx, gy = int(g.images[x]), int(g.images[y])
            if union(gx, gy):
                queue.append((gx, gy))
    root = find(a)
    return sum(1 for x in range(n) if find(x) == root)


def is_maximal(G: PermGroup, H: PermGroup, bound=None) -> bool:
    """Whether H is maximal in G.

    Equivalent to primitivity of the coset action: a subgroup strictly
    between H and G is exactly a nontrivial proper block containing the
    trivial coset.  Representatives of H-orbits on the cosets suffice as
    block seeds.
    """
    if not is_subgroup(H, G):
        raise ValueError("H is not a subgroup of G")
    if H.order == G.order:
        raise ValueError("H equals G; maximality undefined")
    table = left_cosets(G, H, bound)
    m = len(table)
    image_gens = [table.action_of(g) for g in G.generators]
    h_image = PermGroup(m, [table.action_of(h) for h in H.generators])
    seen = {0}
    reps = []
    for x in range(1, m):
        if x in seen:
            continue
        orb = h_image.orbit(x)
        seen |= orb
        reps.append(min(orb))
    for beta in reps:
        size = _minimal_block(image_gens, m, 0, beta)
        if 1 < size < m:
            return False
    return True


def normal_closure(G: PermGroup, S, bound=None) -> PermGroup:
    """Smallest normal subgroup of G containing the elements of S."""
    for s in S:
        if s not in G:
            raise ValueError("element is not a member of the group")
    chain = _Chain(G.degree)
    gens = []
    work = deque(s for s in S if not s.is_identity())
    cap = enumeration_bound(bound)
    while work:
        x = work.popleft()
        if chain.contains(x):
            continue
        chain.add_generator(x)
        chain.complete()
        gens.append(x)
        if chain.order() > cap:
            raise BoundExceeded("normal closure exceeds enumeration bound")
        for g in G.generators:
            work.append(x.conjugate_by(g))
    N = PermGroup(G.degree, gens)
    N._chain = chain
    return N


def is_normal(G: PermGroup, N: PermGroup) -> bool:
    return all(n.conjugate_by(g) in N for n in N.generators for g in G.generators)


def is_simple(G: PermGroup, bound=None) -> bool:
    """Whether G is simple: no class representative generates a proper
    nontrivial normal closure."""
    if G.order == 1:
        return False
    classes = cached_classes(G, bound)
    for rep in classes.reps:
        if rep.is_identity():
            continue
        N = normal_closure(G, [rep], bound)
        if N.order != G.order:
            return False
    return True
