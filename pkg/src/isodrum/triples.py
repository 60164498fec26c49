"""Triples (G, H, K) and their properties.

AC: every conjugacy class of G meets H and K in equally many elements.
EC: every element of H is G-conjugate into K and vice versa.
FF: both coset actions are faithful (trivial cores).
MAX: both subgroups are maximal.
PAIR: an automorphism swaps H and K with inner square on H; the weak form
only compares orders.
INV: r generating involutions of the coset action satisfy the fixed-point
identity (r-2)*tiles == sum(Fix) - 2, with a tree gluing graph on demand.
"""

from __future__ import annotations

import enum
from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import BoundExceeded
from .groups import (
    PermGroup,
    cached_classes,
    core,
    is_conjugate,
    is_subgroup,
    left_cosets,
    same_group,
)
from .limits import INV_SEARCH_BOUND, enumeration_bound, index_bound
from .permutations import Permutation
from .transplant import InvolutionSystem, fixeq_check, involutions_of, is_tree, schreier_system


@dataclass
class Triple:
    """A parent group with two designated subgroups."""

    G: PermGroup
    H: PermGroup
    K: PermGroup
    label: str = ""

    def __post_init__(self):
        if not is_subgroup(self.H, self.G):
            raise ValueError("H is not a subgroup of G")
        if not is_subgroup(self.K, self.G):
            raise ValueError("K is not a subgroup of G")

    def __repr__(self):
        return (f"Triple({self.label or 'unnamed'}: |G|={self.G.order}, "
                f"|H|={self.H.order}, |K|={self.K.order})")


class PairStatus(enum.Enum):
    CONFIRMED = "confirmed"
    WEAK_EVIDENCE = "weak-evidence"
    FAILED = "failed"


def ac_profile(t: Triple, bound=None):
    """Per-class membership counts: list of (class rep, |class ∩ H|, |class ∩ K|)."""
    cap = enumeration_bound(bound)
    classes = cached_classes(t.G, cap)
    ch = Counter(classes.index_of(h) for h in t.H.elements(cap))
    ck = Counter(classes.index_of(k) for k in t.K.elements(cap))
    return [(rep, ch.get(i, 0), ck.get(i, 0)) for i, rep in enumerate(classes.reps)]


def is_ac(t: Triple, bound=None) -> bool:
    """Almost conjugate: classwise counts in H and K agree."""
    cap = enumeration_bound(bound)
    if t.H.order > cap or t.K.order > cap:
        raise BoundExceeded("subgroup order exceeds enumeration bound")
    if t.H.order != t.K.order:
        return False
    if t.G.order <= cap:
        return all(nh == nk for _, nh, nk in ac_profile(t, cap))
    clusters = _conjugacy_clusters(t, cap)
    return all(sum(h for h, _ in items) == sum(k for _, k in items) for items in clusters)


def is_ec(t: Triple, bound=None) -> bool:
    """Elementwise conjugate in both directions."""
    cap = enumeration_bound(bound)
    if t.H.order > cap or t.K.order > cap:
        raise BoundExceeded("subgroup order exceeds enumeration bound")
    if same_group(t.H, t.K):
        return True
    if t.G.order <= cap:
        classes = cached_classes(t.G, cap)
        hcl = {classes.index_of(h) for h in t.H.elements(cap)}
        kcl = {classes.index_of(k) for k in t.K.elements(cap)}
        return hcl == kcl
    clusters = _conjugacy_clusters(t, cap)
    return all((sum(h for h, _ in items) > 0) == (sum(k for _, k in items) > 0)
               for items in clusters)


def ec_witness_element(t: Triple, bound=None):
    """Least element of H not conjugate into K, or of K not into H; None if EC."""
    cap = enumeration_bound(bound)
    classes = cached_classes(t.G, cap)
    hcl = {}
    for h in sorted(t.H.elements(cap)):
        hcl.setdefault(classes.index_of(h), h)
    kcl = {}
    for k in sorted(t.K.elements(cap)):
        kcl.setdefault(classes.index_of(k), k)
    bad = [hcl[i] for i in hcl if i not in kcl] + [kcl[i] for i in kcl if i not in hcl]
    return min(bad) if bad else None


def _conjugacy_clusters(t: Triple, cap):
    """Merge the H- and K-classes that are conjugate in G.

    Used when G itself is too large to enumerate.  Returns, per G-cluster,
    the list of (h_size, k_size) contributions.
    """
    hc = cached_classes(t.H, cap)
    kc = cached_classes(t.K, cap)
    items = [(rep, size, 0) for rep, size in zip(hc.reps, hc.sizes)]
    items += [(rep, size, 1) for rep, size in zip(kc.reps, kc.sizes)]
    parent = list(range(len(items)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_type = {}
    for idx, (rep, _, _) in enumerate(items):
        by_type.setdefault(rep.cycle_type(), []).append(idx)
    for bucket in by_type.values():
        for a_pos in range(len(bucket)):
            for b_pos in range(a_pos + 1, len(bucket)):
                ia, ib = bucket[a_pos], bucket[b_pos]
                if find(ia) == find(ib):
                    continue
                if is_conjugate(t.G, items[ia][0], items[ib][0], cap) is not None:
                    parent[find(ib)] = find(ia)
    clusters = {}
    for idx, (_, size, side) in enumerate(items):
        entry = clusters.setdefault(find(idx), [])
        entry.append((size, 0) if side == 0 else (0, size))
    return list(clusters.values())


def check_ff(t: Triple, bound=None) -> bool:
    """Faithful coset actions: both cores trivial."""
    return ff_witness(t, bound) is None


def ff_witness(t: Triple, bound=None):
    """The offending normal subgroup (with its side) when FF fails."""
    for name, sub in (("H", t.H), ("K", t.K)):
        c = core(t.G, sub, bound)
        if c.order > 1:
            return name, c
    return None


def check_max(t: Triple, bound=None) -> bool:
    """Both subgroups maximal."""
    return max_witness(t, bound) is None


def max_witness(t: Triple, bound=None):
    """An intermediate subgroup strictly between G and a side, when one exists."""
    for name, sub in (("H", t.H), ("K", t.K)):
        if sub.order == t.G.order:
            return name, t.G
        table = left_cosets(t.G, sub, bound)
        m = len(table)
        image_gens = [table.action_of(g) for g in t.G.generators]
        h_image = PermGroup(m, [table.action_of(h) for h in sub.generators])
        seen = {0}
        for x in range(1, m):
            if x in seen:
                continue
            orb = h_image.orbit(x)
            seen |= orb
            beta = min(orb)
            block = _block_of(image_gens, m, 0, beta)
            if 1 < len(block) < m:
                gens = list(sub.generators) + [table.representatives[i] for i in sorted(block)]
                return name, PermGroup(t.G.degree, gens)
    return None


def _block_of(gens, n, a, b):
    """Points of the minimal block containing {a, b} (union-find closure)."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = deque()
    ra, rb = find(a), find(b)
    if ra != rb:
        parent[max(ra, rb)] = min(ra, rb)
        queue.append((a, b))
    while queue:
        x, y = queue.popleft()
        for g in gens:
            gx, gy = int(g.images[x]), int(g.images[y])
            rx, ry = find(gx), find(gy)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
                queue.append((gx, gy))
    root = find(a)
    return {x for x in range(n) if find(x) == root}


def compress(t: Triple, bound=None) -> Triple:
    """Transport a triple onto its H-coset action.

    Needs a faithful action (trivial core of H), so the image triple is
    isomorphic to the original and all properties carry over; the degree
    drops to the index [G:H].
    """
    c = core(t.G, t.H, bound)
    if c.order != 1:
        raise ValueError("coset action is unfaithful; cannot compress")
    table = left_cosets(t.G, t.H, bound)
    G2 = PermGroup(len(table), [table.action_of(g) for g in t.G.generators])
    H2 = PermGroup(len(table), [table.action_of(h) for h in t.H.generators])
    K2 = PermGroup(len(table), [table.action_of(k) for k in t.K.generators])
    return Triple(G2, H2, K2, label=f"{t.label or 'triple'} (coset action)")


def permutation_character(G: PermGroup, H: PermGroup, bound=None):
    """Fixed-coset counts per conjugacy class representative."""
    cap = enumeration_bound(bound)
    classes = cached_classes(G, cap)
    table = left_cosets(G, H, index_bound())
    out = {}
    for rep in classes.reps:
        act = table.action_of(rep)
        out[rep] = act.fixed_point_count()
    return out


def verify_automorphism(G: PermGroup, images, bound=None):
    """Extend generator images to a full automorphism, or raise ValueError.

    Closes the generated multiplication table, checking consistency at every
    product; bijectivity follows from the image count.  Returns the element
    map as a dict keyed by element.
    """
    images = list(images)
    if len(images) != len(G.generators):
        raise ValueError("need one image per generator")
    for im in images:
        if im.degree != G.degree:
            raise ValueError("image degree mismatch")
        if im not in G:
            raise ValueError("image is not a member of the group")
    cap = enumeration_bound(bound)
    if G.order > cap:
        raise BoundExceeded("automorphism verification needs full enumeration")
    ident = G.identity
    mapping = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            img = mapping[w.key()]
            for g, gim in zip(G.generators, images):
                w2 = w * g
                img2 = img * gim
                known = mapping.get(w2.key())
                if known is None:
                    mapping[w2.key()] = img2
                    nxt.append(w2)
                elif known != img2:
                    raise ValueError("generator images do not define a homomorphism")
        frontier = nxt
    if len(mapping) != G.order:
        raise ValueError("map does not cover the group")
    if len({img.key() for img in mapping.values()}) != G.order:
        raise ValueError("generator images define a non-bijective map")
    return mapping


def check_pair(t: Triple, candidate=None, bound=None) -> PairStatus:
    """PAIR: confirmed via a verified swap automorphism, else the order test."""
    if candidate is None:
        return PairStatus.WEAK_EVIDENCE if t.H.order == t.K.order else PairStatus.FAILED
    mapping = verify_automorphism(t.G, candidate, bound)
    sigma = lambda p: mapping[p.key()]
    maps_h_to_k = (t.H.order == t.K.order
                   and all(sigma(h) in t.K for h in t.H.generators))
    if not maps_h_to_k:
        return PairStatus.WEAK_EVIDENCE if t.H.order == t.K.order else PairStatus.FAILED
    cap = enumeration_bound(bound)
    hgens = t.H.generators if t.H.generators else (t.G.identity,)
    for h0 in sorted(t.H.elements(cap)):
        if all(sigma(sigma(h)) == h.conjugate_by(h0) for h in hgens):
            return PairStatus.CONFIRMED
    return PairStatus.WEAK_EVIDENCE


def _subset_search(fixes, r, target, cap):
    """Lexicographic r-subsets of indices with exact fixed-point sum.

    ``fixes`` must be sorted descending.  Prunes on partial sums; raises
    BoundExceeded when more than ``cap`` nodes are visited.
    """
    n = len(fixes)
    suffix_min = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = fixes[i] if i == n - 1 else min(fixes[i], suffix_min[i + 1])
    visited = 0
    chosen = []

    def rec(start, total):
        nonlocal visited
        need = r - len(chosen)
        if need == 0:
            if total == target:
                yield tuple(chosen)
            return
        for i in range(start, n - need + 1):
            visited += 1
            if visited > cap:
                raise BoundExceeded("involution subset search bound exceeded")
            # prune: remaining picks bounded by current (max) and suffix min
            hi = total + fixes[i] + (need - 1) * fixes[i]
            lo = total + fixes[i] + (need - 1) * suffix_min[i]
            if hi < target or lo > target:
                continue
            chosen.append(i)
            yield from rec(i + 1, total + fixes[i])
            chosen.pop()

    yield from rec(0, 0)


def inv_witnesses(t: Triple, r: int = 3, tree_required: bool = True,
                  bound=None, search_bound: int = INV_SEARCH_BOUND):
    """All involution systems witnessing INV for the H-side coset action.

    Yields (G-involution tuple, system on the coset space) in a fixed order:
    involutions sorted by descending fixed-point count in the action, subsets
    lexicographically.  For a faithful action the image involutions are
    exactly the images of G's involutions, which keeps preimages available;
    otherwise the image group's involutions are enumerated directly and the
    preimage slot is None.
    """
    if r < 3:
        raise ValueError("need at least 3 sides")
    cap = enumeration_bound(bound)
    table = left_cosets(t.G, t.H, index_bound())
    lam = len(table)
    target = (r - 2) * lam + 2
    acted = []
    if core(t.G, t.H).order == 1:
        for g in involutions_of(t.G, cap):
            img = table.action_of(g)
            acted.append((g, img, img.fixed_point_count()))
    else:
        image_group = PermGroup(lam, [table.action_of(g) for g in t.G.generators])
        for img in involutions_of(image_group, cap):
            acted.append((None, img, img.fixed_point_count()))
    acted.sort(key=lambda x: (-x[2], x[1].key(),
                              x[0].key() if x[0] is not None else b""))
    fixes = [a[2] for a in acted]
    seen_image_sets = set()
    for combo in _subset_search(fixes, r, target, search_bound):
        gs = tuple(acted[i][0] for i in combo)
        imgs = tuple(acted[i][1] for i in combo)
        img_key = tuple(sorted(p.key() for p in imgs))
        if len(set(img_key)) < r or img_key in seen_image_sets:
            continue
        seen_image_sets.add(img_key)
        if not PermGroup(lam, imgs).is_transitive():
            continue
        sys = InvolutionSystem(lam, r, imgs)
        if tree_required and not is_tree(sys):
            continue
        assert fixeq_check(sys)
        yield gs, sys


def check_inv(t: Triple, r: int = 3, tree_required: bool = True,
              bound=None, search_bound: int = INV_SEARCH_BOUND):
    """First INV witness system, or None when the search exhausts."""
    for _, sys in inv_witnesses(t, r, tree_required, bound, search_bound):
        return sys
    return None


@dataclass
class PropertyReport:
    """Outcome of the full property suite on one triple."""

    label: str
    ac: bool
    ec: bool
    ff: bool
    max: bool
    pair: PairStatus
    inv: InvolutionSystem | None
    witnesses: dict = field(default_factory=dict)
    inv_checked: bool = True

    def __post_init__(self):
        if self.ac and not self.ec:
            raise ValueError("inconsistent report: AC holds but EC fails")

    def holds(self, include_inv=True) -> bool:
        ok = self.ac and self.ec and self.ff and self.max and self.pair != PairStatus.FAILED
        if include_inv:
            ok = ok and self.inv is not None
        return ok

    def lines(self):
        out = [
            f"AC:   {'true' if self.ac else 'false'}",
            f"EC:   {'true' if self.ec else 'false'}",
            f"FF:   {'true' if self.ff else 'false'}",
            f"MAX:  {'true' if self.max else 'false'}",
            f"PAIR: {self.pair.value}",
        ]
        if not self.inv_checked:
            out.append("INV:  not checked")
        elif self.inv is None:
            out.append("INV:  none")
        else:
            out.append(f"INV:  found (sides={self.inv.r}, fixed={tuple(self.inv.traces())})")
        for prop, wit in sorted(self.witnesses.items()):
            out.append(f"witness[{prop}]: {wit}")
        return out

    def to_json_dict(self):
        inv = "not checked" if not self.inv_checked else None
        if self.inv is not None:
            from .transplant import format_involution_system

            inv = format_involution_system(self.inv)
        return {
            "schema": 1,
            "label": self.label,
            "ac": self.ac,
            "ec": self.ec,
            "ff": self.ff,
            "max": self.max,
            "pair": self.pair.value,
            "inv": inv,
            "witnesses": {k: str(v) for k, v in self.witnesses.items()},
        }


def property_report(t: Triple, pair_candidate=None, r: int = 3,
                    tree_required: bool = True, bound=None,
                    check_inv_property: bool = True) -> PropertyReport:
    """Run the whole property suite, collecting witnesses for failures."""
    witnesses = {}
    ac = is_ac(t, bound)
    ec = is_ec(t, bound)
    if not ac and t.G.order <= enumeration_bound(bound):
        prof = [(rep, nh, nk) for rep, nh, nk in ac_profile(t, bound) if nh != nk]
        if prof:
            rep, nh, nk = prof[0]
            witnesses["ac"] = f"class of {rep} meets H {nh} times, K {nk} times"
    if not ec and t.G.order <= enumeration_bound(bound):
        w = ec_witness_element(t, bound)
        if w is not None:
            witnesses["ec"] = f"element {w} conjugate into one side only"
    ffw = ff_witness(t, bound)
    if ffw is not None:
        side, sub = ffw
        witnesses["ff"] = f"core of {side} has order {sub.order}; generators {[str(g) for g in sub.generators]}"
        witnesses["ff_subgroup"] = sub
    maxw = max_witness(t, bound)
    if maxw is not None:
        side, sub = maxw
        witnesses["max"] = f"{side} is contained in a proper subgroup of order {sub.order}"
        witnesses["max_subgroup"] = sub
    pair = check_pair(t, pair_candidate, bound)
    inv = None
    if check_inv_property:
        try:
            inv = check_inv(t, r, tree_required, bound)
        except BoundExceeded as exc:
            witnesses["inv"] = f"search bound exceeded: {exc}"
    return PropertyReport(
        label=t.label,
        ac=ac,
        ec=ec,
        ff=ffw is None,
        max=maxw is None,
        pair=pair,
        inv=inv,
        witnesses=witnesses,
        inv_checked=check_inv_property,
    )
