"""Involution systems and exact transplantation.

An involution system records how copies of a base tile glue along colored
sides: color mu carries a symmetric 0/1 permutation matrix whose off-diagonal
ones are gluings and whose diagonal ones are boundary sides.  Everything in
this module is exact; no floating point.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BoundExceeded, SpecFormatError
from .groups import PermGroup, left_cosets
from .limits import OKADA_SHUDO_NMAX, enumeration_bound
from .permutations import Permutation


@dataclass(frozen=True)
class InvolutionSystem:
    """Tile gluings for one billiard: r involutions on n_tiles tiles."""

    n_tiles: int
    r: int
    perms: tuple

    def __post_init__(self):
        if len(self.perms) != self.r:
            raise ValueError("side count does not match permutation count")
        for p in self.perms:
            if p.degree != self.n_tiles:
                raise ValueError("tile count mismatch")
            if not (p * p).is_identity():
                raise ValueError("side permutation is not an involution")
        if not PermGroup(self.n_tiles, self.perms).is_transitive():
            raise ValueError("gluing system is not transitive on tiles")

    def matrices(self):
        """The r symmetric 0/1 permutation matrices."""
        out = []
        for p in self.perms:
            m = np.zeros((self.n_tiles, self.n_tiles), dtype=np.int64)
            m[np.arange(self.n_tiles), p.images] = 1
            out.append(m)
        return out

    def traces(self):
        """Fixed tiles per color, i.e. boundary-side counts."""
        return [p.fixed_point_count() for p in self.perms]

    def edges(self):
        """Gluing edges (i, j, mu) with i < j."""
        out = []
        for mu, p in enumerate(self.perms):
            for i in range(self.n_tiles):
                j = int(p.images[i])
                if i < j:
                    out.append((i, j, mu))
        return out

    def boundary_sides(self):
        """Pairs (tile, mu) lying on the billiard boundary."""
        out = []
        for mu, p in enumerate(self.perms):
            for i in range(self.n_tiles):
                if int(p.images[i]) == i:
                    out.append((i, mu))
        return out

    def relabel(self, p: Permutation) -> "InvolutionSystem":
        """Rename tile i to p(i)."""
        return InvolutionSystem(self.n_tiles, self.r, tuple(m.conjugate_by(p) for m in self.perms))

    def permute_colors(self, order) -> "InvolutionSystem":
        """New system whose color mu is old color order[mu]."""
        return InvolutionSystem(self.n_tiles, self.r, tuple(self.perms[mu] for mu in order))

    def canonical_key(self):
        """Label-independent encoding: minimum over BFS relabelings.

        The colored graph is deterministic (one neighbor per color per tile),
        so fixing a root fixes the labeling; minimizing over roots gives a
        canonical form.
        """
        best = None
        for root in range(self.n_tiles):
            label = {root: 0}
            order = [root]
            qi = 0
            while qi < len(order):
                t = order[qi]
                qi += 1
                for p in self.perms:
                    u = int(p.images[t])
                    if u not in label:
                        label[u] = len(order)
                        order.append(u)
            enc = tuple(
                tuple(label[int(p.images[t])] for t in order) for p in self.perms
            )
            if best is None or enc < best:
                best = enc
        return best


def schreier_system(G: PermGroup, gens) -> InvolutionSystem:
    """System built from involution generators of a transitive action.

    M_ij = 1 when generator mu swaps tiles i and j; M_ii = 1 when it fixes
    tile i (that side lies on the boundary).
    """
    gens = tuple(gens)
    for g in gens:
        if g.degree != G.degree:
            raise ValueError("generator degree mismatch")
        if g not in G:
            raise ValueError("generator is not a member of the acting group")
        if not (g * g).is_identity():
            raise ValueError("generator is not an involution")
    if not PermGroup(G.degree, gens).is_transitive():
        raise ValueError("involutions do not generate a transitive group")
    return InvolutionSystem(G.degree, len(gens), gens)


def is_tree(sys: InvolutionSystem) -> bool:
    """Whether the colored gluing graph is a tree (connected and acyclic)."""
    n = sys.n_tiles
    edge_count = sum((n - t) // 2 for t in sys.traces())
    if edge_count != n - 1:
        return False
    seen = {0}
    queue = deque([0])
    while queue:
        t = queue.popleft()
        for p in sys.perms:
            u = int(p.images[t])
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == n


def fixeq_check(sys: InvolutionSystem) -> bool:
    """The fixed-point identity (r-2) * tiles == sum of traces - 2."""
    return (sys.r - 2) * sys.n_tiles == sum(sys.traces()) - 2


def has_dominant_involution(sys: InvolutionSystem) -> bool:
    """Whether some side fixes more than a third of the tiles (strict)."""
    return any(3 * t > sys.n_tiles for t in sys.traces())


@dataclass
class TransplantationSolution:
    """An exact solution of T*M = N*T for all colors."""

    T: tuple
    solution_basis: list = field(repr=False)
    invertible: bool = False
    permutation_solution: Permutation | None = None
    certificate: str = ""

    def dimension(self):
        return len(self.solution_basis)


def intertwiner_basis(mats_a, mats_b, n):
    """Basis of {T : T*A_mu == B_mu*T} for permutation maps.

    The constraint is T[i][j] == T[b(i)][a(j)] cellwise, so the space has one
    0/1 indicator per orbit of the pair maps on cells.
    """
    if len(mats_a) != len(mats_b):
        raise ValueError("color count mismatch")
    orbit_of = [[-1] * n for _ in range(n)]
    orbits = []
    for i0 in range(n):
        for j0 in range(n):
            if orbit_of[i0][j0] >= 0:
                continue
            oid = len(orbits)
            cells = [(i0, j0)]
            orbit_of[i0][j0] = oid
            queue = deque(cells)
            while queue:
                i, j = queue.popleft()
                for a, b in zip(mats_a, mats_b):
                    i2, j2 = int(b.images[i]), int(a.images[j])
                    if orbit_of[i2][j2] < 0:
                        orbit_of[i2][j2] = oid
                        cells.append((i2, j2))
                        queue.append((i2, j2))
            orbits.append(cells)
    basis = []
    for cells in orbits:
        m = [[0] * n for _ in range(n)]
        for i, j in cells:
            m[i][j] = 1
        basis.append(tuple(tuple(row) for row in m))
    return basis


def _int_det(rows):
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for s in range(k + 1, n):
                if m[s][k] != 0:
                    m[k], m[s] = m[s], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _combine(basis, coeffs, n):
    out = [[0] * n for _ in range(n)]
    for c, mat in zip(coeffs, basis):
        if c == 0:
            continue
        for i in range(n):
            row = mat[i]
            oi = out[i]
            for j in range(n):
                if row[j]:
                    oi[j] += c
    return out


def _characters_match(A: InvolutionSystem, B: InvolutionSystem, cap) -> bool | None:
    """Whether the two actions have equal permutation characters.

    Builds the isomorphism generated by matching colors over the closure of
    the first gluing group; returns None when the closure exceeds the cap
    (undecided), False on any inconsistency or fixed-count mismatch.
    """
    n = A.n_tiles
    ident = Permutation.identity(n)
    mapping = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            img = mapping[w.key()]
            for a, b in zip(A.perms, B.perms):
                w2 = w * a
                img2 = img * b
                known = mapping.get(w2.key())
                if known is None:
                    if len(mapping) > cap:
                        return None
                    mapping[w2.key()] = img2
                    nxt.append(w2)
                elif known != img2:
                    return False
        frontier = nxt
    images = {}
    for wkey, img in mapping.items():
        if img.key() in images:
            return False
        images[img.key()] = wkey
    for wkey, img in mapping.items():
        w_fix = sum(1 for x, y in enumerate(np.frombuffer(wkey, dtype=">i4")) if x == y)
        if w_fix != img.fixed_point_count():
            return False
    return True


def find_transplantation(A: InvolutionSystem, B: InvolutionSystem,
                         coeff_bound: int = 3, combo_cap: int = 100_000):
    """Solve T*M = N*T exactly over the rationals.

    Returns None when the solution space is zero, otherwise a
    TransplantationSolution.  The invertibility search tries basis vectors,
    then small integer combinations in a fixed order; when the search is
    exhausted the certificate distinguishes a proved character mismatch from
    a capped search.
    """
    if A.n_tiles != B.n_tiles or A.r != B.r:
        raise ValueError("dimension mismatch between systems")
    n = A.n_tiles
    basis = intertwiner_basis(A.perms, B.perms, n)
    if not basis:
        return None
    perm_sol = detect_isometry(A, B)
    # single basis vectors first
    for k, mat in enumerate(basis):
        if _int_det(mat) != 0:
            T = _as_fraction_matrix(mat)
            assert verify_intertwiner(T, A, B)
            return TransplantationSolution(
                T=T,
                solution_basis=basis,
                invertible=True,
                permutation_solution=perm_sol,
                certificate=f"basis[{k}]",
            )
    d = len(basis)
    tried = 0
    coeff_values = list(range(-coeff_bound, coeff_bound + 1))
    for coeffs in itertools.product(coeff_values, repeat=d):
        if all(c == 0 for c in coeffs):
            continue
        tried += 1
        if tried > combo_cap:
            break
        cand = _combine(basis, coeffs, n)
        if _int_det(cand) != 0:
            T = _as_fraction_matrix(cand)
            assert verify_intertwiner(T, A, B)
            return TransplantationSolution(
                T=T,
                solution_basis=basis,
                invertible=True,
                permutation_solution=perm_sol,
                certificate=f"combination{coeffs}",
            )
    match = _characters_match(A, B, cap=10**6)
    if match is False:
        certificate = "proved-singular-by-character-mismatch"
    else:
        certificate = f"search-exhausted(coeffs in [-{coeff_bound},{coeff_bound}], cap {combo_cap})"
    return TransplantationSolution(
        T=_as_fraction_matrix(basis[0]),
        solution_basis=basis,
        invertible=False,
        permutation_solution=perm_sol,
        certificate=certificate,
    )


def _as_fraction_matrix(mat):
    return tuple(tuple(Fraction(x) for x in row) for row in mat)


def verify_intertwiner(T, A: InvolutionSystem, B: InvolutionSystem) -> bool:
    """Exact check of T*M == N*T for every color."""
    n = A.n_tiles
    for a, b in zip(A.perms, B.perms):
        for i in range(n):
            for j in range(n):
                # (T*M)[i][j] = T[i][a(j)] ; (N*T)[i][j] = T[b(i)][j]
                if T[i][int(a.images[j])] != T[int(b.images[i])][j]:
                    return False
    return True


def detect_isometry(A: InvolutionSystem, B: InvolutionSystem):
    """Color-preserving isomorphism of the gluing graphs, or None.

    Equivalent to a permutation-matrix intertwiner.  Propagation from a root
    is forced (one neighbor per color), so each candidate image of tile 0 is
    checked directly; the least consistent image wins.
    """
    if A.n_tiles != B.n_tiles or A.r != B.r:
        raise ValueError("dimension mismatch between systems")
    n = A.n_tiles
    for c in range(n):
        mapping = {0: c}
        queue = deque([0])
        ok = True
        while queue and ok:
            i = queue.popleft()
            j = mapping[i]
            for pa, pb in zip(A.perms, B.perms):
                i2, j2 = int(pa.images[i]), int(pb.images[j])
                if i2 in mapping:
                    if mapping[i2] != j2:
                        ok = False
                        break
                else:
                    mapping[i2] = j2
                    queue.append(i2)
        if ok and len(mapping) == n and len(set(mapping.values())) == n:
            return Permutation([mapping[i] for i in range(n)])
    return None


def involutions_of(G: PermGroup, bound=None):
    """Order-2 elements of G, sorted by image key."""
    return sorted(p for p in G.elements(bound) if p.order() == 2)


def okada_shudo_scan(t, n_max: int, r: int = 3, bound=None):
    """Transplantable nonisometric tree-system pairs from one triple.

    Enumerates r-subsets of involutions of G that generate G, images them
    under both coset actions, and keeps pairs of tree systems with an
    invertible non-permutation intertwiner, deduplicated up to independent
    tile relabelings of the two sides.
    """
    if not 3 <= r:
        raise ValueError("need at least 3 sides")
    if n_max > OKADA_SHUDO_NMAX:
        raise BoundExceeded(f"n_max {n_max} exceeds census bound {OKADA_SHUDO_NMAX}")
    G, H, K = t.G, t.H, t.K
    table_h = left_cosets(G, H)
    table_k = left_cosets(G, K)
    if len(table_h) != len(table_k):
        raise ValueError("coset spaces have different sizes")
    if len(table_h) > n_max:
        raise BoundExceeded(f"index {len(table_h)} exceeds n_max {n_max}")
    invs = involutions_of(G, bound)
    results = []
    seen = set()
    for combo in itertools.combinations(invs, r):
        sub = PermGroup(G.degree, combo)
        if sub.order != G.order:
            continue
        imgs_h = tuple(table_h.action_of(g) for g in combo)
        imgs_k = tuple(table_k.action_of(g) for g in combo)
        try:
            sys_h = InvolutionSystem(len(table_h), r, imgs_h)
            sys_k = InvolutionSystem(len(table_k), r, imgs_k)
        except ValueError:
            continue
        if not (is_tree(sys_h) and is_tree(sys_k)):
            continue
        sol = find_transplantation(sys_h, sys_k)
        if sol is None or not sol.invertible or sol.permutation_solution is not None:
            continue
        key = (sys_h.canonical_key(), sys_k.canonical_key())
        if key in seen:
            continue
        seen.add(key)
        results.append((sys_h, sys_k))
    results.sort(key=lambda pair: (pair[0].canonical_key(), pair[1].canonical_key()))
    return results


_SIDE_RE = re.compile(r"side\s+(\d+)\s*:(.*)$")


def format_involution_system(sys: InvolutionSystem) -> str:
    """Canonical text form: 1-based tiles, pairs sorted, boundary sorted."""
    lines = [f"tiles: {sys.n_tiles}", f"sides: {sys.r}"]
    for mu, p in enumerate(sys.perms):
        pairs = []
        boundary = []
        for i in range(sys.n_tiles):
            j = int(p.images[i])
            if j == i:
                boundary.append(i + 1)
            elif i < j:
                pairs.append((i + 1, j + 1))
        pair_txt = " ".join(f"({a} {b})" for a, b in pairs)
        bnd_txt = " ".join(str(x) for x in boundary)
        lines.append(f"side {mu + 1}: {pair_txt} ; boundary: {bnd_txt}".rstrip())
    return "\n".join(lines) + "\n"


def parse_involution_system(text: str) -> InvolutionSystem:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("tiles:") or not lines[1].startswith("sides:"):
        raise SpecFormatError("involution system must begin with tiles: and sides:")
    try:
        n = int(lines[0].split(":", 1)[1])
        r = int(lines[1].split(":", 1)[1])
    except ValueError as exc:
        raise SpecFormatError(f"bad tile or side count: {exc}") from exc
    perms = [None] * r
    for ln in lines[2:]:
        m = _SIDE_RE.match(ln)
        if not m:
            raise SpecFormatError(f"bad side line: {ln!r}")
        mu = int(m.group(1)) - 1
        if not 0 <= mu < r:
            raise SpecFormatError(f"side index out of range: {ln!r}")
        body = m.group(2)
        if ";" in body:
            pair_part, bnd_part = body.split(";", 1)
            if not bnd_part.strip().startswith("boundary:"):
                raise SpecFormatError(f"expected boundary: in {ln!r}")
            bnd_part = bnd_part.strip()[len("boundary:"):]
        else:
            pair_part, bnd_part = body, ""
        images = list(range(n))
        touched = set()
        for pm in re.finditer(r"\((\d+)\s+(\d+)\)", pair_part):
            a, b = int(pm.group(1)) - 1, int(pm.group(2)) - 1
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise SpecFormatError(f"bad gluing pair in {ln!r}")
            if a in touched or b in touched:
                raise SpecFormatError(f"tile repeated on side {mu + 1}")
            images[a], images[b] = b, a
            touched |= {a, b}
        boundary = [int(x) - 1 for x in bnd_part.split()] if bnd_part.strip() else []
        for x in boundary:
            if not 0 <= x < n or x in touched:
                raise SpecFormatError(f"bad boundary tile on side {mu + 1}")
            touched.add(x)
        if touched != set(range(n)):
            raise SpecFormatError(f"side {mu + 1} does not account for every tile")
        perms[mu] = Permutation(images)
    if any(p is None for p in perms):
        raise SpecFormatError("missing side line")
    try:
        return InvolutionSystem(n, r, tuple(perms))
    except ValueError as exc:
        raise SpecFormatError(str(exc)) from exc
