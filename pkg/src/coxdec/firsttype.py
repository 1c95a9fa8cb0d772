"""First-type decompositions by inductive gluing.

Starting from the fundamental simplex ``F``, two already generated simplices
are glued along congruent facets whenever the union is again a simplex whose
tiles are chambers of the reflection group of ``F``.  Each generated simplex
keeps its realization and its tiles in one fixed frame (the realization of
``F``), so gluing, simplicity and type classification are all geometric
computations on the same coordinates.

The union of ``a`` and ``b`` glued along facets ``i`` and ``j`` with facet
identification ``sigma`` is a simplex exactly when, around the glued facet,
``n - 1`` ridge angle sums are ``pi`` (those facets merge) and one is
smaller than ``pi``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .catalog import CatalogEntry, entry, lookup
from .diagram import DecoratedSimplex, automorphisms, canonical_key
from .geometry import (
    Kind,
    Realization,
    classify,
    gram_of,
    mink,
    mink_gram,
    realize,
    reflection_matrix,
    vertices_from_normals,
)
from .verifier import (
    POINT_TOL,
    Decomposition,
    _PointSet,
    _j,
    fundamental_angles,
    tile_mirrors,
)

__all__ = [
    "GlueRecord",
    "GeneratedSimplex",
    "Fundamental",
    "Enumeration",
    "EnumerationError",
    "glue",
    "enumerate_decompositions",
    "is_simple",
    "mark_simple",
    "as_decomposition",
    "superpose",
    "classify_type",
    "DEFAULT_LIMITS",
]

log = logging.getLogger(__name__)

DEFAULT_LIMITS = {4: {"max_N": 200, "max_s": 10}}
_ONE = Fraction(1)


class EnumerationError(RuntimeError):
    """Inconsistent bookkeeping, such as one shape generated with two tile counts."""


@dataclass(frozen=True)
class GlueRecord:
    left: int
    right: int
    i: int
    j: int
    N: int
    s: int

    @property
    def tuple(self) -> tuple[int, int, int, int]:
        return (self.left, self.right, self.i, self.j)


@dataclass(eq=False)
class GeneratedSimplex:
    """A simplex tiled by ``N`` copies of ``F``, in the frame of ``F``.

    ``normals`` are the outward facet normals (columns, indexed like
    ``diagram``); ``tiles`` are Lorentz matrices ``g`` with tile ``g(F)``.
    """

    diagram: DecoratedSimplex
    N: int
    s: int
    normals: np.ndarray
    tiles: list[np.ndarray]
    witness: GlueRecord | None = None
    records: list[GlueRecord] = field(default_factory=list)
    simple: bool | None = None
    index: int = -1

    def __post_init__(self):
        verts, ideal = vertices_from_normals(self.normals)
        self.vertices = verts
        self.ideal = ideal
        self.key = canonical_key(self.diagram)
        self._facet_cache: dict[int, tuple] = {}

    @property
    def realization(self) -> Realization:
        return Realization(self.normals, self.vertices, self.ideal)

    @property
    def name(self) -> str | None:
        return lookup(self.diagram)

    @property
    def is_coxeter(self) -> bool:
        return self.diagram.is_coxeter

    def facet_data(self, i: int):
        """``(others, facet Gram, projected normals, signature)`` of facet ``i``."""
        if i not in self._facet_cache:
            size = self.diagram.size
            others = [r for r in range(size) if r != i]
            u = self.normals[:, i]
            q = np.empty((size, size - 1))
            for col, r in enumerate(others):
                v = self.normals[:, r]
                c = float(mink(v, u))
                q[:, col] = (v - c * u) / np.sqrt(1.0 - c * c)
            g = mink_gram(q)
            sig = tuple(np.round(np.sort(g[np.triu_indices(size - 1, 1)]), 7))
            self._facet_cache[i] = (others, g, q, sig)
        return self._facet_cache[i]

    def to_dict(self) -> dict:
        from .diagram import serialize_diagram

        w = self.witness
        return {
            "index": self.index,
            "diagram": serialize_diagram(self.diagram),
            "catalog": self.name,
            "coxeter": self.is_coxeter,
            "N": self.N,
            "s": self.s,
            "witness": None if w is None else list(w.tuple),
            "glue_records": len(self.records),
            "simple": self.simple,
        }


class Fundamental:
    """Realization of F with its chamber tests and symmetries."""

    def __init__(self, F: CatalogEntry | DecoratedSimplex):
        diagram = F.diagram if isinstance(F, CatalogEntry) else F
        self.entry = F if isinstance(F, CatalogEntry) else None
        self.diagram = diagram
        self.real = realize(gram_of(diagram))
        self.size = diagram.size
        self.kind = classify(gram_of(diagram)).kind
        x0 = self.real.vertices.sum(axis=1)
        self.x0 = x0 / np.sqrt(-float(mink(x0, x0)))
        self.reflections = [reflection_matrix(self.real.normals[:, k]) for k in range(self.size)]
        inv = np.linalg.inv(self.real.normals)
        self.symmetries = [
            self.real.normals[:, list(p)] @ inv for p in automorphisms(diagram)
        ]

    def root(self) -> GeneratedSimplex:
        return GeneratedSimplex(self.diagram, 1, 0, self.real.normals.copy(), [np.eye(self.size)])

    def chamber_word(self, g: np.ndarray, max_steps: int = 10_000) -> np.ndarray | None:
        """``w`` in the reflection group with ``w g (F) = F``, or ``None`` if ``g(F)`` is no chamber."""
        y = g @ self.x0
        w = np.eye(self.size)
        normals = self.real.normals
        jn = _j(self.size) @ normals
        for _ in range(max_steps):
            p = y @ jn
            k = int(np.argmax(p))
            if p[k] <= 1e-9:
                break
            y = self.reflections[k] @ y
            w = self.reflections[k] @ w
        else:
            return None
        h = w @ g @ normals
        # h must permute the normals of F
        used = set()
        for c in range(self.size):
            dist = np.max(np.abs(normals - h[:, [c]]), axis=0)
            k = int(np.argmin(dist))
            if dist[k] > 1e-6 * max(1.0, np.max(np.abs(normals[:, k]))) or k in used:
                return None
            used.add(k)
        return w


# -- gluing ------------------------------------------------------------------------------


def _identifications(a: GeneratedSimplex, i: int, b: GeneratedSimplex, j: int, tol: float = 1e-7):
    """Facet bijections ``sigma`` with matching facet Gram and admissible ridge sums.

    Yields ``(sigma, r0)`` where ``sigma`` maps each facet ``r != i`` of ``a``
    to a facet of ``b`` and ``r0`` is the unique facet with ridge sum ``< pi``.
    """
    oa, ga, _, _ = a.facet_data(i)
    ob, gb, _, _ = b.facet_data(j)
    m = len(oa)
    sums = [[a.diagram.angle(i, oa[p]) + b.diagram.angle(j, ob[q]) for q in range(m)] for p in range(m)]
    image = [-1] * m
    used = [False] * m

    def rec(p, small):
        if p == m:
            if small is not None:
                yield dict(zip(oa, (ob[q] for q in image))), oa[small]
            return
        for q in range(m):
            if used[q] or abs(ga[p, p] - gb[q, q]) > tol:
                continue
            s = sums[p][q]
            if s > _ONE:
                continue
            nxt = small
            if s < _ONE:
                if small is not None:
                    continue
                nxt = p
            if any(abs(ga[p, pp] - gb[q, image[pp]]) > tol for pp in range(p)):
                continue
            used[q] = True
            image[p] = q
            yield from rec(p + 1, nxt)
            used[q] = False
            image[p] = -1

    yield from rec(0, None)


def glue(fund: Fundamental, a: GeneratedSimplex, i: int, b: GeneratedSimplex, j: int,
         s: int | None = None) -> list[GeneratedSimplex]:
    """All simplices obtained by gluing facet ``j`` of ``b`` onto facet ``i`` of ``a``.

    One result per admissible facet identification (several may give the
    same shape).  Results carry a provisional glue record with ``left`` and
    ``right`` set to the indices of ``a`` and ``b``.
    """
    oa, _, qa, _ = a.facet_data(i)
    out = []
    size = a.diagram.size
    s = 1 + max(a.s, b.s) if s is None else s
    for sigma, r0 in _identifications(a, i, b, j):
        _, _, qb_all, _ = b.facet_data(j)
        ob = [r for r in range(size) if r != j]
        qb = np.column_stack([qb_all[:, ob.index(sigma[r])] for r in oa])
        A_a = np.column_stack([a.normals[:, i], qa])
        A_b = np.column_stack([b.normals[:, j], qb])
        g = reflection_matrix(a.normals[:, i]) @ A_a @ np.linalg.inv(A_b)
        if np.max(np.abs(g.T @ _j(size) @ g - _j(size))) > 1e-6:
            continue
        if fund.chamber_word(g) is None:
            continue
        merged = [r for r in oa if r != r0]
        t0 = sigma[r0]
        facets_a = oa  # merged facets in order, with r0 at its position
        angles = [[Fraction(0)] * size for _ in range(size)]
        ok = True
        last = size - 1
        for x, r in enumerate(facets_a):
            for y in range(x + 1, len(facets_a)):
                rr = facets_a[y]
                if r in merged and rr in merged:
                    val = a.diagram.angle(r, rr)
                    if val != b.diagram.angle(sigma[r], sigma[rr]):
                        ok = False
                else:
                    val = a.diagram.angle(r, rr)
                angles[x][y] = angles[y][x] = val
            if r == r0:
                val = a.diagram.angle(i, r0) + b.diagram.angle(j, t0)
            else:
                val = b.diagram.angle(t0, sigma[r])
            angles[x][last] = angles[last][x] = val
        if not ok:
            raise EnumerationError("merged facets disagree on their dihedral angle")
        normals = np.column_stack([a.normals[:, r] for r in facets_a] + [g @ b.normals[:, t0]])
        diagram = DecoratedSimplex.from_matrix(angles)
        kind = classify(gram_of(diagram))
        if kind.kind is not fund.kind:
            continue
        if np.max(np.abs(mink_gram(normals) - np.asarray(gram_of(diagram)))) > 1e-6:
            continue
        tiles = list(a.tiles) + [g @ t for t in b.tiles]
        rec = GlueRecord(a.index, b.index, i, j, a.N + b.N, s)
        out.append(GeneratedSimplex(diagram, a.N + b.N, s, normals, tiles, rec, [rec]))
    return out


# -- enumeration ---------------------------------------------------------------------------


@dataclass
class Enumeration:
    fundamental: Fundamental
    simplices: list[GeneratedSimplex]
    complete: bool
    limits: dict

    def by_key(self) -> dict[tuple, GeneratedSimplex]:
        return {g.key: g for g in self.simplices}

    def find(self, diagram: DecoratedSimplex) -> GeneratedSimplex | None:
        return self.by_key().get(canonical_key(diagram))

    def coxeter_targets(self) -> list[GeneratedSimplex]:
        return [g for g in self.simplices if g.N > 1 and g.is_coxeter]


def _pair_tasks(universe, frontier, max_N, index):
    """Glue tasks ``(a, i, b, j)`` with at least one side from ``frontier``."""
    fset = set(frontier)
    tasks = []
    skipped = 0
    for a in sorted(frontier):
        A = universe[a]
        for i in range(A.diagram.size):
            sig = A.facet_data(i)[3]
            for b, j in index.get(sig, ()):
                if b in fset and (b, j) < (a, i):
                    continue  # the symmetric task is generated from b
                if max_N is not None and A.N + universe[b].N > max_N:
                    skipped += 1
                    continue
                tasks.append((a, i, b, j))
    return tasks, skipped


def enumerate_decompositions(F: CatalogEntry | DecoratedSimplex | str, max_N: int | None = None,
                             max_s: int | None = None, workers: int = 1,
                             limits: dict | None = None) -> Enumeration:
    """Closure of ``{F}`` under gluing, breadth first in the gluing depth ``s``.

    Shapes are identified by canonical diagram; each keeps the first tiling
    found and every glue record that produces it.  With ``max_N`` or
    ``max_s`` given (defaults apply in dimension 4) the result is flagged
    incomplete if a limit cut off a congruent facet pair.

    Raises
    ------
    EnumerationError
        if a shape is produced with two different tile counts.
    """
    F = entry(F) if isinstance(F, str) else F
    fund = Fundamental(F)
    if limits is None and max_N is None and max_s is None:
        limits = DEFAULT_LIMITS.get(fund.diagram.dim, {})
    limits = dict(limits or {})
    if max_N is not None:
        limits["max_N"] = max_N
    if max_s is not None:
        limits["max_s"] = max_s
    max_N, max_s = limits.get("max_N"), limits.get("max_s")

    root = fund.root()
    root.index = 0
    universe = [root]
    keys = {root.key: 0}
    index: dict[tuple, list[tuple[int, int]]] = {}

    def register(idx):
        g = universe[idx]
        for i in range(g.diagram.size):
            index.setdefault(g.facet_data(i)[3], []).append((idx, i))

    register(0)
    frontier = [0]
    complete = True
    step = 0
    while frontier:
        step += 1
        if max_s is not None and step > max_s:
            complete = False
            break
        tasks, skipped = _pair_tasks(universe, frontier, max_N, index)
        if skipped:
            complete = False

        def run(task):
            a, i, b, j = task
            return glue(fund, universe[a], i, universe[b], j, step)

        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(pool.map(run, tasks))
        else:
            results = [run(t) for t in tasks]
        new = []
        for produced in results:
            for g in produced:
                known = keys.get(g.key)
                if known is not None:
                    old = universe[known]
                    if old.N != g.N:
                        raise EnumerationError(
                            f"shape generated with N = {old.N} and N = {g.N}"
                        )
                    if g.witness not in old.records:
                        old.records.append(g.witness)
                    continue
                g.index = len(universe)
                keys[g.key] = g.index
                universe.append(g)
                new.append(g.index)
        for idx in new:
            register(idx)
        log.debug("step %d: %d tasks, %d new shapes", step, len(tasks), len(new))
        frontier = new
    return Enumeration(fund, universe, complete, limits)


# -- simplicity -------------------------------------------------------------------------------


class _TileIndex:
    """Tiles of a generated simplex keyed by their incenters."""

    def __init__(self, fund: Fundamental, tiles):
        self.points = _PointSet(tol=1e-7)
        self.fund = fund
        for k, g in enumerate(tiles):
            self.points.add(self._center(g), k)

    def _center(self, g):
        y = g @ self.fund.x0
        return y / y[-1]

    def find(self, g) -> int | None:
        return self.points.get(self._center(g))


def _region_tiles(h, T: GeneratedSimplex, tiles: _TileIndex):
    found = []
    for t in T.tiles:
        k = tiles.find(h @ t)
        if k is None:
            return None
        found.append(k)
    return frozenset(found)


def _boundary_facets(normals_region, verts_region, P: GeneratedSimplex, tol=POINT_TOL):
    size = P.diagram.size
    d = P.normals.T @ _j(size) @ (verts_region / verts_region[-1])
    on = np.abs(d) <= tol
    out = []
    for k in range(size):
        rest = [x for x in range(size) if x != k]
        out.append(bool(np.any(on[:, rest].all(axis=1))))
    return out


def _coarsening(fund: Fundamental, P: GeneratedSimplex, T: GeneratedSimplex, tiles: _TileIndex) -> bool:
    """Is the tiling of ``P`` a refinement of some decomposition of ``P`` into copies of ``T``?"""
    target = P.N // T.N
    c0 = P.tiles[0]
    tried = set()
    for t in T.tiles:
        t_inv = np.linalg.inv(t)
        for sym in fund.symmetries:
            h = c0 @ sym @ t_inv
            first = _region_tiles(h, T, tiles)
            if first is None or first in tried:
                continue
            tried.add(first)
            regions = {first: h}
            queue = [h]
            used = set(first)
            ok = True
            while queue and ok:
                h = queue.pop()
                normals = h @ T.normals
                verts = h @ T.vertices
                for k, on_boundary in enumerate(_boundary_facets(normals, verts, P)):
                    if on_boundary:
                        continue
                    h2 = reflection_matrix(normals[:, k]) @ h
                    reg = _region_tiles(h2, T, tiles)
                    if reg is None:
                        ok = False
                        break
                    if reg in regions:
                        continue
                    if used & reg:
                        ok = False
                        break
                    regions[reg] = h2
                    used |= reg
                    queue.append(h2)
            if ok and len(regions) == target and len(used) == P.N:
                return True
    return False


def is_simple(d: GeneratedSimplex, universe: Enumeration | list[GeneratedSimplex],
              fund: Fundamental | None = None) -> bool:
    """No intermediate shape ``T`` of the universe coarsens the tiling of ``d``.

    ``T`` ranges over generated Coxeter simplices other than ``F`` and ``d``
    whose tile count divides ``N`` (the coarser decomposition is again a
    Coxeter decomposition, so its tiles have Coxeter angles); a coarsening is found by placing ``T`` over the
    first tile of ``d`` in every way and flooding by reflections across the
    interior facets of the copies.
    """
    if isinstance(universe, Enumeration):
        fund = fund or universe.fundamental
        universe = universe.simplices
    if fund is None:
        raise ValueError("a Fundamental is needed with a plain list universe")
    if d.N <= 2:
        return True
    tiles = _TileIndex(fund, d.tiles)
    for T in universe:
        if T.N <= 1 or T.N >= d.N or d.N % T.N or T.key == d.key or not T.is_coxeter:
            continue
        if _coarsening(fund, d, T, tiles):
            return False
    return True


def mark_simple(enum: Enumeration, only=None) -> None:
    """Fill in ``simple`` for the generated shapes (or those in ``only``)."""
    for g in enum.simplices if only is None else only:
        if g.N > 1:
            g.simple = is_simple(g, enum)


# -- decomposition type -----------------------------------------------------------------------


def as_decomposition(g: GeneratedSimplex, fund: Fundamental) -> Decomposition:
    P = g.realization
    return Decomposition(fund.diagram, g.diagram, g.N, list(g.tiles), fund.real, P, glue=g.witness)


def _split_first(normals: np.ndarray, tile_verts: list[np.ndarray], members: frozenset,
                 mirrors: list[np.ndarray], memo: dict, tol: float = POINT_TOL) -> bool:
    if len(members) == 1:
        return True
    key = members
    if key in memo:
        return memo[key]
    size = normals.shape[0]
    verts, _ = vertices_from_normals(normals)
    kv = verts / verts[-1]
    j = _j(size)
    result = False
    for m in mirrors:
        m = m / np.linalg.norm(m)
        p = m @ j @ kv
        zero = np.abs(p) <= tol
        if zero.sum() != size - 2:
            continue
        a_b = np.flatnonzero(~zero)
        if p[a_b[0]] * p[a_b[1]] >= 0:
            continue
        sides = {a_b[0]: [], a_b[1]: []}
        cut = False
        for k in members:
            pk = m @ j @ tile_verts[k]
            if np.all(pk <= tol):
                side = a_b[0] if p[a_b[0]] < 0 else a_b[1]
            elif np.all(pk >= -tol):
                side = a_b[0] if p[a_b[0]] > 0 else a_b[1]
            else:
                cut = True
                break
            sides[side].append(k)
        if cut or not sides[a_b[0]] or not sides[a_b[1]]:
            continue
        halves_ok = True
        for keep in a_b:
            half = normals.copy()
            # the mirror replaces the facet opposite the kept vertex
            sign = 1.0 if p[keep] < 0 else -1.0
            half[:, keep] = sign * m * (1.0 / np.sqrt(float(mink(m, m))))
            if not _split_first(half, tile_verts, frozenset(sides[keep]), mirrors, memo, tol):
                halves_ok = False
                break
        if halves_ok:
            result = True
            break
    memo[key] = result
    return result


def classify_type(d: Decomposition) -> str:
    """``"second"``, ``"first"`` or ``"third"`` for a materialized decomposition.

    Second: every ridge of ``P`` is off the mirrors.  First: ``P`` splits
    along a mirror through ``n - 1`` of its vertices into two simplices
    that are again of first type (down to single tiles).  Third otherwise.
    """
    mirrors = d.mirrors or d.compute_mirrors()
    flags = fundamental_angles(mirrors, d.p_real)
    if all(flags.values()):
        return "second"
    tile_verts = d.tile_vertices()
    if _split_first(d.p_real.normals, tile_verts, frozenset(range(len(d.tiles))), mirrors, {}):
        return "first"
    return "third"


def superpose(outer: Decomposition, inner: Decomposition) -> Decomposition:
    """Refine every tile of ``outer`` by ``inner``, a decomposition of ``outer.F``.

    The result decomposes ``outer.P`` with fundamental ``inner.F`` and
    ``outer.N * inner.N`` tiles.
    """
    from .verifier import _link_isomorphisms

    isos = _link_isomorphisms(inner.P, outer.F)
    if not isos:
        raise ValueError("the inner decomposition does not tile the outer fundamental simplex")
    perm = list(isos[0])  # outer.F.angle(a, b) == inner.P.angle(perm[a], perm[b])
    k = outer.f_real.normals @ np.linalg.inv(inner.p_real.normals[:, perm])
    tiles = [g @ k @ t for g in outer.tiles for t in inner.tiles]
    return Decomposition(inner.F, outer.P, len(tiles), tiles, inner.f_real, outer.p_real)
