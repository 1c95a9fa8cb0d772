"""Constructive verification of Coxeter decompositions by reflection orbits.

A tile is an isometric copy ``g(F)`` of the fundamental simplex, stored as
the Lorentz matrix ``g`` acting on the realization of ``F``.  Starting from a
seed tile placed at a vertex of ``P``, tiles are reflected across every facet
that does not lie on the boundary of ``P``.  In a genuine decomposition the
orbit closes up inside ``P`` with ``Vol(P) / Vol(F)`` tiles; a reflected tile
poking out of ``P`` refutes the placement.

All containment and incidence tests are phrased through the matrix
``D[i, j] = <u_i(P), w_j>`` of facet normals of ``P`` against tile vertices
``w_j`` scaled to time coordinate 1 (the Klein model), which treats finite
and ideal vertices alike.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .catalog import CatalogEntry, entry
from .diagram import DecoratedSimplex, automorphisms, canonical_form, isomorphic, remove_node
from .geometry import (
    Realization,
    gram_of,
    mink,
    mink_gram,
    realize,
    reflection_matrix,
)

__all__ = [
    "Tile",
    "TilingResult",
    "Decomposition",
    "VerificationError",
    "place_seed",
    "enumerate_tiles",
    "verify",
    "fundamental_angles",
    "tile_mirrors",
    "NormalCertificate",
    "check_normal_combination",
    "alternate_numbering_refutation",
    "LatticeRefutation",
    "realization_json",
]

POINT_TOL = 1e-6  # Klein-model incidence tolerance
KEY_GRID = 1e-6
DEFAULT_LIMIT = 100_000
DEFAULT_DEPTH = 64

_J_CACHE: dict[int, np.ndarray] = {}


def _j(dim: int) -> np.ndarray:
    if dim not in _J_CACHE:
        j = np.ones(dim)
        j[-1] = -1.0
        _J_CACHE[dim] = np.diag(j)
    return _J_CACHE[dim]


class VerificationError(RuntimeError):
    """A reflected tile is inconsistent with a decomposition of ``P``."""


# -- keyed point sets ----------------------------------------------------------


class _PointSet:
    """Points of a bounded region keyed on a grid, robust to cell boundaries."""

    def __init__(self, grid: float = KEY_GRID, tol: float = 1e-7):
        self.grid = grid
        self.tol = tol
        self._cells: dict[tuple, list[tuple[np.ndarray, object]]] = {}

    def _keys(self, x: np.ndarray):
        scaled = x / self.grid
        base = np.floor(scaled).astype(np.int64)
        frac = scaled - base
        choices = []
        for b, f in zip(base, frac):
            opts = [int(b)]
            if f < self.tol / self.grid:
                opts.append(int(b) - 1)
            elif f > 1.0 - self.tol / self.grid:
                opts.append(int(b) + 1)
            choices.append(opts)
        return product(*choices)

    def get(self, x: np.ndarray):
        for key in self._keys(x):
            for y, value in self._cells.get(key, ()):
                if np.max(np.abs(x - y)) <= self.tol:
                    return value
        return None

    def add(self, x: np.ndarray, value) -> bool:
        """Insert ``x`` unless an equal point is present; return whether inserted."""
        if self.get(x) is not None:
            return False
        key = tuple(int(b) for b in np.floor(x / self.grid))
        self._cells.setdefault(key, []).append((x.copy(), value))
        return True

    def __len__(self) -> int:
        return sum(len(v) for v in self._cells.values())


def _klein(w: np.ndarray) -> np.ndarray:
    return w / w[-1]


def _hyperplane_key(u: np.ndarray) -> np.ndarray:
    """Normal direction up to sign, as a point on the Euclidean unit sphere."""
    v = u / np.linalg.norm(u)
    nz = np.flatnonzero(np.abs(v) > 1e-9)
    if nz.size and v[nz[0]] < 0:
        v = -v
    return v


# -- data model ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Tile:
    """Image ``g(F)`` of the fundamental simplex."""

    isometry: np.ndarray
    normals: np.ndarray
    vertices: np.ndarray
    key: tuple

    @classmethod
    def from_isometry(cls, g: np.ndarray, F: Realization) -> "Tile":
        normals = g @ F.normals
        vertices = g @ F.vertices
        incenter = vertices.sum(axis=1)
        key = tuple(np.round(_klein(incenter) / KEY_GRID).astype(np.int64))
        return cls(g, normals, vertices, key)

    def klein_vertices(self) -> np.ndarray:
        return self.vertices / self.vertices[-1]

    def incenter(self) -> np.ndarray:
        return _klein(self.vertices.sum(axis=1))


@dataclass
class TilingResult:
    """Outcome of a reflection-orbit enumeration inside ``P``."""

    N: int
    tiles: list[Tile]
    incidences: dict[int, int]
    mirrors: list[np.ndarray]
    complete: bool
    depth: int
    ideal: tuple[int, ...] = ()
    fundamental: dict[tuple[int, int], bool] = field(default_factory=dict)

    @property
    def ideal_incidences(self) -> dict[int, int]:
        return {v: self.incidences[v] for v in self.ideal}

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "complete": self.complete,
            "depth": self.depth,
            "incidences": {str(v): c for v, c in self.incidences.items()},
            "ideal_incidences": {str(v): c for v, c in self.ideal_incidences.items()},
            "mirrors": len(self.mirrors),
            "fundamental_angles": {f"{i}-{j}": flag for (i, j), flag in self.fundamental.items()},
            "all_fundamental": all(self.fundamental.values()) if self.fundamental else None,
        }


@dataclass
class Decomposition:
    """Fundamental simplex ``F``, target ``P``, tile count and provenance.

    ``tiles`` holds Lorentz matrices ``g`` with tile ``g(F)`` where ``F`` is
    realized as ``f_real``; ``p_real`` realizes ``P`` in the same frame.
    ``glue`` optionally carries a gluing witness.
    """

    F: DecoratedSimplex
    P: DecoratedSimplex
    N: int
    tiles: list[np.ndarray]
    f_real: Realization
    p_real: Realization
    mirrors: list[np.ndarray] = field(default_factory=list)
    glue: object = None
    tiling: TilingResult | None = None

    def tile_vertices(self) -> list[np.ndarray]:
        """Tile vertices in the Klein model, one ``(n+1) x (n+1)`` array per tile."""
        out = []
        for g in self.tiles:
            w = g @ self.f_real.vertices
            out.append(w / w[-1])
        return out

    def compute_mirrors(self) -> list[np.ndarray]:
        """Tile facet hyperplanes that are not facets of ``P`` (normals up to sign)."""
        return tile_mirrors(self.tiles, self.f_real, self.p_real)


# -- seeds -------------------------------------------------------------------------


def _link_isomorphisms(p: DecoratedSimplex, f: DecoratedSimplex):
    """All bijections ``phi`` with ``f.angle(a, b) == p.angle(phi[a], phi[b])``."""
    if not isomorphic(p, f):
        return []
    cp, perm_p = canonical_form(p)
    cf, perm_f = canonical_form(f)
    # cp[a][b] = p[perm_p[a]][perm_p[b]], likewise for f; cp == cf
    base = {perm_f[a]: perm_p[a] for a in range(f.size)}
    out = []
    for aut in automorphisms(p):
        # aut maps p to itself: p[aut[a]][aut[b]] = p[a][b]
        out.append(tuple(aut[base[a]] for a in range(f.size)))
    return sorted(set(out))


def _is_lorentz(g: np.ndarray, tol: float = 1e-6) -> bool:
    j = _j(g.shape[0])
    return bool(np.max(np.abs(g.T @ j @ g - j)) < tol)


def _seed_isometry(Fr: Realization, Pr: Realization, v: int, w: int, phi: dict[int, int]):
    """Lorentz map sending facet ``k != w`` of F to facet ``phi[k]`` of P."""
    size = Fr.size
    others = [k for k in range(size) if k != w]
    gF = mink_gram(Fr.normals)
    targets = np.column_stack([Pr.normals[:, phi[k]] for k in others])
    rhs = gF[w, others]
    # <alpha, t_k> = G_F(w, k): alpha = alpha0 + t x_v with x_v orthogonal to every t_k
    j = _j(size)
    a = targets.T @ j
    alpha0 = np.linalg.lstsq(a, rhs, rcond=None)[0]
    x = Pr.vertices[:, v]
    aa = float(mink(alpha0, alpha0))
    ax = float(mink(alpha0, x))
    xx = float(mink(x, x))
    if abs(xx) < 1e-9:
        roots = [(1.0 - aa) / (2.0 * ax)] if abs(ax) > 1e-12 else []
    else:
        disc = ax * ax - xx * (aa - 1.0)
        if disc < -1e-9:
            return None
        disc = math.sqrt(max(disc, 0.0))
        roots = [(-ax + disc) / xx, (-ax - disc) / xx]
    for t in roots:
        alpha = alpha0 + t * x
        if float(mink(x, alpha)) >= 0:
            continue
        image = np.empty_like(Fr.normals)
        for k in others:
            image[:, k] = Pr.normals[:, phi[k]]
        image[:, w] = alpha
        g = image @ np.linalg.inv(Fr.normals)
        if _is_lorentz(g):
            return g
    return None


def place_seed(F: CatalogEntry, P: CatalogEntry, Fr: Realization | None = None,
               Pr: Realization | None = None) -> list[tuple[int, int, Tile]]:
    """Tiles of ``F`` placed at a vertex of ``P`` with a congruent link.

    Returns ``(v, w, tile)`` triples: the vertex ``w`` of F sits at the
    vertex ``v`` of P and the facets of F through ``w`` lie on the facets of
    P through ``v``.  Every alignment allowed by the link symmetries is
    listed.
    """
    Fr = Fr or realize(gram_of(F.diagram))
    Pr = Pr or realize(gram_of(P.diagram))
    out = []
    for v in range(P.diagram.size):
        pv = remove_node(P.diagram, v)
        p_nodes = [k for k in range(P.diagram.size) if k != v]
        for w in range(F.diagram.size):
            fw = remove_node(F.diagram, w)
            f_nodes = [k for k in range(F.diagram.size) if k != w]
            for iso in _link_isomorphisms(pv, fw):
                phi = {f_nodes[a]: p_nodes[iso[a]] for a in range(len(f_nodes))}
                g = _seed_isometry(Fr, Pr, v, w, phi)
                if g is not None:
                    out.append((v, w, Tile.from_isometry(g, Fr)))
    return out


# -- orbit enumeration ----------------------------------------------------------------


def _incidence_matrix(tile: Tile, Pr: Realization) -> np.ndarray:
    """``D[i, j] = <u_i(P), w_j>`` with tile vertices in the Klein model."""
    j = _j(Pr.size)
    return Pr.normals.T @ j @ tile.klein_vertices()


def enumerate_tiles(seed: Tile, F: Realization, P: Realization, limit: int = DEFAULT_LIMIT,
                    max_depth: int = DEFAULT_DEPTH, tol: float = POINT_TOL) -> TilingResult:
    """Breadth-first reflection closure of ``seed`` inside ``P``.

    Raises
    ------
    VerificationError
        if the seed or a reflected tile is not contained in ``P``.
    """
    size = P.size
    seen = _PointSet(tol=1e-7)
    mirrors = _PointSet(tol=1e-7)
    mirror_list: list[np.ndarray] = []
    incidences = {v: 0 for v in range(size)}
    tiles: list[Tile] = []
    queue: deque[tuple[Tile, int]] = deque()

    def admit(tile: Tile, depth: int) -> None:
        d = _incidence_matrix(tile, P)
        if d.max() > tol:
            raise VerificationError(
                f"tile at depth {depth} leaves P (max facet excess {d.max():.3g})"
            )
        on = np.abs(d) <= tol  # on[i, j]: tile vertex j on P facet i
        for v in range(size):
            rows = [i for i in range(size) if i != v]
            if np.any(on[rows].all(axis=0)):
                incidences[v] += 1
        tiles.append(tile)
        queue.append((tile, depth))

    seen.add(seed.incenter(), 0)
    admit(seed, 0)
    depth_reached = 0
    complete = True
    while queue:
        tile, depth = queue.popleft()
        depth_reached = max(depth_reached, depth)
        d = _incidence_matrix(tile, P)
        on = np.abs(d) <= tol
        for k in range(size):
            facet_vertices = [j for j in range(size) if j != k]
            if np.any(on[:, facet_vertices].all(axis=1)):
                continue  # facet k lies on the boundary of P
            u = tile.normals[:, k]
            if mirrors.add(_hyperplane_key(u), len(mirror_list)):
                mirror_list.append(u.copy())
            if depth + 1 > max_depth or len(tiles) >= limit:
                complete = False
                continue
            g = reflection_matrix(u) @ tile.isometry
            image = Tile.from_isometry(g, F)
            if seen.add(image.incenter(), len(tiles)):
                admit(image, depth + 1)
    ideal = tuple(P.ideal)
    return TilingResult(len(tiles), tiles, incidences, mirror_list, complete, depth_reached, ideal)


def tile_mirrors(tiles, f_real: Realization, p_real: Realization,
                 tol: float = POINT_TOL) -> list[np.ndarray]:
    """Distinct tile facet hyperplanes not lying on a facet of ``P``."""
    size = p_real.size
    j = _j(size)
    found = _PointSet(tol=1e-7)
    out = []
    for g in tiles:
        w = g @ f_real.vertices
        d = p_real.normals.T @ j @ (w / w[-1])
        on = np.abs(d) <= tol
        normals = g @ f_real.normals
        for k in range(size):
            facet_vertices = [x for x in range(size) if x != k]
            if np.any(on[:, facet_vertices].all(axis=1)):
                continue
            if found.add(_hyperplane_key(normals[:, k]), len(out)):
                out.append(normals[:, k].copy())
    return out


def fundamental_angles(result: TilingResult | list, P: Realization,
                       tol: float = 1e-7) -> dict[tuple[int, int], bool]:
    """Flag each ridge ``(i, j)`` of P: fundamental iff no mirror contains it.

    ``result`` is a tiling result or a list of mirror normals.  A mirror
    with normal ``m`` contains the ridge of facets ``i`` and ``j`` iff it
    passes through the vertices of P other than those opposite ``i`` and
    ``j``.
    """
    mirrors = result.mirrors if isinstance(result, TilingResult) else result
    size = P.size
    verts = P.vertices / np.abs(P.vertices[-1])
    j = _j(size)
    flags = {}
    products = [m @ j @ verts / np.linalg.norm(m) for m in mirrors]
    for a in range(size):
        for b in range(a + 1, size):
            keep = [k for k in range(size) if k not in (a, b)]
            flags[(a, b)] = not any(np.all(np.abs(p[keep]) <= tol) for p in products)
    return flags


def verify(F: CatalogEntry | str, P: CatalogEntry | str, limit: int = DEFAULT_LIMIT,
           max_depth: int = DEFAULT_DEPTH) -> Decomposition:
    """Search the seed placements of F in P for a complete reflection tiling.

    The first seed whose orbit stays inside P with the volume-predicted tile
    count is returned, with incidences, mirrors and fundamental-angle flags.

    Raises
    ------
    VerificationError
        if no seed yields a tiling.
    """
    F = entry(F) if isinstance(F, str) else F
    P = entry(P) if isinstance(P, str) else P
    Fr = realize(gram_of(F.diagram))
    Pr = realize(gram_of(P.diagram))
    expected = P.volume / F.volume
    failures = []
    seeds = place_seed(F, P, Fr, Pr)
    if not seeds:
        raise VerificationError(f"no vertex of {F.notation} has a link congruent to one of {P.notation}")
    tried = set()
    for v, w, seed in seeds:
        if seed.key in tried:
            continue
        tried.add(seed.key)
        try:
            result = enumerate_tiles(seed, Fr, Pr, limit, max_depth)
        except VerificationError as exc:
            failures.append(f"seed v={v} w={w}: {exc}")
            continue
        if not result.complete:
            failures.append(f"seed v={v} w={w}: limit reached after {result.N} tiles")
            continue
        if abs(result.N - expected) / expected > 1e-3:
            failures.append(f"seed v={v} w={w}: {result.N} tiles, volume predicts {expected:.4f}")
            continue
        result.fundamental = fundamental_angles(result, Pr)
        return Decomposition(
            F.diagram, P.diagram, result.N,
            tiles=[t.isometry for t in result.tiles],
            f_real=Fr,
            p_real=Pr,
            mirrors=result.mirrors,
            tiling=result,
        )
    raise VerificationError("; ".join(failures) or "no usable seed")


# -- normal-combination certificate ---------------------------------------------------


V9_COEFFICIENTS = (2, 0, 1, 2, 3, 2, 1, 0, 0)


@dataclass
class NormalCertificate:
    """Outcome of the normal-combination test for ``(H1^8, H4^8)``."""

    norm: float
    gram_matches: bool
    in_orbit: bool | None
    word: list[int] = field(default_factory=list)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return abs(self.norm - 1.0) < 1e-7 and self.gram_matches and bool(self.in_orbit)

    def to_dict(self) -> dict:
        return {
            "norm": self.norm,
            "gram_matches": self.gram_matches,
            "in_orbit": self.in_orbit,
            "reflection_word": self.word,
            "passed": self.passed,
            "detail": self.detail,
        }


def _diagram_from_gram(g: np.ndarray, tol: float = 1e-7) -> DecoratedSimplex | None:
    """Coxeter diagram with Gram ``g`` (``None`` if an entry is not ``-cos(pi/m)``)."""
    size = g.shape[0]
    rows = [[Fraction(0)] * size for _ in range(size)]
    for a in range(size):
        for b in range(a + 1, size):
            c = -g[a, b]
            if c >= 1.0 - tol:
                return None
            x = math.acos(max(-1.0, min(1.0, c))) / math.pi
            frac = Fraction(x).limit_denominator(24)
            if abs(float(frac) - x) > 1e-6:
                return None
            rows[a][b] = rows[b][a] = frac
    return DecoratedSimplex.from_matrix(rows)


def _orbit_word(gram: np.ndarray, start: int, target: tuple[int, ...], max_height: int,
                limit: int = 100_000):
    """Reflection word taking basis vector ``start`` to ``target`` in coefficients.

    Reflections ``r_i(c) = c - 2 <c, v_i> e_i`` preserve the integer lattice
    because every ``2 G_ij`` is an integer.  The search keeps nonnegative
    vectors of height at most ``max_height``.
    """
    two_g = np.rint(2 * gram).astype(np.int64)
    if np.max(np.abs(2 * gram - two_g)) > 1e-9:
        raise ValueError("reflection lattice needs 2 <v_i, v_j> integral")
    size = gram.shape[0]
    first = tuple(int(i == start) for i in range(size))
    parent = {first: None}
    queue = deque([first])
    target = tuple(target)
    while queue:
        c = queue.popleft()
        if c == target:
            word = []
            while parent[c] is not None:
                c, i = parent[c]
                word.append(i)
            return word[::-1]
        vec = np.array(c)
        pairing = two_g @ vec
        for i in range(size):
            if pairing[i] == 0:
                continue
            nxt = vec.copy()
            nxt[i] -= pairing[i]
            if nxt.min() < 0 or nxt.sum() > max_height:
                continue
            key = tuple(int(x) for x in nxt)
            if key not in parent:
                parent[key] = (c, i)
                if len(parent) > limit:
                    return None
                queue.append(key)
    return None


def check_normal_combination(F: CatalogEntry | str = "H1^8", target: CatalogEntry | str = "H4^8",
                             coefficients=V9_COEFFICIENTS, start: int = 2) -> NormalCertificate:
    """Test ``v9 = sum c_i v_i`` against the facets ``v1 .. v8`` of ``F``.

    ``v9`` must be unit spacelike, ``{v1, ..., v9}`` must have the Gram
    matrix of ``target``, and ``v9`` must lie in the reflection orbit of
    ``v_start`` under the facets of ``F``.
    """
    F = entry(F) if isinstance(F, str) else F
    target = entry(target) if isinstance(target, str) else target
    gram = np.asarray(gram_of(F.diagram), dtype=float)
    c = np.array(coefficients, dtype=float)
    norm = float(c @ gram @ c)
    basis = np.eye(gram.shape[0])
    vectors = [basis[i] for i in range(1, gram.shape[0])] + [c]
    g9 = np.array([[x @ gram @ y for y in vectors] for x in vectors])
    diagram = _diagram_from_gram(g9) if abs(norm - 1.0) < 1e-7 else None
    gram_ok = diagram is not None and isomorphic(diagram, target.diagram)
    cert = NormalCertificate(norm, gram_ok, None)
    if not gram_ok:
        cert.detail = "combination does not complete the target Gram matrix"
        return cert
    ints = tuple(int(round(x)) for x in coefficients)
    word = _orbit_word(gram, start, ints, max_height=4 * sum(ints))
    cert.in_orbit = word is not None
    cert.word = word or []
    cert.detail = (
        f"v{start} reaches the combination by {len(cert.word)} reflections"
        if word is not None else "orbit search exhausted without reaching the combination"
    )
    return cert


@dataclass
class LatticeRefutation:
    """Coordinates of the required normal ``u`` in the basis of F's normals.

    ``candidates`` lists both unit solutions; ``coefficients`` is the one
    with ``c_0 > 0``, the only one keeping the vertex of F opposite ``v0``
    on the inner side of the new facet.
    """

    candidates: list[list[float]]
    coefficients: list[float] | None
    integral: bool

    @property
    def refuted(self) -> bool:
        return self.coefficients is not None and not self.integral

    def to_dict(self) -> dict:
        return {
            "candidates": self.candidates,
            "coefficients": self.coefficients,
            "in_lattice": self.integral,
            "refuted": self.refuted,
        }


def alternate_numbering_refutation(F: CatalogEntry | str = "H1^8",
                                   products: dict[int, float] | None = None) -> LatticeRefutation:
    """Show that the normal forced by the reversed numbering is off the lattice.

    ``products`` gives ``<u, v_k>`` for ``k = 1 .. 8`` (default: ``-1/2`` at
    ``v2`` and ``v8``, ``0`` elsewhere).  The unit solutions ``u`` are
    expanded in the basis ``v0 .. v8``; a reflection image of a facet normal
    would have integer coordinates.
    """
    F = entry(F) if isinstance(F, str) else F
    if products is None:
        products = {k: 0.0 for k in range(1, 9)}
        products[2] = products[8] = -0.5
    gram = np.asarray(gram_of(F.diagram), dtype=float)
    ginv = np.linalg.inv(gram)
    # u has pairings b with b_k fixed for k >= 1 and b_0 = s free; coefficients = ginv b
    b = np.array([0.0] + [products[k] for k in range(1, gram.shape[0])])
    e0 = np.zeros(gram.shape[0])
    e0[0] = 1.0
    # <u, u> = b^T ginv b is quadratic in s
    qa = float(e0 @ ginv @ e0)
    qb = float(2 * e0 @ ginv @ b)
    qc = float(b @ ginv @ b) - 1.0
    disc = qb * qb - 4 * qa * qc
    sols = []
    if disc >= -1e-12:
        r = math.sqrt(max(disc, 0.0))
        for s in sorted({(-qb + r) / (2 * qa), (-qb - r) / (2 * qa)}):
            coeffs = ginv @ (b + s * e0)
            sols.append([float(x) for x in coeffs])
    # <x, u> = c_0 <x, v0> with <x, v0> < 0 for the vertex x opposite v0
    chosen = next((cs for cs in sols if cs[0] > 1e-9), None)
    integral = chosen is not None and bool(np.allclose(chosen, np.round(chosen), atol=1e-7))
    return LatticeRefutation(sols, chosen, integral)


# -- serialization ---------------------------------------------------------------------


def realization_json(e: CatalogEntry | DecoratedSimplex) -> str:
    """Normals, vertices and ideal indices of a hyperbolic simplex as JSON."""
    s = e.diagram if isinstance(e, CatalogEntry) else e
    r = realize(gram_of(s))
    return json.dumps(
        {
            "normals": r.normals.T.tolist(),
            "vertices": r.vertices.T.tolist(),
            "ideal": list(r.ideal),
        }
    )
