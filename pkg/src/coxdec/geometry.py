"""Gram matrices, signature classification and Lorentzian realizations.

Conventions
-----------
Vectors live in R^{n,1} with the form ``<x, y> = x[:-1] @ y[:-1] - x[-1] * y[-1]``.
Facet normals ``u_i`` are unit spacelike and point outward: the simplex is
``{x : <x, u_i> <= 0 for all i}`` intersected with the future light cone.
Vertex ``j`` lies on every facet except facet ``j``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .diagram import DecoratedSimplex, remove_node

__all__ = [
    "TOL_EIG",
    "TOL_REAL",
    "GeometryError",
    "Kind",
    "GeometryKind",
    "GramMatrix",
    "Realization",
    "Reflection",
    "gram_of",
    "classify",
    "classify_simplex",
    "realize",
    "facet_gram",
    "reflect",
    "reflection_matrix",
    "mink",
    "mink_gram",
    "snap",
    "vertex_links",
]

TOL_EIG = float(os.environ.get("COXDEC_TOL_EIG", 1e-9))
TOL_REAL = float(os.environ.get("COXDEC_TOL_REAL", 1e-7))
SNAP_TOL = 1e-6


class GeometryError(ValueError):
    pass


class Kind(str, Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    INVALID = "invalid"


@dataclass(frozen=True)
class GeometryKind:
    """Outcome of signature classification.

    ``signature`` is ``(positive, negative, zero)`` eigenvalue counts.
    ``ideal`` lists ideal vertices (hyperbolic only); ``connected`` is the
    diagram connectivity, which matters for parabolic links.
    """

    kind: Kind
    signature: tuple[int, int, int]
    ideal: tuple[int, ...] = ()
    connected: bool = True

    @property
    def corank(self) -> int:
        return self.signature[2]

    @property
    def compact(self) -> bool:
        return self.kind is Kind.HYPERBOLIC and not self.ideal

    def __str__(self) -> str:
        if self.kind is Kind.INVALID:
            p, q, z = self.signature
            return f"invalid: signature ({p}, {q})" + (f" with corank {z}" if z else "")
        if self.kind is Kind.PARABOLIC:
            return f"parabolic (corank {self.corank})"
        if self.kind is Kind.HYPERBOLIC:
            return f"hyperbolic ({len(self.ideal)} ideal vertices)"
        return "elliptic"


# Exact cosines that show up as rational entries.
_EXACT_COS = {Fraction(1, 2): 0.0, Fraction(1, 3): 0.5, Fraction(2, 3): -0.5}


@lru_cache(maxsize=None)
def _cos_ratio(k: int, m: int) -> float:
    a = Fraction(k, m)
    if a in _EXACT_COS:
        return _EXACT_COS[a]
    return math.cos(math.pi * a)


def _cos_pi(a: Fraction) -> float:
    return _cos_ratio(a.numerator, a.denominator)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Symmetric matrix of facet-normal inner products ``-cos(angle)``.

    ``exact`` flags entries known to be exactly rational (0, +-1/2, 1).
    """

    entries: np.ndarray
    exact: np.ndarray | None = None

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def dim(self) -> int:
        return self.entries.shape[0] - 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def minor(self, keep) -> "GramMatrix":
        keep = list(keep)
        exact = None if self.exact is None else self.exact[np.ix_(keep, keep)]
        return GramMatrix(self.entries[np.ix_(keep, keep)], exact)


def gram_of(s: DecoratedSimplex) -> GramMatrix:
    size = s.size
    g = np.eye(size)
    exact = np.eye(size, dtype=bool)
    for i in range(size):
        for j in range(i + 1, size):
            a = s.angles[i][j]
            g[i, j] = g[j, i] = -_cos_pi(a)
            exact[i, j] = exact[j, i] = a.denominator in (2, 3)
    return GramMatrix(g, exact)


def _as_array(g) -> np.ndarray:
    return g.entries if isinstance(g, GramMatrix) else np.asarray(g, dtype=float)


def _signature(m: np.ndarray, tol: float) -> tuple[int, int, int]:
    ev = np.linalg.eigvalsh(m)
    return int((ev > tol).sum()), int((ev < -tol).sum()), int((abs(ev) <= tol).sum())


def _connected(m: np.ndarray, tol: float = 1e-12) -> bool:
    size = m.shape[0]
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in range(size):
            if u not in seen and abs(m[v, u]) > tol:
                seen.add(u)
                stack.append(u)
    return len(seen) == size


def _link_ok(m: np.ndarray, tol: float) -> tuple[bool, bool]:
    """(admissible, ideal) for a vertex link given by its Gram minor."""
    p, q, z = _signature(m, tol)
    if q == 0 and z == 0:
        return True, False
    if q == 0 and z == 1 and _connected(m):
        return True, True
    return False, False


def classify(g, tol: float | None = None) -> GeometryKind:
    """Spherical / Euclidean / hyperbolic trichotomy from the eigenvalue signs.

    A hyperbolic verdict additionally requires every vertex link to be
    elliptic or connected parabolic (otherwise the facets do not bound a
    finite-volume simplex); ideal vertices are those with parabolic links.
    """
    tol = TOL_EIG if tol is None else tol
    m = _as_array(g)
    p, q, z = _signature(m, tol)
    connected = _connected(m)
    if q == 0 and z == 0:
        return GeometryKind(Kind.ELLIPTIC, (p, q, z), connected=connected)
    if q == 0:
        return GeometryKind(Kind.PARABOLIC, (p, q, z), connected=connected)
    if q == 1 and z == 0:
        ideal = []
        size = m.shape[0]
        for v in range(size):
            keep = [u for u in range(size) if u != v]
            ok, is_ideal = _link_ok(m[np.ix_(keep, keep)], tol)
            if not ok:
                return GeometryKind(Kind.INVALID, (p, q, z), connected=connected)
            if is_ideal:
                ideal.append(v)
        return GeometryKind(Kind.HYPERBOLIC, (p, q, z), tuple(ideal), connected)
    return GeometryKind(Kind.INVALID, (p, q, z), connected=connected)


@lru_cache(maxsize=1 << 14)
def _classify_cached(s: DecoratedSimplex, tol: float) -> GeometryKind:
    return classify(gram_of(s), tol)


def classify_simplex(s: DecoratedSimplex) -> GeometryKind:
    return _classify_cached(s, TOL_EIG)


def vertex_links(s: DecoratedSimplex):
    """Per vertex ``A_v`` (opposite facet ``v``): ``(v, kind, link diagram)``.

    The link is ``remove_node(s, v)``; a parabolic kind marks an ideal vertex.
    """
    from .diagram import canonical_form

    kind = classify_simplex(s)
    if kind.kind is not Kind.HYPERBOLIC:
        raise GeometryError(f"not a hyperbolic simplex: {kind}")
    out = []
    for v in range(s.size):
        link = remove_node(s, v)
        out.append((v, classify_simplex(link), canonical_form(link)[0]))
    return out


# -- Minkowski space ----------------------------------------------------------


def mink(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Lorentzian product along the last axis (signature (n, 1))."""
    return (x[..., :-1] * y[..., :-1]).sum(-1) - x[..., -1] * y[..., -1]


def mink_gram(cols: np.ndarray) -> np.ndarray:
    """Lorentzian Gram matrix of the columns of ``cols``."""
    j = np.ones(cols.shape[0])
    j[-1] = -1.0
    return cols.T @ (j[:, None] * cols)


def reflection_matrix(u: np.ndarray) -> np.ndarray:
    """Matrix of ``x -> x - 2 <x, u> u`` for a unit spacelike ``u``."""
    ju = u.copy()
    ju[-1] = -ju[-1]
    return np.eye(len(u)) - 2.0 * np.outer(u, ju)


@dataclass(frozen=True, eq=False)
class Reflection:
    normal: np.ndarray

    def __post_init__(self):
        nn = float(mink(self.normal, self.normal))
        if abs(nn - 1.0) > 1e-6:
            raise GeometryError(f"mirror normal is not unit spacelike (<u,u> = {nn})")

    @property
    def matrix(self) -> np.ndarray:
        return reflection_matrix(self.normal)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return reflect(self, x)


def reflect(r: Reflection | np.ndarray, x: np.ndarray) -> np.ndarray:
    u = r.normal if isinstance(r, Reflection) else np.asarray(r, dtype=float)
    x = np.asarray(x, dtype=float)
    return x - 2.0 * mink(x, u)[..., None] * u


_SNAP_VALUES = None


def _snap_values() -> np.ndarray:
    global _SNAP_VALUES
    if _SNAP_VALUES is None:
        vals = {0.0, 0.5, 1.0}
        for m in range(3, 13):
            for k in range(1, m):
                vals.add(abs(math.cos(math.pi * k / m)))
        vals = sorted(vals | {-v for v in vals})
        _SNAP_VALUES = np.array(vals)
    return _SNAP_VALUES


def snap(values: np.ndarray, tol: float = SNAP_TOL) -> np.ndarray:
    """Snap entries lying within ``tol`` of ``0, +-1/2, +-cos(pi k/m), +-1``."""
    values = np.asarray(values, dtype=float)
    table = _snap_values()
    idx = np.clip(np.searchsorted(table, values), 1, len(table) - 1)
    lo, hi = table[idx - 1], table[idx]
    nearest = np.where(abs(values - lo) <= abs(values - hi), lo, hi)
    return np.where(abs(values - nearest) <= tol, nearest, values)


# -- realizations -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Realization:
    """Facet normals (columns of ``normals``) and vertices (columns of ``vertices``).

    Finite vertices are unit future timelike; ideal vertices are lightlike,
    scaled to time coordinate 1.
    """

    normals: np.ndarray
    vertices: np.ndarray
    ideal: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.normals.shape[1]

    def gram(self) -> np.ndarray:
        return mink_gram(self.normals)

    def transformed(self, m: np.ndarray) -> "Realization":
        return Realization(m @ self.normals, m @ self.vertices, self.ideal)


def vertices_from_normals(normals: np.ndarray, ideal=None):
    """Vertices of the cone ``{<x, u_i> <= 0}`` spanned by the columns of ``normals``.

    Returns ``(vertices, ideal)``; ideal vertices are read off the Gram
    classification unless given.
    """
    if ideal is None:
        ideal = classify(mink_gram(normals)).ideal
    j = np.ones(normals.shape[0])
    j[-1] = -1.0
    verts = -(j[:, None] * np.linalg.inv(normals).T)  # <u_i, v_j> = -delta_ij
    for c in range(verts.shape[1]):
        w = verts[:, c]
        if c in ideal:
            verts[:, c] = w / abs(w[-1])
        else:
            verts[:, c] = w / math.sqrt(abs(float(mink(w, w))))
    return verts, tuple(ideal)


def realize(g) -> Realization:
    """Facet normals and vertices of the hyperbolic simplex with Gram ``g``.

    Gauge: the negative eigen-direction is the last coordinate, the vertex
    cone is future pointing, and the first normal has a positive first
    coordinate when that coordinate is nonzero.
    """
    m = _as_array(g)
    kind = classify(m)
    if kind.kind is not Kind.HYPERBOLIC:
        raise GeometryError(f"cannot realize a non-hyperbolic Gram matrix ({kind})")
    ev, vecs = np.linalg.eigh(m)
    order = np.argsort(-ev)  # negative eigenvalue last
    ev, vecs = ev[order], vecs[:, order]
    normals = np.sqrt(abs(ev))[:, None] * vecs.T
    # vertices are -dual; make the cone future pointing
    j = np.ones(m.shape[0])
    j[-1] = -1.0
    dual = j[:, None] * np.linalg.inv(normals).T
    if (-dual[-1]).sum() < 0:
        normals = -normals
    if normals[0, 0] < -1e-12:
        flip = np.ones(m.shape[0])
        flip[0] = -1.0
        normals = flip[:, None] * normals
    err = float(np.max(np.abs(mink_gram(normals) - m)))
    if err > TOL_REAL:
        raise GeometryError(f"realization reproduces the Gram matrix only to {err:.2e}")
    verts, ideal = vertices_from_normals(normals, kind.ideal)
    return Realization(normals, verts, ideal)


def facet_gram(g, i: int) -> GramMatrix:
    """Gram matrix of the (n-1)-simplex cut out on facet ``i``.

    Rows/columns are the remaining facets in increasing order.
    """
    m = _as_array(g)
    others = [j for j in range(m.shape[0]) if j != i]
    c = m[i, others]
    if np.any(abs(c) >= 1.0 - 1e-12):
        raise GeometryError(f"facet {i} does not meet every other facet")
    sub = m[np.ix_(others, others)] - np.outer(c, c)
    scale = np.sqrt(1.0 - c * c)
    out = sub / np.outer(scale, scale)
    np.fill_diagonal(out, 1.0)
    return GramMatrix(out)
