"""Angle-decorated simplex diagrams.

A simplex is described by its dihedral angles ``pi * k / m``.  Angles are kept
as exact fractions of ``pi`` so that gluing is exact arithmetic and
deduplication never sees floating point noise.

Text format::

    # comment
    dim=4
    name=H3^4
    0-1:3        # angle pi/3
    1-2:4/3      # angle 3*pi/4 ... written m/k, i.e. pi*k/m
    2-3:3/2      # angle 2*pi/3

Pairs that are not listed are right angles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

__all__ = [
    "AngleFraction",
    "DecoratedSimplex",
    "DiagramError",
    "RIGHT",
    "parse_diagram",
    "serialize_diagram",
    "canonical_form",
    "canonical_key",
    "isomorphic",
    "remove_node",
    "automorphisms",
]


class DiagramError(ValueError):
    """Raised for malformed diagram text or invalid angle data."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class AngleFraction(Fraction):
    """Dihedral angle ``pi * k / m`` stored as the fraction ``k/m`` in (0, 1).

    ``k == 1`` means the angle is a Coxeter angle ``pi/m``.
    """

    __slots__ = ()

    def __new__(cls, numerator=1, denominator=None):
        self = super().__new__(cls, numerator, denominator)
        if not 0 < self < 1:
            raise DiagramError(f"angle pi*{self} outside the open interval (0, pi)")
        if self.denominator < 2:
            raise DiagramError(f"bad angle denominator in {self}")
        return self

    @classmethod
    def coxeter(cls, m: int) -> "AngleFraction":
        return cls(1, m)

    @property
    def k(self) -> int:
        return self.numerator

    @property
    def m(self) -> int:
        return self.denominator

    @property
    def is_coxeter(self) -> bool:
        return self.numerator == 1

    def label(self) -> str:
        """Edge label in the text format: ``m`` or ``m/k``."""
        if self.k == 1:
            return str(self.m)
        return f"{self.m}/{self.k}"

    def __repr__(self) -> str:
        return f"AngleFraction({self.k}, {self.m})"


RIGHT = AngleFraction(1, 2)


@dataclass(frozen=True)
class DecoratedSimplex:
    """An n-simplex given by its (n+1) x (n+1) matrix of dihedral angles.

    ``angles[i][j]`` is the angle between facets ``i`` and ``j``; the diagonal
    holds ``None``.  Instances are immutable and hashable.
    """

    angles: tuple[tuple[AngleFraction | None, ...], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        size = len(self.angles)
        if size < 1:
            raise DiagramError("a diagram needs at least one node")
        for i, row in enumerate(self.angles):
            if len(row) != size:
                raise DiagramError("angle matrix is not square")
            if row[i] is not None:
                raise DiagramError("diagonal of the angle matrix must be empty")
            for j in range(i + 1, size):
                a, b = row[j], self.angles[j][i]
                if a != b:
                    raise DiagramError(f"angles({i},{j}) != angles({j},{i})")
                if not isinstance(a, AngleFraction):
                    raise DiagramError(f"angles({i},{j}) is not an AngleFraction")

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.angles)
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def from_edges(
        cls,
        dim: int,
        edges: dict[tuple[int, int], Fraction | int] | Iterable = (),
        name: str | None = None,
    ) -> "DecoratedSimplex":
        """Build from ``{(i, j): angle}``; an int ``m`` means ``pi/m``.

        Unlisted pairs are right angles.
        """
        size = dim + 1
        mat = [[RIGHT] * size for _ in range(size)]
        for i in range(size):
            mat[i][i] = None
        items = edges.items() if isinstance(edges, dict) else edges
        for (i, j), value in items:
            if not (0 <= i < size and 0 <= j < size) or i == j:
                raise DiagramError(f"bad edge {i}-{j} for dim={dim}")
            angle = AngleFraction(1, value) if isinstance(value, int) else AngleFraction(value)
            mat[i][j] = mat[j][i] = angle
        return cls(tuple(tuple(r) for r in mat), name=name)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence], name: str | None = None) -> "DecoratedSimplex":
        size = len(rows)
        mat = tuple(
            tuple(None if i == j else AngleFraction(rows[i][j]) for j in range(size))
            for i in range(size)
        )
        return cls(mat, name=name)

    @property
    def size(self) -> int:
        """Number of facets (nodes), ``n + 1``."""
        return len(self.angles)

    @property
    def dim(self) -> int:
        return len(self.angles) - 1

    def angle(self, i: int, j: int) -> AngleFraction:
        return self.angles[i][j]

    def edges(self) -> list[tuple[int, int, AngleFraction]]:
        """Non-right angles as ``(i, j, angle)`` with ``i < j``, sorted."""
        return [
            (i, j, self.angles[i][j])
            for i, j in combinations(range(self.size), 2)
            if self.angles[i][j] != RIGHT
        ]

    @property
    def is_coxeter(self) -> bool:
        return all(a.is_coxeter for _, _, a in self.edges())

    def neighbors(self, v: int) -> list[int]:
        return [u for u in range(self.size) if u != v and self.angles[v][u] != RIGHT]

    def is_connected(self, nodes: Iterable[int] | None = None) -> bool:
        nodes = list(range(self.size)) if nodes is None else list(nodes)
        if not nodes:
            return True
        keep = set(nodes)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            v = stack.pop()
            for u in self.neighbors(v):
                if u in keep and u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(keep)

    def components(self) -> list[list[int]]:
        """Connected components (lists of node indices) in increasing order."""
        left = set(range(self.size))
        comps = []
        while left:
            start = min(left)
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for u in self.neighbors(v):
                    if u in left and u not in comp:
                        comp.add(u)
                        stack.append(u)
            left -= comp
            comps.append(sorted(comp))
        return comps

    def permuted(self, perm: Sequence[int]) -> "DecoratedSimplex":
        """Relabel so that new node ``p`` is old node ``perm[p]``."""
        size = self.size
        mat = tuple(
            tuple(None if a == b else self.angles[perm[a]][perm[b]] for b in range(size))
            for a in range(size)
        )
        return DecoratedSimplex(mat, name=self.name)

    def subdiagram(self, nodes: Sequence[int]) -> "DecoratedSimplex":
        nodes = list(nodes)
        mat = tuple(
            tuple(None if a == b else self.angles[nodes[a]][nodes[b]] for b in range(len(nodes)))
            for a in range(len(nodes))
        )
        return DecoratedSimplex(mat)

    def with_name(self, name: str | None) -> "DecoratedSimplex":
        return DecoratedSimplex(self.angles, name=name)

    def __str__(self) -> str:
        return serialize_diagram(self)


# -- text format -----------------------------------------------------------

_EDGE_RE = re.compile(r"^(\d+)\s*-\s*(\d+)\s*:\s*(\d+)(?:\s*/\s*(\d+))?$")


def parse_diagram(text: str) -> DecoratedSimplex:
    """Parse the line-oriented diagram format.

    Raises
    ------
    DiagramError
        On malformed lines, ``k >= m``, out-of-range nodes or duplicate edges.
        The offending line number is attached.
    """
    dim = None
    name = None
    edges: dict[tuple[int, int], AngleFraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("dim="):
            if dim is not None:
                raise DiagramError("duplicate dim header", lineno)
            try:
                dim = int(line[4:])
            except ValueError:
                raise DiagramError(f"bad dimension {line[4:]!r}", lineno) from None
            if dim < 1:
                raise DiagramError("dimension must be positive", lineno)
            continue
        if line.startswith("name="):
            name = line[5:].strip() or None
            continue
        match = _EDGE_RE.match(line)
        if not match:
            raise DiagramError(f"cannot parse {raw.strip()!r}", lineno)
        if dim is None:
            raise DiagramError("edge before dim header", lineno)
        i, j, m = int(match[1]), int(match[2]), int(match[3])
        k = int(match[4]) if match[4] else 1
        if i == j or i > dim or j > dim:
            raise DiagramError(f"node index out of range in {line!r}", lineno)
        if m < 2 or k < 1 or k >= m:
            raise DiagramError(f"need 0 < k < m in {line!r}", lineno)
        key = (min(i, j), max(i, j))
        if key in edges:
            raise DiagramError(f"duplicate edge {key[0]}-{key[1]}", lineno)
        edges[key] = AngleFraction(k, m)
    if dim is None:
        raise DiagramError("missing dim header")
    return DecoratedSimplex.from_edges(dim, edges, name=name)


def serialize_diagram(s: DecoratedSimplex) -> str:
    lines = [f"dim={s.dim}"]
    if s.name:
        lines.append(f"name={s.name}")
    lines.extend(f"{i}-{j}:{a.label()}" for i, j, a in s.edges())
    return "\n".join(lines) + "\n"


# -- canonical form ----------------------------------------------------------


def _refine(s: DecoratedSimplex, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition; isomorphism invariant."""
    angles = s.angles
    while True:
        where = {}
        for idx, cell in enumerate(cells):
            for v in cell:
                where[v] = idx
        new_cells: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {}
            for v in cell:
                sig[v] = tuple(sorted((where[u], angles[v][u]) for u in range(s.size) if u != v))
            for key in sorted(set(sig.values())):
                new_cells.append([v for v in cell if sig[v] == key])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _twin_classes(s: DecoratedSimplex, cell: list[int]) -> list[int]:
    """One representative per class of interchangeable nodes in ``cell``."""
    angles = s.angles
    reps: list[int] = []
    for v in cell:
        for r in reps:
            if all(angles[v][u] == angles[r][u] for u in range(s.size) if u != v and u != r):
                break
        else:
            reps.append(v)
    return reps


def _key_of(s: DecoratedSimplex, order: Sequence[int]) -> tuple:
    angles = s.angles
    size = s.size
    return tuple(angles[order[a]][order[b]] for a in range(size) for b in range(a + 1, size))


def canonical_form(s: DecoratedSimplex) -> tuple[DecoratedSimplex, tuple[int, ...]]:
    """Relabeling-invariant representative of ``s``.

    Returns ``(c, perm)`` with ``c == s.permuted(perm)``.  Two simplices are
    isomorphic iff their canonical forms are equal.
    """
    best_key = None
    best_order = None

    def search(cells):
        nonlocal best_key, best_order
        cells = _refine(s, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            key = _key_of(s, order)
            if best_key is None or key < best_key:
                best_key, best_order = key, order
            return
        cell = cells[target]
        for v in _twin_classes(s, cell):
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1 :])

    search([list(range(s.size))])
    perm = tuple(best_order)
    return s.permuted(perm), perm


@lru_cache(maxsize=1 << 16)
def canonical_key(s: DecoratedSimplex) -> tuple:
    """Hashable isomorphism invariant: ``(size, upper triangle of canonical form)``."""
    c, _ = canonical_form(s)
    return (s.size, _key_of(c, range(s.size)))


def isomorphic(a: DecoratedSimplex, b: DecoratedSimplex) -> bool:
    return a.size == b.size and canonical_key(a) == canonical_key(b)


def automorphisms(s: DecoratedSimplex) -> list[tuple[int, ...]]:
    """All permutations ``p`` with ``s.permuted(p) == s`` (brute force over refined cells)."""
    cells = _refine(s, [list(range(s.size))])
    where = {}
    for idx, cell in enumerate(cells):
        for v in cell:
            where[v] = idx
    size = s.size
    result = []
    image = [None] * size
    used = [False] * size

    def extend(pos):
        if pos == size:
            result.append(tuple(image))
            return
        for cand in cells[where[pos]]:
            if used[cand]:
                continue
            if any(s.angles[pos][q] != s.angles[cand][image[q]] for q in range(pos)):
                continue
            used[cand] = True
            image[pos] = cand
            extend(pos + 1)
            used[cand] = False
        image[pos] = None

    extend(0)
    return result


def remove_node(s: DecoratedSimplex, v: int) -> DecoratedSimplex:
    """Diagram with node ``v`` and its incident edges deleted."""
    if not 0 <= v < s.size:
        raise IndexError(f"node {v} out of range for {s.size} nodes")
    return s.subdiagram([u for u in range(s.size) if u != v])
