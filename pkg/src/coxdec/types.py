"""Recognition of spherical and Euclidean Coxeter diagram types.

Connected elliptic diagrams are named ``A4``, ``B3``, ``D5``, ``E8``, ``F4``,
``H3``, ``H4``, ``G2^(5)`` ...; connected parabolic ones with a ``~`` suffix
(``A3~``, ``D4~``, ``F4~``).  Disconnected elliptic diagrams are written as
sorted sums such as ``2A1+D4``.
"""

from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache

from .diagram import DecoratedSimplex, canonical_key

__all__ = [
    "standard_diagram",
    "affine_diagram",
    "type_name",
    "component_types",
    "sum_name",
    "parse_sum",
    "group_order",
    "rank_of",
]


def _path(size: int, labels: dict[int, int] | None = None) -> dict[tuple[int, int], int]:
    labels = labels or {}
    return {(i, i + 1): labels.get(i, 3) for i in range(size - 1)}


def standard_diagram(family: str, rank: int) -> DecoratedSimplex:
    """Connected spherical Coxeter diagram ``family_rank`` (``I`` takes rank = m)."""
    if family == "A":
        edges = _path(rank)
    elif family == "B" and rank >= 2:
        edges = _path(rank, {rank - 2: 4})
    elif family == "D" and rank >= 4:
        edges = _path(rank - 1)
        edges[(rank - 3, rank - 1)] = 3
    elif family == "E" and rank in (6, 7, 8):
        edges = _path(rank - 1)
        edges[(2, rank - 1)] = 3
    elif family == "F" and rank == 4:
        edges = _path(4, {1: 4})
    elif family == "H" and rank in (3, 4):
        edges = _path(rank, {0: 5})
    elif family == "I" and rank >= 3:
        return DecoratedSimplex.from_edges(1, {(0, 1): rank})
    else:
        raise ValueError(f"no spherical diagram {family}{rank}")
    return DecoratedSimplex.from_edges(rank - 1, edges)


def affine_diagram(family: str, rank: int) -> DecoratedSimplex:
    """Connected Euclidean diagram of type ``family~_rank`` (``rank + 1`` nodes)."""
    size = rank + 1
    if family == "A" and rank >= 2:
        edges = _path(size)
        edges[(0, size - 1)] = 3
    elif family == "B" and rank >= 3:
        edges = {(0, 2): 3, (1, 2): 3}
        edges.update({(i, i + 1): 3 for i in range(2, size - 1)})
        edges[(size - 2, size - 1)] = 4
    elif family == "C" and rank >= 2:
        edges = _path(size, {0: 4, size - 2: 4})
    elif family == "D" and rank >= 4:
        edges = {(0, 2): 3, (1, 2): 3}
        edges.update({(i, i + 1): 3 for i in range(2, size - 3)})
        edges[(size - 3, size - 2)] = 3
        edges[(size - 3, size - 1)] = 3
    elif family == "E" and rank in (6, 7, 8):
        arms = {6: (2, 2, 2), 7: (3, 3, 1), 8: (5, 2, 1)}[rank]
        edges = {}
        nxt = 1
        for arm in arms:
            prev = 0
            for _ in range(arm):
                edges[(prev, nxt)] = 3
                prev = nxt
                nxt += 1
    elif family == "F" and rank == 4:
        edges = _path(5, {2: 4})
    elif family == "G" and rank == 2:
        edges = _path(3, {1: 6})
    else:
        raise ValueError(f"no affine diagram {family}~{rank}")
    return DecoratedSimplex.from_edges(size - 1, edges)


@lru_cache(maxsize=None)
def _table(max_rank: int = 11) -> dict[tuple, str]:
    table = {}
    for r in range(1, max_rank + 1):
        table[canonical_key(standard_diagram("A", r))] = f"A{r}"
        if r >= 3:
            table[canonical_key(standard_diagram("B", r))] = f"B{r}"
        if r >= 4:
            table[canonical_key(standard_diagram("D", r))] = f"D{r}"
    table[canonical_key(standard_diagram("B", 2))] = "B2"
    for r in (6, 7, 8):
        table[canonical_key(standard_diagram("E", r))] = f"E{r}"
    table[canonical_key(standard_diagram("F", 4))] = "F4"
    table[canonical_key(standard_diagram("H", 3))] = "H3"
    table[canonical_key(standard_diagram("H", 4))] = "H4"
    for m in range(5, 13):
        table[canonical_key(standard_diagram("I", m))] = "G2" if m == 6 else f"G2^({m})"
    for r in range(2, max_rank):
        table[canonical_key(affine_diagram("A", r))] = f"A{r}~"
        table[canonical_key(affine_diagram("C", r))] = f"C{r}~"
        if r >= 3:
            table[canonical_key(affine_diagram("B", r))] = f"B{r}~"
        if r >= 4:
            table[canonical_key(affine_diagram("D", r))] = f"D{r}~"
    for r in (6, 7, 8):
        table[canonical_key(affine_diagram("E", r))] = f"E{r}~"
    table[canonical_key(affine_diagram("F", 4))] = "F4~"
    table[canonical_key(affine_diagram("G", 2))] = "G2~"
    return table


def type_name(s: DecoratedSimplex) -> str | None:
    """Name of a connected spherical or Euclidean Coxeter diagram, else ``None``."""
    if s.size == 1:
        return "A1"
    return _table().get(canonical_key(s))


def component_types(s: DecoratedSimplex) -> list[str | None]:
    """Type names of the connected components, sorted (unknown components as ``None``)."""
    names = [type_name(s.subdiagram(c)) for c in s.components()]
    return sorted(names, key=lambda x: (x is None, _sort_key(x) if x else ()))


def _sort_key(name: str):
    base = name.rstrip("~")
    family = base[0]
    rest = base[1:]
    if "^" in rest:
        rank, m = 2, int(rest.split("(")[1].rstrip(")"))
    else:
        rank, m = int(rest), 0
    return (family, rank, m, name.endswith("~"))


def sum_name(names) -> str:
    """``['A1', 'A1', 'D4'] -> '2A1+D4'``."""
    counts = Counter(names)
    parts = []
    for name in sorted(counts, key=_sort_key):
        c = counts[name]
        parts.append(name if c == 1 else f"{c}{name}")
    return "+".join(parts)


def parse_sum(text: str) -> list[str]:
    """Inverse of :func:`sum_name`: ``'2A1+D4' -> ['A1', 'A1', 'D4']``."""
    out = []
    for part in text.replace(" ", "").split("+"):
        i = 0
        while i < len(part) and part[i].isdigit():
            i += 1
        count = int(part[:i]) if i else 1
        out.extend([part[i:]] * count)
    return sorted(out, key=_sort_key)


def rank_of(name: str) -> int:
    base = name.rstrip("~")
    if "^" in base:
        return 2
    return int(base[1:])


def group_order(name: str) -> int:
    """Order of the finite Coxeter group of a connected spherical type."""
    family, rest = name[0], name[1:]
    if "^" in rest:
        return 2 * int(rest.split("(")[1].rstrip(")"))
    r = int(rest)
    if family == "A":
        return math.factorial(r + 1)
    if family == "B":
        return 2**r * math.factorial(r)
    if family == "D":
        return 2 ** (r - 1) * math.factorial(r)
    if family == "G":
        return 12
    return {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "H3": 120, "H4": 14400}[name]
