"""Built-in data: hyperbolic Coxeter simplices of dimension 4 to 9 and golden tables.

Facets are numbered from 0.  Edges are written ``(i, j)`` for an angle
``pi/3`` and ``(i, j, m)`` for ``pi/m``; unlisted pairs are right angles.
Volumes are the published values (hyperbolic n-volume, curvature -1).

The numbering of ``H1^8`` and ``H4^8`` is the one for which the normal
combination ``2v0 + v2 + 2v3 + 3v4 + 2v5 + v6`` of ``H1^8`` completes
``v1 .. v8`` to the normals of ``H4^8``; ``H4^8`` is listed with its facets
re-indexed from 0 (facet ``k`` here is normal ``v_{k+1}``).  ``H3^9`` is
numbered so that its ideal vertices are opposite facets 0, 8 and 9.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .diagram import DecoratedSimplex, canonical_key
from .types import parse_sum, rank_of, sum_name

__all__ = [
    "CatalogEntry",
    "SphericalRule",
    "GoldenRow",
    "hyperbolic_simplices",
    "all_entries",
    "entry",
    "volume",
    "lookup",
    "spherical_rules",
    "rules_by_fundamental",
    "table3_rows",
    "six_pairs",
    "table5_pairs",
    "table4_counts",
    "TilingFact",
    "tiling_facts",
    "EUCLIDEAN_FACTS",
    "DIMENSIONS",
]

DIMENSIONS = range(4, 10)


@dataclass(frozen=True)
class CatalogEntry:
    notation: str
    dim: int
    diagram: DecoratedSimplex
    volume: float
    compact: bool

    def __str__(self) -> str:
        return self.notation


def _path(a: int, b: int) -> list[tuple]:
    return [(i, i + 1) for i in range(a, b)]


# (notation, dim, compact, volume, edges)
_RAW: list[tuple] = [
    # dimension 4, compact
    ("H1^(4)", 4, True, 0.00091385226, [(0, 1, 5), (1, 2), (2, 3), (3, 4)]),
    ("H2^(4)", 4, True, 0.00776774420, [(0, 1, 5), (1, 2), (2, 3), (3, 4, 4)]),
    ("H3^(4)", 4, True, 0.01553548841, [(0, 1, 5), (1, 2), (2, 3), (2, 4)]),
    ("H4^(4)", 4, True, 0.02376015874, [(0, 1, 5), (1, 2), (2, 3), (3, 4, 5)]),
    ("H5^(4)", 4, True, 0.02513093713, [(0, 1), (1, 2), (2, 3), (3, 4, 4), (0, 4)]),
    # dimension 4, non-compact
    ("H1^4", 4, False, 0.00685389195, [(0, 1), (1, 2), (2, 3, 4), (2, 4)]),
    ("H2^4", 4, False, 0.01142315324, [(0, 1, 4), (1, 2), (2, 3, 4), (3, 4)]),
    ("H3^4", 4, False, 0.01370778389, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)]),
    ("H4^4", 4, False, 0.02284630648, [(0, 1), (1, 2, 4), (2, 3), (2, 4)]),
    ("H5^4", 4, False, 0.03426945973, [(0, 1, 4), (1, 2), (1, 3), (3, 4, 4)]),
    ("H6^4", 4, False, 0.06853891945, [(0, 1), (0, 2), (0, 3), (0, 4, 4)]),
    ("H7^4", 4, False, 0.06853891945, [(0, 1, 4), (0, 2), (2, 3), (3, 4), (0, 4)]),
    ("H8^4", 4, False, 0.09138522594, [(0, 1, 4), (1, 2), (2, 3, 4), (3, 4), (0, 4)]),
    ("H9^4", 4, False, 0.13707783890, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]),
    # dimension 5
    ("H1^5", 5, False, 0.0001826041, [(0, 1), (1, 2, 4), (2, 3), (3, 4), (4, 5)]),
    ("H2^5", 5, False, 0.0005478123, [(0, 1, 4), (1, 2), (2, 3), (2, 4), (3, 5)]),
    ("H3^5", 5, False, 0.0009130206, [(0, 1), (1, 2), (2, 3, 4), (3, 4), (4, 5)]),
    ("H4^5", 5, False, 0.0010956247, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5)]),
    ("H5^5", 5, False, 0.0018260413, [(0, 1, 4), (1, 2), (2, 3), (3, 4, 4), (4, 5)]),
    ("H6^5", 5, False, 0.0020740519, [(0, 1), (0, 2), (0, 5), (1, 3), (2, 4), (3, 4)]),
    ("H7^5", 5, False, 0.0036520826, [(0, 1), (1, 2, 4), (2, 3), (3, 4), (3, 5)]),
    ("H8^5", 5, False, 0.0054781239, [(0, 2, 4), (2, 4), (1, 3, 4), (1, 4), (4, 5)]),
    ("H9^5", 5, False, 0.0075726186, [(0, 1, 4), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5)]),
    ("H10^5", 5, False, 0.0109562478, [(0, 1, 4), (1, 2), (2, 3), (2, 4), (2, 5)]),
    ("H11^5", 5, False, 0.0219124956, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]),
    ("H12^5", 5, False, 0.0292166608, [(0, 1, 4), (0, 4), (1, 5), (2, 3, 4), (2, 4), (3, 5)]),
    # dimension 6
    ("H1^6", 6, False, 0.3987432701e-4, _path(0, 4) + [(4, 5, 4), (2, 6)]),
    ("H2^6", 6, False, 0.7974865401e-4, _path(0, 4) + [(3, 5), (2, 6)]),
    ("H3^6", 6, False, 2.9620928633e-4, [(0, 1), (0, 2), (0, 6), (1, 3), (2, 4), (3, 5), (4, 5)]),
    # dimension 7
    ("H1^7", 7, False, 0.1892871372e-5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6), (4, 7)]),
    ("H2^7", 7, False, 0.2725266071e-5, _path(0, 5) + [(5, 6, 4), (2, 7)]),
    ("H3^7", 7, False, 0.5450532141e-5, _path(0, 5) + [(4, 6), (2, 7)]),
    ("H4^7", 7, False, 4.1106779054e-5, _path(0, 6) + [(0, 6), (0, 7)]),
    # dimension 8
    ("H1^8", 8, False, 0.0213042335e-6, _path(1, 8) + [(0, 4)]),
    ("H2^8", 8, False, 0.1810859845e-6, _path(0, 6) + [(6, 7, 4), (2, 8)]),
    ("H3^8", 8, False, 0.3621719690e-6, _path(0, 6) + [(5, 7), (2, 8)]),
    ("H4^8", 8, False, 5.7947515032e-6, _path(0, 7) + [(0, 8), (6, 8)]),
    # dimension 9
    ("H1^9", 9, False, 0.0004650871e-7, _path(0, 3) + [(2, 4)] + _path(4, 9)),
    ("H2^9", 9, False, 0.1225504411e-7, _path(0, 3) + [(2, 4)] + _path(4, 7) + [(7, 9), (8, 9, 4)]),
    ("H3^9", 9, False, 0.2451008823e-7, _path(0, 3) + [(2, 4)] + _path(4, 8) + [(7, 9)]),
]


def _build(notation: str, dim: int, edges: list[tuple]) -> DecoratedSimplex:
    labels = {}
    for e in edges:
        i, j = e[0], e[1]
        labels[(i, j)] = e[2] if len(e) > 2 else 3
    return DecoratedSimplex.from_edges(dim, labels, name=notation)


@lru_cache(maxsize=None)
def _entries() -> tuple[CatalogEntry, ...]:
    out = []
    for notation, dim, compact, vol, edges in _RAW:
        out.append(CatalogEntry(notation, dim, _build(notation, dim, edges), vol, compact))
    return tuple(out)


def all_entries() -> tuple[CatalogEntry, ...]:
    """Every catalog entry, dimension 4 to 9, in table order."""
    return _entries()


def hyperbolic_simplices(n: int) -> list[CatalogEntry]:
    """All hyperbolic Coxeter simplices of dimension ``n`` (4 <= n <= 9)."""
    if n not in DIMENSIONS:
        raise ValueError(f"dimension {n} outside 4..9")
    return [e for e in _entries() if e.dim == n]


@lru_cache(maxsize=None)
def _by_notation() -> dict[str, CatalogEntry]:
    return {e.notation: e for e in _entries()}


def entry(notation: str) -> CatalogEntry:
    """Catalog entry by notation such as ``"H3^4"`` or ``"H1^(4)"``."""
    try:
        return _by_notation()[notation]
    except KeyError:
        raise KeyError(f"unknown notation {notation!r}") from None


def volume(notation: str) -> float:
    return entry(notation).volume


@lru_cache(maxsize=None)
def _by_shape() -> dict[tuple, str]:
    return {canonical_key(e.diagram): e.notation for e in _entries()}


def lookup(s: DecoratedSimplex) -> str | None:
    """Notation of the catalog simplex isomorphic to ``s``, if any."""
    return _by_shape().get(canonical_key(s))


# -- spherical second-type rules -----------------------------------------------


@dataclass(frozen=True)
class SphericalRule:
    """An indecomposable second-type decomposition ``P`` of spherical ``F``.

    ``targets`` lists the admissible ``P`` as sorted component-name tuples.
    """

    fundamental: str
    targets: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        rank = rank_of(self.fundamental)
        for t in self.targets:
            if sum(rank_of(c) for c in t) != rank:
                raise ValueError(f"{sum_name(t)} does not have rank {rank}")

    def target_names(self) -> list[str]:
        return [sum_name(t) for t in self.targets]


_FIXED_RULES = {
    "H3": ["3A1"],
    "F4": ["2A2"],
    "H4": ["A4", "2G2^(5)", "2A2", "H3+A1", "D4", "4A1"],
    "E6": ["A5+A1", "3A2"],
    "E7": ["D6+A1", "A5+A2", "2A3+A1", "A7", "D4+3A1", "7A1"],
    "E8": [
        "A8", "A7+A1", "A5+A2+A1", "2A4", "4A2", "A6+A2", "E7+A1",
        "D8", "D6+2A1", "D5+A3", "2D4", "D4+4A1", "2A3+2A1", "8A1",
    ],
}


def _d_block(m: int) -> list[str]:
    if m == 2:
        return ["A1", "A1"]
    if m == 3:
        return ["A3"]
    return [f"D{m}"]


def _partitions(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 1, -1):
        for rest in _partitions(n - part, part):
            yield (part,) + rest


def d_family_targets(n: int) -> list[tuple[str, ...]]:
    """Targets ``D_m1 + ... + D_mr`` of ``D_n`` with ``m_i > 1``, the trivial ``(n)`` excluded."""
    out = []
    for parts in _partitions(n, n):
        if parts == (n,):
            continue
        names = []
        for m in parts:
            names.extend(_d_block(m))
        out.append(tuple(parse_sum("+".join(names))))
    return out


@lru_cache(maxsize=None)
def spherical_rules(max_rank: int = 10) -> tuple[SphericalRule, ...]:
    """Indecomposable second-type decompositions of spherical simplices.

    The ``D_n`` family is expanded for ``4 <= n <= max_rank``.
    """
    rules = [
        SphericalRule(f, tuple(tuple(parse_sum(t)) for t in targets))
        for f, targets in _FIXED_RULES.items()
    ]
    for n in range(4, max_rank + 1):
        rules.append(SphericalRule(f"D{n}", tuple(d_family_targets(n))))
    return tuple(rules)


@lru_cache(maxsize=None)
def rules_by_fundamental() -> dict[str, frozenset[tuple[str, ...]]]:
    return {r.fundamental: frozenset(r.targets) for r in spherical_rules()}


# -- known facts about Euclidean links -----------------------------------------

# Self-similar Euclidean decompositions used in the realizable cases, with counts.
EUCLIDEAN_FACTS: dict[tuple[str, str], int] = {
    ("A3~", "A3~"): 8,
    ("D4~", "D4~"): 16,
}


# -- golden tables ---------------------------------------------------------------


@dataclass(frozen=True)
class GoldenRow:
    F: str
    P: str
    N: int
    s: int
    glue: tuple[int, int, int, int]

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("golden rows have N >= 2")
        dim = entry(self.F).dim
        if entry(self.P).dim != dim or not all(0 <= x <= dim for x in self.glue[2:]):
            raise ValueError(f"inconsistent golden row {self}")


_TABLE3 = [
    ("H2^(4)", "H3^(4)", 2, 1, (0, 0, 4, 4)),
    ("H6^4", "H9^4", 2, 1, (0, 0, 4, 4)),
    ("H7^4", "H9^4", 2, 1, (0, 0, 1, 1)),
    ("H5^4", "H6^4", 2, 1, (0, 0, 4, 4)),
    ("H5^4", "H7^4", 2, 1, (0, 0, 0, 0)),
    ("H4^4", "H7^4", 3, 2, (0, 0, 3, 3)),
    ("H4^4", "H8^4", 4, 2, (1, 0, 0, 1)),
    ("H2^4", "H4^4", 2, 1, (2, 2, 0, 0)),
    ("H2^4", "H5^4", 3, 2, (1, 0, 0, 3)),
    ("H1^4", "H3^4", 2, 1, (0, 0, 3, 3)),
    ("H1^4", "H5^4", 5, 3, (3, 2, 0, 0)),
    ("H10^5", "H11^5", 2, 1, (0, 0, 0, 0)),
    ("H8^5", "H10^5", 2, 1, (0, 0, 0, 0)),
    ("H7^5", "H12^5", 8, 3, (5, 5, 0, 0)),
    ("H7^5", "H10^5", 3, 2, (1, 0, 0, 1)),
    ("H5^5", "H8^5", 3, 2, (1, 0, 0, 4)),
    ("H5^5", "H7^5", 2, 1, (0, 0, 0, 0)),
    ("H3^5", "H8^5", 6, 3, (2, 2, 5, 5)),
    ("H3^5", "H7^5", 4, 3, (2, 0, 0, 2)),
    ("H2^5", "H8^5", 10, 4, (6, 6, 0, 0)),
    ("H2^5", "H4^5", 2, 1, (0, 0, 0, 0)),
    ("H1^5", "H5^5", 10, 4, (4, 6, 4, 1)),
    ("H1^5", "H3^5", 5, 4, (7, 0, 5, 2)),
    ("H1^5", "H2^5", 3, 2, (1, 0, 0, 1)),
    ("H1^6", "H2^6", 2, 1, (0, 0, 5, 5)),
    ("H2^7", "H3^7", 2, 1, (0, 0, 6, 6)),
    ("H2^8", "H3^8", 2, 1, (0, 0, 7, 7)),
    ("H2^9", "H3^9", 2, 1, (0, 0, 8, 8)),
]


def table3_rows() -> list[GoldenRow]:
    """Simple first-type decompositions of Coxeter simplices (28 rows)."""
    return [GoldenRow(*r) for r in _TABLE3]


def six_pairs() -> list[tuple[str, str, int]]:
    """Pairs surviving the volume, subdiagram and counting filters."""
    return [
        ("H3^4", "H9^4", 10),
        ("H5^5", "H12^5", 16),
        ("H7^5", "H11^5", 6),
        ("H4^5", "H11^5", 20),
        ("H1^8", "H4^8", 272),
        ("H1^9", "H3^9", 527),
    ]


def table5_pairs() -> list[tuple[str, str, int]]:
    """Realizable second-type pairs."""
    return [
        ("H3^4", "H9^4", 10),
        ("H4^5", "H11^5", 20),
        ("H1^8", "H4^8", 272),
        ("H1^9", "H3^9", 527),
    ]


def table4_counts() -> dict[str, int]:
    """Number of simple non-Coxeter first-type decompositions per compact fundamental in H^4."""
    return {"H1^(4)": 55, "H2^(4)": 1, "H3^(4)": 5, "H4^(4)": 2}


@dataclass(frozen=True)
class TilingFact:
    """Expected outcome of tiling ``P`` by ``F``.

    ``ideal`` is the multiset of tile counts at the ideal vertices of ``P``;
    ``at_vertex`` pins counts to vertices (0-based, vertex ``v`` opposite
    facet ``v``) where they are stated individually.
    """

    F: str
    P: str
    N: int
    ideal: tuple[int, ...] = ()
    at_vertex: tuple[tuple[int, int], ...] = ()


def tiling_facts() -> list[TilingFact]:
    return [
        TilingFact("H3^4", "H9^4", 10, ideal=(8, 1, 1)),
        TilingFact("H4^5", "H11^5", 20, ideal=(16, 1, 1, 1, 1)),
        # vertices A_3 and A_8 of P, facets numbered from 1
        TilingFact("H1^8", "H4^8", 272, at_vertex=((2, 200), (7, 72))),
        TilingFact("H1^9", "H3^9", 527, ideal=(270, 256, 1)),
    ]
