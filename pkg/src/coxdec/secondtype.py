"""Candidate pairs (F, P) for decompositions with all dihedral angles fundamental.

Every ordered pair of catalog simplices of one dimension passes through four
filters:

``volume``
    ``Vol(P) / Vol(F)`` must be an integer ``N >= 2``.
``subdiagram``
    every vertex link of ``P`` equals, or is tiled in the fundamental way by,
    some vertex link of ``F``.
``counting``
    ``N = 2`` is impossible; the finite vertices of ``P`` cannot absorb more
    tile vertices than the tiles have; for ``N < 2(n + 1)`` some vertex of
    ``P`` must be covered by more than one tile.
``budget``
    the ideal vertices of the ``N`` tiles must be distributed over the ideal
    vertices of ``P`` with admissible incidence counts.

Each rule that removes a pair is reported under a short rule id so that the
case analysis can be replayed from the report.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from .catalog import CatalogEntry, hyperbolic_simplices, rules_by_fundamental
from .diagram import DecoratedSimplex, canonical_key, remove_node
from .geometry import Kind, classify_simplex
from .types import component_types, group_order, rank_of, sum_name, type_name

__all__ = [
    "FilterResult",
    "LinkWitness",
    "VertexBudget",
    "CandidatePair",
    "STAGES",
    "elliptic_decomposition",
    "parabolic_compatible",
    "links_compatible",
    "volume_filter",
    "subdiagram_filter",
    "counting_filter",
    "ideal_budget_filter",
    "run_pipeline",
    "realizable_pairs",
]

STAGES = ("volume", "subdiagram", "counting", "budget")
VOLUME_RTOL = 1e-4


@dataclass(frozen=True)
class FilterResult:
    passed: bool
    rule: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"passed": self.passed, "rule": self.rule, "detail": self.detail}


# -- link compatibility ---------------------------------------------------------


def _names(s: DecoratedSimplex) -> tuple[str, ...]:
    names = component_types(s)
    if any(n is None for n in names):
        raise ValueError(f"unrecognised component in {s}")
    return tuple(names)


def elliptic_decomposition(p_names, f_names) -> list[tuple[str, tuple[str, ...]]] | None:
    """Match spherical ``P`` (component names) to fundamental ``F`` componentwise.

    Each component of ``F`` receives a group of components of ``P`` of the
    same total rank that is either the component itself or one of its
    indecomposable second-type targets.  Returns the matching as a list of
    ``(f component, p group)`` or ``None``.
    """
    rules = rules_by_fundamental()
    f_sorted = sorted(f_names, key=lambda x: -rank_of(x))
    return _match(tuple(sorted(p_names)), f_sorted, rules)


def _match(p_left: tuple[str, ...], f_left: list[str], rules) -> list | None:
    if not f_left:
        return [] if not p_left else None
    f0, rest = f_left[0], f_left[1:]
    target_rank = rank_of(f0)
    for group in _groups(p_left, target_rank):
        key = tuple(sorted(group))
        allowed = key == (f0,) or tuple(_ordered(key)) in rules.get(f0, ())
        if not allowed:
            continue
        remaining = list(p_left)
        for g in group:
            remaining.remove(g)
        sub = _match(tuple(remaining), rest, rules)
        if sub is not None:
            return [(f0, tuple(_ordered(key)))] + sub
    return None


def _ordered(names) -> list[str]:
    from .types import parse_sum

    return parse_sum("+".join(names)) if names else []


def _groups(pool: tuple[str, ...], rank: int):
    """Sub-multisets of ``pool`` with total rank ``rank`` (each yielded once)."""
    items = sorted(Counter(pool).items())
    seen = set()

    def rec(idx, left, chosen):
        if left == 0:
            key = tuple(chosen)
            if key not in seen:
                seen.add(key)
                yield list(chosen)
            return
        if idx == len(items):
            return
        name, count = items[idx]
        r = rank_of(name)
        for take in range(min(count, left // r), -1, -1):
            yield from rec(idx + 1, left - take * r, chosen + [name] * take)

    yield from rec(0, rank, [])


@lru_cache(maxsize=None)
def _parabolic_compatible_keys(p_key, f_key) -> bool:
    return _parabolic_compatible(_DIAGRAMS[p_key], _DIAGRAMS[f_key])


_DIAGRAMS: dict[tuple, DecoratedSimplex] = {}


def parabolic_compatible(p: DecoratedSimplex, f: DecoratedSimplex) -> bool:
    """Can the Euclidean simplex ``p`` be tiled by ``f`` with fundamental angles?

    Equal affine types are accepted (self-similar tilings).  For different
    types the vertex-link condition is applied one level down: every
    vertex link of ``p`` must equal, or be tiled in the fundamental way by,
    a vertex link of ``f``.
    """
    pk, fk = canonical_key(p), canonical_key(f)
    _DIAGRAMS.setdefault(pk, p)
    _DIAGRAMS.setdefault(fk, f)
    return _parabolic_compatible_keys(pk, fk)


def _parabolic_compatible(p: DecoratedSimplex, f: DecoratedSimplex) -> bool:
    if canonical_key(p) == canonical_key(f):
        return True
    f_links = [_names(remove_node(f, w)) for w in range(f.size)]
    for v in range(p.size):
        pv = _names(remove_node(p, v))
        if not any(elliptic_decomposition(pv, fw) is not None for fw in f_links):
            return False
    return True


def links_compatible(p: DecoratedSimplex, f: DecoratedSimplex) -> bool:
    """Vertex link ``p`` of P against vertex link ``f`` of F (same kind required)."""
    kp, kf = classify_simplex(p).kind, classify_simplex(f).kind
    if kp is not kf:
        return False
    if kp is Kind.ELLIPTIC:
        return elliptic_decomposition(_names(p), _names(f)) is not None
    if kp is Kind.PARABOLIC:
        return parabolic_compatible(p, f)
    return False


def _link_order(names: tuple[str, ...]) -> int:
    return math.prod(group_order(n) for n in names)


# -- filters ----------------------------------------------------------------------


def volume_filter(F: CatalogEntry, P: CatalogEntry) -> int | None:
    """Integer volume ratio ``N >= 2`` or ``None``."""
    ratio = P.volume / F.volume
    n = round(ratio)
    if n < 2 or abs(ratio - n) / n >= VOLUME_RTOL:
        return None
    return n


@dataclass(frozen=True)
class LinkWitness:
    """How the link of vertex ``v`` of P is matched by vertex ``w`` of F."""

    v: int
    w: int | None
    relation: str  # "equal", "tiled" or "none"
    p_link: str
    f_link: str | None = None
    tiles: int | None = None  # tile count at a finite vertex

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("v", "w", "relation", "p_link", "f_link", "tiles")}


@dataclass(frozen=True)
class SubdiagramReport(FilterResult):
    witnesses: tuple[LinkWitness, ...] = ()
    nontrivial: tuple[int, ...] = ()  # vertices of P that can carry several tiles

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["witnesses"] = [w.to_dict() for w in self.witnesses]
        return d


def _link_name(s: DecoratedSimplex) -> str:
    if classify_simplex(s).kind is Kind.PARABOLIC:
        return type_name(s) or "?"
    return sum_name(_names(s))


def _vertex_witnesses(F: CatalogEntry, P: CatalogEntry, v: int) -> list[LinkWitness]:
    pv = remove_node(P.diagram, v)
    p_kind = classify_simplex(pv).kind
    pname = _link_name(pv)
    out = []
    for w in range(F.diagram.size):
        fw = remove_node(F.diagram, w)
        if classify_simplex(fw).kind is not p_kind:
            continue
        fname = _link_name(fw)
        if canonical_key(pv) == canonical_key(fw):
            tiles = 1 if p_kind is Kind.ELLIPTIC else None
            out.append(LinkWitness(v, w, "equal", pname, fname, tiles))
        elif links_compatible(pv, fw):
            tiles = None
            if p_kind is Kind.ELLIPTIC:
                tiles = _link_order(_names(fw)) // _link_order(_names(pv))
            out.append(LinkWitness(v, w, "tiled", pname, fname, tiles))
    return out


def subdiagram_filter(F: CatalogEntry, P: CatalogEntry) -> SubdiagramReport:
    """Every vertex link of P must be matched by a vertex link of F.

    The report keeps, per vertex, the cheapest finite match (fewest tiles,
    ``|W(f)| / |W(p)|`` for a spherical link) for use by the counting filter.
    """
    witnesses = []
    nontrivial = []
    for v in range(P.diagram.size):
        options = _vertex_witnesses(F, P, v)
        if not options:
            pname = _link_name(remove_node(P.diagram, v))
            witnesses.append(LinkWitness(v, None, "none", pname))
            return SubdiagramReport(
                False, "subdiagram", f"link {pname} at vertex {v} has no match", tuple(witnesses)
            )
        witnesses.append(min(options, key=lambda o: (o.relation != "equal", o.tiles or 0)))
        p_kind = classify_simplex(remove_node(P.diagram, v)).kind
        if any(o.relation == "tiled" for o in options) or (p_kind is Kind.PARABOLIC):
            nontrivial.append(v)
    return SubdiagramReport(True, "subdiagram", "", tuple(witnesses), tuple(nontrivial))


def counting_filter(F: CatalogEntry, P: CatalogEntry, N: int,
                    report: SubdiagramReport | None = None) -> FilterResult:
    """Counting arguments on the number of tiles.

    ``two-tiles``
        ``N = 2`` always leaves a non-fundamental angle.
    ``single-tile-vertices``
        if no vertex of P can lie in several tiles then ``N >= 2(n + 1)``.
    ``finite-vertex-count``
        a finite vertex of P whose link is tiled by ``c`` links of F uses
        ``c`` finite vertices of distinct tiles, and the ``N`` tiles only
        have ``N`` times the number of finite vertices of F.
    """
    n = P.dim
    if N == 2:
        return FilterResult(False, "two-tiles", "a two-tile decomposition has a non-fundamental angle")
    report = report or subdiagram_filter(F, P)
    finite = [w for w in report.witnesses if w.tiles is not None]
    need = sum(w.tiles for w in finite)
    have = N * sum(
        1 for w in range(F.diagram.size)
        if classify_simplex(remove_node(F.diagram, w)).kind is Kind.ELLIPTIC
    )
    if need > have:
        terms = " + ".join(str(w.tiles) for w in finite)
        return FilterResult(
            False,
            "finite-vertex-count",
            f"finite vertices of P need at least {terms} = {need} tile vertices"
            f" > {have} = {N} x {have // N} available",
        )
    if N < 2 * (n + 1):
        if not report.nontrivial:
            return FilterResult(
                False,
                "single-tile-vertices",
                f"every vertex lies in one tile, which needs N >= {2 * (n + 1)} > {N}",
            )
    return FilterResult(True, "counting")


# -- ideal vertex budget -------------------------------------------------------------


@dataclass
class VertexBudget:
    """Distribution of the tiles' ideal vertices over the ideal vertices of P.

    ``options[v]`` maps each F ideal type that can tile the cusp ``v`` to the
    admissible incidence counts.  ``budgets[t]`` is ``N`` times the number of
    ideal vertices of F of type ``t``.
    """

    p_ideal: dict[int, str]
    f_ideal: dict[str, int]
    N: int
    budgets: dict[str, int]
    options: dict[int, dict[str, list[int]]]
    rules: dict[int, dict[str, list[str]]] = field(default_factory=dict)
    feasible: bool = False
    witness: dict[int, tuple[str, int]] | None = None
    certificate: list[str] = field(default_factory=list)
    searched: int = 0

    def to_dict(self) -> dict:
        return {
            "p_ideal": {str(k): v for k, v in self.p_ideal.items()},
            "f_ideal": self.f_ideal,
            "N": self.N,
            "budgets": self.budgets,
            "options": {str(v): {t: _ranges(c) for t, c in o.items()} for v, o in self.options.items()},
            "feasible": self.feasible,
            "witness": None if self.witness is None else {str(v): list(x) for v, x in self.witness.items()},
            "certificate": self.certificate,
        }


def _ranges(values: list[int]) -> str:
    if not values:
        return "{}"
    parts = []
    start = prev = values[0]
    for x in values[1:] + [None]:
        if x is not None and x == prev + 1:
            prev = x
            continue
        parts.append(str(start) if start == prev else f"{start}..{prev}")
        if x is not None:
            start = prev = x
    return "{" + ", ".join(parts) + "}"


def _admissible(p_type: str, f_type: str, N: int, n: int) -> tuple[list[int], list[str]]:
    """Incidence counts for a cusp of type ``p_type`` tiled by cusps ``f_type``."""
    if p_type == f_type:
        bound = 2 ** (n - 1)
        return [1] + list(range(bound, N + 1)), [f"self-similar: 1 or >= 2^{n - 1} = {bound}"]
    values = list(range(3, N + 1))
    rules = ["different types: at least 2 tiles", "exactly 2 tiles give a non-fundamental angle"]
    if p_type == "D4~":
        values = [c for c in values if c != 3]
        rules.append("D4~ is not tiled by three B4~ or F4~ cusps")
    return values, rules


def ideal_budget_filter(F: CatalogEntry, P: CatalogEntry, N: int) -> VertexBudget:
    """Exhaustive search for admissible ideal-vertex incidences."""
    n = P.dim
    f_links = {}
    for w in range(F.diagram.size):
        fw = remove_node(F.diagram, w)
        if classify_simplex(fw).kind is Kind.PARABOLIC:
            f_links.setdefault(type_name(fw), fw)
    f_counts = Counter(
        type_name(remove_node(F.diagram, w))
        for w in range(F.diagram.size)
        if classify_simplex(remove_node(F.diagram, w)).kind is Kind.PARABOLIC
    )
    p_ideal = {}
    options: dict[int, dict[str, list[int]]] = {}
    rules: dict[int, dict[str, list[str]]] = {}
    for v in range(P.diagram.size):
        pv = remove_node(P.diagram, v)
        if classify_simplex(pv).kind is not Kind.PARABOLIC:
            continue
        pt = type_name(pv)
        p_ideal[v] = pt
        options[v] = {}
        rules[v] = {}
        for ft, fw in sorted(f_links.items()):
            if not parabolic_compatible(pv, fw):
                continue
            values, why = _admissible(pt, ft, N, n)
            if values:
                options[v][ft] = values
                rules[v][ft] = why
    budgets = {t: N * c for t, c in sorted(f_counts.items())}
    budget = VertexBudget(p_ideal, dict(sorted(f_counts.items())), N, budgets, options, rules)
    _search(budget)
    if not budget.feasible:
        budget.certificate = _certificate(budget)
    return budget


def _search(b: VertexBudget) -> None:
    verts = sorted(b.options)
    types = sorted(b.budgets)
    if not verts:
        b.feasible = all(x == 0 for x in b.budgets.values())
        b.witness = {} if b.feasible else None
        return
    count = 0
    seen = set()

    def rec(i, remaining, chosen):
        nonlocal count
        count += 1
        if i == len(verts):
            return dict(chosen) if all(r == 0 for r in remaining) else None
        state = (i, remaining)
        if state in seen:
            return None
        for t, values in sorted(b.options[verts[i]].items()):
            k = types.index(t)
            for c in values:
                if c > remaining[k]:
                    break
                nxt = remaining[:k] + (remaining[k] - c,) + remaining[k + 1:]
                chosen.append((verts[i], (t, c)))
                got = rec(i + 1, nxt, chosen)
                chosen.pop()
                if got is not None:
                    return got
        seen.add(state)
        return None

    found = rec(0, tuple(b.budgets[t] for t in types), [])
    b.searched = count
    b.feasible = found is not None
    b.witness = found


def _sumset(sets: list[set[int]], cap: int) -> set[int]:
    acc = {0}
    for s in sets:
        acc = {a + x for a in acc for x in s if a + x <= cap}
    return acc


def _certificate(b: VertexBudget) -> list[str]:
    lines = []
    total = sum(b.budgets.values())
    for v in sorted(b.options):
        if not b.options[v]:
            lines.append(f"cusp {v} ({b.p_ideal[v]}): no ideal vertex of F can tile it")
    mins = {v: min(min(c) for c in o.values()) for v, o in b.options.items() if o}
    if mins and sum(mins.values()) > total:
        terms = " + ".join(str(mins[v]) for v in sorted(mins))
        lines.append(
            f"aggregate: {len(mins)} cusps need at least {terms} = {sum(mins.values())}"
            f" tile vertices > {total} = {b.N} x {sum(b.f_ideal.values())} available"
        )
    for t, budget in b.budgets.items():
        forced = [v for v, o in b.options.items() if set(o) == {t}]
        optional = [v for v, o in b.options.items() if t in o and len(o) > 1]
        sets = [set(b.options[v][t]) for v in forced]
        sets += [set(b.options[v][t]) | {0} for v in optional]
        reach = _sumset(sets, budget)
        if budget not in reach:
            desc = ", ".join(f"cusp {v} {_ranges(b.options[v][t])}" for v in forced + optional)
            low = sorted(x for x in reach if x <= budget)
            lines.append(
                f"type {t}: budget {budget} = {b.N} x {b.f_ideal[t]}; counts {desc or 'none'};"
                f" attainable sums up to the budget {low} miss {budget}"
            )
    lines.append(f"exhaustive search over incidence assignments found no solution ({b.searched} states)")
    return lines


# -- pipeline -------------------------------------------------------------------------


@dataclass
class CandidatePair:
    F: CatalogEntry
    P: CatalogEntry
    N: int | None
    reports: dict[str, object] = field(default_factory=dict)
    budget: VertexBudget | None = None

    @property
    def key(self) -> tuple[str, str, int | None]:
        return (self.F.notation, self.P.notation, self.N)

    def passed(self, stage: str = "counting") -> bool:
        idx = STAGES.index(stage)
        for s in STAGES[: idx + 1]:
            if s == "budget":
                if self.budget is None or not self.budget.feasible:
                    return False
            else:
                r = self.reports.get(s)
                if r is None or not r.passed:
                    return False
        return True

    def to_dict(self) -> dict:
        d = {"F": self.F.notation, "P": self.P.notation, "N": self.N}
        d["reports"] = {k: v.to_dict() for k, v in self.reports.items()}
        if self.budget is not None:
            d["budget"] = self.budget.to_dict()
        return d


def evaluate_pair(F: CatalogEntry, P: CatalogEntry, stage: str = "budget") -> CandidatePair:
    """Run the filters in order up to ``stage``, stopping at the first failure."""
    stop = STAGES.index(stage)
    N = volume_filter(F, P)
    cand = CandidatePair(F, P, N)
    ratio = P.volume / F.volume
    cand.reports["volume"] = FilterResult(N is not None, "volume", f"ratio {ratio:.6f}")
    if N is None or stop < 1:
        return cand
    sub = subdiagram_filter(F, P)
    cand.reports["subdiagram"] = sub
    if not sub.passed or stop < 2:
        return cand
    cnt = counting_filter(F, P, N, sub)
    cand.reports["counting"] = cnt
    if not cnt.passed or stop < 3:
        return cand
    cand.budget = ideal_budget_filter(F, P, N)
    return cand


def run_pipeline(n: int, stage: str = "budget") -> list[CandidatePair]:
    """Ordered pairs of dimension ``n`` surviving the volume, subdiagram and counting filters.

    With ``stage="budget"`` the survivors carry their ideal-vertex budget;
    earlier stages stop the evaluation there.
    """
    entries = hyperbolic_simplices(n)
    keep_stage = "counting" if stage == "budget" else stage
    out = []
    for F in entries:
        for P in entries:
            if F is P:
                continue
            cand = evaluate_pair(F, P, stage)
            if cand.passed(keep_stage):
                out.append(cand)
    out.sort(key=lambda c: (c.F.notation, c.P.notation))
    return out


def realizable_pairs(n: int) -> list[CandidatePair]:
    """Candidates whose ideal-vertex budget is feasible."""
    return [c for c in run_pipeline(n, "budget") if c.budget is not None and c.budget.feasible]
