"""Comparison of pipeline output with the golden tables.

Every check returns :class:`Check` records; the command line and the
acceptance tests share these so that both report identical verdicts.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

from .catalog import (
    DIMENSIONS,
    entry,
    six_pairs,
    table3_rows,
    table4_counts,
    table5_pairs,
    tiling_facts,
)
from .firsttype import enumerate_decompositions, mark_simple
from .secondtype import run_pipeline
from .verifier import VerificationError, alternate_numbering_refutation, check_normal_combination, verify

__all__ = [
    "Check",
    "check_volumes",
    "check_six_pairs",
    "check_table5",
    "check_tilings",
    "check_certificate",
    "check_table3",
    "check_table4",
    "SCOPES",
    "run_scope",
]

VOLUME_RTOL = 1e-4


@dataclass
class Check:
    """One pass/fail verdict; ``soft`` checks are reported but never fail a run."""

    name: str
    passed: bool
    detail: str = ""
    soft: bool = False
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else ("DIFF" if self.soft else "FAIL")
        return f"[{tag}] {self.name}: {self.detail} ({self.seconds:.2f} s)"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "soft": self.soft,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
            "data": self.data,
        }


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        checks = fn(*args, **kwargs)
        dt = time.perf_counter() - t0
        for c in checks:
            c.seconds = c.seconds or dt / len(checks)
        return checks

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_volumes() -> list[Check]:
    """Volume ratios of the realizable second-type pairs are integers."""
    out = []
    for F, P, N in table5_pairs():
        ratio = entry(P).volume / entry(F).volume
        err = abs(ratio - N) / N
        out.append(Check(f"volume {P}/{F}", err <= VOLUME_RTOL, f"ratio {ratio:.6f}, expected {N}",
                         data={"ratio": ratio, "N": N}))
    return out


def _pipeline_keys(stage: str) -> set[tuple[str, str, int]]:
    return {c.key for n in DIMENSIONS for c in run_pipeline(n, stage)}


@_timed
def check_six_pairs() -> list[Check]:
    """Volume, subdiagram and counting filters leave exactly the golden pairs."""
    got = _pipeline_keys("counting")
    want = set(six_pairs())
    return [_set_check("six pairs", got, want)]


def _set_check(name: str, got: set, want: set) -> Check:
    missing, extra = sorted(want - got), sorted(got - want)
    detail = f"{len(got)} pairs"
    if missing:
        detail += f", missing {missing}"
    if extra:
        detail += f", unexpected {extra}"
    return Check(name, not missing and not extra, detail,
                 data={"pairs": [list(k) for k in sorted(got)]})


@_timed
def check_table5() -> list[Check]:
    """The ideal-vertex budget removes exactly the two infeasible pairs, with certificates."""
    pairs = [c for n in DIMENSIONS for c in run_pipeline(n, "budget")]
    feasible = {c.key for c in pairs if c.budget is not None and c.budget.feasible}
    out = [_set_check("table 5", feasible, set(table5_pairs()))]
    certs = {c.key[:2]: c.budget.certificate for c in pairs if c.budget and not c.budget.feasible}
    expected = {
        ("H5^5", "H12^5"): "type F4~: budget 16 = 16 x 1",
        ("H7^5", "H11^5"): "20 tile vertices > 18",
    }
    for key, needle in expected.items():
        lines = certs.get(key, [])
        ok = any(needle in line for line in lines)
        out.append(Check(f"budget certificate {key[0]}/{key[1]}", ok,
                         lines[0] if ok and lines else f"no certificate containing {needle!r}",
                         data={"certificate": lines}))
    return out


@_timed
def check_tilings() -> list[Check]:
    """Reflection tilings have the golden tile counts, incidences and fundamental ridges."""
    out = []
    for fact in tiling_facts():
        name = f"tiling {fact.F} in {fact.P}"
        t0 = time.perf_counter()
        try:
            d = verify(fact.F, fact.P)
        except VerificationError as exc:
            out.append(Check(name, False, f"verification failed: {exc}"))
            continue
        res = d.tiling
        problems = []
        if res.N != fact.N:
            problems.append(f"N = {res.N}, expected {fact.N}")
        if fact.ideal:
            got = sorted(res.ideal_incidences.values(), reverse=True)
            if got != sorted(fact.ideal, reverse=True):
                problems.append(f"ideal incidences {got}, expected {sorted(fact.ideal, reverse=True)}")
        for v, count in fact.at_vertex:
            if res.incidences.get(v) != count:
                problems.append(f"vertex {v} in {res.incidences.get(v)} tiles, expected {count}")
        if not all(res.fundamental.values()):
            bad = [k for k, f in res.fundamental.items() if not f]
            problems.append(f"non-fundamental ridges {bad}")
        detail = "; ".join(problems) or (
            f"N = {res.N}, ideal incidences {dict(sorted(res.ideal_incidences.items()))}, all ridges fundamental"
        )
        out.append(Check(name, not problems, detail, seconds=time.perf_counter() - t0,
                         data=res.to_dict()))
    return out


@_timed
def check_certificate() -> list[Check]:
    """Normal-combination certificate for (H1^8, H4^8) and the lattice refutation."""
    cert = check_normal_combination()
    ref = alternate_numbering_refutation()
    return [
        Check("normal combination", cert.passed,
              f"norm {cert.norm:.9f}, gram {'ok' if cert.gram_matches else 'mismatch'}, {cert.detail}",
              data=cert.to_dict()),
        Check("alternate numbering refuted", ref.refuted,
              f"coefficients {['%.4f' % c for c in ref.coefficients or []]}, in lattice {ref.integral}",
              data=ref.to_dict()),
    ]


@_timed
def check_table3(workers: int = 1) -> list[Check]:
    """Each golden row appears as a simple Coxeter target of its fundamental."""
    rows = table3_rows()
    found: dict[str, Counter] = {}
    for F in dict.fromkeys(r.F for r in rows):
        enum = enumerate_decompositions(F, workers=workers)
        targets = enum.coxeter_targets()
        mark_simple(enum, targets)
        found[F] = Counter((g.name, g.N) for g in targets if g.simple)
    out = []
    for r in rows:
        ok = found[r.F][(r.P, r.N)] > 0
        out.append(Check(f"table 3 {r.F} -> {r.P}", ok,
                         f"N = {r.N} {'found' if ok else 'not found'}"))
    golden = Counter((r.F, r.P, r.N) for r in rows)
    extra = sorted((F, P, N) for F, c in found.items() for (P, N) in c if (F, P, N) not in golden)
    out.append(Check("table 3 no extra rows", not extra, f"extra {extra}" if extra else "none"))
    return out


@_timed
def check_table4(workers: int = 1) -> list[Check]:
    """Simple non-Coxeter decompositions per compact H^4 fundamental (soft)."""
    out = []
    for F, want in table4_counts().items():
        t0 = time.perf_counter()
        enum = enumerate_decompositions(F, workers=workers)
        mark_simple(enum)
        got = sum(1 for g in enum.simplices if g.N > 1 and g.simple and not g.is_coxeter)
        detail = f"{got} simple decompositions, table lists {want}"
        if not enum.complete:
            detail += f" (search bounded by {enum.limits})"
        out.append(Check(f"table 4 {F}", got == want, detail, soft=True,
                         seconds=time.perf_counter() - t0))
    return out


SCOPES = {
    "volumes": [check_volumes],
    "six-pairs": [check_six_pairs],
    "table5": [check_table5],
    "tilings": [check_tilings],
    "certificate": [check_certificate],
    "table3": [check_table3],
    "table4": [check_table4],
}
SCOPES["all"] = [fn for scope in list(SCOPES.values()) for fn in scope]


def run_scope(scope: str) -> list[Check]:
    """Run every check of ``scope`` (a key of :data:`SCOPES`)."""
    if scope not in SCOPES:
        raise KeyError(f"unknown scope {scope!r}; choose from {sorted(SCOPES)}")
    return [c for fn in SCOPES[scope] for c in fn()]
