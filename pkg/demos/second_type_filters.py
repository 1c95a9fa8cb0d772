"""Walk the second-type candidate filters through dimension 5.

Every ordered pair of catalog simplices is run through the volume,
subdiagram, counting and ideal-budget filters; the first rule that removes a
pair is printed, followed by the certificates of the pairs that survive to
the budget stage.
"""

from collections import Counter

from coxdec.catalog import hyperbolic_simplices
from coxdec.secondtype import STAGES, evaluate_pair


def first_failure(cand):
    for stage in STAGES[:-1]:
        r = cand.reports.get(stage)
        if r is not None and not r.passed:
            return stage, r.rule
    return None


def main():
    entries = hyperbolic_simplices(5)
    removed = Counter()
    survivors = []
    for F in entries:
        for P in entries:
            if F is P:
                continue
            cand = evaluate_pair(F, P)
            why = first_failure(cand)
            if why is None:
                survivors.append(cand)
            else:
                removed[why] += 1
    print(f"{len(entries) ** 2 - len(entries)} ordered pairs in H^5")
    for (stage, rule), count in sorted(removed.items()):
        print(f"  {count:4d} removed at {stage} ({rule})")
    print("budget stage:")
    for cand in survivors:
        verdict = "feasible" if cand.budget.feasible else "infeasible"
        print(f"  ({cand.F}, {cand.P}), N = {cand.N}: {verdict}")
        for line in cand.budget.certificate:
            print(f"      {line}")


if __name__ == "__main__":
    main()
