"""Grow first-type decompositions of H1^5 by gluing.

Shapes are produced breadth first; the Coxeter ones are checked for
simplicity, which singles out the decompositions that are not refinements
of a coarser Coxeter decomposition.
"""

from coxdec.firsttype import enumerate_decompositions, mark_simple


def main():
    enum = enumerate_decompositions("H1^5")
    print(f"{len(enum.simplices)} shapes generated (complete: {enum.complete})")
    by_step = {}
    for g in enum.simplices:
        by_step.setdefault(g.s, []).append(g)
    for s in sorted(by_step):
        print(f"  step {s}: {len(by_step[s])} shapes")
    targets = enum.coxeter_targets()
    mark_simple(enum, targets)
    print("Coxeter targets:")
    for g in sorted(targets, key=lambda g: g.N):
        w = g.witness.tuple if g.witness else ()
        print(f"  {g.name:6s} N = {g.N:3d} s = {g.s} glue {w} {'simple' if g.simple else 'refinable'}")


if __name__ == "__main__":
    main()
