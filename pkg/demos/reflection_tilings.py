"""Tile the realizable second-type targets by reflections.

For each pair the seed tile is placed at a vertex of P, the orbit is closed
up by reflecting across interior facets, and the tile counts at the
vertices of P are reported together with the ridge flags.
"""

import time

from coxdec.catalog import table5_pairs
from coxdec.firsttype import classify_type
from coxdec.verifier import check_normal_combination, verify


def main():
    for F, P, N in table5_pairs():
        t0 = time.perf_counter()
        d = verify(F, P)
        res = d.tiling
        print(f"{F} in {P}: {res.N} tiles (volume ratio {N}), depth {res.depth}, "
              f"{len(res.mirrors)} mirrors, {time.perf_counter() - t0:.2f} s")
        print(f"    tiles per vertex of P: {dict(sorted(res.incidences.items()))}")
        print(f"    ideal vertices: {sorted(res.ideal)}")
        print(f"    all ridges fundamental: {all(res.fundamental.values())}, type: {classify_type(d)}")
    cert = check_normal_combination()
    print(f"extra normal of H4^8 from H1^8: norm {cert.norm:.9f}, reflection word {cert.word}")


if __name__ == "__main__":
    main()
