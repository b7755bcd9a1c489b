"""Does the congruence Theta of the cube construction depend on the base point?

For each non-abelian group in the corpus small enough for the cube, extend
ker d from B to A^3 once per base point of B and count distinct results.
"""
import time

from uawb.corpus import builtin_corpus
from uawb.gumm import cube_base_point_probe


def main():
    for e in builtin_corpus():
        if e.kind != "group" or e.abelian_group or e.algebra.size ** 3 > 1024:
            continue
        t0 = time.perf_counter()
        probe = cube_base_point_probe(e.algebra, e.difference_term)
        distinct = sorted(set(probe.values()), key=lambda p: p.reps)
        print(f"{e.name}: {len(probe)} base points, {len(distinct)} distinct Theta "
              f"({time.perf_counter() - t0:.1f}s)")
        for t in distinct:
            print(f"  blocks: {t.num_blocks}")


if __name__ == "__main__":
    main()
