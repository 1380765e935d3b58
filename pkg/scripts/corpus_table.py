#!/usr/bin/env python3
"""Print the invariant table of the built-in corpus.

Run from the repository root:

    python scripts/corpus_table.py
"""

import time

import germlift as gl
from germlift.corpus import CORPUS


def main():
    header = f"{'germ':28} {'n->p':>6} {'|S|':>3} {'delta':>5} {'gamma':>5} {'i1':>4} {'i2':>4} {'gens':>5}  time"
    print(header)
    print("-" * len(header))
    for item in CORPUS:
        g = gl.load_multigerm(item.document)
        t0 = time.perf_counter()
        rep = gl.indices(g)
        delta = gl.stabilization(g).delta
        gamma = gl.graded_gamma(g, 0)
        try:
            count = str(gl.min_generators(g))
        except gl.HypothesisNotMetError:
            count = "-"
        elapsed = time.perf_counter() - t0
        i1 = rep.i1 if rep.i1 is not None else f">{rep.kmax}"
        i2 = rep.i2 if rep.i2 is not None else "-inf"
        print(
            f"{item.name:28} {g.n:>2}->{g.p:<2} {g.num_branches:>3} "
            f"{delta:>5} {gamma:>5} {str(i1):>4} {str(i2):>4} {count:>5}  {elapsed:.2f}s"
        )


if __name__ == "__main__":
    main()
