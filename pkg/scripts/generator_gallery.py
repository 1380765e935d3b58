#!/usr/bin/env python3
"""Construct and print explicit liftable-field generators for the corpus
germs whose level maps become bijective.

    python scripts/generator_gallery.py [name ...]
"""

import sys

import germlift as gl
from germlift.corpus import CORPUS


def show(item):
    g = gl.load_multigerm(item.document)
    print(f"== {item.name}: {item.summary}")
    try:
        gens = gl.construct_generators(g)
    except gl.HypothesisNotMetError as exc:
        print(f"   skipped: {exc}")
        return
    print(f"   bijective level {gens.level}, {gens.rho} generators, "
          f"jet order {gens.jet_order}")
    for k, (gen, wit) in enumerate(zip(gens.generators, gens.witnesses)):
        kind = "exact" if wit.exact else f"residual at degree {wit.residual_order}"
        comps = " , ".join(gen.describe())
        print(f"   xi_{k + 1} = ({comps})   [{kind}]")
    print()


def main():
    wanted = set(sys.argv[1:])
    for item in CORPUS:
        if wanted and item.name not in wanted:
            continue
        if not wanted and item.document["n"] > 2:
            continue  # keep the default gallery quick
        show(item)


if __name__ == "__main__":
    main()
