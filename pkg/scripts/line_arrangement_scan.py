#!/usr/bin/env python3
"""Scan plane line arrangements: k rational-slope lines through the origin.

For each k the script reports (i1, i2) of the arrangement multigerm; on
these models i1 grows linearly with the line count while i2 stays at 0.

    python scripts/line_arrangement_scan.py [max_lines]
"""

import sys

import germlift as gl


def arrangement(k):
    branches = [[f"x1", f"{s}*x1"] if s else ["x1", "0"] for s in range(k - 1)]
    branches.append(["0", "x1"])
    return gl.multigerm(1, 2, branches)


def main():
    max_lines = int(sys.argv[1]) if len(sys.argv) > 1 else 6
    for k in range(2, max_lines + 1):
        g = arrangement(k)
        rep = gl.indices(g, kmax=max(k, 3))
        try:
            count = str(gl.min_generators(g, kmax=max(k, 3)))
        except gl.HypothesisNotMetError:
            count = "-"
        print(
            f"{k} lines: delta={gl.stabilization(g).delta} "
            f"i1={rep.i1} i2={rep.i2} generators={count}"
        )


if __name__ == "__main__":
    main()
