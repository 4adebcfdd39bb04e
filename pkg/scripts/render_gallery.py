#!/usr/bin/env python3
"""Render a gallery of partition pictures and transition graphs.

For each matrix in a built-in showcase (or those passed on the command
line) this writes, into ``--out``:

* ``<slug>_depth<k>.svg`` -- the universal-cover picture of the partition
  at refinement depth k (0 = the two cells, 1 = the canonical refinement,
  2+ = deeper cylinder cells), with eigenlines, lattice grid and the
  labelled corner points;
* ``<slug>_graph.dot`` -- the transition graph of the refinement, ready
  for Graphviz.

Example:

    python3 scripts/render_gallery.py --out gallery --depths 0 1 2
    python3 scripts/render_gallery.py --out gallery "2 3 1 2" "0 1 1 3"
"""

from __future__ import annotations

import argparse
import pathlib
import sys

from markov_torus import Mat2Z, build_markov_construction, render_construction_svg, to_dot

SHOWCASE = (
    Mat2Z(1, 1, 1, 0),    # golden-ratio stretch, orientation-reversing
    Mat2Z(2, 1, 1, 1),    # the classical area-preserving cat map
    Mat2Z(1, -1, -1, 2),  # conjugate of the cat map with mixed signs
    Mat2Z(2, 3, 1, 2),    # wider cells, eight-cell refinement
    Mat2Z(0, 1, 1, 3),    # negative contracting eigenvalue: slid cells
    Mat2Z(-1, -1, -1, 0), # negated golden case, both eigenvalues flipped
)


def parse_matrix(text: str) -> Mat2Z:
    parts = text.replace(",", " ").split()
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"need 4 integers, got {text!r}")
    try:
        return Mat2Z(*(int(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def slug(matrix: Mat2Z) -> str:
    def enc(k: int) -> str:
        return f"m{-k}" if k < 0 else str(k)

    return f"{enc(matrix.a)}_{enc(matrix.b)}_{enc(matrix.c)}_{enc(matrix.d)}"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description=__doc__.splitlines()[0], allow_abbrev=False
    )
    parser.add_argument("matrices", nargs="*", type=parse_matrix,
                        help='matrices as "a b c d" (default: built-in showcase)')
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path("gallery"),
                        help="output directory (default ./gallery)")
    parser.add_argument("--depths", type=int, nargs="+", default=[0, 1],
                        help="refinement depths to draw (default 0 1)")
    args = parser.parse_args(argv)

    matrices = args.matrices or list(SHOWCASE)
    args.out.mkdir(parents=True, exist_ok=True)
    written = 0
    for matrix in matrices:
        construction = build_markov_construction(matrix)
        name = slug(matrix)
        for depth in args.depths:
            svg = render_construction_svg(construction, depth=depth)
            path = args.out / f"{name}_depth{depth}.svg"
            path.write_text(svg, encoding="utf-8")
            written += 1
        dot = to_dot(construction.refined_graph,
                     labels=construction.refined.labels)
        (args.out / f"{name}_graph.dot").write_text(dot, encoding="utf-8")
        written += 1
        print(f"{matrix}: case {construction.base.sign_case.name}, "
              f"N* = {construction.refined.n} -> "
              f"{name}_depth{{{','.join(map(str, args.depths))}}}.svg, "
              f"{name}_graph.dot")
    print(f"wrote {written} files to {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
