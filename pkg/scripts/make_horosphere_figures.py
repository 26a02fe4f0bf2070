"""Render horosphere level sets of the quadratic control problem.

Writes one SVG per lambda with the level sets of the horofunction in the
direction n, and prints where each file went.  The same drawing is
available through `maxplus lq-horosphere`; this driver keeps the loop
explicit so the sampling grid and level list are easy to play with.
"""

import argparse
import os

import numpy as np

from maxplus_martin import EmptyContour, horofunction, horosphere_contour
from maxplus_martin.contours import polylines_to_svg

LEVELS = [-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0]
BBOX = (-3.0, -3.0, 3.0, 3.0)


def figure(lam, n, resolution):
    def h(points):
        return horofunction(points, n, lam)

    levelsets = []
    for level in LEVELS:
        try:
            levelsets.append((level, horosphere_contour(h, level, BBOX,
                                                        resolution)))
        except EmptyContour:
            print(f"  level {level:+g} does not cross the window, skipped")
    return polylines_to_svg(levelsets, BBOX)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="figures")
    parser.add_argument("--resolution", type=int, default=512)
    parser.add_argument("--direction", type=float, nargs=2, default=(0.0, 1.0))
    parser.add_argument("--lambdas", type=float, nargs="+", default=(0.0, 1.0))
    args = parser.parse_args()

    n = np.asarray(args.direction, dtype=float)
    n = n / np.linalg.norm(n)
    os.makedirs(args.out_dir, exist_ok=True)
    for lam in args.lambdas:
        print(f"lambda = {lam:g}")
        svg = figure(lam, n, args.resolution)
        path = os.path.join(args.out_dir, f"horospheres_lambda{lam:g}.svg")
        with open(path, "w") as fh:
            fh.write(svg)
        print(f"  wrote {path}")


if __name__ == "__main__":
    main()
