#!/usr/bin/env python3
"""Generate the square-with-hole test mesh (data/square_with_hole.smesh).

Unit square with a 48-gon hole of radius 0.2 centered at (0.5, 0.5).
Vertices sit on rays from the center, on rings interpolating between the
hole circle (s=0) and the ray's exit point through the square boundary
(s=1), with radial grading s_j = (j/R)^1.3 so the rings crowd the hole.
Each ring-to-ring quad is split into two triangles with alternating
diagonals. Hole edges get marker 1, outer square edges marker 2.

The file is committed; rerun this only to change the resolution knobs.
"""

import argparse
import math


def ray_square_exit(cx, cy, ux, uy):
    # First crossing of the ray (cx,cy) + t*(ux,uy) with the unit square.
    t = math.inf
    if ux > 1e-14:
        t = min(t, (1.0 - cx) / ux)
    elif ux < -1e-14:
        t = min(t, (0.0 - cx) / ux)
    if uy > 1e-14:
        t = min(t, (1.0 - cy) / uy)
    elif uy < -1e-14:
        t = min(t, (0.0 - cy) / uy)
    return cx + t * ux, cy + t * uy


def build(n_angles, n_rings, grading, radius, cx, cy):
    verts = []
    for j in range(n_rings + 1):
        s = (j / n_rings) ** grading
        for i in range(n_angles):
            th = 2.0 * math.pi * i / n_angles
            ux, uy = math.cos(th), math.sin(th)
            hx, hy = cx + radius * ux, cy + radius * uy
            qx, qy = ray_square_exit(cx, cy, ux, uy)
            verts.append(((1.0 - s) * hx + s * qx, (1.0 - s) * hy + s * qy))

    def vid(j, i):
        return j * n_angles + (i % n_angles)

    cells = []
    for j in range(n_rings):
        for i in range(n_angles):
            a, b = vid(j, i), vid(j, i + 1)
            c, d = vid(j + 1, i + 1), vid(j + 1, i)
            if (i + j) % 2 == 0:
                cells.append((a, b, c))
                cells.append((a, c, d))
            else:
                cells.append((a, b, d))
                cells.append((b, c, d))

    markers = []
    for i in range(n_angles):
        markers.append((vid(0, i), vid(0, i + 1), 1))
        markers.append((vid(n_rings, i), vid(n_rings, i + 1), 2))
    return verts, cells, markers


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--angles", type=int, default=48)
    ap.add_argument("--rings", type=int, default=6)
    ap.add_argument("--grading", type=float, default=1.3)
    ap.add_argument("--radius", type=float, default=0.2)
    ap.add_argument("-o", "--out", default="data/square_with_hole.smesh")
    args = ap.parse_args()

    verts, cells, markers = build(args.angles, args.rings, args.grading,
                                  args.radius, 0.5, 0.5)
    with open(args.out, "w") as f:
        f.write("# unit square with a polygonal hole, r=%g at (0.5,0.5)\n"
                % args.radius)
        f.write("# generated by tools/make_hole_mesh.py --angles %d "
                "--rings %d --grading %g\n"
                % (args.angles, args.rings, args.grading))
        f.write("dim 2\n")
        f.write("vertices %d\n" % len(verts))
        for x, y in verts:
            f.write("%.17g %.17g\n" % (x, y))
        f.write("cells %d\n" % len(cells))
        for a, b, c in cells:
            f.write("%d %d %d\n" % (a, b, c))
        f.write("boundary_markers %d\n" % len(markers))
        for a, b, m in markers:
            f.write("%d %d %d\n" % (a, b, m))
    print("wrote %s: %d vertices, %d cells, %d marked edges"
          % (args.out, len(verts), len(cells), len(markers)))


if __name__ == "__main__":
    main()
