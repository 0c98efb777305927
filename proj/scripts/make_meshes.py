#!/usr/bin/env python3
"""Generate the triangular .msh assets used by the test suites and the
reproduction runs.

Rectangular domains are meshed by splitting an nx-by-ny grid of quads along
alternating diagonals; interior nodes get a small deterministic jitter so the
meshes are genuinely unstructured (boundary nodes stay put so periodic edge
pairing and wall geometry remain exact).  Output is Gmsh ASCII v2.2 with
boundary lines tagged left/right/bottom/top (or inflow/outflow/wall for the
forward-facing step).
"""

import os
import numpy as np

OUT = os.path.join(os.path.dirname(__file__), "..", "meshes")

JITTER = 0.18


def grid_mesh(x0, y0, x1, y1, nx, ny, seed, hole=None):
    """Vertices, triangles and boundary edges of a jittered diagonal grid.

    hole: optional (hx0, hy0, hx1, hy1) rectangle removed from the domain
    (used for the forward step); must align with grid lines.
    """
    rng = np.random.default_rng(seed)
    dx, dy = (x1 - x0) / nx, (y1 - y0) / ny

    def in_hole_cell(i, j):
        if hole is None:
            return False
        cx, cy = x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dy
        return hole[0] < cx < hole[2] and hole[1] < cy < hole[3]

    def on_hole_boundary(x, y):
        if hole is None:
            return False
        eps = 1e-12
        on_x = abs(x - hole[0]) < eps and hole[1] - eps <= y <= hole[3] + eps
        on_y = abs(y - hole[3]) < eps and hole[0] - eps <= x <= hole[2] + eps
        return on_x or on_y

    nid = {}
    verts = []
    for j in range(ny + 1):
        for i in range(nx + 1):
            x, y = x0 + i * dx, y0 + j * dy
            interior = 0 < i < nx and 0 < j < ny
            if interior and not on_hole_boundary(x, y):
                x += JITTER * dx * (2 * rng.random() - 1)
                y += JITTER * dy * (2 * rng.random() - 1)
            nid[(i, j)] = len(verts)
            verts.append((x, y))

    tris = []
    used_cell = np.zeros((nx, ny), dtype=bool)
    for j in range(ny):
        for i in range(nx):
            if in_hole_cell(i, j):
                continue
            used_cell[i, j] = True
            a, b = nid[(i, j)], nid[(i + 1, j)]
            c, d = nid[(i + 1, j + 1)], nid[(i, j + 1)]
            if (i + j) % 2 == 0:
                tris += [(a, b, c), (a, c, d)]
            else:
                tris += [(a, b, d), (b, c, d)]

    # Boundary edges: edges of used cells with no used neighbor.
    def cell_used(i, j):
        return 0 <= i < nx and 0 <= j < ny and used_cell[i, j]

    edges = []  # (v0, v1, kind) kind in left/right/bottom/top/step
    for j in range(ny):
        for i in range(nx):
            if not used_cell[i, j]:
                continue
            if not cell_used(i - 1, j):
                edges.append((nid[(i, j)], nid[(i, j + 1)],
                              "left" if i == 0 else "stepx"))
            if not cell_used(i + 1, j):
                edges.append((nid[(i + 1, j)], nid[(i + 1, j + 1)],
                              "right" if i == nx - 1 else "stepx"))
            if not cell_used(i, j - 1):
                edges.append((nid[(i, j)], nid[(i + 1, j)],
                              "bottom" if j == 0 else "stepy"))
            if not cell_used(i, j + 1):
                edges.append((nid[(i, j + 1)], nid[(i + 1, j + 1)],
                              "top" if j == ny - 1 else "stepy"))
    return verts, tris, edges


def write_msh(path, verts, tris, edges, tagmap):
    """tagmap: kind -> physical name (kinds not present are dropped)."""
    names = []
    name_id = {}
    for kind, name in tagmap.items():
        if name not in name_id:
            name_id[name] = len(names) + 1
            names.append(name)

    lines = ["$MeshFormat", "2.2 0 8", "$EndMeshFormat"]
    lines.append("$PhysicalNames")
    lines.append(str(len(names)))
    for n, name in enumerate(names, start=1):
        lines.append(f'1 {n} "{name}"')
    lines.append("$EndPhysicalNames")
    lines.append("$Nodes")
    lines.append(str(len(verts)))
    for i, (x, y) in enumerate(verts, start=1):
        lines.append(f"{i} {float(x)!r} {float(y)!r} 0")
    lines.append("$EndNodes")
    lines.append("$Elements")
    elems = []
    for v0, v1, kind in edges:
        phys = name_id[tagmap[kind]]
        elems.append(f"1 2 {phys} {phys} {v0 + 1} {v1 + 1}")
    for a, b, c in tris:
        elems.append(f"2 2 0 1 {a + 1} {b + 1} {c + 1}")
    lines.append(str(len(elems)))
    for i, e in enumerate(elems, start=1):
        lines.append(f"{i} {e}")
    lines.append("$EndElements")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"{os.path.basename(path):24s} {len(verts):6d} nodes {len(tris):6d} tris")


def rect(name, x0, y0, x1, y1, nx, ny, seed):
    v, t, e = grid_mesh(x0, y0, x1, y1, nx, ny, seed)
    tagmap = {"left": "left", "right": "right", "bottom": "bottom", "top": "top"}
    write_msh(os.path.join(OUT, name), v, t, e, tagmap)


def main():
    os.makedirs(OUT, exist_ok=True)

    for n in (20, 40, 80, 160):
        rect(f"burgers_{n}.msh", -2, -2, 2, 2, n, n, seed=100 + n)
    for n in (20, 40, 80, 160):
        rect(f"entropy_{n}.msh", 0, 0, 2, 2, n, n, seed=200 + n)
    for n in (20, 40, 80):
        rect(f"vortex_{n}.msh", 0, -5, 10, 5, n, n, seed=300 + n)
    for n in (40, 50, 100, 200):
        rect(f"box01_{n}.msh", 0, 0, 1, 1, n, n, seed=400 + n)

    # Double Mach reflection domain [0,4] x [0,1].
    for n in (40,):
        rect(f"dmr_{n}.msh", 0, 0, 4, 1, 4 * n, n, seed=500 + n)

    # Forward-facing step: 4 x 1 wind tunnel, step of height 0.2 from x = 1.
    for n in (40,):
        v, t, e = grid_mesh(0, 0, 4, 1, 4 * n, n, seed=600 + n,
                            hole=(1.0, 0.0, 4.0, 0.2))
        tagmap = {"left": "inflow", "right": "outflow", "bottom": "wall",
                  "top": "wall", "stepx": "wall", "stepy": "wall"}
        write_msh(os.path.join(OUT, f"ffstep_{n}.msh"), v, t, e, tagmap)


if __name__ == "__main__":
    main()
