"""SVG emitter for 2-dimensional tropical spaces.

Boundary spheres are drawn as an unfolded net: facets of the support polytope
are placed in the plane by integral affine charts glued edge by edge along a
fixed breadth-first unfolding, so coordinates stay exact integers and two runs
emit identical bytes.  Discriminant points are marked in red.
"""

from __future__ import annotations

from fractions import Fraction

from .exactlin import dot, primitive, solve_linear, vsub
from .polytope import _clear_fractions
from .tropical import discriminant

SCALE = 48
MARGIN = 24


def _facet_chart(poly, facet):
    """Anchor and 2D lattice basis for a facet plane of a 3-polytope."""
    n, c = facet
    verts = [v for v in poly.vertices if dot(n, v) == -c]
    anchor = min(verts)
    from .exactlin import saturate_lattice

    basis = saturate_lattice([_clear_fractions(vsub(v, anchor)) for v in verts if v != anchor], poly.ambient_dim)
    assert len(basis) == 2
    return anchor, basis


def _local_coords(point, anchor, basis):
    bm = tuple(zip(*basis))
    x = solve_linear(bm, vsub(point, anchor))
    assert x is not None
    return tuple(x)


def _net_charts(poly):
    """Affine placement map per facet of a 3-polytope, glued across ridges.

    Returns {facet: (anchor, basis, linear 2x2, offset 2-vector)} so a point p
    on the facet lands at linear @ local(p) + offset.
    """
    facets = list(poly.facets)
    charts = {}
    ridge = {}
    for i, f in enumerate(facets):
        for j, g in enumerate(facets):
            if i >= j:
                continue
            shared = [v for v in poly.vertices if dot(f[0], v) == -f[1] and dot(g[0], v) == -g[1]]
            if len(shared) >= 2:
                ridge[(i, j)] = sorted(shared)
                ridge[(j, i)] = sorted(shared)
    root = 0
    a0, b0 = _facet_chart(poly, facets[root])
    charts[root] = (a0, b0, ((1, 0), (0, 1)), (0, 0))
    queue = [root]
    seen = {root}
    while queue:
        i = queue.pop(0)
        anchor_i, basis_i, lin_i, off_i = charts[i]

        def place(p):
            loc = _local_coords(p, anchor_i, basis_i)
            return (
                lin_i[0][0] * loc[0] + lin_i[0][1] * loc[1] + off_i[0],
                lin_i[1][0] * loc[0] + lin_i[1][1] * loc[1] + off_i[1],
            )

        for j in range(len(facets)):
            if j in seen or (i, j) not in ridge:
                continue
            shared = ridge[(i, j)]
            p0 = shared[0]
            delta = primitive(_clear_fractions(vsub(shared[-1], p0)))
            anchor_j, basis_j = _facet_chart(poly, facets[j])
            # linear part: edge direction matches; the completion direction is
            # sent to the opposite side of the placed edge
            d_img = vsub(place(tuple(Fraction(a) + Fraction(b) for a, b in zip(p0, delta))), place(p0))
            d_img = tuple(int(x) for x in d_img)
            d_loc_j = _local_coords(tuple(a + b for a, b in zip(p0, delta)), anchor_j, basis_j)
            p0_loc_j = _local_coords(p0, anchor_j, basis_j)
            d_j = tuple(int(a - b) for a, b in zip(d_loc_j, p0_loc_j))
            # basis of the j-chart: (d_j, e_j) with e_j any unimodular completion
            e_j = None
            for cand in [(0, 1), (1, 0), (1, 1), (-1, 1)]:
                m = ((d_j[0], cand[0]), (d_j[1], cand[1]))
                from .exactlin import det

                if abs(det(m)) == 1:
                    e_j = cand
                    break
            assert e_j is not None
            d_perp_img = None
            for cand in [(0, 1), (1, 0), (1, 1), (-1, 1)]:
                from .exactlin import det

                if abs(det(((d_img[0], cand[0]), (d_img[1], cand[1])))) == 1:
                    d_perp_img = cand
                    break
            assert d_perp_img is not None
            # choose the orientation putting facet j opposite facet i
            q_i = next(v for v in poly.vertices if dot(facets[i][0], v) == -facets[i][1] and v not in shared)
            q_j = next(v for v in poly.vertices if dot(facets[j][0], v) == -facets[j][1] and v not in shared)
            qi_img = place(q_i)
            side_i = _side(place(p0), d_img, qi_img)
            for sign in (1, -1):
                w_img = (sign * d_perp_img[0], sign * d_perp_img[1])
                # linear map: d_j -> d_img, e_j -> w_img
                m = _solve_linear_map(d_j, e_j, d_img, w_img)
                off = _affine_offset(m, p0_loc_j, place(p0))
                qj_loc = _local_coords(q_j, anchor_j, basis_j)
                qj_img = _apply(m, off, qj_loc)
                if _side(place(p0), d_img, qj_img) == -side_i:
                    charts[j] = (anchor_j, basis_j, m, off)
                    break
            else:
                raise AssertionError("could not orient facet in the net")
            seen.add(j)
            queue.append(j)
    return facets, charts


def _solve_linear_map(v1, v2, w1, w2):
    """2x2 integer matrix M with M v1 = w1, M v2 = w2."""
    rows = []
    for k in range(2):
        sol = solve_linear(((v1[0], v2[0]), (v1[1], v2[1])), (w1[k], w2[k]))
        rows.append(tuple(int(x) for x in sol))
    return tuple(rows)


def _affine_offset(m, loc, target):
    img = (m[0][0] * loc[0] + m[0][1] * loc[1], m[1][0] * loc[0] + m[1][1] * loc[1])
    return (Fraction(target[0]) - img[0], Fraction(target[1]) - img[1])


def _apply(m, off, loc):
    return (
        m[0][0] * loc[0] + m[0][1] * loc[1] + off[0],
        m[1][0] * loc[0] + m[1][1] * loc[1] + off[1],
    )


def _side(p, d, q):
    cross = d[0] * (Fraction(q[1]) - p[1]) - d[1] * (Fraction(q[0]) - p[0])
    return (cross > 0) - (cross < 0)


def render_svg(space, support=None):
    """SVG 1.1 picture of a 2-dimensional tropical space.

    Planar solid complexes are drawn in their own coordinates; boundary
    spheres are unfolded along the fixed net.  Discriminant points are red.
    """
    if space.dim != 2:
        raise ValueError("render needs a 2-dimensional tropical space")
    disc = discriminant(space)
    placed_cells = []
    placed_points = []
    boundary_segments = []
    if space.chart_kind == "boundary":
        if support is None:
            raise ValueError("boundary spaces need their support polytope for the net")
        facets, charts = _net_charts(support)

        def host_facet(cell):
            for idx, (n, c) in enumerate(facets):
                if all(dot(n, v) == -c for v in cell.vertices):
                    return idx
            raise ValueError("cell lies in no facet of the support")

        for cell in space.maximal_cells:
            idx = host_facet(cell)
            anchor, basis, m, off = charts[idx]
            pts = [_apply(m, off, _local_coords(v, anchor, basis)) for v in _cycle(cell)]
            placed_cells.append(pts)
        for entry in disc.entries:
            cell = space.cells()[entry["edge"]]
            adj_key = min(
                c.key() for c in space.maximal_cells if set(entry["edge"]) <= set(c.vertices)
            )
            adj = next(c for c in space.maximal_cells if c.key() == adj_key)
            idx = host_facet(adj)
            anchor, basis, m, off = charts[idx]
            placed_points.append(_apply(m, off, _local_coords(entry["edge_midpoint"], anchor, basis)))
    else:
        for cell in space.maximal_cells:
            placed_cells.append([(Fraction(v[0]), Fraction(v[1])) for v in _cycle(cell)])
        for entry in disc.entries:
            mid = entry["edge_midpoint"]
            placed_points.append((Fraction(mid[0]), Fraction(mid[1])))
        for key, adj in space.walls().items():
            if len(adj) == 1 and len(key) == 2:
                boundary_segments.append(((Fraction(key[0][0]), Fraction(key[0][1])), (Fraction(key[1][0]), Fraction(key[1][1]))))
    return _svg_document(placed_cells, placed_points, boundary_segments)


def _cycle(cell):
    """Vertices of a polygon in boundary order (walk its edge graph)."""
    verts = list(cell.vertices)
    if len(verts) <= 3:
        return verts
    from .polytope import _face_facets

    edges = _face_facets(verts)
    adj = {}
    for e in edges:
        a, b = e
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    order = [0]
    prev = None
    while len(order) < len(verts):
        nxt = [x for x in adj[order[-1]] if x != prev]
        prev = order[-1]
        order.append(nxt[0])
    return [verts[i] for i in order]


def _svg_document(cells, points, boundary_segments=()):
    xs = [x for pts in cells for x, _ in pts]
    ys = [y for pts in cells for _, y in pts]
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)

    def sx(x):
        return int((Fraction(x) - lo_x) * SCALE) + MARGIN

    def sy(y):
        return int((hi_y - Fraction(y)) * SCALE) + MARGIN

    width = int((hi_x - lo_x) * SCALE) + 2 * MARGIN
    height = int((hi_y - lo_y) * SCALE) + 2 * MARGIN
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
    ]
    for pts in cells:
        path = " ".join(f"{sx(x)},{sy(y)}" for x, y in pts)
        out.append(f'<polygon points="{path}" fill="#f3f1e8" stroke="#444444" stroke-width="2"/>')
    for seg in boundary_segments:
        (x1, y1), (x2, y2) = seg
        out.append(
            f'<line x1="{sx(x1)}" y1="{sy(y1)}" x2="{sx(x2)}" y2="{sy(y2)}" stroke="#000000" stroke-width="4"/>'
        )
    for x, y in sorted(points):
        out.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="6" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
