"""Piecewise-linear functions and regular polyhedral subdivisions.

Regular subdivisions are computed as lower hulls of lifted point sets, with
all arithmetic over the integers after clearing denominators.  Tie-breaking is
fully deterministic (lexicographic point order everywhere), so two runs of any
construction produce identical cell lists.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .exactlin import dot, mat_rank, solve_linear, vsub
from .polytope import (
    LatticePolytope,
    _clear_fractions,
    _hull_full_dim,
    hull,
    minkowski_sum,
    normalize_point,
    polytope_from_inequalities,
    product,
    segment,
)


def affine_value(functional, point):
    coeffs, const = functional
    return Fraction(dot(coeffs, point)) + const


def affine_from_values(points, values, ambient_dim):
    """One affine functional (coeffs, const) matching the given values."""
    rows = [tuple(p) + (1,) for p in points]
    sol = solve_linear(tuple(rows), tuple(values))
    if sol is None:
        raise ValueError("values are not affine on the given points")
    return (tuple(sol[:-1]), sol[-1])


class PLFunction:
    """A piecewise-linear function given by one affine piece per maximal cell.

    `tag` records the construction (from_heights, max_combination,
    min_combination, sum); `convex` is the certified convexity flag.  Pieces
    are keyed by the cell's canonical vertex tuple.
    """

    def __init__(self, domain, pieces, tag, convex):
        self.domain = domain
        self.pieces = dict(pieces)
        self.tag = tag
        self.convex = convex

    def piece(self, cell):
        return self.pieces[cell.key()]

    def value_at(self, point, subdivision):
        for cell in subdivision.maximal_cells:
            if cell.contains(point):
                return affine_value(self.pieces[cell.key()], point)
        raise ValueError("point outside the subdivision support")

    def transform(self, u, new_domain, cell_map):
        """Pushforward along a unimodular map u (pieces composed with u^-1)."""
        # invert u exactly: solve u x = e_i column by column
        n = len(u)
        cols = []
        for i in range(n):
            e = tuple(1 if j == i else 0 for j in range(n))
            cols.append(solve_linear(u, e))
        uinv_cols = cols
        new_pieces = {}
        for key, (coeffs, const) in self.pieces.items():
            new_coeffs = tuple(sum(Fraction(coeffs[j]) * uinv_cols[i][j] for j in range(n)) for i in range(n))
            new_pieces[cell_map[key]] = (new_coeffs, const)
        return PLFunction(new_domain, new_pieces, self.tag, self.convex)


class Subdivision:
    """A polyhedral decomposition of a support polytope into maximal cells.

    Maximal cells cover the support and intersect in common faces; normalized
    volumes of the cells sum to the support's.  The face poset is computed on
    demand.
    """

    def __init__(self, support, maximal_cells):
        self.support = support
        self.maximal_cells = tuple(sorted(maximal_cells, key=lambda c: c.key()))
        self._walls = None
        self._faces = None

    def __repr__(self):
        return f"Subdivision({len(self.maximal_cells)} cells, support dim={self.support.dim})"

    def cell_keys(self):
        return [c.key() for c in self.maximal_cells]

    def walls(self):
        """Codimension-1 cells with the list of maximal cells containing each."""
        if self._walls is None:
            facet_map = {}
            for ci, cell in enumerate(self.maximal_cells):
                verts = list(cell.vertices)
                from .polytope import _face_facets

                for tight in _face_facets(verts):
                    fkey = tuple(sorted(verts[i] for i in tight))
                    facet_map.setdefault(fkey, []).append(ci)
            self._walls = {k: tuple(v) for k, v in sorted(facet_map.items())}
        return self._walls

    def interior_walls(self):
        return {k: v for k, v in self.walls().items() if len(v) == 2}

    def volume_check(self):
        total = sum(c.normalized_volume() for c in self.maximal_cells)
        return total == self.support.normalized_volume()

    def all_cells(self):
        """Every face of every maximal cell, deduplicated, keyed by vertices."""
        if self._faces is None:
            out = {}
            for cell in self.maximal_cells:
                fl = cell.faces()
                verts = cell.vertices
                for d, faces in fl.faces_by_dim.items():
                    if d < 0:
                        continue
                    for f in faces:
                        key = tuple(sorted(verts[i] for i in f))
                        if key not in out:
                            out[key] = hull(list(key))
            self._faces = dict(sorted(out.items()))
        return self._faces

    def transform(self, u):
        """Image subdivision under a unimodular integer matrix u."""
        new_support = self.support.transform(u)
        cells = [c.transform(u) for c in self.maximal_cells]
        cell_map = {c.key(): c.transform(u).key() for c in self.maximal_cells}
        return Subdivision(new_support, cells), cell_map


def regular_subdivision(points, heights):
    """Lower-envelope subdivision of lifted points with its convex certificate.

    Points must affinely span their hull; duplicate points with conflicting
    heights are an error.  Returns (Subdivision, PLFunction).
    """
    table = {}
    for p, h in zip(points, heights, strict=True):
        key = normalize_point(p)
        hf = Fraction(h)
        if key in table and table[key] != hf:
            raise ValueError(f"duplicate point {key} with conflicting heights")
        table[key] = hf
    pts = sorted(table)
    hts = [table[p] for p in pts]
    support = hull(pts)
    ambient = support.ambient_dim

    # work in span coordinates of the support, heights cleared to integers
    anchor = support.vertices[0]
    basis = support.span_basis
    d = support.dim
    if d == 0:
        cell = support
        f = PLFunction(support, {cell.key(): (tuple(0 for _ in range(ambient)), hts[0])}, "from_heights", True)
        return Subdivision(support, [cell]), f
    bm = tuple(zip(*basis))
    den = 1
    for h in hts:
        den = den * h.denominator // gcd(den, h.denominator)
    span_pts = []
    for p, h in zip(pts, hts):
        x = solve_linear(bm, _clear_fractions(vsub(p, anchor)))
        scale = _span_scale(p, anchor)
        coords = tuple(int(c / scale) if (c / scale).denominator == 1 else (c / scale) for c in x)
        span_pts.append(coords)
    # clear rational span coordinates (rational inputs) and heights uniformly
    sden = 1
    for c in span_pts:
        for x in c:
            q = Fraction(x).denominator
            sden = sden * q // gcd(sden, q)
    lifted = [
        tuple(int(Fraction(x) * sden) for x in c) + (int(h * den) * sden,)
        for c, h in zip(span_pts, hts)
    ]
    if mat_rank(tuple(vsub(q, lifted[0]) for q in lifted[1:])) <= d:
        # heights affine in the points: the trivial subdivision
        func = _interpolate_ambient(pts, hts, ambient)
        return Subdivision(support, [support]), PLFunction(support, {support.key(): func}, "from_heights", True)
    facs = _hull_full_dim(lifted, d + 1)
    cells = []
    pieces = {}
    for n, c, tight in facs:
        if n[-1] <= 0:
            continue  # not a lower facet
        cell_pts = [pts[i] for i in tight]
        cell = hull(cell_pts)
        if cell.dim != d:
            continue
        cells.append(cell)
        pieces[cell.key()] = _interpolate_ambient(cell_pts, [hts[i] for i in tight], ambient)
    sub = Subdivision(support, cells)
    f = PLFunction(support, pieces, "from_heights", True)
    return sub, f


def _span_scale(p, anchor):
    """Denominator clearing factor used when span coords were computed from
    cleared integer differences."""
    v = vsub(p, anchor)
    den = 1
    for x in v:
        q = Fraction(x).denominator
        den = den * q // gcd(den, q)
    return den


def _interpolate_ambient(points, values, ambient_dim):
    rows = [tuple(Fraction(x) for x in p) + (Fraction(1),) for p in points]
    sol = solve_linear(tuple(rows), tuple(Fraction(v) for v in values))
    assert sol is not None
    return (tuple(sol[:-1]), sol[-1])


def is_strictly_convex(f, subdivision):
    """True iff the affine pieces of adjacent maximal cells always differ."""
    cells = subdivision.maximal_cells
    for cell in cells:
        if cell.key() not in f.pieces:
            raise ValueError("function is not linear on some maximal cell")
    for wall, (i, j) in subdivision.interior_walls().items():
        pi = f.pieces[cells[i].key()]
        pj = f.pieces[cells[j].key()]
        test_points = set(cells[i].vertices) | set(cells[j].vertices)
        if all(affine_value(pi, p) == affine_value(pj, p) for p in test_points):
            return False
    return True


def check_convex_certificate(f, subdivision):
    """Certify that f is convex on the subdivision: across every interior wall
    the neighbouring piece lies weakly above the cell's own extension."""
    cells = subdivision.maximal_cells
    for wall, (i, j) in subdivision.interior_walls().items():
        pi = f.pieces[cells[i].key()]
        pj = f.pieces[cells[j].key()]
        for p in cells[j].vertices:
            if affine_value(pi, p) > affine_value(pj, p):
                return False
        for p in cells[i].vertices:
            if affine_value(pj, p) > affine_value(pi, p):
                return False
    return True


def _split_functional(sub):
    """For a two-cell subdivision, the halfspace data of its single wall."""
    if len(sub.maximal_cells) != 2:
        return None
    a, b = sub.maximal_cells
    for n, c in a.facets:
        neg = (tuple(-x for x in n), -c)
        if neg in b.facets:
            return n, c
    return None


def common_refinement(sub1, sub2):
    """Cells = full-dimensional intersections of cells from the two inputs."""
    if sub1.support.vertices != sub2.support.vertices:
        raise ValueError("domain mismatch")
    dim = sub1.support.dim
    ambient = sub1.support.ambient_dim
    split = _split_functional(sub2)
    cells = []
    seen = set()
    if split is not None:
        # sub2 is a single hyperplane split: exact edge clipping is much
        # cheaper than vertex enumeration over constraint subsets
        from .polytope import clip_by_halfspace

        n, c = split
        neg = tuple(-x for x in n)
        for a in sub1.maximal_cells:
            for normal, off in ((n, c), (neg, -c)):
                x = clip_by_halfspace(a, normal, off)
                if x is None or x.dim != dim or x.key() in seen:
                    continue
                seen.add(x.key())
                cells.append(x)
        return Subdivision(sub1.support, cells)
    for a in sub1.maximal_cells:
        for b in sub2.maximal_cells:
            ineqs = list(a.facets) + list(b.facets)
            eqs = list(a.equations) + list(b.equations)
            x = polytope_from_inequalities(ineqs, eqs, ambient)
            if x is None or x.dim != dim:
                continue
            if x.key() in seen:
                continue
            seen.add(x.key())
            cells.append(x)
    return Subdivision(sub1.support, cells)


def sum_refinement(f, g, sub_f, sub_g):
    """Common refinement with the summed functional; convex if inputs are."""
    refined = common_refinement(sub_f, sub_g)
    pieces = {}
    for cell in refined.maximal_cells:
        pf = _piece_on(f, sub_f, cell)
        pg = _piece_on(g, sub_g, cell)
        pieces[cell.key()] = (
            tuple(Fraction(a) + Fraction(b) for a, b in zip(pf[0], pg[0])),
            Fraction(pf[1]) + Fraction(pg[1]),
        )
    conv = f.convex and g.convex
    return refined, PLFunction(refined.support, pieces, "sum", conv)


def _piece_on(f, sub, cell):
    """The affine piece of f valid on a cell of a finer subdivision."""
    for big in sub.maximal_cells:
        if all(big.contains(v) for v in cell.vertices):
            return f.pieces[big.key()]
    raise ValueError("cell not contained in any cell of the coarser subdivision")


def product_pullback(f, sub, other, side="left"):
    """Pull a PLFunction back along the projection of a product polytope.

    side="left": domain becomes domain x other; side="right": other x domain.
    """
    cells = []
    pieces = {}
    zeros = tuple(0 for _ in range(other.ambient_dim))
    for cell in sub.maximal_cells:
        big = product(cell, other) if side == "left" else product(other, cell)
        cells.append(big)
        coeffs, const = f.pieces[cell.key()]
        if side == "left":
            new_coeffs = tuple(coeffs) + zeros
        else:
            new_coeffs = zeros + tuple(coeffs)
        pieces[big.key()] = (new_coeffs, const)
    support = product(sub.support, other) if side == "left" else product(other, sub.support)
    return Subdivision(support, cells), PLFunction(support, pieces, f.tag, f.convex)


def deterministic_jitter(point, seed=0):
    """A reproducible integer in [0, 2^31) mixed from the coordinates.

    A plain lexicographic index (or any multiply-add chain) is an affine
    function of the coordinates on grid-like point sets, so it cannot break
    the cospherical ties of a squared-norm lift.  The xor-shift rounds below
    are genuinely nonlinear, deterministic, and identical across platforms.
    """
    mask = (1 << 64) - 1
    acc = (0x9E3779B97F4A7C15 ^ (seed * 0xBF58476D1CE4E5B9)) & mask
    for x in point:
        acc = (acc + (int(x) + 65537) * 0x94D049BB133111EB) & mask
        acc ^= acc >> 30
        acc = (acc * 0xBF58476D1CE4E5B9) & mask
        acc ^= acc >> 27
        acc = (acc * 0x94D049BB133111EB) & mask
        acc ^= acc >> 31
    return acc % (1 << 31)


def jittered_heights(points, seed=0):
    """Squared-norm heights plus a tie-breaking jitter strictly below 1."""
    return [sum(int(x) * int(x) for x in p) + Fraction(deterministic_jitter(p, seed), 1 << 31) for p in points]


def boundary_triangulation(poly, seed=0):
    """Fine regular triangulation of the boundary by all its lattice points.

    Built facet by facet with one global height vector; the per-facet lower
    hulls agree on shared ridges because face restriction of a lower envelope
    only involves the points on that face.  Returns the list of boundary
    simplices and the height table.
    """
    boundary = sorted(p for p in poly.lattice_points() if not poly.contains_strictly(p))
    hts = jittered_heights(boundary, seed)
    table = dict(zip(boundary, hts))
    cells = []
    seen = set()
    for facet in poly.facets:
        pts = [p for p in boundary if dot(facet[0], p) == -facet[1]]
        sub, _ = regular_subdivision(pts, [table[p] for p in pts])
        for c in sub.maximal_cells:
            if c.key() not in seen:
                seen.add(c.key())
                cells.append(c)
    return cells, table


def fine_crepant_subdivision(poly):
    """Fine regular triangulation of the boundary coned at the origin.

    Desk-scale stand-in for an MPCP desingularization: vertex set is all
    boundary lattice points plus the origin, every maximal cell is the cone
    over an elementary boundary simplex, and the returned PLFunction is the
    regularity certificate.  Raises if the deterministic heights fail to
    produce an elementary triangulation.
    """
    if not poly.is_reflexive():
        raise ValueError("fine crepant subdivision needs a reflexive polytope")
    origin = tuple(0 for _ in range(poly.ambient_dim))
    last_bad = None
    for seed in range(8):
        cells, table = boundary_triangulation(poly, seed)
        bad = [c.key() for c in cells if not c.is_elementary_simplex()]
        if bad:
            last_bad = bad
            continue
        cones = [hull(list(c.vertices) + [origin]) for c in cells]
        sub = Subdivision(poly, cones)
        # certify regularity: interpolate the boundary heights with the origin
        # pulled down until the assembled function is strictly convex
        drop = -1
        for _ in range(40):
            pieces = {}
            for cone in cones:
                base_pts = [v for v in cone.vertices if v != origin]
                vals = [table[v] for v in base_pts] + [Fraction(drop)]
                pieces[cone.key()] = _interpolate_ambient(base_pts + [origin], vals, poly.ambient_dim)
            f = PLFunction(poly, pieces, "from_heights", True)
            if check_convex_certificate(f, sub) and is_strictly_convex(f, sub):
                if not sub.volume_check():
                    raise ValueError("boundary triangulation does not tile the polytope")
                return sub, f
            drop *= 2
        raise ValueError("origin pull-down failed to certify a convex function")
    raise ValueError(
        "height perturbation failed to reach an elementary triangulation; "
        f"non-elementary boundary cells remain after all deterministic seeds ({len(last_bad)} at the last seed)"
    )


def hyperplane_split(poly, coord_index, level):
    """Split along u_i = level with the concave tent min(0, level - u_i)."""
    vals = [v[coord_index] for v in poly.vertices]
    if not (min(vals) < level < max(vals)):
        raise ValueError("level outside the open coordinate range")
    ambient = poly.ambient_dim
    e_i = tuple(1 if j == coord_index else 0 for j in range(ambient))
    neg_e_i = tuple(-x for x in e_i)
    low = polytope_from_inequalities(list(poly.facets) + [(neg_e_i, level)], list(poly.equations), ambient)
    high = polytope_from_inequalities(list(poly.facets) + [(e_i, -level)], list(poly.equations), ambient)
    sub = Subdivision(poly, [low, high])
    zero = tuple(0 for _ in range(ambient))
    pieces = {
        low.key(): (zero, Fraction(0)),
        high.key(): (neg_e_i, Fraction(level)),
    }
    f = PLFunction(poly, pieces, "min_combination", False)
    return sub, f


def negate_pl(f, sub):
    pieces = {k: (tuple(-Fraction(c) for c in coeffs), -Fraction(const)) for k, (coeffs, const) in f.pieces.items()}
    tag = {"min_combination": "max_combination", "max_combination": "min_combination"}.get(f.tag, f.tag)
    return PLFunction(f.domain, pieces, tag, not f.convex if f.tag in ("min_combination", "max_combination") else f.convex)


def avoid_hyperplane(f, sub, multiplier_bound=64):
    """Add the smallest multiple of |last coordinate| so that no maximal cell
    interior meets the hyperplane H = {x_last = 0}; certified afterwards.

    Combinatorially this is the Minkowski sum of the dual polytope with a
    multiple of the vertical segment, on the support-function side.
    """
    support = sub.support
    ambient = support.ambient_dim
    last = ambient - 1
    vals = [v[last] for v in support.vertices]
    if not (min(vals) < 0 < max(vals)):
        # H does not cut the support: nothing to do
        return sub, f
    split_sub, tent = hyperplane_split(support, last, 0)
    tent_convex = negate_pl(tent, split_sub)  # max(0, u_last) with walls on H
    for lam in range(1, multiplier_bound + 1):
        scaled = PLFunction(
            support,
            {k: (tuple(lam * Fraction(c) for c in coeffs), lam * Fraction(const)) for k, (coeffs, const) in tent_convex.pieces.items()},
            "max_combination",
            True,
        )
        refined, g = sum_refinement(f, scaled, sub, split_sub)
        if all(not _interior_meets_hyperplane(c, last) for c in refined.maximal_cells):
            if is_strictly_convex(g, refined):
                return refined, g
    raise ValueError("no multiplier up to the bound avoids the hyperplane")


def _interior_meets_hyperplane(cell, coord):
    vals = [v[coord] for v in cell.vertices]
    return min(vals) < 0 < max(vals)


class GraphDegeneration:
    """Graphs of convex PL functions over a common refinement of their cells.

    Cells of `total_complex` are the lifted graphs over the refinement's
    cells; restricting to the diagonal reproduces the one-parameter
    degeneration of the summed function.
    """

    def __init__(self, base, height_functions, refinement, total_cells, parameter_count):
        self.base = base
        self.heights = tuple(height_functions)
        self.refinement = refinement
        self.total_complex = tuple(sorted(total_cells, key=lambda c: c.key()))
        self.parameter_count = parameter_count

    def shadow_of(self, cell):
        """Projection of a lifted cell back to the base."""
        return hull([v[: self.base.ambient_dim] for v in cell.vertices])

    def diagonal_restriction(self):
        """Map (x, t_1..t_r) -> (x, sum t_i) applied to the lifted cells."""
        n = self.base.ambient_dim
        cells = []
        for c in self.total_complex:
            cells.append(hull([v[:n] + (sum(v[n:]),) for v in c.vertices]))
        return tuple(sorted(cells, key=lambda c: c.key()))


def graph_degeneration(subs_and_fs, refinement=None):
    """r-parameter degeneration from (Subdivision, PLFunction) pairs.

    Pass the precomputed common refinement when the caller already has it.
    """
    for _, f in subs_and_fs:
        if not f.convex:
            raise ValueError("graph degeneration needs convex height functions")
    if refinement is not None:
        refined = refinement
    else:
        refined = subs_and_fs[0][0]
        for s, _ in subs_and_fs[1:]:
            refined = common_refinement(refined, s)
    r = len(subs_and_fs)
    total = []
    for cell in refined.maximal_cells:
        lifted = []
        for v in cell.vertices:
            coords = list(v)
            for s, f in subs_and_fs:
                coords.append(f.value_at(v, s))
            lifted.append(tuple(coords))
        total.append(hull(lifted))
    return GraphDegeneration(refined.support, [f for _, f in subs_and_fs], refined, total, r)


def blowup_refinement(nef, delta_a, delta_b):
    """Blow-up polytope data for a refined nef partition.

    parts are Delta_a x [0,1], Delta_b x [-1,0] and Delta_i x {0} for i >= 1;
    the Minkowski sum of the parts is parent x [-1,1].
    """
    delta0 = nef.parts[0]
    if minkowski_sum(delta_a, delta_b).vertices != delta0.vertices:
        raise ValueError("Minkowski split invalid: delta_a + delta_b != Delta_0")
    up = segment(0, 1)
    down = segment(-1, 0)
    origin = hull([(0,)])
    parts = [product(delta_a, up), product(delta_b, down)]
    for part in nef.parts[1:]:
        parts.append(product(part, origin))
    total = parts[0]
    for p in parts[1:]:
        total = minkowski_sum(total, p)
    expected = product(nef.parent, segment(-1, 1))
    if total.vertices != expected.vertices:
        raise ValueError("Minkowski split invalid: parts do not tile parent x [-1,1]")
    from .polytope import NefPartition

    return total, parts, NefPartition(total, parts)
