"""Tropical spaces: cell complexes with fan structures and their monodromy.

Two chart conventions cover the corpus.  A "solid" space (the dual
intersection complex of a toric total space) uses identity charts, so its
integral affine structure is globally flat.  A "boundary" space (hypersurface
tropicalization supported on the boundary sphere of a reflexive polytope)
charts each vertex v by the quotient projection M -> M/Zv; the mismatch of
these charts across codimension-2 joints is exactly the monodromy this module
computes.  Synthetic spaces with explicit per-(vertex, cell) charts support
the hand-checkable focus-focus models.
"""

from __future__ import annotations

from fractions import Fraction

from .exactlin import (
    content,
    dot,
    mat_identity,
    mat_mul,
    mat_rank,
    mat_vec,
    primitive,
    quotient_chart,
    saturate_lattice,
    solve_linear,
    vsub,
)
from .polytope import _face_facets, hull, normalize_point


class TropicalSpace:
    """A polyhedral complex with vertex fan structures and chart data.

    `chart_kind` is "solid" (identity charts), "boundary" (quotient by the
    vertex), or "explicit" (per-(vertex, cell) matrices, for synthetic
    models).  `boundary_keys` marks the cells of the topological boundary.
    """

    def __init__(self, ambient_dim, dim, maximal_cells, chart_kind, boundary_keys=(), explicit_charts=None, metadata=None):
        self.ambient_dim = ambient_dim
        self.dim = dim
        self.maximal_cells = tuple(sorted(maximal_cells, key=lambda c: c.key()))
        self.chart_kind = chart_kind
        self.boundary_keys = frozenset(boundary_keys)
        self.explicit_charts = dict(explicit_charts or {})
        self.metadata = dict(metadata or {})
        self._cells = None
        self._walls = None
        self._chart_cache = {}
        self._tangent_cache = {}
        self._disc_cache = None

    def __repr__(self):
        return f"TropicalSpace(dim={self.dim}, cells={len(self.maximal_cells)}, charts={self.chart_kind})"

    # -- complex structure

    def cells(self):
        """All faces of all maximal cells, deduplicated by vertex key."""
        if self._cells is None:
            out = {}
            for cell in self.maximal_cells:
                verts = list(cell.vertices)
                stack = [tuple(range(len(verts)))]
                seen_local = set()
                while stack:
                    idx = stack.pop()
                    key = tuple(sorted(verts[i] for i in idx))
                    if key in seen_local:
                        continue
                    seen_local.add(key)
                    if key not in out:
                        out[key] = hull(list(key))
                    for tight in _face_facets([verts[i] for i in idx]):
                        stack.append(tuple(idx[i] for i in tight))
            self._cells = dict(sorted(out.items()))
        return self._cells

    def cells_of_dim(self, d):
        return {k: c for k, c in self.cells().items() if c.dim == d}

    def vertices(self):
        return sorted(k[0] for k in self.cells_of_dim(0))

    def edges(self):
        return self.cells_of_dim(1)

    def walls(self):
        """Codimension-1 cells mapped to the maximal cells containing them."""
        if self._walls is None:
            out = {}
            for ci, cell in enumerate(self.maximal_cells):
                verts = list(cell.vertices)
                for tight in _face_facets(verts):
                    key = tuple(sorted(verts[i] for i in tight))
                    out.setdefault(key, []).append(ci)
            self._walls = {k: tuple(v) for k, v in sorted(out.items())}
        return self._walls

    def interior_walls(self):
        return {k: v for k, v in self.walls().items() if len(v) == 2 and k not in self.boundary_keys}

    def is_boundary_cell(self, key):
        if key in self.boundary_keys:
            return True
        return any(set(key) <= set(bk) for bk in self.boundary_keys)

    def star_of_vertex(self, v):
        return [c for c in self.maximal_cells if v in c.vertices]

    def boundary_cells(self):
        """All faces of the recorded boundary cells, keyed by vertices.

        Cheaper than filtering cells(): only the boundary subcomplex is
        walked, which matters for large solid complexes.
        """
        out = {}
        for key in self.boundary_keys:
            stack = [tuple(key)]
            while stack:
                verts = stack.pop()
                k = tuple(sorted(verts))
                if k in out:
                    continue
                out[k] = hull(list(k))
                for tight in _face_facets(list(k)):
                    stack.append(tuple(k[i] for i in tight))
        return dict(sorted(out.items()))

    # -- charts and fan structures

    def chart_matrix(self, v, cell=None):
        """Integer matrix taking ambient tangent vectors to chart coordinates."""
        if self.chart_kind == "explicit":
            key = (normalize_point(v), cell.key())
            return self.explicit_charts[key]
        if self.chart_kind == "solid":
            return mat_identity(self.ambient_dim)
        if v not in self._chart_cache:
            vv = tuple(int(x) for x in v)
            if all(x == 0 for x in vv):
                raise ValueError("boundary chart undefined at the origin")
            self._chart_cache[v] = quotient_chart(primitive(vv))
        return self._chart_cache[v]

    def tangent_basis(self, cell):
        """Saturated lattice basis of the cell's direction space."""
        key = cell.key()
        if key not in self._tangent_cache:
            diffs = [vsub(p, cell.vertices[0]) for p in cell.vertices[1:]]
            idiffs = [tuple(int(x) for x in d) for d in diffs]
            self._tangent_cache[key] = tuple(saturate_lattice(idiffs, self.ambient_dim))
        return self._tangent_cache[key]

    def fan_cone(self, v, cell):
        """The cone of the fan structure at v corresponding to a cell at v."""
        from .exactlin import cone_from_generators

        chart = self.chart_matrix(v, cell)
        gens = []
        for w in cell.vertices:
            d = vsub(w, v)
            if all(x == 0 for x in d):
                continue
            gens.append(mat_vec(chart, tuple(int(x) for x in d)))
        rank = len(chart)
        return cone_from_generators(gens, rank)

    # -- monodromy

    def _chart_on_cell(self, v, cell):
        """Square matrix of the chart at v restricted to the cell's tangent lattice."""
        chart = self.chart_matrix(v, cell)
        basis = self.tangent_basis(cell)
        cols = [mat_vec(chart, b) for b in basis]
        return tuple(zip(*cols))  # columns are chart images of the basis

    def monodromy(self, edge, wall):
        """Loop transformation v+ -> sigma+ -> v- -> sigma- -> v+ at v+.

        edge and wall are cells (the edge's lex-smaller endpoint is the base
        chart); the result is an integer matrix on the chart lattice at v+.
        """
        edge_key = edge.key()
        wall_key = wall.key()
        if self.is_boundary_cell(edge_key) or self.is_boundary_cell(wall_key):
            raise ValueError("monodromy needs interior cells")
        if not set(edge_key) <= set(wall_key):
            raise ValueError("edge must be a face of the wall")
        adj = self.walls().get(wall_key)
        if adj is None or len(adj) != 2:
            raise ValueError("wall must separate exactly two maximal cells")
        sigma_plus = self.maximal_cells[adj[0]]
        sigma_minus = self.maximal_cells[adj[1]]
        v_plus, v_minus = sorted(edge.vertices)[:2]
        return self._loop_matrix(v_plus, v_minus, sigma_plus, sigma_minus)

    def _loop_matrix(self, v_plus, v_minus, sigma_plus, sigma_minus):
        m_pp = self._chart_on_cell(v_plus, sigma_plus)
        m_mp = self._chart_on_cell(v_minus, sigma_plus)
        m_mm = self._chart_on_cell(v_minus, sigma_minus)
        m_pm = self._chart_on_cell(v_plus, sigma_minus)
        t = _mat_mul_rational(m_pm, _mat_inverse(m_mm))
        t = _mat_mul_rational(t, m_mp)
        t = _mat_mul_rational(t, _mat_inverse(m_pp))
        out = []
        for row in t:
            irow = []
            for x in row:
                f = Fraction(x)
                if f.denominator != 1:
                    raise ValueError("monodromy is not integral; charts are incompatible on the lattice")
                irow.append(int(f))
            out.append(tuple(irow))
        return tuple(out)

    def transition(self, v_from, v_to, cell):
        """Chart transition v_from -> v_to across one shared maximal cell."""
        m_to = self._chart_on_cell(v_to, cell)
        m_from = self._chart_on_cell(v_from, cell)
        return _mat_mul_rational(m_to, _mat_inverse(m_from))


def _mat_inverse(m):
    n = len(m)
    cols = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        x = solve_linear(m, e)
        if x is None:
            raise ValueError("chart restriction is singular")
        cols.append(x)
    return tuple(zip(*cols))


def _mat_mul_rational(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(sum(Fraction(x) * Fraction(y) for x, y in zip(row, col)) for col in bt) for row in a)


# --- constructions ----------------------------------------------------------


def dual_intersection_complex(graph_deg):
    """Tropicalization of the toric total space: the base with its refinement.

    Fan structure at each vertex is the star with identity reference charts;
    the level-1 slice semantics are recorded in the metadata.
    """
    for f in graph_deg.heights:
        if not f.convex:
            raise ValueError("graph degeneration carries a non-convex certificate")
    support = graph_deg.base
    cells = graph_deg.refinement.maximal_cells
    boundary = []
    for cell in cells:
        verts = list(cell.vertices)
        for tight in _face_facets(verts):
            face = [verts[i] for i in tight]
            for n, c in support.facets:
                if all(dot(n, p) == -c for p in face):
                    boundary.append(tuple(sorted(face)))
                    break
    return TropicalSpace(
        support.ambient_dim,
        support.dim,
        cells,
        "solid",
        boundary_keys=boundary,
        metadata={"slice": "fibre over (1,...,1) of the cone complex", "parameters": graph_deg.parameter_count},
    )


def hypersurface_trop(poly, subdivision, tents=(), enforce_fine=True):
    """Tropicalization of the anticanonical hypersurface: the boundary sphere.

    Cells are the boundary faces of the given (tent-refined) solid
    subdivision of the reflexive polytope; charts quotient by each vertex.
    Pass enforce_fine=False for deliberately coarse slice complexes (the
    hyperplane-split pipelines), where monodromy is not meaningful but the
    wall structure is.
    """
    if not poly.is_reflexive():
        raise ValueError("hypersurface tropicalization needs a reflexive polytope")
    sub = subdivision
    for tent_sub, tent_f in tents:
        from .subdivision import common_refinement

        sub = common_refinement(sub, tent_sub)
    boundary_cells = {}
    for cell in sub.maximal_cells:
        verts = list(cell.vertices)
        for tight in _face_facets(verts):
            face = [verts[i] for i in tight]
            for n, c in poly.facets:
                if all(dot(n, p) == -c for p in face):
                    key = tuple(sorted(face))
                    if key not in boundary_cells:
                        boundary_cells[key] = hull(face)
                    break
    cells = list(boundary_cells.values())
    if enforce_fine:
        # fineness: every boundary lattice point must be a vertex of the complex
        vertex_set = set()
        for c in cells:
            vertex_set.update(c.vertices)
        for p in poly.lattice_points():
            if not poly.contains_strictly(p) and p not in vertex_set:
                raise ValueError("subdivision is not fine on the boundary: missing vertex " + str(p))
    return TropicalSpace(
        poly.ambient_dim,
        poly.dim - 1,
        cells,
        "boundary",
        boundary_keys=(),
        metadata={"support": "boundary of reflexive polytope", "fine": enforce_fine},
    )


class Discriminant:
    """Singular locus data: barycentric joints (edge, wall) with monodromy."""

    def __init__(self, entries, dim):
        self.entries = tuple(entries)
        self.dim = dim

    def __len__(self):
        return len(self.entries)

    def total_multiplicity(self):
        return sum(e["multiplicity"] for e in self.entries)

    def support_points(self):
        return sorted(e["edge_midpoint"] for e in self.entries)


def _barycenter_of_key(key):
    k = len(key)
    return tuple(sum(Fraction(p[i]) for p in key) / k for i in range(len(key[0])))


def discriminant(space):
    """Barycentric joints (edge, wall) whose loop monodromy is nontrivial.

    In a 1-dimensional space the affine circle carries its rotation on every
    edge; each edge contributes a point with multiplicity its lattice length,
    so the total matches the normalized boundary volume.  Memoized per space
    (spaces are immutable).
    """
    if space._disc_cache is not None:
        return space._disc_cache
    space._disc_cache = _compute_discriminant(space)
    return space._disc_cache


def _compute_discriminant(space):
    entries = []
    n = space.dim
    if n == 0:
        return Discriminant([], n)
    if n == 1:
        if space.chart_kind != "boundary":
            # identity (or explicit) charts on a 1-complex are globally flat
            return Discriminant([], n)
        for key, cell in sorted(space.edges().items()):
            if space.is_boundary_cell(key):
                continue
            length = cell.normalized_volume()
            entries.append(
                {
                    "edge": key,
                    "wall": key,
                    "edge_midpoint": _barycenter_of_key(key),
                    "wall_barycenter": _barycenter_of_key(key),
                    "matrix": None,
                    "displacement": None,
                    "multiplicity": int(length),
                    "kind": "rotation",
                }
            )
        return Discriminant(entries, n)
    cells = space.cells()
    walls = space.interior_walls()
    edges = space.edges()
    ident = None
    for edge_key, edge in sorted(edges.items()):
        if space.is_boundary_cell(edge_key):
            continue
        for wall_key, adj in walls.items():
            if not set(edge_key) <= set(wall_key):
                continue
            wall = cells[wall_key]
            m = space.monodromy(edge, wall)
            if ident is None or len(ident) != len(m):
                ident = mat_identity(len(m))
            if m == ident:
                continue
            disp, mult = _displacement(m)
            entries.append(
                {
                    "edge": edge_key,
                    "wall": wall_key,
                    "edge_midpoint": _barycenter_of_key(edge_key),
                    "wall_barycenter": _barycenter_of_key(wall_key),
                    "matrix": m,
                    "displacement": disp,
                    "multiplicity": mult,
                    "kind": "transvection",
                }
            )
    return Discriminant(entries, n)


def _displacement(m):
    """Displacement data of a rank-one transvection M = I + u * m_cov^T.

    Writing the difference as u (primitive) times an integral covector m_cov,
    the displacement (M - I) t for any primitive test vector t with the
    minimal positive pairing <m_cov, t> = content(m_cov) is content(m_cov)*u,
    independent of the choice of t; its lattice length is content(m_cov).
    """
    n = len(m)
    d = tuple(tuple(m[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n))
    cols = list(zip(*d))
    nz = [c for c in cols if any(x != 0 for x in c)]
    if not nz:
        return None, 0
    if mat_rank(d) != 1:
        raise ValueError("monodromy is not a rank-one transvection")
    u = primitive(nz[0])
    pivot = next(i for i, x in enumerate(u) if x != 0)
    m_cov = []
    for j in range(n):
        f = Fraction(d[pivot][j], u[pivot])
        assert f.denominator == 1, "transvection covector is not integral"
        m_cov.append(int(f))
    g = content(tuple(m_cov))
    disp = tuple(g * x for x in u)
    return disp, g


def monodromy_polytope(space, disc_entry):
    """Convex hull of 0 and the loop displacement, in the base vertex chart."""
    if disc_entry.get("kind") == "rotation":
        mult = disc_entry["multiplicity"]
        return hull([(0,), (mult,)])
    m = disc_entry["matrix"]
    if m is None:
        raise ValueError("cell is not singular")
    disp, mult = _displacement(m)
    if disp is None:
        raise ValueError("cell is not singular")
    n = len(m)
    origin = tuple(0 for _ in range(n))
    return hull([origin, disp])


class MonodromyReport:
    """Per-singular-cell loop data with elementary-simplex verdicts."""

    def __init__(self, entries):
        self.entries = tuple(entries)

    def all_elementary(self):
        return all(e["elementary"] for e in self.entries)

    def needs_review(self):
        return [e for e in self.entries if e.get("needs_review")]

    def to_json(self):
        out = []
        for e in self.entries:
            out.append(
                {
                    "loop": {
                        "edge": [list(map(_num_json, p)) for p in e["edge"]],
                        "wall": [list(map(_num_json, p)) for p in e["wall"]],
                    },
                    "matrix": [list(r) for r in e["matrix"]] if e["matrix"] is not None else None,
                    "polytope": [list(map(_num_json, p)) for p in e["polytope"].vertices],
                    "multiplicity": e["multiplicity"],
                    "elementary": e["elementary"],
                }
            )
        return out


def _num_json(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def is_simple(space):
    """(verdict, report): simple iff every monodromy polytope is elementary."""
    disc = discriminant(space)
    entries = []
    verdict = True
    for e in disc.entries:
        poly = monodromy_polytope(space, e)
        elementary = poly.is_elementary_simplex()
        needs_review = False
        if e.get("matrix") is not None:
            d = e["matrix"]
            n = len(d)
            rank = mat_rank(tuple(tuple(d[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n)))
            needs_review = rank > 1
        if not elementary:
            verdict = False
        entries.append(
            {
                "edge": e["edge"],
                "wall": e["wall"],
                "matrix": e["matrix"],
                "polytope": poly,
                "multiplicity": e["multiplicity"],
                "elementary": elementary,
                "needs_review": needs_review,
            }
        )
    return verdict, MonodromyReport(entries)


def count_focus_focus(space):
    """Discriminant points counted with displacement lattice length."""
    if space.dim != 2:
        raise ValueError("focus-focus counting needs a 2-dimensional space")
    return discriminant(space).total_multiplicity()


def charts_globally_compatible(space):
    """True iff the vertex charts glue to a global integral affine structure."""
    cells = space.cells()
    for wall_key, adj in space.interior_walls().items():
        s1 = space.maximal_cells[adj[0]]
        s2 = space.maximal_cells[adj[1]]
        wall_verts = list(wall_key)
        for i in range(len(wall_verts)):
            for j in range(i + 1, len(wall_verts)):
                v, w = wall_verts[i], wall_verts[j]
                t1 = space.transition(v, w, s1)
                t2 = space.transition(v, w, s2)
                if t1 != t2:
                    return False
    return True


FACE_TYPES = ("InteriorCap", "BoundaryCap", "HorizontalSide", "VerticalSide")


def classify_face(space, cell):
    """The four boundary face types of a (dilated simplex) x (segment) space."""
    meta = space.metadata
    if "product_vertical_coord" not in meta:
        raise ValueError("space is not product-typed")
    last = meta["product_vertical_coord"]
    factor_facets = meta["factor_facets"]
    levels = meta["vertical_levels"]
    verts = cell.vertices
    zs = [v[last] for v in verts]
    if all(z == levels[1] for z in zs) or all(z == levels[0] for z in zs):
        proj = [tuple(x for i, x in enumerate(v) if i != last) for v in verts]
        on_factor_boundary = any(all(dot(n, p) == -c for p in proj) for n, c in factor_facets)
        return "BoundaryCap" if on_factor_boundary else "InteriorCap"
    if all(z == 0 for z in zs):
        return "HorizontalSide"
    proj = [tuple(x for i, x in enumerate(v) if i != last) for v in verts]
    if any(all(dot(n, p) == -c for p in proj) for n, c in factor_facets):
        return "VerticalSide"
    raise ValueError("cell is not a boundary face of the product")
