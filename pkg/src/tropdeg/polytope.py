"""Lattice polytopes with exact vertex/facet double description.

Convex hulls are computed by exact gift wrapping over the integers (rational
input is cleared to a common denominator first), facet by facet across ridges.
Facet inequalities are stored as <n, x> >= -c with n primitive and inward, so
reflexivity is the field scan "all offsets equal 1".  Polytopes of lower
dimension than their ambient space carry an explicit affine-span basis.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import gcd

from .exactlin import (
    dot,
    hnf_column_basis,
    is_zero,
    kernel_basis,
    mat_rank,
    primitive,
    saturate_lattice,
    solve_linear,
    vadd,
    vsub,
)


def normalize_point(p):
    """Canonical coordinate tuple: ints where integral, Fractions otherwise."""
    out = []
    for x in p:
        f = Fraction(x)
        out.append(int(f) if f.denominator == 1 else f)
    return tuple(out)


def is_lattice_point(p):
    return all(Fraction(x).denominator == 1 for x in p)


# --- exact hull engine ----------------------------------------------------


def _initial_facet(pts, d):
    """One hull facet of a full-dimensional integer point set, by rotation.

    Returns (inward_normal, tight_indices).
    """
    # inward normal convention: <n, p> >= <n, p0> for all p
    n = tuple(1 if i == 0 else 0 for i in range(d))
    vals = [dot(n, p) for p in pts]
    lo = min(vals)
    contact = [i for i, v in enumerate(vals) if v == lo]
    p0 = pts[contact[0]]
    while True:
        tangent = hnf_column_basis([vsub(pts[i], p0) for i in contact])
        if len(tangent) == d - 1:
            return n, contact
        ann = kernel_basis(tuple(tangent)) if tangent else [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        moved = False
        for v in ann:
            pairs = [(dot(n, vsub(p, p0)), dot(v, vsub(p, p0))) for p in pts]
            if all(b == 0 for a, b in pairs if a > 0):
                continue
            # rotate n toward -v until the first outside point is hit
            t_star = max(Fraction(b, a) for a, b in pairs if a > 0)
            num, den = t_star.numerator, t_star.denominator
            cand = tuple(num * ni - den * vi for ni, vi in zip(n, v))
            if is_zero(cand):
                continue
            n = primitive(cand)
            vals = [dot(n, p) for p in pts]
            lo = min(vals)
            contact = [i for i, val in enumerate(vals) if val == lo]
            p0 = pts[contact[0]]
            moved = True
            break
        if not moved:
            raise AssertionError("initial facet search stalled; input not full-dimensional?")


def _neighbor_facet(pts, d, normal, facet_idx, ridge_idx):
    """Wrap across a ridge: the other facet containing the given ridge."""
    p_r = pts[ridge_idx[0]]
    tangent = hnf_column_basis([vsub(pts[i], p_r) for i in ridge_idx])
    if tangent:
        ann = kernel_basis(tuple(tangent))
    else:
        ann = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    w = None
    for cand in ann:
        if any(dot(cand, vsub(pts[i], p_r)) != 0 for i in facet_idx):
            w = cand
            break
    assert w is not None, "ridge annihilator degenerate"
    beta = next(dot(w, vsub(pts[i], p_r)) for i in facet_idx if dot(w, vsub(pts[i], p_r)) != 0)
    if beta > 0:
        w = tuple(-x for x in w)
    # new normal n' = t*n - w with t* = max over off-facet points of w_q/a_q
    best = None
    for q in pts:
        a_q = dot(normal, vsub(q, p_r))
        if a_q <= 0:
            continue
        w_q = dot(w, vsub(q, p_r))
        r = Fraction(w_q, a_q)
        if best is None or r > best:
            best = r
    assert best is not None, "no neighbor facet; point set not full-dimensional"
    num, den = best.numerator, best.denominator
    n2 = primitive(tuple(num * ni - den * wi for ni, wi in zip(normal, w)))
    vals = [dot(n2, p) for p in pts]
    lo = min(vals)
    tight = [i for i, v in enumerate(vals) if v == lo]
    return n2, tight


def _simplex_facets(pts, d):
    """Facets of a d-simplex given by exactly d+1 affinely independent points."""
    out = []
    for drop in range(d + 1):
        rest = [pts[i] for i in range(d + 1) if i != drop]
        anchor = rest[0]
        tangent = tuple(vsub(p, anchor) for p in rest[1:])
        ker = kernel_basis(tangent)
        assert len(ker) == 1
        n = primitive(ker[0])
        if dot(n, vsub(pts[drop], anchor)) < 0:
            n = tuple(-x for x in n)
        c = -dot(n, anchor)
        out.append((n, c, tuple(i for i in range(d + 1) if i != drop)))
    return sorted(out)


def _hull_full_dim(pts, d):
    """All facets of conv(pts), pts integer and affinely spanning R^d.

    Returns a list of (inward primitive normal, offset c, tight index tuple)
    for the inequality <n, x> >= -c.
    """
    if d == 0:
        return []
    if d == 1:
        vals = [p[0] for p in pts]
        lo, hi = min(vals), max(vals)
        return [
            ((1,), -lo, tuple(i for i, v in enumerate(vals) if v == lo)),
            ((-1,), hi, tuple(i for i, v in enumerate(vals) if v == hi)),
        ]
    if len(pts) == d + 1:
        return _simplex_facets(pts, d)
    first_n, first_tight = _initial_facet(pts, d)
    facets = {}
    queue = [(first_n, tuple(first_tight))]
    while queue:
        n, tight = queue.pop()
        if n in facets:
            continue
        facets[n] = tight
        # ridges = facets of the (d-1)-dimensional face conv(tight); for a
        # simplicial facet these are just the (d-1)-subsets
        if len(tight) == d:
            ridge_sets = [tuple(tight[j] for j in range(d) if j != i) for i in range(d)]
        else:
            sub_pts = [pts[i] for i in tight]
            ridge_sets = [tuple(tight[i] for i in ridge_local) for ridge_local in _face_facets(sub_pts)]
        for ridge_idx in ridge_sets:
            n2, tight2 = _neighbor_facet(pts, d, n, tight, ridge_idx)
            if n2 not in facets:
                queue.append((n2, tuple(tight2)))
    out = []
    for n, tight in sorted(facets.items()):
        c = -dot(n, pts[tight[0]])
        out.append((n, c, tuple(sorted(tight))))
    return out


def _face_facets(pts):
    """Facet tight-sets of conv(pts) inside its own affine span (local idx)."""
    anchor = min(range(len(pts)), key=lambda i: pts[i])
    raw_diffs = [vsub(p, pts[anchor]) for p in pts]
    den = 1
    for v in raw_diffs:
        for x in v:
            q = Fraction(x).denominator
            den = den * q // gcd(den, q)
    diffs = [tuple(int(Fraction(x) * den) for x in v) for v in raw_diffs]
    basis = hnf_column_basis(diffs)
    r = len(basis)
    if r == 0:
        return []
    if len(pts) == r + 1:
        # a simplex: facets are the r-subsets
        return [tuple(j for j in range(r + 1) if j != i) for i in range(r + 1)]
    coords = _span_coordinates(diffs, basis)
    fac = _hull_full_dim(coords, r)
    return [tight for _, _, tight in fac]


def _span_coordinates(diffs, basis):
    """Integer coordinates of difference vectors in a lattice basis of them."""
    bm = _basis_matrix(basis)
    coords = []
    for v in diffs:
        x = solve_linear(bm, v)
        assert x is not None and all(c.denominator == 1 for c in x)
        coords.append(tuple(int(c) for c in x))
    return coords


def _basis_matrix(basis):
    """Matrix with the given (row) vectors as columns."""
    return tuple(zip(*basis))


class FaceLattice:
    """Graded face poset of a polytope, faces keyed by vertex index sets."""

    def __init__(self, faces_by_dim, top_dim):
        self.faces_by_dim = faces_by_dim  # dim -> sorted list of frozensets
        self.top_dim = top_dim

    def f_vector(self):
        return tuple(len(self.faces_by_dim.get(d, [])) for d in range(self.top_dim + 1))

    def faces(self, dim):
        return self.faces_by_dim.get(dim, [])

    def all_faces(self):
        for d in sorted(self.faces_by_dim):
            for f in self.faces_by_dim[d]:
                yield d, f

    def is_face_of(self, small, big):
        return small <= big

    def euler_alternating_sum(self):
        """Alternating sum over nonempty faces including the full face."""
        return sum((-1) ** d * len(fs) for d, fs in self.faces_by_dim.items() if d >= 0)


class LatticePolytope:
    """A convex polytope with exact vertices and inward facet inequalities.

    Vertices may be rational (slices, fibres); facet normals are primitive
    integer functionals.  Inequalities read <normal, x> >= -offset.  For a
    lower-dimensional polytope, `equations` pins down the affine span and
    `span_basis` is a saturated lattice basis of its direction space.
    """

    def __init__(self, ambient_dim, vertices, facets, equations, span_basis, anchor):
        self.ambient_dim = ambient_dim
        self.vertices = tuple(sorted(normalize_point(v) for v in vertices))
        self.facets = tuple(facets)
        self.equations = tuple(equations)
        self.span_basis = tuple(span_basis)
        self.anchor = normalize_point(anchor) if anchor is not None else None
        self.dim = len(self.span_basis)

    # -- construction

    @staticmethod
    def hull(points):
        if not points:
            raise ValueError("empty point list has no hull")
        pts = sorted(set(normalize_point(p) for p in points))
        ambient = len(pts[0])
        if any(len(p) != ambient for p in pts):
            raise ValueError("points of mixed dimension")
        anchor = pts[0]
        diffs = [vsub(p, anchor) for p in pts]
        den = 1
        for v in diffs:
            for x in v:
                q = Fraction(x).denominator
                den = den * q // gcd(den, q)
        int_diffs = [tuple(int(x * den) for x in v) for v in diffs]
        basis = saturate_lattice(int_diffs, ambient)
        d = len(basis)
        # affine-span equations: annihilator functionals of the direction space
        eqs = []
        if d < ambient:
            for f in kernel_basis(tuple(basis)) if basis else [tuple(1 if i == j else 0 for i in range(ambient)) for j in range(ambient)]:
                eqs.append((f, -dot(f, anchor)))
        if d == 0:
            return LatticePolytope(ambient, [anchor], [], eqs, [], anchor)
        coords = []
        bm = _basis_matrix(basis)
        for v in int_diffs:
            x = solve_linear(bm, v)
            assert x is not None and all(c.denominator == 1 for c in x)
            coords.append(tuple(int(c) for c in x))
        facs = _hull_full_dim(coords, d)
        # vertices: points whose tight facet normals span the full span dim
        tight_at = {i: [] for i in range(len(pts))}
        for n, c, tight in facs:
            for i in tight:
                tight_at[i].append(n)
        verts = [pts[i] for i in range(len(pts)) if mat_rank(tuple(tight_at[i])) == d]
        # lift facet functionals to ambient integer functionals
        ambient_facets = []
        for n, c, tight in facs:
            y = solve_linear(tuple(basis), n)
            assert y is not None
            dd = 1
            for comp in y:
                dd = dd * comp.denominator // gcd(dd, comp.denominator)
            f = primitive(tuple(int(comp * dd) for comp in y))
            vals = [dot(f, p) for p in pts]
            lo = min(vals)
            tight_set = frozenset(i for i, v in enumerate(vals) if v == lo)
            if tight_set != frozenset(tight):
                f = tuple(-x for x in f)
                vals = [dot(f, p) for p in pts]
                lo = min(vals)
                assert frozenset(i for i, v in enumerate(vals) if v == lo) == frozenset(tight)
            off = -lo
            off = int(off) if Fraction(off).denominator == 1 else Fraction(off)
            ambient_facets.append((f, off))
        ambient_facets = sorted(set(ambient_facets))
        return LatticePolytope(ambient, verts, ambient_facets, eqs, basis, anchor)

    @staticmethod
    def from_json(obj):
        verts = [tuple(_parse_coord(x) for x in v) for v in obj["vertices"]]
        p = LatticePolytope.hull(verts)
        if p.ambient_dim != obj["ambient_dim"]:
            raise ValueError("ambient_dim mismatch in polytope JSON")
        return p

    def to_json(self):
        return {
            "ambient_dim": self.ambient_dim,
            "vertices": [[_coord_json(x) for x in v] for v in self.vertices],
        }

    # -- basic predicates

    def key(self):
        return self.vertices

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices and self.ambient_dim == other.ambient_dim

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        return f"LatticePolytope(dim={self.dim}, ambient={self.ambient_dim}, vertices={len(self.vertices)})"

    def contains(self, point):
        p = normalize_point(point)
        for f, c in self.equations:
            if dot(f, p) != -c:
                return False
        for n, c in self.facets:
            if dot(n, p) < -c:
                return False
        return True

    def contains_strictly(self, point):
        """Membership in the relative interior."""
        p = normalize_point(point)
        for f, c in self.equations:
            if dot(f, p) != -c:
                return False
        for n, c in self.facets:
            if dot(n, p) <= -c:
                return False
        return True

    def barycenter(self):
        k = len(self.vertices)
        return normalize_point(tuple(sum(Fraction(v[i]) for v in self.vertices) / k for i in range(self.ambient_dim)))

    def is_lattice(self):
        return all(is_lattice_point(v) for v in self.vertices)

    def vertices_on_facet(self, facet):
        n, c = facet
        return tuple(v for v in self.vertices if dot(n, v) == -c)

    def bounding_box(self):
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.ambient_dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.ambient_dim))
        return lo, hi

    # -- lattice data

    def lattice_points(self):
        """All integer points of the polytope, in lexicographic order."""
        if self.dim == 0:
            v = self.vertices[0]
            return [v] if is_lattice_point(v) else []
        if self.is_lattice():
            anchor = self.vertices[0]
            bm = _basis_matrix(self.span_basis)
            coords = []
            for v in self.vertices:
                x = solve_linear(bm, vsub(v, anchor))
                coords.append(tuple(x))
            lo = [min(c[i] for c in coords) for i in range(self.dim)]
            hi = [max(c[i] for c in coords) for i in range(self.dim)]
            ranges = [range(_ceil(a), _floor(b) + 1) for a, b in zip(lo, hi)]
            out = []
            for xi in iproduct(*ranges):
                p = anchor
                for c, b in zip(xi, self.span_basis):
                    if c:
                        p = vadd(p, tuple(c * bb for bb in b))
                if self.contains(p):
                    out.append(normalize_point(p))
            return sorted(out)
        lo, hi = self.bounding_box()
        ranges = [range(_ceil(a), _floor(b) + 1) for a, b in zip(lo, hi)]
        return sorted(p for p in iproduct(*ranges) if self.contains(p))

    def boundary_lattice_points(self):
        return [p for p in self.lattice_points() if not self.contains_strictly(p)]

    def normalized_volume(self):
        """dim! times the Euclidean volume within the affine span (an integer)."""
        if self.dim == 0:
            return 1
        anchor = self.vertices[0]
        bm = _basis_matrix(self.span_basis)
        coords = []
        den = 1
        raw = []
        for v in self.vertices:
            x = solve_linear(bm, vsub(v, anchor))
            raw.append(x)
            for c in x:
                den = den * c.denominator // gcd(den, c.denominator)
        for x in raw:
            coords.append(tuple(int(c * den) for c in x))
        vol_scaled = _nvol_full_dim(coords, self.dim)
        nv = Fraction(vol_scaled, den**self.dim)
        assert nv.denominator == 1 or not self.is_lattice()
        return int(nv) if nv.denominator == 1 else nv

    def is_simplex(self):
        return len(self.vertices) == self.dim + 1

    def is_elementary_simplex(self):
        """A lattice simplex whose only integral points are its vertices."""
        if not self.is_lattice() or not self.is_simplex():
            return False
        return sorted(self.lattice_points()) == sorted(self.vertices)

    # -- duality

    def polar_dual(self):
        if self.dim < self.ambient_dim or not self.contains_strictly(tuple(0 for _ in range(self.ambient_dim))):
            raise ValueError("polar dual undefined: origin must be interior")
        verts = []
        for n, c in self.facets:
            verts.append(tuple(Fraction(x, 1) / c for x in n))
        return LatticePolytope.hull(verts)

    def is_reflexive(self):
        if self.dim < self.ambient_dim or not self.contains_strictly(tuple(0 for _ in range(self.ambient_dim))):
            raise ValueError("reflexivity undefined: origin must be interior")
        return all(c == 1 for _, c in self.facets)

    # -- algebra

    def translate(self, t):
        return LatticePolytope.hull([vadd(v, t) for v in self.vertices])

    def transform(self, u):
        """Image under the integer matrix u (applied on the left)."""
        return LatticePolytope.hull([tuple(dot(row, v) for row in u) for v in self.vertices])

    def faces(self):
        """The complete graded face poset, faces as vertex index sets."""
        by_dim = {}
        seen = set()

        def visit(vidx):
            key = frozenset(vidx)
            if key in seen:
                return
            seen.add(key)
            sub = [self.vertices[i] for i in vidx]
            subdim = _aff_dim(sub)
            by_dim.setdefault(subdim, []).append(key)
            if subdim == 0:
                return
            for tight_local in _face_facets(sub):
                visit([vidx[i] for i in tight_local])

        visit(list(range(len(self.vertices))))
        by_dim[-1] = [frozenset()]
        faces_sorted = {d: sorted(fs, key=lambda s: sorted(s)) for d, fs in by_dim.items()}
        return FaceLattice(faces_sorted, self.dim)


def _aff_dim(points):
    if len(points) <= 1:
        return 0
    a = points[0]
    return mat_rank(tuple(_clear_fractions(vsub(p, a)) for p in points[1:]))


def _clear_fractions(v):
    den = 1
    for x in v:
        q = Fraction(x).denominator
        den = den * q // gcd(den, q)
    return tuple(int(Fraction(x) * den) for x in v)


def _nvol_full_dim(coords, d):
    """Normalized volume of conv(coords), full-dimensional in Z^d."""
    if d == 0:
        return 1
    if d == 1:
        return max(c[0] for c in coords) - min(c[0] for c in coords)
    facs = _hull_full_dim(coords, d)
    v0 = coords[0]
    total = 0
    for n, c, tight in facs:
        h = dot(n, v0) + c
        if h == 0:
            continue
        sub = [coords[i] for i in tight]
        anchor = sub[0]
        # the saturated lattice, so facet volumes are measured in the induced
        # lattice of the ambient space rather than the sublattice the
        # differences happen to generate
        basis = saturate_lattice([vsub(p, anchor) for p in sub], d)
        bm = _basis_matrix(basis)
        sub_coords = []
        for p in sub:
            x = solve_linear(bm, vsub(p, anchor))
            assert x is not None and all(cc.denominator == 1 for cc in x)
            sub_coords.append(tuple(int(cc) for cc in x))
        total += abs(h) * _nvol_full_dim(sub_coords, d - 1)
    return total


def _ceil(x):
    f = Fraction(x)
    return -((-f.numerator) // f.denominator)


def _floor(x):
    f = Fraction(x)
    return f.numerator // f.denominator


def _parse_coord(x):
    if isinstance(x, str):
        num, _, den = x.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    return int(x)


def _coord_json(x):
    f = Fraction(x)
    return int(f) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


# --- derived constructions -------------------------------------------------


def hull(points):
    return LatticePolytope.hull(points)


def polytope_from_inequalities(ineqs, equations, ambient_dim):
    """Vertex enumeration of {x : <n,x> >= -c, <f,x> = -e}; bounded inputs only.

    Brute force over constraint subsets; all the cells this package intersects
    are small, so this stays cheap.
    """
    from itertools import combinations

    all_eqs = sorted({(tuple(f), Fraction(e)) for f, e in equations})
    ineqs = sorted({(tuple(n), Fraction(c)) for n, c in ineqs})
    rows_eq = [f for f, _ in all_eqs]
    rhs_eq = [-e for _, e in all_eqs]
    n_ineq = len(ineqs)
    need = ambient_dim - mat_rank(tuple(_clear_fractions(r) for r in rows_eq)) if rows_eq else ambient_dim
    cand = set()
    for sub in combinations(range(n_ineq), min(need, n_ineq)):
        rows = list(rows_eq) + [ineqs[i][0] for i in sub]
        rhs = list(rhs_eq) + [-ineqs[i][1] for i in sub]
        x = solve_linear(tuple(rows), tuple(rhs))
        if x is None:
            continue
        if mat_rank(tuple(_clear_fractions(r) for r in rows)) != ambient_dim:
            continue
        ok = all(dot(f, x) == -e for f, e in all_eqs) and all(dot(n, x) >= -c for n, c in ineqs)
        if ok:
            cand.add(normalize_point(x))
    if not cand:
        return None
    return LatticePolytope.hull(sorted(cand))


def clip_by_halfspace(cell, normal, offset):
    """cell intersected with {<normal, x> >= -offset}, by exact edge clipping.

    Much cheaper than vertex enumeration over constraint subsets: kept
    vertices plus edge crossings already form the vertex set of the clip.
    """
    vals = [Fraction(dot(normal, v)) + offset for v in cell.vertices]
    if all(v >= 0 for v in vals):
        return cell
    if all(v <= 0 for v in vals):
        return None
    verts = list(cell.vertices)
    tight_sets = [frozenset(n for n, c in cell.facets if dot(n, v) == -c) for v in verts]
    eq_rows = tuple(_clear_fractions(f) for f, _ in cell.equations)
    pts = [v for v, val in zip(verts, vals) if val >= 0]
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if vals[i] * vals[j] >= 0:
                continue
            # (v_i, v_j) is an edge iff its common tight facets together with
            # the span equations cut out a line
            shared = tuple(tight_sets[i] & tight_sets[j])
            if mat_rank(shared + eq_rows) != cell.ambient_dim - 1:
                continue
            t = vals[i] / (vals[i] - vals[j])
            pts.append(
                normalize_point(
                    tuple(Fraction(a) + t * (Fraction(b) - Fraction(a)) for a, b in zip(verts[i], verts[j]))
                )
            )
    if not pts:
        return None
    return LatticePolytope.hull(sorted(set(normalize_point(p) for p in pts)))


def minkowski_sum(p, q):
    if p.ambient_dim != q.ambient_dim:
        raise ValueError("dimension mismatch in Minkowski sum")
    return LatticePolytope.hull([vadd(a, b) for a in p.vertices for b in q.vertices])


def product(p, q):
    return LatticePolytope.hull([a + b for a in p.vertices for b in q.vertices])


def standard_simplex(dim, dilation=1):
    """dilation * Delta^dim, the hull of 0 and dilation*e_i."""
    pts = [tuple(0 for _ in range(dim))]
    for i in range(dim):
        pts.append(tuple(dilation if j == i else 0 for j in range(dim)))
    return LatticePolytope.hull(pts)


def centered_dilated_simplex(dim):
    """(dim+1) * Delta^dim - (1, ..., 1): the reflexive simplex of P^dim."""
    return standard_simplex(dim, dim + 1).translate(tuple(-1 for _ in range(dim)))


def cube(dim, radius=1):
    pts = list(iproduct(*[(-radius, radius)] * dim))
    return LatticePolytope.hull(pts)


def segment(a, b):
    return LatticePolytope.hull([(a,), (b,)])


class NefPartition:
    """A Minkowski decomposition of a reflexive polytope into lattice parts."""

    def __init__(self, parent, parts):
        self.parent = parent
        self.parts = tuple(parts)
        s = parts[0]
        for q in parts[1:]:
            s = minkowski_sum(s, q)
        if s.vertices != parent.vertices:
            raise ValueError("nef partition parts do not sum to the parent polytope")

    def __repr__(self):
        return f"NefPartition(parent dim={self.parent.dim}, {len(self.parts)} parts)"
