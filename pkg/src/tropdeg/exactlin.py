"""Exact integer/rational linear algebra kernel.

Vectors are plain tuples of ints (or Fractions where noted), matrices are
tuples of row tuples.  Everything is arbitrary precision; no floats anywhere,
since reflexivity and monodromy verdicts depend on exact offsets.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

IntVector = tuple
IntMatrix = tuple


def content(v):
    """gcd of the entries of v (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def primitive(v):
    """v divided by the gcd of its entries.

    Raises ValueError on the zero vector.  Idempotent.
    """
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(int(x) // g for x in v)


def is_zero(v):
    return all(x == 0 for x in v)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v, strict=True))


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(c, v):
    return tuple(c * a for a in v)


def vneg(v):
    return tuple(-a for a in v)


def mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_vec(a, v):
    return tuple(dot(row, v) for row in a)


def mat_transpose(a):
    return tuple(zip(*a))


def mat_is_identity(a):
    n = len(a)
    return all(len(r) == n for r in a) and a == mat_identity(n)


def det(m):
    """Determinant by fraction-free Bareiss elimination (exact ints)."""
    n = len(m)
    if n == 0:
        return 1
    assert all(len(row) == n for row in m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def mat_rank(m):
    """Rank over the rationals, by fraction-free elimination."""
    if not m:
        return 0
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = len(a), len(a[0])
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pr = a[rank]
        for r in range(rows):
            if r != rank and a[r][c] != 0:
                f = a[r][c] / pr[c]
                a[r] = [x - f * y for x, y in zip(a[r], pr)]
        rank += 1
        if rank == rows:
            break
    return rank


def solve_linear(m, rhs):
    """One rational solution x of m x = rhs, or None if inconsistent.

    Free variables are set to 0.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[Fraction(x) for x in m[r]] + [Fraction(rhs[r])] for r in range(rows)]
    pivots = []
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pr = [x / a[rank][c] for x in a[rank]]
        a[rank] = pr
        for r in range(rows):
            if r != rank and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], pr)]
        pivots.append(c)
        rank += 1
    for r in range(rank, rows):
        if a[r][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = a[r][cols]
    return tuple(x)


def _exgcd(a, b):
    """(g, s, t) with s*a + t*b = g = gcd(a, b), g >= 0.

    When a divides b, t is guaranteed to be 0, so the associated 2x2 transform
    is a plain elimination and never swaps; the clearing loops rely on this.
    """
    if a != 0 and b % a == 0:
        return (abs(a), 1 if a > 0 else -1, 0)
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def smith_normal_form(m):
    """Smith normal form with transforms.

    Returns (S, U, V) with S = U @ m @ V, U and V unimodular, S diagonal with
    nonnegative entries d1 | d2 | ...
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(r) for r in m]
    u = [list(r) for r in mat_identity(rows)]
    v = [list(r) for r in mat_identity(cols)]

    def row_op(i, j, g, s, t, ai, aj):
        # rows i,j <- (s*i + t*j, (-aj/g)*i + (ai/g)*j); determinant 1
        c1, c2 = -aj // g, ai // g
        for mat in (a, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [s * x + t * y for x, y in zip(ri, rj)]
            mat[j] = [c1 * x + c2 * y for x, y in zip(ri, rj)]

    def col_op(i, j, g, s, t, ai, aj):
        c1, c2 = -aj // g, ai // g
        for mat in (a, v):
            for row in mat:
                x, y = row[i], row[j]
                row[i] = s * x + t * y
                row[j] = c1 * x + c2 * y

    def clear_pivot(k):
        """Alternate row/column gcd steps until row k and column k are clear."""
        while True:
            for i in range(k + 1, rows):
                if a[i][k] != 0:
                    g, s, t = _exgcd(a[k][k], a[i][k])
                    row_op(k, i, g, s, t, a[k][k], a[i][k])
            changed = False
            for j in range(k + 1, cols):
                if a[k][j] != 0:
                    g, s, t = _exgcd(a[k][k], a[k][j])
                    col_op(k, j, g, s, t, a[k][k], a[k][j])
                    changed = True
            if not changed or all(a[i][k] == 0 for i in range(k + 1, rows)):
                if all(a[i][k] == 0 for i in range(k + 1, rows)) and all(
                    a[k][j] == 0 for j in range(k + 1, cols)
                ):
                    return

    n = min(rows, cols)
    for k in range(n):
        while True:
            piv = next(
                ((i, j) for i in range(k, rows) for j in range(k, cols) if a[i][j] != 0),
                None,
            )
            if piv is None:
                break
            pi, pj = piv
            if pi != k:
                a[k], a[pi] = a[pi], a[k]
                u[k], u[pi] = u[pi], u[k]
            if pj != k:
                for mat in (a, v):
                    for row in mat:
                        row[k], row[pj] = row[pj], row[k]
            clear_pivot(k)
            # enforce d_k | everything in the remaining block, else fold the
            # offending row into row k and redo the clearing
            bad = next(
                (
                    i
                    for i in range(k + 1, rows)
                    for j in range(k + 1, cols)
                    if a[i][j] % a[k][k] != 0
                ),
                None,
            )
            if bad is None:
                break
            for mat in (a, u):
                mat[k] = [x + y for x, y in zip(mat[k], mat[bad])]
    # normalize signs into U
    for k in range(n):
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
    return (
        tuple(tuple(r) for r in a),
        tuple(tuple(r) for r in u),
        tuple(tuple(r) for r in v),
    )


def snf_diagonal(m):
    s, _, _ = smith_normal_form(m)
    return tuple(s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)))


def is_integrally_surjective(m):
    """True iff m: Z^cols -> Z^rows is onto, i.e. the SNF has rows many 1s."""
    rows = len(m)
    if rows == 0:
        return True
    d = snf_diagonal(m)
    return len(d) >= rows and all(d[i] == 1 for i in range(rows))


def hnf_column_basis(vectors):
    """Column-style Hermite basis of the lattice spanned by the given vectors.

    Returns a list of r independent integer vectors spanning the same lattice,
    in a canonical (lower-triangular-ish) form.  Empty list for rank 0.
    """
    vecs = [list(v) for v in vectors if not is_zero(v)]
    if not vecs:
        return []
    dim = len(vecs[0])
    basis = []
    work = vecs
    for c in range(dim):
        nonzero = [v for v in work if v[c] != 0]
        rest = [v for v in work if v[c] == 0]
        if not nonzero:
            work = rest
            continue
        # reduce all vectors with nonzero c-entry to a single pivot by gcd steps
        while len(nonzero) > 1:
            nonzero.sort(key=lambda v: abs(v[c]))
            p = nonzero[0]
            out = [p]
            for v in nonzero[1:]:
                q = v[c] // p[c]
                w = [x - q * y for x, y in zip(v, p)]
                if w[c] != 0:
                    out.append(w)
                elif not all(x == 0 for x in w):
                    rest.append(w)
            nonzero = out
        piv = nonzero[0]
        if piv[c] < 0:
            piv = [-x for x in piv]
        # reduce earlier pivots against this one for canonicity
        for b in basis:
            if b[c] != 0:
                q = b[c] // piv[c]
                for i in range(dim):
                    b[i] -= q * piv[i]
        basis.append(piv)
        work = rest
    return [tuple(b) for b in basis]


def kernel_basis(m):
    """Integer basis of the kernel lattice {x in Z^cols : m x = 0}."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if rows == 0:
        return [tuple(mat_identity(cols)[i]) for i in range(cols)]
    s, _, v = smith_normal_form(m)
    d = snf_diagonal(m)
    rank = sum(1 for x in d if x != 0)
    vt = mat_transpose(v)
    return [vt[j] for j in range(rank, cols)]


def saturate_lattice(vectors, dim):
    """Basis of the saturation (span over Q intersected with Z^dim)."""
    basis = hnf_column_basis(vectors)
    if not basis:
        return []
    # saturation = ker(ann) where ann = ker(basis), both over Z
    ann = kernel_basis(tuple(basis))
    if not ann:
        return [tuple(r) for r in mat_identity(dim)]
    return hnf_column_basis(kernel_basis(tuple(ann)))


def complete_to_unimodular(v):
    """A unimodular matrix U with U @ v = e1, for primitive v.

    Rows 2..n of U give a basis of functionals cutting out the quotient Z^n/Zv.
    """
    if content(v) != 1:
        raise ValueError("vector must be primitive")
    s, u, vv = smith_normal_form(tuple((x,) for x in v))
    assert s[0][0] == 1
    if vv[0][0] == -1:
        u = tuple(tuple(-x for x in row) for row in u)
    assert mat_vec(u, v) == tuple(1 if i == 0 else 0 for i in range(len(v)))
    return u


def quotient_chart(v):
    """Projection matrix Z^n -> Z^(n-1) with kernel exactly Zv (v primitive)."""
    u = complete_to_unimodular(v)
    return u[1:]


class RationalCone:
    """A rational polyhedral cone with both generator and facet descriptions.

    Generators are primitive extreme rays plus, when the cone has a lineality
    space, a +-pair of primitive vectors per lineality basis direction.
    Every generator pairs >= 0 with every facet normal.
    """

    def __init__(self, ambient_dim, generators, facet_normals):
        self.ambient_dim = ambient_dim
        self.generators = tuple(sorted(generators))
        self.facet_normals = tuple(sorted(facet_normals))
        for g in self.generators:
            for h in self.facet_normals:
                if dot(g, h) < 0:
                    raise ValueError("generator violates facet inequality")

    def __eq__(self, other):
        return (
            isinstance(other, RationalCone)
            and self.ambient_dim == other.ambient_dim
            and self.contains_all(other.generators)
            and other.contains_all(self.generators)
            and len(self.generators) == len(other.generators)
        )

    def __repr__(self):
        return f"RationalCone(dim={self.ambient_dim}, rays={list(self.generators)})"

    def contains(self, v):
        return all(dot(v, h) >= 0 for h in self.facet_normals)

    def contains_all(self, vs):
        return all(self.contains(v) for v in vs)

    def is_pointed(self):
        return mat_rank(self.facet_normals) == self.ambient_dim if self.facet_normals else self.ambient_dim == 0

    def dim(self):
        return mat_rank(self.generators) if self.generators else 0


def _extreme_rays_of_halfspaces(normals, dim):
    """Extreme rays of {x : <n,x> >= 0 for all n}, assuming the cone is pointed.

    Brute force over (dim-1)-subsets of normals; fine for the small cones here.
    """
    rays = []
    seen = set()
    if mat_rank(normals) < dim:
        raise ValueError("cone is not pointed")
    if dim == 1:
        return sorted(c for c in ((1,), (-1,)) if all(dot(c, n) >= 0 for n in normals))
    for sub in combinations(range(len(normals)), dim - 1):
        m = tuple(normals[i] for i in sub)
        if mat_rank(m) != dim - 1:
            continue
        ker = kernel_basis(m)
        if len(ker) != 1:
            continue
        r = primitive(ker[0])
        for cand in (r, vneg(r)):
            if all(dot(cand, n) >= 0 for n in normals):
                if cand not in seen:
                    seen.add(cand)
                    rays.append(cand)
    # drop rays that are nonnegative combinations of the others: an extreme ray
    # is the unique ray whose tight set is not contained in another's
    out = []
    tights = {r: frozenset(i for i, n in enumerate(normals) if dot(r, n) == 0) for r in rays}
    for r in rays:
        if any(r2 != r and tights[r] < tights[r2] for r2 in rays):
            continue
        out.append(r)
    return sorted(out)


def cone_from_generators(gens, ambient_dim):
    """Build a RationalCone from ray generators (double description)."""
    gens = [primitive(g) for g in gens if not is_zero(g)]
    gens = sorted(set(gens))
    if not gens:
        return RationalCone(ambient_dim, [], [tuple(r) for r in mat_identity(ambient_dim)] + [vneg(r) for r in mat_identity(ambient_dim)])
    # facet normals of cone(gens) = extreme rays of the dual cone, computed in
    # the span when the cone is not full dimensional
    span = saturate_lattice(gens, ambient_dim)
    rank = len(span)
    # coordinates of generators in the span basis
    span_t = mat_transpose(tuple(span))
    coords = []
    for g in gens:
        x = solve_linear(span_t, g)
        assert x is not None and all(xf.denominator == 1 for xf in x)
        coords.append(tuple(int(xf) for xf in x))
    dual_in_span = _dual_rays_general(coords, rank)
    # facet normals back in ambient coordinates: n_span composed with the
    # coordinate functionals of the span; plus +-normals cutting the span
    ann = kernel_basis(tuple(span))
    span_cut = [tuple(a) for a in ann] + [vneg(a) for a in ann]
    # lift span-normals: need integer functional on Z^n restricting correctly;
    # use a rational solve against span basis then clear denominators
    facet_normals = []
    for n_span in dual_in_span:
        # functional f with f(span_j) = n_span_j, f = y @ (rows = identity):
        # solve span_t^T y = n_span  (y in Q^n), then clear denominators
        y = solve_linear(tuple(span), n_span)
        assert y is not None
        den = 1
        for c in y:
            den = den * c.denominator // gcd(den, c.denominator)
        f = tuple(int(c * den) for c in y)
        if not is_zero(f):
            facet_normals.append(primitive(f))
    facet_normals = sorted(set(facet_normals + span_cut))
    # extreme rays among gens: keep only generators not in the cone of the rest
    extreme = _extreme_generators(gens, facet_normals)
    return RationalCone(ambient_dim, extreme, facet_normals)


def _dual_rays_general(gens, dim):
    """Extreme rays of the dual cone {m : <m,g> >= 0}, gens full rank in Z^dim.

    Handles the non-pointed dual (when gens do not span positively) by
    splitting off the lineality space {m : <m,g> = 0 for all g}.
    """
    if dim == 0:
        return []
    lin = kernel_basis(tuple(gens))
    if not lin:
        return _extreme_rays_of_halfspaces(tuple(gens), dim)
    # dual = lineality + pointed part in the quotient by the lineality span
    lin_t = tuple(lin)
    comp = kernel_basis(lin_t)  # functionals vanishing... complement lattice
    if not comp:
        return sorted(set([primitive(b) for b in lin] + [vneg(primitive(b)) for b in lin]))
    proj = tuple(comp)  # rows: basis of the complement lattice (as vectors)
    # constraints in complement coordinates: <m, g> with m = sum c_i comp_i
    constr = tuple(tuple(dot(c, g) for c in proj) for g in gens)
    sub_rays = _extreme_rays_of_halfspaces(constr, len(proj))
    rays = [primitive(tuple(dot(tuple(r[i] for i in range(len(proj))), col) for col in zip(*proj))) for r in sub_rays]
    rays += [primitive(b) for b in lin] + [vneg(primitive(b)) for b in lin]
    return sorted(set(rays))


def _extreme_generators(gens, facet_normals):
    """Drop generators that are nonnegative combinations of the others."""
    final = []
    for i, g in enumerate(gens):
        others = [h for j, h in enumerate(gens) if j != i]
        if not others or not _in_cone_of(g, others):
            final.append(g)
    return sorted(final)


def _in_cone_of(v, gens):
    """Is v a nonnegative rational combination of gens?  Exact LP by search.

    Small instances only: solves with Fourier-Motzkin style recursion via
    vertex enumeration on the coefficient polytope.
    """
    # Solve gens^T x = v, x >= 0.  Use a simple exact simplex-free method:
    # iterate over subsets of gens of size <= rank and test basic solutions.
    n = len(gens)
    rank = mat_rank(tuple(gens))
    for size in range(1, rank + 1):
        for sub in combinations(range(n), size):
            m = mat_transpose(tuple(gens[i] for i in sub))
            x = solve_linear(m, v)
            if x is None:
                continue
            if all(c >= 0 for c in x) and mat_vec(m, x) == tuple(Fraction(a) for a in v):
                return True
    return False


def dualize_cone(cone):
    """The dual cone {m : <m, v> >= 0 for all v in cone}.

    Applying twice returns a cone equal (as a set) to the input.
    """
    if not cone.generators:
        # dual of {x : <n,x> >= 0} with the zero cone's normals is everything;
        # the zero cone arises as dual of the full space and vice versa
        if all(is_zero(n) for n in cone.facet_normals) or not cone.facet_normals:
            pass
        # dual of {0} is the full space
        idm = mat_identity(cone.ambient_dim)
        gens = [tuple(r) for r in idm] + [vneg(r) for r in idm]
        return cone_from_generators(gens, cone.ambient_dim)
    rays = _dual_rays_general([tuple(g) for g in cone.generators], cone.ambient_dim)
    return cone_from_generators(rays, cone.ambient_dim)
