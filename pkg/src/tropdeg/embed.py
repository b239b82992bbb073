"""Tropical embedding machinery: fibres, simplex fibrations, LG truncation.

The fibration data of a wall-type degeneration lives on the cone over each
wall-adjacent cell at level 1: component functionals y_0..y_r and the level
functional p, all nonnegative on the cone.  The deepest-stratum complex is the
union of the local fibres over (1,...,1), and integral tangent surjectivity of
the embedding is a Smith-normal-form check cell by cell.
"""

from __future__ import annotations

from fractions import Fraction

from .exactlin import (
    RationalCone,
    cone_from_generators,
    dot,
    is_integrally_surjective,
    mat_rank,
    saturate_lattice,
    snf_diagonal,
    solve_linear,
    vsub,
)
from .polytope import (
    LatticePolytope,
    _clear_fractions,
    hull,
    normalize_point,
    polytope_from_inequalities,
    standard_simplex,
)
from .tropical import TropicalSpace


class FibrationData:
    """Local model of the log structure at a deepest stratum.

    cone lives in M + Z (position, level); the component functionals y_i and
    the smoothing functional p are linear there and nonnegative on the cone.
    The plus map sends (y_0, ..., y_r, p) to (sum y_i, p).
    """

    def __init__(self, cone, y_functionals, p_functional):
        self.cone = cone
        self.y = tuple(tuple(f) for f in y_functionals)
        self.p = tuple(p_functional)
        for f in list(self.y) + [self.p]:
            for g in cone.generators:
                if dot(f, g) < 0:
                    raise ValueError("fibration functional is negative on the cone")
        if mat_rank(self.y) != len(self.y):
            raise ValueError("component functionals must be linearly independent")
        self._fibre_cache = {}

    @property
    def rank(self):
        return len(self.y) - 1

    def plus_map(self, values):
        *ys, q = values
        return (sum(ys), q)


EMPTY_FIBRE = None


def local_fibre(fib, target):
    """The polytope cut from the cone by <y_i, .> = target_i, <p, .> = target[-1].

    Returns None (the explicit empty polytope) when the fibre is empty.
    """
    if len(target) != len(fib.y) + 1:
        raise ValueError("target length must be number of y functionals plus one")
    key = tuple(Fraction(t) for t in target)
    if key in fib._fibre_cache:
        return fib._fibre_cache[key]
    ambient = fib.cone.ambient_dim
    ineqs = [(n, 0) for n in fib.cone.facet_normals]
    eqs = [(f, -Fraction(t)) for f, t in zip(fib.y, target[:-1])]
    eqs.append((fib.p, -Fraction(target[-1])))
    poly = polytope_from_inequalities(ineqs, eqs, ambient)
    fib._fibre_cache[key] = poly
    return poly


def cone_over_cell(cell, collar=None):
    """The cone over (cell, 1) in M + Z, optionally clipping to a collar."""
    pts = cell.vertices if collar is None else collar
    gens = [tuple(v) + (1,) for v in pts]
    return cone_from_generators(gens, cell.ambient_dim + 1)


def wall_fibration_data(space, coord, level):
    """Per-cell fibration data for a rank-1 Tyurin wall {x_coord = level}.

    Only cells meeting the wall get data (the positive integral
    neighbourhood); their cones are clipped to the unit collar so the
    component functionals stay nonnegative.
    """
    n = space.ambient_dim
    e = tuple(1 if i == coord else 0 for i in range(n))
    y0 = tuple(x for x in e) + (1 - level,)  # y0(x,t) = x_coord + (1-level) t
    y1 = tuple(-x for x in e) + (1 + level,)  # y1(x,t) = -x_coord + (1+level) t
    p = tuple(0 for _ in range(n)) + (1,)
    out = {}
    for cell in space.maximal_cells:
        vals = [v[coord] for v in cell.vertices]
        if not (min(vals) <= level <= max(vals)):
            continue
        clipped = polytope_from_inequalities(
            list(cell.facets) + [(e, 1 - level), (tuple(-x for x in e), 1 + level)],
            list(cell.equations),
            n,
        )
        if clipped is None or clipped.dim != cell.dim:
            continue
        cone = cone_over_cell(cell, collar=clipped.vertices)
        out[cell.key()] = FibrationData(cone, [y0, y1], p)
    return out


class ComplexMap:
    """A cellwise integral affine map between complexes.

    entries: {source: key, target: key, matrix, translation}; `surjective`,
    `missing_cells` and `warnings` carry the verdicts of the construction.
    """

    def __init__(self, entries, surjective=None, missing_cells=(), warnings=(), metadata=None):
        self.entries = tuple(entries)
        self.surjective = surjective
        self.missing_cells = tuple(missing_cells)
        self.warnings = tuple(warnings)
        self.metadata = dict(metadata or {})

    def to_json(self):
        from .jsonio import key_json

        return {
            "cells": [
                {
                    "source": key_json(e["source"]),
                    "target": key_json(e["target"]),
                    "matrix": [list(r) for r in e["matrix"]] if e.get("matrix") is not None else None,
                    "translation": list(e["translation"]) if e.get("translation") is not None else None,
                }
                for e in self.entries
            ],
            "surjective": self.surjective,
            "missing_cells": [key_json(k) for k in self.missing_cells],
            "warnings": list(self.warnings),
        }


def _slice_lattice_chart(cells):
    """Anchor and saturated direction basis of the affine span of a cell union."""
    verts = sorted({v for c in cells for v in c.vertices})
    anchor = verts[0]
    diffs = [_clear_fractions(vsub(v, anchor)) for v in verts[1:]]
    ambient = len(anchor)
    basis = saturate_lattice(diffs, ambient) if diffs else []
    return anchor, basis


def _reduce_cell(cell, anchor, basis):
    bm = tuple(zip(*basis))
    red = []
    for v in cell.vertices:
        x = solve_linear(bm, vsub(v, anchor))
        assert x is not None
        red.append(tuple(x))
    return hull(red)


def embed_D(space, fibration):
    """The deepest-stratum complex as fibres over (1,...,1), with its embedding.

    Returns (T_D, iota, surjective): T_D in reduced slice coordinates, iota a
    ComplexMap back into the host, and surjective the conjunction of the
    integral tangent surjectivity checks over all cells of T_D.
    """
    if not fibration:
        raise ValueError("no fibration data supplied")
    fibres = {}
    hosts = {}
    rank = None
    for key, fib in sorted(fibration.items()):
        rank = fib.rank
        target = tuple(1 for _ in range(len(fib.y))) + (1,)
        f = local_fibre(fib, target)
        if f is None:
            continue
        level_one = hull([v[:-1] for v in f.vertices])
        fibres[level_one.key()] = level_one
        hosts[level_one.key()] = key
    if not fibres:
        raise ValueError("all local fibres over (1,...,1) are empty")
    _check_face_consistency(fibration)
    cells = list(fibres.values())
    anchor, basis = _slice_lattice_chart(cells)
    dim = len(basis)
    surjective = True
    entries = []
    host_cells = {c.key(): c for c in space.maximal_cells}
    for key, cell in sorted(fibres.items()):
        host = host_cells[hosts[key]]
        tangent = space.tangent_basis(host)
        fib = fibration[hosts[key]]
        rows = []
        for y in fib.y[1:]:
            rows.append(tuple(dot(y[:-1], b) for b in tangent))
        if not is_integrally_surjective(tuple(rows)):
            surjective = False
        reduced = _reduce_cell(cell, anchor, basis) if basis else hull([(0,)])
        entries.append(
            {
                "source": reduced.key(),
                "target": hosts[key],
                "matrix": tuple(zip(*basis)) if basis else ((0,),) * len(anchor),
                "translation": anchor,
            }
        )
    if basis:
        reduced_cells = [_reduce_cell(c, anchor, basis) for c in cells]
        t_d_ambient = dim
    else:
        reduced_cells = [hull([(0,)])]
        t_d_ambient = 1
    complex_dim = max(c.dim for c in reduced_cells)
    t_d = TropicalSpace(
        t_d_ambient,
        complex_dim,
        reduced_cells,
        "solid",
        metadata={"embedded": "deepest stratum fibre over (1,...,1)", "anchor": anchor, "basis": basis, "rank": rank},
    )
    _assert_fan_compatibility(space, cells, hosts, host_cells)
    iota = ComplexMap(entries, surjective=surjective, metadata={"anchor": anchor, "fibration": dict(fibration)})
    return t_d, iota, surjective


def _check_face_consistency(fibration):
    """Fibration functionals of cells sharing a face must agree on the overlap."""
    items = sorted(fibration.items())
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            k1, f1 = items[i]
            k2, f2 = items[j]
            shared = sorted(set(k1) & set(k2))
            if not shared:
                continue
            for v in shared:
                w = tuple(v) + (1,)
                v1 = tuple(dot(y, w) for y in f1.y)
                v2 = tuple(dot(y, w) for y in f2.y)
                if v1 != v2:
                    raise ValueError("fibration data inconsistent across a shared face")


def _assert_fan_compatibility(space, cells, hosts, host_cells):
    """The host charts must not degenerate the embedded star at any vertex."""
    for cell in cells:
        host = host_cells[hosts[cell.key()]]
        for v in cell.vertices:
            if not all(Fraction(x).denominator == 1 for x in v):
                continue
            chart = space.chart_matrix(v, host)
            imgs = []
            for w in cell.vertices:
                d = vsub(w, v)
                if all(x == 0 for x in d):
                    continue
                imgs.append(tuple(sum(Fraction(chart[r][c]) * Fraction(d[c]) for c in range(len(d))) for r in range(len(chart))))
            if imgs and mat_rank(tuple(_clear_fractions(x) for x in imgs)) != cell.dim:
                raise ValueError("embedding is not compatible with the fan structure at " + str(v))


def simplex_fibration(space, fibration):
    """Cellwise affine map onto the (r+1)-dilated r-simplex.

    The fibre over the barycenter (1,...,1) equals the embed_D image cell by
    cell; a warning is flagged when the fibration rescales the integral
    affine structure (a nontrivial SNF diagonal on some cell).
    """
    if not fibration:
        raise ValueError("no fibration data supplied")
    rank = next(iter(fibration.values())).rank
    target = standard_simplex(rank, rank + 1)
    entries = []
    warnings = []
    host_cells = {c.key(): c for c in space.maximal_cells}
    for key, fib in sorted(fibration.items()):
        host = host_cells[key]
        matrix = tuple(tuple(y[:-1]) for y in fib.y[1:])
        translation = tuple(y[-1] for y in fib.y[1:])
        tangent = space.tangent_basis(host)
        rows = tuple(tuple(dot(y[:-1], b) for b in tangent) for y in fib.y[1:])
        diag = snf_diagonal(rows)
        if any(d > 1 for d in diag):
            warnings.append(f"fibration rescales the integral affine structure on {key}")
        entries.append(
            {
                "source": key,
                "target": target.key(),
                "matrix": matrix,
                "translation": translation,
            }
        )
    return ComplexMap(entries, surjective=None, warnings=warnings, metadata={"target": target, "rank": rank})


def barycenter_fibre(space, fibration):
    """Fibre of the simplex fibration over the barycenter, as cell keys."""
    out = []
    for key, fib in sorted(fibration.items()):
        target = tuple(1 for _ in range(len(fib.y))) + (1,)
        f = local_fibre(fib, target)
        if f is None:
            continue
        out.append(hull([v[:-1] for v in f.vertices]).key())
    return sorted(set(out))


def side_subcomplex(space, coord, level, side):
    """Cells of the space on one side of a coordinate level (closed)."""
    cells = []
    for c in space.maximal_cells:
        vals = [v[coord] for v in c.vertices]
        if side == "low" and max(vals) <= level:
            cells.append(c)
        elif side == "high" and min(vals) >= level:
            cells.append(c)
    boundary = [k for k in space.boundary_keys if any(set(k) <= set(c.vertices) for c in cells)]
    return TropicalSpace(
        space.ambient_dim,
        space.dim,
        cells,
        space.chart_kind,
        boundary_keys=boundary,
        explicit_charts=space.explicit_charts,
        metadata=dict(space.metadata),
    )


def lg_truncate(space, u_functional):
    """Clip all cells to u <= 1 and record the new boundary at level 1.

    u must be affine on every cell (it is given as one global affine
    functional); no interior walls are created inside the fibre over 1.
    """
    coeffs, const = u_functional
    ambient = space.ambient_dim
    clipped = []
    for c in space.maximal_cells:
        vals = [dot(coeffs, v) + const for v in c.vertices]
        if min(vals) > 1:
            continue
        if max(vals) <= 1:
            clipped.append(c)
            continue
        x = polytope_from_inequalities(
            list(c.facets) + [(tuple(-Fraction(a) for a in coeffs), Fraction(1) - Fraction(const))],
            list(c.equations),
            ambient,
        )
        if x is not None and x.dim == c.dim:
            clipped.append(x)
    from .polytope import _face_facets

    level_keys = set()
    wall_hosts = {}
    for c in clipped:
        verts = list(c.vertices)
        below = any(dot(coeffs, v) + const < 1 for v in verts)
        for tight in _face_facets(verts):
            face = [verts[i] for i in tight]
            key = tuple(sorted(face))
            wall_hosts.setdefault(key, []).append(below)
            if all(dot(coeffs, p) + const == 1 for p in face):
                level_keys.add(key)
    for key in level_keys:
        hosts = wall_hosts.get(key, [])
        # a slab inside the fibre over 1: a level wall separating two cells
        # that both dip strictly below the level
        if len(hosts) > 1 and sum(1 for b in hosts if b) > 1:
            raise ValueError("interior wall created inside the fibre over 1")
    new_boundary = set(space.boundary_keys) | level_keys
    out = TropicalSpace(
        ambient,
        space.dim,
        clipped,
        space.chart_kind,
        boundary_keys=sorted(new_boundary),
        explicit_charts=space.explicit_charts,
        metadata={**space.metadata, "lg_truncated": True},
    )
    return out


def open_embed_LG(t_z, t_x):
    """Cell correspondence embedding an LG-model complex into the total one.

    Each cell of t_z must land inside a cell of t_x (identity coordinates);
    per-cell certificates are identity maps, hence unimodular.  Maximal cells
    of t_x not meeting the image are reported as missing.
    """
    entries = []
    covered = set()
    for c in t_z.maximal_cells:
        target = None
        for big in t_x.maximal_cells:
            if all(big.contains(v) for v in c.vertices):
                target = big
                break
        if target is None:
            raise ValueError("no locally isomorphic correspondence for cell " + str(c.key()))
        covered.add(target.key())
        n = t_x.ambient_dim
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        entries.append(
            {
                "source": c.key(),
                "target": target.key(),
                "matrix": ident,
                "translation": tuple(0 for _ in range(n)),
            }
        )
    missing = [c.key() for c in t_x.maximal_cells if c.key() not in covered]
    return ComplexMap(entries, surjective=not missing, missing_cells=missing)


def specialization_map(xi_gen, xi_zero):
    """Cellwise specialization from the generic-fibre complex onto the central one.

    Every cell of xi_zero must lie in a cell of xi_gen (closure containment in
    the common refinement); the map is the identity on supports.
    """
    entries = []
    covered_sources = set()
    for c in xi_zero.maximal_cells:
        source = None
        for big in xi_gen.maximal_cells:
            if all(big.contains(v) for v in c.vertices):
                source = big
                break
        if source is None:
            raise ValueError("inputs come from unrelated pipelines: unmatched cell " + str(c.key()))
        covered_sources.add(source.key())
        n = xi_gen.ambient_dim
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        entries.append(
            {
                "source": source.key(),
                "target": c.key(),
                "matrix": ident,
                "translation": tuple(0 for _ in range(n)),
            }
        )
    surjective = covered_sources == {c.key() for c in xi_gen.maximal_cells}
    return ComplexMap(entries, surjective=surjective)
