"""Moment-graph data model and the solver for the edge-congruence subalgebra.

The solver works one even degree at a time: homogeneity makes the congruence
system block-diagonal by degree, and each block is an exact linear problem on
the coefficient vectors of the fixed-point tuples.  Graded-field coefficients
go through Gaussian elimination; integral coefficients go through Smith/Hermite
reduction, reporting free ranks and elementary divisors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .classifying import (
    RestrictionIdeal,
    _slice_monomials,
    ideal_multiples_basis,
    ideal_residue,
    kernel_ideal,
    transport,
)
from .fgl import FormalGroupLaw, build_fgl
from .lattice import (
    hermite_row_basis,
    integer_kernel,
    invariant_factors,
    smith_normal_form,
    vec_mat,
)
from .scalars import MORAVA, MULTIPLICATIVE, GradedScalar, Theory
from .series import TruncatedSeries, monomial_key


@dataclass(frozen=True)
class GKMEdge:
    tail: int
    head: int
    weight: tuple[int, ...]


@dataclass
class GKMGraph:
    """Fixed points and invariant two-spheres of a torus action."""

    rank: int
    vertices: list[str]
    edges: list[GKMEdge]

    def incident(self, i: int) -> list[GKMEdge]:
        return [e for e in self.edges if i in (e.tail, e.head)]

    def outgoing_weights(self, i: int) -> list[tuple[int, ...]]:
        """Weights of edges at vertex i, oriented away from it."""
        out = []
        for e in self.edges:
            if e.tail == i:
                out.append(e.weight)
            if e.head == i:
                out.append(tuple(-a for a in e.weight))
        return out

    def valence(self, i: int) -> int:
        return len(self.incident(i))

    def relabel(self, perm: list[int]) -> "GKMGraph":
        """New graph with vertex i renamed to position perm[i]."""
        names = [None] * len(self.vertices)
        for i, name in enumerate(self.vertices):
            names[perm[i]] = name
        edges = [GKMEdge(perm[e.tail], perm[e.head], e.weight) for e in self.edges]
        return GKMGraph(self.rank, names, edges)

    def change_coordinates(self, w) -> "GKMGraph":
        """Transform all edge weights by the unimodular matrix w (a -> a @ w)."""
        edges = [GKMEdge(e.tail, e.head, vec_mat(e.weight, w)) for e in self.edges]
        return GKMGraph(self.rank, list(self.vertices), edges)


def _proportional(a, b) -> bool:
    n = len(a)
    return all(a[i] * b[j] == a[j] * b[i] for i in range(n) for j in range(i + 1, n))


def validate_graph(graph: GKMGraph) -> list[str]:
    """Check the GKM conditions; an empty list means the graph is valid."""
    violations = []
    m = graph.rank
    k = len(graph.vertices)
    if k == 0:
        violations.append("graph has no vertices")
        return violations
    if len(set(graph.vertices)) != k:
        violations.append("vertex names are not distinct")
    for idx, e in enumerate(graph.edges):
        if len(e.weight) != m:
            violations.append(f"edge {idx}: weight length {len(e.weight)} != torus rank {m}")
        elif not any(e.weight):
            violations.append(f"edge {idx}: weight is zero")
        if not (0 <= e.tail < k and 0 <= e.head < k):
            violations.append(f"edge {idx}: endpoint out of range")
        elif e.tail == e.head:
            violations.append(f"edge {idx}: loop at vertex {graph.vertices[e.tail]}")
    if violations:
        return violations
    for i in range(k):
        ws = graph.outgoing_weights(i)
        for a in range(len(ws)):
            for b in range(a + 1, len(ws)):
                if _proportional(ws[a], ws[b]):
                    violations.append(
                        f"vertex {graph.vertices[i]}: dependent weights "
                        f"{ws[a]} and {ws[b]}"
                    )
    # connectivity
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for e in graph.edges:
            if v in (e.tail, e.head):
                other = e.head if v == e.tail else e.tail
                if other not in seen:
                    seen.add(other)
                    frontier.append(other)
    if len(seen) != k:
        violations.append("graph is not connected")
    valences = {graph.valence(i) for i in range(k)}
    if len(valences) > 1:
        violations.append(f"vertices have unequal valences {sorted(valences)}")
    return violations


def mod_p_weight_warnings(graph: GKMGraph, p: int) -> list[str]:
    """Warn when the GKM independence conditions degenerate mod p.

    These are warnings, not failures: the congruence model stays defined
    either way, but mod-p degenerations are worth surfacing because torsion
    edges behave differently at different heights.
    """
    warnings = []
    for i in range(len(graph.vertices)):
        ws = graph.outgoing_weights(i)
        for a in range(len(ws)):
            if all(x % p == 0 for x in ws[a]):
                warnings.append(
                    f"vertex {graph.vertices[i]}: weight {ws[a]} vanishes mod {p}"
                )
        for a in range(len(ws)):
            for b in range(a + 1, len(ws)):
                n = len(ws[a])
                if all(
                    (ws[a][i1] * ws[b][j1] - ws[a][j1] * ws[b][i1]) % p == 0
                    for i1 in range(n)
                    for j1 in range(i1 + 1, n)
                ):
                    warnings.append(
                        f"vertex {graph.vertices[i]}: weights {ws[a]} and {ws[b]} "
                        f"dependent mod {p}"
                    )
    return list(dict.fromkeys(warnings))


@dataclass
class EquivariantClass:
    """A tuple of fixed-point restrictions, one series per vertex."""

    restrictions: tuple[TruncatedSeries, ...]
    degree: int | None = None

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.restrictions)

    def __add__(self, other: "EquivariantClass") -> "EquivariantClass":
        parts = tuple(a + b for a, b in zip(self.restrictions, other.restrictions))
        deg = self.degree if self.degree == other.degree else None
        return EquivariantClass(parts, deg)

    def scale(self, scalar: GradedScalar) -> "EquivariantClass":
        deg = None
        if self.degree is not None and scalar.degree is not None:
            deg = self.degree + scalar.degree
        return EquivariantClass(tuple(f.scale(scalar) for f in self.restrictions), deg)

    def __mul__(self, other: "EquivariantClass") -> "EquivariantClass":
        parts = tuple(a * b for a, b in zip(self.restrictions, other.restrictions))
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = self.degree + other.degree
        return EquivariantClass(parts, deg)

    def computed_degree(self) -> int | None:
        degs = {f.homogeneous_degree() for f in self.restrictions if not f.is_zero()}
        if len(degs) == 1:
            return degs.pop()
        if not degs:
            return 0
        return None


def satisfies_congruences(graph: GKMGraph, fgl: FormalGroupLaw, cls: EquivariantClass) -> bool:
    if len(cls.restrictions) != len(graph.vertices):
        raise ValueError("class has the wrong number of fixed-point restrictions")
    for f in cls.restrictions:
        if f.nvars != graph.rank:
            raise ValueError("restriction has the wrong number of variables")
    for e in graph.edges:
        ideal = kernel_ideal(fgl, e.weight)
        diff = cls.restrictions[e.tail] - cls.restrictions[e.head]
        if not ideal_residue(diff, ideal).is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# linear algebra over the graded fields


def _field_kernel(rows, ncols, p):
    """Canonical kernel basis of the row system; p=None means rationals."""
    mat = [list(r) for r in rows]
    if p:
        mat = [[x % p for x in r] for r in mat]
    else:
        mat = [[Fraction(x) for x in r] for r in mat]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = pow(mat[r][c], -1, p) if p else 1 / mat[r][c]
        mat[r] = [(x * inv) % p if p else x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                if p:
                    mat[i] = [(x - f * y) % p for x, y in zip(mat[i], mat[r])]
                else:
                    mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols if not p else [0] * ncols
        vec[free] = 1 if p else Fraction(1)
        for prow, pcol in enumerate(pivots):
            x = mat[prow][free]
            if x != 0:
                vec[pcol] = (-x) % p if p else -x
        basis.append(tuple(vec))
    return basis, len(pivots)


# ---------------------------------------------------------------------------
# the solver


@dataclass
class SolutionModule:
    theory: Theory
    graph: GKMGraph
    q_max: int
    ranks: dict[int, int]
    bases: dict[int, list[EquivariantClass]]
    divisors: dict[int, list[int]]
    provenance: dict[int, tuple[int, int]]  # (columns, constraint rows)
    primitive_variant_ranks: dict[int, int] | None = None


class _EdgeData:
    def __init__(self, edge: GKMEdge, ideal: RestrictionIdeal):
        self.edge = edge
        self.ideal = ideal
        self.residue_cache: dict[tuple, dict] = {}
        self.transport_cache: dict[tuple, TruncatedSeries] = {}

    def residue_image(self, alpha) -> dict:
        """Coefficients (by adapted monomial) of the residue of u^alpha."""
        img = self.residue_cache.get(alpha)
        if img is None:
            th = self.ideal.fgl.theory
            mono = TruncatedSeries(th, self.ideal.nvars, {alpha: th.one})
            res = ideal_residue(mono, self.ideal)
            img = {beta: c.coeff for beta, c in res.coeffs.items()}
            self.residue_cache[alpha] = img
        return img

    def transported(self, alpha) -> TruncatedSeries:
        t = self.transport_cache.get(alpha)
        if t is None:
            th = self.ideal.fgl.theory
            mono = TruncatedSeries(th, self.ideal.nvars, {alpha: th.one})
            t = transport(self.ideal.fgl, mono, self.ideal.basis_change)
            self.transport_cache[alpha] = t
        return t


def required_truncation(graph: GKMGraph, theory: Theory, q_max: int) -> int:
    """Degree headroom the residue computations need for degrees up to q_max."""
    fgl = build_fgl(theory)
    max_order = 1
    for e in graph.edges:
        ideal = kernel_ideal(fgl, e.weight)
        if ideal.order is not None:
            max_order = max(max_order, ideal.order)
    return q_max // 2 + max_order


def solve_equivariant_cohomology(
    graph: GKMGraph,
    theory: Theory,
    q_max: int,
    compare_primitive: bool = True,
) -> SolutionModule:
    violations = validate_graph(graph)
    if violations:
        raise ValueError("invalid GKM graph: " + "; ".join(violations))
    if q_max < 0 or q_max % 2:
        raise ValueError("q_max must be an even nonnegative integer")
    need = required_truncation(graph, theory, q_max)
    if need > theory.trunc:
        raise ValueError(
            f"truncation degree {theory.trunc} too small for q_max {q_max}: "
            f"residues need headroom {need}"
        )
    fgl = build_fgl(theory)
    data = [_EdgeData(e, kernel_ideal(fgl, e.weight)) for e in graph.edges]
    m = graph.rank
    k = len(graph.vertices)

    ranks: dict[int, int] = {}
    bases: dict[int, list[EquivariantClass]] = {}
    divisors: dict[int, list[int]] = {}
    provenance: dict[int, tuple[int, int]] = {}

    # for periodic theories the constraint system only depends on q through
    # the residue class of q/2 mod the periodicity step, so cache kernels
    period_step = None
    if theory.kind == MORAVA:
        period_step = theory.p ** theory.n - 1
    elif theory.kind == MULTIPLICATIVE:
        period_step = 1
    kernel_cache: dict[int, tuple] = {}

    for q in range(0, q_max + 1, 2):
        monos = _slice_monomials(theory, m, q)
        ncols = k * len(monos)
        if ncols == 0:
            ranks[q] = 0
            bases[q] = []
            divisors[q] = []
            provenance[q] = (0, 0)
            continue
        cache_key = (q // 2) % period_step if period_step else None
        cached = kernel_cache.get(cache_key) if period_step else None
        if cached is None:
            if theory.is_graded_field:
                vecs, nrows, divs = _solve_field(theory, graph, data, monos, k)
            else:
                vecs, nrows, divs = _solve_integer(theory, graph, data, monos, k, q)
            if period_step:
                kernel_cache[cache_key] = (vecs, nrows, divs)
        else:
            vecs, nrows, divs = cached
        ranks[q] = len(vecs)
        divisors[q] = divs
        provenance[q] = (ncols, nrows)
        bases[q] = [_class_from_vector(theory, graph, monos, vec, q) for vec in vecs]

    solution = SolutionModule(theory, graph, q_max, ranks, bases, divisors, provenance)

    if compare_primitive and any(d.ideal.d > 1 for d in data):
        primitive = GKMGraph(
            graph.rank,
            list(graph.vertices),
            [GKMEdge(e.tail, e.head, kernel_ideal(fgl, e.weight).theta) for e in graph.edges],
        )
        variant = solve_equivariant_cohomology(
            primitive, theory, q_max, compare_primitive=False
        )
        solution.primitive_variant_ranks = variant.ranks
    return solution


def _solve_field(theory, graph, data, monos, k):
    nm = len(monos)
    ncols = k * nm
    p = theory.char or None
    rows = {}
    for e_idx, ed in enumerate(data):
        for j, (alpha, _vexp) in enumerate(monos):
            img = ed.residue_image(alpha)
            for beta, coeff in img.items():
                row = rows.get((e_idx, beta))
                if row is None:
                    row = [0] * ncols
                    rows[(e_idx, beta)] = row
                row[ed.edge.tail * nm + j] += coeff
                row[ed.edge.head * nm + j] -= coeff
    ordered = [rows[key] for key in sorted(rows, key=lambda t: (t[0], monomial_key(t[1])))]
    vecs, _rank = _field_kernel(ordered, ncols, p)
    return vecs, len(ordered), []


def _solve_integer(theory, graph, data, monos, k, q):
    nm = len(monos)
    ncols = k * nm
    exact_rows = []
    mod_rows = []
    moduli = []
    for ed in data:
        ideal = ed.ideal
        if ideal.generator.is_zero() or ideal.leading_unit:
            # residue is linear with integer outputs: exact rows
            rowmap = {}
            for j, (alpha, _v) in enumerate(monos):
                img = ed.residue_image(alpha)
                for beta, coeff in img.items():
                    row = rowmap.get(beta)
                    if row is None:
                        row = [0] * ncols
                        rowmap[beta] = row
                    row[ed.edge.tail * nm + j] += coeff
                    row[ed.edge.head * nm + j] -= coeff
            for beta in sorted(rowmap, key=monomial_key):
                exact_rows.append(rowmap[beta])
        else:
            # membership in the ideal is a lattice condition: present the
            # quotient by the truncated multiples of the generator
            ad_monos, basis = ideal_multiples_basis(ideal, q)
            ad_index = {alpha: i for i, (alpha, _v) in enumerate(ad_monos)}
            nad = len(ad_monos)
            tmat = [[0] * nm for _ in range(nad)]
            for j, (alpha, _v) in enumerate(monos):
                t = ed.transported(alpha)
                for beta, c in t.coeffs.items():
                    tmat[ad_index[beta]][j] += c.coeff
            gen_matrix = [list(b) for b in basis] if basis else [[0] * nad]
            _u, s, v = smith_normal_form(gen_matrix)
            grows = len(gen_matrix)
            for i in range(nad):
                si = s[i][i] if i < min(grows, nad) else 0
                if si == 1:
                    continue
                # constraint (x . V_col_i) == 0 mod si (si == 0: exact)
                adapted_row = [v[b][i] for b in range(nad)]
                full = [0] * ncols
                for jj in range(nm):
                    coeff = sum(adapted_row[b] * tmat[b][jj] for b in range(nad))
                    if coeff:
                        full[ed.edge.tail * nm + jj] += coeff
                        full[ed.edge.head * nm + jj] -= coeff
                if not any(full):
                    continue
                if si == 0:
                    exact_rows.append(full)
                else:
                    mod_rows.append(full)
                    moduli.append(si)
    t = len(mod_rows)
    aug = [r + [0] * t for r in exact_rows]
    for idx, (r, d) in enumerate(zip(mod_rows, moduli)):
        aug.append(r + [d if j == idx else 0 for j in range(t)])
    if aug:
        kern = integer_kernel(aug, ncols + t)
        xs = [v[:ncols] for v in kern]
    else:
        xs = [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    basis_rows = hermite_row_basis(xs)
    divs = invariant_factors([list(r) for r in basis_rows]) if basis_rows else []
    return [tuple(r) for r in basis_rows], len(aug), divs


def _class_from_vector(theory, graph, monos, vec, q) -> EquivariantClass:
    nm = len(monos)
    k = len(graph.vertices)
    parts = []
    for i in range(k):
        terms = {}
        for j, (alpha, vexp) in enumerate(monos):
            c = vec[i * nm + j]
            if c:
                terms[alpha] = GradedScalar(theory, c, vexp)
        s = TruncatedSeries(theory, graph.rank)
        s.coeffs = {a: c for a, c in terms.items() if not c.is_zero()}
        parts.append(s)
    return EquivariantClass(tuple(parts), q)


# ---------------------------------------------------------------------------
# equivariant formality as a rank oracle


def truncated_slice_count(theory: Theory, nvars: int, q: int, dmax: int) -> int:
    """Dimension over the degree-0 field of the degree-q slice of the series
    ring truncated at variable degree dmax."""
    if q % 2 or dmax < 0:
        return 0
    per = theory.period_degree
    count = 0
    for b in range(dmax + 1):
        t = 2 * b - q
        if (per == 0 and t == 0) or (per != 0 and t % per == 0):
            count += math.comb(b + nvars - 1, nvars - 1)
    return count


def formality_prediction(theory: Theory, nvars: int, betti, q: int) -> int:
    """Rank in degree q of the free module with betti(a) generators in degree a.

    A degree-a generator restricts to polynomials of variable degree a/2, so
    inside the truncated model its multiples sweep monomials of degree at most
    D - a/2; over the degree-0 coefficient fields this reduces to the plain
    count of monomials of degree (q - a)/2.
    """
    total = 0
    for a, r in betti:
        if a % 2 or a < 0:
            raise ValueError("betti degrees must be even and nonnegative")
        total += r * truncated_slice_count(theory, nvars, q - a, theory.trunc - a // 2)
    return total


@dataclass
class FormalityReport:
    rows: list[tuple[int, int, int, bool]]  # (q, solver rank, predicted, ok)
    passed: bool

    def first_failure(self) -> int | None:
        for q, _, _, ok in self.rows:
            if not ok:
                return q
        return None


def check_formality(graph: GKMGraph, betti, solution: SolutionModule) -> FormalityReport:
    betti = sorted((int(a), int(r)) for a, r in betti)
    rows = []
    for q in sorted(solution.ranks):
        predicted = formality_prediction(solution.theory, graph.rank, betti, q)
        rank = solution.ranks[q]
        rows.append((q, rank, predicted, rank == predicted))
    return FormalityReport(rows, all(ok for *_rest, ok in rows))
