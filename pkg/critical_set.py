"""
Critical subsets of uncertain polynomial matrix families

A critical family fixes a permutation (l_1, ..., l_n): row s carries one
edge-valued entry in column l_s, parametrized by its own lambda_s in [0, 1],
and every other cell sits at a vertex of its entry.

    epsilon_A    polytopic entries: edges from E_ij, vertices from K_ij
    epsilon_B2   interval entries: Kharitonov edges and vertices

Enumeration is row-indexed and lazy; counts grow as n! C(m,2)^n m^(n(n-1)).
"""

import itertools
import logging
import math
from dataclasses import dataclass

import family as fam
import region as reg
from errors import ParameterError
from polynomial import convex_combination
from robust_helpers import require_family_kind

logger = logging.getLogger(__name__)

EDGE = 'edge'
VERTEX = 'vertex'
KHARITONOV_EDGE = 'kharitonov_edge'
KHARITONOV_VERTEX = 'kharitonov_vertex'


@dataclass(frozen=True)
class CriticalFamily:
    """
    One member of a critical subset

    columns[s] is the designated column of row s, edges[s] its (p0, p1) pair,
    fixed[i][j] the vertex polynomial of every other cell (None where
    designated). sources records which generators or Kharitonov polynomials
    each cell came from.
    """

    columns: tuple
    edges: tuple
    fixed: tuple
    sources: tuple

    def __post_init__(self):
        n = len(self.columns)
        if sorted(self.columns) != list(range(n)):
            raise ParameterError(f"Designated columns {self.columns} are not a permutation")
        if len(self.edges) != n or len(self.fixed) != n:
            raise ParameterError("Critical family rows do not match its permutation")
        for i, row in enumerate(self.fixed):
            for j, cell in enumerate(row):
                if (cell is None) != (j == self.columns[i]):
                    raise ParameterError(f"Cell ({i}, {j}) breaks the designated pattern")

    @property
    def n(self):
        return len(self.columns)

    @property
    def active_rows(self):
        """Rows whose designated edge is not a single point"""
        return tuple(s for s, (p0, p1) in enumerate(self.edges) if p0 != p1)

    def instantiate(self, lams):
        """Polynomial grid at edge parameters lams (one per row)"""
        if len(lams) != self.n:
            raise ParameterError(f"Expected {self.n} edge parameters, got {len(lams)}")
        grid = []
        for i, row in enumerate(self.fixed):
            p0, p1 = self.edges[i]
            cells = []
            for j, cell in enumerate(row):
                cells.append(convex_combination(p0, p1, float(lams[i])) if cell is None else cell)
            grid.append(tuple(cells))
        return tuple(grid)

    def describe(self):
        """JSON-ready description"""
        return {
            'columns': list(self.columns),
            'edges': [
                {
                    'row': s,
                    'col': self.columns[s],
                    'p0': list(p0.coeffs),
                    'p1': list(p1.coeffs),
                    'source': list(self.sources[s][self.columns[s]]),
                }
                for s, (p0, p1) in enumerate(self.edges)
            ],
            'fixed': [
                [None if cell is None else list(cell.coeffs) for cell in row]
                for row in self.fixed
            ],
        }


def _assemble(n, perm, edge_pick, free_cells, vertex_pick):
    """Build one CriticalFamily from (source, polynomials) picks"""
    fixed = [[None] * n for _ in range(n)]
    sources = [[None] * n for _ in range(n)]
    edges = []
    for s in range(n):
        source, pair = edge_pick[s]
        edges.append(pair)
        sources[s][perm[s]] = source
    for (i, j), (source, poly) in zip(free_cells, vertex_pick):
        fixed[i][j] = poly
        sources[i][j] = source
    return CriticalFamily(
        columns=tuple(perm),
        edges=tuple(edges),
        fixed=tuple(tuple(row) for row in fixed),
        sources=tuple(tuple(row) for row in sources),
    )


def _enumerate(n, edge_options, vertex_options):
    """
    Stream permutations x per-row edge choices x vertex assignments

    edge_options[i][j] and vertex_options[i][j] are lists of
    (source, payload) choices for cell (i, j).
    """
    for perm in itertools.permutations(range(n)):
        edge_choices = [edge_options[s][perm[s]] for s in range(n)]
        if any(not choices for choices in edge_choices):
            continue
        free_cells = [(i, j) for i in range(n) for j in range(n) if j != perm[i]]
        vertex_choices = [vertex_options[i][j] for i, j in free_cells]
        for edge_pick in itertools.product(*edge_choices):
            for vertex_pick in itertools.product(*vertex_choices):
                yield _assemble(n, perm, edge_pick, free_cells, vertex_pick)


def _polytopic_options(entry, point_edges=False):
    distinct = fam.distinct_generators(entry)
    vertices = [((VERTEX, k), g) for k, g in distinct]
    edges = [
        ((EDGE, a, b), (ga, gb))
        for (a, ga), (b, gb) in itertools.combinations(distinct, 2)
    ]
    if point_edges and len(distinct) == 1:
        (k, g), = distinct
        edges = [((EDGE, k, k), (g, g))]
    return edges, vertices


def _kharitonov_options(entry):
    vertices = [((KHARITONOV_VERTEX, k), f) for k, f in enumerate(fam.kharitonov_vertices(entry))]
    edges = [((KHARITONOV_EDGE, k), pair) for k, pair in enumerate(fam.kharitonov_edges(entry))]
    return edges, vertices


def _options(f, builder):
    edge_options = []
    vertex_options = []
    for row in f.entries:
        built = [builder(cell) for cell in row]
        edge_options.append([e for e, _ in built])
        vertex_options.append([v for _, v in built])
    return edge_options, vertex_options


@require_family_kind(fam.POLYTOPIC)
def enumerate_epsilon_A(f, point_edges=False):
    """
    Stream the critical subset of a polytopic family

    With point_edges, an entry with a single distinct generator g offers the
    degenerate edge (g, g), so rows of fixed entries still take part in every
    permutation.
    """
    edge_options, vertex_options = _options(f, lambda e: _polytopic_options(e, point_edges))
    return _enumerate(f.n, edge_options, vertex_options)


@require_family_kind(fam.INTERVAL)
def enumerate_epsilon_B2(f):
    """Stream the critical subset of an interval family (Kharitonov edges and vertices)"""
    edge_options, vertex_options = _options(f, _kharitonov_options)
    return _enumerate(f.n, edge_options, vertex_options)


@require_family_kind(fam.POLYTOPIC)
def enumerate_two_generator(f):
    """
    Critical subset of a two-generator family in the form p0 + lambda p1

    Every entry is {p0, p0 + p1}: the designated entry of row s takes
    lambda_s in [0, 1], every other entry lambda in {0, 1}. Point edges
    (p1 = 0) are kept, so on families with distinct generators the stream
    equals enumerate_epsilon_A element by element.
    """
    for i, j, cell in f.cells():
        if cell.m != 2:
            raise ParameterError(f"Entry ({i}, {j}) has {cell.m} generators; the two-generator form needs exactly 2")

    def options(entry):
        base, top = entry.generators
        # lambda = 0 gives p0, lambda = 1 gives p0 + p1
        return [((EDGE, 0, 1), (base, top))], [((VERTEX, 0), base), ((VERTEX, 1), top)]

    edge_options, vertex_options = _options(f, options)
    return _enumerate(f.n, edge_options, vertex_options)


def count_critical(f, point_edges=False):
    """Closed-form size of the critical subset the enumerators stream for f"""
    n = f.n
    if f.kind == fam.INTERVAL:
        return math.factorial(n) * 4 ** n * 4 ** (n * (n - 1))
    if f.kind == fam.MIXED:
        f = fam.as_polytopic(f)

    m = [[len(fam.vertex_set(cell)) for cell in row] for row in f.entries]
    total = 0
    for perm in itertools.permutations(range(n)):
        term = 1
        for i in range(n):
            for j in range(n):
                term *= _edge_count(m[i][j], point_edges) if j == perm[i] else m[i][j]
        total += term
    return total


def _edge_count(m, point_edges):
    if point_edges and m == 1:
        return 1
    return math.comb(m, 2)


def select_critical(f, r=None, point_edges=False):
    """
    (path name, family enumerated, critical stream, count) for f on region r

    Kharitonov sets apply to interval families on the Hurwitz half-plane
    (r None means Hurwitz); everything else goes through the corner polytope.
    """
    if f.kind == fam.INTERVAL and (r is None or r.kind == reg.HURWITZ):
        return 'interval-kharitonov', f, enumerate_epsilon_B2(f), count_critical(f)
    pf = fam.as_polytopic(f)
    return (
        'polytopic', pf,
        enumerate_epsilon_A(pf, point_edges=point_edges),
        count_critical(pf, point_edges=point_edges),
    )


def enumerate_critical(f, r=None, point_edges=False):
    """The applicable enumerator: Kharitonov sets for interval families, epsilon_A otherwise"""
    return select_critical(f, r, point_edges=point_edges)[2]
