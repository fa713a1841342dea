"""Independent brute-force oracles for the test suite.

Everything here recomputes answers from first principles: plain BFS/DFS
on adjacency lists, power-set filters, and generic Gaussian elimination
over exact coefficients.  None of it shares code paths with the package
logic under test.
"""

from fractions import Fraction


# -- raw path machinery --------------------------------------------------------


def out_map(graph):
    out = {v: [] for v in graph.vertices}
    for e in graph.edges:
        out[e.src].append(e)
    return out


def brute_distances(graph, u):
    """BFS distance map from u along edge direction."""
    out = out_map(graph)
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for x in frontier:
            for e in out[x]:
                if e.dst not in dist:
                    dist[e.dst] = dist[x] + 1
                    nxt.append(e.dst)
        frontier = nxt
    return dist


def brute_ball(graph, u, m):
    return {v for v, d in brute_distances(graph, u).items() if d <= m}


def all_paths(graph, u, w):
    """Every edge path u -> w as a tuple of edge ids, DFS enumeration.
    Only safe on acyclic graphs."""
    out = out_map(graph)
    found = []

    def walk(x, acc):
        if x == w and acc:
            found.append(tuple(acc))
        for e in out[x]:
            acc.append(e.id)
            walk(e.dst, acc)
            acc.pop()

    walk(u, [])
    if u == w:
        found.append(())
    return found


def brute_admissible_count(graph, u, w, m):
    """Count u->w paths whose intermediate edge sources stay within
    distance m of u.  Endpoints are unconstrained."""
    ball = brute_ball(graph, u, m)
    by_id = {e.id: e for e in graph.edges}
    total = 0
    for path in all_paths(graph, u, w):
        if all(by_id[eid].src in ball for eid in path[1:]):
            total += 1
    return total


def brute_path_total(graph, u, w):
    return len(all_paths(graph, u, w))


# -- hereditary saturated sets ---------------------------------------------------


def brute_is_hereditary(graph, H):
    H = set(H)
    return all(e.dst in H for e in graph.edges if e.src in H)


def brute_is_saturated(graph, H):
    H = set(H)
    regular = set(graph.census().regular)
    for v in graph.vertices:
        if v in regular and v not in H:
            if all(e.dst in H for e in graph.edges if e.src == v):
                return False
    return True


def brute_hs_subsets(graph):
    """All hereditary saturated vertex sets by power-set filtering."""
    vs = list(graph.vertices)
    out = []
    for mask in range(1 << len(vs)):
        H = frozenset(v for i, v in enumerate(vs) if mask >> i & 1)
        if brute_is_hereditary(graph, H) and brute_is_saturated(graph, H):
            out.append(H)
    return sorted(out, key=lambda H: (len(H), sorted(H)))


# -- basis oracle ---------------------------------------------------------------


def q_dimension(graph):
    """Algebra dimension of an acyclic unmarked graph: sum over non-regular
    vertices of (number of paths into the vertex, the vertex itself
    included) squared."""
    into = {v: [] for v in graph.vertices}
    for e in graph.edges:
        into[e.dst].append(e)
    order = []
    seen = set()

    def visit(v):
        if v in seen:
            return
        seen.add(v)
        for e in into[v]:
            visit(e.src)
        order.append(v)

    for v in graph.vertices:
        visit(v)
    q = {}
    for v in order:
        q[v] = 1 + sum(q[e.src] for e in into[v])
    regular = set(graph.census().regular)
    return sum(q[v] ** 2 for v in graph.vertices if v not in regular)


def brute_basis(graph, cap=None):
    """Normal-form monomials as (gamma, lam, root) triples, recomputed from
    the definition: pairs of paths into a common root, minus the pairs that
    both end with the root's designated incoming edge (the last declared
    out-edge of a regular vertex)."""
    into = {v: [] for v in graph.vertices}
    for e in graph.edges:
        into[e.dst].append(e)
    regular = set(graph.census().regular)
    out = out_map(graph)
    # the excluded tail is the last declared out-edge of a regular SOURCE
    designated_ids = {out[v][-1].id for v in regular}

    paths_to = {v: [()] for v in graph.vertices}
    grown = True
    length = 0
    while grown:
        grown = False
        length += 1
        if cap is not None and length > cap:
            break
        for v in graph.vertices:
            fresh = []
            for e in into[v]:
                for p in paths_to[e.src]:
                    if len(p) == length - 1:
                        fresh.append(p + (e.id,))
            if fresh:
                paths_to[v].extend(fresh)
                grown = True

    basis = []
    for v in graph.vertices:
        for g in paths_to[v]:
            for l in paths_to[v]:
                if cap is not None and len(g) + len(l) > cap:
                    continue
                if g and l and g[-1] == l[-1] and g[-1] in designated_ids:
                    continue
                basis.append((g, l, v))
    return basis


# -- generic exact linear algebra --------------------------------------------------


class BruteSpan:
    """Row reduction over dict-keyed vectors with Fraction or int-mod-p
    arithmetic.  Keys can be anything orderable."""

    def __init__(self, p=0):
        self.p = p
        self.rows = {}  # pivot key -> vector dict

    def _inv(self, a):
        if self.p:
            return pow(a, self.p - 2, self.p)
        return 1 / a

    def reduce(self, vec):
        vec = dict(vec)
        if self.p:
            vec = {k: c % self.p for k, c in vec.items() if c % self.p}
        else:
            vec = {k: Fraction(c) for k, c in vec.items() if c}
        # rows pivot on their smallest key, so eliminating the smallest
        # reducible key only ever introduces larger ones
        while True:
            hits = [k for k in vec if k in self.rows]
            if not hits:
                break
            key = min(hits)
            c = vec[key]
            for k2, c2 in self.rows[key].items():
                val = vec.get(k2, 0) - c * c2
                if self.p:
                    val %= self.p
                if val:
                    vec[k2] = val
                else:
                    vec.pop(k2, None)
        return {k: c for k, c in vec.items() if c}

    def insert(self, vec):
        vec = self.reduce(vec)
        if not vec:
            return False
        key = sorted(vec)[0]
        inv = self._inv(vec[key])
        if self.p:
            row = {k: c * inv % self.p for k, c in vec.items()}
        else:
            row = {k: c * inv for k, c in vec.items()}
        self.rows[key] = row
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    @property
    def dimension(self):
        return len(self.rows)


def element_vec(el):
    """Element -> dict keyed by monomial triple, exact coefficients."""
    return {(m.gamma, m.lam, m.root): c for m, c in el.terms.items()}


def brute_span_elements(elements, p=0):
    span = BruteSpan(p)
    for el in elements:
        span.insert(element_vec(el))
    return span


def brute_derived_dims(algebra, basis_elements, p=0, max_steps=40):
    """Derived series dimensions from scratch: repeatedly span all pairwise
    brackets of the current level's spanning set."""
    dims = []
    current = list(basis_elements)
    span = brute_span_elements(current, p)
    dims.append(span.dimension)
    for _ in range(max_steps):
        if dims[-1] == 0:
            break
        nxt = []
        for i, x in enumerate(current):
            for y in current[i + 1:]:
                b = x.bracket(y)
                if not b.is_zero():
                    nxt.append(b)
        span = brute_span_elements(nxt, p)
        if span.dimension == dims[-1]:
            dims.append(span.dimension)
            break
        dims.append(span.dimension)
        # spanning set for the next level: the reduced rows themselves
        current = nxt
        if not nxt:
            break
    return dims


# -- matrix model of the line graph -------------------------------------------------


def matrix_units_model(n):
    """For the n-point line graph: expected bijection between normal-form
    monomials and matrix units, as a map (gamma, lam, root) -> (i, j) with
    i the source index of gamma and j the source index of lam."""

    def src_index(path, root):
        # path of edges e_k .. e_{m}; its source is u_k; empty path sits at root
        if not path:
            return int(root[1:])
        return int(path[0][1:])

    def unit(mono):
        g, l, root = mono
        return (src_index(g, root), src_index(l, root))

    return unit


def matmul_units(a, b):
    """(i,j)(k,l) = delta_jk (i,l) in matrix-unit land; None for zero."""
    return (a[0], b[1]) if a[1] == b[0] else None
