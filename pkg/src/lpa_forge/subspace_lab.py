"""Exact linear algebra over a finite slice of a path algebra.

A Sandbox enumerates the full normal-form monomial basis of a finite
acyclic graph (graphs with cycles get a length-capped enumeration
instead and every answer that depends on the missing tail says so).
Subspaces are row-echelon spans over that basis with exact field
arithmetic; on top of them sit the Lie-ideal and two-sided-ideal
closures, the commutator subspace, and the derived series.

A sandbox built from a completion can carry an embedding back into the
host algebra: shared generators map to themselves, a capped vertex y
maps to the sum of ee* over its kept out-edges, its shadow picks up the
defect y minus that sum, and shadow edge copies are composed with the
defect.  The product rule is checked on every generator pair at build
time.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, NamedTuple, Optional, Sequence

from .graph_core import CompletionProvenance, FiniteGraph, GraphError
from .algebra_kernel import (
    Algebra,
    AlgebraError,
    Element,
    INTS,
    Monomial,
    _mono_str,
    is_basis_admissible,
    mono_mul,
    normalize_terms,
    render_element,
)
from .structure_classifiers import Verdict


class SandboxError(AlgebraError):
    """A request the sandbox cannot answer exactly."""


# products of basis monomials are memoized only below this dimension;
# larger sandboxes recompute, which keeps memory flat
_PRODUCT_MEMO_LIMIT = 2000

_MISS = object()


def _paths_by_length(graph: FiniteGraph, max_len: Optional[int]):
    """Paths into each vertex grouped by length, declaration order within
    a layer.  max_len=None keeps extending until a layer comes up empty,
    which terminates exactly when the graph is acyclic."""
    layers = {v: [[()]] for v in graph.vertices}
    k = 0
    while max_len is None or k < max_len:
        k += 1
        grew = False
        for v in graph.vertices:
            layer = []
            for e in graph.in_edges(v):
                for q in layers[e.src][k - 1]:
                    layer.append(q + (e.id,))
            layers[v].append(layer)
            if layer:
                grew = True
        if not grew:
            for v in graph.vertices:
                layers[v].pop()
            break
    return layers


class Sandbox:
    """A finite basis slice of one algebra, with a lazy product table.

    The basis is enumerated per vertex in declaration order; at each
    vertex the real path varies slowest.  `complete` is True exactly
    when the basis is the whole algebra, i.e. the graph is acyclic.
    Entries of the product table are plain integer combinations, so a
    table may be shared between sandboxes over the same graph through
    the product_cache argument.  Concurrent readers may race to insert
    the same entry; both compute identical values, so last write wins
    harmlessly.
    """

    def __init__(self, algebra: Algebra, cap: Optional[int] = None,
                 host: Optional[Algebra] = None,
                 provenance: Optional[CompletionProvenance] = None,
                 product_cache: Optional[dict] = None):
        self.algebra = algebra
        self.graph = algebra.graph
        self.field = algebra.field
        acyclic, _ = self.graph.is_acyclic()
        if acyclic:
            self.cap = None        # full enumeration; a cap only binds cycles
            self.complete = True
        else:
            if cap is None:
                raise SandboxError(
                    "graph has a cycle, so the basis is infinite; pass cap=")
            if cap < 0:
                raise SandboxError("cap must be >= 0")
            self.cap = cap
            self.complete = False
        self.basis = self._enumerate()
        self.index = {m: i for i, m in enumerate(self.basis)}
        for m in self.basis:
            algebra.interner.intern(m)
        self._left = tuple(
            self.graph.edge(m.gamma[0]).src if m.gamma else m.root
            for m in self.basis)
        self._right = tuple(
            self.graph.edge(m.lam[0]).src if m.lam else m.root
            for m in self.basis)
        self._memo = len(self.basis) <= _PRODUCT_MEMO_LIMIT
        if product_cache is not None:
            stamp = product_cache.setdefault("__dim__", len(self.basis))
            if stamp != len(self.basis):
                raise SandboxError("shared product cache built for a different basis")
            self._prod = product_cache
        else:
            self._prod = {}
        self._gens = None
        self._commutative = None
        self.host = None
        self.provenance = None
        self.embedding_images = None
        if (host is None) != (provenance is None):
            raise SandboxError("host and provenance must be given together")
        if host is not None:
            self._build_embedding(host, provenance)

    # -- basis plumbing --

    def _enumerate(self) -> tuple[Monomial, ...]:
        graph = self.graph
        layers = _paths_by_length(graph, self.cap)
        out = []
        for v in graph.vertices:
            per = layers[v]
            top = len(per) - 1
            for a, gammas in enumerate(per):
                bmax = top if self.cap is None else min(top, self.cap - a)
                for gamma in gammas:
                    for b in range(bmax + 1):
                        for lam in per[b]:
                            m = Monomial(gamma, lam, v)
                            if is_basis_admissible(graph, m):
                                out.append(m)
        return tuple(out)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def monomial(self, i: int) -> Monomial:
        return self.basis[i]

    def position(self, m: Monomial) -> int:
        try:
            return self.index[m]
        except KeyError:
            raise SandboxError(f"monomial {_mono_str(m)} is outside the sandbox basis") from None

    def basis_element(self, i: int) -> Element:
        return self.algebra._from_normal({self.basis[i]: self.field.one})

    def element_of(self, vec: dict) -> Element:
        f = self.field
        return self.algebra._from_normal(
            {self.basis[i]: c for i, c in vec.items() if c != f.zero})

    def vector_of_terms(self, terms: dict) -> Optional[dict]:
        """Coordinates of a normal-form term dict, or None when any
        monomial falls outside the enumerated basis."""
        out = {}
        index = self.index
        for m, c in terms.items():
            i = index.get(m)
            if i is None:
                return None
            out[i] = c
        return out

    def try_vector(self, el: Element) -> Optional[dict]:
        return self.vector_of_terms(el.terms)

    def vector(self, el: Element) -> dict:
        vec = self.vector_of_terms(el.terms)
        if vec is None:
            raise SandboxError("element lies outside the sandbox basis; raise the cap")
        return vec

    def terms_of_vector(self, vec: dict) -> list:
        return [(self.basis[i], vec[i]) for i in sorted(vec)]

    # -- products --

    def basis_product(self, i: int, j: int):
        """Product of basis monomials as ((position, int coefficient), ...);
        None marks a product that escapes a capped basis."""
        key = (i, j)
        hit = self._prod.get(key, _MISS)
        if hit is not _MISS:
            return hit
        m = mono_mul(self.graph, self.basis[i], self.basis[j])
        if m is None:
            out = ()
        else:
            nt = normalize_terms(self.graph, INTS, [(1, m.gamma, m.lam, m.root)])
            acc = []
            index = self.index
            for mm, z in nt.items():
                k = index.get(mm)
                if k is None:
                    acc = None
                    break
                acc.append((k, z))
            out = tuple(sorted(acc)) if acc is not None else None
        if self._memo:
            self._prod[key] = out
        return out

    def generators(self) -> tuple:
        """(label, element) for every vertex, edge, and ghost edge."""
        if self._gens is None:
            alg = self.algebra
            gens = [(v, alg.vertex(v)) for v in self.graph.vertices]
            gens += [(e.id, alg.edge(e.id)) for e in self.graph.edges]
            gens += [(e.id + "*", alg.ghost(e.id)) for e in self.graph.edges]
            self._gens = tuple(gens)
        return self._gens

    def is_commutative(self) -> bool:
        # generators generate, so pairwise commuting generators settle it
        if self._commutative is None:
            gens = [el for _, el in self.generators()]
            self._commutative = all(
                a * b == b * a
                for ai, a in enumerate(gens) for b in gens[ai + 1:])
        return self._commutative

    def bracket_terms(self, row: Sequence, mono: Monomial) -> Optional[dict]:
        """Normal form of [sum(row), mono] from (monomial, coef) pairs.
        Returns None when the bracket vanishes."""
        graph, f = self.graph, self.field
        raw = []
        for m, c in row:
            p = mono_mul(graph, m, mono)
            if p is not None:
                raw.append((c, p.gamma, p.lam, p.root))
            q = mono_mul(graph, mono, m)
            if q is not None:
                raw.append((f.neg(c), q.gamma, q.lam, q.root))
        if not raw:
            return None
        return normalize_terms(graph, f, raw) or None

    # -- completion embedding --

    def _build_embedding(self, host: Algebra, prov: CompletionProvenance):
        if host.field != self.field:
            raise SandboxError("host algebra is over a different field")
        graph = self.graph
        shadow_ids = set(prov.cap_vertices.values())
        primed_ids = set(prov.cap_edges.values())
        prime_orig = {ep: e for e, ep in prov.cap_edges.items()}
        images: dict[str, Element] = {}
        yset = set(prov.Y)
        for v in graph.vertices:
            if v in shadow_ids:
                continue
            if v in yset:
                acc = None
                for e in graph.out_edges(v):
                    if e.id in primed_ids:
                        continue
                    hop = host.edge(e.id) * host.ghost(e.id)
                    acc = hop if acc is None else acc + hop
                images[v] = acc
            else:
                images[v] = host.vertex(v)
        for y, yp in prov.cap_vertices.items():
            images[yp] = host.vertex(y) - images[y]
        for e in graph.edges:
            base = prime_orig.get(e.id, e.id)
            if e.dst in yset or e.id in primed_ids:
                # the range idempotent splits the host edge between the
                # capped vertex and its shadow
                images[e.id] = host.edge(base) * images[e.dst]
            else:
                images[e.id] = host.edge(base)
        self.host = host
        self.provenance = prov
        self.embedding_images = images
        self._verify_embedding()

    def embed(self, el: Element) -> Element:
        """Image of a sandbox element in the host algebra."""
        if self.embedding_images is None:
            raise SandboxError("sandbox carries no host embedding")
        img = self.embedding_images
        out = self.host.zero()
        for m, c in el.terms.items():
            acc = None
            for e in m.gamma:
                acc = img[e] if acc is None else acc * img[e]
            for e in reversed(m.lam):
                g = img[e].star()
                acc = g if acc is None else acc * g
            if acc is None:
                acc = img[m.root]
            out = out + acc.scale(c)
        return out

    def _verify_embedding(self):
        gens = self.generators()
        imgs = [self.embed(el) for _, el in gens]
        for i, (la, a) in enumerate(gens):
            for j, (lb, b) in enumerate(gens):
                if self.embed(a * b) != imgs[i] * imgs[j]:
                    raise SandboxError(
                        f"embedding breaks on the product {la} . {lb}")


class Subspace:
    """Row space over a sandbox basis, kept in echelon form.

    The pivot of each row is its lowest basis position.  Over
    characteristic 2 rows are stored as integer bitmasks; other fields
    use sparse coefficient dicts with the pivot scaled to 1.  Rows stay
    in forward-echelon form until a report is asked for; to_json reduces
    fully, so equal spaces always serialize identically.
    """

    def __init__(self, sandbox: Sandbox):
        self.sandbox = sandbox
        self.field = sandbox.field
        self._binary = sandbox.field.char == 2
        self._rows: dict = {}
        self._reduced = True

    @property
    def dimension(self) -> int:
        return len(self._rows)

    @property
    def is_full(self) -> bool:
        return len(self._rows) == self.sandbox.dimension

    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self._rows))

    # -- internal reduction --

    def _mask_of(self, vec: dict) -> int:
        mask = 0
        for k, c in vec.items():
            if c:
                mask |= 1 << k
        return mask

    def _insert_mask(self, mask: int) -> bool:
        rows = self._rows
        while mask:
            p = (mask & -mask).bit_length() - 1
            row = rows.get(p)
            if row is None:
                rows[p] = mask
                self._reduced = False
                return True
            mask ^= row
        return False

    def _insert_dict(self, vec: dict) -> bool:
        f = self.field
        rows = self._rows
        vec = {k: c for k, c in vec.items() if c != f.zero}
        while vec:
            p = min(vec)
            row = rows.get(p)
            if row is None:
                inv = f.inv(vec[p])
                rows[p] = {k: f.mul(c, inv) for k, c in vec.items()}
                self._reduced = False
                return True
            c = vec[p]
            nxt = dict(vec)
            for k, rc in row.items():
                t = f.sub(nxt.get(k, f.zero), f.mul(c, rc))
                if t == f.zero:
                    nxt.pop(k, None)
                else:
                    nxt[k] = t
            vec = nxt
        return False

    def insert(self, vec: dict) -> bool:
        """Add a coordinate vector; True when the dimension grew."""
        if self._binary:
            return self._insert_mask(self._mask_of(vec))
        return self._insert_dict(vec)

    def insert_element(self, el: Element) -> bool:
        return self.insert(self.sandbox.vector(el))

    def _residual_mask(self, mask: int) -> int:
        rows = self._rows
        while mask:
            p = (mask & -mask).bit_length() - 1
            row = rows.get(p)
            if row is None:
                break
            mask ^= row
        return mask

    def _residual_dict(self, vec: dict) -> dict:
        f = self.field
        rows = self._rows
        vec = {k: c for k, c in vec.items() if c != f.zero}
        while vec:
            p = min(vec)
            row = rows.get(p)
            if row is None:
                break
            c = vec[p]
            nxt = dict(vec)
            for k, rc in row.items():
                t = f.sub(nxt.get(k, f.zero), f.mul(c, rc))
                if t == f.zero:
                    nxt.pop(k, None)
                else:
                    nxt[k] = t
            vec = nxt
        return vec

    def contains_vector(self, vec: dict) -> bool:
        if self._binary:
            return self._residual_mask(self._mask_of(vec)) == 0
        return not self._residual_dict(vec)

    def contains(self, el: Element) -> bool:
        if el.is_zero():
            return True
        vec = self.sandbox.try_vector(el)
        if vec is None:
            return False
        return self.contains_vector(vec)

    # -- reporting --

    def _row_as_dict(self, row) -> dict:
        if not self._binary:
            return row
        one = self.field.one
        out = {}
        while row:
            low = row & -row
            out[low.bit_length() - 1] = one
            row ^= low
        return out

    def row_terms(self) -> list:
        """Rows in pivot order as lists of (monomial, coefficient)."""
        sandbox = self.sandbox
        return [sandbox.terms_of_vector(self._row_as_dict(self._rows[p]))
                for p in sorted(self._rows)]

    def row_elements(self) -> list[Element]:
        sandbox = self.sandbox
        return [sandbox.element_of(self._row_as_dict(self._rows[p]))
                for p in sorted(self._rows)]

    def finalize(self) -> None:
        """Bring the rows into fully reduced echelon form."""
        if self._reduced:
            return
        rows = self._rows
        if self._binary:
            for p in sorted(rows):
                rp = rows[p]
                for q in rows:
                    if q != p and (rows[q] >> p) & 1:
                        rows[q] ^= rp
        else:
            f = self.field
            for p in sorted(rows):
                rp = rows[p]
                for q in list(rows):
                    if q == p:
                        continue
                    rq = rows[q]
                    c = rq.get(p)
                    if c is None:
                        continue
                    nxt = dict(rq)
                    for k, rc in rp.items():
                        t = f.sub(nxt.get(k, f.zero), f.mul(c, rc))
                        if t == f.zero:
                            nxt.pop(k, None)
                        else:
                            nxt[k] = t
                    rows[q] = nxt
        self._reduced = True

    def to_json(self) -> dict:
        self.finalize()
        return {
            "dimension": self.dimension,
            "pivots": list(self.pivots()),
            "basis": [el.to_json() for el in self.row_elements()],
        }


# -- spans and closures ----------------------------------------------------


def span_of(sandbox: Sandbox, elements: Iterable[Element]) -> Subspace:
    U = Subspace(sandbox)
    for el in elements:
        U.insert(sandbox.vector(el))
    return U


def _accumulate(f, acc: dict, k: int, c) -> None:
    t = f.add(acc.get(k, f.zero), c)
    if t == f.zero:
        acc.pop(k, None)
    else:
        acc[k] = t


def _bracket_vec_basis(sandbox: Sandbox, vec: dict, j: int) -> dict:
    """[vec, basis_j] in coordinates via the product table."""
    f = sandbox.field
    acc: dict = {}
    for i, ci in vec.items():
        left = sandbox.basis_product(i, j)
        right = sandbox.basis_product(j, i)
        if left is None or right is None:
            raise SandboxError("bracket leaves the capped basis; raise the cap")
        for k, z in left:
            c = f.mul(ci, f.of(z))
            if c != f.zero:
                _accumulate(f, acc, k, c)
        for k, z in right:
            c = f.mul(ci, f.of(z))
            if c != f.zero:
                _accumulate(f, acc, k, f.neg(c))
    return acc


def lie_closure(generators: Iterable[Element], sandbox: Sandbox) -> Subspace:
    """Smallest subspace containing the generators and closed under
    bracketing with every sandbox basis monomial."""
    U = Subspace(sandbox)
    queue = deque()
    for el in generators:
        vec = sandbox.vector(el)
        if U.insert(vec):
            queue.append(vec)
    dim = sandbox.dimension
    while queue:
        vec = queue.popleft()
        for j in range(dim):
            out = _bracket_vec_basis(sandbox, vec, j)
            if out and U.insert(out):
                queue.append(out)
    return U


def ideal_closure(generators: Iterable[Element], sandbox: Sandbox) -> Subspace:
    """Closure under left and right multiplication by every vertex,
    edge, and ghost edge."""
    U = Subspace(sandbox)
    queue = deque()
    for el in generators:
        vec = sandbox.vector(el)
        if U.insert(vec):
            queue.append(el)
    gens = sandbox.generators()
    while queue:
        x = queue.popleft()
        for _, g in gens:
            for prod in (g * x, x * g):
                if prod.is_zero():
                    continue
                vec = sandbox.vector(prod)
                if U.insert(vec):
                    queue.append(prod)
    return U


def is_ideal(U: Subspace) -> Verdict:
    """Exact two-sided ideal test by generator multiplication.

    Exact even on a capped sandbox: a product that escapes the basis
    cannot lie in U, so it is a genuine witness.
    """
    sandbox = U.sandbox
    rows = U.row_elements()
    for x in rows:
        for label, g in sandbox.generators():
            for side, prod in (("left", g * x), ("right", x * g)):
                if prod.is_zero():
                    continue
                vec = sandbox.try_vector(prod)
                if vec is not None and U.contains_vector(vec):
                    continue
                return Verdict.fails(counterexample={
                    "generator": label,
                    "side": side,
                    "element": render_element(x),
                    "product": render_element(prod),
                })
    return Verdict.holds()


def is_lie_ideal(U: Subspace) -> Verdict:
    """[U, basis] subset test; Unknown when only a capped basis was
    scanned and nothing failed."""
    sandbox = U.sandbox
    if U.dimension == 0 or sandbox.is_commutative():
        return Verdict.holds()
    rows = U.row_terms()
    elements = None
    for r, row in enumerate(rows):
        for b in sandbox.basis:
            out = sandbox.bracket_terms(row, b)
            if out is None:
                continue
            vec = sandbox.vector_of_terms(out)
            if vec is not None and U.contains_vector(vec):
                continue
            if elements is None:
                elements = U.row_elements()
            bracket = sandbox.algebra._from_normal(out)
            return Verdict.fails(counterexample={
                "element": render_element(elements[r]),
                "monomial": _mono_str(b),
                "bracket": render_element(bracket),
            })
    if sandbox.complete:
        return Verdict.holds()
    return Verdict.unknown(bound={"cap": sandbox.cap})


# -- commutator structure ----------------------------------------------------


def _edge_candidates(sandbox: Sandbox, i: int) -> list:
    """Generator edges whose bracket with basis monomial i can be nonzero.

    A vertex bracket scales the monomial, so vertices never appear here;
    an edge interacts only through the head of gamma, the head of lambda,
    or the root, which keeps the candidate list near the vertex degree.
    """
    graph = sandbox.graph
    m = sandbox.basis[i]
    lv, rv = sandbox._left[i], sandbox._right[i]
    edges = [e.id for e in graph.in_edges(lv)]
    if m.lam:
        edges.append(m.lam[0])
    else:
        edges.extend(e.id for e in graph.out_edges(rv))
    ghosts = []
    if m.gamma:
        ghosts.append(m.gamma[0])
    else:
        ghosts.extend(e.id for e in graph.out_edges(lv))
    ghosts.extend(e.id for e in graph.in_edges(rv))
    return [(eid, False) for eid in dict.fromkeys(edges)] + \
           [(eid, True) for eid in dict.fromkeys(ghosts)]


def commutator_subspace(sandbox: Sandbox) -> Subspace:
    """Span of all brackets of basis monomials.

    Any bracket of products reduces to brackets against single
    generators, so scanning basis x generator pairs spans the same
    space as all basis pairs; the all-pairs scan stays available as a
    cross-check.  Monomials whose two source vertices differ are hit by
    a vertex bracket and enter directly.
    """
    if not sandbox.complete:
        raise SandboxError("commutator subspace needs the complete basis")
    graph, f = sandbox.graph, sandbox.field
    U = Subspace(sandbox)
    one = f.one
    left, right = sandbox._left, sandbox._right
    for i in range(sandbox.dimension):
        if left[i] != right[i]:
            U.insert({i: one})
    for i, m in enumerate(sandbox.basis):
        for eid, ghost in _edge_candidates(sandbox, i):
            edge = graph.edge(eid)
            g = (Monomial((), (eid,), edge.dst) if ghost
                 else Monomial((eid,), (), edge.dst))
            out = sandbox.bracket_terms(((m, one),), g)
            if out is None:
                continue
            vec = sandbox.vector_of_terms(out)
            U.insert(vec)
    return U


def commutator_subspace_all_pairs(sandbox: Sandbox) -> Subspace:
    """Reference construction over every basis pair; quadratic, for
    cross-checks on small sandboxes."""
    if not sandbox.complete:
        raise SandboxError("commutator subspace needs the complete basis")
    f = sandbox.field
    U = Subspace(sandbox)
    n = sandbox.dimension
    for i in range(n):
        for j in range(i + 1, n):
            acc: dict = {}
            for k, z in sandbox.basis_product(i, j):
                c = f.of(z)
                if c != f.zero:
                    _accumulate(f, acc, k, c)
            for k, z in sandbox.basis_product(j, i):
                c = f.of(z)
                if c != f.zero:
                    _accumulate(f, acc, k, f.neg(c))
            if acc:
                U.insert(acc)
    return U


def bracket_span(U: Subspace, V: Subspace, stop_dim: Optional[int] = None) -> Subspace:
    """Span of [u, v] over rows of U and V."""
    if U.sandbox is not V.sandbox:
        raise SandboxError("subspaces live in different sandboxes")
    sandbox = U.sandbox
    f = sandbox.field
    rows_u = [sandbox.vector_of_terms(dict(r)) for r in U.row_terms()]
    same = U is V
    rows_v = rows_u if same else [sandbox.vector_of_terms(dict(r)) for r in V.row_terms()]
    W = Subspace(sandbox)
    for a, ra in enumerate(rows_u):
        start = a + 1 if same else 0
        for rb in rows_v[start:]:
            acc: dict = {}
            for i, ci in ra.items():
                for j, cj in rb.items():
                    c = f.mul(ci, cj)
                    left = sandbox.basis_product(i, j)
                    right = sandbox.basis_product(j, i)
                    if left is None or right is None:
                        raise SandboxError("bracket leaves the capped basis")
                    for k, z in left:
                        t = f.mul(c, f.of(z))
                        if t != f.zero:
                            _accumulate(f, acc, k, t)
                    for k, z in right:
                        t = f.mul(c, f.of(z))
                        if t != f.zero:
                            _accumulate(f, acc, k, f.neg(t))
            if acc:
                W.insert(acc)
                if stop_dim is not None and W.dimension == stop_dim:
                    return W
    return W


class DerivedSeriesReport(NamedTuple):
    dims: tuple[int, ...]
    solvable: bool
    steps: int

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "solvable": self.solvable}


def derived_series(L: Subspace, sandbox: Optional[Sandbox] = None) -> DerivedSeriesReport:
    """Dimensions of the successive bracket spans of L until they reach
    zero or stop moving."""
    if sandbox is None:
        sandbox = L.sandbox
    elif sandbox is not L.sandbox:
        raise SandboxError("subspace does not live in the given sandbox")
    if not sandbox.complete:
        raise SandboxError("derived series needs the complete basis")
    if L.dimension < sandbox.dimension:
        probe = bracket_span(L, L)
        for row in probe.row_terms():
            vec = sandbox.vector_of_terms(dict(row))
            if not L.contains_vector(vec):
                raise SandboxError("input subspace is not closed under bracket")
    dims = [L.dimension]
    cur = L
    steps = 0
    while dims[-1] > 0:
        if cur.dimension == sandbox.dimension:
            nxt = commutator_subspace(sandbox)
        else:
            # the span cannot exceed the current level, so stop scanning
            # pairs the moment it catches up
            nxt = bracket_span(cur, cur, stop_dim=cur.dimension)
        steps += 1
        dims.append(nxt.dimension)
        if nxt.dimension == cur.dimension:
            return DerivedSeriesReport(tuple(dims), False, steps)
        cur = nxt
    return DerivedSeriesReport(tuple(dims), True, steps)


def graded_components_in(U: Subspace, x: Element) -> bool:
    """True when every graded component of x lies in U."""
    return all(U.contains(comp) for _, comp in x.decompose())
