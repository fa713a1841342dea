"""Directed multigraphs, finite and lazily infinite.

Finite graphs carry an ordered vertex list and an ordered edge list; every
derived enumeration (out-edge lists, BFS, topological order, path counts)
follows declaration order, so downstream computations are reproducible.

A vertex may be marked as an infinite emitter: it conceptually emits an
unbounded stream of edges of which only a finite prefix is materialized.
Marked vertices are never classified regular, so the completeness relation
is never applied at them.  A stream may name a fixed target vertex, in
which case the unmaterialized tail consists of parallel edges into that
target (this keeps breaking-vertex computations exact); without a target
the tail is understood to leave the materialized region entirely.

Infinite graphs are presented as templates: rank-layered generators whose
truncations are ordinary finite graphs.  Acyclicity of a template is
certified by its rank function, not searched.
"""
from __future__ import annotations

import json
import re
from collections import deque
from typing import Iterable, NamedTuple, Optional, Sequence


class GraphError(ValueError):
    pass


_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Edge(NamedTuple):
    id: str
    src: str
    dst: str


class StreamSpec(NamedTuple):
    prefix: int                    # number of materialized stream edges
    target: Optional[str] = None   # fixed tail target, or None if the tail escapes


class VertexCensus(NamedTuple):
    sinks: tuple[str, ...]
    regular: tuple[str, ...]
    infinite_emitters: tuple[str, ...]
    isolated: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "sinks": list(self.sinks),
            "regular": list(self.regular),
            "infinite_emitters": list(self.infinite_emitters),
            "isolated": list(self.isolated),
        }


def _check_id(kind: str, ident) -> None:
    if not isinstance(ident, str) or not _ID_RE.match(ident):
        raise GraphError(f"{kind} id {ident!r} is not a valid identifier")


class FiniteGraph:
    """Immutable finite directed multigraph with optional emitter marks."""

    def __init__(self, vertices: Sequence[str], edges: Iterable,
                 infinite_emitters=None, name: str = ""):
        self.name = name
        self.vertices: tuple[str, ...] = tuple(vertices)
        edge_list = []
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            edge_list.append(e)
        self.edges: tuple[Edge, ...] = tuple(edge_list)

        vset = set()
        for v in self.vertices:
            _check_id("vertex", v)
            if v in vset:
                raise GraphError(f"duplicate vertex id {v!r}")
            vset.add(v)
        self._vset = vset

        emitters = {}
        for v, spec in dict(infinite_emitters or {}).items():
            if v not in vset:
                raise GraphError(f"infinite emitter {v!r} is not a declared vertex")
            if not isinstance(spec, StreamSpec):
                spec = StreamSpec(*spec) if isinstance(spec, (tuple, list)) else StreamSpec(**spec)
            if spec.prefix < 0:
                raise GraphError(f"negative stream prefix at {v!r}")
            if spec.target is not None and spec.target not in vset:
                raise GraphError(f"stream target {spec.target!r} at {v!r} is not declared")
            emitters[v] = spec
        self.infinite_emitters: dict[str, StreamSpec] = emitters

        out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        by_id: dict[str, Edge] = {}
        for e in self.edges:
            _check_id("edge", e.id)
            if e.id in by_id:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if e.id in vset:
                raise GraphError(f"edge id {e.id!r} collides with a vertex id")
            if e.src not in vset or e.dst not in vset:
                raise GraphError(f"edge {e.id!r} references an undeclared vertex")
            by_id[e.id] = e
            out[e.src].append(e)
            inc[e.dst].append(e)
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inc.items()}
        self._by_id = by_id

        # designated edge of a regular vertex: the last declared out-edge
        self.designated: dict[str, str] = {}
        for v in self.vertices:
            if v not in emitters and self._out[v]:
                self.designated[v] = self._out[v][-1].id

        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._census = None
        self._acyclic = None
        self._topo = None

    # -- basic access --------------------------------------------------

    def has_vertex(self, v: str) -> bool:
        return v in self._vset

    def has_edge(self, eid: str) -> bool:
        return eid in self._by_id

    def edge(self, eid: str) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        try:
            return self._out[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        try:
            return self._in[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def is_infinite_emitter(self, v: str) -> bool:
        return v in self.infinite_emitters

    def is_regular(self, v: str) -> bool:
        return v in self.designated

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def path_range(self, path: Sequence[str], start: str) -> str:
        """End vertex of an edge-id path beginning at start; checks composability."""
        at = start
        for eid in path:
            e = self.edge(eid)
            if e.src != at:
                raise GraphError(f"path breaks at {eid!r}: starts at {e.src}, expected {at}")
            at = e.dst
        return at

    # -- census ----------------------------------------------------------

    def census(self) -> VertexCensus:
        if self._census is None:
            sinks, regular, emitters, isolated = [], [], [], []
            for v in self.vertices:
                if v in self.infinite_emitters:
                    emitters.append(v)
                elif self._out[v]:
                    regular.append(v)
                else:
                    sinks.append(v)
                    if not self._in[v]:
                        isolated.append(v)
            self._census = VertexCensus(tuple(sinks), tuple(regular),
                                        tuple(emitters), tuple(isolated))
        return self._census

    # -- acyclicity and order ---------------------------------------------

    def is_acyclic(self) -> tuple[bool, Optional[tuple[str, ...]]]:
        """(True, None) if acyclic, else (False, cycle) with cycle an edge-id tuple."""
        if self._acyclic is None:
            color = {v: 0 for v in self.vertices}  # 0 new, 1 active, 2 done
            via: dict[str, Edge] = {}
            cycle = None
            for root in self.vertices:
                if color[root] or cycle:
                    continue
                stack = [(root, 0)]
                color[root] = 1
                while stack and cycle is None:
                    v, i = stack[-1]
                    outs = self._out[v]
                    if i == len(outs):
                        color[v] = 2
                        stack.pop()
                        continue
                    stack[-1] = (v, i + 1)
                    e = outs[i]
                    w = e.dst
                    if color[w] == 0:
                        color[w] = 1
                        via[w] = e
                        stack.append((w, 0))
                    elif color[w] == 1:
                        ids = [e.id]
                        at = v
                        while at != w:
                            back = via[at]
                            ids.append(back.id)
                            at = back.src
                        cycle = tuple(reversed(ids))
            self._acyclic = (cycle is None, cycle)
        return self._acyclic

    def topological_order(self) -> tuple[str, ...]:
        if self._topo is None:
            ok, cyc = self.is_acyclic()
            if not ok:
                raise GraphError(f"graph has a cycle: {list(cyc)}")
            indeg = {v: len(self._in[v]) for v in self.vertices}
            ready = deque(v for v in self.vertices if indeg[v] == 0)
            order = []
            while ready:
                v = ready.popleft()
                order.append(v)
                for e in self._out[v]:
                    indeg[e.dst] -= 1
                    if indeg[e.dst] == 0:
                        ready.append(e.dst)
            self._topo = tuple(order)
        return self._topo

    # -- metric ------------------------------------------------------------

    def distance(self, u: str, w: str) -> Optional[int]:
        """Length of a shortest directed path, or None if unreachable."""
        if u not in self._vset or w not in self._vset:
            raise GraphError("distance endpoints must be declared vertices")
        if u == w:
            return 0
        dist = {u: 0}
        q = deque([u])
        while q:
            x = q.popleft()
            for e in self._out[x]:
                if e.dst not in dist:
                    dist[e.dst] = dist[x] + 1
                    if e.dst == w:
                        return dist[e.dst]
                    q.append(e.dst)
        return None

    def ball(self, u: str, m: int) -> list[str]:
        """Vertices at directed distance at most m from u, in BFS order."""
        if u not in self._vset:
            raise GraphError(f"unknown vertex {u!r}")
        dist = {u: 0}
        order = [u]
        q = deque([u])
        while q:
            x = q.popleft()
            if dist[x] == m:
                continue
            for e in self._out[x]:
                if e.dst not in dist:
                    dist[e.dst] = dist[x] + 1
                    order.append(e.dst)
                    q.append(e.dst)
        return order

    def distance_layers(self, u: str, radius: int) -> list[list[str]]:
        """layers[d] = vertices at exact distance d from u, for every d <= radius."""
        dist = {u: 0}
        layers = [[u]]
        frontier = [u]
        for d in range(1, radius + 1):
            nxt = []
            for x in frontier:
                for e in self._out[x]:
                    if e.dst not in dist:
                        dist[e.dst] = d
                        nxt.append(e.dst)
            layers.append(nxt)
            frontier = nxt
        return layers

    # -- structure -----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FiniteGraph)
                and self.vertices == other.vertices
                and self.edges == other.edges
                and self.infinite_emitters == other.infinite_emitters)

    def __hash__(self):
        return hash((self.vertices, self.edges,
                     tuple(sorted(self.infinite_emitters.items()))))

    def __repr__(self):
        tag = self.name or "graph"
        extra = f", {len(self.infinite_emitters)} emitters" if self.infinite_emitters else ""
        return f"<{tag}: {len(self.vertices)} vertices, {len(self.edges)} edges{extra}>"


def vertex_census(graph: FiniteGraph) -> VertexCensus:
    return graph.census()


def count_admissible_paths(graph: FiniteGraph, u: str, w: str, m: int) -> int:
    """Number of paths from u to w whose intermediate edge sources stay in
    the ball of radius m around u.

    A path e_1 ... e_k qualifies when s(e_2), ..., s(e_k) all lie within
    distance m of u; the endpoints themselves are unconstrained.  Exact
    integer dynamic programming over the acyclic graph.
    """
    ok, cyc = graph.is_acyclic()
    if not ok:
        raise GraphError(f"path counting requires an acyclic graph; cycle {list(cyc)}")
    if u == w:
        return 1
    allowed = set(graph.ball(u, m))
    cnt = {u: 1}
    for x in graph.topological_order():
        c = cnt.get(x)
        if not c:
            continue
        if x != u and x not in allowed:
            continue  # x may end a path but not continue one
        if x == w:
            continue  # acyclic, so w is never an intermediate of a u-to-w path
        for e in graph.out_edges(x):
            cnt[e.dst] = cnt.get(e.dst, 0) + c
    return cnt.get(w, 0)


def disjoint_union(a: FiniteGraph, b: FiniteGraph, name: str = "") -> FiniteGraph:
    clash = set(a.vertices) & set(b.vertices)
    if clash:
        raise GraphError(f"vertex ids clash in union: {sorted(clash)}")
    eclash = {e.id for e in a.edges} & {e.id for e in b.edges}
    if eclash:
        raise GraphError(f"edge ids clash in union: {sorted(eclash)}")
    emitters = dict(a.infinite_emitters)
    emitters.update(b.infinite_emitters)
    return FiniteGraph(a.vertices + b.vertices, a.edges + b.edges,
                       emitters, name=name or f"{a.name}+{b.name}")


def add_isolated(graph: FiniteGraph, names: Sequence[str]) -> FiniteGraph:
    """Append isolated vertices after the existing vertex list."""
    extra = FiniteGraph(tuple(names), ())
    return disjoint_union(graph, extra, name=graph.name)


# -- completion --------------------------------------------------------------


class CompletionProvenance(NamedTuple):
    X: tuple[str, ...]              # seed vertices regular in the host, out-edges pulled in
    X_prime: tuple[str, ...]        # vertices at which the completeness relation survives
    Y: tuple[str, ...]              # capped vertices: regular in the grown graph, not in the host
    added_vertices: tuple[str, ...]
    added_edges: tuple[str, ...]
    cap_vertices: dict              # y -> primed shadow vertex
    cap_edges: dict                 # edge into y -> primed copy
    isolated_caps: tuple[str, ...]  # shadows that received no edges

    def to_json(self) -> dict:
        return {
            "X": list(self.X),
            "X_prime": list(self.X_prime),
            "Y": list(self.Y),
            "added_vertices": list(self.added_vertices),
            "added_edges": list(self.added_edges),
            "cap_vertices": dict(self.cap_vertices),
            "cap_edges": dict(self.cap_edges),
            "isolated_caps": list(self.isolated_caps),
        }


def _host_views(host):
    """(has_vertex, is_regular, out_edges) accessors for a finite or template host."""
    if isinstance(host, FiniteGraph):
        regular = set(host.census().regular)
        return host.has_vertex, regular.__contains__, host.out_edges
    # template host: regular = every non-emitter vertex
    return (host.has_vertex,
            lambda v: not host.is_infinite_emitter(v),
            host.out_edges)


def completion(host, sub_vertices: Sequence[str],
               sub_edges: Sequence[str] = ()) -> tuple[FiniteGraph, CompletionProvenance]:
    """Grow a finite subgraph of the host into a finite graph whose path
    algebra embeds into the host's.

    Every out-edge of a subgraph vertex that is regular in the host is added
    along with its range; one growth step suffices.  Vertices that are
    regular in the grown graph but not in the host are then capped: each
    such y gets a shadow vertex and a shadow copy of every edge into y.
    A capped vertex with no incoming edges yields an isolated shadow,
    recorded in the provenance.

    The host may be a FiniteGraph or a TemplateGraph (the subgraph must be
    finite either way).  Edges of the result are grouped by source vertex,
    in vertex order.
    """
    has_vertex, is_reg, out_of = _host_views(host)
    fv = list(dict.fromkeys(sub_vertices))
    fe = list(dict.fromkeys(sub_edges))
    for v in fv:
        if not has_vertex(v):
            raise GraphError(f"subgraph vertex {v!r} not in host")
    fvset = set(fv)
    edge_by_id = {}
    for v in fv:
        if is_reg(v):
            for e in out_of(v):
                edge_by_id[e.id] = e
    if isinstance(host, FiniteGraph):
        for e in host.edges:
            edge_by_id.setdefault(e.id, e)
    for eid in fe:
        e = edge_by_id.get(eid)
        if e is None and isinstance(host, FiniteGraph):
            e = host.edge(eid)
        if e is None:
            # template host: locate the edge among the sources' outputs or streams
            e = _template_edge(host, eid, fv)
        if e.src not in fvset or e.dst not in fvset:
            raise GraphError(f"subgraph edge {eid!r} has an endpoint outside the subgraph")
        edge_by_id[eid] = e
    fe_edges = {eid: edge_by_id[eid] for eid in fe}

    X = tuple(v for v in fv if is_reg(v))
    xset = set(X)

    # grown vertex list: subgraph order first, new ranges in scan order
    bar_vertices = list(fv)
    seen = set(fv)
    for v in fv:
        if v in xset:
            for e in out_of(v):
                if e.dst not in seen:
                    seen.add(e.dst)
                    bar_vertices.append(e.dst)

    bar_edges = []
    kept = set(fe)
    for v in bar_vertices:
        if v in xset:
            bar_edges.extend(out_of(v))
        else:
            bar_edges.extend(fe_edges[eid] for eid in fe
                             if fe_edges[eid].src == v)
    added_vertices = tuple(v for v in bar_vertices if v not in fvset)
    added_edges = tuple(e.id for e in bar_edges if e.id not in kept)

    # the grown graph viewed plainly: emitter marks dropped
    bar = FiniteGraph(bar_vertices, bar_edges, name="completion")

    reg_bar = [v for v in bar.vertices if bar.out_edges(v)]
    X_prime = tuple(v for v in reg_bar if is_reg(v))
    Y = tuple(v for v in reg_bar if not is_reg(v))

    cap_vertices = {}
    cap_edges = {}
    dot_vertices = list(bar.vertices)
    dot_edges = list(bar_edges)
    isolated_caps = []
    taken = set(seen)
    taken.update(e.id for e in bar_edges)
    for y in Y:
        yp = y + "_prime"
        while yp in taken:
            yp += "_prime"
        taken.add(yp)
        cap_vertices[y] = yp
        dot_vertices.append(yp)
        incoming = bar.in_edges(y)
        if not incoming:
            isolated_caps.append(yp)
        for e in incoming:
            ep = e.id + "_prime"
            while ep in taken:
                ep += "_prime"
            taken.add(ep)
            cap_edges[e.id] = ep
            dot_edges.append(Edge(ep, e.src, yp))

    dot = FiniteGraph(dot_vertices, dot_edges, name="completion")
    prov = CompletionProvenance(X, X_prime, Y, added_vertices, added_edges,
                                cap_vertices, cap_edges, tuple(isolated_caps))
    return dot, prov


def _template_edge(template, eid, fv):
    budget = max((template.rank(v) for v in fv), default=0) + 2
    for v in fv:
        if template.is_infinite_emitter(v):
            for e in template.emitter_stream(v, budget):
                if e.id == eid:
                    return e
        else:
            for e in template.out_edges(v):
                if e.id == eid:
                    return e
    raise GraphError(f"subgraph edge {eid!r} not found among subgraph sources")


# -- templates ----------------------------------------------------------------


class TemplateGraph:
    """Infinite acyclic graph presented by rank layers.

    rank() strictly increases along every edge, which certifies acyclicity.
    truncate(depth) materializes the vertices of rank <= depth and the edges
    between them as a FiniteGraph; infinite emitters keep their mark with
    the materialized stream prefix recorded.
    """

    name = "template"
    params: dict = {}
    all_regular = False
    acyclic_by_rank = True
    rank_exact_edges = False   # True when every edge raises rank by exactly 1
    isolated_extras: tuple[str, ...] = ()

    def rank(self, v: str) -> int:
        raise NotImplementedError

    def layer(self, k: int) -> list[str]:
        raise NotImplementedError

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        raise NotImplementedError

    def is_infinite_emitter(self, v: str) -> bool:
        return False

    def emitter_stream(self, v: str, n: int) -> list[Edge]:
        raise GraphError(f"{v!r} is not an infinite emitter")

    def has_vertex(self, v: str) -> bool:
        try:
            return v in self.layer(self.rank(v))
        except (GraphError, ValueError):
            return False

    def vertices_up_to(self, rank_bound: int) -> list[str]:
        out = []
        for k in range(rank_bound + 1):
            out.extend(self.layer(k))
        return out

    def truncate(self, depth: int) -> FiniteGraph:
        if depth < 0:
            raise GraphError("truncation depth must be >= 0")
        vertices = self.vertices_up_to(depth)
        vset = set(vertices)
        edges = []
        marks = {}
        for v in vertices:
            if self.is_infinite_emitter(v):
                prefix = 0
                for e in self.emitter_stream(v, self._stream_budget(depth)):
                    if e.dst in vset:
                        edges.append(e)
                        prefix += 1
                marks[v] = StreamSpec(prefix=prefix, target=None)
            else:
                edges.extend(e for e in self.out_edges(v) if e.dst in vset)
        return FiniteGraph(vertices, edges, marks, name=f"{self.name}@{depth}")

    def _stream_budget(self, depth: int) -> int:
        # enough stream edges that every in-range target is covered
        return max(depth, 1)

    def describe(self) -> dict:
        return {"template": self.name, "params": dict(self.params)}

    def __repr__(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"<template {self.name}({ps})>"


def _grid_vid(i: int, j: int) -> str:
    return f"v{i}{j}" if i < 10 and j < 10 else f"v{i}_{j}"


class GridTemplate(TemplateGraph):
    """n horizontal rows, each vertex sending p parallel edges right and
    p parallel edges down to the next row.  Every vertex is regular."""

    name = "grid"
    all_regular = True
    rank_exact_edges = True

    def __init__(self, n: int, p: int):
        if not 1 <= n <= 9:
            raise GraphError("grid supports 1 <= n <= 9 rows")
        if p < 1:
            raise GraphError("edge multiplicity must be >= 1")
        self.n = n
        self.p = p
        self.params = {"n": n, "p": p}

    def _coords(self, v: str) -> tuple[int, int]:
        m = re.fullmatch(r"v(\d+)_(\d+)", v) or re.fullmatch(r"v(\d)(\d)", v)
        if not m:
            raise GraphError(f"unknown vertex {v!r}")
        i, j = int(m.group(1)), int(m.group(2))
        if not (1 <= i <= self.n and j >= 1):
            raise GraphError(f"unknown vertex {v!r}")
        return i, j

    def rank(self, v: str) -> int:
        i, j = self._coords(v)
        return i + j - 2

    def layer(self, k: int) -> list[str]:
        return [_grid_vid(i, k + 2 - i) for i in range(1, min(self.n, k + 1) + 1)]

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        i, j = self._coords(v)
        es = [Edge(f"h{i}_{j}_{c}", v, _grid_vid(i, j + 1)) for c in range(1, self.p + 1)]
        if i < self.n:
            es += [Edge(f"d{i}_{j}_{c}", v, _grid_vid(i + 1, j)) for c in range(1, self.p + 1)]
        return tuple(es)

    def has_vertex(self, v: str) -> bool:
        try:
            self._coords(v)
            return True
        except GraphError:
            return False


class QuadrantTemplate(GridTemplate):
    """Like the grid but with unboundedly many rows (no last row)."""

    name = "quadrant"

    def __init__(self, p: int):
        if p < 1:
            raise GraphError("edge multiplicity must be >= 1")
        self.n = None
        self.p = p
        self.params = {"p": p}

    def _coords(self, v: str) -> tuple[int, int]:
        m = re.fullmatch(r"v(\d+)_(\d+)", v) or re.fullmatch(r"v(\d)(\d)", v)
        if not m:
            raise GraphError(f"unknown vertex {v!r}")
        i, j = int(m.group(1)), int(m.group(2))
        if i < 1 or j < 1:
            raise GraphError(f"unknown vertex {v!r}")
        return i, j

    def layer(self, k: int) -> list[str]:
        return [_grid_vid(i, k + 2 - i) for i in range(1, k + 2)]

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        i, j = self._coords(v)
        es = [Edge(f"h{i}_{j}_{c}", v, _grid_vid(i, j + 1)) for c in range(1, self.p + 1)]
        es += [Edge(f"d{i}_{j}_{c}", v, _grid_vid(i + 1, j)) for c in range(1, self.p + 1)]
        return tuple(es)


class FanChainTemplate(TemplateGraph):
    """A single source v emitting one edge to every chain vertex v_k, the
    chain linked by p parallel edges v_k -> v_{k+1}.  v is the unique
    infinite emitter and a source; the rest of the graph is the hereditary
    saturated complement of v."""

    name = "fan_chain"
    all_regular = False

    def __init__(self, p: int):
        if p < 1:
            raise GraphError("edge multiplicity must be >= 1")
        self.p = p
        self.params = {"p": p}

    def rank(self, v: str) -> int:
        if v == "v":
            return 0
        m = re.fullmatch(r"v(\d+)", v)
        if not m or int(m.group(1)) < 1:
            raise GraphError(f"unknown vertex {v!r}")
        return int(m.group(1))

    def layer(self, k: int) -> list[str]:
        return ["v"] if k == 0 else [f"v{k}"]

    def is_infinite_emitter(self, v: str) -> bool:
        return v == "v"

    def emitter_stream(self, v: str, n: int) -> list[Edge]:
        if v != "v":
            raise GraphError(f"{v!r} is not an infinite emitter")
        return [Edge(f"e{k}", "v", f"v{k}") for k in range(1, n + 1)]

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        k = self.rank(v)
        if k == 0:
            raise GraphError("v is an infinite emitter; use emitter_stream")
        return tuple(Edge(f"f{c}_{k}", v, f"v{k + 1}") for c in range(1, self.p + 1))

    def has_vertex(self, v: str) -> bool:
        try:
            self.rank(v)
            return True
        except GraphError:
            return False


class PorcupineTemplate(TemplateGraph):
    """Realization of the graded ideal generated by a fan chain's chain
    part: one new source per entry edge, each with a single quill into its
    chain vertex.  All vertices are regular."""

    name = "porcupine"
    all_regular = True
    rank_exact_edges = True

    def __init__(self, p: int):
        self.p = p
        self.params = {"p": p}

    def rank(self, v: str) -> int:
        m = re.fullmatch(r"w_e(\d+)", v)
        if m and int(m.group(1)) >= 1:
            return int(m.group(1)) - 1
        m = re.fullmatch(r"v(\d+)", v)
        if m and int(m.group(1)) >= 1:
            return int(m.group(1))
        raise GraphError(f"unknown vertex {v!r}")

    def layer(self, k: int) -> list[str]:
        return ["w_e1"] if k == 0 else [f"v{k}", f"w_e{k + 1}"]

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        m = re.fullmatch(r"w_e(\d+)", v)
        if m:
            k = int(m.group(1))
            return (Edge(f"f_e{k}", v, f"v{k}"),)
        k = self.rank(v)
        return tuple(Edge(f"f{c}_{k}", v, f"v{k + 1}") for c in range(1, self.p + 1))

    def has_vertex(self, v: str) -> bool:
        try:
            self.rank(v)
            return True
        except GraphError:
            return False


def porcupine_template(t: FanChainTemplate) -> PorcupineTemplate:
    if not isinstance(t, FanChainTemplate):
        raise GraphError("template porcupine is defined for fan chains only")
    return PorcupineTemplate(t.p)


class IsolatedJoinTemplate(TemplateGraph):
    """A template together with extra isolated vertices, appended after the
    core's vertices in every truncation."""

    def __init__(self, core: TemplateGraph, names: Sequence[str]):
        names = tuple(names)
        for nm in names:
            _check_id("vertex", nm)
            if core.has_vertex(nm):
                raise GraphError(f"isolated vertex {nm!r} clashes with the core template")
        if len(set(names)) != len(names):
            raise GraphError("duplicate isolated vertex names")
        self.core = core
        self.isolated_extras = names
        self.name = core.name
        self.params = dict(core.params, isolated=",".join(names))
        self.all_regular = False
        self.rank_exact_edges = core.rank_exact_edges

    def rank(self, v: str) -> int:
        return 0 if v in self.isolated_extras else self.core.rank(v)

    def layer(self, k: int) -> list[str]:
        base = self.core.layer(k)
        return base + list(self.isolated_extras) if k == 0 else base

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return () if v in self.isolated_extras else self.core.out_edges(v)

    def is_infinite_emitter(self, v: str) -> bool:
        return v not in self.isolated_extras and self.core.is_infinite_emitter(v)

    def emitter_stream(self, v: str, n: int) -> list[Edge]:
        return self.core.emitter_stream(v, n)

    def has_vertex(self, v: str) -> bool:
        return v in self.isolated_extras or self.core.has_vertex(v)

    def truncate(self, depth: int) -> FiniteGraph:
        return add_isolated(self.core.truncate(depth), self.isolated_extras)


# -- finite builders ---------------------------------------------------------


def line_graph(n: int) -> FiniteGraph:
    """u1 -> u2 -> ... -> un; the n-by-n matrix algebra."""
    if n < 1:
        raise GraphError("line graph needs >= 1 vertex")
    vs = [f"u{k}" for k in range(1, n + 1)]
    es = [Edge(f"e{k}", f"u{k}", f"u{k + 1}") for k in range(1, n)]
    return FiniteGraph(vs, es, name=f"line({n})")


def clock_graph(n: int) -> FiniteGraph:
    """One source u with a single edge to each of n distinct sinks."""
    if n < 1:
        raise GraphError("clock needs >= 1 sink")
    vs = ["u"] + [f"v{k}" for k in range(1, n + 1)]
    es = [Edge(f"e{k}", "u", f"v{k}") for k in range(1, n + 1)]
    return FiniteGraph(vs, es, name=f"clock({n})")


def rose_graph(n: int) -> FiniteGraph:
    """n loops at a single vertex.  The one-petal rose names its loop c."""
    if n < 1:
        raise GraphError("rose needs >= 1 petal")
    if n == 1:
        es = [Edge("c", "v", "v")]
    else:
        es = [Edge(f"c{k}", "v", "v") for k in range(1, n + 1)]
    return FiniteGraph(["v"], es, name=f"rose({n})")


_TEMPLATE_ALIASES = {
    "E_n": "grid",
    "E_inf": "quadrant",
    "Example4": "fan_chain",
    "Clock": "clock",
    "Line": "line",
    "Rose": "rose",
}


def build_template(name: str, params: Optional[dict] = None):
    """Construct a named graph family member.

    Returns a FiniteGraph for the finite families (clock, line, rose) and a
    TemplateGraph for the infinite ones (grid, quadrant, fan_chain).  The
    optional params key "isolated" (comma-separated names) appends isolated
    vertices.
    """
    params = dict(params or {})
    kind = _TEMPLATE_ALIASES.get(name, name)
    isolated = params.pop("isolated", "")
    names = tuple(s for s in str(isolated).split(",") if s) if isolated else ()

    def need(key):
        if key not in params:
            raise GraphError(f"template {name!r} needs parameter {key!r}")
        try:
            return int(params.pop(key))
        except (TypeError, ValueError):
            raise GraphError(f"parameter {key!r} must be an integer") from None

    if kind == "grid":
        g = GridTemplate(need("n"), need("p"))
    elif kind == "quadrant":
        g = QuadrantTemplate(need("p"))
    elif kind == "fan_chain":
        g = FanChainTemplate(need("p"))
    elif kind == "clock":
        g = clock_graph(need("n"))
    elif kind == "line":
        g = line_graph(need("n"))
    elif kind == "rose":
        g = rose_graph(need("n"))
    else:
        raise GraphError(f"unknown template {name!r}")
    if params:
        raise GraphError(f"unused template parameters: {sorted(params)}")
    if names:
        if isinstance(g, FiniteGraph):
            g = add_isolated(g, names)
        else:
            g = IsolatedJoinTemplate(g, names)
    return g


# -- wire format --------------------------------------------------------------
#
# {"vertices": [...],
#  "edges": [{"id":..., "src":..., "dst":...}, ...],
#  "infinite_emitters": {"v": {"stream": "indexed", "prefix": N, "target": T?}}}
# or the template form {"template": NAME, "params": {...}, "depth": D}.
# Declaration order is preserved; round-trips are byte-stable.


def graph_to_json_dict(graph: FiniteGraph) -> dict:
    doc = {
        "vertices": list(graph.vertices),
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in graph.edges],
    }
    if graph.infinite_emitters:
        em = {}
        for v, spec in graph.infinite_emitters.items():
            entry = {"stream": "indexed", "prefix": spec.prefix}
            if spec.target is not None:
                entry["target"] = spec.target
            em[v] = entry
        doc["infinite_emitters"] = em
    return doc


def dump_graph(graph: FiniteGraph) -> str:
    return json.dumps(graph_to_json_dict(graph), indent=2) + "\n"


def load_graph(doc):
    """Parse the wire format.

    Accepts a JSON string or an already-decoded dict.  Returns
    ("graph", FiniteGraph) or ("template", graph_or_template, depth) where
    depth is the suggested truncation depth from the file (may be None).
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid graph JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise GraphError("graph document must be a JSON object")
    if "template" in doc:
        t = build_template(doc["template"], doc.get("params"))
        depth = doc.get("depth")
        if depth is not None and (not isinstance(depth, int) or depth < 0):
            raise GraphError("template depth must be a non-negative integer")
        if isinstance(t, FiniteGraph):
            return ("graph", t)
        return ("template", t, depth)
    try:
        vertices = doc["vertices"]
        raw_edges = doc.get("edges", [])
    except (KeyError, TypeError):
        raise GraphError("graph document needs a vertices list") from None
    edges = []
    for item in raw_edges:
        try:
            edges.append(Edge(item["id"], item["src"], item["dst"]))
        except (KeyError, TypeError):
            raise GraphError(f"malformed edge entry: {item!r}") from None
    emitters = {}
    for v, entry in (doc.get("infinite_emitters") or {}).items():
        if not isinstance(entry, dict) or "prefix" not in entry:
            raise GraphError(f"malformed emitter entry at {v!r}")
        emitters[v] = StreamSpec(prefix=int(entry["prefix"]), target=entry.get("target"))
    return ("graph", FiniteGraph(vertices, edges, emitters))
