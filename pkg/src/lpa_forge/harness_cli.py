"""Command line front end and the seeded self-check oracle.

Every command reads a graph (from a JSON file or a named template), runs
one computation, and emits a single JSON report.  Reports are fully
deterministic: same inputs and same seed give byte-identical output, so
they can be diffed across runs and machines.

Exit codes: 0 the computed property holds (or the computation simply
succeeded), 1 a checked property fails, 2 bad input, 3 the answer is
Unknown at the configured bounds.
"""

from __future__ import annotations

import argparse
import json
import platform
import random
import sys
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .graph_core import (
    FiniteGraph,
    GraphError,
    TemplateGraph,
    build_template,
    load_graph,
    vertex_census,
)
from .algebra_kernel import (
    Algebra,
    AlgebraError,
    Monomial,
    _mono_str,
    field_for_char,
    mono_mul,
    normalize_terms,
    parse_element,
    render_element,
)
from .structure_classifiers import (
    Verdict,
    lie_ideal_property_verdict,
    p_commutator_check,
    solvability_class,
)
from .subspace_lab import (
    Sandbox,
    SandboxError,
    bracket_span,
    commutator_subspace,
    derived_series,
    graded_components_in,
    ideal_closure,
    is_ideal,
    is_lie_ideal,
    lie_closure,
    span_of,
)

DEFAULT_DEPTH = 4
DEFAULT_CAP = 6
DEFAULT_M_MAX = 6

# sampler bounds for the oracle and the kernel property battery
ORACLE_MAX_VERTICES = 5
ORACLE_MAX_MULT = 3
ORACLE_MAX_TERMS = 4
ORACLE_DIM_CAP = 120
ORACLE_CHARS = (0, 2, 3)


def _package_version() -> str:
    try:
        from importlib import metadata

        return metadata.version("lpa-forge")
    except Exception:
        return "0.0.0"


# -- job description -----------------------------------------------------------


@dataclass
class JobSpec:
    """Validated bundle of one command invocation."""

    command: str
    graph_file: Optional[str] = None
    template: Optional[str] = None
    params: dict = dc_field(default_factory=dict)
    characteristic: int = 0
    depth: Optional[int] = None
    m_max: int = DEFAULT_M_MAX
    cap: int = DEFAULT_CAP
    seed: int = 0
    trials: int = 100
    out: Optional[str] = None
    exprs: tuple = ()

    def validate(self) -> None:
        field_for_char(self.characteristic)  # raises FieldError on a bad value
        if self.depth is not None and self.depth < 0:
            raise GraphError(f"depth must be nonnegative, got {self.depth}")
        if self.m_max < 0:
            raise GraphError(f"mmax must be nonnegative, got {self.m_max}")
        if self.cap < 0:
            raise GraphError(f"cap must be nonnegative, got {self.cap}")
        if self.trials < 1:
            raise GraphError(f"trials must be positive, got {self.trials}")


def _resolve_target(job: JobSpec):
    """Return (kind, target, file_depth) with kind 'graph' or 'template'."""
    if (job.graph_file is None) == (job.template is None):
        raise GraphError("exactly one of --graph and --template is required")
    if job.graph_file is not None:
        with open(job.graph_file, "r", encoding="utf-8") as fh:
            loaded = load_graph(fh.read())
        if loaded[0] == "graph":
            return "graph", loaded[1], None
        return "template", loaded[1], loaded[2]
    built = build_template(job.template, dict(job.params))
    if isinstance(built, FiniteGraph):
        return "graph", built, None
    return "template", built, None


def _truncation_depth(job: JobSpec, file_depth: Optional[int]) -> int:
    # explicit flag wins, then the file's suggestion, then the default
    if job.depth is not None:
        return job.depth
    if file_depth is not None:
        return file_depth
    return DEFAULT_DEPTH


def _finite_view(job: JobSpec):
    """Materialize the working graph plus its report header block."""
    kind, target, file_depth = _resolve_target(job)
    if kind == "graph":
        return target, _graph_block(kind, target, None)
    depth = _truncation_depth(job, file_depth)
    return target.truncate(depth), _graph_block(kind, target, depth)


def _graph_block(kind: str, target, depth: Optional[int]) -> dict:
    if kind == "graph":
        return {
            "kind": "finite",
            "name": target.name or None,
            "vertices": len(target.vertices),
            "edges": len(target.edges),
            "marked": sorted(target.infinite_emitters),
        }
    doc = {"kind": "template"}
    doc.update(target.describe())
    if depth is not None:
        doc["depth"] = depth
    return doc


def _sandbox(job: JobSpec, graph: FiniteGraph) -> Sandbox:
    algebra = Algebra(graph, field_for_char(job.characteristic))
    return Sandbox(algebra, cap=job.cap)


# -- classify --------------------------------------------------------------------


def cmd_classify(job: JobSpec):
    kind, target, file_depth = _resolve_target(job)
    char = job.characteristic
    # None lets template checkers pick a covering depth themselves
    checker_depth = job.depth if job.depth is not None else file_depth

    if kind == "graph":
        working = target
        block = _graph_block(kind, target, None)
    else:
        depth = _truncation_depth(job, file_depth)
        working = target.truncate(depth)
        block = _graph_block(kind, target, depth)

    acyclic, cycle = working.is_acyclic()
    census = vertex_census(working)

    from .structure_classifiers import locally_finite_check

    lf = locally_finite_check(target)
    try:
        solv = solvability_class(working, char)
    except GraphError:
        solv = None  # cyclic working graph: no block decomposition to test
    pc = (
        p_commutator_check(target, char, m_max=job.m_max, depth=checker_depth)
        if char > 0
        else None
    )
    prop = lie_ideal_property_verdict(
        target, char, m_max=job.m_max, depth=checker_depth
    )

    statuses = [lf.status, prop.status]
    if solv is not None:
        statuses.append(solv.status)
    if pc is not None:
        statuses.append(pc.verdict.status)
    if any(s == "Unknown" for s in statuses):
        code = 3
    else:
        code = 0 if prop.status == "Holds" else 1

    report = {
        "command": "classify",
        "graph": block,
        "characteristic": char,
        "census": census.to_json(),
        "acyclic": acyclic,
        "locally_finite": lf.to_json(),
        "solvability": solv.to_json() if solv is not None else None,
        "p_commutator": pc.to_json() if pc is not None else None,
        "lie_ideal_property": prop.to_json(),
        "exit": code,
    }
    if not acyclic:
        report["cycle"] = list(cycle)
    return report, code


# -- element calculator ----------------------------------------------------------


def cmd_eval(job: JobSpec):
    graph, block = _finite_view(job)
    algebra = Algebra(graph, field_for_char(job.characteristic))
    results = []
    for text in job.exprs:
        el = parse_element(algebra, text)
        results.append(
            {
                "input": text,
                "normal_form": render_element(el),
                "degrees": list(el.degrees()),
                "terms": el.to_json(),
            }
        )
    report = {
        "command": "eval",
        "graph": block,
        "characteristic": job.characteristic,
        "results": results,
    }
    return report, 0


def cmd_bracket(job: JobSpec):
    graph, block = _finite_view(job)
    algebra = Algebra(graph, field_for_char(job.characteristic))
    a = parse_element(algebra, job.exprs[0])
    b = parse_element(algebra, job.exprs[1])
    c = a.bracket(b)
    report = {
        "command": "bracket",
        "graph": block,
        "characteristic": job.characteristic,
        "a": render_element(a),
        "b": render_element(b),
        "bracket": render_element(c),
        "degrees": list(c.degrees()),
        "terms": c.to_json(),
    }
    return report, 0


def cmd_basis(job: JobSpec):
    graph, block = _finite_view(job)
    sandbox = _sandbox(job, graph)
    report = {
        "command": "basis",
        "graph": block,
        "characteristic": job.characteristic,
        "complete": sandbox.complete,
        "cap": sandbox.cap,
        "dimension": sandbox.dimension,
        "monomials": [_mono_str(m) for m in sandbox.basis],
    }
    return report, 0


def cmd_derived(job: JobSpec):
    graph, block = _finite_view(job)
    sandbox = _sandbox(job, graph)
    L = span_of(sandbox, [sandbox.basis_element(i) for i in range(sandbox.dimension)])
    rep = derived_series(L, sandbox)
    report = {
        "command": "derived",
        "graph": block,
        "characteristic": job.characteristic,
        "dimension": sandbox.dimension,
        "series": rep.to_json(),
    }
    return report, 0


def cmd_closures(job: JobSpec):
    graph, block = _finite_view(job)
    sandbox = _sandbox(job, graph)
    algebra = sandbox.algebra
    gens = [parse_element(algebra, text) for text in job.exprs]
    L = lie_closure(gens, sandbox)
    I = ideal_closure(gens, sandbox)
    report = {
        "command": "closures",
        "graph": block,
        "characteristic": job.characteristic,
        "generators": [render_element(g) for g in gens],
        "lie_closure": L.to_json(),
        "ideal_closure": I.to_json(),
        "lie_closure_is_ideal": is_ideal(L).to_json(),
        "ideal_closure_is_lie_ideal": is_lie_ideal(I).to_json(),
    }
    return report, 0


# -- seeded oracle -----------------------------------------------------------------


def _graph_dimension(graph: FiniteGraph) -> int:
    """Basis size of the acyclic unmarked algebra, by path counting."""
    counts = {}
    for v in graph.topological_order():
        counts[v] = 1 + sum(counts[e.src] for e in graph.in_edges(v))
    return sum(counts[v] ** 2 for v in graph.vertices if not graph.is_regular(v))


def sample_dag(rng: random.Random, max_vertices: int = ORACLE_MAX_VERTICES,
               max_multiplicity: int = ORACLE_MAX_MULT,
               dim_cap: int = ORACLE_DIM_CAP) -> FiniteGraph:
    """Random acyclic graph with edges only forward in vertex order.

    Resamples until the algebra dimension fits under dim_cap, so oracle
    trials stay fast regardless of seed.
    """
    while True:
        n = rng.randint(1, max_vertices)
        vertices = [f"x{i + 1}" for i in range(n)]
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.45:
                    for k in range(rng.randint(1, max_multiplicity)):
                        edges.append((f"a{i + 1}{j + 1}_{k + 1}",
                                      vertices[i], vertices[j]))
        graph = FiniteGraph(vertices, edges, name=f"sample{n}")
        if _graph_dimension(graph) <= dim_cap:
            return graph


def sample_element(rng: random.Random, sandbox: Sandbox,
                   max_terms: int = ORACLE_MAX_TERMS):
    f = sandbox.field
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        m = sandbox.basis[rng.randrange(sandbox.dimension)]
        c = f.add(terms.get(m, f.zero), f.nonzero_sample(rng))
        if c == f.zero:
            terms.pop(m, None)
        else:
            terms[m] = c
    return sandbox.algebra._from_normal(terms)


def bracket_case_table_check(sandbox: Sandbox) -> Optional[dict]:
    """Check [v, m] against the source-vertex case table on every basis
    monomial: +m when only the left path starts at v, -m when only the
    right one does, 0 otherwise.  Returns the first mismatch, else None."""
    algebra = sandbox.algebra
    f = sandbox.field
    minus_one = f.neg(f.one)
    for v in sandbox.graph.vertices:
        ve = algebra.vertex(v)
        for i, m in enumerate(sandbox.basis):
            me = sandbox.basis_element(i)
            left, right = sandbox._left[i], sandbox._right[i]
            if left == v and right != v:
                want = me
            elif right == v and left != v:
                want = me.scale(minus_one)
            else:
                want = algebra.zero()
            if ve.bracket(me) != want:
                return {"vertex": v, "monomial": _mono_str(m),
                        "got": render_element(ve.bracket(me)),
                        "expected": render_element(want)}
    return None


def _element_for_label(algebra: Algebra, label: str):
    if label.endswith("*"):
        return algebra.ghost(label[:-1])
    if algebra.graph.has_vertex(label):
        return algebra.vertex(label)
    return algebra.edge(label)


def _revalidate_ideal_witness(sandbox: Sandbox, U, cx: dict) -> bool:
    """Recompute a non-absorption witness from its rendered strings alone."""
    algebra = sandbox.algebra
    gen = _element_for_label(algebra, cx["generator"])
    x = parse_element(algebra, cx["element"])
    product = gen * x if cx["side"] == "left" else x * gen
    if render_element(product) != cx["product"]:
        return False
    return not U.contains(product)


def _edges_json(graph: FiniteGraph) -> list:
    return [[e.id, e.src, e.dst] for e in graph.edges]


def _oracle_trial(seed: int, index: int) -> dict:
    rng = random.Random(f"{seed}:{index}")
    char = ORACLE_CHARS[index % len(ORACLE_CHARS)]
    graph = sample_dag(rng)
    algebra = Algebra(graph, field_for_char(char))
    sandbox = Sandbox(algebra, cap=DEFAULT_CAP)
    checks = {}

    x = sample_element(rng, sandbox)
    y = sample_element(rng, sandbox)

    I = ideal_closure([x], sandbox)
    v = is_lie_ideal(I)
    checks["ideal_closure_is_lie_ideal"] = (
        "pass" if v.status == "Holds" else {"fail": v.to_json()}
    )

    com = commutator_subspace(sandbox)
    c = x.bracket(y)
    ok = com.contains(c) and graded_components_in(com, c)
    checks["bracket_components_in_commutator"] = (
        "pass" if ok else {"fail": {"bracket": render_element(c)}}
    )

    W = bracket_span(I, I)
    v = is_lie_ideal(W)
    checks["bracket_span_is_lie_ideal"] = (
        "pass" if v.status == "Holds" else {"fail": v.to_json()}
    )

    bad = bracket_case_table_check(sandbox)
    checks["vertex_bracket_case_table"] = "pass" if bad is None else {"fail": bad}

    return {
        "trial": index,
        "characteristic": char,
        "graph": {"vertices": list(graph.vertices), "edges": _edges_json(graph)},
        "element": render_element(x),
        "checks": checks,
        "ok": all(v == "pass" for v in checks.values()),
    }


def fixed_counterexample_suite(cap: int = DEFAULT_CAP,
                               depth: int = DEFAULT_DEPTH) -> dict:
    """Three pinned witness computations, each re-validated independently.

    A loop span that is bracket-stable but not absorbing, a diagonal line
    in a two-point algebra, and a join of an infinite-emitter truncation
    with an isolated vertex where the diagonal plus the interior is
    bracket-stable but the interior alone absorbs.
    """
    cases = {}

    algebra = Algebra(build_template("rose", {"n": 1}), field_for_char(2))
    sandbox = Sandbox(algebra, cap=cap)
    U = span_of(sandbox, [algebra.edge("c")])
    lie = is_lie_ideal(U)
    idl = is_ideal(U)
    cases["loop_span"] = {
        "lie_ideal": lie.to_json(),
        "ideal": idl.to_json(),
        "witness_revalidated": (
            idl.status == "Fails"
            and _revalidate_ideal_witness(sandbox, U, idl.counterexample)
        ),
        "ok": lie.status == "Holds" and idl.status == "Fails",
    }

    two = FiniteGraph(["u", "v"], [], name="two_points")
    algebra = Algebra(two, field_for_char(0))
    sandbox = Sandbox(algebra)
    U = span_of(sandbox, [algebra.vertex("u") + algebra.vertex("v")])
    lie = is_lie_ideal(U)
    idl = is_ideal(U)
    cases["diagonal_pair"] = {
        "lie_ideal": lie.to_json(),
        "ideal": idl.to_json(),
        "witness_revalidated": (
            idl.status == "Fails"
            and _revalidate_ideal_witness(sandbox, U, idl.counterexample)
        ),
        "ok": lie.status == "Holds" and idl.status == "Fails",
    }

    template = build_template("fan_chain", {"p": 2, "isolated": "w"})
    graph = template.truncate(depth)
    algebra = Algebra(graph, field_for_char(2))
    sandbox = Sandbox(algebra, cap=cap)
    vpos = sandbox.position(Monomial((), (), "v"))
    wpos = sandbox.position(Monomial((), (), "w"))
    interior = [sandbox.basis_element(i) for i in range(sandbox.dimension)
                if i not in (vpos, wpos)]
    M = span_of(sandbox, interior)
    diag = algebra.vertex("v") + algebra.vertex("w")
    U = span_of(sandbox, interior + [diag])
    m_ideal = is_ideal(M)
    lie = is_lie_ideal(U)
    idl = is_ideal(U)
    table = bracket_case_table_check(sandbox)
    cases["emitter_join"] = {
        "dimension": sandbox.dimension,
        "interior_is_ideal": m_ideal.to_json(),
        "lie_ideal": lie.to_json(),
        "ideal": idl.to_json(),
        "witness_revalidated": (
            idl.status == "Fails"
            and _revalidate_ideal_witness(sandbox, U, idl.counterexample)
        ),
        "bracket_case_table": "pass" if table is None else {"fail": table},
        "ok": (
            m_ideal.status == "Holds"
            and lie.status == "Holds"
            and idl.status == "Fails"
            and table is None
        ),
    }

    cases["ok"] = all(
        entry["ok"] and entry.get("witness_revalidated", True)
        for entry in cases.values()
        if isinstance(entry, dict)
    )
    return cases


def cmd_oracle(job: JobSpec):
    trials = [_oracle_trial(job.seed, i) for i in range(job.trials)]
    depth = job.depth if job.depth is not None else DEFAULT_DEPTH
    fixed = fixed_counterexample_suite(cap=job.cap, depth=depth)
    failed = [t["trial"] for t in trials if not t["ok"]]
    ok = not failed and fixed["ok"]
    report = {
        "command": "oracle",
        "env": {
            "package": _package_version(),
            "python": platform.python_version(),
            "seed": job.seed,
            "trials": job.trials,
            "bounds": {
                "max_vertices": ORACLE_MAX_VERTICES,
                "max_multiplicity": ORACLE_MAX_MULT,
                "max_terms": ORACLE_MAX_TERMS,
                "dimension_cap": ORACLE_DIM_CAP,
                "characteristics": list(ORACLE_CHARS),
                "cap": job.cap,
                "depth": depth,
            },
        },
        "trials": trials,
        "fixed_cases": fixed,
        "summary": {
            "trials_run": len(trials),
            "trials_failed": failed,
            "fixed_ok": fixed["ok"],
            "ok": ok,
        },
    }
    return report, 0 if ok else 1


# -- kernel property battery (import surface for the test suite) -------------------


def kernel_property_trials(seed: int, trials: int = 1000,
                           max_vertices: int = ORACLE_MAX_VERTICES,
                           dim_cap: int = ORACLE_DIM_CAP) -> dict:
    """Randomized law checks on the rewriting kernel itself.

    Per trial: rewrite confluence under term-order shuffling, product
    associativity, the Jacobi identity, graded multiplicativity of
    products, and membership of every graded component of a bracket in
    the commutator subspace.
    """
    failures = []
    counts = {
        "confluence": 0,
        "associativity": 0,
        "jacobi": 0,
        "graded_multiplicativity": 0,
        "graded_commutator_membership": 0,
    }
    for index in range(trials):
        rng = random.Random(f"{seed}:kernel:{index}")
        char = ORACLE_CHARS[index % len(ORACLE_CHARS)]
        graph = sample_dag(rng, max_vertices=max_vertices, dim_cap=dim_cap)
        f = field_for_char(char)
        algebra = Algebra(graph, f)
        sandbox = Sandbox(algebra, cap=DEFAULT_CAP)
        x = sample_element(rng, sandbox)
        y = sample_element(rng, sandbox)
        z = sample_element(rng, sandbox)

        def bad(check: str, detail: dict):
            failures.append({"trial": index, "check": check,
                             "characteristic": char, "detail": detail})

        raw = []
        for ma, ca in x.terms.items():
            for mb, cb in y.terms.items():
                m = mono_mul(graph, ma, mb)
                if m is not None:
                    raw.append((f.mul(ca, cb), m.gamma, m.lam, m.root))
        shuffled = list(raw)
        rng.shuffle(shuffled)
        straight = normalize_terms(graph, f, raw)
        reordered = normalize_terms(graph, f, shuffled)
        p = x * y
        if straight == reordered and straight == dict(p.terms):
            counts["confluence"] += 1
        else:
            bad("confluence", {"x": render_element(x), "y": render_element(y)})

        if (x * y) * z == x * (y * z):
            counts["associativity"] += 1
        else:
            bad("associativity", {"x": render_element(x),
                                  "y": render_element(y),
                                  "z": render_element(z)})

        jac = (x.bracket(y).bracket(z) + y.bracket(z).bracket(x)
               + z.bracket(x).bracket(y))
        if jac.is_zero():
            counts["jacobi"] += 1
        else:
            bad("jacobi", {"residual": render_element(jac)})

        parts_x = x.decompose()
        parts_y = y.decompose()
        graded_ok = True
        for n in p.degrees():
            acc = algebra.zero()
            for dx, ex in parts_x:
                for dy, ey in parts_y:
                    if dx + dy == n:
                        acc = acc + ex * ey
            if acc != p.graded_component(n):
                graded_ok = False
                break
        if graded_ok:
            counts["graded_multiplicativity"] += 1
        else:
            bad("graded_multiplicativity", {"product": render_element(p)})

        com = commutator_subspace(sandbox)
        c = x.bracket(y)
        if com.contains(c) and graded_components_in(com, c):
            counts["graded_commutator_membership"] += 1
        else:
            bad("graded_commutator_membership", {"bracket": render_element(c)})

    return {"seed": seed, "trials": trials, "counts": counts,
            "failures": failures, "ok": not failures}


# -- argument parsing ----------------------------------------------------------------


def _parse_params(pairs: Sequence[str]) -> dict:
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise GraphError(f"params must look like name=value, got {pair!r}")
        try:
            params[key] = int(value)
        except ValueError:
            params[key] = value
    return params


def _add_source_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--graph", help="path to a graph JSON document")
    sub.add_argument("--template", help="named infinite family")
    sub.add_argument("--params", nargs="*", default=[], metavar="K=V",
                     help="template parameters")
    sub.add_argument("--depth", type=int, default=None,
                     help="truncation depth for templates")


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--char", type=int, default=0,
                     help="field characteristic, 0 for rationals")
    sub.add_argument("--out", help="write the report here instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpa",
        description="Leavitt path algebra workbench: normal forms, bracket "
                    "subspaces, and structural classification.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("classify", help="run every structural classifier")
    _add_source_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("--mmax", type=int, default=DEFAULT_M_MAX,
                     help="largest radius for modular path counting")

    sub = subs.add_parser("eval", help="normalize expressions")
    _add_source_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("exprs", nargs="+", metavar="EXPR")

    sub = subs.add_parser("bracket", help="commutator of two expressions")
    _add_source_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("exprs", nargs=2, metavar="EXPR")

    sub = subs.add_parser("basis", help="enumerate the monomial basis")
    _add_source_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("--cap", type=int, default=DEFAULT_CAP,
                     help="total path-length cap when the graph has cycles")

    sub = subs.add_parser("derived", help="derived series of the full algebra")
    _add_source_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("--cap", type=int, default=DEFAULT_CAP)

    sub = subs.add_parser("closures", help="Lie and two-sided closures of generators")
    _add_source_flags(sub)
    _add_common_flags(sub)
    sub.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sub.add_argument("exprs", nargs="+", metavar="EXPR")

    sub = subs.add_parser("oracle", help="seeded randomized self-checks")
    _add_common_flags(sub)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--trials", type=int, default=100)
    sub.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sub.add_argument("--depth", type=int, default=None)

    return parser


def _job_from_args(ns: argparse.Namespace) -> JobSpec:
    job = JobSpec(
        command=ns.command,
        graph_file=getattr(ns, "graph", None),
        template=getattr(ns, "template", None),
        params=_parse_params(getattr(ns, "params", [])),
        characteristic=getattr(ns, "char", 0),
        depth=getattr(ns, "depth", None),
        m_max=getattr(ns, "mmax", DEFAULT_M_MAX),
        cap=getattr(ns, "cap", DEFAULT_CAP),
        seed=getattr(ns, "seed", 0),
        trials=getattr(ns, "trials", 100),
        out=getattr(ns, "out", None),
        exprs=tuple(getattr(ns, "exprs", ())),
    )
    job.validate()
    return job


_DISPATCH = {
    "classify": cmd_classify,
    "eval": cmd_eval,
    "bracket": cmd_bracket,
    "basis": cmd_basis,
    "derived": cmd_derived,
    "closures": cmd_closures,
    "oracle": cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        job = _job_from_args(ns)
        report, code = _DISPATCH[job.command](job)
    except (GraphError, AlgebraError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2) + "\n"
    if job.out:
        with open(job.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code
