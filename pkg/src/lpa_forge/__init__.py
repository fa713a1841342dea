"""Exact computation in Leavitt path algebras of directed graphs.

The package is organized in five layers: graphs and their infinite
templates (graph_core), the normal-form arithmetic kernel over prime
fields and the rationals (algebra_kernel), finite-dimensional bracket
and ideal sandboxes (subspace_lab), structural classifiers with
three-valued verdicts (structure_classifiers), and a JSON-reporting
command line plus seeded oracle (harness_cli).
"""

from .graph_core import (
    CompletionProvenance,
    Edge,
    FiniteGraph,
    GraphError,
    StreamSpec,
    TemplateGraph,
    VertexCensus,
    add_isolated,
    build_template,
    clock_graph,
    completion,
    count_admissible_paths,
    disjoint_union,
    dump_graph,
    graph_to_json_dict,
    line_graph,
    load_graph,
    rose_graph,
    vertex_census,
)
from .algebra_kernel import (
    INTS,
    Algebra,
    AlgebraError,
    Element,
    FieldError,
    Monomial,
    MonomialInterner,
    ParseError,
    PrimeField,
    RationalField,
    field_for_char,
    is_basis_admissible,
    is_prime,
    make_monomial,
    mono_mul,
    normalize_terms,
    parse_element,
    render_element,
)
from .structure_classifiers import (
    PCommutatorReport,
    Verdict,
    breaking_vertices,
    cohn_element,
    enumerate_hs_subsets,
    hereditary_closure,
    hs_closure,
    is_hereditary_saturated,
    lie_ideal_property_verdict,
    locally_finite_check,
    p_commutator_check,
    porcupine_graph,
    quotient_graph,
    saturation_closure,
    solvability_class,
)
from .subspace_lab import (
    DerivedSeriesReport,
    Sandbox,
    SandboxError,
    Subspace,
    bracket_span,
    commutator_subspace,
    commutator_subspace_all_pairs,
    derived_series,
    graded_components_in,
    ideal_closure,
    is_ideal,
    is_lie_ideal,
    lie_closure,
    span_of,
)
from .harness_cli import (
    bracket_case_table_check,
    fixed_counterexample_suite,
    kernel_property_trials,
    main,
    sample_dag,
    sample_element,
)

__version__ = "0.1.0"

__all__ = [
    "Algebra", "AlgebraError", "CompletionProvenance", "DerivedSeriesReport",
    "Edge", "Element", "FieldError", "FiniteGraph", "GraphError", "INTS",
    "Monomial", "MonomialInterner", "PCommutatorReport", "ParseError",
    "PrimeField", "RationalField", "Sandbox", "SandboxError", "StreamSpec",
    "Subspace", "TemplateGraph", "Verdict", "VertexCensus", "add_isolated",
    "bracket_case_table_check", "bracket_span", "breaking_vertices",
    "build_template", "clock_graph", "cohn_element", "commutator_subspace",
    "commutator_subspace_all_pairs", "completion", "count_admissible_paths",
    "derived_series", "disjoint_union", "dump_graph", "enumerate_hs_subsets",
    "field_for_char", "fixed_counterexample_suite", "graded_components_in",
    "graph_to_json_dict", "hereditary_closure", "hs_closure", "ideal_closure",
    "is_basis_admissible", "is_hereditary_saturated", "is_ideal",
    "is_lie_ideal", "is_prime", "kernel_property_trials", "lie_closure",
    "lie_ideal_property_verdict", "line_graph", "load_graph",
    "locally_finite_check", "main", "make_monomial", "mono_mul",
    "normalize_terms", "p_commutator_check", "parse_element",
    "porcupine_graph", "quotient_graph", "render_element", "rose_graph",
    "sample_dag", "sample_element", "saturation_closure", "solvability_class",
    "span_of", "vertex_census",
]
