import json

from ._janaka import (
    Formula,
    JanakaError,
    PropositionSet,
    Sample,
    export_milp,
    extract_formulas,
    fitness,
    generate_traces,
    make_templates,
    parse_formula,
    parse_traces,
    repair,
    satisfies_all,
    solve_lp,
    to_nnf,
    trace_values,
)
from ._janaka import mine as _mine


def mine(traces, explanation, fixtures, **kwargs):
    """Runs the mining pipeline with the mock provider and returns the report as a dict."""
    return json.loads(_mine(str(traces), str(explanation), str(fixtures), **kwargs))


__all__ = [
    "Formula",
    "JanakaError",
    "PropositionSet",
    "Sample",
    "export_milp",
    "extract_formulas",
    "fitness",
    "generate_traces",
    "make_templates",
    "mine",
    "parse_formula",
    "parse_traces",
    "repair",
    "satisfies_all",
    "solve_lp",
    "to_nnf",
    "trace_values",
]
