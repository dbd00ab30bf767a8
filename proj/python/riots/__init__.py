"""Supply-chain failure-risk analysis.

Thin Python surface over the C++ core: parse a system graph document,
flatten sub-systems, compile the root's boolean failure logic, enumerate
minimal cutsets, and evaluate system risk, Birnbaum importance and
improvement potential, with supplier trust folded into the event
probabilities.

Typical use::

    import riots

    bundle = riots.analyze_file("system.json")
    print(bundle["system_risk"], bundle["backend"])

    worse = riots.analyze_file("system.json", risks={"some_owner": 0.25})
"""

import json as _json

from ._riots import (
    BasicEvent,
    CutSetCollection,
    Error,
    FailureExpr,
    GraphDocument,
    SystemGraph,
    ValidationError,
    __version__,
    apply_trust,
    basic_events,
    build_graph,
    compile_failure_logic,
    document_from_json,
    document_to_json,
    effective_risks,
    flatten,
    importance_report,
    is_cut,
    jaccard_trust,
    minimal_cutsets,
    parse_document,
    render_file,
    system_risk_exact,
    system_risk_mincut,
)

__all__ = [
    "BasicEvent",
    "CutSetCollection",
    "Error",
    "FailureExpr",
    "GraphDocument",
    "SystemGraph",
    "ValidationError",
    "__version__",
    "analyze_file",
    "apply_trust",
    "basic_events",
    "build_graph",
    "compile_failure_logic",
    "document_from_json",
    "document_to_json",
    "effective_risks",
    "flatten",
    "importance_report",
    "is_cut",
    "jaccard_trust",
    "minimal_cutsets",
    "parse_document",
    "render_file",
    "system_risk_exact",
    "system_risk_mincut",
]


def analyze_file(path, **options):
    """Run the full pipeline on a document file and return the analysis
    bundle as a dict (events, effective risks, cutsets, importance report).

    Keyword options are those of :func:`render_file`: ``risks`` and
    ``trusts`` (what-if overrides by node id), ``max_order``,
    ``intermediate_cap``, ``backend``, ``exact_limit``, ``floor`` and
    ``lenient``.
    """
    return _json.loads(render_file(str(path), format="json", **options))
