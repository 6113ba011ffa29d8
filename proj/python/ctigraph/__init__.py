"""CTI report to provenance graph compiler."""

import os as _os
import pathlib as _pathlib

_pkg_data = _pathlib.Path(__file__).resolve().parent / "data"
if _pkg_data.is_dir():
    _os.environ.setdefault("CTIGRAPH_LEXICON_DIR", str(_pkg_data))
del _os, _pathlib, _pkg_data

try:
    from ._ctigraph import (  # type: ignore[attr-defined]
        Edge,
        EdgeAlignment,
        Graph,
        HuntResult,
        Lexicon,
        McsResult,
        Node,
        NodeKind,
        Syscall,
        _extract,
        from_json,
        hunt,
        invert,
        load_graph_file,
        mcs,
        mcs_score,
        name_match,
    )
except ImportError:  # an uninstalled build keeps the module next to the package
    from _ctigraph import (
        Edge,
        EdgeAlignment,
        Graph,
        HuntResult,
        Lexicon,
        McsResult,
        Node,
        NodeKind,
        Syscall,
        _extract,
        from_json,
        hunt,
        invert,
        load_graph_file,
        mcs,
        mcs_score,
        name_match,
    )

__all__ = [
    "Edge",
    "EdgeAlignment",
    "Graph",
    "HuntResult",
    "Lexicon",
    "McsResult",
    "Node",
    "NodeKind",
    "Syscall",
    "extract",
    "from_json",
    "hunt",
    "invert",
    "load_graph_file",
    "mcs",
    "mcs_score",
    "name_match",
]

STAGES = ("tokenize-promotion", "homogenize", "to-active", "esr", "pr", "er", "summarize")


def extract(
    text,
    source="report",
    lexicon=None,
    disable=(),
    esr_window=5,
    verdicts=None,
    return_stats=False,
):
    """Compile report text into a provenance graph.

    ``disable`` names pipeline stages (see ``STAGES``) replaced by the
    identity; ``verdicts`` maps sentence indices to "P"/"N" overrides.
    With ``return_stats`` the result is a ``(graph, stats)`` pair.
    """
    if lexicon is None:
        lexicon = Lexicon()
    graph, stats = _extract(
        text, source, lexicon, list(disable), esr_window, dict(verdicts or {})
    )
    return (graph, stats) if return_stats else graph
