"""MST verification, sensitivity and all-edges LCA on a simulated MPC cluster."""

from ._core import (
    AccountingFault,
    ConfigError,
    Edge,
    Graph,
    NotSpanning,
    ParseError,
    generate,
    lca,
    oracle,
    parse_edge_list,
    sensitivity,
    verify,
)

__all__ = [
    "AccountingFault",
    "ConfigError",
    "Edge",
    "Graph",
    "NotSpanning",
    "ParseError",
    "generate",
    "lca",
    "oracle",
    "parse_edge_list",
    "sensitivity",
    "verify",
]
