"""Anti-coordination network games: learning dynamics and control policies."""

from anticoord.game_core import (
    Action,
    ActionProfile,
    PayoffConstants,
    TypedBipartiteGraph,
    active_edges,
    best_response,
    is_max_anticoordination,
    is_nash,
    utility,
)

__all__ = [
    "Action",
    "ActionProfile",
    "PayoffConstants",
    "TypedBipartiteGraph",
    "active_edges",
    "best_response",
    "is_max_anticoordination",
    "is_nash",
    "utility",
]
