"""Local computation algorithms: point-query oracles for MIS, independent set cover and
radio broadcast schedules, hypergraph 2-coloring and k-CNF satisfying assignments."""

from .coins import CoinTape, Color, Tag
from .components import Component, QueryFailed, SquareView, TooLarge, explore_component, square_neighbors
from .instances import (
    CnfFormula,
    GenerationError,
    Graph,
    Hypergraph,
    ParseError,
    gen_cnf,
    gen_graph,
    gen_hypergraph,
    parse_cnf,
    parse_graph,
    parse_hypergraph,
)
from .isc import BroadcastSession, IscSession, greedy_isc
from .lll import CnfSession, ColoringSession, EdgeState, InfeasibleParams, VertexState, check_params, check_params_cnf
from .mis import BState, MisSession, MisState, rounds_for
from .verify import (
    SweepReport,
    Violation,
    global_luby,
    sweep,
    verify_broadcast,
    verify_coloring,
    verify_isc,
    verify_mis,
    verify_report,
    verify_sat,
)

__all__ = [name for name in dir() if not name.startswith("_")]
