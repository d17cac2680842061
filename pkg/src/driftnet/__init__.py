"""driftnet: deterministic discrete-time DTN simulation.

Store-carry-forward routing (Epidemic, Spray-and-Wait) over map-constrained
mobile nodes, with ONE-style settings files, Palu scenario presets, and
four plain-text report types.
"""

from .config import SettingsDoc, build_scenario, nodes_for_population, parse_settings
from .linklayer import Connection, InterfaceSpec, Transfer
from .mapmodel import MapGraph, MapPath, builtin_map, grid_graph, nearest_vertex, parse_wkt, shortest_path, to_wkt
from .mobility import MovementSpec, MovementState, advance, init_position
from .presets import ALIASES, preset_names, preset_text
from .reports import (BufferSample, DelayRecord, DeliveredRecord, MessageStats, ReportBundle,
                      ReportCollector, write_reports)
from .routing import Buffer, Message, RouterKind, expire, make_room, offer_accept, on_transfer_complete, route_tick
from .simcore import GroupSpec, NodeState, ReportingOptions, Scenario, SimClock, SimulationEngine, run, seeded_rng
from .traffic import TrafficSpec, TrafficState

__version__ = "0.1.0"
