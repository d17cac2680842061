"""Engine: clock, node registry, seeded streams, and the per-tick loop.

Each tick runs, in fixed order: traffic generation, movement, connectivity
update (with transfer aborts), transfer progress, router decisions, TTL
expiry, report sampling. Time advances by multiplying the tick index, so
boundary times stay exact multiples of the tick. Runs are bit-reproducible
for identical scenario and seed.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from random import Random

from . import linklayer, mobility, routing
from .errors import ConfigurationError, WorldError
from .linklayer import InterfaceSpec, Transfer
from .mapmodel import MapGraph
from .mobility import MovementSpec, MovementState
from .reports import ALL_REPORTS, DeliveredRecord, ReportBundle, ReportCollector
from .routing import Buffer, RouterKind
from .traffic import TrafficSpec, TrafficState

RNG_STREAMS = ("movement", "traffic", "routing-order")


def seeded_rng(seed: int, stream: str) -> Random:
    """Independent deterministic stream for one concern of the run."""
    if stream not in RNG_STREAMS:
        raise ValueError(f"unknown rng stream {stream!r}; expected one of {RNG_STREAMS}")
    digest = hashlib.sha256(f"{seed}:{stream}".encode()).digest()
    return Random(int.from_bytes(digest[:8], "big"))


@dataclass
class SimClock:
    tick: float
    end: float
    now: float = 0.0
    tick_index: int = 0

    def __post_init__(self):
        if self.tick <= 0:
            raise ConfigurationError("Scenario.updateInterval must be > 0")
        if self.end <= 0:
            raise ConfigurationError("Scenario.endTime must be > 0")
        # ticks needed to cover the horizon; exact multiples stay exact
        self.total_ticks = math.ceil(self.end / self.tick - 1e-9)

    def advance(self) -> float:
        self.tick_index += 1
        self.now = min(self.tick_index * self.tick, self.end)
        return self.now

    @property
    def finished(self) -> bool:
        return self.tick_index >= self.total_ticks


@dataclass
class GroupSpec:
    prefix: str
    count: int
    router: RouterKind
    buffer_capacity: int
    interface: InterfaceSpec
    movement: MovementSpec
    ttl: float

    def validate(self) -> None:
        ctx = f"group {self.prefix!r}"
        if self.count < 1:
            raise ConfigurationError(f"{ctx}: nrofHosts must be >= 1")
        if self.buffer_capacity <= 0:
            raise ConfigurationError(f"{ctx}: bufferSize must be > 0")
        if self.ttl <= 0:
            raise ConfigurationError(f"{ctx}: msgTtl must be > 0")
        self.router.validate(ctx)
        self.interface.validate(ctx)
        self.movement.validate(ctx)


@dataclass
class ReportingOptions:
    sample_interval: float = 10.0
    include_static_buffers: bool = False
    reports: tuple[str, ...] = ALL_REPORTS


@dataclass
class Scenario:
    name: str
    seed: int
    tick: float
    duration: float
    groups: list[GroupSpec]
    world: MapGraph | None = None
    traffic: list[TrafficSpec] = field(default_factory=list)
    reporting: ReportingOptions = field(default_factory=ReportingOptions)
    queue_mode: str = routing.QUEUE_FIFO

    def validate(self) -> None:
        if self.duration <= 0:
            raise ConfigurationError("Scenario.endTime must be > 0")
        if self.tick <= 0:
            raise ConfigurationError("Scenario.updateInterval must be > 0")
        if self.tick > self.duration:
            raise ConfigurationError("Scenario.updateInterval must not exceed Scenario.endTime")
        if not self.groups:
            raise ConfigurationError("scenario needs at least one group (Group1.groupID)")
        prefixes = [g.prefix for g in self.groups]
        if len(set(prefixes)) != len(prefixes):
            raise ConfigurationError(f"group prefixes must be distinct, got {prefixes}")
        for group in self.groups:
            group.validate()
        needs_map = any(g.movement.kind == mobility.MAP_SHORTEST_PATH for g in self.groups)
        if needs_map and (self.world is None or self.world.n_vertices == 0):
            raise WorldError("map-based movement configured but the map is empty")
        node_ids = set(self.node_ids())
        traffic_prefixes = [t.id_prefix for t in self.traffic]
        if len(set(traffic_prefixes)) != len(traffic_prefixes):
            raise ConfigurationError(f"traffic prefixes must be distinct, got {traffic_prefixes}")
        for spec in self.traffic:
            spec.validate(f"events {spec.id_prefix!r}")
            for node_id in tuple(spec.sources) + tuple(spec.destinations):
                if node_id not in node_ids:
                    raise ConfigurationError(
                        f"events {spec.id_prefix!r}: unknown node id {node_id!r} in hosts/tohosts")
        if self.queue_mode not in (routing.QUEUE_FIFO, routing.QUEUE_RANDOM):
            raise ConfigurationError(f"unknown send-queue mode {self.queue_mode!r}")

    def node_ids(self) -> list[str]:
        return [f"{g.prefix}{i}" for g in self.groups for i in range(g.count)]


@dataclass(eq=False)
class NodeState:
    id: str
    group: GroupSpec
    position: tuple[float, float]
    movement_state: MovementState
    interface: InterfaceSpec
    router: RouterKind
    buffer: Buffer
    delivered_ids: set[str] = field(default_factory=set)
    outgoing: Transfer | None = None

    @property
    def stationary(self) -> bool:
        return self.group.movement.kind == mobility.STATIONARY


class SimulationEngine:
    """One deterministic run; strictly single-threaded."""

    def __init__(self, scenario: Scenario):
        scenario.validate()
        self.scenario = scenario
        self.clock = SimClock(tick=scenario.tick, end=scenario.duration)
        self.rng_movement = seeded_rng(scenario.seed, "movement")
        self.rng_traffic = seeded_rng(scenario.seed, "traffic")
        self.rng_order = seeded_rng(scenario.seed, "routing-order")
        self.collector = ReportCollector(scenario.reporting.sample_interval)
        self.connections: dict[tuple[str, str], linklayer.Connection] = {}
        self.transfer_log: list[dict] | None = None  # set to [] to trace transfers

        self.nodes: list[NodeState] = []
        ttl_by_node: dict[str, float] = {}
        for group in scenario.groups:
            for i in range(group.count):
                node_id = f"{group.prefix}{i}"
                position, mstate = mobility.init_position(group.movement, scenario.world,
                                                          self.rng_movement, now=0.0)
                node = NodeState(id=node_id, group=group, position=position,
                                 movement_state=mstate, interface=group.interface,
                                 router=group.router, buffer=Buffer(group.buffer_capacity))
                self.nodes.append(node)
                ttl_by_node[node_id] = group.ttl
        self.node_by_id = {n.id: n for n in self.nodes}
        self.mobile_nodes = [n for n in self.nodes if not n.stationary]
        self.traffic_states = [TrafficState(spec, ttl_by_node) for spec in scenario.traffic]
        if scenario.reporting.include_static_buffers:
            self.sampled_nodes = list(self.nodes)
        else:
            self.sampled_nodes = [n for n in self.nodes if not n.stationary]

    # -- tick phases -------------------------------------------------------

    def step(self) -> float:
        now = self.clock.advance()
        dt = self.clock.tick
        self._generate_traffic(now)
        self._move_nodes(now, dt)
        self._update_connectivity(now)
        self._progress_transfers(now, dt)
        self._route(now)
        self._expire(now)
        if self.collector.sampling_due(now):
            self.collector.sample_buffers(self.sampled_nodes, now)
        return now

    def run(self) -> ReportBundle:
        while not self.clock.finished:
            self.step()
        return self.collector.finalize(self.scenario.name, self.scenario.seed)

    def active_transfer_count(self) -> int:
        return sum(1 for c in self.connections.values() if c.transfer is not None)

    def _generate_traffic(self, now: float) -> None:
        for state in self.traffic_states:
            for msg in state.generate(now, self.rng_traffic):
                self.collector.record_event("created")
                source = self.node_by_id[msg.source]
                if source.router.kind == routing.SPRAY_AND_WAIT:
                    msg.copies = source.router.copies
                if msg.size > source.buffer.capacity:
                    self.collector.record_event("dropped")
                    continue
                protected = {source.outgoing.message.id} if source.outgoing else set()
                dropped = routing.make_room(source.buffer, msg.size, protected)
                if dropped is None:
                    self.collector.record_event("dropped")
                    continue
                for _ in dropped:
                    self.collector.record_event("dropped")
                source.buffer.add(msg, now)

    def _move_nodes(self, now: float, dt: float) -> None:
        world = self.scenario.world
        rng = self.rng_movement
        for node in self.mobile_nodes:
            node.position = mobility.advance(node.movement_state, node.group.movement,
                                             world, rng, now, dt)

    def _update_connectivity(self, now: float) -> None:
        ups, downs = linklayer.update_connectivity(self.nodes, self.connections, now)
        for conn in downs:
            if conn.transfer is not None:
                self._abort(conn)

    def _abort(self, conn: linklayer.Connection) -> None:
        transfer = conn.transfer
        conn.transfer = None
        sender = self.node_by_id[transfer.sender]
        if sender.outgoing is transfer:
            sender.outgoing = None
        self.collector.record_event("aborted")

    def _progress_transfers(self, now: float, dt: float) -> None:
        for conn in linklayer.progress_transfers(self.connections, dt):
            transfer = conn.transfer
            conn.transfer = None
            sender = self.node_by_id[transfer.sender]
            receiver = self.node_by_id[transfer.receiver]
            if sender.outgoing is transfer:
                sender.outgoing = None
            result = routing.on_transfer_complete(sender, receiver, transfer.message, now,
                                                  transfer.source_message)
            if result.rejected is not None:
                self.collector.record_event("aborted")
                continue
            for _ in result.dropped:
                self.collector.record_event("dropped")
            if result.delivered:
                msg = transfer.message
                latency = now - msg.created_at
                record = DeliveredRecord(time=now, message_id=msg.id, size=msg.size,
                                         hopcount=len(msg.hops),  # snapshot lacks the receiver hop
                                         latency=latency, source=msg.source,
                                         destination=receiver.id,
                                         remaining_ttl=msg.ttl - latency)
                self.collector.record_event("delivered", record)
            else:
                self.collector.record_event("relayed")

    def _route(self, now: float) -> None:
        if not self.connections:
            return
        peers: dict[str, list[NodeState]] = {}
        conn_by_pair: dict[tuple[str, str], linklayer.Connection] = {}
        for conn in self.connections.values():
            peers.setdefault(conn.a.id, []).append(conn.b)
            peers.setdefault(conn.b.id, []).append(conn.a)
            conn_by_pair[(conn.a.id, conn.b.id)] = conn
            conn_by_pair[(conn.b.id, conn.a.id)] = conn
        order = list(range(len(self.nodes)))
        self.rng_order.shuffle(order)
        for idx in order:
            node = self.nodes[idx]
            node_peers = peers.get(node.id)
            if not node_peers or node.outgoing is not None:
                continue
            intents = routing.route_tick(node, node_peers, self.scenario.queue_mode,
                                         self.rng_order)
            for msg, peer in intents:
                if routing.offer_accept(peer, msg) != routing.ACCEPT:
                    continue
                conn = conn_by_pair[(node.id, peer.id)]
                transfer = linklayer.begin_transfer(conn, msg, node, now)
                if transfer is not None:
                    self.collector.record_event("started")
                    if self.transfer_log is not None:
                        self.transfer_log.append({
                            "time": now, "message": msg.id, "sender": node.id,
                            "receiver": peer.id, "copies": msg.copies,
                            "destination": msg.destination,
                        })
                    break

    def _expire(self, now: float) -> None:
        for node in self.nodes:
            for _ in routing.expire(node, now):
                self.collector.record_event("expired")


def run(scenario: Scenario) -> ReportBundle:
    """Validate and execute one scenario, returning the finalized reports."""
    return SimulationEngine(scenario).run()
