"""Shared builders for small test scenarios."""

from __future__ import annotations

from dataclasses import dataclass, field

import pytest

from driftnet.linklayer import InterfaceSpec, Transfer
from driftnet.mapmodel import MapGraph, parse_wkt
from driftnet.mobility import MovementSpec
from driftnet.routing import Buffer, RouterKind
from driftnet.simcore import GroupSpec, Scenario
from driftnet.traffic import TrafficSpec

BT5 = dict(transmit_speed=250_000, range=200.0)
BT4 = dict(transmit_speed=125_000, range=100.0)


def static_group(prefix: str, position, router: RouterKind | None = None,
                 buffer_capacity: int = 100_000_000, interface: dict = BT5,
                 ttl: float = 1800.0, count: int = 1) -> GroupSpec:
    return GroupSpec(prefix=prefix, count=count,
                     router=router or RouterKind("epidemic"),
                     buffer_capacity=buffer_capacity,
                     interface=InterfaceSpec(**interface),
                     movement=MovementSpec(kind="stationary", fixed_position=position),
                     ttl=ttl)


def car_group(prefix: str, count: int, router: RouterKind | None = None,
              buffer_capacity: int = 24_000_000, interface: dict = BT5,
              speed=(2.7, 13.9), wait=(0.0, 120.0), ttl: float = 1800.0) -> GroupSpec:
    return GroupSpec(prefix=prefix, count=count,
                     router=router or RouterKind("epidemic"),
                     buffer_capacity=buffer_capacity,
                     interface=InterfaceSpec(**interface),
                     movement=MovementSpec(kind="map-shortest-path", speed_range=speed,
                                           wait_range=wait),
                     ttl=ttl)


def single_message_traffic(source: str, destination: str, size: int,
                           at: float = 5.0) -> TrafficSpec:
    """Exactly one message of the given size, created at time `at`."""
    return TrafficSpec(id_prefix="M", interval_range=(at, at), size_range=(size, size),
                       sources=(source,), destinations=(destination,), window=(0.0, at))


def line_scenario(n_nodes: int, spacing: float, *, interface: dict = BT5,
                  router: RouterKind | None = None, size: int = 250_000,
                  tick: float = 0.1, duration: float = 120.0, seed: int = 7) -> Scenario:
    """n static nodes on a line; one message from the first to the last."""
    groups = [static_group(f"n{i}", (spacing * i, 0.0), router=router, interface=interface)
              for i in range(n_nodes)]
    traffic = [single_message_traffic("n00", f"n{n_nodes - 1}0", size)]
    return Scenario(name="line", seed=seed, tick=tick, duration=duration,
                    groups=groups, world=None, traffic=traffic)


@dataclass
class StubNode:
    """Minimal duck-typed node for exercising routing functions directly."""

    id: str
    buffer: Buffer
    router: RouterKind = field(default_factory=lambda: RouterKind("epidemic"))
    delivered_ids: set = field(default_factory=set)
    outgoing: Transfer | None = None
    position: tuple = (0.0, 0.0)
    interface: InterfaceSpec = field(default_factory=lambda: InterfaceSpec(**BT5))


def stub_node(node_id: str, capacity: int = 1_000_000, router: RouterKind | None = None) -> StubNode:
    return StubNode(id=node_id, buffer=Buffer(capacity), router=router or RouterKind("epidemic"))


@pytest.fixture
def grid10_wkt() -> str:
    lines = []
    for iy in range(10):
        row = ", ".join(f"{ix * 100} {iy * 100}" for ix in range(10))
        lines.append(f"LINESTRING ({row})")
    for ix in range(10):
        col = ", ".join(f"{ix * 100} {iy * 100}" for iy in range(10))
        lines.append(f"LINESTRING ({col})")
    return "\n".join(lines)


@pytest.fixture
def square_with_diagonal() -> MapGraph:
    return parse_wkt("LINESTRING (0 0, 1 0, 1 1, 0 1, 0 0)\nLINESTRING (0 0, 1 1)")
