"""ONE-style text settings: parsing, validation, and scenario assembly.

Settings are ``key = value`` lines with ``#`` comments. Values are scalars,
``min,max`` ranges, or comma lists; numeric reads expand decimal k/M/G
suffixes (250k = 250,000). Later duplicate keys override earlier ones and
provenance is kept for ``--explain``. Unknown keys are rejected when the
scenario is built, all of them listed at once.
"""

from __future__ import annotations

import math
import re

from .errors import ConfigurationError, SettingsParseError
from .linklayer import InterfaceSpec
from .mapmodel import MapGraph
from .mobility import MAP_SHORTEST_PATH, STATIONARY, MovementSpec
from .reports import REPORT_SETTING_NAMES
from .routing import EPIDEMIC, QUEUE_FIFO, QUEUE_RANDOM, SPRAY_AND_WAIT, RouterKind
from .simcore import GroupSpec, ReportingOptions, Scenario
from .traffic import TrafficSpec

_KNOWN_KEY_PATTERNS = [
    r"Scenario\.(name|endTime|updateInterval|seed)",
    r"MapBasedMovement\.mapFile",
    r"Group\d+\.(groupID|nrofHosts|router|bufferSize|msgTtl|movementModel|nodeLocation"
    r"|speed|waitTime|interface\.transmitSpeed|interface\.transmitRange)",
    r"SprayAndWaitRouter\.(nrofCopies|binaryMode)",
    r"Router\.sendQueueMode",
    r"Events\d+\.(prefix|interval|size|hosts|tohosts|time)",
    r"Report\.(reports|bufferSampleInterval|includeStaticBuffers)",
]
_KNOWN_KEYS = re.compile("^(" + "|".join(_KNOWN_KEY_PATTERNS) + ")$")

_SUFFIXES = {"k": 1e3, "K": 1e3, "m": 1e6, "M": 1e6, "g": 1e9, "G": 1e9}

_REQUIRED = object()


def parse_number(text: str, key: str = "<value>") -> float:
    raw = text.strip()
    scale = 1.0
    if raw and raw[-1] in _SUFFIXES:
        scale = _SUFFIXES[raw[-1]]
        raw = raw[:-1]
    try:
        return float(raw) * scale
    except ValueError:
        raise ConfigurationError(f"{key}: expected a number, got {text.strip()!r}") from None


class SettingsDoc:
    """Ordered key/value document with override provenance."""

    def __init__(self) -> None:
        self._values: dict[str, str] = {}
        self._line: dict[str, int] = {}
        self._overridden: dict[str, list[int]] = {}
        self._order: list[str] = []
        self.access_log: list[str] = []

    def set(self, key: str, value: str, line: int = 0) -> None:
        if key in self._values:
            self._overridden.setdefault(key, []).append(self._line[key])
        else:
            self._order.append(key)
        self._values[key] = value
        self._line[key] = line

    def __contains__(self, key: str) -> bool:
        return key in self._values

    def __eq__(self, other) -> bool:
        return isinstance(other, SettingsDoc) and self._values == other._values

    def keys(self) -> list[str]:
        return list(self._order)

    def raw(self, key: str) -> str:
        return self._values[key]

    def serialize(self) -> str:
        return "".join(f"{key} = {self._values[key]}\n" for key in self._order)

    def unknown_keys(self) -> list[str]:
        return [k for k in self._order if not _KNOWN_KEYS.match(k)]

    def _origin(self, key: str) -> str:
        origin = f"line {self._line[key]}"
        if key in self._overridden:
            origin += " (overrides line " + ", ".join(str(n) for n in self._overridden[key]) + ")"
        return origin

    def _fetch(self, key: str, default):
        if key in self._values:
            value = self._values[key]
            self.access_log.append(f"{key} = {value}  [{self._origin(key)}]")
            return value
        if default is _REQUIRED:
            raise ConfigurationError(f"missing mandatory key: {key}")
        self.access_log.append(f"{key} = {default}  [default]")
        return None

    def read_str(self, key: str, default=_REQUIRED) -> str:
        value = self._fetch(key, default)
        return default if value is None else value

    def read_number(self, key: str, default=_REQUIRED) -> float:
        value = self._fetch(key, default)
        return float(default) if value is None else parse_number(value, key)

    def read_int(self, key: str, default=_REQUIRED) -> int:
        value = self.read_number(key, default)
        if abs(value - round(value)) > 1e-6:
            raise ConfigurationError(f"{key}: expected an integer, got {value}")
        return int(round(value))

    def read_bool(self, key: str, default=_REQUIRED) -> bool:
        value = self._fetch(key, default)
        if value is None:
            return bool(default)
        lowered = value.lower()
        if lowered in ("true", "yes", "on", "1"):
            return True
        if lowered in ("false", "no", "off", "0"):
            return False
        raise ConfigurationError(f"{key}: expected true/false, got {value!r}")

    def read_range(self, key: str, default=_REQUIRED) -> tuple[float, float]:
        value = self._fetch(key, default)
        if value is None:
            return (float(default[0]), float(default[1]))
        parts = [p for p in value.split(",")]
        if len(parts) == 1:
            lo = hi = parse_number(parts[0], key)
        elif len(parts) == 2:
            lo, hi = parse_number(parts[0], key), parse_number(parts[1], key)
        else:
            raise ConfigurationError(f"{key}: expected 'min,max', got {value!r}")
        if lo > hi:
            raise ConfigurationError(f"{key}: range min {lo} exceeds max {hi}")
        return (lo, hi)

    def read_list(self, key: str, default=_REQUIRED) -> list[str]:
        value = self._fetch(key, default)
        if value is None:
            return list(default)
        items = [item.strip() for item in value.split(",") if item.strip()]
        if not items:
            raise ConfigurationError(f"{key}: expected a comma-separated list")
        return items

    def numbered_sections(self, stem: str) -> list[int]:
        pattern = re.compile(rf"^{stem}(\d+)\.")
        numbers = {int(m.group(1)) for k in self._values if (m := pattern.match(k))}
        return sorted(numbers)

    def explain(self) -> str:
        return "\n".join(self.access_log)


def parse_settings(text: str) -> SettingsDoc:
    """Parse settings text; raises SettingsParseError with the line number."""
    doc = SettingsDoc()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SettingsParseError(line_no, f"expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise SettingsParseError(line_no, "empty key")
        doc.set(key, value.strip(), line_no)
    return doc


_MOVEMENT_MODELS = {
    "StationaryMovement": STATIONARY,
    "ShortestPathMapBasedMovement": MAP_SHORTEST_PATH,
}

_ROUTERS = {"EpidemicRouter": EPIDEMIC, "SprayAndWaitRouter": SPRAY_AND_WAIT}

_QUEUE_MODES = {"FIFO": QUEUE_FIFO, "fifo": QUEUE_FIFO, "random": QUEUE_RANDOM}

DEFAULT_TICK = 0.1
DEFAULT_STATIC_BUFFER = 100_000_000
DEFAULT_CAR_BUFFER = 24_000_000


def _read_coord(doc: SettingsDoc, key: str) -> tuple[float, float]:
    raw = doc.read_str(key)
    parts = raw.split(",")
    if len(parts) != 2:
        raise ConfigurationError(f"{key}: expected 'x, y', got {raw!r}")
    return (parse_number(parts[0], key), parse_number(parts[1], key))


def build_scenario(doc: SettingsDoc, world: MapGraph | None) -> Scenario:
    """Assemble and validate a Scenario from a parsed settings document."""
    unknown = doc.unknown_keys()
    if unknown:
        raise ConfigurationError("unknown settings key(s): " + ", ".join(unknown))
    missing = []
    if "Scenario.endTime" not in doc:
        missing.append("Scenario.endTime")
    group_numbers = doc.numbered_sections("Group")
    if not group_numbers:
        missing.append("Group1.groupID")
    if missing:
        raise ConfigurationError("missing mandatory key(s): " + ", ".join(missing))

    name = doc.read_str("Scenario.name", "scenario")
    duration = doc.read_number("Scenario.endTime")
    tick = doc.read_number("Scenario.updateInterval", DEFAULT_TICK)
    seed = doc.read_int("Scenario.seed", 1)
    copies = doc.read_int("SprayAndWaitRouter.nrofCopies", 6)
    binary = doc.read_bool("SprayAndWaitRouter.binaryMode", False)
    queue_raw = doc.read_str("Router.sendQueueMode", "FIFO")
    if queue_raw not in _QUEUE_MODES:
        raise ConfigurationError(f"Router.sendQueueMode: expected FIFO or random, got {queue_raw!r}")

    groups = []
    for n in group_numbers:
        g = f"Group{n}"
        prefix = doc.read_str(f"{g}.groupID")
        count = doc.read_int(f"{g}.nrofHosts")
        model_name = doc.read_str(f"{g}.movementModel", "ShortestPathMapBasedMovement")
        if model_name not in _MOVEMENT_MODELS:
            raise ConfigurationError(
                f"{g}.movementModel: expected one of {sorted(_MOVEMENT_MODELS)}, got {model_name!r}")
        kind = _MOVEMENT_MODELS[model_name]
        if kind == STATIONARY:
            if f"{g}.nodeLocation" not in doc:
                raise ConfigurationError(f"missing mandatory key: {g}.nodeLocation (stationary group)")
            movement = MovementSpec(kind=STATIONARY, fixed_position=_read_coord(doc, f"{g}.nodeLocation"))
        else:
            movement = MovementSpec(kind=MAP_SHORTEST_PATH,
                                    speed_range=doc.read_range(f"{g}.speed", (2.7, 13.9)),
                                    wait_range=doc.read_range(f"{g}.waitTime", (0.0, 120.0)))
        router_name = doc.read_str(f"{g}.router", "EpidemicRouter")
        if router_name not in _ROUTERS:
            raise ConfigurationError(
                f"{g}.router: expected one of {sorted(_ROUTERS)}, got {router_name!r}")
        router = RouterKind(kind=_ROUTERS[router_name], copies=copies, binary=binary)
        default_buffer = DEFAULT_STATIC_BUFFER if kind == STATIONARY else DEFAULT_CAR_BUFFER
        groups.append(GroupSpec(
            prefix=prefix,
            count=count,
            router=router,
            buffer_capacity=doc.read_int(f"{g}.bufferSize", default_buffer),
            interface=InterfaceSpec(
                transmit_speed=doc.read_number(f"{g}.interface.transmitSpeed", 250_000),
                range=doc.read_number(f"{g}.interface.transmitRange", 200.0)),
            movement=movement,
            ttl=doc.read_number(f"{g}.msgTtl", duration),
        ))

    traffic = []
    for n in doc.numbered_sections("Events"):
        e = f"Events{n}"
        interval = doc.read_range(f"{e}.interval", (25.0, 35.0))
        size_lo, size_hi = doc.read_range(f"{e}.size", (2_200_000, 2_400_000))
        window = doc.read_range(f"{e}.time", (0.0, duration))
        traffic.append(TrafficSpec(
            id_prefix=doc.read_str(f"{e}.prefix", "M"),
            interval_range=interval,
            size_range=(int(size_lo), int(size_hi)),
            sources=tuple(doc.read_list(f"{e}.hosts")),
            destinations=tuple(doc.read_list(f"{e}.tohosts")),
            window=window,
        ))

    report_names = doc.read_list("Report.reports", list(REPORT_SETTING_NAMES))
    selected = []
    for rn in report_names:
        if rn not in REPORT_SETTING_NAMES:
            raise ConfigurationError(
                f"Report.reports: unknown report {rn!r}; expected {sorted(REPORT_SETTING_NAMES)}")
        selected.append(REPORT_SETTING_NAMES[rn])
    reporting = ReportingOptions(
        sample_interval=doc.read_number("Report.bufferSampleInterval", 10.0),
        include_static_buffers=doc.read_bool("Report.includeStaticBuffers", False),
        reports=tuple(selected),
    )

    scenario = Scenario(name=name, seed=seed, tick=tick, duration=duration, groups=groups,
                        world=world, traffic=traffic, reporting=reporting,
                        queue_mode=_QUEUE_MODES[queue_raw])
    scenario.validate()
    return scenario


def nodes_for_population(city_pop: int, national_pop: int, national_cars: int,
                         cars_per_node: int) -> int:
    """Scale a national car count down to one city, then to simulated nodes.

    Cars = round(city_pop / national_pop * national_cars), half away from
    zero; nodes = ceil(cars / cars_per_node).
    """
    if national_pop <= 0:
        raise ValueError("national population must be positive")
    if city_pop <= 0 or national_cars <= 0 or cars_per_node <= 0:
        raise ValueError("all population and car counts must be positive")
    cars = math.floor(city_pop / national_pop * national_cars + 0.5)
    return -(-cars // cars_per_node)
