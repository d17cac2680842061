"""Command-line front end: run, batch, validate, describe-map, preset.

Exit codes: 0 success, 1 configuration/scenario errors, 2 I/O errors,
3 internal invariant violations. The default output directory comes from
the DRIFTNET_OUT environment variable, falling back to ./reports.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor

from . import presets
from .config import SettingsDoc, build_scenario, parse_settings
from .errors import ConfigurationError, DriftnetError, InternalError, MapParseError, WorldError
from .mapmodel import MapGraph, builtin_map, parse_wkt_file
from .reports import write_reports
from .simcore import SimulationEngine

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_INTERNAL = 3


def _default_out() -> str:
    return os.environ.get("DRIFTNET_OUT", "reports")


def _load_map(source: str, snap_epsilon: float = 0.0) -> MapGraph:
    if source.startswith("builtin:"):
        return builtin_map(source[len("builtin:"):])
    return parse_wkt_file(source, snap_epsilon)


def _resolve_map(doc: SettingsDoc, flag_value: str | None, snap_epsilon: float = 0.0) -> MapGraph | None:
    source = flag_value
    if source is None and "MapBasedMovement.mapFile" in doc:
        source = doc.read_str("MapBasedMovement.mapFile")
    return _load_map(source, snap_epsilon) if source else None


def _read_settings(path: str) -> SettingsDoc:
    with open(path, encoding="utf-8") as fh:
        return parse_settings(fh.read())


def _cmd_run(args) -> int:
    doc = _read_settings(args.settings)
    world = _resolve_map(doc, args.map, args.snap_epsilon)
    scenario = build_scenario(doc, world)
    if args.seed is not None:
        scenario.seed = args.seed
    if args.explain:
        print(doc.explain())
    engine = SimulationEngine(scenario)
    bundle = engine.run()
    paths = write_reports(bundle, args.out, scenario.reporting.reports)
    stats = bundle.message_stats
    print(f"{scenario.name} seed={scenario.seed}: created={stats.created} "
          f"delivered={stats.delivered} delivery_prob={stats.delivery_prob:.4f}")
    for path in paths:
        print(f"  {path}")
    return EXIT_OK


def _parse_seed_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            start, stop = int(lo), int(hi)
        except ValueError:
            raise ConfigurationError(f"--seeds: expected 'a..b', got {text!r}") from None
        if stop < start:
            raise ConfigurationError(f"--seeds: empty range {text!r}")
        return list(range(start, stop + 1))
    try:
        return [int(text)]
    except ValueError:
        raise ConfigurationError(f"--seeds: expected 'a..b' or an integer, got {text!r}") from None


def _batch_worker(settings_text: str, map_source: str | None, seed: int, out_dir: str) -> str:
    doc = parse_settings(settings_text)
    if map_source is None and "MapBasedMovement.mapFile" in doc:
        map_source = doc.read_str("MapBasedMovement.mapFile")
    world = _load_map(map_source) if map_source else None
    scenario = build_scenario(doc, world)
    scenario.seed = seed
    bundle = SimulationEngine(scenario).run()
    write_reports(bundle, out_dir, scenario.reporting.reports)
    return out_dir


def _cmd_batch(args) -> int:
    with open(args.settings, encoding="utf-8") as fh:
        settings_text = fh.read()
    doc = parse_settings(settings_text)
    map_source = args.map
    if map_source is None and "MapBasedMovement.mapFile" in doc:
        map_source = doc.read_str("MapBasedMovement.mapFile")
    build_scenario(doc, _load_map(map_source) if map_source else None)  # fail fast

    seeds = _parse_seed_range(args.seeds)
    jobs = [(seed, os.path.join(args.out, f"seed-{seed}")) for seed in seeds]
    if args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            futures = [pool.submit(_batch_worker, settings_text, map_source, seed, out)
                       for seed, out in jobs]
            for future in futures:
                future.result()
    else:
        for seed, out in jobs:
            _batch_worker(settings_text, map_source, seed, out)
    print(f"batch complete: {len(seeds)} runs under {args.out}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    doc = _read_settings(args.settings)
    world = _resolve_map(doc, args.map, args.snap_epsilon)
    scenario = build_scenario(doc, world)
    print(f"OK: scenario {scenario.name!r}, {sum(g.count for g in scenario.groups)} nodes, "
          f"{scenario.duration:.0f} s horizon, tick {scenario.tick} s")
    return EXIT_OK


def _cmd_describe_map(args) -> int:
    graph = _load_map(args.map, args.snap_epsilon)
    print(f"vertices: {graph.n_vertices}")
    print(f"edges: {graph.n_edges}")
    print(f"components: {graph.n_components()}")
    return EXIT_OK


def _cmd_preset(args) -> int:
    if args.action == "list":
        for name in presets.preset_names():
            print(name)
        for alias, target in presets.ALIASES.items():
            print(f"{alias} -> {target}")
        return EXIT_OK
    text = presets.preset_text(args.name)
    out = args.out or f"{args.name}.settings"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="driftnet",
                                     description="Deterministic DTN simulator (Epidemic / Spray-and-Wait)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one scenario and write reports")
    p_run.add_argument("-c", "--settings", required=True)
    p_run.add_argument("-m", "--map", default=None, help="WKT file or builtin:<name>; overrides settings")
    p_run.add_argument("-o", "--out", default=_default_out())
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--explain", action="store_true", help="echo resolved settings with provenance")
    p_run.add_argument("--snap-epsilon", type=float, default=0.0, help="merge vertices within this distance when parsing WKT (default: exact)")
    p_run.set_defaults(func=_cmd_run)

    p_batch = sub.add_parser("batch", help="run one scenario across a seed range")
    p_batch.add_argument("-c", "--settings", required=True)
    p_batch.add_argument("-m", "--map", default=None)
    p_batch.add_argument("-o", "--out", default=_default_out())
    p_batch.add_argument("--seeds", required=True, help="inclusive range, e.g. 1..10")
    p_batch.add_argument("--parallel", type=int, default=1)
    p_batch.set_defaults(func=_cmd_batch)

    p_val = sub.add_parser("validate", help="check a settings file without running")
    p_val.add_argument("-c", "--settings", required=True)
    p_val.add_argument("-m", "--map", default=None)
    p_val.add_argument("--snap-epsilon", type=float, default=0.0, help="merge vertices within this distance when parsing WKT (default: exact)")
    p_val.set_defaults(func=_cmd_validate)

    p_desc = sub.add_parser("describe-map", help="vertex/edge/component counts of a map")
    p_desc.add_argument("map", help="WKT file or builtin:<name>")
    p_desc.add_argument("--snap-epsilon", type=float, default=0.0, help="merge vertices within this distance when parsing WKT (default: exact)")
    p_desc.set_defaults(func=_cmd_describe_map)

    p_preset = sub.add_parser("preset", help="list or emit bundled Palu presets")
    preset_sub = p_preset.add_subparsers(dest="action", required=True)
    p_list = preset_sub.add_parser("list")
    p_list.set_defaults(func=_cmd_preset, action="list")
    p_emit = preset_sub.add_parser("emit")
    p_emit.add_argument("name")
    p_emit.add_argument("-o", "--out", default=None)
    p_emit.set_defaults(func=_cmd_preset, action="emit")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, WorldError, MapParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InternalError, AssertionError, DriftnetError, Exception) as exc:  # noqa: BLE001
        print(f"internal error: {exc}", file=sys.stderr)
        traceback.print_exc()
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
