"""Command-line benchmark harness.

Subcommands:

* ``generate``  — build an instance (preset or uniform) and save it
* ``run``       — execute a scenario, write trace + snapshots + result
* ``sweep``     — sensitivity sweep over one parameter, emit summary CSV
* ``compare``   — distributed cost vs the exact solver on a tiny instance
* ``dynamic``   — scenario with events, report adaptation locality
* ``oracle``    — exact solver only, emit the placement as JSON

Exit codes: 0 feasible, 2 infeasible (or iteration cap), 1 I/O or
validation error.  All randomness flows from a single seed: ``--seed``
wins, else the scenario config seed, else 0.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import statistics
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

from .engine import AddAssets, AssetSpec, Event, KillRobot, WorldSnapshot
from .geometry import Point
from .instances import (
    DEFAULT_R_COMM,
    DEFAULT_R_MAX,
    KAPPA_DEFAULT_CHOICES,
    Instance,
    Workspace,
    generate_uniform,
    instance_from_dict,
    preset,
    save_instance,
)
from .metrics import optimality_gap, summarize, write_trace
from .oracle import SOLVE_MAX_ASSETS, SOLVE_MAX_ROBOTS, solve_exact
from .protocol import Config, RunResult, RunStatus, run

_CONFIG_KEYS = {
    "lambda": "lam",
    "lam": "lam",
    "tol": "tol",
    "eps": "eps",
    "tau": "tau",
    "boundary_factor": "boundary_factor",
    "max_iters_phase1": "max_iters_phase1",
    "max_iters_phase2": "max_iters_phase2",
    "max_swap_sweeps": "max_swap_sweeps",
    "max_iters_phase3": "max_iters_phase3",
}


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    instance: Instance
    events: tuple[Event, ...]
    config: Config
    seed: int


def _parse_config(data: dict[str, Any]) -> tuple[Config, Optional[int]]:
    kwargs: dict[str, Any] = {}
    seed: Optional[int] = None
    for key, value in data.items():
        if key == "seed":
            seed = int(value)
            continue
        if key not in _CONFIG_KEYS:
            raise ScenarioError(f"unknown config key: {key!r}")
        kwargs[_CONFIG_KEYS[key]] = value
    return Config(**kwargs), seed


def _parse_events(items: Sequence[dict[str, Any]]) -> tuple[Event, ...]:
    events = []
    for item in items:
        at_round = int(item["at_round"])
        kind = item["kind"]
        payload = item.get("payload")
        if kind == "add_assets":
            if not isinstance(payload, list):
                raise ScenarioError("add_assets payload must be a list of {x, y, kappa}")
            specs = tuple(
                AssetSpec(Point(float(a["x"]), float(a["y"])), int(a.get("kappa", 1)))
                for a in payload
            )
            events.append(Event(at_round, AddAssets(specs)))
        elif kind == "kill_robot":
            rid = payload["robot_id"] if isinstance(payload, dict) else payload
            events.append(Event(at_round, KillRobot(int(rid))))
        else:
            raise ScenarioError(f"unknown event kind: {kind!r}")
    return tuple(events)


def load_scenario(
    path: Path, cli_seed: Optional[int] = None, config_path: Optional[Path] = None
) -> Scenario:
    """Parse a scenario JSON file into an instance, events, and config.

    A bare instance JSON (with a workspace field and no instance reference)
    is accepted as an event-free scenario.
    """
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: scenario must be a JSON object")

    cfg_data = dict(data.get("config", {}))
    if config_path is not None:
        with open(config_path) as fh:
            cfg_data.update(json.load(fh))
    config, cfg_seed = _parse_config(cfg_data)
    seed = cli_seed if cli_seed is not None else (cfg_seed if cfg_seed is not None else 0)

    base_dir = path.parent
    if "instance" in data:
        inst = instance_from_dict(data["instance"], base_dir, default_seed=seed)
    elif "instance_file" in data:
        with open(base_dir / data["instance_file"]) as fh:
            inst_data = json.load(fh)
        inst = instance_from_dict(inst_data, (base_dir / data["instance_file"]).parent, default_seed=seed)
    elif "workspace" in data:
        inst = instance_from_dict(data, base_dir, default_seed=seed)
    else:
        raise ScenarioError(f"{path}: scenario needs an instance, instance_file, or inline instance")

    events = _parse_events(data.get("events", []))
    return Scenario(inst, events, config, seed)


def _snapshot_dict(snapshot: WorldSnapshot) -> dict[str, Any]:
    sm = summarize(snapshot)
    return {
        "round": snapshot.round,
        "phase": snapshot.phase.value,
        "robots": [
            {
                "id": r.id,
                "x": r.pos.x,
                "y": r.pos.y,
                "radius": r.radius,
                "alive": r.alive,
                "assigned": sorted(r.assigned),
            }
            for r in snapshot.robots
        ],
        "metrics": {
            "undercovered": sm.undercovered_count,
            "overcovered": sm.overcovered_count,
            "total_cost": sm.total_cost,
            "undiscovered": sm.undiscovered_count,
        },
    }


_EXIT_BY_STATUS = {
    RunStatus.FEASIBLE: 0,
    RunStatus.INFEASIBLE: 2,
    RunStatus.ITERATION_CAP: 2,
}


def _write_run_outputs(result: RunResult, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_trace(out / "trace.csv", result.trace)
    with open(out / "final_snapshot.json", "w") as fh:
        json.dump(_snapshot_dict(result.snapshot), fh, indent=2)
        fh.write("\n")
    sm = summarize(result.snapshot)
    payload = {
        "status": result.status.value,
        "rounds": result.snapshot.round,
        "total_cost": sm.total_cost,
        "undercovered": sm.undercovered_count,
        "overcovered": sm.overcovered_count,
        "undiscovered": sm.undiscovered_count,
        "swaps": len(result.swaps),
        "time_to_feasibility": result.timings.time_to_feasibility,
        "time_to_refinement": result.timings.time_to_refinement,
        "total_seconds": result.timings.total_seconds,
    }
    with open(out / "result.json", "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def cmd_generate(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else 0
    if args.preset:
        if args.param is None:
            raise ScenarioError("--param is required with --preset")
        inst = preset(args.preset, args.param, seed)
    else:
        if args.n is None or args.m is None:
            raise ScenarioError("either --preset/--param or --n/--m must be given")
        ws = Workspace(*args.workspace)
        assets = generate_uniform(args.n, ws, tuple(args.kappa), seed)
        inst = Instance(ws, assets, args.m, args.r_comm, args.r_max)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    save_instance(out / "instance.json", inst)
    print(f"instance with n={inst.n} m={inst.m} written to {out / 'instance.json'}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(Path(args.scenario), args.seed, _opt_path(args.config))
    result = run(scenario.instance, scenario.config, scenario.events, scenario.seed)
    _write_run_outputs(result, Path(args.out or "."))
    sm = summarize(result.snapshot)
    print(
        f"status={result.status.value} rounds={result.snapshot.round} "
        f"cost={sm.total_cost:.2f} undercovered={sm.undercovered_count}"
    )
    return _EXIT_BY_STATUS[result.status]


_SWEEP_PARAMS = ("r_comm", "r_max", "n", "m")


def cmd_sweep(args: argparse.Namespace) -> int:
    with open(args.sweep) as fh:
        spec = json.load(fh)
    parameter = spec.get("parameter")
    if parameter not in _SWEEP_PARAMS:
        raise ScenarioError(f"sweep parameter must be one of {_SWEEP_PARAMS}")
    values = spec.get("values")
    if not values:
        raise ScenarioError("sweep values must be a nonempty list")
    trials = int(spec.get("trials", len(spec.get("seeds", [])) or 1))
    seeds = spec.get("seeds")
    if seeds is None:
        base_seed = args.seed if args.seed is not None else 0
        seeds = [base_seed + t for t in range(trials)]
    if len(seeds) != trials:
        raise ScenarioError("sweep needs exactly one seed per trial")
    base = dict(spec.get("base", {}))
    base.setdefault("n", 200)
    base.setdefault("m", 50)
    base.setdefault("r_comm", DEFAULT_R_COMM)
    base.setdefault("r_max", DEFAULT_R_MAX)
    ws_vals = base.get("workspace", [0.0, 100.0, 0.0, 100.0])
    kappa = tuple(base.get("kappa_choices", KAPPA_DEFAULT_CHOICES))
    config, _ = _parse_config(dict(spec.get("config", {})))

    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for value in values:
        for trial, seed in enumerate(seeds):
            p = {k: base[k] for k in ("n", "m", "r_comm", "r_max")}
            p[parameter] = value
            ws = Workspace(*ws_vals)
            assets = generate_uniform(int(p["n"]), ws, kappa, int(seed))
            inst = Instance(ws, tuple(assets), int(p["m"]), float(p["r_comm"]), float(p["r_max"]))
            result = run(inst, config, (), int(seed))
            sm = summarize(result.snapshot)
            ok = result.status is RunStatus.FEASIBLE and sm.undercovered_count == 0
            rows.append(
                {
                    "parameter": parameter,
                    "value": value,
                    "trial": trial,
                    "seed": seed,
                    "status": result.status.value,
                    "feasible": int(ok),
                    "total_cost": sm.total_cost,
                    "undercovered": sm.undercovered_count,
                    "time_to_feasibility": result.timings.time_to_feasibility,
                    "total_seconds": result.timings.total_seconds,
                }
            )

    with open(out / "runs.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)

    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            [
                "parameter",
                "value",
                "trials",
                "failure_fraction",
                "median_cost",
                "min_cost",
                "max_cost",
                "median_seconds",
                "min_seconds",
                "max_seconds",
            ]
        )
        for value in values:
            grp = [r for r in rows if r["value"] == value]
            ok = [r for r in grp if r["feasible"]]
            fail = 1.0 - len(ok) / len(grp)
            costs = [r["total_cost"] for r in ok]
            secs = [r["total_seconds"] for r in grp]
            w.writerow(
                [
                    parameter,
                    value,
                    len(grp),
                    f"{fail:.4f}",
                    f"{statistics.median(costs):.6f}" if costs else "",
                    f"{min(costs):.6f}" if costs else "",
                    f"{max(costs):.6f}" if costs else "",
                    f"{statistics.median(secs):.6f}",
                    f"{min(secs):.6f}",
                    f"{max(secs):.6f}",
                ]
            )
            print(f"{parameter}={value}: failure fraction {fail:.2f} over {len(grp)} trials")
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    scenario = load_scenario(Path(args.scenario), args.seed, _opt_path(args.config))
    inst = scenario.instance
    if inst.n > SOLVE_MAX_ASSETS or inst.m > SOLVE_MAX_ROBOTS:
        print(
            f"refusing: exact solver is limited to {SOLVE_MAX_ASSETS} assets "
            f"and {SOLVE_MAX_ROBOTS} robots (got n={inst.n}, m={inst.m})",
            file=sys.stderr,
        )
        return 1
    result = run(inst, scenario.config, scenario.events, scenario.seed)
    sm = summarize(result.snapshot)
    placement = solve_exact(inst.assets, inst.m, inst.r_max)
    dist_ok = result.status is RunStatus.FEASIBLE and sm.undercovered_count == 0
    print(f"distributed: status={result.status.value} cost={sm.total_cost:.6f}")
    print(f"exact:       feasible={placement.feasible} cost={placement.total_cost:.6f}")
    if not (dist_ok and placement.feasible):
        return 2
    gap = optimality_gap(sm.total_cost, placement.total_cost)
    if math.isfinite(gap):
        print(f"gap:         {gap:.2f}%")
    else:
        print("gap:         undefined (zero-cost optimum)")
    return 0


def cmd_dynamic(args: argparse.Namespace) -> int:
    scenario = load_scenario(Path(args.scenario), args.seed, _opt_path(args.config))
    if not scenario.events:
        raise ScenarioError("dynamic scenarios must declare at least one event")
    result = run(scenario.instance, scenario.config, scenario.events, scenario.seed)
    out = Path(args.out or ".")
    _write_run_outputs(result, out)

    pre = result.pre_event_snapshots[-1][1] if result.pre_event_snapshots else None
    changed = []
    if pre is not None:
        final_robots = {r.id: r for r in result.snapshot.robots}
        for r in pre.robots:
            f = final_robots[r.id]
            if r.pos != f.pos or r.radius != f.radius or r.alive != f.alive:
                changed.append(r.id)
    summary = {
        "events": len(scenario.events),
        "pre_event_round": result.pre_event_snapshots[-1][0] if pre is not None else None,
        "changed_robots": changed,
        "changed_count": len(changed),
        "status": result.status.value,
    }
    with open(out / "dynamic_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    if pre is not None:
        with open(out / "pre_event_snapshot.json", "w") as fh:
            json.dump(_snapshot_dict(pre), fh, indent=2)
            fh.write("\n")
    print(f"status={result.status.value} robots changed after event: {len(changed)}")
    return _EXIT_BY_STATUS[result.status]


def cmd_oracle(args: argparse.Namespace) -> int:
    scenario = load_scenario(Path(args.scenario), args.seed, _opt_path(args.config))
    inst = scenario.instance
    placement = solve_exact(inst.assets, inst.m, inst.r_max)
    payload = {
        "feasible": placement.feasible,
        "total_cost": placement.total_cost,
        "disks": [
            {"x": d.center.x, "y": d.center.y, "radius": d.radius} for d in placement.disks
        ],
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "placement.json", "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    print(json.dumps(payload))
    return 0 if placement.feasible else 2


def _opt_path(value: Optional[str]) -> Optional[Path]:
    return Path(value) if value else None


def _workspace_arg(text: str) -> tuple[float, float, float, float]:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("workspace must be x_min,x_max,y_min,y_max")
    return parts[0], parts[1], parts[2], parts[3]


def _kappa_arg(text: str) -> list[int]:
    return [int(v) for v in text.split(",")]


def _add_global_flags(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps an unused flag from writing into the namespace, so a
    # value parsed before the subcommand survives the subparser pass.
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="master seed (overrides scenario config)")
    parser.add_argument("--out", default=argparse.SUPPRESS,
                        help="output directory (default: cwd)")
    parser.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON file with config overrides")


def build_parser() -> argparse.ArgumentParser:
    # The subcommands share one parent so the flags work in either position.
    # The root gets its own copies: set_defaults rewrites the default on any
    # action whose dest matches, and with a shared parent that rewrite would
    # reach the subparsers and make them clobber root-parsed values.
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common)

    parser = argparse.ArgumentParser(prog="swarmcover", description=__doc__.split("\n")[0])
    _add_global_flags(parser)
    parser.set_defaults(seed=None, out=None, config=None)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build and save an instance", parents=[common])
    g.add_argument("--preset", choices=["uni_sm", "uni_fix_n"], default=None)
    g.add_argument("--param", type=int, default=None, help="preset parameter (n or m)")
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--m", type=int, default=None)
    g.add_argument("--r-comm", type=float, default=DEFAULT_R_COMM)
    g.add_argument("--r-max", type=float, default=DEFAULT_R_MAX)
    g.add_argument("--kappa", type=_kappa_arg, default=list(KAPPA_DEFAULT_CHOICES))
    g.add_argument("--workspace", type=_workspace_arg, default=(0.0, 100.0, 0.0, 100.0))
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="execute a scenario", parents=[common])
    r.add_argument("scenario")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="sensitivity sweep", parents=[common])
    s.add_argument("sweep")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("compare", help="distributed vs exact solver", parents=[common])
    c.add_argument("scenario")
    c.set_defaults(func=cmd_compare)

    d = sub.add_parser("dynamic", help="scenario with events, adaptation report", parents=[common])
    d.add_argument("scenario")
    d.set_defaults(func=cmd_dynamic)

    o = sub.add_parser("oracle", help="exact solver only", parents=[common])
    o.add_argument("scenario")
    o.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
