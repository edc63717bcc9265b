#!/usr/bin/env python3
"""Replay the glyph mission: cover "ANTS", then adapt when "2026" appears.

Runs scenarios/dynamic_ants_2026.json through the library and reports how the
swarm absorbed the mid-mission arrivals: who moved, how long recovery took,
and what it cost.  Snapshots and the trace land in --out.
"""

import argparse
import json
from pathlib import Path

from swarmcover.cli import load_scenario
from swarmcover.metrics import summarize, write_trace
from swarmcover.protocol import run

SCENARIO = Path(__file__).resolve().parent.parent / "scenarios" / "dynamic_ants_2026.json"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--scenario", default=str(SCENARIO))
    ap.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    ap.add_argument("--out", default="glyph_out")
    args = ap.parse_args()

    sc = load_scenario(Path(args.scenario), cli_seed=args.seed)
    result = run(sc.instance, sc.config, sc.events, sc.seed)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_trace(out / "trace.csv", result.trace)

    print(f"{Path(args.scenario).name}: {result.status.value}, {result.snapshot.round} rounds")
    base = len(sc.instance.assets)
    for at_round, pre in result.pre_event_snapshots:
        fin = {r.id: r for r in result.snapshot.robots}
        changed = [
            r.id
            for r in pre.robots
            if (r.pos, r.radius) != (fin[r.id].pos, fin[r.id].radius)
        ]
        pre_sm, post_sm = summarize(pre), summarize(result.snapshot)
        print(f"  event at round {at_round}: {len(changed)}/{len(pre.robots)} robots changed")
        print(f"    cost {pre_sm.total_cost:.1f} -> {post_sm.total_cost:.1f}, "
              f"recovery took {result.snapshot.round - at_round} rounds")
        with open(out / "adaptation.json", "w") as fh:
            json.dump(
                {
                    "event_round": at_round,
                    "changed_robots": sorted(changed),
                    "new_assets": len(result.snapshot.assets) - base,
                    "pre_cost": pre_sm.total_cost,
                    "post_cost": post_sm.total_cost,
                },
                fh,
                indent=2,
            )
    sm = summarize(result.snapshot)
    print(f"  final: under={sm.undercovered_count} over={sm.overcovered_count} "
          f"undiscovered={sm.undiscovered_count}")
    return 0 if result.status.value == "feasible" else 2


if __name__ == "__main__":
    raise SystemExit(main())
