#!/usr/bin/env python3
"""Sweep one radius or size parameter and tabulate cost and failure fraction.

Thin front end over the `swarmcover sweep` subcommand: builds the sweep spec
JSON from flags, runs it, and leaves runs.csv / summary.csv in --out.  The
defaults reproduce the communication-radius sensitivity experiment (200
assets, 50 robots, 10 trials per value).
"""

import argparse
import json
import tempfile

from swarmcover.cli import main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--parameter", choices=("r_comm", "r_max", "n", "m"), default="r_comm")
    ap.add_argument(
        "--values",
        type=float,
        nargs="+",
        default=[10.0, 15.0, 25.0, 40.0, 55.0, 70.0],
    )
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="sweep_out")
    args = ap.parse_args()

    values = [int(v) if args.parameter in ("n", "m") else v for v in args.values]
    spec = {"parameter": args.parameter, "values": values, "trials": args.trials}
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(spec, fh)
        spec_path = fh.name
    return cli_main(["sweep", spec_path, "--out", args.out, "--seed", str(args.seed)])


if __name__ == "__main__":
    raise SystemExit(main())
