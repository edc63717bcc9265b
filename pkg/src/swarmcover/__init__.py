"""Distributed multi-coverage for robot swarms with local sensing and
communication, plus an exact centralized baseline for desk-scale instances."""

from .engine import (
    AddAssets,
    AssetSpec,
    Event,
    KillRobot,
    Params,
    Phase,
    Proposal,
    RobotState,
    WorldSnapshot,
)
from .geometry import Disk, Point, min_enclosing_disk
from .instances import Asset, Instance, Workspace, generate_uniform, preset
from .metrics import RoundMetrics, optimality_gap, summarize, total_cost
from .oracle import Placement, brute_force_optimum, solve_exact
from .protocol import Config, RunResult, RunStatus, SwapRecord, run

__version__ = "0.1.0"

__all__ = [
    "AddAssets",
    "Asset",
    "AssetSpec",
    "Config",
    "Disk",
    "Event",
    "Instance",
    "KillRobot",
    "Params",
    "Phase",
    "Placement",
    "Point",
    "Proposal",
    "RobotState",
    "RoundMetrics",
    "RunResult",
    "RunStatus",
    "SwapRecord",
    "WorldSnapshot",
    "Workspace",
    "brute_force_optimum",
    "generate_uniform",
    "min_enclosing_disk",
    "optimality_gap",
    "preset",
    "run",
    "solve_exact",
    "summarize",
    "total_cost",
]
