"""Synchronous round engine: immutable world snapshots, local sensing and
communication queries, event injection, and the deterministic step cycle.

A round evaluates every alive robot's decision rule against the same frozen
snapshot, merges the proposals in ascending robot id, applies the events due
at the new round number, and publishes the next snapshot together with its
recomputed metrics.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

from .geometry import Point, dist
from .instances import Asset, Instance, Workspace
from .metrics import RoundMetrics, summarize


class Phase(Enum):
    EXPLORE = "explore"
    OPTIMIZE = "optimize"
    REFINE = "refine"


@dataclass(frozen=True)
class Params:
    """Instance parameters carried along with every snapshot."""

    workspace: Workspace
    m: int
    r_comm: float
    r_max: float

    @classmethod
    def from_instance(cls, instance: Instance) -> "Params":
        return cls(instance.workspace, instance.m, instance.r_comm, instance.r_max)


@dataclass(frozen=True)
class RobotState:
    id: int
    pos: Point
    radius: float
    assigned: frozenset[int]
    alive: bool


@dataclass(frozen=True)
class AssetSpec:
    """An asset waiting to be injected; its id is assigned on application."""

    pos: Point
    kappa: int

    def __post_init__(self) -> None:
        if self.kappa < 1:
            raise ValueError(f"kappa must be >= 1, got {self.kappa}")


@dataclass(frozen=True)
class AddAssets:
    assets: tuple[AssetSpec, ...]


@dataclass(frozen=True)
class KillRobot:
    robot_id: int


@dataclass(frozen=True)
class Event:
    at_round: int
    action: AddAssets | KillRobot

    def __post_init__(self) -> None:
        if self.at_round < 0:
            raise ValueError(f"event round must be >= 0, got {self.at_round}")


@dataclass(frozen=True)
class Proposal:
    """A robot's requested next state: new disk plus new assigned set."""

    pos: Point
    radius: float
    assigned: frozenset[int]


DecideFn = Callable[["WorldSnapshot", int], Optional[Proposal]]


@dataclass(frozen=True)
class WorldSnapshot:
    """Immutable world state at the start of a round.

    Robots are ordered by id; asset ids are dense, so assets[i].id == i.
    """

    round: int
    phase: Phase
    robots: tuple[RobotState, ...]
    assets: tuple[Asset, ...]
    params: Params

    def robot(self, rid: int) -> RobotState:
        r = self.robots[rid]
        if r.id != rid:
            raise KeyError(f"no robot with id {rid}")
        return r

    def asset(self, aid: int) -> Asset:
        return self.assets[aid]


def sense(robot: RobotState, assets: Sequence[Asset], r_max: float) -> set[int]:
    """Ids of assets within the closed sensing ball of radius r_max."""
    thr2 = r_max * r_max
    px, py = robot.pos.x, robot.pos.y
    out = set()
    for a in assets:
        dx = a.pos.x - px
        dy = a.pos.y - py
        if dx * dx + dy * dy <= thr2:
            out.add(a.id)
    return out


def neighbors(snapshot: WorldSnapshot, rid: int) -> set[int]:
    """Alive robots within r_comm of alive robot rid (excluding itself)."""
    me = snapshot.robot(rid)
    if not me.alive:
        raise ValueError(f"robot {rid} is not alive")
    thr2 = snapshot.params.r_comm ** 2
    out = set()
    for r in snapshot.robots:
        if r.id == rid or not r.alive:
            continue
        dx = r.pos.x - me.pos.x
        dy = r.pos.y - me.pos.y
        if dx * dx + dy * dy <= thr2:
            out.add(r.id)
    return out


def neighbor_map(snapshot: WorldSnapshot) -> dict[int, tuple[int, ...]]:
    """Neighbor ids (sorted) for every alive robot, computed in one sweep."""
    alive = [r for r in snapshot.robots if r.alive]
    thr2 = snapshot.params.r_comm ** 2
    nbrs: dict[int, list[int]] = {r.id: [] for r in alive}
    for i, a in enumerate(alive):
        for b in alive[i + 1 :]:
            dx = a.pos.x - b.pos.x
            dy = a.pos.y - b.pos.y
            if dx * dx + dy * dy <= thr2:
                nbrs[a.id].append(b.id)
                nbrs[b.id].append(a.id)
    return {rid: tuple(sorted(ids)) for rid, ids in nbrs.items()}


def knowledge_set(snapshot: WorldSnapshot, rid: int) -> set[int]:
    """Everything robot rid can reason about: sensed assets, own assignments,
    and the assignment lists its neighbors share."""
    me = snapshot.robot(rid)
    out = sense(me, snapshot.assets, snapshot.params.r_max)
    out.update(me.assigned)
    for j in neighbors(snapshot, rid):
        out.update(snapshot.robots[j].assigned)
    return out


def apply_events(snapshot: WorldSnapshot, events: Iterable[Event]) -> WorldSnapshot:
    """Apply events to a snapshot without advancing the round counter.

    New assets receive the next dense ids in payload order; killing a robot
    marks it dead and empties its assignment."""
    robots = list(snapshot.robots)
    assets = snapshot.assets
    for ev in events:
        if isinstance(ev.action, AddAssets):
            base = len(assets)
            assets = assets + tuple(
                Asset(base + k, spec.pos, spec.kappa) for k, spec in enumerate(ev.action.assets)
            )
        else:
            rid = ev.action.robot_id
            if 0 <= rid < len(robots) and robots[rid].alive:
                robots[rid] = replace(robots[rid], alive=False, radius=0.0, assigned=frozenset())
    if robots == list(snapshot.robots) and assets is snapshot.assets:
        return snapshot
    return replace(snapshot, robots=tuple(robots), assets=assets)


def step(
    snapshot: WorldSnapshot,
    decide: DecideFn,
    events: Sequence[Event] = (),
    *,
    next_phase: Optional[Phase] = None,
    order: Optional[Sequence[int]] = None,
) -> tuple[WorldSnapshot, RoundMetrics]:
    """Advance the world by one round.

    `decide` is called once per alive robot against the immutable snapshot
    (in `order` if given, which must not change the outcome of a correct
    decision rule); proposals are merged in ascending robot id, due events
    are applied, and the new snapshot is published with fresh metrics.
    """
    alive_ids = [r.id for r in snapshot.robots if r.alive]
    eval_order = list(order) if order is not None else alive_ids
    if sorted(eval_order) != sorted(alive_ids):
        raise ValueError("order must be a permutation of the alive robot ids")
    proposals: dict[int, Proposal] = {}
    for rid in eval_order:
        prop = decide(snapshot, rid)
        if prop is not None:
            proposals[rid] = prop
    robots = list(snapshot.robots)
    max_disp = 0.0
    for rid in sorted(proposals):
        prop = proposals[rid]
        old = robots[rid]
        max_disp = max(max_disp, dist(old.pos, prop.pos))
        robots[rid] = replace(old, pos=prop.pos, radius=prop.radius, assigned=prop.assigned)
    merged = replace(
        snapshot,
        round=snapshot.round + 1,
        phase=next_phase if next_phase is not None else snapshot.phase,
        robots=tuple(robots),
    )
    merged = apply_events(merged, events)
    return merged, summarize(merged, max_displacement=max_disp)
