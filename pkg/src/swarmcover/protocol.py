"""The three-phase coverage protocol and its synchronous run loop.

Phase 1 (explore) spreads robots with a grid-seeded Lloyd iteration over the
assets each robot senses, then locks in the minimum enclosing disk of what it
kept.  Phase 2 (optimize) closes coverage deficits through neighborhood
auctions on marginal disk-area cost, falls back to a capacity-based direct
assignment when the auctions stall, and finishes by shaving cost with pairwise
boundary-asset transfers.  Phase 3 (refine) walks back overcoverage with
guarded removals that must strictly shrink the remover's disk.

Every decision is a pure function of the published snapshot, the config, and
the run seed, so runs are deterministic end to end.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Optional, Sequence

from .engine import (
    AddAssets,
    Event,
    Params,
    Phase,
    Proposal,
    RobotState,
    WorldSnapshot,
    apply_events,
    neighbor_map,
    step,
)
from .geometry import (
    CONTAINMENT_TOL,
    Disk,
    Point,
    dist,
    dist2,
    enclose_with_anchor,
    min_enclosing_disk,
    min_enclosing_disk_or,
)
from .instances import Asset, Instance, grid_partition, initial_positions
from .metrics import RoundMetrics, summarize

INFEASIBLE = math.inf

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


def h64(iteration: int, asset_id: int, robot_id: int) -> int:
    """64-bit FNV-1a over (iteration, asset_id, robot_id), each encoded as
    8 little-endian bytes.  Used for symmetry breaking in auctions and
    removal conflicts."""
    h = _FNV_OFFSET
    for b in (
        iteration.to_bytes(8, "little")
        + asset_id.to_bytes(8, "little")
        + robot_id.to_bytes(8, "little")
    ):
        h ^= b
        h = (h * _FNV_PRIME) & _U64
    return h


@dataclass(frozen=True)
class Config:
    """Algorithm knobs; defaults follow the benchmark setup."""

    lam: float = 2.0                # grid aspect penalty
    tol: float = 0.01               # Lloyd convergence threshold (m)
    eps: float = 0.01               # relative tie window for auction bids
    tau: float = 0.005              # minimum fractional area gain per swap
    boundary_factor: float = 0.9    # how close to the rim a swapped asset must be
    max_iters_phase1: int = 200
    max_iters_phase2: Optional[int] = None  # None means 10 * m
    max_swap_sweeps: int = 50
    max_iters_phase3: int = 100

    def __post_init__(self) -> None:
        for name in ("lam", "tol", "eps", "tau", "boundary_factor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("max_iters_phase1", "max_swap_sweeps", "max_iters_phase3"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.max_iters_phase2 is not None and self.max_iters_phase2 < 1:
            raise ValueError("max_iters_phase2 must be >= 1 when given")

    def phase2_cap(self, m: int) -> int:
        return self.max_iters_phase2 if self.max_iters_phase2 is not None else 10 * m


@dataclass(frozen=True)
class Bid:
    asset_id: int
    bidder_id: int
    delta: float
    feasible: bool


@dataclass(frozen=True)
class SwapDecision:
    accepted: bool
    reduction: float
    donor_pos: Point
    donor_radius: float
    receiver_pos: Point
    receiver_radius: float


@dataclass(frozen=True)
class SwapRecord:
    """One executed transfer, for monotonicity audits."""

    round: int
    donor: int
    receiver: int
    asset_id: int
    pair_area_before: float
    pair_area_after: float


class RunStatus(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True)
class Timings:
    time_to_feasibility: Optional[float]
    time_to_refinement: Optional[float]
    total_seconds: float


@dataclass(frozen=True)
class RunResult:
    status: RunStatus
    snapshot: WorldSnapshot
    trace: tuple[RoundMetrics, ...]
    timings: Timings
    swaps: tuple[SwapRecord, ...]
    pre_event_snapshots: tuple[tuple[int, WorldSnapshot], ...]


class _View:
    """Caches shared by the decision rules within one round.

    Everything here is derived from the snapshot alone, so per-robot decisions
    that consult the view stay pure and order-independent.
    """

    def __init__(self, snapshot: WorldSnapshot):
        self.snapshot = snapshot
        self.params = snapshot.params
        self.assets = snapshot.assets
        self.alive = [r for r in snapshot.robots if r.alive]
        self.alive_ids = [r.id for r in self.alive]
        self.nbrs = neighbor_map(snapshot)
        r_max2 = self.params.r_max ** 2
        self.sensed: dict[int, set[int]] = {}
        for r in self.alive:
            px, py = r.pos.x, r.pos.y
            got = set()
            for a in self.assets:
                dx = a.pos.x - px
                dy = a.pos.y - py
                if dx * dx + dy * dy <= r_max2:
                    got.add(a.id)
            self.sensed[r.id] = got
        self.knowledge: dict[int, set[int]] = {}
        self.cover: dict[int, dict[int, int]] = {}
        by_id = {r.id: r for r in self.alive}
        for r in self.alive:
            know = set(self.sensed[r.id])
            know.update(r.assigned)
            counts: dict[int, int] = {}
            for p in r.assigned:
                counts[p] = 1
            for j in self.nbrs[r.id]:
                aj = by_id[j].assigned
                know.update(aj)
                for p in aj:
                    counts[p] = counts.get(p, 0) + 1
            self.knowledge[r.id] = know
            self.cover[r.id] = counts
        self.robot = {r.id: r for r in snapshot.robots}

    def local_coverage(self, rid: int, asset_id: int) -> int:
        return self.cover[rid].get(asset_id, 0)

    def positions(self, assigned: Sequence[int]) -> list[Point]:
        return [self.assets[a].pos for a in assigned]


def _finalize_radius(radius: float, r_max: float) -> float:
    # Consolidated disks may exceed r_max by a rounding ulp when support
    # points sit exactly at the cap; clamp within the containment slack.
    if radius > r_max + CONTAINMENT_TOL:
        raise RuntimeError(f"consolidated radius {radius} exceeds r_max {r_max}")
    return min(radius, r_max)


# ---------------------------------------------------------------------------
# Phase 1: exploration


def lloyd_round(snapshot: WorldSnapshot, seed: int = 0) -> dict[int, Proposal]:
    """One Lloyd iteration: assets are claimed by the nearest sensing robot,
    robots move to the centroid of their cell, radius capped at r_max."""
    view = _View(snapshot)
    r_max = snapshot.params.r_max
    cells: dict[int, list[int]] = {}
    for a in snapshot.assets:
        best: tuple[float, int] | None = None
        for r in view.alive:
            d2 = dist2(r.pos, a.pos)
            if d2 <= r_max * r_max and (best is None or (d2, r.id) < best):
                best = (d2, r.id)
        if best is not None:
            cells.setdefault(best[1], []).append(a.id)
    proposals: dict[int, Proposal] = {}
    for r in view.alive:
        cell = cells.get(r.id)
        if not cell:
            proposals[r.id] = Proposal(r.pos, 0.0, frozenset())
            continue
        xs = sum(snapshot.assets[a].pos.x for a in cell)
        ys = sum(snapshot.assets[a].pos.y for a in cell)
        centroid = Point(xs / len(cell), ys / len(cell))
        maxd = max(dist(centroid, snapshot.assets[a].pos) for a in cell)
        proposals[r.id] = Proposal(centroid, min(maxd, r_max), frozenset(cell))
    return proposals


def phase1_converged(prev: WorldSnapshot, nxt: WorldSnapshot, tol: float) -> bool:
    """True when the largest displacement of a robot alive in both rounds is
    strictly below tol."""
    worst = 0.0
    for old in prev.robots:
        if not old.alive:
            continue
        new = nxt.robots[old.id]
        if not new.alive:
            continue
        worst = max(worst, dist(old.pos, new.pos))
    return worst < tol


def consolidate(robot: RobotState, assets: Sequence[Asset], seed: int = 0) -> tuple[Point, float]:
    """Minimum enclosing disk of the robot's assigned assets; an empty
    assignment keeps the current position with radius zero.  Callers are
    responsible for keeping the result within r_max."""
    pts = [assets[a].pos for a in sorted(robot.assigned)]
    d = min_enclosing_disk_or(pts, robot.pos, seed)
    return d.center, d.radius


def _transition_plan(snapshot: WorldSnapshot, seed: int) -> dict[int, Proposal]:
    # Explore -> Optimize: drop assigned assets the capped Lloyd radius never
    # actually covered, then consolidate onto the minimum enclosing disk.
    r_max = snapshot.params.r_max
    proposals: dict[int, Proposal] = {}
    for r in snapshot.robots:
        if not r.alive:
            continue
        kept = frozenset(
            a for a in r.assigned if dist(r.pos, snapshot.assets[a].pos) <= r.radius + CONTAINMENT_TOL
        )
        pruned = replace(r, assigned=kept)
        center, radius = consolidate(pruned, snapshot.assets, seed)
        proposals[r.id] = Proposal(center, _finalize_radius(radius, r_max), kept)
    return proposals


# ---------------------------------------------------------------------------
# Phase 2: optimization (auctions, fallback, swaps)


def local_coverage(snapshot: WorldSnapshot, rid: int, asset_id: int) -> int:
    """Membership cover count of an asset as robot rid sees it: itself plus
    any neighbor whose assignment list contains the asset."""
    me = snapshot.robot(rid)
    count = 1 if asset_id in me.assigned else 0
    thr2 = snapshot.params.r_comm ** 2
    for r in snapshot.robots:
        if r.id == rid or not r.alive:
            continue
        if asset_id in r.assigned and dist2(r.pos, me.pos) <= thr2:
            count += 1
    return count


def _grow_disk(view: _View, robot: RobotState, asset_id: int) -> Disk:
    # Disk after adding one asset: unchanged if the asset already sits inside,
    # otherwise grown with the asset pinned to the boundary.
    ppos = view.assets[asset_id].pos
    if not robot.assigned:
        return Disk(ppos, 0.0)
    if dist(robot.pos, ppos) <= robot.radius + CONTAINMENT_TOL:
        return Disk(robot.pos, robot.radius)
    pts = view.positions(sorted(robot.assigned))
    return enclose_with_anchor(pts, ppos)


def marginal_cost(snapshot: WorldSnapshot, rid: int, asset_id: int, seed: int = 0) -> Bid:
    """Extra disk area robot rid would pay to absorb the asset; infeasible
    (infinite) when the grown disk would exceed r_max."""
    view = _View(snapshot)
    robot = snapshot.robot(rid)
    if asset_id in robot.assigned:
        raise ValueError(f"asset {asset_id} is already assigned to robot {rid}")
    return _bid(view, robot, asset_id)


def _bid(view: _View, robot: RobotState, asset_id: int) -> Bid:
    d = _grow_disk(view, robot, asset_id)
    if d.radius > view.params.r_max:
        return Bid(asset_id, robot.id, INFEASIBLE, False)
    delta = math.pi * (d.radius * d.radius - robot.radius * robot.radius)
    return Bid(asset_id, robot.id, max(0.0, delta), True)


def select_winner(asset_id: int, bids: Mapping[int, float], iteration: int, eps: float) -> Optional[int]:
    """Lowest-cost bidder; bids within a relative eps of the best tie and the
    tie is broken by the h64 hash.  Returns None when no bid is feasible."""
    feasible = {j: d for j, d in bids.items() if d != INFEASIBLE}
    if not feasible:
        return None
    best = min(feasible.values())
    cut = best * (1.0 + eps) + 1e-12
    tie = [j for j, d in feasible.items() if d <= cut]
    return min(tie, key=lambda j: (h64(iteration, asset_id, j), j))


def phase2_round(
    snapshot: WorldSnapshot, cfg: Config, seed: int = 0
) -> tuple[dict[int, Proposal], bool]:
    """One auction round.

    Every robot auctions each known, locally undercovered, unheld asset among
    itself and its neighbors and claims the asset when it wins its own
    auction.  All wins of a robot are folded into a single consolidation;
    a win is skipped if stacking it onto the earlier wins would push the disk
    past r_max (it stays undercovered and is re-auctioned next round).
    """
    view = _View(snapshot)
    r_max = snapshot.params.r_max
    iteration = snapshot.round
    bid_cache: dict[tuple[int, int], Bid] = {}

    def bid_for(j: int, asset_id: int) -> Bid:
        key = (j, asset_id)
        got = bid_cache.get(key)
        if got is None:
            got = _bid(view, view.robot[j], asset_id)
            bid_cache[key] = got
        return got

    wins: dict[int, list[int]] = {}
    for rid in view.alive_ids:
        robot = view.robot[rid]
        counts = view.cover[rid]
        for asset_id in sorted(view.knowledge[rid]):
            if asset_id in robot.assigned:
                continue
            if counts.get(asset_id, 0) >= view.assets[asset_id].kappa:
                continue
            bidders = [
                j
                for j in sorted((rid, *view.nbrs[rid]))
                if asset_id not in view.robot[j].assigned and asset_id in view.knowledge[j]
            ]
            bids = {j: bid_for(j, asset_id).delta for j in bidders}
            if select_winner(asset_id, bids, iteration, cfg.eps) == rid:
                wins.setdefault(rid, []).append(asset_id)

    proposals: dict[int, Proposal] = {}
    progress = False
    for rid in sorted(wins):
        robot = view.robot[rid]
        pts = view.positions(sorted(robot.assigned))
        disk = Disk(robot.pos, robot.radius) if pts else None
        accepted: list[int] = []
        for asset_id in wins[rid]:
            ppos = view.assets[asset_id].pos
            if disk is None:
                cand = Disk(ppos, 0.0)
            elif dist(disk.center, ppos) <= disk.radius + CONTAINMENT_TOL:
                cand = disk
            else:
                cand = enclose_with_anchor(pts, ppos)
            if cand.radius > r_max:
                continue
            disk = cand
            pts.append(ppos)
            accepted.append(asset_id)
        if accepted:
            assigned = robot.assigned | frozenset(accepted)
            assert disk is not None
            proposals[rid] = Proposal(disk.center, _finalize_radius(disk.radius, r_max), assigned)
            progress = True
    return proposals, progress


def _undercovered_views(view: _View) -> bool:
    # Does any robot still see a deficit it could act on?  Deficits on assets
    # the robot itself holds are excluded: only additions close deficits, and
    # a holder cannot add its own asset (a neighbor who could will see the
    # same deficit through the holder's published list).
    for rid in view.alive_ids:
        counts = view.cover[rid]
        held = view.robot[rid].assigned
        for asset_id in view.knowledge[rid]:
            if asset_id in held:
                continue
            if counts.get(asset_id, 0) < view.assets[asset_id].kappa:
                return True
    return False


def has_undercovered_views(snapshot: WorldSnapshot) -> bool:
    """Does any robot see an actionable deficit?  Diagnostic: views lag the
    true state, so this can stay true forever on assets whose covers sit
    outside the observer's communication range."""
    return _undercovered_views(_View(snapshot))


def coverage_satisfied(snapshot: WorldSnapshot) -> bool:
    """Phase-2 completion test: every discovered asset has at least kappa
    distinct holders.

    Holders keep their assets inside their disks, and the swap and removal
    guards are holder-count based, so once this holds the geometric coverage
    requirement holds too and survives the later phases.  The test is
    evaluated omnisciently by the run scheduler: robots cannot detect global
    completion from local state, and their views keep flagging covered
    assets whose holders sit outside communication range.  Assets no robot
    senses or holds are undiscovered; they do not block completion and are
    surfaced through the metrics instead.
    """
    alive = [r for r in snapshot.robots if r.alive]
    holders = Counter()
    for r in alive:
        holders.update(r.assigned)
    r_max2 = snapshot.params.r_max ** 2
    for a in snapshot.assets:
        got = holders[a.id]
        if got >= a.kappa:
            continue
        if got > 0:
            return False
        if any(dist2(r.pos, a.pos) <= r_max2 for r in alive):
            return False
    return True


def holders_certified(snapshot: WorldSnapshot) -> bool:
    """Distributed completion certificate: no robot holds an asset whose
    coverage requirement it cannot verify within its own neighborhood.

    A custodian of p that counts fewer than kappa(p) holders among itself
    and its communication neighbors can never confirm the requirement is
    met, and it has no action left: it cannot add p again and nobody in
    range will.  Quiescing in that state is a coordination failure (too
    little communication relative to sensing reach), distinct from the
    benign case where only non-holding observers are blind to remote
    holders.  With adequate communication the bidding and fallback grind
    saturates every custodian's neighborhood before it goes quiet, so the
    certificate holds exactly when coordination sufficed.
    """
    alive = {r.id: r for r in snapshot.robots if r.alive}
    nm = neighbor_map(snapshot)
    kappa = {a.id: a.kappa for a in snapshot.assets}
    for r in alive.values():
        if not r.assigned:
            continue
        nbr_assigned = [alive[j].assigned for j in nm[r.id]]
        for aid in r.assigned:
            have = 1 + sum(1 for held in nbr_assigned if aid in held)
            if have < kappa[aid]:
                return False
    return True


def fallback_assign(
    snapshot: WorldSnapshot, cfg: Config, seed: int = 0
) -> tuple[dict[int, Proposal], bool]:
    """Direct assignment when the auctions stall.

    In every connected component of the communication graph, the robot with
    the largest spare capacity (r_max - r_i) among those that still know an
    addable undercovered asset takes its nearest such asset; if the grown
    disk would exceed r_max it first releases its own locally overcovered
    assets farthest-first, one at a time, retrying after each.
    """
    view = _View(snapshot)
    r_max = snapshot.params.r_max
    addable: dict[int, list[int]] = {}
    for rid in view.alive_ids:
        robot = view.robot[rid]
        counts = view.cover[rid]
        got = [
            a
            for a in view.knowledge[rid]
            if a not in robot.assigned and counts.get(a, 0) < view.assets[a].kappa
        ]
        if got:
            addable[rid] = got

    proposals: dict[int, Proposal] = {}
    seen: set[int] = set()
    for start in view.alive_ids:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        idx = 0
        while idx < len(comp):
            for j in view.nbrs[comp[idx]]:
                if j not in seen:
                    seen.add(j)
                    comp.append(j)
            idx += 1
        actors = [rid for rid in comp if rid in addable]
        if not actors:
            continue
        actor = min(actors, key=lambda rid: (-(r_max - view.robot[rid].radius), rid))
        robot = view.robot[actor]
        target = min(addable[actor], key=lambda a: (dist2(robot.pos, view.assets[a].pos), a))
        tpos = view.assets[target].pos
        counts = view.cover[actor]
        keep = sorted(robot.assigned)
        releasable = sorted(
            (q for q in keep if counts.get(q, 0) - 1 >= view.assets[q].kappa),
            key=lambda q: (-dist2(robot.pos, view.assets[q].pos), q),
        )
        rel_idx = 0
        while True:
            d = min_enclosing_disk(view.positions(keep) + [tpos], seed)
            if d.radius <= r_max:
                assigned = frozenset(keep) | {target}
                proposals[actor] = Proposal(d.center, _finalize_radius(d.radius, r_max), assigned)
                break
            if rel_idx >= len(releasable):
                break  # this component is stuck for now
            keep.remove(releasable[rel_idx])
            rel_idx += 1
    return proposals, bool(proposals)


def evaluate_swap(
    snapshot: WorldSnapshot, donor: int, receiver: int, asset_id: int, cfg: Config, seed: int = 0
) -> SwapDecision:
    """Would handing the asset from donor to receiver pay off?

    Accepts when the receiver is closer, the asset sits near the donor's rim,
    the donor's local view keeps the asset covered after the transfer, the
    receiver's grown disk stays within r_max, and the pairwise area drops by
    more than the tau fraction.
    """
    view = _View(snapshot)
    return _evaluate_swap(view, donor, receiver, asset_id, cfg, seed)


def _evaluate_swap(
    view: _View, donor: int, receiver: int, asset_id: int, cfg: Config, seed: int
) -> SwapDecision:
    di = view.robot[donor]
    dj = view.robot[receiver]
    if asset_id not in di.assigned:
        raise ValueError(f"asset {asset_id} is not assigned to robot {donor}")
    if receiver not in view.nbrs.get(donor, ()):
        raise ValueError(f"robots {donor} and {receiver} are not neighbors")
    rejected = SwapDecision(False, 0.0, di.pos, di.radius, dj.pos, dj.radius)
    ppos = view.assets[asset_id].pos
    if not dist(ppos, dj.pos) < dist(ppos, di.pos):
        return rejected
    if not dist(ppos, di.pos) > cfg.boundary_factor * di.radius:
        return rejected
    held_by_receiver = asset_id in dj.assigned
    if view.local_coverage(donor, asset_id) - (1 if held_by_receiver else 0) < view.assets[asset_id].kappa:
        return rejected
    donor_after = min_enclosing_disk_or(
        view.positions(sorted(di.assigned - {asset_id})), di.pos, seed
    )
    if held_by_receiver:
        recv_after = Disk(dj.pos, dj.radius)
    else:
        recv_after = _grow_disk(view, dj, asset_id)
        if recv_after.radius > view.params.r_max:
            return rejected
    before = math.pi * (di.radius ** 2 + dj.radius ** 2)
    after = math.pi * (donor_after.radius ** 2 + recv_after.radius ** 2)
    if before - after <= cfg.tau * before:
        return rejected
    return SwapDecision(
        True,
        before - after,
        donor_after.center,
        _finalize_radius(donor_after.radius, view.params.r_max),
        recv_after.center,
        _finalize_radius(recv_after.radius, view.params.r_max),
    )


def swap_round(
    snapshot: WorldSnapshot, cfg: Config, seed: int = 0
) -> tuple[dict[int, Proposal], bool, tuple[SwapRecord, ...]]:
    """One sweep over neighbor pairs in (min id, max id) order.

    Per pair both orientations are scanned (donor assets farthest from the
    donor's center first) and the first acceptable transfer of each
    orientation competes on area reduction.  A robot participates in at most
    one transfer per sweep and an asset moves at most once per sweep, which
    keeps the concurrently applied transfers coverage-safe.
    """
    view = _View(snapshot)
    pairs = sorted(
        {(min(i, j), max(i, j)) for i in view.alive_ids for j in view.nbrs[i]}
    )
    used_robots: set[int] = set()
    used_assets: set[int] = set()
    proposals: dict[int, Proposal] = {}
    records: list[SwapRecord] = []
    for i, j in pairs:
        if i in used_robots or j in used_robots:
            continue
        best: tuple[float, int, int, int, SwapDecision] | None = None
        for donor, receiver in ((i, j), (j, i)):
            dr = view.robot[donor]
            for asset_id in sorted(dr.assigned, key=lambda a: (-dist2(dr.pos, view.assets[a].pos), a)):
                if asset_id in used_assets:
                    continue
                dec = _evaluate_swap(view, donor, receiver, asset_id, cfg, seed)
                if dec.accepted:
                    if best is None or dec.reduction > best[0]:
                        best = (dec.reduction, donor, receiver, asset_id, dec)
                    break
        if best is None:
            continue
        _, donor, receiver, asset_id, dec = best
        dr = view.robot[donor]
        rr = view.robot[receiver]
        proposals[donor] = Proposal(dec.donor_pos, dec.donor_radius, dr.assigned - {asset_id})
        proposals[receiver] = Proposal(dec.receiver_pos, dec.receiver_radius, rr.assigned | {asset_id})
        used_robots.update((donor, receiver))
        used_assets.add(asset_id)
        before = math.pi * (dr.radius ** 2 + rr.radius ** 2)
        records.append(
            SwapRecord(snapshot.round, donor, receiver, asset_id, before, before - dec.reduction)
        )
    return proposals, bool(proposals), tuple(records)


# ---------------------------------------------------------------------------
# Phase 3: refinement


def phase3_round(
    snapshot: WorldSnapshot, cfg: Config, seed: int = 0
) -> tuple[dict[int, Proposal], bool]:
    """One guarded removal round.

    Each robot builds a removal intent set greedily (farthest asset first,
    only removals that strictly shrink its disk, only assets its local view
    shows overcovered).  An intent executes unless the surviving cover count,
    discounted by intending neighbors with lower h64 priority, would fall
    below kappa; the hash ordering lets exactly the right subset proceed when
    neighbors contend for the same slack.
    """
    view = _View(snapshot)
    r_max = snapshot.params.r_max
    rnd = snapshot.round
    intents: dict[int, list[int]] = {}
    for rid in view.alive_ids:
        robot = view.robot[rid]
        if not robot.assigned:
            continue
        counts = view.cover[rid]
        keep = set(robot.assigned)
        r_cur = robot.radius
        intent: list[int] = []
        for asset_id in sorted(robot.assigned, key=lambda a: (-dist2(robot.pos, view.assets[a].pos), a)):
            if counts.get(asset_id, 0) - 1 < view.assets[asset_id].kappa:
                continue
            trial = min_enclosing_disk_or(
                view.positions(sorted(keep - {asset_id})), robot.pos, seed
            )
            if trial.radius < r_cur:
                intent.append(asset_id)
                keep.remove(asset_id)
                r_cur = trial.radius
        if intent:
            intents[rid] = intent

    proposals: dict[int, Proposal] = {}
    progress = False
    for rid in sorted(intents):
        robot = view.robot[rid]
        counts = view.cover[rid]
        my_keys = {a: (h64(rnd, a, rid), rid) for a in intents[rid]}
        removed: list[int] = []
        for asset_id in intents[rid]:
            contenders = sum(
                1
                for j in view.nbrs[rid]
                if asset_id in intents.get(j, ()) and (h64(rnd, asset_id, j), j) < my_keys[asset_id]
            )
            if counts.get(asset_id, 0) - 1 - contenders >= view.assets[asset_id].kappa:
                removed.append(asset_id)
        if not removed:
            continue
        assigned = robot.assigned - frozenset(removed)
        d = min_enclosing_disk_or(view.positions(sorted(assigned)), robot.pos, seed)
        proposals[rid] = Proposal(d.center, _finalize_radius(d.radius, r_max), assigned)
        progress = True
    return proposals, progress


# ---------------------------------------------------------------------------
# Full run loop


def _plan_decide(plan: dict[int, Proposal]):
    def decide(snapshot: WorldSnapshot, rid: int) -> Optional[Proposal]:
        return plan.get(rid)

    return decide


def _idle_decide(snapshot: WorldSnapshot, rid: int) -> Optional[Proposal]:
    return None


def run(
    instance: Instance,
    config: Optional[Config] = None,
    events: Sequence[Event] = (),
    seed: int = 0,
) -> RunResult:
    """Execute the full mission on an instance.

    Phases advance globally on quiescence.  Events fire at their absolute
    round number; events that land after refinement has settled pull the
    swarm back into the optimization phase, which is how dynamic scenarios
    adapt.  Returns the final snapshot, the per-round trace, executed swap
    records, and wall-clock milestones.
    """
    cfg = config if config is not None else Config()
    t0 = time.perf_counter()
    params = Params.from_instance(instance)
    shape = grid_partition(params.m, cfg.lam)
    starts = initial_positions(params.m, params.workspace, shape)
    robots = tuple(RobotState(i, starts[i], 0.0, frozenset(), True) for i in range(params.m))
    pending = sorted(events, key=lambda e: e.at_round)
    snapshot = WorldSnapshot(0, Phase.EXPLORE, robots, instance.assets, params)
    pre_event: list[tuple[int, WorldSnapshot]] = []
    due0 = [e for e in pending if e.at_round == 0]
    if due0:
        pre_event.append((0, snapshot))
        snapshot = apply_events(snapshot, due0)
        pending = [e for e in pending if e.at_round > 0]
    trace: list[RoundMetrics] = [summarize(snapshot)]
    swaps: list[SwapRecord] = []

    def advance(plan: dict[int, Proposal], phase: Phase) -> None:
        nonlocal snapshot, pending
        due = [e for e in pending if e.at_round == snapshot.round + 1]
        if due:
            pre_event.append((snapshot.round + 1, snapshot))
            pending = [e for e in pending if e.at_round != snapshot.round + 1]
        new_snapshot, rm = step(snapshot, _plan_decide(plan), due, next_phase=phase)
        snapshot = new_snapshot
        trace.append(rm)

    # Phase 1: Lloyd iterations until displacements settle, then lock disks.
    for _ in range(cfg.max_iters_phase1):
        prev = snapshot
        advance(lloyd_round(snapshot, seed), Phase.EXPLORE)
        if phase1_converged(prev, snapshot, cfg.tol):
            break
    advance(_transition_plan(snapshot, seed), Phase.OPTIMIZE)

    status = RunStatus.FEASIBLE
    feas_time: Optional[float] = None
    bid_budget = cfg.phase2_cap(params.m)

    def coast_to_next_event() -> None:
        target = min(e.at_round for e in pending)
        while snapshot.round < target:
            advance({}, snapshot.phase)

    while True:
        # Phase 2 bidding.  The scheduler classifies the swarm every round:
        # bidding is over once every discovered asset has enough holders and
        # every custodian can certify its own assets within its neighborhood.
        # Residual non-holder deficit flags are view artifacts (the flagged
        # asset is covered, its holders just sit outside the observer's
        # communication range); acting on them only piles up redundancy, and
        # the capacity fallback can even ping-pong an asset between release
        # and re-claim forever, so artifact churn does not keep the phase
        # open.  Quiescence without the classification is a stall: real
        # deficits nobody can serve, or custodians that cannot reach enough
        # peers to confirm coverage.
        while True:
            if coverage_satisfied(snapshot) and holders_certified(snapshot):
                break
            plan, progress = phase2_round(snapshot, cfg, seed)
            if not progress:
                plan, progress = fallback_assign(snapshot, cfg, seed)
            if progress:
                if bid_budget <= 0:
                    status = RunStatus.ITERATION_CAP
                    break
                advance(plan, Phase.OPTIMIZE)
                bid_budget -= 1
                continue
            if pending:
                # A scheduled event may unblock the swarm.
                coast_to_next_event()
                continue
            status = RunStatus.INFEASIBLE
            break
        if status is not RunStatus.FEASIBLE:
            break
        if feas_time is None:
            feas_time = time.perf_counter() - t0

        # Refinement descent: pairwise transfers and guarded removals,
        # alternated to a joint fixed point.  Removals re-center disks and
        # can expose fresh beneficial transfers, so a single
        # sweep-then-remove pass would leave work behind.  Both stages
        # preserve membership coverage; it only reopens through events.
        sweep_budget = cfg.max_swap_sweeps
        removal_budget = cfg.max_iters_phase3
        while coverage_satisfied(snapshot):
            acted = False
            while sweep_budget > 0:
                plan, progress, records = swap_round(snapshot, cfg, seed)
                if not progress:
                    break
                swaps.extend(records)
                advance(plan, Phase.REFINE)
                sweep_budget -= 1
                acted = True
            if not coverage_satisfied(snapshot):
                break
            while removal_budget > 0:
                plan, progress = phase3_round(snapshot, cfg, seed)
                if not progress:
                    break
                advance(plan, Phase.REFINE)
                removal_budget -= 1
                acted = True
            if not acted:
                break

        if not coverage_satisfied(snapshot):
            bid_budget = cfg.phase2_cap(params.m)
            continue  # an event during the later stages reopened coverage
        if pending:
            # Idle forward to the next scheduled event, then re-optimize.
            coast_to_next_event()
            bid_budget = cfg.phase2_cap(params.m)
            continue
        break

    total = time.perf_counter() - t0
    refine_time = total if status is RunStatus.FEASIBLE else None
    return RunResult(
        status=status,
        snapshot=snapshot,
        trace=tuple(trace),
        timings=Timings(feas_time, refine_time, total),
        swaps=tuple(swaps),
        pre_event_snapshots=tuple(pre_event),
    )
