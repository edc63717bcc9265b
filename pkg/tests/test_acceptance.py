"""End-to-end gate for the headline guarantees.

Each test checks one advertised property at its stated tolerance and prints a
single [PASS]/[FAIL] line straight to the terminal (bypassing capture), so a
full run reads as a checklist.  These are deliberately heavier than the unit
suite: they replay the benchmark families end to end.
"""

import math
import random
import time

import pytest

from swarmcover.engine import AddAssets, AssetSpec, Event
from swarmcover.geometry import (
    CONTAINMENT_TOL,
    Disk,
    Point,
    circumcircle,
    diametral_disk,
    disk_contains,
    dist,
    min_enclosing_disk,
)
from swarmcover.instances import Asset, Instance, Workspace, generate_uniform, preset
from swarmcover.metrics import write_trace
from swarmcover.oracle import brute_force_optimum, solve_exact
from swarmcover.protocol import RunStatus, run

WS100 = Workspace(0.0, 100.0, 0.0, 100.0)


def report(capsys, ok: bool, label: str, detail: str = "") -> None:
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {label}")
    assert ok, detail or label


def membership_counts(snapshot) -> dict[int, int]:
    counts: dict[int, int] = {}
    for r in snapshot.robots:
        if r.alive:
            for aid in r.assigned:
                counts[aid] = counts.get(aid, 0) + 1
    return counts


def undercovered(snapshot) -> int:
    counts = membership_counts(snapshot)
    return sum(1 for a in snapshot.assets if counts.get(a.id, 0) < a.kappa)


@pytest.fixture(scope="module")
def benchmark_runs():
    """Five seeds of the fixed-asset benchmark (250 assets, 50 robots)."""
    out = []
    for seed in range(5):
        inst = preset("uni_fix_n", 50, seed=seed)
        t0 = time.perf_counter()
        res = run(inst, seed=seed)
        out.append((seed, time.perf_counter() - t0, res))
    return out


def test_benchmark_feasible_within_budget(benchmark_runs, capsys):
    failures = []
    for seed, elapsed, res in benchmark_runs:
        if res.status is not RunStatus.FEASIBLE:
            failures.append(f"seed {seed}: status {res.status.value}")
        if undercovered(res.snapshot):
            failures.append(f"seed {seed}: undercovered assets remain")
        worst = max((r.radius for r in res.snapshot.robots if r.alive), default=0.0)
        if worst > res.snapshot.params.r_max + 1e-9:
            failures.append(f"seed {seed}: radius {worst} exceeds r_max")
        if elapsed >= 30.0:
            failures.append(f"seed {seed}: took {elapsed:.1f}s")
    report(
        capsys,
        not failures,
        "benchmark, 5 seeds, 250 assets / 50 robots: feasible, no undercoverage, "
        "radii within r_max, each run under 30 s",
        "; ".join(failures),
    )


def test_phase_progression_improves_solution(benchmark_runs, capsys):
    failures = []
    for seed, _, res in benchmark_runs:
        opt_rows = [i for i, rm in enumerate(res.trace) if rm.phase == "optimize"]
        ref_rows = [i for i, rm in enumerate(res.trace) if rm.phase == "refine"]
        if not opt_rows or not ref_rows:
            failures.append(f"seed {seed}: missing a phase in the trace")
            continue
        p2_end = res.trace[opt_rows[-1]]
        p3_end = res.trace[ref_rows[-1]]
        tail = res.trace[opt_rows[-1]:]
        if any(rm.undercovered_count != 0 for rm in tail):
            failures.append(f"seed {seed}: undercoverage after the auction phase")
        if not p3_end.total_cost < p2_end.total_cost:
            failures.append(f"seed {seed}: refinement did not lower cost")
        if not p3_end.overcovered_count < p2_end.overcovered_count:
            failures.append(f"seed {seed}: refinement did not lower overcoverage")
    report(
        capsys,
        not failures,
        "same runs: undercoverage is zero from the end of the auction phase on; "
        "refinement strictly lowers cost and overcoverage",
        "; ".join(failures),
    )


def test_distributed_cost_never_beats_exact_optimum(capsys):
    ws = Workspace(0.0, 60.0, 0.0, 60.0)
    failures = []
    t0 = time.perf_counter()
    for i in range(25):
        n = 4 + i % 5
        m = 2 + i % 2
        assets = generate_uniform(n, ws, (1, 2), seed=100 + i)
        inst = Instance(ws, tuple(assets), m, 85.0, 45.0)
        res = run(inst, seed=i)
        if res.status is not RunStatus.FEASIBLE:
            failures.append(f"case {i}: distributed run {res.status.value}")
            continue
        exact = solve_exact(assets, m, 45.0)
        if not exact.feasible:
            failures.append(f"case {i}: oracle reports infeasible")
            continue
        if res.trace[-1].total_cost < exact.total_cost - 1e-6:
            failures.append(
                f"case {i}: distributed {res.trace[-1].total_cost:.6f} beats "
                f"optimum {exact.total_cost:.6f}"
            )
        if n <= 6:
            bf = brute_force_optimum(assets, m, 45.0, grid_step=0.5)
            if not exact.total_cost <= bf.total_cost + 1e-9:
                failures.append(f"case {i}: exact exceeds the lattice solution")
            if not bf.total_cost <= exact.total_cost + bf.gap_bound + 1e-6:
                failures.append(f"case {i}: lattice solution outside its own bound")
    elapsed = time.perf_counter() - t0
    if elapsed >= 60.0:
        failures.append(f"took {elapsed:.1f}s")
    report(
        capsys,
        not failures,
        "25 small instances: distributed cost >= exact optimum - 1e-6; lattice "
        "cross-check inside its discretization bound; under 60 s total",
        "; ".join(failures),
    )


def _failure_fraction(r_comm: float, r_max: float) -> float:
    fails = 0
    for seed in range(10):
        assets = generate_uniform(200, WS100, (1, 2, 3), seed=100 + seed)
        inst = Instance(WS100, tuple(assets), 50, r_comm, r_max)
        res = run(inst, seed=seed)
        if res.status is not RunStatus.FEASIBLE or undercovered(res.snapshot):
            fails += 1
    return fails / 10.0


def test_starved_radii_fail_generous_radii_succeed(capsys):
    failures = []
    starved_comm = _failure_fraction(10.0, 40.0)
    if starved_comm < 0.5:
        failures.append(f"comm radius 10: failure fraction {starved_comm}")
    starved_sense = _failure_fraction(55.0, 10.0)
    if starved_sense < 0.5:
        failures.append(f"sensing radius 10: failure fraction {starved_sense}")
    generous = _failure_fraction(55.0, 40.0)
    if generous != 0.0:
        failures.append(f"comm 55 / sensing 40: failure fraction {generous}")
    report(
        capsys,
        not failures,
        "200 assets / 50 robots, 10 seeds per setting: starved comm or sensing "
        "radius fails at least half the runs; generous radii never fail",
        "; ".join(failures),
    )


def _subset_optimal_radius(points: list[Point]) -> float:
    """Smallest candidate disk over 1/2/3-point subsets containing all points."""
    best = math.inf
    cands: list[Disk] = [Disk(p, 0.0) for p in points]
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            cands.append(diametral_disk(points[i], points[j]))
            for k in range(j + 1, len(points)):
                c = circumcircle(points[i], points[j], points[k])
                if c is not None:
                    cands.append(c)
    for d in cands:
        if d.radius < best and all(disk_contains(d, p) for p in points):
            best = d.radius
    return best


def test_min_enclosing_disk_randomized_exactness(capsys):
    rng = random.Random(20260815)
    failures = []
    t0 = time.perf_counter()
    for case in range(1000):
        pts = [
            Point(rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0))
            for _ in range(rng.randint(1, 12))
        ]
        d = min_enclosing_disk(pts)
        if not all(disk_contains(d, p) for p in pts):
            failures.append(f"case {case}: point escapes the disk")
            break
        if abs(d.radius - _subset_optimal_radius(pts)) > 1e-9:
            failures.append(f"case {case}: radius differs from subset brute force")
            break
    elapsed = time.perf_counter() - t0
    if elapsed >= 5.0:
        failures.append(f"took {elapsed:.2f}s")
    report(
        capsys,
        not failures,
        "min enclosing disk, 1000 random point sets (up to 12 points): containment "
        "always; radius matches subset brute force within 1e-9; under 5 s",
        "; ".join(failures),
    )


def _corner_cluster_setup():
    rng = random.Random(7)
    rows = []
    for corner in ((5.0, 5.0), (95.0, 95.0)):
        for _ in range(12):
            rows.append((corner[0] + rng.uniform(-4, 4), corner[1] + rng.uniform(-4, 4)))
    assets = tuple(Asset(i, Point(x, y), 1 + i % 2) for i, (x, y) in enumerate(rows))
    inst = Instance(WS100, assets, 16, 25.0, 40.0)
    newcomers = (
        AssetSpec(Point(4.0, 6.5), 1),
        AssetSpec(Point(6.5, 4.0), 2),
        AssetSpec(Point(8.0, 8.0), 1),
        AssetSpec(Point(3.0, 3.0), 1),
    )
    return inst, (Event(120, AddAssets(newcomers)),)


def test_identical_seed_reproduces_trace_bytes(tmp_path, capsys):
    failures = []
    jobs = [("static", preset("uni_sm", 60, seed=7), ())]
    inst, events = _corner_cluster_setup()
    jobs.append(("dynamic", inst, events))
    for name, instance, events in jobs:
        paths = []
        for rep in range(2):
            res = run(instance, events=events, seed=7)
            path = tmp_path / f"{name}_{rep}.csv"
            write_trace(path, res.trace)
            paths.append(path)
        if paths[0].read_bytes() != paths[1].read_bytes():
            failures.append(f"{name}: trace bytes differ between identical runs")
    report(
        capsys,
        not failures,
        "identical seeds reproduce byte-identical trace CSVs (static and "
        "mid-mission-event scenarios)",
        "; ".join(failures),
    )


def test_localized_arrivals_leave_far_robots_untouched(capsys):
    inst, events = _corner_cluster_setup()
    res = run(inst, events=events, seed=3)
    failures = []
    if res.status is not RunStatus.FEASIBLE:
        failures.append(f"status {res.status.value}")
    if len(res.pre_event_snapshots) != 1:
        failures.append("expected exactly one pre-event snapshot")
    else:
        pre = res.pre_event_snapshots[0][1]
        far, near = Point(95.0, 95.0), Point(5.0, 5.0)
        far_ids = [
            r.id for r in pre.robots if r.alive and dist(r.pos, far) < dist(r.pos, near)
        ]
        if not far_ids:
            failures.append("construct broken: no robots settled at the far corner")
        fin = {r.id: r for r in res.snapshot.robots}
        for rid in far_ids:
            a, b = pre.robots[rid], fin[rid]
            if (a.pos, a.radius, a.assigned, a.alive) != (b.pos, b.radius, b.assigned, b.alive):
                failures.append(f"far robot {rid} changed state")
        counts = membership_counts(res.snapshot)
        base = len(inst.assets)
        for a in res.snapshot.assets[base:]:
            if counts.get(a.id, 0) < a.kappa:
                failures.append(f"new asset {a.id} left undercovered")
    report(
        capsys,
        not failures,
        "assets added in one corner (far cluster beyond r_comm + r_max): far "
        "robots stay bit-identical and the arrivals still get covered",
        "; ".join(failures),
    )


def test_refinement_monotone_and_swaps_clear_threshold(capsys):
    failures = []
    for seed in range(10):
        inst = preset("uni_sm", 60, seed=seed)
        res = run(inst, seed=seed)
        tau = 0.005
        ref = [rm for rm in res.trace if rm.phase == "refine"]
        for prev, cur in zip(ref, ref[1:]):
            if cur.total_cost > prev.total_cost + 1e-9:
                failures.append(f"seed {seed}: cost rose during refinement")
                break
        if not res.swaps:
            failures.append(f"seed {seed}: no swaps executed, nothing to audit")
        for rec in res.swaps:
            gain = rec.pair_area_before - rec.pair_area_after
            if not gain > tau * rec.pair_area_before:
                failures.append(
                    f"seed {seed}: swap at round {rec.round} gained only {gain:.6g}"
                )
                break
    report(
        capsys,
        not failures,
        "refinement on 10 seeds: cost non-increasing every round; every executed "
        "swap shrinks the donor/receiver pair area by more than the tau fraction",
        "; ".join(failures),
    )
