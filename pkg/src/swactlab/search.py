"""Guided random-walk design-space exploration over rewrite recipes.

A run is a sequence of iterations; each iteration launches one or more
chains from the incumbent best circuit; a chain applies randomly drawn
recipes step by step (a compression draw applies the same recipe three
times in a row, still counted as one step) and tracks the best circuit it
visits. The incumbent advances to the best chain result per iteration; the
best circuit across runs, ranked by the final metric, wins.

Seed scheme (documented, splittable, schedule-independent): the recipe
stream of (run r, iteration i, chain c) is PCG64 seeded with
``SeedSequence(master_seed, spawn_key=(r, i, c))``; per-application recipe
seeds are drawn inline from that stream. Switching activity during search
uses one fixed stimulus batch shared by every candidate.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .aig import Aig, check_equivalence
from .formats import Format, representable_range
from .generators import BlockSpec
from .mapping import from_aig, to_aig
from .netlist import CellNetlist
from .recipes import COMPRESSION, RECIPES, apply_recipe
from .sim import StimulusSpec, encode_stimuli, sample_stimuli, swact_on_bits

ITER_METRICS = ("transistors", "swact", "both")
FINAL_METRICS = ("transistors", "swact")


class IntegrityError(RuntimeError):
    """An optimized circuit failed the equivalence check against its seed."""


@dataclass(frozen=True)
class OptConfig:
    runs: int = 20
    iterations: int = 10
    chain_length: int = 20
    parallel_chains: int = 1
    iter_metric: str = "transistors"
    final_metric: str = "swact"
    in_format: Format = Format.TC
    width: int = 4
    sigma: float = 3.0
    swact_cycles: int = 2000
    final_cycles: int = 10000
    swact_seed: int = 7777
    master_seed: int = 0
    sample_every: int = 0
    jobs: int = 1

    def __post_init__(self):
        if min(self.runs, self.iterations, self.chain_length, self.parallel_chains) < 1:
            raise ValueError("runs/iterations/chain_length/parallel_chains must be >= 1")
        if self.iter_metric not in ITER_METRICS:
            raise ValueError(f"iter_metric must be one of {ITER_METRICS}")
        if self.final_metric not in FINAL_METRICS:
            raise ValueError(f"final_metric must be one of {FINAL_METRICS}")

    def stimulus(self, operands: int, cycles: int) -> StimulusSpec:
        rng = representable_range(self.in_format, self.width)
        return StimulusSpec(
            sigma=self.sigma, cycles=cycles, seed=self.swact_seed,
            lo=rng.lo, hi=rng.hi, operands=operands,
        )


@dataclass(frozen=True)
class StepRecord:
    run: int
    iteration: int
    step: int
    recipe: int
    applications: int
    nodes: int
    transistors: int
    swact: float | None


@dataclass
class RunTrace:
    run: int
    steps: list[StepRecord] = field(default_factory=list)
    iteration_best: list[int] = field(default_factory=list)
    best_transistors: int = 0
    best_swact: float | None = None
    wall_time: float = 0.0


def _metric_key(metric: str, transistors: int, swact: float | None):
    if metric == "transistors":
        return (transistors,)
    if metric == "swact":
        return (swact,)
    return (transistors, swact)


def _needs_swact(metric: str) -> bool:
    return metric in ("swact", "both")


def _evaluate(aig: Aig, cfg: OptConfig, stim_bits, want_swact: bool):
    net = from_aig(aig, check=False, effort="fast")
    t = net.transistor_count()
    sw = swact_on_bits(net, stim_bits) if want_swact else None
    return net, t, sw


def _run_chain(cur: Aig, inc_key, cfg: OptConfig, rng, stim_bits,
               run_idx: int, iteration: int, chain_idx: int, rows: list):
    """One chain of recipe steps; returns (best_aig_or_None, best_key)."""
    best, best_key = None, inc_key
    for local in range(cfg.chain_length):
        rid = int(rng.integers(len(RECIPES)))
        recipe = RECIPES[rid]
        applications = 3 if recipe.kind == COMPRESSION else 1
        for _ in range(applications):
            seed = int(rng.integers(2**63))
            cur = apply_recipe(cur, recipe, seed)
        step = chain_idx * cfg.chain_length + local
        want_sw = _needs_swact(cfg.iter_metric) or (
            cfg.sample_every > 0 and step % cfg.sample_every == 0
        )
        _net, t, sw = _evaluate(cur, cfg, stim_bits, want_sw)
        rows.append(StepRecord(run_idx, iteration, step, rid, applications,
                               cur.n_ands, t, sw))
        key = _metric_key(cfg.iter_metric, t, sw)
        if key < best_key:
            best, best_key = cur, key
    return best, best_key


def run_iterations(start: Aig, cfg: OptConfig, run_idx: int, stim_bits):
    """One independent run: iterations of parallel chains with an incumbent."""
    t0 = time.perf_counter()
    trace = RunTrace(run=run_idx)
    _net, t, sw = _evaluate(start, cfg, stim_bits, _needs_swact(cfg.iter_metric))
    incumbent, inc_key = start, _metric_key(cfg.iter_metric, t, sw)
    for iteration in range(cfg.iterations):
        results = []
        for chain_idx in range(cfg.parallel_chains):
            ss = np.random.SeedSequence(cfg.master_seed,
                                        spawn_key=(run_idx, iteration, chain_idx))
            rng = np.random.Generator(np.random.PCG64(ss))
            best, key = _run_chain(incumbent, inc_key, cfg, rng, stim_bits,
                                   run_idx, iteration, chain_idx, trace.steps)
            if best is not None:
                results.append((key, chain_idx, best))
        if results:
            key, _, best = min(results, key=lambda r: (r[0], r[1]))
            if key < inc_key:
                incumbent, inc_key = best, key
                if not check_equivalence(incumbent, start):
                    raise IntegrityError(
                        f"run {run_idx} iteration {iteration}: incumbent diverged"
                    )
        trace.iteration_best.append(inc_key[0])
    _net, t, sw = _evaluate(incumbent, cfg, stim_bits, True)
    trace.best_transistors = t
    trace.best_swact = sw
    trace.wall_time = time.perf_counter() - t0
    return incumbent, trace


def _run_job(args):
    start, cfg, run_idx, stim_bits = args
    return run_iterations(start, cfg, run_idx, stim_bits)


@dataclass
class OptimizeResult:
    winner: CellNetlist
    winner_transistors: int
    winner_swact: float
    winner_run: int
    traces: list[RunTrace]
    run_bests: list[dict]
    summary: dict


def optimize(start: CellNetlist, cfg: OptConfig) -> OptimizeResult:
    """Full multi-run search; the winner is equivalence-checked against
    the start netlist before being returned."""
    violations = start.validate()
    if violations:
        raise ValueError(f"start netlist invalid: {violations}")
    if len(start.inputs) % cfg.width:
        raise ValueError("input port count is not a multiple of the width")
    operands = len(start.inputs) // cfg.width
    start_aig = to_aig(start)

    stim = cfg.stimulus(operands, cfg.swact_cycles)
    stim_bits = encode_stimuli(sample_stimuli(stim), cfg.in_format, cfg.width)
    final_stim = cfg.stimulus(operands, cfg.final_cycles)
    final_bits = encode_stimuli(sample_stimuli(final_stim), cfg.in_format, cfg.width)

    jobs = [(start_aig, cfg, r, stim_bits) for r in range(cfg.runs)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(_run_job, jobs))
    else:
        outcomes = [_run_job(j) for j in jobs]

    run_bests = []
    ranked = []
    for run_idx, (best_aig, trace) in enumerate(outcomes):
        net = from_aig(best_aig, name=start.name)
        t = net.transistor_count()
        sw = swact_on_bits(net, final_bits)
        run_bests.append({"run": run_idx, "transistors": t,
                          "swact": round(sw, 6), "nodes": best_aig.n_ands})
        key = (t,) if cfg.final_metric == "transistors" else (sw,)
        ranked.append((key, run_idx, best_aig, net, t, sw))
    # the unmodified start competes too: the search never returns a circuit
    # worse than its input under the final metric
    t0m = start.transistor_count()
    sw0 = swact_on_bits(start, final_bits)
    key0 = (t0m,) if cfg.final_metric == "transistors" else (sw0,)
    ranked.append((key0, len(outcomes), start_aig, start, t0m, sw0))
    key, winner_run, winner_aig, winner_net, t, sw = min(ranked, key=lambda r: (r[0], r[1]))
    if winner_run == len(outcomes):
        winner_run = -1

    if not check_equivalence(winner_aig, start_aig):
        raise IntegrityError("winner is not equivalent to the start netlist")

    traces = [tr for _a, tr in outcomes]
    summary = {
        "start": start.name,
        "budget": {
            "runs": cfg.runs,
            "iterations": cfg.iterations,
            "chain_length": cfg.chain_length,
            "parallel_chains": cfg.parallel_chains,
            "steps_per_run": cfg.iterations * cfg.chain_length * cfg.parallel_chains,
        },
        "iter_metric": cfg.iter_metric,
        "final_metric": cfg.final_metric,
        "master_seed": cfg.master_seed,
        "swact": {"sigma": cfg.sigma, "search_cycles": cfg.swact_cycles,
                  "final_cycles": cfg.final_cycles, "seed": cfg.swact_seed},
        "start_transistors": start.transistor_count(),
        "winner": {"run": winner_run, "transistors": t, "swact": round(sw, 6)},
    }
    return OptimizeResult(winner_net, t, sw, winner_run, traces, run_bests, summary)


# -- scatter / CSV ------------------------------------------------------------

def pareto_scatter(result: OptimizeResult):
    """(rows, best_by_area, best_by_power) from swact-annotated steps and
    the per-run final picks."""
    rows = []
    for trace in result.traces:
        for s in trace.steps:
            if s.swact is not None:
                rows.append({"run": s.run, "iteration": s.iteration, "step": s.step,
                             "recipe": s.recipe, "nodes": s.nodes,
                             "transistors": s.transistors,
                             "swact": round(s.swact, 6), "final": 0})
    for rb in result.run_bests:
        rows.append({"run": rb["run"], "iteration": -1, "step": -1, "recipe": -1,
                     "nodes": rb["nodes"], "transistors": rb["transistors"],
                     "swact": rb["swact"], "final": 1})
    if not rows:
        return rows, None, None
    # the area pick is power-agnostic: ties break by production order, never
    # by switching activity
    best_by_area = min(rows, key=lambda r: (r["transistors"], r["run"], r["step"]))
    best_by_power = min(rows, key=lambda r: (r["swact"], r["transistors"],
                                             r["run"], r["step"]))
    return rows, best_by_area, best_by_power


def write_trace_csv(path, traces: list[RunTrace], manifest: dict | None = None) -> None:
    with open(path, "w", newline="") as f:
        if manifest:
            for k, v in manifest.items():
                f.write(f"# {k}={v}\n")
        w = csv.writer(f)
        w.writerow(["run", "iteration", "step", "recipe", "nodes", "transistors", "swact"])
        for trace in traces:
            for s in trace.steps:
                sw = "" if s.swact is None else f"{s.swact:.6f}"
                w.writerow([s.run, s.iteration, s.step, s.recipe, s.nodes,
                            s.transistors, sw])


def write_scatter_csv(path, rows, manifest: dict | None = None) -> None:
    with open(path, "w", newline="") as f:
        if manifest:
            for k, v in manifest.items():
                f.write(f"# {k}={v}\n")
        w = csv.writer(f)
        w.writerow(["run", "iteration", "step", "recipe", "nodes", "transistors",
                    "swact", "final"])
        for r in rows:
            w.writerow([r["run"], r["iteration"], r["step"], r["recipe"], r["nodes"],
                        r["transistors"], f"{r['swact']:.6f}", r["final"]])


def write_summary_json(path, result: OptimizeResult) -> None:
    with open(path, "w") as f:
        json.dump({**result.summary, "run_bests": result.run_bests}, f, indent=1)
        f.write("\n")
