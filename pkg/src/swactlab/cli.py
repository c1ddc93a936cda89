"""Command-line interface.

Subcommands:

* generate  -- build a block netlist and write it as JSON
* verify    -- exhaustively check a netlist against its golden model
* simulate  -- switching activity of one netlist (report + wire table CSV)
* histogram -- stimulus / product value histogram CSV
* report    -- per-configuration switching-activity and area/depth tables
* optimize  -- random-walk rewrite search on a netlist

Exit codes: 0 success, 1 verification/equivalence failure, 2 usage error.
``SWACTLAB_OUTDIR`` sets the default output directory (default: cwd).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

from . import __version__, kernels
from .formats import Format, ref_multiply
from .generators import Block, BlockSpec, build_block, verify_exhaustive
from .netlist import CellNetlist, cost_table_digest
from .report import (
    CONFIGURATIONS,
    area_depth_table,
    build_config_netlist,
    default_blocks,
    swact_table,
)
from .search import (
    IntegrityError,
    OptConfig,
    optimize,
    pareto_scatter,
    write_scatter_csv,
    write_summary_json,
    write_trace_csv,
)
from .sim import StimulusSpec, swact, value_histogram, write_histogram, write_wire_table

BLOCK_NAMES = [b.value for b in Block]


def _outdir() -> Path:
    return Path(os.environ.get("SWACTLAB_OUTDIR", "."))


def _resolve(path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() or p.parent != Path(".") else _outdir() / p


def _manifest(seed) -> dict:
    return {
        "version": __version__,
        "seed": seed,
        "cost_table": cost_table_digest(),
        "backend": kernels.BACKEND,
    }


def cmd_generate(args) -> int:
    spec = BlockSpec(Block(args.block), args.width)
    out = _resolve(args.output)
    if out.exists() and not args.force:
        print(f"error: {out} exists (use --force to overwrite)", file=sys.stderr)
        return 2
    n = build_block(spec)
    out.parent.mkdir(parents=True, exist_ok=True)
    n.save(out)
    print(f"wrote {out} ({len(n.inputs)} in, {len(n.outputs)} out, "
          f"{n.cell_count()} cells, {n.transistor_count()} transistors)")
    return 0


def cmd_verify(args) -> int:
    n = CellNetlist.load(args.netlist)
    spec = BlockSpec(Block(args.block), args.width)
    if len(n.inputs) != spec.operands * spec.width or len(n.outputs) != spec.out_width:
        print(f"error: port shape mismatch for {args.block} width {args.width}",
              file=sys.stderr)
        return 2
    violations = n.validate()
    if violations:
        print("invalid netlist:", *violations, sep="\n  ")
        return 1
    cex = verify_exhaustive(n, spec)
    total = (spec.in_range.hi - spec.in_range.lo + 1) ** spec.operands
    if cex is None:
        print(f"{total}/{total} pass")
        return 0
    print(f"FAIL: {cex}")
    return 1


def cmd_simulate(args) -> int:
    n = CellNetlist.load(args.netlist)
    spec = BlockSpec(Block(args.block), args.width)
    stim = StimulusSpec(
        sigma=args.sigma, cycles=args.cycles, seed=args.seed,
        lo=spec.in_range.lo, hi=spec.in_range.hi, operands=spec.operands,
    )
    rep = swact(n, stim, spec.in_format, spec.width)
    print(f"block={n.name} sigma={rep.sigma} cycles={rep.cycles} seed={rep.seed} "
          f"s={rep.s:.4f} ({rep.rng})")
    if args.wire_table:
        write_wire_table(_resolve(args.wire_table), n, stim, spec.in_format, spec.width)
        print(f"wrote {_resolve(args.wire_table)}")
    return 0


def cmd_histogram(args) -> int:
    stim = StimulusSpec(sigma=args.sigma, cycles=args.cycles, seed=args.seed,
                        lo=args.lo, hi=args.hi, operands=2)
    through = (lambda a, b: ref_multiply(a, b, args.width)) if args.products else None
    hist = value_histogram(stim, through=through)
    out = _resolve(args.output)
    write_histogram(out, hist)
    print(f"wrote {out} ({len(hist)} bins)")
    return 0


def cmd_report(args) -> int:
    config_ids = [c.strip().upper() for c in args.configs.split(",")]
    for c in config_ids:
        if c not in CONFIGURATIONS:
            print(f"error: unknown configuration {c}", file=sys.stderr)
            return 2
    sigmas = [float(s) for s in args.sigmas.split(",")]
    seeds = [args.seed + k for k in range(args.seeds)]

    blocks = default_blocks(args.width)
    if args.blocks_dir:
        for b in Block:
            path = Path(args.blocks_dir) / f"{b.value}.json"
            if path.exists():
                blocks[b] = CellNetlist.load(path)

    needed = {b for cid in config_ids for b in
              ([CONFIGURATIONS[cid].encoder] if CONFIGURATIONS[cid].encoder else [])
              + [CONFIGURATIONS[cid].multiplier]}
    for b in needed:
        cex = verify_exhaustive(blocks[b], BlockSpec(b, args.width))
        if cex is not None:
            print(f"FAIL: block {b.value} does not match its golden model: {cex}")
            return 1

    if args.equivalence_check:
        from .mapping import to_aig
        from .aig import check_equivalence

        a = blocks[Block.MUL_TC_TC]
        b_cfg = CONFIGURATIONS["B"]
        comp = build_config_netlist(blocks[b_cfg.encoder], blocks[b_cfg.multiplier], "b")
        if not check_equivalence(to_aig(comp), to_aig(a)):
            print("FAIL: configuration B is not equivalent to configuration A")
            return 1
        print("equivalence check: configuration B == configuration A")

    outdir = Path(args.out_dir) if args.out_dir else _outdir()
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = _manifest(args.seed) if args.manifest else None

    swact_path = outdir / "swact_table.csv"
    rows = swact_table(blocks, config_ids, sigmas, args.cycles, seeds, args.width)
    with open(swact_path, "w", newline="") as f:
        if manifest:
            for k, v in manifest.items():
                f.write(f"# {k}={v}\n")
        w = csv.writer(f)
        w.writerow(["config", "encoder", "multiplier", "sigma",
                    "s_enc", "s_mult", "s_tot", "delta_pct"])
        for r in rows:
            cfg = CONFIGURATIONS[r.config]
            w.writerow([
                r.config,
                cfg.encoder.value if cfg.encoder else "none",
                cfg.multiplier.value, r.sigma,
                f"{r.s_enc:.1f}", f"{r.s_mult:.1f}", f"{r.s_tot:.1f}",
                "" if r.delta_pct is None else f"{r.delta_pct:.1f}",
            ])
    print(f"wrote {swact_path}")

    area_path = outdir / "area_depth.csv"
    arows = area_depth_table(blocks, config_ids)
    with open(area_path, "w", newline="") as f:
        if manifest:
            for k, v in manifest.items():
                f.write(f"# {k}={v}\n")
        w = csv.writer(f)
        w.writerow(["config", "encoder", "multiplier", "t_e", "t_m", "t_tot",
                    "delta_t_pct", "d_e", "d_m", "d_tot", "delta_d_pct"])
        for r in arows:
            cfg = CONFIGURATIONS[r.config]
            w.writerow([
                r.config,
                cfg.encoder.value if cfg.encoder else "none",
                cfg.multiplier.value,
                r.t_e, r.t_m, r.t_tot,
                "" if r.delta_t_pct is None else f"{r.delta_t_pct:.1f}",
                r.d_e, r.d_m, r.d_tot,
                "" if r.delta_d_pct is None else f"{r.delta_d_pct:.1f}",
            ])
    print(f"wrote {area_path}")
    return 0


def cmd_optimize(args) -> int:
    n = CellNetlist.load(args.netlist)
    cfg = OptConfig(
        runs=args.runs,
        iterations=args.iterations,
        chain_length=args.chain,
        parallel_chains=args.parallel_chains,
        iter_metric=args.select,
        final_metric=args.final_select,
        in_format=Format(args.in_format.upper()),
        width=args.width,
        sigma=args.sigma,
        swact_cycles=args.swact_cycles,
        final_cycles=args.final_cycles,
        swact_seed=args.swact_seed,
        master_seed=args.seed,
        sample_every=args.sample_every,
        jobs=args.jobs,
    )
    try:
        result = optimize(n, cfg)
    except IntegrityError as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1

    out = _resolve(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    result.winner.save(out)
    print(f"winner: run {result.winner_run}, {result.winner_transistors} transistors, "
          f"swact {result.winner_swact:.1f} (start had {n.transistor_count()})")
    print(f"wrote {out}")
    manifest = _manifest(args.seed) if args.manifest else None
    if args.trace_csv:
        write_trace_csv(_resolve(args.trace_csv), result.traces, manifest)
        print(f"wrote {_resolve(args.trace_csv)}")
    if args.scatter_csv:
        rows, by_area, by_power = pareto_scatter(result)
        write_scatter_csv(_resolve(args.scatter_csv), rows, manifest)
        print(f"wrote {_resolve(args.scatter_csv)}")
        if by_area and by_power:
            print(f"best-by-area: {by_area['transistors']}t swact {by_area['swact']:.1f}; "
                  f"best-by-power: {by_power['transistors']}t swact {by_power['swact']:.1f}")
    if args.summary_json:
        write_summary_json(_resolve(args.summary_json), result)
        print(f"wrote {_resolve(args.summary_json)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swactlab", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a block netlist")
    g.add_argument("--block", required=True, choices=BLOCK_NAMES)
    g.add_argument("--width", type=int, default=4)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--force", action="store_true")
    g.set_defaults(fn=cmd_generate)

    v = sub.add_parser("verify", help="verify a netlist against its golden model")
    v.add_argument("netlist")
    v.add_argument("--block", required=True, choices=BLOCK_NAMES)
    v.add_argument("--width", type=int, default=4)
    v.set_defaults(fn=cmd_verify)

    s = sub.add_parser("simulate", help="switching activity of one netlist")
    s.add_argument("netlist")
    s.add_argument("--block", required=True, choices=BLOCK_NAMES)
    s.add_argument("--width", type=int, default=4)
    s.add_argument("--sigma", type=float, default=3.0)
    s.add_argument("--cycles", type=int, default=10000)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--wire-table", help="write per-wire toggle CSV here")
    s.set_defaults(fn=cmd_simulate)

    h = sub.add_parser("histogram", help="stimulus value histogram CSV")
    h.add_argument("-o", "--output", required=True)
    h.add_argument("--sigma", type=float, default=3.0)
    h.add_argument("--cycles", type=int, default=10000)
    h.add_argument("--seed", type=int, default=1)
    h.add_argument("--lo", type=int, default=-8)
    h.add_argument("--hi", type=int, default=7)
    h.add_argument("--width", type=int, default=4)
    h.add_argument("--products", action="store_true",
                   help="histogram of products instead of inputs")
    h.set_defaults(fn=cmd_histogram)

    r = sub.add_parser("report", help="configuration comparison tables")
    r.add_argument("--configs", default="A,B,C,D,E")
    r.add_argument("--sigmas", default="2.0,3.0,4.0")
    r.add_argument("--seed", type=int, default=1)
    r.add_argument("--seeds", type=int, default=1, help="median over this many seeds")
    r.add_argument("--cycles", type=int, default=10000)
    r.add_argument("--width", type=int, default=4)
    r.add_argument("--blocks-dir", help="directory with pre-built <block>.json files")
    r.add_argument("--out-dir")
    r.add_argument("--equivalence-check", action="store_true")
    r.add_argument("--manifest", action="store_true")
    r.set_defaults(fn=cmd_report)

    o = sub.add_parser("optimize", help="random-walk rewrite search")
    o.add_argument("netlist")
    o.add_argument("-o", "--output", default="winner.json")
    o.add_argument("--runs", type=int, default=20)
    o.add_argument("--iterations", type=int, default=10)
    o.add_argument("--chain", type=int, default=20)
    o.add_argument("--parallel-chains", type=int, default=1)
    o.add_argument("--select", choices=["transistors", "swact", "both"],
                   default="transistors")
    o.add_argument("--final-select", choices=["transistors", "swact"], default="swact")
    o.add_argument("--in-format", choices=["tc", "tcs", "sm", "sme"], default="tc")
    o.add_argument("--width", type=int, default=4)
    o.add_argument("--sigma", type=float, default=3.0)
    o.add_argument("--swact-cycles", type=int, default=2000)
    o.add_argument("--final-cycles", type=int, default=10000)
    o.add_argument("--swact-seed", type=int, default=7777)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--sample-every", type=int, default=0,
                   help="annotate swact every k steps for the scatter "
                        "(0: only per-run winners are annotated)")
    o.add_argument("--jobs", type=int, default=1)
    o.add_argument("--trace-csv")
    o.add_argument("--scatter-csv")
    o.add_argument("--summary-json")
    o.add_argument("--manifest", action="store_true")
    o.set_defaults(fn=cmd_optimize)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
