#!/usr/bin/env python3
"""Benchmark: compiled toggle-counting kernel vs the pure-Python fallback.

Runs the switching-activity inner loop (cycle-based netlist simulation plus
per-wire toggle counting) on generated multiplier blocks with both backends
and reports throughput and the speedup. Results must agree bit-for-bit.

Usage: python benchmarks/bench_kernels.py [--cycles 10000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from swactlab import _simpy
from swactlab.formats import Format
from swactlab.generators import Block, BlockSpec, build_block
from swactlab.sim import StimulusSpec, encode_stimuli, sample_stimuli

try:
    from swactlab import _simcore
except ImportError:
    _simcore = None


def bench(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cycles", type=int, default=10000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _simcore is None:
        print("compiled kernel not built; showing pure-Python numbers only")

    print(f"{'block':14s} {'cells':>5s} {'wires':>5s} "
          f"{'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for block in (Block.MUL_SM_SM, Block.MUL_TC_TC, Block.MUL_SME_TC):
        spec = BlockSpec(block, 4)
        n = build_block(spec)
        stim_spec = StimulusSpec(
            sigma=3.0, cycles=args.cycles, seed=1,
            lo=spec.in_range.lo, hi=spec.in_range.hi, operands=2,
        )
        stim = encode_stimuli(sample_stimuli(stim_spec), spec.in_format, 4)
        op, in0, in1, in2, out, inw, _wt, wire_ids = n.kernel_arrays()
        call = (op, in0, in1, in2, out, inw, stim, len(wire_ids))

        t_py, r_py = bench(_simpy.count_toggles, call, args.repeat)
        row = (f"{block.value:14s} {len(n.cells):5d} {len(wire_ids):5d} "
               f"{args.cycles / t_py / 1e6:7.2f}Mc/s")
        if _simcore is not None:
            t_c, r_c = bench(_simcore.count_toggles, call, args.repeat)
            assert np.array_equal(np.asarray(r_c), r_py), "backends disagree"
            row += f" {args.cycles / t_c / 1e6:7.2f}Mc/s {t_py / t_c:7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
