"""Cycle-based simulation: clipped-Gaussian stimuli and switching activity.

The switching-activity model: simulate the netlist for N cycles with a fresh
stimulus each cycle, count per-wire state changes between consecutive cycles,
weight each wire by the total transistor count of its fan-out cells, and
average over the N-1 transitions. Output ports have no fan-out cells and
contribute nothing.

Stimuli are i.i.d. integers: Normal(mu, sigma) samples via inverse-CDF over
a seeded PCG64 stream, rounded half away from zero, clipped into the allowed
range. The generator identity string is recorded in every report.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import ndtri

from . import kernels
from .formats import Format, encode
from .netlist import CellNetlist, NetlistError

RNG_ID = "pcg64-invcdf"


@dataclass(frozen=True)
class StimulusSpec:
    sigma: float
    mu: float = 0.0
    cycles: int = 10000
    seed: int = 0
    lo: int = -8
    hi: int = 7
    operands: int = 2

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.cycles < 2:
            raise ValueError("cycles must be >= 2")
        if not (self.lo <= 0 <= self.hi):
            raise ValueError("range must contain 0")
        if self.operands < 1:
            raise ValueError("operands must be >= 1")


@dataclass(frozen=True)
class SwactReport:
    block: str
    s: float
    sigma: float
    cycles: int
    seed: int
    rng: str = RNG_ID
    s_enc: float | None = None
    s_mult: float | None = None

    @property
    def s_tot(self) -> float:
        return self.s


def sample_stimuli(spec: StimulusSpec) -> np.ndarray:
    """(cycles, operands) int64 matrix of clipped, rounded Gaussian draws."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    u = rng.random((spec.cycles, spec.operands))
    x = spec.mu + spec.sigma * ndtri(u)
    rounded = np.copysign(np.floor(np.abs(x) + 0.5), x)
    return np.clip(rounded, spec.lo, spec.hi).astype(np.int64)


def encode_stimuli(values: np.ndarray, fmt: Format, width: int) -> np.ndarray:
    """Map a (cycles, operands) value matrix to a (cycles, operands*width)
    bit matrix, operand-major, LSB-first."""
    lo = int(values.min())
    hi = int(values.max())
    table = np.zeros((hi - lo + 1, width), dtype=np.uint8)
    for v in range(lo, hi + 1):
        table[v - lo] = encode(v, fmt, width).bits
    cycles, operands = values.shape
    bits = table[values - lo]  # (cycles, operands, width)
    return bits.reshape(cycles, operands * width)


def wire_activity(n: CellNetlist, spec: StimulusSpec, fmt: Format, width: int):
    """Per-wire toggle counts and weights. Returns (names, toggles, weights)."""
    if len(n.inputs) != spec.operands * width:
        raise NetlistError(
            f"{n.name}: {len(n.inputs)} input ports, stimulus provides "
            f"{spec.operands}x{width} bits"
        )
    values = sample_stimuli(spec)
    stim = encode_stimuli(values, fmt, width)
    op, in0, in1, in2, out, input_wires, weights, wire_ids = n.kernel_arrays()
    toggles = kernels.count_toggles(op, in0, in1, in2, out, input_wires, stim, len(wire_ids))
    names = sorted(wire_ids, key=wire_ids.get)
    return names, toggles, weights


def swact_on_bits(n: CellNetlist, stim: np.ndarray) -> float:
    """Switching activity for an explicit (cycles, n_inputs) bit stream."""
    if stim.ndim != 2 or stim.shape[1] != len(n.inputs):
        raise NetlistError(f"stimulus must be (cycles, {len(n.inputs)})")
    if stim.shape[0] < 2:
        raise NetlistError("need at least 2 cycles")
    op, in0, in1, in2, out, input_wires, weights, wire_ids = n.kernel_arrays()
    stim = np.ascontiguousarray(stim, dtype=np.uint8)
    toggles = kernels.count_toggles(op, in0, in1, in2, out, input_wires, stim, len(wire_ids))
    return float(np.dot(toggles, weights)) / (stim.shape[0] - 1)


def swact(n: CellNetlist, spec: StimulusSpec, fmt: Format, width: int) -> SwactReport:
    """Fan-out-weighted switching activity of one block."""
    _names, toggles, weights = wire_activity(n, spec, fmt, width)
    s = float(np.dot(toggles, weights)) / (spec.cycles - 1)
    return SwactReport(block=n.name, s=s, sigma=spec.sigma, cycles=spec.cycles, seed=spec.seed)


def config_swact(enc_report: SwactReport | None, mult_report: SwactReport) -> SwactReport:
    """Composite activity of a two-encoder + multiplier configuration."""
    if enc_report is not None:
        if enc_report.sigma != mult_report.sigma:
            raise ValueError("sigma mismatch between encoder and multiplier reports")
        if enc_report.cycles != mult_report.cycles:
            raise ValueError("cycle-count mismatch between encoder and multiplier reports")
    s_enc = enc_report.s if enc_report is not None else 0.0
    s_tot = 2.0 * s_enc + mult_report.s
    return SwactReport(
        block=mult_report.block,
        s=s_tot,
        sigma=mult_report.sigma,
        cycles=mult_report.cycles,
        seed=mult_report.seed,
        s_enc=s_enc,
        s_mult=mult_report.s,
    )


def value_histogram(
    spec: StimulusSpec, through: Callable[[int, int], int] | None = None
) -> list[tuple[int, int]]:
    """Histogram of sampled input values, or of products when a golden
    multiplier model is supplied."""
    values = sample_stimuli(spec)
    if through is None:
        flat = values.reshape(-1)
    else:
        if spec.operands != 2:
            raise ValueError("product histogram needs 2 operands")
        flat = np.array([through(int(a), int(b)) for a, b in values])
    uniq, counts = np.unique(flat, return_counts=True)
    return [(int(v), int(c)) for v, c in zip(uniq, counts)]


# -- CSV emission -----------------------------------------------------------

def write_wire_table(path, n: CellNetlist, spec: StimulusSpec, fmt: Format, width: int) -> None:
    names, toggles, weights = wire_activity(n, spec, fmt, width)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["wire", "toggles", "fanout_cost", "weighted"])
        for name, t, c in zip(names, toggles, weights):
            w.writerow([name, int(t), int(c), int(t) * int(c)])


def write_report_rows(path, reports: list[SwactReport]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["block", "sigma", "seed", "cycles", "s"])
        for r in reports:
            w.writerow([r.block, r.sigma, r.seed, r.cycles, f"{r.s:.4f}"])


def write_histogram(path, hist: list[tuple[int, int]]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["value", "count"])
        for v, c in hist:
            w.writerow([v, c])
