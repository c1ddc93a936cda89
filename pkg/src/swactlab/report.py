"""Configuration-level reporting: the five encoder/multiplier pairings.

A configuration pairs an optional encoder (instantiated once per operand)
with a multiplier. Composite metrics follow the two-encoder composition:
t_tot = 2*t_e + t_m and d_tot = d_e + d_m; composite switching activity is
s_tot = 2*s_enc + s_mult.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .formats import Format, representable_range
from .generators import Block, BlockSpec, build_block
from .netlist import Cell, CellNetlist, MetricsReport
from .sim import StimulusSpec, SwactReport, config_swact, swact


@dataclass(frozen=True)
class ConfigDef:
    id: str
    encoder: Block | None
    multiplier: Block


CONFIGURATIONS = {
    "A": ConfigDef("A", None, Block.MUL_TC_TC),
    "B": ConfigDef("B", Block.ENC_TC_SME, Block.MUL_SME_TC),
    "C": ConfigDef("C", Block.ENC_TC_SM, Block.MUL_SM_TC),
    "D": ConfigDef("D", Block.ENC_TCS_SM, Block.MUL_SM_TC),
    "E": ConfigDef("E", None, Block.MUL_SM_SM),
}


def config_blocks(cfg: ConfigDef) -> list[Block]:
    blocks = [] if cfg.encoder is None else [cfg.encoder]
    return blocks + [cfg.multiplier]


def build_config_netlist(enc: CellNetlist | None, mul: CellNetlist, name: str) -> CellNetlist:
    """Compose one encoder instance per operand in front of a multiplier."""
    if enc is None:
        return CellNetlist(name, mul.inputs, mul.outputs, mul.cells)
    width = len(enc.inputs)
    if len(mul.inputs) != 2 * width:
        raise ValueError("encoder/multiplier widths do not match")
    cells: list[Cell] = []
    inputs: list[str] = []
    cid = 0
    mul_port_of: dict[str, str] = {}
    for k in range(2):
        prefix = f"u{k}_"
        rename = {w: prefix + w for w in enc.wires}
        for w, port in zip(enc.inputs, mul.inputs[k * width : (k + 1) * width]):
            inputs.append(rename[w])
        for w, port in zip(enc.outputs, mul.inputs[k * width : (k + 1) * width]):
            mul_port_of[port] = rename[w]
        for c in enc.cells:
            cells.append(
                Cell(cid, c.kind, tuple(rename[w] for w in c.inputs), rename[c.output])
            )
            cid += 1
    def mmap(w):
        return mul_port_of.get(w, "m_" + w)

    for c in mul.cells:
        cells.append(Cell(cid, c.kind, tuple(mmap(w) for w in c.inputs), mmap(c.output)))
        cid += 1
    outputs = [mmap(w) for w in mul.outputs]
    return CellNetlist(name, inputs, outputs, cells)


def stimulus_for_block(block: Block, sigma: float, cycles: int, seed: int) -> StimulusSpec:
    """Stimulus parameters for a block: clipped to its input format range."""
    spec = BlockSpec(block)
    rng = spec.in_range
    return StimulusSpec(
        sigma=sigma,
        cycles=cycles,
        seed=seed,
        lo=rng.lo,
        hi=rng.hi,
        operands=spec.operands,
    )


def block_swact(
    n: CellNetlist, block: Block, sigma: float, cycles: int, seed: int, width: int = 4
) -> SwactReport:
    spec = BlockSpec(block, width)
    stim = StimulusSpec(
        sigma=sigma, cycles=cycles, seed=seed,
        lo=spec.in_range.lo, hi=spec.in_range.hi, operands=spec.operands,
    )
    return swact(n, stim, spec.in_format, width)


def median_block_swact(
    n: CellNetlist, block: Block, sigma: float, cycles: int, seeds, width: int = 4
) -> float:
    return statistics.median(
        block_swact(n, block, sigma, cycles, s, width).s for s in seeds
    )


@dataclass(frozen=True)
class ConfigSwactRow:
    config: str
    sigma: float
    s_enc: float
    s_mult: float
    s_tot: float
    delta_pct: float | None  # vs configuration A; None when A not included


@dataclass(frozen=True)
class ConfigAreaDepthRow:
    config: str
    t_e: int
    t_m: int
    t_tot: int
    delta_t_pct: float | None
    d_e: int
    d_m: int
    d_tot: int
    delta_d_pct: float | None


def default_blocks(width: int = 4) -> dict[Block, CellNetlist]:
    return {b: build_block(BlockSpec(b, width)) for b in Block}


def swact_table(
    blocks: dict[Block, CellNetlist],
    config_ids=("A", "B", "C", "D", "E"),
    sigmas=(2.0, 3.0, 4.0),
    cycles: int = 10000,
    seeds=(1,),
    width: int = 4,
) -> list[ConfigSwactRow]:
    rows = []
    baseline: dict[float, float] = {}
    for sigma in sigmas:
        for cid in config_ids:
            cfg = CONFIGURATIONS[cid]
            if cfg.encoder is not None:
                s_enc = median_block_swact(blocks[cfg.encoder], cfg.encoder, sigma, cycles, seeds, width)
            else:
                s_enc = 0.0
            s_mult = median_block_swact(blocks[cfg.multiplier], cfg.multiplier, sigma, cycles, seeds, width)
            s_tot = 2.0 * s_enc + s_mult
            if cid == "A":
                baseline[sigma] = s_tot
            base = baseline.get(sigma)
            delta = None if base is None else 100.0 * (s_tot - base) / base
            rows.append(ConfigSwactRow(cid, sigma, s_enc, s_mult, s_tot, delta))
    return rows


def area_depth_table(
    blocks: dict[Block, CellNetlist],
    config_ids=("A", "B", "C", "D", "E"),
) -> list[ConfigAreaDepthRow]:
    rows = []
    base_t = base_d = None
    for cid in config_ids:
        cfg = CONFIGURATIONS[cid]
        if cfg.encoder is not None:
            me = MetricsReport.of(blocks[cfg.encoder])
            t_e, d_e = me.transistors, me.depth
        else:
            t_e = d_e = 0
        mm = MetricsReport.of(blocks[cfg.multiplier])
        t_tot = 2 * t_e + mm.transistors
        d_tot = d_e + mm.depth
        if cid == "A":
            base_t, base_d = t_tot, d_tot
        dt = None if base_t is None else 100.0 * (t_tot - base_t) / base_t
        dd = None if base_d is None else 100.0 * (d_tot - base_d) / base_d
        rows.append(ConfigAreaDepthRow(cid, t_e, mm.transistors, t_tot, dt, d_e, mm.depth, d_tot, dd))
    return rows
