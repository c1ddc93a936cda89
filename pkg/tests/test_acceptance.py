"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Functional criteria are exact; power/area criteria are directional or
ratio-based (absolute magnitudes depend on the transistor cost table) and
run on the equal-effort-optimized blocks from conftest. The search criteria
run a reduced-budget guided-vs-unguided experiment on the signed baseline
multiplier.
"""

import statistics
import time

import pytest

from swactlab.aig import check_equivalence, output_tts
from swactlab.cli import main as cli_main
from swactlab.formats import Format, decode, encode, BitWord
from swactlab.generators import Block, BlockSpec, build_block, verify_exhaustive
from swactlab.mapping import to_aig
from swactlab.netlist import MetricsReport
from swactlab.recipes import RECIPES, apply_recipe
from swactlab.report import CONFIGURATIONS, build_config_netlist, median_block_swact
from swactlab.search import OptConfig, optimize, pareto_scatter
from swactlab.sim import SwactReport, config_swact

SEEDS = (101, 102, 103, 104, 105)
SIGMAS = (2.0, 3.0, 4.0)
CYCLES = 10000


def _verdict(criterion: int, ok: bool, detail: str):
    print(f"ACCEPTANCE {criterion:2d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="session")
def swact_medians(optimized_blocks):
    table = {}
    for block, netlist in optimized_blocks.items():
        for sigma in SIGMAS:
            table[(block, sigma)] = median_block_swact(
                netlist, block, sigma, CYCLES, SEEDS
            )
    return table


def _config_total(table, config_id: str, sigma: float) -> float:
    cfg = CONFIGURATIONS[config_id]
    s_enc = table[(cfg.encoder, sigma)] if cfg.encoder else 0.0
    return 2.0 * s_enc + table[(cfg.multiplier, sigma)]


@pytest.fixture(scope="session")
def search_experiment():
    """Guided vs unguided search on the signed baseline multiplier at equal
    budget: 20 runs x 400 steps each."""
    start = build_block(BlockSpec(Block.MUL_TC_TC, 4))
    common = dict(
        runs=20, iter_metric="transistors", final_metric="swact",
        in_format=Format.TC, width=4, sigma=3.0,
        swact_cycles=2000, final_cycles=10000, master_seed=424242,
        sample_every=1, jobs=3,
    )
    t0 = time.perf_counter()
    guided = optimize(start, OptConfig(iterations=20, chain_length=20, **common))
    unguided = optimize(start, OptConfig(iterations=1, chain_length=400, **common))
    elapsed = time.perf_counter() - t0
    return guided, unguided, elapsed


def test_criterion_1_exhaustive_correctness():
    t0 = time.perf_counter()
    for block in Block:
        spec = BlockSpec(block, 4)
        cex = verify_exhaustive(build_block(spec), spec)
        assert cex is None, f"{block.value}: {cex}"
    elapsed = time.perf_counter() - t0
    _verdict(1, elapsed < 1.0,
             f"all blocks match their golden models exhaustively in {elapsed:.2f}s")


def test_criterion_2_config_b_equals_a():
    mul_a = build_block(BlockSpec(Block.MUL_TC_TC, 4))
    enc = build_block(BlockSpec(Block.ENC_TC_SME, 4))
    mul_b = build_block(BlockSpec(Block.MUL_SME_TC, 4))
    comp = build_config_netlist(enc, mul_b, "config_b")
    mismatches = 0
    for a in range(-8, 8):
        for b in range(-8, 8):
            bits = encode(a, Format.TC, 4).bits + encode(b, Format.TC, 4).bits
            sa = mul_a.output_bits(mul_a.evaluate(dict(zip(mul_a.inputs, bits))))
            sb = comp.output_bits(comp.evaluate(dict(zip(comp.inputs, bits))))
            mismatches += sa != sb
    _verdict(2, mismatches == 0,
             f"decomposed configuration B equals A on all 256 pairs "
             f"({mismatches} mismatches)")


def test_criterion_3_config_c_clipping():
    mul_a = build_block(BlockSpec(Block.MUL_TC_TC, 4))
    enc = build_block(BlockSpec(Block.ENC_TC_SM, 4))
    mul_c = build_block(BlockSpec(Block.MUL_SM_TC, 4))
    comp = build_config_netlist(enc, mul_c, "config_c")
    clip = lambda v: -7 if v == -8 else v
    bad = 0
    for a in range(-8, 8):
        for b in range(-8, 8):
            bits = encode(a, Format.TC, 4).bits + encode(b, Format.TC, 4).bits
            got = decode(BitWord(comp.output_bits(
                comp.evaluate(dict(zip(comp.inputs, bits))))), Format.TC)
            bad += got != clip(a) * clip(b)
    _verdict(3, bad == 0,
             f"configuration C equals A with -8 clipped to -7 ({bad} mismatches)")


def test_criterion_4_sme_corners():
    mul = build_block(BlockSpec(Block.MUL_SME_TC, 4))

    def run(a, b):
        bits = encode(a, Format.SME, 4).bits + encode(b, Format.SME, 4).bits
        return decode(BitWord(mul.output_bits(
            mul.evaluate(dict(zip(mul.inputs, bits))))), Format.TC)

    ok = run(-8, 3) == -24 and run(-8, -8) == 64
    _verdict(4, ok, f"(-8)*3 = {run(-8, 3)}, (-8)*(-8) = {run(-8, -8)}")


def test_criterion_5_recipe_safety():
    t0 = time.perf_counter()
    seeds = {b: to_aig(build_block(BlockSpec(b, 4)))
             for b in Block if not BlockSpec(b, 4).is_encoder}
    refs = {b: output_tts(a) for b, a in seeds.items()}
    checked = 0
    for recipe in RECIPES:
        for block, aig in seeds.items():
            for k in range(100):
                out = apply_recipe(aig, recipe, 10_000 * recipe.id + k)
                assert output_tts(out) == refs[block], (recipe.name, block.value, k)
                checked += 1
    elapsed = time.perf_counter() - t0
    _verdict(5, elapsed < 30.0,
             f"{checked} recipe applications all equivalence-safe in {elapsed:.1f}s")


def test_criterion_6_swact_ordering_sigma2(swact_medians):
    s = {cid: _config_total(swact_medians, cid, 2.0) for cid in "ABCDE"}
    ok = s["E"] < s["D"] <= s["C"] < s["B"] < s["A"]
    _verdict(6, ok, "sigma=2 ordering E<D<=C<B<A: " +
             "  ".join(f"{cid}={v:.1f}" for cid, v in s.items()))


def test_criterion_7_b_savings_sigma3(swact_medians):
    s_a = _config_total(swact_medians, "A", 3.0)
    s_b = _config_total(swact_medians, "B", 3.0)
    saving = 100.0 * (s_a - s_b) / s_a
    _verdict(7, 5.0 <= saving <= 25.0,
             f"B saves {saving:.1f}% vs A at sigma=3 (required 5..25%)")


def test_criterion_8_e_savings_sigma2(swact_medians):
    s_a = _config_total(swact_medians, "A", 2.0)
    s_e = _config_total(swact_medians, "E", 2.0)
    saving = 100.0 * (s_a - s_e) / s_a
    _verdict(8, saving >= 50.0,
             f"E saves {saving:.1f}% vs A at sigma=2 (required >=50%)")


def test_criterion_9_sigma_monotonicity(swact_medians):
    worst = None
    for block in Block:
        s2, s3, s4 = (swact_medians[(block, s)] for s in SIGMAS)
        for lo, hi, pair in ((s2, s3, "2->3"), (s3, s4, "3->4")):
            slack = (lo - hi) / hi if hi else 0.0
            if worst is None or slack > worst[0]:
                worst = (slack, block.value, pair)
        ok_block = s2 <= s3 * 1.02 and s3 <= s4 * 1.02
        assert ok_block, (block.value, s2, s3, s4)
    _verdict(9, True,
             f"median swact non-decreasing in sigma for every block "
             f"(worst violation margin {100 * worst[0]:.2f}% on {worst[1]} {worst[2]})")


def test_criterion_10_composition_identities(optimized_blocks):
    mk = lambda s: SwactReport(block="x", s=s, sigma=3.0, cycles=CYCLES, seed=1)
    r = config_swact(mk(44.0), mk(116.0))
    ok = r.s_tot == 2 * 44.0 + 116.0 == 204.0
    for cid in "BCD":
        cfg = CONFIGURATIONS[cid]
        me = MetricsReport.of(optimized_blocks[cfg.encoder])
        mm = MetricsReport.of(optimized_blocks[cfg.multiplier])
        t_tot = 2 * me.transistors + mm.transistors
        d_tot = me.depth + mm.depth
        ok = ok and t_tot == 2 * me.transistors + mm.transistors
        ok = ok and d_tot == me.depth + mm.depth
    _verdict(10, ok, "s_tot = 2*s_enc + s_mult, t_tot = 2*t_e + t_m, "
                     "d_tot = d_e + d_m hold by construction")


def test_criterion_11_guided_beats_unguided(search_experiment):
    guided, unguided, elapsed = search_experiment
    med_g = statistics.median(rb["transistors"] for rb in guided.run_bests)
    med_u = statistics.median(rb["transistors"] for rb in unguided.run_bests)
    ok = med_g <= med_u and elapsed < 600.0
    _verdict(11, ok,
             f"median final transistors guided {med_g} <= unguided {med_u} "
             f"(20 runs x 400 steps each, {elapsed:.0f}s)")


def test_criterion_12_power_vs_area_pick(search_experiment):
    guided, _unguided, _elapsed = search_experiment
    rows, by_area, by_power = pareto_scatter(guided)
    gap = 100.0 * (by_area["swact"] - by_power["swact"]) / by_area["swact"]
    _verdict(12, gap >= 3.0,
             f"best-by-power pick has {gap:.1f}% lower swact than best-by-area "
             f"({by_power['swact']:.1f} vs {by_area['swact']:.1f} a.u.)")


def test_criterion_13_determinism(tmp_path):
    src = tmp_path / "start.json"
    assert cli_main(["generate", "--block", "mul-sm-tc", "-o", str(src)]) == 0
    flags = ["--runs", "3", "--iterations", "3", "--chain", "8",
             "--select", "transistors", "--final-select", "swact",
             "--in-format", "sm", "--sigma", "3", "--seed", "99",
             "--swact-cycles", "1000", "--final-cycles", "2000",
             "--sample-every", "4"]
    outs = []
    for tag in ("x", "y"):
        w = tmp_path / f"{tag}_w.json"
        t = tmp_path / f"{tag}_t.csv"
        s = tmp_path / f"{tag}_s.csv"
        assert cli_main(["optimize", str(src), "-o", str(w),
                         "--trace-csv", str(t), "--scatter-csv", str(s)] + flags) == 0
        outs.append((w.read_bytes(), t.read_bytes(), s.read_bytes()))
    ok = outs[0] == outs[1]
    _verdict(13, ok, "two identical invocations produce byte-identical "
                     "winner netlists and traces")


def test_criterion_14_transistor_ordering(optimized_blocks):
    t = {b: optimized_blocks[b].transistor_count()
         for b in (Block.MUL_SM_SM, Block.MUL_SM_TC, Block.MUL_SME_TC, Block.MUL_TC_TC)}
    t_ss, t_st, t_se, t_tt = (t[Block.MUL_SM_SM], t[Block.MUL_SM_TC],
                              t[Block.MUL_SME_TC], t[Block.MUL_TC_TC])
    strict = t_ss < t_st < t_se <= t_tt
    # one swap tolerated on the middle pair (sm-tc vs sme-tc)
    swapped = t_ss < t_se < t_st <= t_tt
    _verdict(14, strict or swapped,
             f"t ordering sm-sm {t_ss} / sm-tc {t_st} / sme-tc {t_se} / tc-tc {t_tt}")


def test_criterion_15_depth_penalty(optimized_blocks):
    d = {b: optimized_blocks[b].depth() for b in Block}
    d_a = d[Block.MUL_TC_TC]
    d_b = d[Block.ENC_TC_SME] + d[Block.MUL_SME_TC]
    d_d = d[Block.ENC_TCS_SM] + d[Block.MUL_SM_TC]
    ok = d_b > d_a and d_d > d_a
    _verdict(15, ok, f"depth: d(A)={d_a}, d_tot(B)={d_b}, d_tot(D)={d_d} "
                     f"(decomposition must increase depth)")
