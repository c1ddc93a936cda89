import pytest

from swactlab.generators import Block, BlockSpec, build_block, verify_exhaustive
from swactlab.search import OptConfig, optimize

# Equal-effort budget shared by the block-comparison acceptance criteria:
# every block is optimized with the same search parameters and master seed.
EQUAL_EFFORT = dict(
    runs=6,
    iterations=10,
    chain_length=20,
    iter_metric="transistors",
    final_metric="swact",
    sigma=3.0,
    swact_cycles=2000,
    final_cycles=10000,
    master_seed=2025,
    jobs=3,
)


@pytest.fixture(scope="session")
def optimized_blocks():
    """All seven blocks after equal-effort optimization."""
    blocks = {}
    for block in Block:
        spec = BlockSpec(block, 4)
        seed_netlist = build_block(spec)
        cfg = OptConfig(in_format=spec.in_format, width=4, **EQUAL_EFFORT)
        result = optimize(seed_netlist, cfg)
        assert verify_exhaustive(result.winner, spec) is None
        blocks[block] = result.winner
    return blocks
