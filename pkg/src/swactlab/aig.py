"""And-inverter graph: the rewrite substrate.

Nodes are two-input ANDs over literals with complement flags. Literal
encoding: ``lit = 2*node + complement``; node 0 is constant false, nodes
1..n_inputs are the inputs, AND nodes follow in topological order (fanins
always precede the node). Graphs are immutable values; all rewriting builds
new graphs through ``AigBuilder``.

Simulation is bit-parallel: each node's value over a pattern batch is one
arbitrary-precision integer mask, so exhaustive equivalence checking over
2^n patterns is a single pass over the node list.
"""

from __future__ import annotations

from dataclasses import dataclass, field


def lit(node: int, neg: int = 0) -> int:
    return 2 * node + neg


def lit_node(l: int) -> int:
    return l >> 1


def lit_neg(l: int) -> int:
    return l & 1


def lit_not(l: int) -> int:
    return l ^ 1


CONST0 = 0
CONST1 = 1


@dataclass(frozen=True)
class Aig:
    n_inputs: int
    nodes: tuple[tuple[int, int], ...]
    outputs: tuple[int, ...]
    input_names: tuple[str, ...] = ()
    output_names: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.input_names:
            object.__setattr__(
                self, "input_names", tuple(f"i{k}" for k in range(self.n_inputs))
            )
        if not self.output_names:
            object.__setattr__(
                self, "output_names", tuple(f"o{k}" for k in range(len(self.outputs)))
            )

    @property
    def n_ands(self) -> int:
        return len(self.nodes)

    @property
    def n_nodes(self) -> int:
        return 1 + self.n_inputs + len(self.nodes)

    def first_and(self) -> int:
        return 1 + self.n_inputs

    def is_and(self, node: int) -> bool:
        return node >= 1 + self.n_inputs

    def fanins(self, node: int) -> tuple[int, int]:
        return self.nodes[node - 1 - self.n_inputs]

    def with_names(self, input_names, output_names) -> "Aig":
        return Aig(self.n_inputs, self.nodes, self.outputs, tuple(input_names), tuple(output_names))


class AigBuilder:
    """Structural-hashing builder; folding of constant/trivial ANDs is
    always on, sharing can be disabled for decompression rewrites."""

    def __init__(self, n_inputs: int, strash: bool = True):
        self.n_inputs = n_inputs
        self.nodes: list[tuple[int, int]] = []
        self.strash = strash
        self._hash: dict[tuple[int, int], int] = {}

    def input_lit(self, k: int) -> int:
        return lit(1 + k)

    def and_(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        if a == CONST0:
            return CONST0
        if a == CONST1:
            return b
        if a == b:
            return a
        if a == lit_not(b):
            return CONST0
        key = (a, b)
        if self.strash:
            found = self._hash.get(key)
            if found is not None:
                return found
        node = 1 + self.n_inputs + len(self.nodes)
        self.nodes.append(key)
        out = lit(node)
        if self.strash:
            self._hash[key] = out
        return out

    def or_(self, a: int, b: int) -> int:
        return lit_not(self.and_(lit_not(a), lit_not(b)))

    def xor_(self, a: int, b: int) -> int:
        return lit_not(self.and_(lit_not(self.and_(a, lit_not(b))),
                                 lit_not(self.and_(lit_not(a), b))))

    def mux_(self, sel: int, hi: int, lo: int) -> int:
        return lit_not(self.and_(lit_not(self.and_(sel, hi)),
                                 lit_not(self.and_(lit_not(sel), lo))))

    def maj_(self, a: int, b: int, c: int) -> int:
        return self.or_(self.and_(a, b), self.and_(c, self.or_(a, b)))

    def finish(self, outputs, input_names=(), output_names=()) -> Aig:
        return Aig(self.n_inputs, tuple(self.nodes), tuple(outputs),
                   tuple(input_names), tuple(output_names))


# -- simulation --------------------------------------------------------------

def input_masks(n_inputs: int) -> tuple[list[int], int]:
    """Standard exhaustive masks: bit p of mask i is input i in pattern p."""
    n_pat = 1 << n_inputs
    full = (1 << n_pat) - 1
    masks = []
    for i in range(n_inputs):
        block = (1 << (1 << i)) - 1
        m = block << (1 << i)
        span = 1 << (i + 1)
        while span < n_pat:
            m |= m << span
            span <<= 1
        masks.append(m & full)
    return masks, full


def simulate(aig: Aig, in_masks: list[int], full: int) -> list[int]:
    """Node masks for a pattern batch described by per-input masks."""
    masks = [0] * aig.n_nodes
    for i in range(aig.n_inputs):
        masks[1 + i] = in_masks[i]

    def lm(l: int) -> int:
        m = masks[l >> 1]
        return m ^ full if l & 1 else m

    base = aig.first_and()
    for k, (a, b) in enumerate(aig.nodes):
        masks[base + k] = lm(a) & lm(b)
    return masks


def output_tts(aig: Aig) -> tuple[int, ...]:
    """Exhaustive truth tables of every output (n_inputs <= 20)."""
    if aig.n_inputs > 20:
        raise ValueError(f"exhaustive simulation unsupported for {aig.n_inputs} inputs")
    in_masks, full = input_masks(aig.n_inputs)
    masks = simulate(aig, in_masks, full)
    return tuple((masks[l >> 1] ^ (full if l & 1 else 0)) for l in aig.outputs)


def check_equivalence(a: Aig, b: Aig) -> bool:
    """Exhaustive truth-table comparison of two graphs."""
    if a.n_inputs != b.n_inputs or len(a.outputs) != len(b.outputs):
        raise ValueError("arity mismatch")
    return output_tts(a) == output_tts(b)


# -- structure queries --------------------------------------------------------

def fanout_counts(aig: Aig) -> list[int]:
    counts = [0] * aig.n_nodes
    for a, b in aig.nodes:
        counts[a >> 1] += 1
        counts[b >> 1] += 1
    for l in aig.outputs:
        counts[l >> 1] += 1
    return counts


def levels(aig: Aig) -> list[int]:
    lv = [0] * aig.n_nodes
    base = aig.first_and()
    for k, (a, b) in enumerate(aig.nodes):
        lv[base + k] = 1 + max(lv[a >> 1], lv[b >> 1])
    return lv


def depth(aig: Aig) -> int:
    lv = levels(aig)
    return max((lv[l >> 1] for l in aig.outputs), default=0)


def reachable(aig: Aig) -> list[bool]:
    mark = [False] * aig.n_nodes
    stack = [l >> 1 for l in aig.outputs]
    while stack:
        n = stack.pop()
        if mark[n]:
            continue
        mark[n] = True
        if aig.is_and(n):
            a, b = aig.fanins(n)
            stack.append(a >> 1)
            stack.append(b >> 1)
    return mark


def rebuild(aig: Aig, strash: bool = True, litmap_init: dict[int, int] | None = None,
            replace=None) -> Aig:
    """Copy the graph bottom-up through a builder.

    litmap_init seeds node -> new-literal mappings (e.g. constants for
    cofactoring). ``replace`` may map a node id to a callable
    ``(builder, get_lit) -> lit`` that produces the node's replacement.
    Dead nodes are dropped.
    """
    live = reachable(aig)
    bld = AigBuilder(aig.n_inputs, strash=strash)
    litmap: dict[int, int] = {0: CONST0}
    for i in range(aig.n_inputs):
        litmap[1 + i] = lit(1 + i)
    if litmap_init:
        litmap.update(litmap_init)

    def get_lit(l: int) -> int:
        m = litmap[l >> 1]
        return m ^ (l & 1)

    base = aig.first_and()
    for k, (a, b) in enumerate(aig.nodes):
        node = base + k
        if node in litmap:
            continue
        if not live[node]:
            continue
        if replace and node in replace:
            litmap[node] = replace[node](bld, get_lit)
        else:
            litmap[node] = bld.and_(get_lit(a), get_lit(b))
    outs = [get_lit(l) for l in aig.outputs]
    return bld.finish(outs, aig.input_names, aig.output_names)


def clean(aig: Aig) -> Aig:
    """Structural hash + constant propagation + dead-node removal.

    Two passes: folding in the first can orphan nodes that the old-graph
    liveness check still considered reachable.
    """
    return rebuild(rebuild(aig, strash=True), strash=True)


def dump(aig: Aig) -> str:
    """Text dump: one `id AND left right` line per node, `!` = complement."""
    fmt = lambda l: ("!" if l & 1 else "") + str(l >> 1)
    lines = [f"aig inputs={aig.n_inputs} ands={aig.n_ands} outputs={len(aig.outputs)}"]
    for i in range(aig.n_inputs):
        lines.append(f"input {1 + i} {aig.input_names[i]}")
    base = aig.first_and()
    for k, (a, b) in enumerate(aig.nodes):
        lines.append(f"{base + k} AND {fmt(a)} {fmt(b)}")
    for name, l in zip(aig.output_names, aig.outputs):
        lines.append(f"output {name} {fmt(l)}")
    return "\n".join(lines) + "\n"
