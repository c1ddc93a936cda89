"""The catalogue of 30 function-preserving rewrite recipes.

Ten compression recipes (ids 0-9) aim to shrink the node count; twenty
decompression recipes (ids 10-29) restructure or grow the graph to escape
local optima. Every recipe maps Aig -> Aig, preserves the boolean function
of every output, and is deterministic given (graph, recipe, step_seed).

Compression family: structural hash + constant propagation; cut rewriting
over 4-input cuts against the synthesized small-function table (strict,
zero-gain, depth-preserving); cone refactoring in two sizes; functional
resubstitution (0- and 1-resub); size balancing; observability-don't-care
redundancy removal.

Decompression family: distributivity (De Morgan) re-expression over random
node subsets; Shannon expansion of output cones on a random input; random
duplication of high-fan-out nodes; tree re-association toward deeper or
shallower shapes; re-grouping of XOR-shaped subgraphs; randomized local
resynthesis with a node-count slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import ttsynth
from .aig import (
    Aig,
    AigBuilder,
    CONST0,
    CONST1,
    clean,
    fanout_counts,
    input_masks,
    levels,
    lit,
    lit_not,
    reachable,
    rebuild,
    simulate,
)

COMPRESSION = "compression"
DECOMPRESSION = "decompression"

# Decompression recipes leave graphs beyond this size untouched so long
# random walks cannot blow up memory or stall on pass runtimes; compression
# still applies.
GROWTH_GUARD = 1000

# Truth-table based passes need exhaustive simulation; above this input
# count they degrade to plain structural cleanup.
TT_INPUT_LIMIT = 12


# -- shared helpers -----------------------------------------------------------

def _lm(masks, l, full):
    m = masks[l >> 1]
    return m ^ full if l & 1 else m


def node_cut(aig: Aig, node: int, k: int) -> list[int]:
    """Greedy bounded cut: expand the deepest AND leaf while size fits."""
    fa, fb = aig.fanins(node)
    leaves = {fa >> 1, fb >> 1}
    while True:
        expanded = False
        for cand in sorted((n for n in leaves if aig.is_and(n)), reverse=True):
            ca, cb = aig.fanins(cand)
            trial = (leaves - {cand}) | {ca >> 1, cb >> 1}
            if len(trial) <= k:
                leaves = trial
                expanded = True
                break
        if not expanded:
            return sorted(leaves)


def cone_nodes(aig: Aig, node: int, leaves: set[int]) -> set[int]:
    cone = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if n in cone or n in leaves or not aig.is_and(n):
            continue
        cone.add(n)
        a, b = aig.fanins(n)
        stack.append(a >> 1)
        stack.append(b >> 1)
    return cone


def cut_tt(aig: Aig, node: int, leaves: list[int], cone: set[int]) -> int:
    """Local function of the node over its cut leaves."""
    k = len(leaves)
    var_masks, full = input_masks(k)
    masks = {}
    for i, lf in enumerate(leaves):
        masks[lf] = 0 if lf == 0 else var_masks[i]
    for n in sorted(cone):
        a, b = aig.fanins(n)
        ma = masks[a >> 1] ^ (full if a & 1 else 0)
        mb = masks[b >> 1] ^ (full if b & 1 else 0)
        masks[n] = ma & mb
    return masks[node]


def mffc_size(aig: Aig, node: int, leaves: set[int], refs: list[int]) -> int:
    """Nodes freed when the node is replaced, stopping at the cut leaves."""
    dec: dict[int, int] = {}

    def deref(n: int) -> int:
        count = 1
        for f in aig.fanins(n):
            m = f >> 1
            if not aig.is_and(m) or m in leaves:
                continue
            dec[m] = dec.get(m, 0) + 1
            if refs[m] - dec[m] == 0:
                count += deref(m)
        return count

    return deref(node)


def _expr_replacer(expr, leaves):
    leaf_lits = [lit(n) for n in leaves]

    def repl(bld, get_lit):
        return ttsynth.instantiate(bld, expr, [get_lit(l) for l in leaf_lits])

    return repl


def _lit_replacer(target_lit):
    def repl(bld, get_lit):
        return get_lit(target_lit)

    return repl


def _sweep(aig: Aig) -> Aig:
    """Dead-node removal without structural hashing."""
    return rebuild(aig, strash=False)


# -- compression --------------------------------------------------------------

def c_clean(aig: Aig, rng=None) -> Aig:
    return clean(aig)


def _rewrite_pass(aig: Aig, k: int, zero_gain: bool, preserve_depth: bool,
                  min_mffc: int = 1) -> Aig:
    if aig.n_ands == 0:
        return clean(aig)
    if k > 4 and aig.n_ands > 400:
        # wide-cut resynthesis gets expensive on big graphs; narrow the
        # cuts and only touch cones that free several nodes
        k = 4
        min_mffc = max(min_mffc, 4)
    refs = fanout_counts(aig)
    lv = levels(aig) if preserve_depth else None
    base = aig.first_and()
    replace = {}
    claimed: set[int] = set()
    for idx in range(len(aig.nodes) - 1, -1, -1):
        node = base + idx
        if node in claimed:
            continue
        leaves = node_cut(aig, node, k)
        if not 2 <= len(leaves) <= k:
            continue
        cone = cone_nodes(aig, node, set(leaves))
        if cone & claimed:
            continue
        freed = mffc_size(aig, node, set(leaves), refs)
        if freed < min_mffc:
            continue
        tt = cut_tt(aig, node, leaves, cone)
        cost, expr = ttsynth.synth(tt, len(leaves))
        gain = freed - cost
        if gain < 0 or (gain == 0 and not zero_gain):
            continue
        if preserve_depth:
            leaf_lv = max((lv[lf] for lf in leaves), default=0)
            if leaf_lv + ttsynth.expr_depth(expr) > lv[node]:
                continue
        replace[node] = _expr_replacer(expr, leaves)
        claimed |= cone
    if not replace:
        return clean(aig)
    return clean(rebuild(aig, strash=True, replace=replace))


def c_rewrite(aig: Aig, rng=None) -> Aig:
    return _rewrite_pass(aig, 4, zero_gain=False, preserve_depth=False)


def c_rewrite_zero(aig: Aig, rng=None) -> Aig:
    return _rewrite_pass(aig, 4, zero_gain=True, preserve_depth=False)


def c_rewrite_depth(aig: Aig, rng=None) -> Aig:
    return _rewrite_pass(aig, 4, zero_gain=False, preserve_depth=True)


def c_refactor5(aig: Aig, rng=None) -> Aig:
    return _rewrite_pass(aig, 5, zero_gain=False, preserve_depth=False, min_mffc=3)


def c_refactor6(aig: Aig, rng=None) -> Aig:
    return _rewrite_pass(aig, 6, zero_gain=True, preserve_depth=False, min_mffc=3)


def c_resub0(aig: Aig, rng=None) -> Aig:
    """Merge functionally identical (or complementary) nodes."""
    if aig.n_inputs > TT_INPUT_LIMIT or aig.n_ands == 0:
        return clean(aig)
    in_masks, full = input_masks(aig.n_inputs)
    masks = simulate(aig, in_masks, full)
    live = reachable(aig)
    reps: dict[int, tuple[int, int]] = {}
    for i in range(aig.n_inputs):
        node = 1 + i
        key = min(masks[node], masks[node] ^ full)
        pol = 0 if key == masks[node] else 1
        reps.setdefault(key, (node, pol))
    base = aig.first_and()
    replace = {}
    for idx in range(len(aig.nodes)):
        node = base + idx
        if not live[node]:
            continue
        m = masks[node]
        if m == 0:
            replace[node] = _lit_replacer(CONST0)
            continue
        if m == full:
            replace[node] = _lit_replacer(CONST1)
            continue
        key = min(m, m ^ full)
        pol = 0 if key == m else 1
        prev = reps.get(key)
        if prev is None:
            reps[key] = (node, pol)
        else:
            pnode, ppol = prev
            replace[node] = _lit_replacer(lit(pnode, pol ^ ppol))
    if not replace:
        return clean(aig)
    return clean(rebuild(aig, strash=True, replace=replace))


def c_resub1(aig: Aig, rng=None) -> Aig:
    """Replace a node by an AND of two existing signals when functions allow."""
    if aig.n_inputs > TT_INPUT_LIMIT or aig.n_ands == 0:
        return clean(aig)
    in_masks, full = input_masks(aig.n_inputs)
    masks = simulate(aig, in_masks, full)
    live = reachable(aig)
    refs = fanout_counts(aig)
    base = aig.first_and()
    replace = {}
    for idx in range(len(aig.nodes)):
        node = base + idx
        if not live[node]:
            continue
        target = masks[node]
        if target in (0, full):
            continue
        freed = mffc_size(aig, node, set(), refs)
        if freed < 2:
            continue
        fan = set(aig.fanins(node))
        divisors = []
        for d in range(1, node):
            if d > aig.n_inputs and not live[d]:
                continue
            md = masks[d]
            if target & ~md & full == 0:
                divisors.append(lit(d))
            if target & md == 0:
                divisors.append(lit(d, 1))
            if len(divisors) >= 32:
                break
        found = None
        for i in range(len(divisors)):
            mi = _lm(masks, divisors[i], full)
            for j in range(i + 1, len(divisors)):
                if mi & _lm(masks, divisors[j], full) == target:
                    pair = {divisors[i], divisors[j]}
                    if pair != fan:
                        found = (divisors[i], divisors[j])
                        break
            if found:
                break
        if found:
            da, db = found

            def repl(bld, get_lit, da=da, db=db):
                return bld.and_(get_lit(da), get_lit(db))

            replace[node] = repl
    if not replace:
        return clean(aig)
    return clean(rebuild(aig, strash=True, replace=replace))


def _gather_trees(aig: Aig):
    """AND-tree roots and the set of single-use positive internal nodes."""
    refs = fanout_counts(aig)
    internal: set[int] = set()
    for a, b in aig.nodes:
        for f in (a, b):
            n = f >> 1
            if f & 1 == 0 and aig.is_and(n) and refs[n] == 1:
                internal.add(n)
    for l in aig.outputs:
        internal.discard(l >> 1)
    roots = [aig.first_and() + k for k in range(len(aig.nodes))
             if (aig.first_and() + k) not in internal]
    return roots, internal


def _tree_leaves(aig: Aig, root: int, internal: set[int]) -> list[int]:
    leaves = []
    stack = list(aig.fanins(root))[::-1]
    while stack:
        f = stack.pop()
        n = f >> 1
        if f & 1 == 0 and n in internal:
            stack.extend(aig.fanins(n)[::-1])
        else:
            leaves.append(f)
    return leaves


def _rebuild_trees(aig: Aig, strash: bool, shape: str, rng=None) -> Aig:
    roots, internal = _gather_trees(aig)
    lv = levels(aig)
    replace = {}
    for root in roots:
        if root - aig.first_and() >= len(aig.nodes):
            continue
        leaves = _tree_leaves(aig, root, internal)
        if len(leaves) < 3:
            continue

        def repl(bld, get_lit, leaves=tuple(leaves)):
            items = [(lv[l >> 1], get_lit(l)) for l in leaves]
            if shape == "deep":
                items.sort(key=lambda x: (-x[0], x[1]))
                acc = items[0][1]
                for _, l in items[1:]:
                    acc = bld.and_(acc, l)
                return acc
            # balanced: repeatedly combine the two shallowest
            items.sort()
            while len(items) > 1:
                (la, a), (lb, b) = items[0], items[1]
                items = items[2:]
                new = (max(la, lb) + 1, bld.and_(a, b))
                # insert keeping sort order
                pos = 0
                while pos < len(items) and items[pos][0] < new[0]:
                    pos += 1
                items.insert(pos, new)
            return items[0][1]

        replace[root] = repl
    if not replace:
        return clean(aig) if strash else _sweep(aig)
    out = rebuild(aig, strash=strash, replace=replace)
    return clean(out) if strash else _sweep(out)


def c_balance(aig: Aig, rng=None) -> Aig:
    return _rebuild_trees(aig, strash=True, shape="balanced")


def _outputs_survive(aig: Aig, masks, full, node: int, new_mask: int) -> bool:
    """Exact check: does forcing the node to new_mask leave all outputs
    unchanged? Resimulates only the downstream cone."""
    if masks[node] == new_mask:
        return True
    changed = {node: new_mask}
    base = aig.first_and()
    for k in range(node - base + 1, len(aig.nodes)):
        nid = base + k
        a, b = aig.nodes[k]
        if (a >> 1) in changed or (b >> 1) in changed:
            ma = changed.get(a >> 1, masks[a >> 1]) ^ (full if a & 1 else 0)
            mb = changed.get(b >> 1, masks[b >> 1]) ^ (full if b & 1 else 0)
            nm = ma & mb
            if nm != masks[nid]:
                changed[nid] = nm
    return all((l >> 1) not in changed for l in aig.outputs)


def c_redundancy(aig: Aig, rng=None) -> Aig:
    """Remove redundant fanin edges: an observability-mask filter proposes
    candidates, an exact downstream resimulation verifies each one."""
    if aig.n_inputs > TT_INPUT_LIMIT:
        return clean(aig)
    cur = clean(aig)
    in_masks, full = input_masks(cur.n_inputs)
    rounds = 16 if cur.n_ands <= 400 else 4
    for _round in range(rounds):
        if cur.n_ands == 0:
            return cur
        masks = simulate(cur, in_masks, full)
        # transitive observability over-/under-approximates at reconvergence;
        # it is only a candidate filter here
        obs = [0] * cur.n_nodes
        for l in cur.outputs:
            obs[l >> 1] = full
        base = cur.first_and()
        for idx in range(len(cur.nodes) - 1, -1, -1):
            node = base + idx
            o = obs[node]
            if o == 0:
                continue
            a, b = cur.nodes[idx]
            obs[a >> 1] |= o & _lm(masks, b, full)
            obs[b >> 1] |= o & _lm(masks, a, full)
        change = None
        for idx in range(len(cur.nodes)):
            node = base + idx
            a, b = cur.nodes[idx]
            for this, other in ((a, b), (b, a)):
                window = obs[node] & _lm(masks, other, full)
                mv = _lm(masks, this, full)
                if window & ~mv & full == 0:
                    # edge looks stuck-at-1: node would become `other`
                    if _outputs_survive(cur, masks, full, node, _lm(masks, other, full)):
                        change = (node, _lit_replacer(other))
                        break
                elif window & mv == 0:
                    if _outputs_survive(cur, masks, full, node, 0):
                        change = (node, _lit_replacer(CONST0))
                        break
            if change:
                break
        if change is None:
            return cur
        node, repl = change
        cur = clean(rebuild(cur, strash=True, replace={node: repl}))
    return cur


# -- decompression ------------------------------------------------------------

def _pick(rng, items: list, frac: float) -> list:
    if not items:
        return []
    count = max(1, math.ceil(frac * len(items)))
    idx = rng.choice(len(items), size=min(count, len(items)), replace=False)
    return [items[i] for i in sorted(int(x) for x in idx)]


def d_demorgan(aig: Aig, rng, frac: float) -> Aig:
    if aig.n_ands > GROWTH_GUARD:
        return aig
    eligible = []
    base = aig.first_and()
    for idx, (a, b) in enumerate(aig.nodes):
        node = base + idx
        # prefer the higher-id complemented AND fanin
        for f, other in ((b, a), (a, b)) if (b >> 1) >= (a >> 1) else ((a, b), (b, a)):
            if f & 1 and aig.is_and(f >> 1):
                eligible.append((node, f, other))
                break
    chosen = _pick(rng, eligible, frac)
    if not chosen:
        return aig
    replace = {}
    for node, f, x in chosen:
        p, q = aig.fanins(f >> 1)

        def repl(bld, get_lit, x=x, p=p, q=q):
            # x & ~(p & q)  ->  (x & ~p) | (x & ~q)
            left = bld.and_(get_lit(x), get_lit(p ^ 1))
            right = bld.and_(get_lit(x), get_lit(q ^ 1))
            return bld.or_(left, right)

        replace[node] = repl
    return _sweep(rebuild(aig, strash=False, replace=replace))


def d_shannon(aig: Aig, rng, scope: str) -> Aig:
    if aig.n_ands > GROWTH_GUARD or aig.n_inputs == 0 or aig.n_ands == 0:
        return aig
    var = 1 + int(rng.integers(aig.n_inputs))
    lv = levels(aig)
    if scope == "one":
        sel = [int(rng.integers(len(aig.outputs)))]
    elif scope == "deepest":
        sel = [max(range(len(aig.outputs)), key=lambda i: lv[aig.outputs[i] >> 1])]
    else:
        sel = list(range(len(aig.outputs)))
    sel_set = set(sel)

    # nodes in the cones of the selected outputs
    cone: set[int] = set()
    stack = [aig.outputs[i] >> 1 for i in sel]
    while stack:
        n = stack.pop()
        if n in cone or not aig.is_and(n):
            continue
        cone.add(n)
        a, b = aig.fanins(n)
        stack.extend((a >> 1, b >> 1))

    bld = AigBuilder(aig.n_inputs, strash=False)
    ident: dict[int, int] = {0: CONST0}
    map0: dict[int, int] = {0: CONST0}
    map1: dict[int, int] = {0: CONST0}
    for i in range(aig.n_inputs):
        node = 1 + i
        ident[node] = map0[node] = map1[node] = lit(node)
    map0[var] = CONST0
    map1[var] = CONST1

    def get(table, l):
        return table[l >> 1] ^ (l & 1)

    base = aig.first_and()
    live = [False] * aig.n_nodes
    for l in aig.outputs:
        live[l >> 1] = True
    for idx in range(len(aig.nodes) - 1, -1, -1):
        node = base + idx
        if live[node]:
            a, b = aig.nodes[idx]
            live[a >> 1] = live[b >> 1] = True
    for idx in range(len(aig.nodes)):
        node = base + idx
        if not live[node]:
            continue
        a, b = aig.nodes[idx]
        ident[node] = bld.and_(get(ident, a), get(ident, b))
        if node in cone:
            map0[node] = bld.and_(get(map0, a), get(map0, b))
            map1[node] = bld.and_(get(map1, a), get(map1, b))
    outs = []
    vlit = lit(var)
    for i, l in enumerate(aig.outputs):
        if i in sel_set and (l >> 1) in cone:
            f0 = get(map0, l)
            f1 = get(map1, l)
            outs.append(bld.mux_(vlit, f1, f0))
        else:
            outs.append(get(ident, l))
    return _sweep(bld.finish(outs, aig.input_names, aig.output_names))


def d_duplicate(aig: Aig, rng, threshold: int, frac: float) -> Aig:
    if aig.n_ands > GROWTH_GUARD or aig.n_ands == 0:
        return aig
    refs = fanout_counts(aig)
    base = aig.first_and()
    cands = [base + k for k in range(len(aig.nodes)) if refs[base + k] >= threshold]
    chosen = set(_pick(rng, cands, frac))
    if not chosen:
        return aig
    bld = AigBuilder(aig.n_inputs, strash=False)
    copies: dict[int, list[int]] = {0: [CONST0]}
    counter: dict[int, int] = {}
    for i in range(aig.n_inputs):
        copies[1 + i] = [lit(1 + i)]

    def get(l: int) -> int:
        node = l >> 1
        opts = copies[node]
        if len(opts) == 1:
            v = opts[0]
        else:
            c = counter.get(node, 0)
            counter[node] = c + 1
            v = opts[c % len(opts)]
        return v ^ (l & 1)

    for idx in range(len(aig.nodes)):
        node = base + idx
        a, b = aig.nodes[idx]
        primary = bld.and_(get(a), get(b))
        if node in chosen:
            copies[node] = [primary, bld.and_(get(a), get(b))]
        else:
            copies[node] = [primary]
    outs = [get(l) for l in aig.outputs]
    return _sweep(bld.finish(outs, aig.input_names, aig.output_names))


def d_rebalance(aig: Aig, rng, shape: str) -> Aig:
    if aig.n_ands > GROWTH_GUARD:
        return aig
    return _rebuild_trees(aig, strash=False, shape=shape)


def d_xor_regroup(aig: Aig, rng, frac: float) -> Aig:
    if aig.n_ands > GROWTH_GUARD:
        return aig
    base = aig.first_and()
    found = []
    for idx, (fa, fb) in enumerate(aig.nodes):
        if not (fa & 1 and fb & 1):
            continue
        x, y = fa >> 1, fb >> 1
        if not (aig.is_and(x) and aig.is_and(y)) or x == y:
            continue
        xa, xb = aig.fanins(x)
        if {lit_not(xa), lit_not(xb)} == set(aig.fanins(y)):
            found.append((base + idx, xa, xb))
    chosen = _pick(rng, found, frac)
    if not chosen:
        return aig
    replace = {}
    for node, xa, xb in chosen:

        def repl(bld, get_lit, xa=xa, xb=xb):
            # rebuild the xor with the opposite operand grouping
            a = get_lit(xa)
            b = get_lit(xb)
            m1 = bld.and_(a, b ^ 1)
            m2 = bld.and_(a ^ 1, b)
            return lit_not(bld.and_(lit_not(m1), lit_not(m2)))

        replace[node] = repl
    return _sweep(rebuild(aig, strash=False, replace=replace))


def d_resynth(aig: Aig, rng, slack: int) -> Aig:
    if aig.n_ands > GROWTH_GUARD or aig.n_ands == 0:
        return aig
    base = aig.first_and()
    picks = rng.choice(len(aig.nodes), size=min(4, len(aig.nodes)), replace=False)
    replace = {}
    for idx in sorted(int(x) for x in picks):
        node = base + idx
        leaves = node_cut(aig, node, 4)
        if not 2 <= len(leaves) <= 4:
            continue
        cone = cone_nodes(aig, node, set(leaves))
        tt = cut_tt(aig, node, leaves, cone)
        cands = ttsynth.synth_candidates(tt, len(leaves))
        best = cands[0][0]
        pool = [e for c, e in cands if c <= best + slack]
        if not pool:
            continue
        expr = pool[int(rng.integers(len(pool)))]
        replace[node] = _expr_replacer(expr, leaves)
    if not replace:
        return aig
    return _sweep(rebuild(aig, strash=False, replace=replace))


# -- catalogue ----------------------------------------------------------------

@dataclass(frozen=True)
class Recipe:
    id: int
    kind: str
    name: str
    fn: Callable
    description: str


def _mk(id, kind, name, fn, description):
    return Recipe(id, kind, name, fn, description)


RECIPES: tuple[Recipe, ...] = tuple(
    [
        _mk(0, COMPRESSION, "clean", c_clean,
            "structural hash, constant propagation, dead-node removal"),
        _mk(1, COMPRESSION, "rewrite", c_rewrite,
            "4-cut rewriting, strict gain"),
        _mk(2, COMPRESSION, "rewrite-z", c_rewrite_zero,
            "4-cut rewriting, zero gain allowed"),
        _mk(3, COMPRESSION, "rewrite-d", c_rewrite_depth,
            "4-cut rewriting, local depth preserved"),
        _mk(4, COMPRESSION, "refactor5", c_refactor5,
            "cone refactoring over 5-cuts"),
        _mk(5, COMPRESSION, "refactor6", c_refactor6,
            "cone refactoring over 6-cuts, zero gain allowed"),
        _mk(6, COMPRESSION, "resub0", c_resub0,
            "merge functionally equivalent nodes"),
        _mk(7, COMPRESSION, "resub1", c_resub1,
            "replace nodes by ANDs of existing divisors"),
        _mk(8, COMPRESSION, "balance", c_balance,
            "re-associate AND trees balanced for size"),
        _mk(9, COMPRESSION, "redundancy", c_redundancy,
            "observability-don't-care redundant edge removal"),
    ]
    + [
        _mk(10 + i, DECOMPRESSION, f"demorgan-{int(f * 100)}",
            (lambda f: lambda aig, rng: d_demorgan(aig, rng, f))(f),
            f"distributivity re-expression on {int(f * 100)}% of eligible nodes")
        for i, f in enumerate((0.1, 0.25, 0.5, 0.75, 1.0))
    ]
    + [
        _mk(15, DECOMPRESSION, "shannon-one",
            lambda aig, rng: d_shannon(aig, rng, "one"),
            "Shannon-expand one random output cone on a random input"),
        _mk(16, DECOMPRESSION, "shannon-deep",
            lambda aig, rng: d_shannon(aig, rng, "deepest"),
            "Shannon-expand the deepest output cone on a random input"),
        _mk(17, DECOMPRESSION, "shannon-all",
            lambda aig, rng: d_shannon(aig, rng, "all"),
            "Shannon-expand all output cones on a random input"),
    ]
    + [
        _mk(18 + i, DECOMPRESSION, f"dup-{t}-{int(f * 100)}",
            (lambda t, f: lambda aig, rng: d_duplicate(aig, rng, t, f))(t, f),
            f"duplicate {int(f * 100)}% of nodes with fanout >= {t}")
        for i, (t, f) in enumerate(((2, 0.5), (2, 1.0), (3, 0.5), (3, 1.0), (4, 1.0)))
    ]
    + [
        _mk(23, DECOMPRESSION, "deepen",
            lambda aig, rng: d_rebalance(aig, rng, "deep"),
            "re-associate AND trees into deep chains"),
        _mk(24, DECOMPRESSION, "flatten",
            lambda aig, rng: d_rebalance(aig, rng, "balanced"),
            "re-associate AND trees balanced, without sharing"),
    ]
    + [
        _mk(25 + i, DECOMPRESSION, f"xorswap-{int(f * 100)}",
            (lambda f: lambda aig, rng: d_xor_regroup(aig, rng, f))(f),
            f"re-group {int(f * 100)}% of XOR-shaped subgraphs")
        for i, f in enumerate((0.5, 1.0))
    ]
    + [
        _mk(27 + i, DECOMPRESSION, f"resynth+{s}",
            (lambda s: lambda aig, rng: d_resynth(aig, rng, s))(s),
            f"random local resynthesis with +{s} node slack")
        for i, s in enumerate((1, 2, 4))
    ]
)

assert len(RECIPES) == 30
assert sum(1 for r in RECIPES if r.kind == COMPRESSION) == 10
assert sum(1 for r in RECIPES if r.kind == DECOMPRESSION) == 20


def apply_recipe(aig: Aig, recipe: Recipe | int, step_seed: int) -> Aig:
    """Apply one recipe; deterministic given (graph, recipe, step_seed)."""
    if isinstance(recipe, int):
        recipe = RECIPES[recipe]
    rng = np.random.Generator(np.random.PCG64(step_seed))
    return recipe.fn(aig, rng)
