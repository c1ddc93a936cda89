"""Cut-based technology mapping: AIG -> cell netlist by truth-table match.

Enumerates 3-feasible cuts per node, matches each cut function (both
polarities) against the gate library, and runs a fanout-aware area DP:
the cost of a (node, polarity) is the best cell realization cost plus the
leaf costs divided by leaf fanout (area flow). A cover-extraction pass then
emits cells for exactly the (node, polarity) pairs the outputs need.

Matching covers every input permutation and pin complementation of each
cell; complemented pins consume shared NOT wires, so their cost is charged
once per (leaf, polarity).
"""

from __future__ import annotations

import functools
import itertools

from .aig import Aig, fanout_counts, input_masks
from .netlist import Cell, CellKind, CellNetlist

CUT_LIMIT = 7


def _cell_tt(kind: CellKind, perm: tuple[int, ...], pins: tuple[int, ...], k: int) -> int:
    """Truth table over k cut variables of a cell with permuted/complemented
    pins; variable perm[j] feeds pin j (complemented when pins[j])."""
    tt = 0
    for p in range(1 << k):
        vals = []
        for j in range(len(perm)):
            v = (p >> perm[j]) & 1
            vals.append(v ^ pins[j])
        a = vals[0] if vals else 0
        b = vals[1] if len(vals) > 1 else 0
        c = vals[2] if len(vals) > 2 else 0
        name = kind.value
        if name == "AND2":
            out = a & b
        elif name == "OR2":
            out = a | b
        elif name == "XOR2":
            out = a ^ b
        elif name == "MUX2":
            out = b if c else a
        elif name == "MAJ3":
            out = 1 if a + b + c >= 2 else 0
        else:  # BUF
            out = a
        if out:
            tt |= 1 << p
    return tt


@functools.lru_cache(maxsize=None)
def _match_table(k: int):
    """tt -> list of (cost, kind, perm, pins, out_neg), cheapest first.

    Inverting cells are covered through out_neg of their positive duals
    (NAND2 = AND2 + out_neg at equal cost, etc.), with the cost adjusted so
    NAND/NOR-style realizations are charged correctly by the DP caller.
    """
    base = {
        CellKind.BUF: 1,
        CellKind.AND2: 2,
        CellKind.OR2: 2,
        CellKind.XOR2: 2,
        CellKind.MUX2: 3,
        CellKind.MAJ3: 3,
    }
    # (kind used when output is positive, kind when complemented)
    dual = {
        CellKind.AND2: CellKind.NAND2,
        CellKind.OR2: CellKind.NOR2,
        CellKind.XOR2: CellKind.XNOR2,
        CellKind.BUF: CellKind.NOT,
        CellKind.MUX2: None,
        CellKind.MAJ3: None,
    }
    table: dict[int, list] = {}
    for kind, arity in base.items():
        if arity > k:
            continue
        for perm in itertools.permutations(range(k), arity):
            for pins in itertools.product((0, 1), repeat=arity):
                tt = _cell_tt(kind, perm, pins, k)
                for out_neg in (0, 1):
                    if out_neg:
                        eff_kind = dual[kind]
                        cost = (eff_kind.transistor_cost
                                if eff_kind is not None
                                else kind.transistor_cost + CellKind.NOT.transistor_cost)
                        realize = eff_kind or kind
                        extra_not = eff_kind is None
                    else:
                        cost = kind.transistor_cost
                        realize = kind
                        extra_not = False
                    key = tt ^ (((1 << (1 << k)) - 1) if out_neg else 0)
                    table.setdefault(key, []).append(
                        (cost, realize, perm, pins, extra_not)
                    )
    for entries in table.values():
        entries.sort(key=lambda e: (e[0], e[1].value, e[2], e[3]))
    return table


@functools.lru_cache(maxsize=1 << 18)
def _expand_tt(tt: int, positions: tuple[int, ...], kdst: int) -> int:
    """Re-express a truth table over a superset variable ordering."""
    out = 0
    for p in range(1 << kdst):
        q = 0
        for j, pos in enumerate(positions):
            q |= ((p >> pos) & 1) << j
        if (tt >> q) & 1:
            out |= 1 << p
    return out


def _enumerate_cuts(aig: Aig, k: int = 3):
    """Per-node cut list [(leaves, tt), ...]; tt is the node's function
    over the cut leaves, built incrementally from the fanin cut tables."""
    cuts: list[list[tuple[tuple[int, ...], int | None]]] = [[] for _ in range(aig.n_nodes)]
    for i in range(1 + aig.n_inputs):
        cuts[i] = [((i,), 2)]
    base = aig.first_and()
    for idx, (fa, fb) in enumerate(aig.nodes):
        node = base + idx
        na, nb = fa >> 1, fb >> 1
        seen: dict[tuple[int, ...], int] = {}
        for ca, ta in cuts[na]:
            for cb, tb in cuts[nb]:
                merged = tuple(sorted(set(ca) | set(cb)))
                km = len(merged)
                if km > k or merged in seen:
                    continue
                full = (1 << (1 << km)) - 1
                ea = _expand_tt(ta, tuple(merged.index(x) for x in ca), km)
                eb = _expand_tt(tb, tuple(merged.index(x) for x in cb), km)
                if fa & 1:
                    ea ^= full
                if fb & 1:
                    eb ^= full
                seen[merged] = ea & eb
        combined = sorted(seen, key=lambda c: (len(c), c))[: CUT_LIMIT - 1]
        entry: list[tuple[tuple[int, ...], int | None]] = [((node,), 2)]
        for cut in combined:
            entry.append((cut, seen[cut]))
        cuts[node] = entry
    return cuts


def _cut_function(aig: Aig, node: int, leaves: tuple[int, ...], k: int) -> int | None:
    """Truth table of the node over the cut leaves (positive polarities)."""
    var_masks, full = input_masks(k)
    masks = {lf: (0 if lf == 0 else var_masks[i]) for i, lf in enumerate(leaves)}
    stack = [node]
    order = []
    visiting = set()
    while stack:
        n = stack.pop()
        if n in masks or n in visiting:
            continue
        if not aig.is_and(n):
            return None  # leaf set does not cover the cone
        visiting.add(n)
        order.append(n)
        a, b = aig.fanins(n)
        stack.extend((a >> 1, b >> 1))
    for n in sorted(order):
        a, b = aig.fanins(n)
        if (a >> 1) not in masks or (b >> 1) not in masks:
            return None
        ma = masks[a >> 1] ^ (full if a & 1 else 0)
        mb = masks[b >> 1] ^ (full if b & 1 else 0)
        masks[n] = ma & mb
    return masks.get(node)


def cut_map(aig: Aig, name: str = "mapped") -> CellNetlist:
    """Area-oriented cut mapping of a clean AIG onto the cell library."""
    K = 3
    table = _match_table(K)
    full3 = (1 << (1 << K)) - 1
    refs = fanout_counts(aig)
    cuts = _enumerate_cuts(aig, K)
    base = aig.first_and()

    # DP: best[(node, pol)] = (flow_cost, cut, match) over AND nodes
    INF = float("inf")
    best: dict[tuple[int, int], tuple] = {}
    for i in range(aig.n_inputs + 1):
        best[(i, 0)] = (0.0, None, None)
        best[(i, 1)] = (float(CellKind.NOT.transistor_cost), None, None)

    def leaf_cost(leaf: int, pol: int) -> float:
        entry = best.get((leaf, pol))
        if entry is None:
            return INF
        return entry[0] / max(1, refs[leaf])

    for idx in range(len(aig.nodes)):
        node = base + idx
        for pol in (0, 1):
            best_cost, best_cut, best_match = INF, None, None
            for cut, tt in cuts[node]:
                if cut == (node,):
                    continue
                # pad don't-care variables so the table lookup is exact
                padded = tt
                for j in range(len(cut), K):
                    padded |= padded << (1 << j)
                padded &= full3
                want = padded ^ (full3 if pol else 0)
                for cost, kind, perm, pins, extra_not in table.get(want, ()):
                    total = float(cost)
                    ok = True
                    for j, leaf_var in enumerate(perm):
                        if leaf_var >= len(cut):
                            # cell pin tied to a padded variable: invalid
                            ok = False
                            break
                        leaf = cut[leaf_var]
                        lc = leaf_cost(leaf, pins[j])
                        if lc == INF:
                            ok = False
                            break
                        total += lc
                    if not ok:
                        continue
                    if total < best_cost:
                        best_cost, best_cut, best_match = total, cut, (kind, perm, pins, extra_not)
                    break  # entries are sorted; first feasible is cheapest
            if best_match is None and pol == 1:
                # fall back to positive + NOT
                pos = best.get((node, 0))
                if pos is not None and pos[0] < INF:
                    best[(node, 1)] = (pos[0] + CellKind.NOT.transistor_cost, None, "NOT")
                    continue
            if best_match is not None:
                best[(node, pol)] = (best_cost, best_cut, best_match)
    # ensure both polarities exist (NOT fallback either way)
    for idx in range(len(aig.nodes)):
        node = base + idx
        for pol in (0, 1):
            if (node, pol) not in best:
                other = best.get((node, pol ^ 1))
                if other is None:
                    raise RuntimeError(f"unmappable node {node}")
                best[(node, pol)] = (other[0] + 2.0, None, "NOT")

    # -- cover extraction: re-select cuts greedily, treating already
    # realized signals as free, which recovers sharing that the flow
    # estimate cannot see
    cells: list[Cell] = []
    wires: dict[tuple[int, int], str] = {}
    cid = 0

    def emit(kind: CellKind, ins: tuple[str, ...]) -> str:
        nonlocal cid
        out = f"n{cid}"
        cells.append(Cell(cid, kind, ins, out))
        cid += 1
        return out

    def chooser(node: int, pol: int):
        """Best (cut, match) with realized leaves counted as free."""
        best_cost, choice = INF, None
        for cut, tt in cuts[node]:
            if cut == (node,):
                continue
            padded = tt
            for j in range(len(cut), K):
                padded |= padded << (1 << j)
            padded &= full3
            want = padded ^ (full3 if pol else 0)
            for cost, kind, perm, pins, extra_not in table.get(want, ()):
                total = float(cost)
                ok = True
                for j, leaf_var in enumerate(perm):
                    if leaf_var >= len(cut):
                        ok = False
                        break
                    leaf = cut[leaf_var]
                    if (leaf, pins[j]) in wires:
                        continue
                    lc = best.get((leaf, pins[j]), (INF,))[0]
                    if lc == INF:
                        ok = False
                        break
                    total += lc
                if ok and total < best_cost:
                    best_cost, choice = total, (cut, (kind, perm, pins, extra_not))
        return choice

    def realize(node: int, pol: int) -> str:
        key = (node, pol)
        if key in wires:
            return wires[key]
        if node == 0:
            w = emit(CellKind.CONST1 if pol else CellKind.CONST0, ())
            wires[key] = w
            return w
        if node <= aig.n_inputs:
            if pol == 0:
                w = aig.input_names[node - 1]
            else:
                w = emit(CellKind.NOT, (realize(node, 0),))
            wires[key] = w
            return w
        if (node, pol ^ 1) in wires:
            w = emit(CellKind.NOT, (wires[(node, pol ^ 1)],))
            wires[key] = w
            return w
        choice = chooser(node, pol)
        if choice is None:
            _cost, cut, match = best[key]
            if match == "NOT":
                w = emit(CellKind.NOT, (realize(node, pol ^ 1),))
                wires[key] = w
                return w
            choice = (cut, match)
        cut, (kind, perm, pins, extra_not) = choice
        ins = tuple(realize(cut[perm[j]], pins[j]) for j in range(len(perm)))
        w = emit(kind, ins)
        if extra_not:
            w = emit(CellKind.NOT, (w,))
        wires[key] = w
        return w

    outputs = [realize(l >> 1, l & 1) for l in aig.outputs]
    return CellNetlist(name, list(aig.input_names), outputs, cells)
