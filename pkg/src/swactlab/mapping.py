"""Bridges between cell netlists and and-inverter graphs.

``to_aig`` expands each library cell into AND/complement structure.
``from_aig`` maps back to cells: structural pattern matching recovers
XOR2/XNOR2/MUX2/MAJ3 where that lowers transistor cost, everything else
becomes AND2/NAND2/OR2/NOR2 with complements absorbed into cell kinds and
shared NOT cells. The result is equivalence-checked against the graph and
never costs more transistors than the naive AND2+NOT expansion.
"""

from __future__ import annotations

from .aig import (
    Aig,
    AigBuilder,
    CONST0,
    clean,
    check_equivalence,
    fanout_counts,
    lit_not,
    output_tts,
)
from .netlist import Cell, CellKind, CellNetlist, NetlistError, rename_wires

import numpy as np


class MappingError(RuntimeError):
    """Mapped netlist failed the internal equivalence check."""


def to_aig(n: CellNetlist) -> Aig:
    """Function-preserving expansion of a netlist into an AIG."""
    bld = AigBuilder(len(n.inputs))
    lit_of: dict[str, int] = {}
    for k, w in enumerate(n.inputs):
        lit_of[w] = bld.input_lit(k)
    for c in n._topo():
        ins = [lit_of[w] for w in c.inputs]
        k = c.kind
        if k is CellKind.AND2:
            v = bld.and_(ins[0], ins[1])
        elif k is CellKind.NAND2:
            v = lit_not(bld.and_(ins[0], ins[1]))
        elif k is CellKind.OR2:
            v = bld.or_(ins[0], ins[1])
        elif k is CellKind.NOR2:
            v = lit_not(bld.or_(ins[0], ins[1]))
        elif k is CellKind.XOR2:
            v = bld.xor_(ins[0], ins[1])
        elif k is CellKind.XNOR2:
            v = lit_not(bld.xor_(ins[0], ins[1]))
        elif k is CellKind.NOT:
            v = lit_not(ins[0])
        elif k is CellKind.BUF:
            v = ins[0]
        elif k is CellKind.MUX2:
            v = bld.mux_(ins[2], ins[1], ins[0])
        elif k is CellKind.MAJ3:
            v = bld.maj_(ins[0], ins[1], ins[2])
        elif k is CellKind.CONST0:
            v = CONST0
        else:
            v = lit_not(CONST0)
        lit_of[c.output] = v
    outputs = [lit_of[w] for w in n.outputs]
    return bld.finish(outputs, n.inputs, n.outputs)


def naive_from_aig(aig: Aig, name: str = "naive") -> CellNetlist:
    """Literal expansion: one AND2 per node, one NOT per complemented use."""
    aig = clean(aig)
    cells: list[Cell] = []
    cid = 0
    pos: dict[int, str] = {0: None}  # node -> wire
    neg: dict[int, str] = {}

    def new_cell(kind, ins):
        nonlocal cid
        out = f"n{cid}"
        cells.append(Cell(cid, kind, tuple(ins), out))
        cid += 1
        return out

    def wire(l: int) -> str:
        node, p = l >> 1, l & 1
        if node == 0:
            key = p  # 0 -> const0, 1 -> const1
            store = neg if p else pos
            if store.get(0) is None or 0 not in store:
                store[0] = new_cell(CellKind.CONST1 if p else CellKind.CONST0, ())
            return store[0]
        if p == 0:
            return pos[node]
        if node not in neg:
            neg[node] = new_cell(CellKind.NOT, (pos[node],))
        return neg[node]

    inputs = list(aig.input_names)
    for i in range(aig.n_inputs):
        pos[1 + i] = inputs[i]
    base = aig.first_and()
    for k, (a, b) in enumerate(aig.nodes):
        pos[base + k] = new_cell(CellKind.AND2, (wire(a), wire(b)))
    outputs = [wire(l) for l in aig.outputs]
    n = CellNetlist(name, inputs, outputs, cells)
    return rename_wires(n, _output_rename_map(n, aig.output_names))


def _output_rename_map(n: CellNetlist, names) -> dict[str, str]:
    mapping: dict[str, str] = {}
    wires = n.wires
    for wire, new in zip(n.outputs, names):
        if wire in mapping or wire in n.inputs or wire == new:
            continue
        if new not in wires:
            mapping[wire] = new
    return mapping


def _match_patterns(aig: Aig, out_nodes: set[int]):
    """All XOR/MUX/MAJ shapes rooted at AND nodes, regardless of sharing.

    Returns root -> (tag, data..., inners); inners are the shape's interior
    nodes, which only disappear from the mapping if nothing else reads them.
    """
    base = aig.first_and()
    found: dict[int, tuple] = {}
    for k in range(len(aig.nodes)):
        t = base + k
        fa, fb = aig.nodes[k]
        if not (fa & 1 and fb & 1):
            continue
        x, y = fa >> 1, fb >> 1
        if not (aig.is_and(x) and aig.is_and(y)) or x == y:
            continue
        if x in out_nodes or y in out_nodes:
            continue
        xa, xb = aig.fanins(x)
        ya, yb = aig.fanins(y)
        xset = {xa, xb}
        yset = {ya, yb}
        # xor: children are {la, lb} and {~la, ~lb}
        if {lit_not(ya), lit_not(yb)} == xset:
            la, lb = xa, xb
            if (la >> 1) in (x, y) or (lb >> 1) in (x, y):
                continue
            flip = (la & 1) ^ (lb & 1)
            found[t] = ("xor", la >> 1, lb >> 1, flip, (x, y))
            continue
        # mux: children are {sel, hi} and {~sel, lo}
        sel = None
        for cand in xset:
            if lit_not(cand) in yset:
                sel = cand
                break
        if sel is not None and len(xset) == 2 and len(yset) == 2:
            hi = (xset - {sel}).pop()
            lo = (yset - {lit_not(sel)}).pop()
            if any(l >> 1 in (x, y) for l in (sel, hi, lo)):
                continue
            # at most one extra inverter on the data inputs
            if (hi & 1) + (lo & 1) <= 1:
                if sel & 1:
                    sel, hi, lo = lit_not(sel), lo, hi
                found[t] = ("mux", sel, hi, lo, (x, y))
            continue
        # maj: t = AND(~n1, ~n3); n1 = AND(la, lb); n3 = AND(~n2, lc);
        #      n2 = AND(~la, ~lb)           => ~t = MAJ(la, lb, lc)
        matched = False
        for n1, n3 in ((x, y), (y, x)):
            la, lb = aig.fanins(n1)
            n3a, n3b = aig.fanins(n3)
            for m2lit, lc in ((n3a, n3b), (n3b, n3a)):
                if not (m2lit & 1):
                    continue
                n2 = m2lit >> 1
                if not aig.is_and(n2) or n2 in (n1, n3) or n2 in out_nodes:
                    continue
                if {lit_not(la), lit_not(lb)} == set(aig.fanins(n2)):
                    if any(l >> 1 in (n1, n2, n3) for l in (la, lb, lc)):
                        continue
                    # majority is self-dual: orient so that at most one
                    # operand needs an inverter
                    k = (la & 1) + (lb & 1) + (lc & 1)
                    if k <= 1:
                        ops, out_pol = (la, lb, lc), 1
                    else:
                        ops, out_pol = (la ^ 1, lb ^ 1, lc ^ 1), 0
                    found[t] = ("maj", ops[0], ops[1], ops[2], out_pol,
                                (n1, n2, n3))
                    matched = True
                    break
            if matched:
                break
    return found


def _group_cell_cost(g: tuple) -> int:
    if g[0] == "xor":
        return 8
    if g[0] == "mux":
        return 12 + 2 * ((g[2] & 1) + (g[3] & 1))
    return 10 + 2 * ((g[1] & 1) + (g[2] & 1) + (g[3] & 1))


def _match_groups(aig: Aig, refs, relaxed: bool):
    """Select pattern groups and the interior nodes they absorb.

    Strict mode only groups shapes whose interiors are single-fanout.
    Relaxed mode keeps any group whose cell costs less than the generic
    realizations it removes, letting shapes share interiors; which interiors
    actually die is resolved by a drop-until-stable loop.
    """
    out_nodes = {l >> 1 for l in aig.outputs}
    candidates = _match_patterns(aig, out_nodes)
    if not relaxed:
        groups: dict[int, tuple] = {}
        covered: set[int] = set()
        for t in sorted(candidates, reverse=True):
            g = candidates[t]
            inners = g[-1]
            if t in covered:
                continue
            if all(refs[x] == 1 and x not in covered for x in inners):
                groups[t] = g
                covered.update(inners)
        return groups, covered

    readers: dict[int, list[int]] = {}
    base = aig.first_and()
    for k, (fa, fb) in enumerate(aig.nodes):
        readers.setdefault(fa >> 1, []).append(base + k)
        readers.setdefault(fb >> 1, []).append(base + k)

    active = dict(candidates)

    def dying_set():
        dying = set()
        for g in active.values():
            for x in g[-1]:
                if x in out_nodes or x in dying:
                    continue
                if all(c in active and x in active[c][-1] for c in readers.get(x, [])):
                    dying.add(x)
        return dying

    def operand_nodes(g):
        if g[0] == "xor":
            return (g[1], g[2])
        return (g[1] >> 1, g[2] >> 1, g[3] >> 1)

    while True:
        dying = dying_set()
        drop = [t for t in active if t in dying]
        for t, g in active.items():
            if t in dying:
                continue
            if any(op in dying for op in operand_nodes(g)):
                drop.append(t)
                continue
            # generic cells freed: the root plus every interior that dies
            freed = 5 + sum(5 for x in g[-1] if x in dying)
            if _group_cell_cost(g) > freed:
                drop.append(t)
        if not drop:
            return active, dying
        for t in drop:
            del active[t]


def _smart_from_aig(aig: Aig, name: str, relaxed: bool = False) -> CellNetlist:
    refs = fanout_counts(aig)
    groups, covered = _match_groups(aig, refs, relaxed)
    base = aig.first_and()

    # -- phase 2: polarity use counts over the effective consumers
    uses = [[0, 0] for _ in range(aig.n_nodes)]

    def use(l: int):
        uses[l >> 1][l & 1] += 1

    for l in aig.outputs:
        use(l)
    for k, (fa, fb) in enumerate(aig.nodes):
        t = base + k
        if t in covered:
            continue
        g = groups.get(t)
        if g is None:
            if fa & 1 and fb & 1 and fa >> 1 != 0 and fb >> 1 != 0:
                # realized as NOR2/OR2 over the positive child wires
                uses[fa >> 1][0] += 1
                uses[fb >> 1][0] += 1
            else:
                use(fa)
                use(fb)
        elif g[0] == "xor":
            uses[g[1]][0] += 1
            uses[g[2]][0] += 1
        elif g[0] == "mux":
            uses[g[1] >> 1][0] += 1
            use(g[2])
            use(g[3])
        else:  # maj
            use(g[1])
            use(g[2])
            use(g[3])


    # -- phase 3: emission
    cells: list[Cell] = []
    cid = 0
    wire_of: list[list] = [[None, None] for _ in range(aig.n_nodes)]

    def emit(kind, ins) -> str:
        nonlocal cid
        out = f"n{cid}"
        cells.append(Cell(cid, kind, tuple(ins), out))
        cid += 1
        return out

    def wire(l: int) -> str:
        w = wire_of[l >> 1][l & 1]
        assert w is not None, f"literal {l} not realized"
        return w

    if uses[0][0]:
        wire_of[0][0] = emit(CellKind.CONST0, ())
    if uses[0][1]:
        wire_of[0][1] = emit(CellKind.CONST1, ())
    for i in range(aig.n_inputs):
        node = 1 + i
        wire_of[node][0] = aig.input_names[i]
        if uses[node][1]:
            wire_of[node][1] = emit(CellKind.NOT, (aig.input_names[i],))

    for k, (fa, fb) in enumerate(aig.nodes):
        t = base + k
        if t in covered:
            continue
        want_pos, want_neg = uses[t][0] > 0, uses[t][1] > 0
        if not (want_pos or want_neg):
            continue
        g = groups.get(t)
        if g is not None and g[0] == "xor":
            _tag, a, b, flip, _inners = g
            pos_kind = CellKind.XNOR2 if flip else CellKind.XOR2
            ins = (wire_of[a][0], wire_of[b][0])
            if want_pos:
                wire_of[t][0] = emit(pos_kind, ins)
                if want_neg:
                    wire_of[t][1] = emit(CellKind.NOT, (wire_of[t][0],))
            else:
                neg_kind = CellKind.XOR2 if flip else CellKind.XNOR2
                wire_of[t][1] = emit(neg_kind, ins)
            continue
        if g is not None and g[0] == "mux":
            _tag, sel, hi, lo, _inners = g
            m = emit(CellKind.MUX2, (wire(lo), wire(hi), wire_of[sel >> 1][0]))
            wire_of[t][1] = m  # the cell realizes ~t = sel ? hi : lo
            if want_pos:
                wire_of[t][0] = emit(CellKind.NOT, (m,))
            continue
        if g is not None and g[0] == "maj":
            _tag, a, b, c, out_pol, _inners = g
            m = emit(CellKind.MAJ3, (wire(a), wire(b), wire(c)))
            wire_of[t][out_pol] = m
            other = out_pol ^ 1
            if uses[t][other]:
                wire_of[t][other] = emit(CellKind.NOT, (m,))
            continue
        if fa & 1 and fb & 1 and fa >> 1 != 0 and fb >> 1 != 0:
            ins = (wire_of[fa >> 1][0], wire_of[fb >> 1][0])
            if want_pos:
                wire_of[t][0] = emit(CellKind.NOR2, ins)
                if want_neg:
                    wire_of[t][1] = emit(CellKind.NOT, (wire_of[t][0],))
            else:
                wire_of[t][1] = emit(CellKind.OR2, ins)
        else:
            ins = (wire(fa), wire(fb))
            if want_neg:
                wire_of[t][1] = emit(CellKind.NAND2, ins)
                if want_pos:
                    wire_of[t][0] = emit(CellKind.NOT, (wire_of[t][1],))
            else:
                wire_of[t][0] = emit(CellKind.AND2, ins)

    outputs = [wire(l) for l in aig.outputs]
    n = CellNetlist(name, list(aig.input_names), outputs, cells)
    return rename_wires(n, _output_rename_map(n, aig.output_names))


def from_aig(aig: Aig, name: str = "mapped", check: bool = True,
             effort: str = "full") -> CellNetlist:
    """Map an AIG onto the cell library.

    Picks the cheapest of the cut-based matcher, the single-pass structural
    matcher and the naive expansion, then verifies functional equivalence
    against the graph. effort="fast" skips the cut-based matcher; search
    loops use it for step metrics and remap winners at full effort.
    """
    from .techmap import cut_map

    cleaned = clean(aig)
    candidates = [_smart_from_aig(cleaned, name, relaxed=True)]
    if effort == "full":
        candidates.append(_smart_from_aig(cleaned, name, relaxed=False))
        candidates.append(naive_from_aig(cleaned, name))
        if cleaned.n_ands:
            cut = cut_map(cleaned, name)
            candidates.append(
                rename_wires(cut, _output_rename_map(cut, cleaned.output_names))
            )
    else:
        candidates.append(naive_from_aig(cleaned, name))
    result = min(candidates, key=lambda n: n.transistor_count())
    if check and aig.n_inputs <= 16:
        pats = np.zeros((1 << aig.n_inputs, aig.n_inputs), dtype=np.uint8)
        for i in range(aig.n_inputs):
            pats[:, i] = (np.arange(1 << aig.n_inputs) >> i) & 1
        got = result.evaluate_batch(pats)
        tts = output_tts(cleaned)
        for col, tt in enumerate(tts):
            have = int.from_bytes(
                np.packbits(got[:, col], bitorder="little").tobytes(), "little"
            )
            if have != tt:
                raise MappingError(f"output {col} mismatch after mapping")
    return result
