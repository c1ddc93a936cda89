"""Small-function synthesis: truth table -> AND-tree expression.

Expressions are polarity-annotated trees:

    exprlit := (expr, polarity)
    expr    := ("c0",) | ("v", i) | ("and", exprlit, exprlit)

Cost counts AND nodes in the tree (an upper bound on the instantiated size;
structural hashing recovers sharing at instantiation time).

Functions of up to 3 variables come from an exhaustive-optimal table built
once per process by breadth-first enumeration over AND compositions. Wider
functions are synthesized recursively: best of Shannon decomposition over
each variable and a prime-cover SOP (both sides, complement is free).
"""

from __future__ import annotations

import functools
from collections import defaultdict

CONST0_EXPR = (("c0",), 0)
CONST1_EXPR = (("c0",), 1)


def expr_cost(exprlit) -> int:
    expr, _pol = exprlit
    if expr[0] == "and":
        return 1 + expr_cost(expr[1]) + expr_cost(expr[2])
    return 0


def expr_depth(exprlit) -> int:
    expr, _pol = exprlit
    if expr[0] == "and":
        return 1 + max(expr_depth(expr[1]), expr_depth(expr[2]))
    return 0


def expr_not(exprlit):
    return (exprlit[0], exprlit[1] ^ 1)


def instantiate(builder, exprlit, leaf_lits: list[int]) -> int:
    """Materialize an expression over concrete literals via a builder."""
    expr, pol = exprlit
    if expr[0] == "c0":
        v = 0
    elif expr[0] == "v":
        v = leaf_lits[expr[1]]
    else:
        v = builder.and_(instantiate(builder, expr[1], leaf_lits),
                         instantiate(builder, expr[2], leaf_lits))
    return v ^ pol


def _var_tt(i: int, nvars: int) -> int:
    n_pat = 1 << nvars
    block = (1 << (1 << i)) - 1
    m = block << (1 << i)
    span = 1 << (i + 1)
    while span < n_pat:
        m |= m << span
        span <<= 1
    return m & ((1 << n_pat) - 1)


@functools.lru_cache(maxsize=None)
def _table3() -> dict[int, tuple[int, tuple]]:
    """tt8 -> (cost, exprlit), exhaustive-optimal over AND-tree cost."""
    full = 0xFF
    best: dict[int, tuple[int, tuple]] = {}
    by_cost: dict[int, list[tuple[int, tuple]]] = defaultdict(list)

    def add(tt, cost, exprlit):
        if tt not in best:
            best[tt] = (cost, exprlit)
            by_cost[cost].append((tt, exprlit))
            return True
        return False

    add(0, 0, CONST0_EXPR)
    add(full, 0, CONST1_EXPR)
    for i in range(3):
        tt = _var_tt(i, 3)
        add(tt, 0, (("v", i), 0))
        add(tt ^ full, 0, (("v", i), 1))

    total = 1
    while len(best) < 256 and total <= 12:
        produced = False
        for ca in range(total):
            cb = total - 1 - ca
            if cb < ca:
                break
            for ta, ea in by_cost.get(ca, []):
                for tb, eb in by_cost.get(cb, []):
                    tt = ta & tb
                    e = (("and", ea, eb), 0)
                    produced |= add(tt, total, e)
                    produced |= add(tt ^ full, total, (e[0], 1))
        if not produced and total > 9:
            break
        total += 1
    # prefer xor-decomposed shapes: sharing makes them cheaper to
    # instantiate and technology mapping recovers them as single cells
    for _ in range(4):
        changed = False
        for tt in range(256):
            if tt not in best:
                continue
            for i in range(3):
                t0 = _cofactor(tt, 3, i, 0)
                t1 = _cofactor(tt, 3, i, 1)
                if t0 ^ t1 == 0xFF:
                    cg, eg = best[t0]
                    if cg + 3 < best[tt][0]:
                        best[tt] = (cg + 3, _xor_expr((("v", i), 0), eg))
                        changed = True
        if not changed:
            break
    xored = set()
    for tt in range(256):
        if tt not in best or tt in xored:
            continue
        for i in range(3):
            t0 = _cofactor(tt, 3, i, 0)
            t1 = _cofactor(tt, 3, i, 1)
            if t0 ^ t1 == 0xFF:
                cg, eg = best[t0]
                if cg + 3 == best[tt][0]:
                    best[tt] = (cg + 3, _xor_expr((("v", i), 0), eg))
                    xored.add(tt)
                    break
    return best


def _project(tt: int, nvars: int):
    """Drop don't-care variables; returns (tt', support_indices)."""
    full = (1 << (1 << nvars)) - 1
    support = []
    for i in range(nvars):
        vi = _var_tt(i, nvars)
        shift = 1 << i
        # variable i matters iff the two cofactors differ
        if ((tt >> shift) & ~vi & full) != (tt & ~vi & full):
            support.append(i)
    if len(support) == nvars:
        return tt, support
    k = len(support)
    out = 0
    for p in range(1 << k):
        full_p = 0
        for j, i in enumerate(support):
            if (p >> j) & 1:
                full_p |= 1 << i
        if (tt >> full_p) & 1:
            out |= 1 << p
    return out, support


def _cofactor(tt: int, nvars: int, i: int, value: int) -> int:
    """Cofactor over the same variable set (var i becomes don't-care)."""
    vi = _var_tt(i, nvars)
    shift = 1 << i
    if value:
        part = tt & vi
        return part | (part >> shift)
    part = tt & ~vi
    return part | (part << shift)


def _isop_cubes(tt: int, nvars: int) -> list[tuple[int, int]]:
    """Greedy prime cover; cubes are (care_mask, value_mask) over variables."""
    if tt == 0:
        return []
    minterms = [p for p in range(1 << nvars) if (tt >> p) & 1]
    # grow each minterm to a prime by dropping literals greedily
    primes = set()
    for m in minterms:
        care = (1 << nvars) - 1
        val = m
        for i in range(nvars):
            trial_care = care & ~(1 << i)
            ok = True
            base = val & trial_care
            # all patterns matching the enlarged cube must be in the on-set
            free = [j for j in range(nvars) if not (trial_care >> j) & 1]
            for fill in range(1 << len(free)):
                p = base
                for jdx, j in enumerate(free):
                    if (fill >> jdx) & 1:
                        p |= 1 << j
                if not (tt >> p) & 1:
                    ok = False
                    break
            if ok:
                care = trial_care
                val = base
        primes.add((care, val))
    # greedy cover
    remaining = set(minterms)
    cover = []
    primes_list = sorted(primes)
    while remaining:
        best_prime = None
        best_hit = -1
        for care, val in primes_list:
            hit = sum(1 for m in remaining if (m & care) == val)
            if hit > best_hit or (hit == best_hit and best_prime is None):
                best_hit = hit
                best_prime = (care, val)
        cover.append(best_prime)
        care, val = best_prime
        remaining = {m for m in remaining if (m & care) != val}
    return cover


def _sop_expr(tt: int, nvars: int):
    cubes = _isop_cubes(tt, nvars)
    if not cubes:
        return CONST0_EXPR
    terms = []
    for care, val in cubes:
        factors = []
        for i in range(nvars):
            if (care >> i) & 1:
                factors.append((("v", i), 0 if (val >> i) & 1 else 1))
        if not factors:
            return CONST1_EXPR
        t = factors[0]
        for f in factors[1:]:
            t = (("and", t, f), 0)
        terms.append(t)
    # OR tree via De Morgan
    acc = expr_not(terms[0])
    for t in terms[1:]:
        acc = (("and", acc, expr_not(t)), 0)
    return expr_not(acc)


@functools.lru_cache(maxsize=65536)
def _synth_reduced(tt: int, nvars: int) -> tuple[int, tuple]:
    """Best known exprlit for a support-reduced function."""
    if nvars <= 3:
        # embed into the 3-var table domain
        t3 = tt
        for i in range(nvars, 3):
            t3 |= t3 << (1 << i)
        t3 &= 0xFF
        hit = _table3().get(t3)
        if hit is not None:
            return hit
    best_cost, best_expr = None, None
    full = (1 << (1 << nvars)) - 1
    for src, pol in ((tt, 0), (tt ^ full, 1)):
        e = _sop_expr(src, nvars)
        c = expr_cost(e)
        if best_cost is None or c < best_cost:
            best_cost, best_expr = c, (e[0], e[1] ^ pol)
    for i in range(nvars):
        t0 = _cofactor(tt, nvars, i, 0)
        t1 = _cofactor(tt, nvars, i, 1)
        c0, e0 = synth(t0, nvars)
        c1, e1 = synth(t1, nvars)
        v = (("v", i), 0)
        nv = (("v", i), 1)
        if t0 ^ t1 == full:         # f = v xor f0: keep the xor shape
            e = _xor_expr(v, e0)
            c = c0 + 3
        elif e1 == CONST1_EXPR:     # f = v | f0
            e = expr_not((("and", nv, expr_not(e0)), 0))
            c = c0 + 1
        elif e1 == CONST0_EXPR:     # f = ~v & f0
            e = (("and", nv, e0), 0)
            c = c0 + 1
        elif e0 == CONST1_EXPR:     # f = ~v | f1
            e = expr_not((("and", v, expr_not(e1)), 0))
            c = c1 + 1
        elif e0 == CONST0_EXPR:     # f = v & f1
            e = (("and", v, e1), 0)
            c = c1 + 1
        else:                       # mux(v, f1, f0)
            e = expr_not((("and",
                           expr_not((("and", v, e1), 0)),
                           expr_not((("and", nv, e0), 0))), 0))
            c = c0 + c1 + 3
        if c < best_cost:
            best_cost, best_expr = c, e
    return best_cost, best_expr


def _xor_expr(v, g):
    """The two-level xor shape, which technology mapping recovers as one
    XOR2/XNOR2 cell."""
    return expr_not((("and",
                      expr_not((("and", v, expr_not(g)), 0)),
                      expr_not((("and", expr_not(v), g), 0))), 0))


def _remap_expr(exprlit, var_map):
    expr, pol = exprlit
    if expr[0] == "v":
        return (("v", var_map[expr[1]]), pol)
    if expr[0] == "and":
        return (("and", _remap_expr(expr[1], var_map), _remap_expr(expr[2], var_map)), pol)
    return exprlit


def synth(tt: int, nvars: int) -> tuple[int, tuple]:
    """Best known (cost, exprlit) realizing the truth table."""
    reduced, support = _project(tt, nvars)
    if not support:
        return 0, (CONST1_EXPR if tt else CONST0_EXPR)
    cost, expr = _synth_reduced(reduced, len(support))
    if len(support) != nvars or support != list(range(nvars)):
        expr = _remap_expr(expr, {j: i for j, i in enumerate(support)})
    return cost, expr


def synth_candidates(tt: int, nvars: int) -> list[tuple[int, tuple]]:
    """Alternative realizations beyond the best one, cheapest first."""
    reduced, support = _project(tt, nvars)
    if not support:
        return [(0, CONST1_EXPR if tt else CONST0_EXPR)]
    k = len(support)
    cands: list[tuple[int, tuple]] = [_synth_reduced(reduced, k) if k > 3 else synth(reduced, k)]
    full = (1 << (1 << k)) - 1
    for src, pol in ((reduced, 0), (reduced ^ full, 1)):
        e = _sop_expr(src, k)
        cands.append((expr_cost(e), (e[0], e[1] ^ pol)))
    fullk = (1 << (1 << k)) - 1
    for i in range(k):
        t0 = _cofactor(reduced, k, i, 0)
        t1 = _cofactor(reduced, k, i, 1)
        c0, e0 = synth(t0, k)
        c1, e1 = synth(t1, k)
        if t0 ^ t1 == fullk:
            cands.append((c0 + 3, _xor_expr((("v", i), 0), e0)))
        e = expr_not((("and",
                       expr_not((("and", (("v", i), 0), e1), 0)),
                       expr_not((("and", (("v", i), 1), e0), 0))), 0))
        cands.append((expr_cost(e), e))
    # dedupe, remap to original variable indices, sort by cost
    seen = set()
    out = []
    var_map = {j: i for j, i in enumerate(support)}
    for c, e in sorted(cands, key=lambda ce: ce[0]):
        if e in seen:
            continue
        seen.add(e)
        out.append((c, _remap_expr(e, var_map)))
    return out
