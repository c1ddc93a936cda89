"""Structural generators for the encoder and multiplier blocks.

Each block is emitted as a CellNetlist over the fixed gate library and is
meant to be verified exhaustively against the golden models in ``formats``.
Bit order on ports is LSB-first; multiplier inputs are operand-major
(a0..a{w-1}, b0..b{w-1}).

Blocks:

* ENC_TC_SM   -- two's complement to sign-magnitude, with clipping of the
                 most negative value to the most negative representable one
* ENC_TC_SME  -- two's complement to extended sign-magnitude (lossless)
* ENC_TCS_SM  -- symmetric two's complement to sign-magnitude; structurally
                 identical to ENC_TC_SME
* MUL_TC_TC   -- signed array multiplier (Baugh-Wooley style)
* MUL_SM_TC   -- unsigned (w-1)x(w-1) magnitude core, XOR sign, conditional
                 two's-complement negation of the result
* MUL_SME_TC  -- MUL_SM_TC extended by most-negative-value detection that
                 substitutes magnitude 2^(w-2) and left-shifts the product
* MUL_SM_SM   -- magnitude core with sign-magnitude output and negative-zero
                 suppression
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .formats import Format, ValueRange, encode, ref_convert, ref_multiply, representable_range
from .netlist import Cell, CellKind, CellNetlist, rename_wires

_CONST0 = ("const", 0)
_CONST1 = ("const", 1)

_COMPLEMENT_KIND = {
    CellKind.AND2: CellKind.NAND2,
    CellKind.NAND2: CellKind.AND2,
    CellKind.OR2: CellKind.NOR2,
    CellKind.NOR2: CellKind.OR2,
    CellKind.XOR2: CellKind.XNOR2,
    CellKind.XNOR2: CellKind.XOR2,
}

_COMMUTATIVE = {
    CellKind.AND2, CellKind.NAND2, CellKind.OR2, CellKind.NOR2,
    CellKind.XOR2, CellKind.XNOR2, CellKind.MAJ3,
}


def _is_const(sig) -> bool:
    return isinstance(sig, tuple) and sig[0] == "const"


class NetBuilder:
    """Gate-level builder with peephole constant folding and sharing.

    Signals are wire names or constant sentinels; constants only materialize
    as CONST cells when they survive folding all the way to a port or a
    cell pin.
    """

    def __init__(self, name: str):
        self.name = name
        self.inputs: list[str] = []
        self._cells: list[tuple[CellKind, tuple, str]] = []
        self._n = 0
        self._memo: dict = {}
        self._def: dict[str, tuple[CellKind, tuple]] = {}
        self._const_wire: dict[int, str] = {}

    def input(self, name: str) -> str:
        self.inputs.append(name)
        return name

    def input_vector(self, prefix: str, width: int) -> list[str]:
        return [self.input(f"{prefix}{i}") for i in range(width)]

    def const(self, value: int):
        return _CONST1 if value else _CONST0

    def _new_wire(self) -> str:
        w = f"n{self._n}"
        self._n += 1
        return w

    def _materialize(self, sig) -> str:
        if not _is_const(sig):
            return sig
        v = sig[1]
        if v not in self._const_wire:
            w = self._new_wire()
            kind = CellKind.CONST1 if v else CellKind.CONST0
            self._cells.append((kind, (), w))
            self._const_wire[v] = w
        return self._const_wire[v]

    def _emit(self, kind: CellKind, ins: tuple) -> str:
        ins = tuple(self._materialize(s) for s in ins)
        if kind in _COMMUTATIVE:
            ins = tuple(sorted(ins))
        key = (kind, ins)
        if key in self._memo:
            return self._memo[key]
        out = self._new_wire()
        self._cells.append((kind, ins, out))
        self._def[out] = (kind, ins)
        self._memo[key] = out
        return out

    def _complement_of(self, sig):
        """Known complement wire of sig, or None."""
        if _is_const(sig):
            return self.const(1 - sig[1])
        d = self._def.get(sig)
        if d is None:
            inv = self._memo.get((CellKind.NOT, (sig,)))
            return inv
        kind, ins = d
        if kind is CellKind.NOT:
            return ins[0]
        comp = _COMPLEMENT_KIND.get(kind)
        if comp is not None:
            return self._memo.get((comp, ins))
        return self._memo.get((CellKind.NOT, (sig,)))

    def _are_complements(self, a, b) -> bool:
        return self._complement_of(a) == b or self._complement_of(b) == a

    def not_(self, x):
        if _is_const(x):
            return self.const(1 - x[1])
        d = self._def.get(x)
        if d is not None:
            kind, ins = d
            if kind is CellKind.NOT:
                return ins[0]
            if kind is CellKind.BUF:
                return self.not_(ins[0])
            comp = _COMPLEMENT_KIND.get(kind)
            if comp is not None:
                return self._emit(comp, ins)
        return self._emit(CellKind.NOT, (x,))

    def and2(self, a, b):
        if _is_const(a):
            a, b = b, a
        if _is_const(b):
            return a if b[1] else self.const(0)
        if a == b:
            return a
        if self._are_complements(a, b):
            return self.const(0)
        return self._emit(CellKind.AND2, (a, b))

    def or2(self, a, b):
        if _is_const(a):
            a, b = b, a
        if _is_const(b):
            return self.const(1) if b[1] else a
        if a == b:
            return a
        if self._are_complements(a, b):
            return self.const(1)
        return self._emit(CellKind.OR2, (a, b))

    def nand2(self, a, b):
        return self.not_(self.and2(a, b))

    def nor2(self, a, b):
        return self.not_(self.or2(a, b))

    def xor2(self, a, b):
        if _is_const(a):
            a, b = b, a
        if _is_const(b):
            return self.not_(a) if b[1] else a
        if a == b:
            return self.const(0)
        if self._are_complements(a, b):
            return self.const(1)
        return self._emit(CellKind.XOR2, (a, b))

    def xnor2(self, a, b):
        return self.not_(self.xor2(a, b))

    def mux(self, a, b, sel):
        """out = sel ? b : a"""
        if _is_const(sel):
            return b if sel[1] else a
        if a == b:
            return a
        if _is_const(a) and _is_const(b):
            return sel if b[1] else self.not_(sel)
        if _is_const(a):
            return self.and2(sel, b) if a[1] == 0 else self.or2(self.not_(sel), b)
        if _is_const(b):
            return self.and2(self.not_(sel), a) if b[1] == 0 else self.or2(sel, a)
        if self._are_complements(a, b):
            return self.xnor2(sel, b)
        return self._emit(CellKind.MUX2, (a, b, sel))

    def maj(self, a, b, c):
        sigs = [a, b, c]
        consts = [s for s in sigs if _is_const(s)]
        if consts:
            rest = [s for s in sigs if not _is_const(s)]
            ones = sum(s[1] for s in consts)
            if ones >= 2:
                return self.const(1)
            if len(consts) - ones >= 2:
                return self.const(0)
            # exactly one or two signals left with a single deciding constant
            if len(rest) == 1:
                return rest[0]
            return self.or2(rest[0], rest[1]) if ones else self.and2(rest[0], rest[1])
        if a == b or self._are_complements(b, c):
            return a
        if a == c or self._are_complements(a, b):
            return c
        if b == c or self._are_complements(a, c):
            return b
        return self._emit(CellKind.MAJ3, (a, b, c))

    def or_tree(self, sigs):
        sigs = list(sigs)
        if not sigs:
            return self.const(0)
        while len(sigs) > 1:
            nxt = [self.or2(sigs[i], sigs[i + 1]) for i in range(0, len(sigs) - 1, 2)]
            if len(sigs) % 2:
                nxt.append(sigs[-1])
            sigs = nxt
        return sigs[0]

    def and_tree(self, sigs):
        sigs = list(sigs)
        if not sigs:
            return self.const(1)
        while len(sigs) > 1:
            nxt = [self.and2(sigs[i], sigs[i + 1]) for i in range(0, len(sigs) - 1, 2)]
            if len(sigs) % 2:
                nxt.append(sigs[-1])
            sigs = nxt
        return sigs[0]

    def full_add(self, a, b, c):
        return self.xor2(self.xor2(a, b), c), self.maj(a, b, c)

    def sum_columns(self, cols, out_width: int) -> list:
        """Carry-save reduce a per-weight bit matrix, then ripple; mod 2^out_width."""
        cols = [list(c) for c in cols]
        while any(len(c) > 2 for c in cols):
            nxt: list[list] = [[] for _ in range(len(cols) + 1)]
            for w, col in enumerate(cols):
                while len(col) >= 3:
                    s, cy = self.full_add(col.pop(0), col.pop(0), col.pop(0))
                    nxt[w].append(s)
                    nxt[w + 1].append(cy)
                nxt[w].extend(col)
            cols = nxt
        bits = []
        carry = self.const(0)
        for col in cols[:out_width]:
            a = col[0] if len(col) > 0 else self.const(0)
            b = col[1] if len(col) > 1 else self.const(0)
            s, carry = self.full_add(a, b, carry)
            bits.append(s)
        while len(bits) < out_width:
            bits.append(self.const(0))
        return bits

    def cond_negate(self, bits, s):
        """(x ^ s) + s: two's-complement negation of the word when s=1."""
        out = [bits[0]]
        carry = self.and2(s, self.not_(bits[0]))
        for i in range(1, len(bits)):
            xs = self.xor2(bits[i], s)
            out.append(self.xor2(xs, carry))
            if i < len(bits) - 1:
                carry = self.and2(xs, carry)
        return out

    def finish(self, outputs, output_names=None) -> CellNetlist:
        out_sigs = [self._materialize(s) for s in outputs]
        # sweep cells not reachable from the outputs
        needed = set(out_sigs)
        kept = []
        for kind, ins, out in reversed(self._cells):
            if out in needed:
                kept.append((kind, ins, out))
                needed.update(ins)
        kept.reverse()
        cells = [Cell(i, kind, ins, out) for i, (kind, ins, out) in enumerate(kept)]
        n = CellNetlist(self.name, self.inputs, out_sigs, cells)
        if output_names:
            mapping = {}
            for wire, new in zip(n.outputs, output_names):
                if wire in mapping or wire in self.inputs or wire == new:
                    continue
                if new not in n.wires:
                    mapping[wire] = new
            n = rename_wires(n, mapping)
        return n


class Block(enum.Enum):
    ENC_TC_SM = "enc-tc-sm"
    ENC_TC_SME = "enc-tc-sme"
    ENC_TCS_SM = "enc-tcs-sm"
    MUL_TC_TC = "mul-tc-tc"
    MUL_SM_TC = "mul-sm-tc"
    MUL_SME_TC = "mul-sme-tc"
    MUL_SM_SM = "mul-sm-sm"


_BLOCK_FORMATS = {
    Block.ENC_TC_SM: (Format.TC, Format.SM),
    Block.ENC_TC_SME: (Format.TC, Format.SME),
    Block.ENC_TCS_SM: (Format.TCS, Format.SM),
    Block.MUL_TC_TC: (Format.TC, Format.TC),
    Block.MUL_SM_TC: (Format.SM, Format.TC),
    Block.MUL_SME_TC: (Format.SME, Format.TC),
    Block.MUL_SM_SM: (Format.SM, Format.SM),
}


@dataclass(frozen=True)
class BlockSpec:
    block: Block
    width: int = 4

    def __post_init__(self):
        if self.width < 2:
            raise ValueError(f"width must be >= 2, got {self.width}")

    @property
    def is_encoder(self) -> bool:
        return self.block.value.startswith("enc")

    @property
    def in_format(self) -> Format:
        return _BLOCK_FORMATS[self.block][0]

    @property
    def out_format(self) -> Format:
        return _BLOCK_FORMATS[self.block][1]

    @property
    def operands(self) -> int:
        return 1 if self.is_encoder else 2

    @property
    def out_width(self) -> int:
        return self.width if self.is_encoder else 2 * self.width

    @property
    def in_range(self) -> ValueRange:
        return representable_range(self.in_format, self.width)

    @property
    def netlist_name(self) -> str:
        return f"{self.block.value.replace('-', '_')}_w{self.width}"


def _tc_to_sm_bits(b: NetBuilder, x: list[str]):
    """Shared magnitude path: conditional negation of the low bits by the sign."""
    sign = x[-1]
    return b.cond_negate(x[:-1], sign), sign


def build_encoder(spec: BlockSpec) -> CellNetlist:
    if not spec.is_encoder:
        raise ValueError(f"{spec.block} is not an encoder")
    w = spec.width
    b = NetBuilder(spec.netlist_name)
    x = b.input_vector("x", w)
    mag, sign = _tc_to_sm_bits(b, x)
    if spec.block is Block.ENC_TC_SM:
        # Most negative input: sign set, all low bits clear. Its magnitude
        # path yields 0, so OR-ing the detect flag saturates to max magnitude.
        is_min = b.and2(sign, b.not_(b.or_tree(x[:-1])))
        mag = [b.or2(m, is_min) for m in mag]
    out = mag + [sign]
    return b.finish(out, [f"y{i}" for i in range(w)])


def _unsigned_core(b: NetBuilder, xa: list, xb: list):
    """Unsigned array multiplier: AND partial products, carry-save reduction."""
    m, n = len(xa), len(xb)
    cols: list[list] = [[] for _ in range(m + n)]
    for i in range(m):
        for j in range(n):
            cols[i + j].append(b.and2(xa[i], xb[j]))
    return b.sum_columns(cols, m + n)


def build_multiplier(spec: BlockSpec) -> CellNetlist:
    if spec.is_encoder:
        raise ValueError(f"{spec.block} is not a multiplier")
    w = spec.width
    ow = 2 * w
    b = NetBuilder(spec.netlist_name)
    xa = b.input_vector("a", w)
    xb = b.input_vector("b", w)

    if spec.block is Block.MUL_TC_TC:
        # Baugh-Wooley signed array: complemented sign-row/column partial
        # products plus correction constants at bits w and 2w-1.
        cols: list[list] = [[] for _ in range(ow + 1)]
        for i in range(w - 1):
            for j in range(w - 1):
                cols[i + j].append(b.and2(xa[i], xb[j]))
        for j in range(w - 1):
            cols[w - 1 + j].append(b.nand2(xa[w - 1], xb[j]))
        for i in range(w - 1):
            cols[w - 1 + i].append(b.nand2(xa[i], xb[w - 1]))
        cols[ow - 2].append(b.and2(xa[w - 1], xb[w - 1]))
        cols[w].append(b.const(1))
        cols[ow - 1].append(b.const(1))
        out = b.sum_columns(cols, ow)
    else:
        sa, sb = xa[w - 1], xb[w - 1]
        ma, mb = xa[: w - 1], xb[: w - 1]
        sign = b.xor2(sa, sb)
        if spec.block is Block.MUL_SME_TC:
            # Most negative operand: detect it, substitute magnitude 2^(w-2)
            # and left-shift the product once per substituted operand. A
            # substituted operand zeroes its own magnitude, so the shifted
            # substitute products fold into extra partial-product columns:
            #   ma'*mb' << subs = ma*mb + sub_a*2^(w-1)*mb
            #                   + sub_b*2^(w-1)*ma + sub_a*sub_b*2^(2w-2)
            # The magnitude core still multiplies (w-1)-bit values.
            sub_a = b.and2(sa, b.not_(b.or_tree(ma)))
            sub_b = b.and2(sb, b.not_(b.or_tree(mb)))
            cols: list[list] = [[] for _ in range(ow)]
            for i in range(w - 1):
                for j in range(w - 1):
                    cols[i + j].append(b.and2(ma[i], mb[j]))
            for j in range(w - 1):
                cols[w - 1 + j].append(b.and2(sub_a, mb[j]))
                cols[w - 1 + j].append(b.and2(sub_b, ma[j]))
            cols[2 * w - 2].append(b.and2(sub_a, sub_b))
            prod = b.sum_columns(cols, ow)
        else:
            prod = _unsigned_core(b, ma, mb)
        if spec.block is Block.MUL_SM_SM:
            nonzero = b.and2(b.or_tree(ma), b.or_tree(mb))
            out_sign = b.and2(sign, nonzero)
            mag = prod + [b.const(0)] * (ow - 1 - len(prod))
            out = mag[: ow - 1] + [out_sign]
        else:
            ext = prod + [b.const(0)] * (ow - len(prod))
            out = b.cond_negate(ext[:ow], sign)
    return b.finish(out, [f"p{i}" for i in range(ow)])


def build_block(spec: BlockSpec) -> CellNetlist:
    return build_encoder(spec) if spec.is_encoder else build_multiplier(spec)


@dataclass(frozen=True)
class Counterexample:
    values: tuple[int, ...]
    input_bits: tuple[int, ...]
    expected: tuple[int, ...]
    actual: tuple[int, ...]

    def __str__(self):
        return (
            f"inputs {self.values} (bits {self.input_bits}): "
            f"expected {self.expected}, got {self.actual}"
        )


def golden_bits(spec: BlockSpec, values: tuple[int, ...]) -> tuple[int, ...]:
    """Expected output bits of a block for the given operand values."""
    if spec.is_encoder:
        word = encode(values[0], spec.in_format, spec.width)
        clip = spec.block is Block.ENC_TC_SM
        return ref_convert(word, spec.in_format, spec.out_format, clip=clip).bits
    product = ref_multiply(values[0], values[1], spec.width)
    return encode(product, spec.out_format, spec.out_width).bits


def legal_inputs(spec: BlockSpec) -> list[tuple[int, ...]]:
    rng = spec.in_range
    values = list(range(rng.lo, rng.hi + 1))
    if spec.is_encoder:
        return [(v,) for v in values]
    return [(a, v) for a in values for v in values]


def verify_exhaustive(n: CellNetlist, spec: BlockSpec) -> Counterexample | None:
    """Compare the netlist against the golden model over every legal input."""
    combos = legal_inputs(spec)
    pats = np.zeros((len(combos), spec.operands * spec.width), dtype=np.uint8)
    expect = np.zeros((len(combos), spec.out_width), dtype=np.uint8)
    for r, values in enumerate(combos):
        bits: list[int] = []
        for v in values:
            bits.extend(encode(v, spec.in_format, spec.width).bits)
        pats[r] = bits
        expect[r] = golden_bits(spec, values)
    got = n.evaluate_batch(pats)
    bad = np.nonzero((got != expect).any(axis=1))[0]
    if bad.size == 0:
        return None
    r = int(bad[0])
    return Counterexample(
        values=combos[r],
        input_bits=tuple(int(x) for x in pats[r]),
        expected=tuple(int(x) for x in expect[r]),
        actual=tuple(int(x) for x in got[r]),
    )
