"""Cell-level combinational netlists and the cost model behind every metric.

The library is a fixed set of technology-independent gates with static-CMOS
transistor counts. A netlist is a DAG of cells over named wires; input and
output ports are ordered wire lists. Netlists are treated as immutable after
construction (evaluation state is allocated per call).

JSON interchange format (the boundary between generate/optimize/simulate):

    {"name": ..., "inputs": [wire, ...], "outputs": [wire, ...],
     "cells": [{"id": int, "kind": "AND2", "inputs": [wire, ...],
                "output": wire}, ...]}
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels

# Static-CMOS transistor counts; constants are tie cells and cost nothing.
TRANSISTOR_COST = {
    "CONST0": 0,
    "CONST1": 0,
    "NOT": 2,
    "BUF": 4,
    "NAND2": 4,
    "NOR2": 4,
    "AND2": 6,
    "OR2": 6,
    "XOR2": 8,
    "XNOR2": 8,
    "MAJ3": 10,
    "MUX2": 12,
}

_ARITY = {
    "CONST0": 0,
    "CONST1": 0,
    "BUF": 1,
    "NOT": 1,
    "AND2": 2,
    "NAND2": 2,
    "OR2": 2,
    "NOR2": 2,
    "XOR2": 2,
    "XNOR2": 2,
    "MUX2": 3,  # (a, b, sel): out = sel ? b : a
    "MAJ3": 3,
}


class NetlistError(ValueError):
    pass


class CellKind(enum.Enum):
    CONST0 = "CONST0"
    CONST1 = "CONST1"
    BUF = "BUF"
    NOT = "NOT"
    AND2 = "AND2"
    NAND2 = "NAND2"
    OR2 = "OR2"
    NOR2 = "NOR2"
    XOR2 = "XOR2"
    XNOR2 = "XNOR2"
    MUX2 = "MUX2"
    MAJ3 = "MAJ3"

    @property
    def transistor_cost(self) -> int:
        return TRANSISTOR_COST[self.value]

    @property
    def arity(self) -> int:
        return _ARITY[self.value]


def cost_table_digest() -> str:
    """Stable hash of the transistor cost table, for report manifests."""
    import hashlib

    text = ",".join(f"{k}={v}" for k, v in sorted(TRANSISTOR_COST.items()))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _cell_value(kind: CellKind, vals: tuple[int, ...]) -> int:
    if kind is CellKind.AND2:
        return vals[0] & vals[1]
    if kind is CellKind.NAND2:
        return (vals[0] & vals[1]) ^ 1
    if kind is CellKind.OR2:
        return vals[0] | vals[1]
    if kind is CellKind.NOR2:
        return (vals[0] | vals[1]) ^ 1
    if kind is CellKind.XOR2:
        return vals[0] ^ vals[1]
    if kind is CellKind.XNOR2:
        return (vals[0] ^ vals[1]) ^ 1
    if kind is CellKind.NOT:
        return vals[0] ^ 1
    if kind is CellKind.BUF:
        return vals[0]
    if kind is CellKind.MUX2:
        return vals[1] if vals[2] else vals[0]
    if kind is CellKind.MAJ3:
        return 1 if vals[0] + vals[1] + vals[2] >= 2 else 0
    if kind is CellKind.CONST0:
        return 0
    return 1


@dataclass(frozen=True)
class Cell:
    id: int
    kind: CellKind
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class MetricsReport:
    cell_count: int
    transistors: int
    depth: int

    @classmethod
    def of(cls, n: "CellNetlist") -> "MetricsReport":
        return cls(cell_count=len(n.cells), transistors=n.transistor_count(), depth=n.depth())


class CellNetlist:
    def __init__(self, name: str, inputs, outputs, cells):
        self.name = name
        self.inputs: tuple[str, ...] = tuple(inputs)
        self.outputs: tuple[str, ...] = tuple(outputs)
        self.cells: tuple[Cell, ...] = tuple(cells)
        self._topo_cache: tuple[Cell, ...] | None = None
        self._arrays_cache = None

    # -- structure ---------------------------------------------------------

    @property
    def wires(self) -> set[str]:
        return set(self.inputs) | {c.output for c in self.cells}

    def driver_map(self) -> dict[str, Cell]:
        return {c.output: c for c in self.cells}

    def readers(self) -> dict[str, list[Cell]]:
        table: dict[str, list[Cell]] = {w: [] for w in self.wires}
        for c in self.cells:
            for w in set(c.inputs):
                table.setdefault(w, []).append(c)
        return table

    def validate(self) -> list[str]:
        """Check structural rules; returns violation strings, never raises."""
        violations = []
        seen_driver: dict[str, int] = {}
        for c in self.cells:
            if len(c.inputs) != c.kind.arity:
                violations.append(f"arity: cell {c.id} ({c.kind.value}) has {len(c.inputs)} inputs")
            if c.output in seen_driver:
                violations.append(f"driver: wire {c.output} driven by cells {seen_driver[c.output]} and {c.id}")
            seen_driver[c.output] = c.id
        for w in self.inputs:
            if w in seen_driver:
                violations.append(f"driver: input port {w} also driven by cell {seen_driver[w]}")
        known = self.wires
        for c in self.cells:
            for w in c.inputs:
                if w not in known:
                    violations.append(f"undriven: cell {c.id} reads unknown wire {w}")
        for w in self.outputs:
            if w not in known:
                violations.append(f"undriven: output port {w}")
        try:
            self._topo()
        except NetlistError:
            violations.append("cycle: combinational loop")
        return violations

    def _topo(self) -> tuple[Cell, ...]:
        if self._topo_cache is not None:
            return self._topo_cache
        ready = set(self.inputs)
        pending = list(self.cells)
        order: list[Cell] = []
        while pending:
            progressed = False
            rest = []
            for c in pending:
                if all(w in ready for w in c.inputs):
                    order.append(c)
                    ready.add(c.output)
                    progressed = True
                else:
                    rest.append(c)
            if not progressed:
                raise NetlistError(f"{self.name}: combinational loop or undriven wire")
            pending = rest
        self._topo_cache = tuple(order)
        return self._topo_cache

    # -- metrics -----------------------------------------------------------

    def transistor_count(self) -> int:
        return sum(c.kind.transistor_cost for c in self.cells)

    def cell_count(self) -> int:
        return len(self.cells)

    def depth(self) -> int:
        """Longest input-to-output path counted in cells.

        Pass-through connections count 0; constant tie cells count 0.
        """
        depth_of: dict[str, int] = {w: 0 for w in self.inputs}
        for c in self._topo():
            d_in = max((depth_of[w] for w in c.inputs), default=0)
            depth_of[c.output] = d_in if c.kind in (CellKind.CONST0, CellKind.CONST1) else d_in + 1
        return max((depth_of.get(w, 0) for w in self.outputs), default=0)

    def fanout_cost(self, wire: str) -> int:
        """Total transistors of all cells reading the wire; ports read nothing."""
        if wire not in self.wires:
            raise NetlistError(f"unknown wire {wire!r}")
        cost = 0
        for c in self.cells:
            if wire in c.inputs:
                cost += c.kind.transistor_cost
        return cost

    # -- evaluation --------------------------------------------------------

    def evaluate(self, assignment: dict[str, int]) -> dict[str, int]:
        """Evaluate one input assignment; returns the full wire-state map."""
        missing = [w for w in self.inputs if w not in assignment]
        if missing:
            raise NetlistError(f"missing input assignment for {missing}")
        state = {w: int(assignment[w]) & 1 for w in self.inputs}
        for c in self._topo():
            state[c.output] = _cell_value(c.kind, tuple(state[w] for w in c.inputs))
        return state

    def output_bits(self, state: dict[str, int]) -> tuple[int, ...]:
        return tuple(state[w] for w in self.outputs)

    def kernel_arrays(self):
        """Parallel int32 arrays for the simulation kernels (cached)."""
        if self._arrays_cache is not None:
            return self._arrays_cache
        wire_ids = {w: i for i, w in enumerate(sorted(self.wires))}
        topo = self._topo()
        nc = len(topo)
        op = np.zeros(nc, dtype=np.int32)
        in0 = np.zeros(nc, dtype=np.int32)
        in1 = np.zeros(nc, dtype=np.int32)
        in2 = np.zeros(nc, dtype=np.int32)
        out = np.zeros(nc, dtype=np.int32)
        for k, c in enumerate(topo):
            op[k] = kernels.OPCODES[c.kind.value]
            ins = c.inputs
            in0[k] = wire_ids[ins[0]] if len(ins) > 0 else 0
            in1[k] = wire_ids[ins[1]] if len(ins) > 1 else 0
            in2[k] = wire_ids[ins[2]] if len(ins) > 2 else 0
            out[k] = wire_ids[c.output]
        input_wires = np.array([wire_ids[w] for w in self.inputs], dtype=np.int32)
        weights = np.zeros(len(wire_ids), dtype=np.int64)
        for c in self.cells:
            for w in set(c.inputs):
                weights[wire_ids[w]] += c.kind.transistor_cost
        self._arrays_cache = (op, in0, in1, in2, out, input_wires, weights, wire_ids)
        return self._arrays_cache

    def evaluate_batch(self, patterns: np.ndarray) -> np.ndarray:
        """Evaluate many input patterns at once; returns output bit matrix.

        patterns: uint8 array (n_patterns, n_inputs) ordered like ``inputs``.
        """
        op, in0, in1, in2, out, input_wires, _w, wire_ids = self.kernel_arrays()
        stim = np.ascontiguousarray(patterns, dtype=np.uint8)
        if stim.ndim != 2 or stim.shape[1] != len(self.inputs):
            raise NetlistError(f"pattern matrix must be (n, {len(self.inputs)})")
        wave = kernels.eval_all(op, in0, in1, in2, out, input_wires, stim, len(wire_ids))
        out_idx = np.array([wire_ids[w] for w in self.outputs], dtype=np.intp)
        return wave[out_idx].T.copy()

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "cells": [
                {"id": c.id, "kind": c.kind.value, "inputs": list(c.inputs), "output": c.output}
                for c in self.cells
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CellNetlist":
        cells = [
            Cell(int(c["id"]), CellKind(c["kind"]), tuple(c["inputs"]), c["output"])
            for c in doc["cells"]
        ]
        return cls(doc["name"], doc["inputs"], doc["outputs"], cells)

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json(), f, indent=1)
            f.write("\n")

    @classmethod
    def load(cls, path) -> "CellNetlist":
        with open(path) as f:
            return cls.from_json(json.load(f))

    def __repr__(self):
        return (
            f"CellNetlist({self.name!r}, {len(self.inputs)} in, "
            f"{len(self.outputs)} out, {len(self.cells)} cells)"
        )


def rename_wires(n: CellNetlist, mapping: dict[str, str]) -> CellNetlist:
    """Rebuild with wires renamed; names not in the mapping are kept."""
    def m(w):
        return mapping.get(w, w)

    cells = [Cell(c.id, c.kind, tuple(m(w) for w in c.inputs), m(c.output)) for c in n.cells]
    return CellNetlist(n.name, [m(w) for w in n.inputs], [m(w) for w in n.outputs], cells)
