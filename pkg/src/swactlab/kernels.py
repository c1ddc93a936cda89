"""Simulation kernel backend selection.

The toggle-counting inner loop dominates switching-activity estimation, so it
is implemented twice: a compiled Cython kernel (``_simcore``) and a pure
numpy fallback (``_simpy``). The compiled one is preferred when the extension
built; ``SWACTLAB_BACKEND=python`` or ``=compiled`` forces a choice.

Both kernels implement the same contract: cells are given in topological
order as parallel int32 arrays (opcode, up to three input wire indices, one
output wire index); unused input slots must hold a valid index (0 is fine).
"""

import os

from . import _simpy

OPCODES = {
    "CONST0": 0,
    "CONST1": 1,
    "BUF": 2,
    "NOT": 3,
    "AND2": 4,
    "NAND2": 5,
    "OR2": 6,
    "NOR2": 7,
    "XOR2": 8,
    "XNOR2": 9,
    "MUX2": 10,
    "MAJ3": 11,
}

_forced = os.environ.get("SWACTLAB_BACKEND", "auto")
if _forced not in ("auto", "compiled", "python"):
    raise RuntimeError(f"SWACTLAB_BACKEND must be auto/compiled/python, got {_forced!r}")

if _forced == "python":
    _impl = _simpy
    BACKEND = "python"
else:
    try:
        from . import _simcore as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise
        _impl = _simpy
        BACKEND = "python"


def count_toggles(op, in0, in1, in2, out_wire, input_wires, stim, n_wires):
    """Per-wire toggle counts; cycle 0 sets the initial state."""
    return _impl.count_toggles(op, in0, in1, in2, out_wire, input_wires, stim, n_wires)


def eval_all(op, in0, in1, in2, out_wire, input_wires, stim, n_wires):
    """Wire-state matrix for a batch of input patterns (always numpy path)."""
    return _simpy.eval_all(op, in0, in1, in2, out_wire, input_wires, stim, n_wires)
