"""Pure-Python (numpy) simulation kernel, the fallback for ``_simcore``.

Evaluates the whole stimulus stream wire by wire instead of cycle by cycle:
combinational circuits make every cycle independent, so each wire's full
waveform is one vectorized expression.
"""

import numpy as np


def _waves(op, in0, in1, in2, out_wire, input_wires, stim, n_wires):
    cycles = stim.shape[0]
    wave = np.zeros((n_wires, cycles), dtype=np.uint8)
    wave[np.asarray(input_wires, dtype=np.intp)] = stim.T
    for k in range(op.shape[0]):
        o = op[k]
        a = wave[in0[k]]
        b = wave[in1[k]]
        if o == 4:
            v = a & b
        elif o == 5:
            v = (a & b) ^ 1
        elif o == 6:
            v = a | b
        elif o == 7:
            v = (a | b) ^ 1
        elif o == 8:
            v = a ^ b
        elif o == 9:
            v = (a ^ b) ^ 1
        elif o == 3:
            v = a ^ 1
        elif o == 10:
            s = wave[in2[k]]
            v = np.where(s, b, a).astype(np.uint8)
        elif o == 11:
            s = wave[in2[k]]
            v = (a & b) | (a & s) | (b & s)
        elif o == 2:
            v = a
        elif o == 1:
            v = np.ones(cycles, dtype=np.uint8)
        else:
            v = np.zeros(cycles, dtype=np.uint8)
        wave[out_wire[k]] = v
    return wave


def count_toggles(op, in0, in1, in2, out_wire, input_wires, stim, n_wires):
    """Return int64 per-wire toggle counts over consecutive cycles."""
    wave = _waves(op, in0, in1, in2, out_wire, input_wires, stim, n_wires)
    return np.count_nonzero(wave[:, 1:] != wave[:, :-1], axis=1).astype(np.int64)


def eval_all(op, in0, in1, in2, out_wire, input_wires, stim, n_wires):
    """Full wire-state matrix (n_wires x cycles) for a stimulus batch."""
    return _waves(op, in0, in1, in2, out_wire, input_wires, stim, n_wires)
