# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bit-parallel simulation kernel.

Packs 64 cycles into one machine word per wire, evaluates the netlist with
bitwise word operations, and counts toggles via popcount of the XOR between
each wire's waveform and its one-cycle-delayed copy. Opcode numbering is
shared with the pure-Python fallback in ``_simpy``; see ``kernels.OPCODES``.
"""

import numpy as np

cdef extern from *:
    """
    #include <stdint.h>
    static inline int swactlab_popcount64(uint64_t x) {
    #if defined(__GNUC__) || defined(__clang__)
        return __builtin_popcountll(x);
    #else
        x = x - ((x >> 1) & 0x5555555555555555ULL);
        x = (x & 0x3333333333333333ULL) + ((x >> 2) & 0x3333333333333333ULL);
        x = (x + (x >> 4)) & 0x0f0f0f0f0f0f0f0fULL;
        return (int)((x * 0x0101010101010101ULL) >> 56);
    #endif
    }
    """
    int swactlab_popcount64(unsigned long long x) nogil


def count_toggles(op, in0, in1, in2, out_wire, input_wires, stim, int n_wires):
    """Return int64 per-wire toggle counts over consecutive cycles.

    Cycle 0 establishes the initial state and contributes no toggles.
    """
    cdef const int[:] _op = np.ascontiguousarray(op, dtype=np.int32)
    cdef const int[:] _in0 = np.ascontiguousarray(in0, dtype=np.int32)
    cdef const int[:] _in1 = np.ascontiguousarray(in1, dtype=np.int32)
    cdef const int[:] _in2 = np.ascontiguousarray(in2, dtype=np.int32)
    cdef const int[:] _out = np.ascontiguousarray(out_wire, dtype=np.int32)
    cdef const int[:] _inw = np.ascontiguousarray(input_wires, dtype=np.int32)

    cdef Py_ssize_t cycles = stim.shape[0]
    cdef Py_ssize_t n_in = stim.shape[1]
    cdef Py_ssize_t n_cells = _op.shape[0]

    # pack the stimulus: one uint64 stream of 64 cycles per word per input
    cdef Py_ssize_t pad = (64 - (cycles % 64)) % 64
    padded = np.zeros((cycles + pad, n_in), dtype=np.uint8)
    padded[:cycles] = stim
    packed = np.packbits(padded, axis=0, bitorder="little")      # (bytes, n_in)
    words_np = np.ascontiguousarray(packed.T).view(np.uint64)    # (n_in, n_words)
    cdef const unsigned long long[:, :] w_in = words_np
    cdef Py_ssize_t n_words = words_np.shape[1]

    state_np = np.zeros(n_wires, dtype=np.uint64)
    carry_np = np.zeros(n_wires, dtype=np.uint64)
    toggles_np = np.zeros(n_wires, dtype=np.int64)
    cdef unsigned long long[:] st = state_np
    cdef unsigned long long[:] carry = carry_np
    cdef long long[:] tg = toggles_np

    cdef Py_ssize_t wi, i, c, w
    cdef int o
    cdef unsigned long long a, b, s, v, x, diff, valid
    cdef unsigned long long FULL = <unsigned long long>0xFFFFFFFFFFFFFFFFULL
    cdef Py_ssize_t rem

    with nogil:
        for wi in range(n_words):
            for i in range(n_in):
                st[_inw[i]] = w_in[i, wi]
            for c in range(n_cells):
                o = _op[c]
                a = st[_in0[c]]
                b = st[_in1[c]]
                if o == 4:      # AND2
                    v = a & b
                elif o == 5:    # NAND2
                    v = ~(a & b)
                elif o == 6:    # OR2
                    v = a | b
                elif o == 7:    # NOR2
                    v = ~(a | b)
                elif o == 8:    # XOR2
                    v = a ^ b
                elif o == 9:    # XNOR2
                    v = ~(a ^ b)
                elif o == 3:    # NOT
                    v = ~a
                elif o == 10:   # MUX2: out = sel ? b : a
                    s = st[_in2[c]]
                    v = (s & b) | (~s & a)
                elif o == 11:   # MAJ3
                    s = st[_in2[c]]
                    v = (a & b) | (a & s) | (b & s)
                elif o == 2:    # BUF
                    v = a
                elif o == 1:    # CONST1
                    v = FULL
                else:           # CONST0
                    v = 0
                st[_out[c]] = v
            rem = cycles - wi * 64
            if rem >= 64:
                valid = FULL
            else:
                valid = (<unsigned long long>1 << rem) - 1
            if wi == 0:
                valid &= ~(<unsigned long long>1)
            for w in range(n_wires):
                x = st[w]
                diff = (x ^ ((x << 1) | carry[w])) & valid
                tg[w] += swactlab_popcount64(diff)
                carry[w] = x >> 63
    return toggles_np
