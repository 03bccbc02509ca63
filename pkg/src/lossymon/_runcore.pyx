# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled inner loop: step a DFA transition table over an encoded trace.

Mirrors lossymon._runcore_py; selected at import by lossymon.kernel.
"""


def run_dfa(const int[:, ::1] delta, int initial, int reject,
            const unsigned char[:] symbols):
    """Run the table from ``initial`` over ``symbols`` (one byte per symbol
    id).  Returns (final_state, first_reject_index) where the index is the
    1-based count of symbols consumed when ``reject`` was first entered, or
    -1 if it never was.  ``reject`` may be -1 (no rejecting state).
    """
    cdef int state = initial
    cdef Py_ssize_t i, n = symbols.shape[0]
    cdef Py_ssize_t first = -1
    if state == reject:
        first = 0
    for i in range(n):
        state = delta[state, symbols[i]]
        if first < 0 and state == reject:
            first = i + 1
    return state, first
