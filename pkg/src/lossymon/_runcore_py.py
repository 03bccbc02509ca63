"""Pure-Python fallback for the compiled stepping loop in _runcore.pyx.

Accepts the transition table as a list of row lists (faster than indexing a
numpy array from Python).
"""


def run_dfa(delta, initial, reject, symbols):
    state = initial
    first = 0 if state == reject else -1
    for i, sym in enumerate(symbols):
        state = delta[state][sym]
        if first < 0 and state == reject:
            first = i + 1
    return state, first
