"""Benchmark the compiled stepping kernel against the pure-Python fallback.

Usage: python benchmarks/bench_kernel.py [--events N] [--traces N]
"""

import argparse
import time

from lossymon import _runcore_py, kernel
from lossymon.injector import substream
from lossymon.lossmodel import dropped_count
from lossymon.specio import safe_iter_dfa
from lossymon.synthesis import synthesize_optimal

try:
    from lossymon import _runcore
except ImportError:
    _runcore = None


def bench(fn, table, initial, reject, traces, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for trace in traces:
            fn(table, initial, reject, trace)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--events", type=int, default=1000, help="events per trace")
    parser.add_argument("--traces", type=int, default=200, help="number of traces")
    args = parser.parse_args()

    monitor = synthesize_optimal(safe_iter_dfa(), dropped_count(("c", "n", "u"), 5))
    dfa = monitor.dfa
    n_symbols = len(dfa.alphabet)
    rng = substream(1234, "bench")
    traces = [
        bytes(int(rng.random() * n_symbols) for _ in range(args.events))
        for _ in range(args.traces)
    ]
    total = args.events * args.traces
    reject = -1 if dfa.error is None else dfa.error

    py_table = [list(row) for row in dfa.delta]
    py_time = bench(_runcore_py.run_dfa, py_table, dfa.initial, reject, traces)
    print(f"pure python : {py_time:.4f}s  ({total / py_time / 1e6:.1f} M events/s)")

    if _runcore is None:
        print("compiled    : not built (pip install -e . --no-build-isolation)")
        return

    import numpy as np

    c_table = np.ascontiguousarray(np.array(dfa.delta, dtype=np.int32))
    c_time = bench(_runcore.run_dfa, c_table, dfa.initial, reject, traces)
    print(f"compiled    : {c_time:.4f}s  ({total / c_time / 1e6:.1f} M events/s)")
    print(f"speedup     : {py_time / c_time:.1f}x")
    print(f"active backend at import: {kernel.BACKEND}")

    # sanity: identical results on every trace
    for trace in traces[:20]:
        assert tuple(_runcore.run_dfa(c_table, dfa.initial, reject, trace)) == tuple(
            _runcore_py.run_dfa(py_table, dfa.initial, reject, trace)
        )


if __name__ == "__main__":
    main()
