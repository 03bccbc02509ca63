"""Loss injection: apply a concrete filter to an event stream.

The stochastic dropped-count injector follows a two-parameter protocol:
``rho`` is the per-event probability of disabling monitoring and ``eta`` the
mean length of the skipped window.  A skip of m events emits one
``m mod bound_n`` symbol (when nonzero) followed by ``m // bound_n`` copies
of the ``bound_n`` symbol; skips are clamped to the remaining trace so count
symbols always denote real segments.

Reproducibility: draws come from a named 64-bit generator (PCG64) seeded by
a keyed hash, one substream per trace, so results are bit-identical across
platforms and independent of scheduling.
"""

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError
from .oracle import segment_member


@dataclass
class LossConfig:
    rho: float
    eta: float
    bound_n: int = 5
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must be in [0, 1]")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.bound_n < 1:
            raise ValueError("bound_n must be at least 1")


@dataclass
class InjectionResult:
    lossy: tuple
    kept: int  # symbols passed through verbatim (excluding the creation prefix)
    skipped: int  # symbols covered by count symbols
    emitted: int  # count symbols emitted
    boundaries: tuple  # original-trace position after each lossy symbol


def substream(seed, *parts):
    """Deterministic per-trace generator: PCG64 seeded by a keyed hash of
    (seed, parts)."""
    h = hashlib.blake2b(digest_size=8)
    h.update(repr((seed,) + parts).encode())
    return np.random.Generator(np.random.PCG64(int.from_bytes(h.digest(), "big")))


def inject_dropped_count(trace, creation_prefix_len, cfg, rng=None):
    """Filter one trace under the dropped-count protocol.

    The first ``creation_prefix_len`` (0 or 1) events are replicated
    verbatim.  After that, each round draws disable ~ bernoulli(rho); on
    disable, a window length is drawn as ceil of an exponential with mean
    eta (inverse-CDF on one uniform) and that many events are skipped.
    ``rng`` needs only a ``random()`` method; defaults to the substream for
    cfg.seed.
    """
    if creation_prefix_len not in (0, 1):
        raise ValueError("creation_prefix_len must be 0 or 1")
    trace = tuple(trace)
    if creation_prefix_len > len(trace):
        raise ValueError("creation prefix longer than the trace")
    if rng is None:
        rng = substream(cfg.seed)

    out = []
    boundaries = []
    kept = 0
    skipped = 0
    emitted = 0
    i = 0
    for _ in range(creation_prefix_len):
        out.append(trace[i])
        i += 1
        boundaries.append(i)
    while i < len(trace):
        if rng.random() < cfg.rho:
            u = rng.random()
            m = math.ceil(-cfg.eta * math.log(1.0 - u))
            m = min(m, len(trace) - i)
            r = m % cfg.bound_n
            if r:
                out.append(str(r))
                i += r
                boundaries.append(i)
                emitted += 1
            for _ in range(m // cfg.bound_n):
                out.append(str(cfg.bound_n))
                i += cfg.bound_n
                boundaries.append(i)
                emitted += 1
            skipped += m
        else:
            out.append(trace[i])
            i += 1
            boundaries.append(i)
            kept += 1
    return InjectionResult(
        lossy=tuple(out),
        kept=kept,
        skipped=skipped,
        emitted=emitted,
        boundaries=tuple(boundaries),
    )


def apply_filter(model, trace, segmentation):
    """Apply one concrete filter: ``segmentation`` is a list of
    (segment_length, replacement_symbol) pairs partitioning the trace; each
    segment must belong to the inverse language of its replacement."""
    trace = tuple(trace)
    out = []
    i = 0
    for length, symbol in segmentation:
        segment = trace[i : i + length]
        if len(segment) != length:
            raise ModelError("segmentation does not partition the trace")
        if not segment_member(model, segment, symbol):
            raise ModelError(
                f"segment {''.join(segment)!r} is not a completion of {symbol!r}"
            )
        out.append(symbol)
        i += length
    if i != len(trace):
        raise ModelError("segmentation does not partition the trace")
    return tuple(out)
