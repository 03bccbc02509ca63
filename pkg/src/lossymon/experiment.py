"""Simulation harness: generate random traces per property, inject
dropped-count loss, run the primary monitor on the original stream and the
complete alternate monitor on the lossy stream, and aggregate detection
rates.

Determinism: every trace draws from its own substream keyed by
(seed, property, rho, eta, length, trace index), so outputs are
byte-identical for a fixed seed and independent of evaluation order.
"""

import csv
import io
import json
import os
from dataclasses import dataclass, field

from .errors import LossymonError
from .injector import LossConfig, inject_dropped_count, substream
from .lossmodel import dropped_count
from .runtime import Verdict, run
from .specio import BundledProperty, bundled, build_property, parse_spec
from .synthesis import synthesize_optimal

RESULT_COLUMNS = (
    "property",
    "rho",
    "eta",
    "length",
    "violating",
    "detected",
    "detection_pct",
    "events_kept_pct",
    "false_positives",
)

BUCKETS = ((5, 10), (10, 15), (15, 20))  # half-open [lo, hi)


@dataclass
class ExperimentConfig:
    properties: tuple
    rho_values: tuple = (0.1, 0.3)
    eta_values: tuple = (3.0, 6.0)
    lengths: tuple = tuple(range(3, 26))
    traces_per_length: int = 1000
    bound_n: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.traces_per_length < 1:
            raise ValueError("traces_per_length must be at least 1")
        if not self.lengths:
            raise ValueError("lengths must be non-empty")

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(
            properties=tuple(doc["properties"]),
            rho_values=tuple(doc.get("rho_values", (0.1, 0.3))),
            eta_values=tuple(doc.get("eta_values", (3.0, 6.0))),
            lengths=tuple(doc.get("lengths", range(3, 26))),
            traces_per_length=doc.get("traces_per_length", 1000),
            bound_n=doc.get("bound_n", 5),
            seed=doc.get("seed", 0),
        )


@dataclass
class CellStats:
    """Per-(property, rho, eta, length) tallies."""

    traces: int = 0
    violating: int = 0
    detected: int = 0
    false_positives: int = 0
    events_total: int = 0
    events_kept: int = 0  # verbatim symbols incl. replicated creation events

    def add(self, other):
        self.traces += other.traces
        self.violating += other.violating
        self.detected += other.detected
        self.false_positives += other.false_positives
        self.events_total += other.events_total
        self.events_kept += other.events_kept

    def detection_pct(self):
        return 100.0 * self.detected / self.violating if self.violating else 0.0

    def kept_pct(self):
        return 100.0 * self.events_kept / self.events_total if self.events_total else 0.0


def generate_trace(spec, length, rng):
    """Random trace: with creation events, the first symbol is a uniform
    creation event and the rest are uniform over the non-creation symbols;
    otherwise every symbol is uniform over the alphabet."""
    if length < 1:
        raise ValueError("length must be at least 1")
    events = tuple(spec.events)
    creation = tuple(spec.creation_events)
    if creation:
        rest = tuple(e for e in events if e not in creation)
        if not rest:
            raise LossymonError(
                "every event is a creation event; no symbols left for the body"
            )
        first = creation[int(rng.random() * len(creation))]
        body = tuple(rest[int(rng.random() * len(rest))] for _ in range(length - 1))
        return (first,) + body
    return tuple(events[int(rng.random() * len(events))] for _ in range(length))


def _resolve_property(entry):
    """Accept a BundledProperty, a 'bundled:<name>' string, or a path to a
    property spec JSON file."""
    if isinstance(entry, BundledProperty):
        return entry
    if isinstance(entry, str) and entry.startswith("bundled:"):
        return bundled(entry.split(":", 1)[1])
    if isinstance(entry, str):
        with open(entry) as fh:
            spec = parse_spec(fh.read())
        return BundledProperty(
            name=spec.name,
            dfa=build_property(spec),
            events=spec.events,
            creation_events=spec.creation_events,
            spec=spec,
        )
    raise LossymonError(f"cannot resolve property entry {entry!r}")


@dataclass
class ExperimentResult:
    per_length: dict  # (name, rho, eta, length) -> CellStats
    per_bucket: dict  # (name, rho, eta, bucket_label) -> CellStats

    def curves_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for (name, rho, eta, length), cell in sorted(self.per_length.items()):
            writer.writerow(_format_row(name, rho, eta, str(length), cell))
        return buf.getvalue()

    def results_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        items = sorted(
            self.per_bucket.items(),
            key=lambda kv: (kv[0][0], kv[0][1], kv[0][2], int(kv[0][3].split("-")[0])),
        )
        for (name, rho, eta, bucket), cell in items:
            writer.writerow(_format_row(name, rho, eta, bucket, cell))
        return buf.getvalue()

    def bucket(self, name, rho, eta, bucket_label):
        return self.per_bucket[(name, rho, eta, bucket_label)]


def _format_row(name, rho, eta, length, cell):
    return [
        name,
        f"{rho:g}",
        f"{eta:g}",
        length,
        cell.violating,
        cell.detected,
        f"{cell.detection_pct():.2f}",
        f"{cell.kept_pct():.2f}",
        cell.false_positives,
    ]


def run_experiment(cfg, out_dir=None):
    """Run the full simulation matrix and (optionally) write results.csv
    and curves.csv to ``out_dir``.  If a property fails mid-run, the rows
    collected so far are flushed alongside a FAILED marker before the error
    propagates."""
    properties = [_resolve_property(entry) for entry in cfg.properties]
    per_length = {}
    per_bucket = {}
    result = ExperimentResult(per_length=per_length, per_bucket=per_bucket)
    try:
        for prop in properties:
            monitor = synthesize_optimal(
                prop.dfa, dropped_count(prop.dfa.alphabet, cfg.bound_n)
            )
            for rho in cfg.rho_values:
                for eta in cfg.eta_values:
                    loss_cfg = LossConfig(
                        rho=rho, eta=eta, bound_n=cfg.bound_n, seed=cfg.seed
                    )
                    for length in cfg.lengths:
                        cell = _run_cell(prop, monitor, loss_cfg, length, cfg)
                        per_length[(prop.name, rho, eta, length)] = cell
                        for lo, hi in BUCKETS:
                            if lo <= length < hi:
                                key = (prop.name, rho, eta, f"{lo}-{hi}")
                                per_bucket.setdefault(key, CellStats()).add(cell)
    except Exception as exc:
        if out_dir is not None:
            _write_csvs(result, out_dir)
            with open(os.path.join(out_dir, "FAILED"), "w") as fh:
                fh.write(f"partial results; run aborted: {exc}\n")
        raise
    if out_dir is not None:
        _write_csvs(result, out_dir)
    return result


def _write_csvs(result, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "results.csv"), "w") as fh:
        fh.write(result.results_csv())
    with open(os.path.join(out_dir, "curves.csv"), "w") as fh:
        fh.write(result.curves_csv())


def _run_cell(prop, monitor, loss_cfg, length, cfg):
    cell = CellStats()
    creation_len = 1 if prop.creation_events else 0
    for index in range(cfg.traces_per_length):
        rng = substream(cfg.seed, prop.name, loss_cfg.rho, loss_cfg.eta, length, index)
        trace = generate_trace(prop, length, rng)
        primary = run(prop.dfa, trace)
        injection = inject_dropped_count(trace, creation_len, loss_cfg, rng)
        alternate = run(monitor, injection.lossy)
        violating = primary.verdict is Verdict.FALSE
        detected = alternate.verdict is Verdict.FALSE
        cell.traces += 1
        cell.events_total += len(trace)
        cell.events_kept += injection.kept + creation_len
        if violating:
            cell.violating += 1
            if detected:
                cell.detected += 1
        elif detected:
            cell.false_positives += 1
    return cell
