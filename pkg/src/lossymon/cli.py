"""Command-line front end.

Subcommands: synth, run, inject, verify, experiment, export-dot.
Domain errors exit with status 1; usage errors with status 2.
"""

import argparse
import json
import sys

from .automata import Dfa
from .errors import LossymonError
from .experiment import ExperimentConfig, run_experiment
from .injector import LossConfig, inject_dropped_count
from .lossmodel import (
    dropped_count,
    frequency_count,
    loss_model_from_json,
    lossless,
    silent_drop,
)
from .oracle import check_monitor_against_oracle
from .runtime import MonitorSession, run
from .specio import build_property, parse_spec
from .synthesis import AlternateMonitor, synthesize_optimal, synthesize_sound


def parse_loss(spec_text, sigma):
    """Parse a loss descriptor: 'dropped_count:2', 'silent_drop:n,u',
    'frequency_count:3', 'lossless', or a path to a loss-model JSON file."""
    if spec_text.endswith(".json"):
        with open(spec_text) as fh:
            return loss_model_from_json(json.load(fh), sigma)
    name, _, arg = spec_text.partition(":")
    if name == "dropped_count":
        return dropped_count(sigma, int(arg))
    if name == "silent_drop":
        delta = [s for s in arg.split(",") if s]
        return silent_drop(sigma, delta)
    if name == "frequency_count":
        return frequency_count(sigma, int(arg))
    if name == "merged_objects":
        count, _, events = arg.partition(":")
        parametric = [s for s in events.split(",") if s]
        return loss_model_from_json(
            {"type": "merged_objects", "objects": int(count), "parametric": parametric},
            sigma,
        )
    if name == "lossless":
        return lossless(sigma)
    raise LossymonError(f"unknown loss descriptor {spec_text!r}")


def _load_property(path):
    with open(path) as fh:
        doc = json.load(fh)
    if "regex" in doc:
        spec = parse_spec(doc)
        return spec.name, build_property(spec)
    return doc.get("name", path), Dfa.from_json(doc)


def _load_monitor(path):
    with open(path) as fh:
        return AlternateMonitor.from_json(json.load(fh))


def _read_symbols(path):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    return tuple(text.split())


def cmd_synth(args):
    name, prop = _load_property(args.property)
    model = parse_loss(args.loss, prop.alphabet)
    if args.mode == "sound":
        monitor = synthesize_sound(prop, model)
    else:
        monitor = synthesize_optimal(prop, model)
    doc = monitor.to_json()
    doc["source"] = f"{name} + {model.name}"
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_run(args):
    if args.monitor:
        target = _load_monitor(args.monitor)
    else:
        _name, target = _load_property(args.property)
    session = MonitorSession(target)
    print("step\tsymbol\tlabel\tverdict")
    label = ",".join(str(q) for q in session.label)
    print(f"0\t-\t{{{label}}}\t{session.verdict.value}")
    for i, symbol in enumerate(_read_symbols(args.trace), start=1):
        verdict = session.step(symbol)
        label = ",".join(str(q) for q in session.label)
        print(f"{i}\t{symbol}\t{{{label}}}\t{verdict.value}")
    return 0


def cmd_inject(args):
    trace = _read_symbols(args.trace)
    cfg = LossConfig(rho=args.rho, eta=args.eta, bound_n=args.bound_n, seed=args.seed)
    result = inject_dropped_count(trace, args.creation_prefix, cfg)
    print(" ".join(result.lossy))
    print(
        f"# kept={result.kept} skipped={result.skipped} emitted={result.emitted}",
        file=sys.stderr,
    )
    return 0


def cmd_verify(args):
    name, prop = _load_property(args.property)
    model = parse_loss(args.loss, prop.alphabet)
    status = 0
    modes = ("complete", "sound") if args.mode == "both" else (args.mode,)
    for mode in modes:
        if mode == "sound":
            monitor = synthesize_sound(prop, model)
        else:
            monitor = synthesize_optimal(prop, model)
        report = check_monitor_against_oracle(
            prop, model, monitor, args.max_len, property_name=name
        )
        print(f"[{mode}]")
        for line in report.lines():
            print(f"  {line}")
        if not report.ok:
            status = 1
    return status


def cmd_experiment(args):
    with open(args.config) as fh:
        cfg = ExperimentConfig.from_json(fh.read())
    run_experiment(cfg, out_dir=args.out)
    print(f"wrote {args.out}/results.csv and {args.out}/curves.csv")
    return 0


def cmd_export_dot(args):
    with open(getattr(args, "in")) as fh:
        doc = json.load(fh)
    if "regex" in doc:
        spec = parse_spec(doc)
        dfa = build_property(spec)
    else:
        dfa = Dfa.from_json(doc)
    lines = ["digraph automaton {", "  rankdir=LR;", '  start [shape=point];']
    for q in range(dfa.n_states):
        shape = "doublecircle" if q in dfa.accepting else "circle"
        suffix = ""
        if dfa.labels is not None:
            suffix = "\\n{" + ",".join(str(x) for x in dfa.labels[q]) + "}"
        lines.append(f'  q{q} [shape={shape},label="q{q}{suffix}"];')
    lines.append(f"  start -> q{dfa.initial};")
    for q in range(dfa.n_states):
        by_target = {}
        for symbol, t in zip(dfa.alphabet, dfa.delta[q]):
            by_target.setdefault(t, []).append(symbol)
        for t, symbols in sorted(by_target.items()):
            joined = ",".join(symbols)
            lines.append(f'  q{q} -> q{t} [label="{joined}"];')
    lines.append("}")
    text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lossymon",
        description="Monitor synthesis for lossy event streams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="build and serialize an alternate monitor")
    p.add_argument("--property", required=True, help="property JSON file")
    p.add_argument("--loss", required=True, help="loss descriptor or JSON file")
    p.add_argument("--mode", choices=("complete", "sound"), default="complete")
    p.add_argument("--out", help="output monitor JSON (default: stdout)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("run", help="step a monitor over a symbol stream")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--monitor", help="monitor JSON file")
    group.add_argument("--property", help="property JSON file (primary monitor)")
    p.add_argument("--trace", help="trace file of whitespace-separated symbols (default: stdin)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("inject", help="apply dropped-count loss to a trace")
    p.add_argument("--trace", help="trace file (default: stdin)")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--bound-n", type=int, default=5, dest="bound_n")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--creation-prefix", type=int, choices=(0, 1), default=0, dest="creation_prefix")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("verify", help="exhaustively check monitors against the oracle")
    p.add_argument("--property", required=True)
    p.add_argument("--loss", required=True)
    p.add_argument("--max-len", type=int, default=4, dest="max_len")
    p.add_argument("--mode", choices=("complete", "sound", "both"), default="both")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="run the simulation matrix")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("export-dot", help="emit a Graphviz description of an automaton")
    p.add_argument("--in", required=True, help="automaton or property JSON")
    p.add_argument("--out", help="output .dot file (default: stdout)")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LossymonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
