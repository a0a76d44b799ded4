"""Command line entry point: generate, train, evaluate, classify, compare."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import modelfile
from .data import (
    DEFAULT_OBJECTS,
    SessionConfig,
    StreamError,
    adc_to_volts,
    read_csv,
    read_stream,
    simulate_session,
    write_phases_csv,
)
from .evaluation import DEFAULT_EPSILON, DEFAULT_SEGMENTS, EvalConfig, rmse
from .fis import DEFAULT_ETA, Combinator
from .pipeline import TrainConfig, evaluate, is_degenerate, run_experiment, split_train_test, train

DEFAULT_WINDOW = 25


def _labels(text: str) -> tuple[str, ...]:
    labels = tuple(x.strip() for x in text.split(",") if x.strip())
    if not labels:
        raise argparse.ArgumentTypeError("at least one object label is required")
    return labels


def cmd_generate(args) -> int:
    config = SessionConfig(
        objects=args.objects, exposure_duration=args.samples_per_object, seed=args.seed
    )
    phases = simulate_session(config)
    write_phases_csv(phases, args.out)
    print(f"wrote {args.out}: {len(config.objects)} objects x {args.samples_per_object} samples")
    return 0


def cmd_train(args) -> int:
    config = TrainConfig(
        eta=args.eta,
        epochs=args.epochs,
        seed=args.seed,
        m=args.rules,
        combinator=Combinator(args.combinator),
        shuffle=args.shuffle,
    )
    dataset = read_csv(args.data)
    train_set, _ = split_train_test(dataset)
    result = train(train_set, config)
    modelfile.save(args.model_out, result.model, dataset.labels, config)
    print("epoch,training_rmse")
    for epoch, value in enumerate(result.rmse_trace):
        print(f"{epoch},{value:.6f}")
    print(f"wrote {args.model_out}: m={config.m} combinator={config.combinator.value}")
    return 0


def cmd_evaluate(args) -> int:
    mf = modelfile.load(args.model)
    dataset = read_csv(args.data, labels=mf.labels)
    if dataset.labels != mf.labels:
        raise ValueError(f"data objects {dataset.labels} do not match model labels {mf.labels}")
    _, test_set = split_train_test(dataset)
    cm, mean = evaluate(mf.model, test_set, EvalConfig(args.epsilon, args.segments))
    print(cm.render())
    if is_degenerate(mean):
        print("warning: degenerate result, some objects are indistinguishable", file=sys.stderr)
    if args.report_out:
        Path(args.report_out).write_text(cm.to_csv())
    return 0


def _classify_window(model, labels, window) -> tuple[str, float]:
    targets = np.eye(model.L)
    errors = [rmse(model, window, t) for t in targets]
    best = int(np.argmin(errors))
    return labels[best], errors[best]


def cmd_classify(args) -> int:
    mf = modelfile.load(args.model)
    source = open(args.input) if args.input != "-" else sys.stdin
    window: list[np.ndarray] = []
    count = 0
    index = 0

    def emit():
        nonlocal index
        index += 1
        label, err = _classify_window(mf.model, mf.labels, np.array(window))
        print(f"window {index}: samples={len(window)} label={label} rmse={err:.4f}", flush=True)
        window.clear()

    try:
        for item in read_stream(source, mf.model.n):
            if isinstance(item, StreamError):
                print(f"warning: line {item.line_number}: {item.message}: {item.line!r}", file=sys.stderr)
                continue
            window.append(adc_to_volts(item))
            count += 1
            if len(window) == args.window:
                emit()
    finally:
        if source is not sys.stdin:
            source.close()
    if count == 0:
        raise ValueError("no samples")
    if window:
        emit()
    return 0


def cmd_compare(args) -> int:
    dataset = read_csv(args.data)
    eval_config = EvalConfig(args.epsilon, args.segments)
    runs = []
    for tag in ("a", "b"):
        config = TrainConfig(
            eta=getattr(args, f"eta_{tag}"),
            epochs=getattr(args, f"epochs_{tag}"),
            seed=getattr(args, f"seed_{tag}"),
            m=getattr(args, f"rules_{tag}"),
            combinator=Combinator(getattr(args, f"combinator_{tag}")),
        )
        runs.append(run_experiment(dataset, config, eval_config))
    a, b = runs
    rows_a, rows_b = a.summary_rows(), b.summary_rows()
    width = max(len(k) for k, _ in rows_a) + 2
    print("".join(["".ljust(width), "A".rjust(12), "B".rjust(12)]))
    for (key, va), (_, vb) in zip(rows_a, rows_b):
        print(key.ljust(width) + va.rjust(12) + vb.rjust(12))
    for tag, run in (("A", a), ("B", b)):
        print(f"\nconfig {tag}")
        print(run.report())
    if a.train_config.seed != b.train_config.seed:
        print(f"\nnote: seeds differ (A={a.train_config.seed}, B={b.train_config.seed})")
    smaller, larger = sorted((a.train_config.m, b.train_config.m))
    if smaller != larger:
        print(f"note: rule counts {smaller} vs {larger}, ratio {smaller / larger:.2f}")
    if args.report_out:
        with open(args.report_out, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["key", "a", "b"])
            writer.writerows((k, va, vb) for (k, va), (_, vb) in zip(rows_a, rows_b))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="enose-fis", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic acquisition session CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--samples-per-object", type=int, default=800)
    p.add_argument("--objects", type=_labels, default=DEFAULT_OBJECTS, help="comma-separated labels")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="train a model on the first half of each object's data")
    p.add_argument("--data", required=True)
    p.add_argument("--rules", type=int, default=10)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--combinator", choices=[c.value for c in Combinator], default="sum")
    p.add_argument("--shuffle", action="store_true", help="shuffle samples instead of object blocks")
    p.add_argument("--model-out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="segment examination on the second half of the data")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--segments", type=int, default=DEFAULT_SEGMENTS)
    p.add_argument("--report-out", help="confusion matrix CSV destination")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("classify", help="label windows of a live ADC line stream")
    p.add_argument("--model", required=True)
    p.add_argument("--input", default="-", help="line source, '-' for stdin")
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compare", help="run two configurations side by side")
    p.add_argument("--data", required=True)
    for tag, rules, comb in (("a", 10, "sum"), ("b", 20, "product")):
        p.add_argument(f"--rules-{tag}", type=int, default=rules)
        p.add_argument(f"--combinator-{tag}", choices=[c.value for c in Combinator], default=comb)
        p.add_argument(f"--eta-{tag}", type=float, default=DEFAULT_ETA)
        p.add_argument(f"--epochs-{tag}", type=int, default=10)
        p.add_argument(f"--seed-{tag}", type=int, default=1)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--segments", type=int, default=DEFAULT_SEGMENTS)
    p.add_argument("--report-out", help="side-by-side summary CSV destination")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "window", 1) < 1:
        print("error: --window must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
