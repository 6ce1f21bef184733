"""Command-line benchmark harness.

Subcommands: run, sweep-noise, sweep-train, sweep-density.  A plain
key=value config file can supply defaults for any flag (dest names, e.g.
train_frac=0.05); explicit flags win.  Paths in snap: sources resolve
against $BENCH_DATA_DIR when set.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import bench
from .bench import ExperimentSpec, SnapSource, SynthSource


def _parse_source(text: str) -> SnapSource | SynthSource:
    kind, _, rest = text.partition(":")
    if kind == "snap" and rest:
        root = os.environ.get("BENCH_DATA_DIR")
        path = rest if os.path.isabs(rest) or not root else os.path.join(root, rest)
        return SnapSource(path=path, name=os.path.basename(rest))
    if kind == "synth" and rest:
        try:
            n_text, p_text = rest.split(",")
            return SynthSource(n=int(n_text), p=float(p_text))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(
        f"bad source {text!r}: expected snap:PATH or synth:N,P"
    )


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}")


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"config line without '=': {line!r}")
            values[key.strip()] = value.strip()
    return values


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    parser.add_argument("--source", type=_parse_source, help="snap:PATH or synth:N,P")
    parser.add_argument("--algo", choices=bench.ALGORITHMS, default="ldfs")
    parser.add_argument("--train-frac", type=float, default=0.05)
    parser.add_argument("--test-frac", type=float, default=0.5)
    parser.add_argument("--noise-c", type=float, default=0.0)
    parser.add_argument("--trials", type=int, default=None,
                        help="default 1, or 5 for dfs2 (permutation resampling)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="CSV output path")
    parser.add_argument("--dagify-seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Benchmark incremental topological ordering structures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="single experiment cell")
    _add_common(run)

    noise = sub.add_parser("sweep-noise", help="sweep the noise multiplier")
    _add_common(noise)
    noise.add_argument("--c-values", type=_float_list, default=[0.0, 0.5, 1.0, 2.0, 4.0])
    noise.add_argument("--regenerations", type=int, default=10)
    noise.add_argument("--summary-out", help="CSV path for per-C mean/SD summary")

    train = sub.add_parser("sweep-train", help="sweep the training fraction")
    _add_common(train)
    train.add_argument("--fractions", type=_float_list, default=[0.0, 0.01, 0.05, 0.25, 0.5])

    density = sub.add_parser("sweep-density", help="synthetic density study")
    _add_common(density)
    density.add_argument("--n", type=int, default=300)
    density.add_argument("--p-values", type=_float_list, default=[0.01, 0.1, 0.5, 1.0])
    density.add_argument("--seeds", type=int, default=3)
    density.add_argument("--algos", default="ldfs,dfs1,dfs2")

    return parser


def _apply_config(args: argparse.Namespace, argv: list[str]) -> None:
    if not args.config:
        return
    overrides = _load_config(args.config)
    given = {
        arg.lstrip("-").replace("-", "_").split("=")[0]
        for arg in argv
        if arg.startswith("--")
    }
    for key, raw in overrides.items():
        if key in given or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if key == "source":
            setattr(args, key, _parse_source(raw))
        elif isinstance(current, bool):
            setattr(args, key, raw.lower() in ("1", "true", "yes"))
        elif isinstance(current, int):
            setattr(args, key, int(raw))
        elif isinstance(current, float):
            setattr(args, key, float(raw))
        elif isinstance(current, list):
            setattr(args, key, _float_list(raw))
        else:
            setattr(args, key, raw)


def _spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    if args.source is None:
        raise SystemExit("error: --source is required (flag or config file)")
    source = args.source
    if isinstance(source, SnapSource) and args.dagify_seed:
        source = SnapSource(source.path, args.dagify_seed, source.name)
    trials = args.trials
    if trials is None:
        trials = 5 if args.algo == "dfs2" else 1
    return ExperimentSpec(
        source=source,
        algo=args.algo,
        train_frac=args.train_frac,
        test_frac=args.test_frac,
        noise_c=args.noise_c,
        trials=trials,
        rng_seed=args.seed,
        output_path=args.out,
    )


def _print_rows(rows) -> None:
    for row in rows:
        print(
            f"{row.dataset} {row.algo} trial={row.trial} "
            f"cost={row.cost_total} wall={row.wall_time_s:.3f}s"
        )


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, argv)

    if args.command == "run":
        rows = bench.run_experiment(_spec_from_args(args))
        _print_rows(rows)
    elif args.command == "sweep-noise":
        rows, summaries = bench.run_noise_sweep(
            _spec_from_args(args), args.c_values, args.regenerations
        )
        _print_rows(rows)
        for s in summaries:
            print(f"C={s.noise_c}: mean={s.mean_cost_total:.6g} sd={s.sd_cost_total:.6g}")
        if args.summary_out:
            with open(args.summary_out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("dataset,algo,train_frac,noise_c,regenerations,"
                         "mean_cost_total,sd_cost_total\n")
                for s in summaries:
                    fh.write(
                        f"{s.dataset},{s.algo},{s.train_frac:.6g},{s.noise_c:.6g},"
                        f"{s.regenerations},{s.mean_cost_total:.6g},{s.sd_cost_total:.6g}\n"
                    )
    elif args.command == "sweep-train":
        rows = bench.run_training_sweep(_spec_from_args(args), args.fractions)
        _print_rows(rows)
    else:  # sweep-density
        rows = bench.run_density_sweep(
            n=args.n,
            p_values=args.p_values,
            train_frac=args.train_frac,
            test_frac=args.test_frac,
            algos=[a for a in args.algos.split(",") if a],
            seeds=list(range(args.seeds)),
            rng_seed=args.seed,
            output_path=args.out,
        )
        _print_rows(rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
