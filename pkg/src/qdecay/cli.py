"""Command-line entry point."""

from __future__ import annotations

import argparse
import sys

from .experiment import (
    DEFAULT_SEED,
    ExperimentConfig,
    result_to_csv,
    result_to_json,
    run_collective,
    run_single,
    run_verify,
    write_output,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdecay",
        description="Simulate amplitude damping of one or two qubits with "
        "gate-level circuits and compare against the master equation.",
    )
    parser.add_argument(
        "--experiment",
        required=True,
        choices=["single", "collective", "verify"],
        help="which run to perform",
    )
    parser.add_argument("--initial", type=int, help="initial condition 1..6 (collective only)")
    parser.add_argument("--gamma", type=float, default=1.0, help="decay rate (default 1)")
    parser.add_argument("--shots", type=int, help="shots per round (defaults per experiment)")
    parser.add_argument("--ave", type=int, help="averaging rounds (defaults per experiment)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master RNG seed")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default="csv", help="output format")
    parser.add_argument(
        "--exact",
        action="store_true",
        help="use exact outcome probabilities instead of sampling",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.experiment == "verify":
        report = run_verify()
        for line in report.lines():
            print(line)
        return 0 if report.ok else 1

    try:
        config = ExperimentConfig(
            experiment=args.experiment,
            initial=args.initial,
            gamma=args.gamma,
            n_shots=args.shots,
            n_ave=args.ave,
            seed=args.seed,
            out=args.out,
            format=args.format,
            exact=args.exact,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    result = run_single(config) if config.experiment == "single" else run_collective(config)
    text = result_to_csv(result) if config.format == "csv" else result_to_json(result)
    write_output(text, config.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
