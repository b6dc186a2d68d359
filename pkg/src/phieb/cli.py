"""Command line entry point: ``phieb run|sweep|oracle``.

Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 runtime
invariant breach.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .harness import ConfigError, ExperimentConfig, InvariantBreach, beta_sweep, run_experiment
from .oracles import counts_from_history, oracle_density, oracle_kt, oracle_tabular_counts

EXIT_IO, EXIT_CONFIG, EXIT_INVARIANT = 1, 2, 3

# flag -> config field
OVERRIDES = {
    "env": "env",
    "agent": "architecture",
    "beta": "beta",
    "variant": "variant",
    "selection": "selection",
    "frames": "frames",
    "episodes": "episodes",
    "trials": "trials",
    "seed": "seed",
    "out": "out",
    "workers": "workers",
    "eval_episodes": "eval_episodes",
}


def _bits(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x != ""]


def _rows(text: str) -> list[list[int]]:
    return [_bits(row) for row in text.split(";") if row.strip()]


def _load_config(args) -> ExperimentConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON ({exc})") from exc
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{args.config}: config must be a JSON object")
    for flag, name in OVERRIDES.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[name] = value
    return ExperimentConfig.from_dict(data)


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file mirroring ExperimentConfig")
    p.add_argument("--env")
    p.add_argument("--agent", choices=["split", "combined", "baseline"])
    p.add_argument("--beta", type=float)
    p.add_argument("--variant", choices=["exact", "ratio"])
    p.add_argument("--selection", choices=["egreedy", "boltzmann"])
    p.add_argument("--frames", type=int)
    p.add_argument("--episodes", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.add_argument("--eval-episodes", dest="eval_episodes", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phieb", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train and evaluate one configuration")
    _add_experiment_flags(run)

    sweep = sub.add_parser("sweep", help="run one experiment per beta")
    _add_experiment_flags(sweep)
    sweep.add_argument("--betas", required=True, help="comma-separated list, e.g. 0.01,0.05,0.1")

    oracle = sub.add_parser("oracle", help="brute-force reference computations")
    osub = oracle.add_subparsers(dest="oracle", required=True)
    kt = osub.add_parser("kt", help="KT probability per feature from 0/1 histories")
    kt.add_argument("--history", required=True, help="one bit list per feature, ';'-separated")
    dens = osub.add_parser("density", help="direct-product density of a dense 0/1 query")
    dens.add_argument("--history", required=True, help="observed 0/1 vectors, ';'-separated")
    dens.add_argument("--query", required=True, help="0/1 vector to score")
    counts = osub.add_parser("counts", help="visit counts along a state trajectory")
    counts.add_argument("--trajectory", required=True, help="comma-separated state ids")
    return parser


def _run_oracle(args) -> dict:
    if args.oracle == "kt":
        return {str(k): v for k, v in oracle_kt(_rows(args.history)).items()}
    if args.oracle == "density":
        history = _rows(args.history)
        query = _bits(args.query)
        width = max([len(query)] + [len(h) for h in history])
        vectors = [[i for i, b in enumerate(h) if b] for h in history]
        counts, t = counts_from_history(vectors)
        for i in range(width):
            counts.setdefault(i, 0)
        return {"t": t, "density": oracle_density(counts, t, [i for i, b in enumerate(query) if b])}
    counts = oracle_tabular_counts(_bits(args.trajectory))
    return {str(k): v for k, v in sorted(counts.items())}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "oracle":
            print(json.dumps(_run_oracle(args)))
            return 0
        cfg = _load_config(args)
        if args.command == "run":
            summary = run_experiment(cfg)
            print(json.dumps(summary.to_dict(), indent=2))
        else:
            betas = [float(b) for b in args.betas.split(",") if b.strip()]
            rows = beta_sweep(cfg, betas)
            print(json.dumps([r.__dict__ for r in rows], indent=2))
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvariantBreach as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
