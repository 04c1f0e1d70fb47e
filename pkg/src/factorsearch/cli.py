"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 capacity error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .algorithms import (
    NOISE_MODEL_DESCRIPTION,
    NoiseModel,
    assembly,
    factorized_search,
    factorized_search_with_noise,
    grover_iteration_count,
    grover_success_probability,
    grover_search,
)
from .classical import (
    SortedDatabase,
    UnsortedDatabase,
    classical_assembly,
    expected_unsorted_queries,
    sorted_search,
    unsorted_scan,
)
from .errors import CapacityError, FactorSearchError, InvalidArgumentError
from .experiments import (
    ExperimentConfig,
    noise_sweep,
    resolve_target,
    run_comparison,
    sweep_grover,
    trial_rng,
)
from .oracles import QueryCounter
from .report import RENDERERS, OutputRecord
from .statevec import ALPHABET, DEFAULT_MAX_LETTERS, HARD_MAX_LETTERS, LabelString, check_capacity

AMPLITUDE_DUMP_MAX_N = 6
SWEEP_MAX_N = 6
DEFAULT_NOISE_LEVELS = "0,0.1,0.2,0.5"
QUERY_CONVENTION = (
    "only oracle calls count as queries; diffusion, Hadamard, projection and measurement "
    "are free; the unsorted scan counts the matching inspection; the noisy search spends "
    "one classical query per measured letter to verify it"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", help="letter count; `compare` also takes a range like 1..8")
    p.add_argument("--target", default="random", help="base-4 digit string or 'random'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-p", dest="noise_p", help="noise probability (comma list for noise-sweep)")
    p.add_argument("--order", default="default", help="comma list, 'default' or 'random'")
    p.add_argument("--trials", type=int)
    p.add_argument("--format", dest="fmt", choices=sorted(RENDERERS), default="text")
    p.add_argument("--max-n", dest="max_n", type=int, default=DEFAULT_MAX_LETTERS)
    p.add_argument("--iterations", type=int, help="Grover iteration count (k_max for grover-sweep)")
    p.add_argument("--trace", action="store_true", help="emit per-step traces")
    p.add_argument("--no-timestamp", dest="no_timestamp", action="store_true")
    p.add_argument("--output", help="write to this path instead of stdout")
    return p


COMMANDS = {
    "grover": "Grover search with the global oracle",
    "factorized": "letter-by-letter factorized search",
    "noisy": "factorized search with oracle noise and restarts",
    "assembly": "quantum vs classical letter-by-letter assembly",
    "classical": "classical sorted, unsorted and assembly baselines",
    "compare": "query-count comparison table over a range of n",
    "grover-sweep": "target probability against Grover iteration count",
    "noise-sweep": "noisy search aggregates over noise levels",
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="factorsearch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    shared = _shared_flags()
    for name, help_text in COMMANDS.items():
        sub.add_parser(name, parents=[shared], help=help_text, description=help_text)
    return parser


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{what} must be an integer, got {text!r}") from None


def _parse_n_values(text: str | None, default: str) -> list[int]:
    text = default if text is None else text
    if ".." in text:
        lo, _, hi = text.partition("..")
        lo, hi = _parse_int(lo, "--n"), _parse_int(hi, "--n")
        if hi < lo:
            raise UsageError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [_parse_int(v, "--n") for v in text.split(",")]


def _parse_single_n(args, default: int) -> int:
    values = _parse_n_values(args.n, str(default))
    if len(values) != 1:
        raise UsageError(f"{args.command} takes a single --n, got {args.n!r}")
    return values[0]


def _parse_probs(text: str | None, default: str) -> list[float]:
    text = default if text is None else text
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--noise-p must be a number or comma list, got {text!r}") from None


def _parse_target(text: str, n: int, rng: np.random.Generator) -> LabelString:
    if text == "random":
        return resolve_target("random", n, rng)
    for ch in text:
        if ch not in "0123":
            raise UsageError(f"invalid character {ch!r} in --target {text!r}: expected base-4 digits 0-3")
    if len(text) != n:
        raise UsageError(f"--target {text!r} has {len(text)} letters but --n is {n}")
    return LabelString.parse(text)


def _parse_order(text: str, n: int, rng: np.random.Generator) -> list[int]:
    if text == "default":
        return list(range(1, n + 1))
    if text == "random":
        return [int(p) + 1 for p in rng.permutation(n)]
    order = [_parse_int(v, "--order") for v in text.split(",")]
    if sorted(order) != list(range(1, n + 1)):
        raise UsageError(f"--order {text!r} is not a permutation of 1..{n}")
    return order


def _steps(outcome, n: int) -> list[dict]:
    out = []
    for i, s in enumerate(outcome.steps, start=1):
        row = {"step": i, **s.to_dict()}
        if n <= AMPLITUDE_DUMP_MAX_N and s.amplitudes is not None:
            row["amplitudes"] = [[a.real, a.imag] for a in s.amplitudes]
        out.append(row)
    return out


def _search_payload(outcome, args, extra: dict, n: int) -> dict:
    row = {
        "target": str(outcome.target),
        "found": str(outcome.found),
        "success": outcome.success,
        **extra,
        **outcome.queries.to_dict(),
        "restarts": outcome.restarts,
    }
    results = dict(row)
    results["rows"] = [row]
    if args.trace:
        results["steps"] = _steps(outcome, n)
    return results


def cmd_grover(args):
    n = _parse_single_n(args, 2)
    rng = trial_rng(args.seed, 0)
    target = _parse_target(args.target, n, rng)
    check_capacity(n, args.max_n)
    k = args.iterations
    if k is not None and k < 0:
        raise UsageError("--iterations must be >= 0")
    outcome = grover_search(n, target, k, rng, max_n=args.max_n, keep_amplitudes=args.trace)
    k = outcome.queries.global_quantum
    extra = {
        "iterations": k,
        "target_probability": outcome.target_probability,
        "analytic_probability": grover_success_probability(ALPHABET**n, k),
    }
    return n, target, _search_payload(outcome, args, extra, n)


def cmd_factorized(args):
    n = _parse_single_n(args, 4)
    rng = trial_rng(args.seed, 0)
    target = _parse_target(args.target, n, rng)
    order = _parse_order(args.order, n, rng)
    check_capacity(n, args.max_n)
    outcome = factorized_search(n, target, order, max_n=args.max_n, keep_amplitudes=args.trace)
    extra = {"order": ",".join(map(str, order))}
    return n, target, _search_payload(outcome, args, extra, n)


def cmd_noisy(args):
    n = _parse_single_n(args, 4)
    rng = trial_rng(args.seed, 0)
    target = _parse_target(args.target, n, rng)
    order = _parse_order(args.order, n, rng)
    (p,) = _parse_probs(args.noise_p, "0")
    check_capacity(n, args.max_n)
    outcome = factorized_search_with_noise(
        n, target, NoiseModel(p), rng, order, max_n=args.max_n, keep_amplitudes=args.trace
    )
    extra = {"order": ",".join(map(str, order)), "noise_p": p}
    return n, target, _search_payload(outcome, args, extra, n)


def cmd_assembly(args):
    rng = trial_rng(args.seed, 0)
    if args.n is None and args.target != "random":
        n = len(args.target)
    else:
        n = _parse_single_n(args, 4)
    target = _parse_target(args.target, n, rng)
    outcome = assembly(target, keep_amplitudes=args.trace)
    classical = classical_assembly(target, QueryCounter())
    quantum = outcome.queries.letter_quantum
    extra = {
        "classical_assembly_queries": classical,
        "ratio_classical_over_quantum": classical / quantum,
        "max_register_size": max(s.register_size for s in outcome.steps),
    }
    return n, target, _search_payload(outcome, args, extra, 1)


def cmd_classical(args):
    n = _parse_single_n(args, 4)
    rng = trial_rng(args.seed, 0)
    target = _parse_target(args.target, n, rng)
    check_capacity(n, args.max_n)
    N = ALPHABET**n
    counter = QueryCounter()
    _, sorted_queries = sorted_search(SortedDatabase(2 * n), target.index, counter)
    trials = args.trials or 1
    scans = []
    for t in range(trials):
        db = UnsortedDatabase.shuffled(N, trial_rng(args.seed, t + 1))
        scans.append(unsorted_scan(db, target.index, QueryCounter())[1])
    row = {
        "target": str(target),
        "n": n,
        "N": N,
        "sorted_queries": sorted_queries,
        "unsorted_trials": trials,
        "unsorted_mean_queries": float(np.mean(scans)),
        "unsorted_expected": expected_unsorted_queries(N),
        "assembly_queries": classical_assembly(target, QueryCounter()),
    }
    return n, target, {**row, "rows": [row]}


def cmd_compare(args):
    n_values = _parse_n_values(args.n, "1..8")
    for n in n_values:
        check_capacity(n, args.max_n)
    rows = [r.to_dict() for r in run_comparison(n_values, args.seed, max_n=args.max_n)]
    ratios = {r["ratio_sorted_over_quantum"] for r in rows}
    return n_values, None, {"all_ratios_two": ratios == {2.0}, "rows": rows}


def cmd_grover_sweep(args):
    n = _parse_single_n(args, 2)
    rng = trial_rng(args.seed, 0)
    target = _parse_target(args.target, n, rng)
    check_capacity(n, min(args.max_n, SWEEP_MAX_N))
    k_max = args.iterations
    if k_max is None:
        k_max = 2 * grover_iteration_count(ALPHABET**n)
    points = sweep_grover(n, k_max, target, max_n=min(args.max_n, SWEEP_MAX_N))
    rows = [p.to_dict() for p in points]
    err = max(abs(p.measured - p.analytic) for p in points)
    return n, target, {"k_max": k_max, "max_abs_error": err, "rows": rows}


def cmd_noise_sweep(args):
    n = _parse_single_n(args, 4)
    p_values = _parse_probs(args.noise_p, DEFAULT_NOISE_LEVELS)
    trials = args.trials or 1000
    target = None
    if args.target != "random":
        target = _parse_target(args.target, n, trial_rng(args.seed, 0))
    check_capacity(n, args.max_n)
    rows = [a.to_dict() for a in noise_sweep(n, p_values, trials, args.seed, target, max_n=args.max_n)]
    return n, target, {"rows": rows}


HANDLERS = {
    "grover": cmd_grover,
    "factorized": cmd_factorized,
    "noisy": cmd_noisy,
    "assembly": cmd_assembly,
    "classical": cmd_classical,
    "compare": cmd_compare,
    "grover-sweep": cmd_grover_sweep,
    "noise-sweep": cmd_noise_sweep,
}


def _config(args) -> ExperimentConfig:
    if args.max_n > HARD_MAX_LETTERS:
        raise CapacityError(args.max_n, HARD_MAX_LETTERS)
    if args.trials is not None and args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    return ExperimentConfig(
        algorithm=args.command,
        target=args.target,
        seed=args.seed,
        order=args.order,
        trials=args.trials or 1,
        output=args.fmt,
        max_n=args.max_n,
        iterations=args.iterations,
        trace=args.trace,
    )


def run(args) -> OutputRecord:
    cfg = _config(args)
    n, target, results = HANDLERS[args.command](args)
    config = cfg.to_dict()
    config["n"] = n
    config["noise_p"] = args.noise_p
    if target is not None:
        config["resolved_target"] = str(target)
    noise = NOISE_MODEL_DESCRIPTION if args.command in ("noisy", "noise-sweep") else None
    metadata = {
        "seed": args.seed,
        "timestamp": None if args.no_timestamp else _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "capacity": {"max_n": args.max_n, "hard_max_n": HARD_MAX_LETTERS},
        "noise_model": noise,
        "query_convention": QUERY_CONVENTION,
        "version": __version__,
    }
    return OutputRecord(args.command, config, results, metadata)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        record = run(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"factorsearch: usage error: {exc}", file=sys.stderr)
        return 1
    except CapacityError as exc:
        print(f"factorsearch: capacity error: {exc}", file=sys.stderr)
        return 2
    except InvalidArgumentError as exc:
        print(f"factorsearch: usage error: {exc}", file=sys.stderr)
        return 1
    except FactorSearchError as exc:
        print(f"factorsearch: error: {exc}", file=sys.stderr)
        return 1
    text = RENDERERS[args.fmt](record)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
