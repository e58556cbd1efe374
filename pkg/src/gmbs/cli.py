"""Command-line workbench.

Subcommands: eval (collect a word to normal form), gen (write a protocol
instance file), attack (break an instance, scoring against the ground
truth when present), run (batch trials with aggregate statistics), bench
(runtime scaling over entry bit sizes, CSV output).

Machine output is JSON or CSV; the human-readable table of `run` goes to
stdout and machine payloads go to --out files when given.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .attacks import (
    UNIQUE,
    aag_attack,
    kolee_attack_report,
    report_to_json,
)
from .errors import (
    DegeneratePublic,
    GmbsError,
    Inconsistent,
    MembershipViolation,
    NoExponentVector,
    NotAComplement,
    NotConjugate,
)
from .group import Group
from .protocols import (
    AAGInstance,
    aag_generate,
    assemble_aag,
    instance_to_json,
    kolee_generate,
    load_instance,
    trial_seed,
)
from .words import evaluate, parse, serialize

ATTACK_FAILURES = (
    NotConjugate,
    Inconsistent,
    DegeneratePublic,
    NoExponentVector,
    MembershipViolation,
    NotAComplement,
)


@dataclass
class BatchSummary:
    trials_total: int
    unique_count: int
    ambiguous_count: int
    key_match_count: int
    key_match_ambiguous_count: int
    mean_time_us: int
    max_time_us: int

    def to_json(self) -> dict:
        return {
            "trials_total": self.trials_total,
            "unique_count": self.unique_count,
            "ambiguous_count": self.ambiguous_count,
            "key_match_count": self.key_match_count,
            "key_match_ambiguous_count": self.key_match_ambiguous_count,
            "mean_time_us": self.mean_time_us,
            "max_time_us": self.max_time_us,
        }


def _parse_moduli(text: str) -> list[int]:
    parts = text.split(",")
    if not parts or any(not p.strip() for p in parts):
        raise ValueError(f"bad moduli list {text!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"bad moduli list {text!r}") from None


def _emit(out: str | None, payload: str) -> None:
    if out:
        Path(out).write_text(payload)
    else:
        sys.stdout.write(payload)


def cmd_eval(args: argparse.Namespace) -> int:
    group = Group(_parse_moduli(args.moduli))
    element = evaluate(group, parse(group, args.word))
    payload = {
        "element": group.element_to_json(element),
        "normal_form": serialize(group, element),
    }
    print(json.dumps(payload, indent=2))
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    group = Group(_parse_moduli(args.moduli))
    rng = random.Random(args.seed)
    if args.protocol == "aag":
        instance = aag_generate(group, args.n1, args.n2, args.l, args.m, args.len, rng)
    else:
        instance = kolee_generate(group, args.case, rng)
    _emit(args.out, json.dumps(instance_to_json(instance), indent=2) + "\n")
    return 0


def cmd_attack(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.instance).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"not a JSON instance file: {exc}") from None
    protocol, public, instance = load_instance(data)
    report = aag_attack(public) if protocol == "aag" else kolee_attack_report(public)
    if instance is not None:
        report.success = report.recovered_key == instance.shared_key
    _emit(args.out, json.dumps(report_to_json(public.group, report), indent=2) + "\n")
    return 1 if report.success is False else 0


def _run_one(group: Group, args: argparse.Namespace, index: int) -> tuple[bool, bool]:
    rng = random.Random(trial_seed(args.seed, index))
    if args.protocol == "aag":
        instance = aag_generate(group, args.n1, args.n2, args.l, args.m, args.len, rng)
        report = aag_attack(instance.public)
        unique = all(
            status == UNIQUE for status in report.statuses.values()
        )
    else:
        instance = kolee_generate(group, args.case, rng)
        report = kolee_attack_report(instance.public)
        unique = True
    return unique, report.recovered_key == instance.shared_key


def cmd_run(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be >= 1")
    if args.jobs < 1:
        raise ValueError("--jobs must be >= 1")
    group = Group(_parse_moduli(args.moduli))
    indices = range(args.trials)

    def timed(index: int) -> tuple[bool, bool, int]:
        start = time.perf_counter_ns()
        unique, match = _run_one(group, args, index)
        return unique, match, time.perf_counter_ns() - start

    if args.jobs == 1:
        results = [timed(i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(timed, indices))
    times_ns = [elapsed for _, _, elapsed in results]
    unique_count = sum(1 for unique, _, _ in results if unique)
    key_match_count = sum(1 for _, match, _ in results if match)
    key_match_ambiguous = sum(
        1 for unique, match, _ in results if match and not unique
    )
    summary = BatchSummary(
        trials_total=args.trials,
        unique_count=unique_count,
        ambiguous_count=args.trials - unique_count,
        key_match_count=key_match_count,
        key_match_ambiguous_count=key_match_ambiguous,
        mean_time_us=sum(times_ns) // len(times_ns) // 1000,
        max_time_us=max(times_ns) // 1000,
    )
    rows = [("protocol", args.protocol)] + list(summary.to_json().items())
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}")
    if args.out:
        _emit(args.out, json.dumps(summary.to_json(), indent=2) + "\n")
    return 0


# -- bench -------------------------------------------------------------------


def _bench_aag_instance(group: Group, rng: random.Random, bits: int) -> AAGInstance:
    num_bound = 2**bits
    while True:
        a_tuple = tuple(group.random_element(rng, 3, num_bound) for _ in range(5))
        b_tuple = tuple(group.random_element(rng, 3, num_bound) for _ in range(5))
        alice = tuple((rng.randrange(5), rng.choice((1, -1))) for _ in range(4))
        bob = tuple((rng.randrange(5), rng.choice((1, -1))) for _ in range(4))
        instance = assemble_aag(group, a_tuple, b_tuple, alice, bob)
        if not instance.alice_secret.is_identity() and not instance.bob_secret.is_identity():
            return instance


def run_bench(
    group: Group, sizes: list[int], trials: int, seed: int
) -> tuple[list[tuple[int, str, float, float]], dict[str, float]]:
    """Time both attacks across entry bit sizes.

    Returns rows (bit_size, protocol, mean_us, max_us) and the fitted
    log-log slope per protocol (empty when fewer than two sizes).
    """
    rows = []
    samples: dict[str, list[tuple[int, float]]] = {"aag": [], "kolee": []}
    counter = 0
    for bits in sizes:
        for protocol in ("aag", "kolee"):
            times_ns = []
            for _ in range(trials):
                rng = random.Random(trial_seed(seed, counter))
                counter += 1
                if protocol == "aag":
                    instance = _bench_aag_instance(group, rng, bits)
                    start = time.perf_counter_ns()
                    aag_attack(instance.public)
                else:
                    instance = kolee_generate(group, "conj", rng, num_bound=2**bits)
                    start = time.perf_counter_ns()
                    kolee_attack_report(instance.public)
                times_ns.append(time.perf_counter_ns() - start)
            mean_us = sum(times_ns) / len(times_ns) / 1000.0
            max_us = max(times_ns) / 1000.0
            rows.append((bits, protocol, mean_us, max_us))
            samples[protocol].append((bits, mean_us))
    slopes = {}
    if len(sizes) >= 2:
        for protocol, points in samples.items():
            slopes[protocol] = _loglog_slope(points)
    return rows, slopes


def _loglog_slope(points: list[tuple[int, float]]) -> float:
    """Least-squares slope of log(time) against log(bit size)."""
    xs = [math.log(bits) for bits, _ in points]
    ys = [math.log(max(us, 0.001)) for _, us in points]
    n = len(points)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    return sxy / sxx


def cmd_bench(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be >= 1")
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError(f"bad size list {args.sizes!r}")
    if sizes != sorted(set(sizes)):
        raise ValueError("sizes must be strictly ascending")
    group = Group(_parse_moduli(args.moduli))
    rows, slopes = run_bench(group, sizes, args.trials, args.seed)
    lines = ["bit_size,protocol,mean_time_us,max_time_us"]
    for bits, protocol, mean_us, max_us in rows:
        lines.append(f"{bits},{protocol},{mean_us:.3f},{max_us:.3f}")
    if slopes:
        fitted = " ".join(f"{p}={s:.3f}" for p, s in sorted(slopes.items()))
        lines.append(f"# loglog_slope {fitted}")
    _emit(args.out, "\n".join(lines) + "\n")
    return 0


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmbs",
        description="Key-exchange protocols over generalized metabelian "
        "Baumslag-Solitar groups, and the exact attacks that break them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="collect a word and print its normal form")
    p_eval.add_argument("--moduli", required=True, help="comma-separated moduli")
    p_eval.add_argument("--word", required=True, help="word in q1..qn, b")
    p_eval.set_defaults(func=cmd_eval)

    p_gen = sub.add_parser("gen", help="generate a protocol instance file")
    p_gen.add_argument("protocol", choices=("aag", "kolee"))
    p_gen.add_argument("--moduli", required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None)
    p_gen.add_argument("--n1", type=int, default=5)
    p_gen.add_argument("--n2", type=int, default=5)
    p_gen.add_argument("--l", type=int, default=4)
    p_gen.add_argument("--m", type=int, default=4)
    p_gen.add_argument("--len", type=int, default=8)
    p_gen.add_argument("--case", choices=("m", "n", "conj"), default="m")
    p_gen.set_defaults(func=cmd_gen)

    p_attack = sub.add_parser("attack", help="attack an instance file")
    p_attack.add_argument("instance")
    p_attack.add_argument("--out", default=None)
    p_attack.set_defaults(func=cmd_attack)

    p_run = sub.add_parser("run", help="batch generate-and-attack experiment")
    p_run.add_argument("protocol", choices=("aag", "kolee"))
    p_run.add_argument("--moduli", default="2,3")
    p_run.add_argument("--trials", type=int, default=1000)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--jobs", type=int, default=1)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--n1", type=int, default=5)
    p_run.add_argument("--n2", type=int, default=5)
    p_run.add_argument("--l", type=int, default=4)
    p_run.add_argument("--m", type=int, default=4)
    p_run.add_argument("--len", type=int, default=8)
    p_run.add_argument("--case", choices=("m", "n", "conj"), default="m")
    p_run.set_defaults(func=cmd_run)

    p_bench = sub.add_parser("bench", help="runtime scaling benchmark (CSV)")
    p_bench.add_argument("--moduli", default="2,3")
    p_bench.add_argument("--sizes", default="8,16,32,64,128,256")
    p_bench.add_argument("--trials", type=int, default=50)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", default=None)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ATTACK_FAILURES as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GmbsError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
