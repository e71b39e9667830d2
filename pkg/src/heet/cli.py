"""Command-line front end: ``heet <subcommand> [flags]``.

Exit codes: 0 success, 1 a lemma check failed, 2 unreadable input or bad
usage, 3 input that parses but violates a domain rule.

Settings resolve as command-line flag, then ``--config`` JSON file (keys
are flag names without dashes, e.g. ``"noise_cov"``), then built-in default.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .eet import EetMatrix, WorkloadMix
from .errors import HeetError, ParseError
from .explorer import MachineCatalog, optimize, sweep, sweep_csv, with_simulation
from .lemmas import validate_all
from .measure import baseline_means, heet_score
from .simulator import NoiseSpec, simulate
from .workload import (
    WorkloadTrace,
    ingest_profile,
    parse_profile_csv,
    synth_bag,
    synth_poisson_trace,
)

DEFAULT_SEED = 0

DEFAULTS = {
    "eet": None,
    "trace": None,
    "catalog": None,
    "profile": None,
    "mix": None,
    "target": None,
    "tasks": 1000,
    "seed": DEFAULT_SEED,
    "noise_cov": 0.0,
    "rate": None,
    "labels": None,
    "machines": None,
    "trials": None,
    "workers": 1,
    "out": None,
    "event_log": None,
    "simulate": False,
}


class UsageError(Exception):
    pass


def _parse_mix(value, m: int) -> WorkloadMix | None:
    if value is None:
        return None
    if isinstance(value, str):
        try:
            raw = [float(x) for x in value.split(",") if x.strip()]
        except ValueError:
            raise ParseError(f"--mix must be comma-separated numbers, got {value!r}") from None
    else:
        raw = list(value)
    if len(raw) != m:
        raise HeetError(f"--mix has {len(raw)} weights for {m} task types")
    return WorkloadMix.normalized(raw)


def _read(path: str | None, what: str) -> str:
    if path is None:
        raise UsageError(f"--{what} is required")
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {what} file {path}: {exc.strerror}") from None


def _load_eet(opts) -> EetMatrix:
    return EetMatrix.from_csv(_read(opts.eet, "eet"))


def _load_catalog(opts) -> MachineCatalog:
    text = _read(opts.catalog, "catalog")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad catalog JSON: {exc.msg}", line=exc.lineno) from None
    return MachineCatalog.from_dict(data)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _require_tasks(opts) -> int:
    c = int(opts.tasks)
    if c < 1:
        raise HeetError("--tasks must be >= 1")
    return c


# -- subcommands -------------------------------------------------------------

def cmd_heet(opts) -> int:
    eet = _load_eet(opts)
    report = heet_score(eet, _parse_mix(opts.mix, eet.m))
    _emit(_dump(report.to_dict(tasks=_require_tasks(opts))), opts.out)
    return 0


def cmd_predict(opts) -> int:
    eet = _load_eet(opts)
    c = _require_tasks(opts)
    report = heet_score(eet, _parse_mix(opts.mix, eet.m))
    n = eet.n
    result = {
        "n": n,
        "tasks": c,
        "heet": report.heet,
        "s_heet": report.s_heet,
        "predicted_makespan": report.predicted_makespan(c),
        "predicted_throughput": report.predicted_throughput,
        "baselines": {
            name: {"mean": v, "predicted_makespan": c / n * v, "predicted_throughput": n / v}
            for name, v in baseline_means(eet).items()
        },
    }
    _emit(_dump(result), opts.out)
    return 0


def _trace_for(opts, labels, mix) -> WorkloadTrace:
    if opts.trace:
        return WorkloadTrace.from_jsonl(_read(opts.trace, "trace"))
    mix = mix or WorkloadMix.uniform(len(labels))
    return synth_bag(_require_tasks(opts), mix, int(opts.seed), labels)


def cmd_simulate(opts) -> int:
    eet = _load_eet(opts)
    trace = _trace_for(opts, eet.task_labels, _parse_mix(opts.mix, eet.m))
    noise = NoiseSpec.lognormal(float(opts.noise_cov), int(opts.seed))
    result = simulate(eet, trace, noise, record_events=bool(opts.event_log))
    print(f"makespan {result.makespan:.6g} s  throughput {result.throughput:.6g} tasks/s")
    if opts.out:
        Path(opts.out).write_text(_dump(result.to_dict()))
    if opts.event_log:
        Path(opts.event_log).write_text(result.events_jsonl())
    return 0


def cmd_validate_lemmas(opts) -> int:
    trials = None if opts.trials is None else int(opts.trials)
    machines = None if opts.machines is None else int(opts.machines)
    checks = validate_all(seed=int(opts.seed), c=_require_tasks(opts), machines=machines, trials=trials)
    for ch in checks:
        status = "PASS" if ch.passed else "FAIL"
        print(f"{status}  {ch.name}: {ch.cases - len(ch.failures)}/{ch.cases} cases")
    if opts.out:
        Path(opts.out).write_text(_dump([ch.to_dict() for ch in checks]))
    return 0 if all(ch.passed for ch in checks) else 1


def _target(opts) -> float:
    if opts.target is None:
        raise UsageError("--target is required")
    return float(opts.target)


def _sweep_rows(opts):
    catalog = _load_catalog(opts)
    mix = _parse_mix(opts.mix, len(catalog.task_labels))
    c = _require_tasks(opts)
    rows = sweep(catalog, mix, _target(opts), c, workers=int(opts.workers))
    if opts.simulate:
        trace = synth_bag(c, mix or WorkloadMix.uniform(len(catalog.task_labels)),
                          int(opts.seed), catalog.task_labels)
        rows = with_simulation(rows, catalog, trace, NoiseSpec.lognormal(float(opts.noise_cov), int(opts.seed)))
    return catalog, rows


def cmd_sweep(opts) -> int:
    catalog, rows = _sweep_rows(opts)
    _emit(sweep_csv(rows, catalog), opts.out)
    return 0


def cmd_optimize(opts) -> int:
    catalog, rows = _sweep_rows(opts)
    best = optimize(rows, _target(opts))
    result = {
        "target_throughput": _target(opts),
        "configurations": len(rows),
        "optimum": None if best is None else best.to_dict(catalog),
    }
    _emit(_dump(result), opts.out)
    return 0


def cmd_synth_workload(opts) -> int:
    if opts.eet:
        labels = list(_load_eet(opts).task_labels)
    elif opts.labels:
        labels = [x.strip() for x in str(opts.labels).split(",") if x.strip()]
    else:
        raise UsageError("--eet or --labels is required")
    mix = _parse_mix(opts.mix, len(labels)) or WorkloadMix.uniform(len(labels))
    c = _require_tasks(opts)
    if opts.rate is not None:
        trace = synth_poisson_trace(float(opts.rate), c, mix, int(opts.seed), labels)
    else:
        trace = synth_bag(c, mix, int(opts.seed), labels)
    _emit(trace.to_jsonl(), opts.out)
    return 0


def cmd_ingest_profile(opts) -> int:
    eet = ingest_profile(parse_profile_csv(_read(opts.profile, "profile")))
    _emit(eet.to_csv(), opts.out)
    return 0


COMMANDS = {
    "heet": (cmd_heet, "HEET score and all intermediates for an EET matrix"),
    "predict": (cmd_predict, "predicted makespan/throughput, with entry-mean baselines"),
    "simulate": (cmd_simulate, "run a trace through the FCFS queue simulator"),
    "validate-lemmas": (cmd_validate_lemmas, "check the speedup-mean results by simulation"),
    "sweep": (cmd_sweep, "score every configuration of a machine catalog (CSV)"),
    "optimize": (cmd_optimize, "cheapest catalog configuration meeting a throughput target"),
    "synth-workload": (cmd_synth_workload, "generate a bag-of-tasks or Poisson trace (JSON lines)"),
    "ingest-profile": (cmd_ingest_profile, "average profiling samples into an EET CSV"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=None)
    common.add_argument("--config", help="JSON file with default settings")
    common.add_argument("--eet", help="EET matrix CSV (task,<machine>,...)")
    common.add_argument("--trace", help="workload trace, JSON lines {t, type}")
    common.add_argument("--catalog", help="machine catalog JSON")
    common.add_argument("--profile", help="profiling samples CSV (task,machine,sample_seconds)")
    common.add_argument("--mix", help="comma-separated task-type proportions (normalised)")
    common.add_argument("--target", type=float, help="throughput target, tasks/s")
    common.add_argument("--tasks", type=int, help="task count c (default 1000)")
    common.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--noise-cov", type=float, help="lognormal execution-time noise CoV (default 0)")
    common.add_argument("--rate", type=float, help="Poisson arrival rate; omit for a bag of tasks")
    common.add_argument("--labels", help="comma-separated task labels")
    common.add_argument("--machines", type=int, help="fix the machine count in lemma checks")
    common.add_argument("--trials", type=int, help="random instances per lemma check")
    common.add_argument("--workers", type=int, help="threads for sweep scoring")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--event-log", help="write per-event JSON lines here")
    common.add_argument("--simulate", action="store_true", default=None,
                        help="add simulated makespan/throughput to sweep rows")

    parser = argparse.ArgumentParser(prog="heet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_)
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    config = {}
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ParseError(f"cannot read config {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad config JSON: {exc.msg}", line=exc.lineno) from None
        if not isinstance(config, dict):
            raise ParseError("config file must hold a JSON object")
        unknown = set(config) - set(DEFAULTS)
        if unknown:
            raise ParseError(f"unknown config keys: {sorted(unknown)}")
    merged = {}
    for key, default in DEFAULTS.items():
        value = getattr(args, key, None)
        if value is None:
            value = config.get(key, default)
        merged[key] = value
    return argparse.Namespace(command=args.command, **merged)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve(args)
        return COMMANDS[opts.command][0](opts)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except ParseError as exc:
        print(f"heet: parse error: {exc}", file=sys.stderr)
        return 2
    except HeetError as exc:
        print(f"heet: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
