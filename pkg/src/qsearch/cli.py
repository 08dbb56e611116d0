"""Command-line front end: ``run``, ``schedule``, ``sweep`` and ``verify``.

Every CSV starts with ``# key=value`` lines echoing the resolved configuration.
Exit codes: 0 success, 2 invalid configuration, 3 run failure, 4 failed
verification.
"""

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, analysis, twolevel, verify
from ._format import fmt, header_lines
from ._jit import BACKEND
from .circuit import compile_plan
from .errors import InvalidInputError, InvalidParameterError
from .execution import ENGINES, check_capacity, execute_plan, parse_engine
from .plans import Algorithm, build_plan
from .schedules import LocalAdiabaticSchedule, staircase_points
from .statevector import OracleSpec, measure_counts

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUN = 3
EXIT_VERIFY = 4

SWEEP_COLUMNS = ("value", "R", "dist", "succ_prob", "oracle_calls", "op_err")
SCHEDULE_COLUMNS = ("s", "t", "alpha_exact", "alpha_approx", "E0", "E1", "gap")


class ConfigError(InvalidInputError):
    """Invalid configuration; the message starts with the offending field."""

    def __init__(self, field, message):
        super().__init__(f"invalid {field}: {message}")
        self.field = field


class RunFailure(RuntimeError):
    pass


# validation helpers -------------------------------------------------------


def _require(cond, field, message):
    if not cond:
        raise ConfigError(field, message)


def _check_epsilon(alg, epsilon):
    if alg is Algorithm.GROVER:
        return None
    _require(epsilon is not None, "--epsilon", f"required for --alg {alg.value}")
    _require(0.0 < epsilon < 1.0, "--epsilon", f"must lie in (0, 1), got {epsilon}")
    return epsilon


def resolve_marked(spec, n_qubits):
    """``marked`` is an index or ``random:<seed>``; returns the index."""
    N = 1 << n_qubits
    text = str(spec).strip()
    if text.startswith("random:"):
        try:
            seed = int(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError("--marked", f"bad seed in {spec!r}") from None
        _require(seed >= 0, "--marked", "seed must be non-negative")
        return int(np.random.default_rng(seed).integers(N))
    try:
        idx = int(text)
    except ValueError:
        raise ConfigError("--marked", f"expected an index or random:<seed>, got {spec!r}") from None
    _require(0 <= idx < N, "--marked", f"must lie in [0, {N}), got {idx}")
    return idx


def resolve_threads(flag):
    """Flag first, then ``QSEARCH_THREADS``, then the available CPUs."""
    if flag is not None:
        _require(flag >= 1, "--threads", f"must be >= 1, got {flag}")
        return flag
    env = os.environ.get("QSEARCH_THREADS", "").strip()
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError("QSEARCH_THREADS", f"expected an integer, got {env!r}") from None
        _require(value >= 1, "QSEARCH_THREADS", f"must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def _plan(alg, n, epsilon, steps):
    _require(steps is None or steps >= 1, "--steps", f"must be >= 1, got {steps}")
    try:
        return build_plan(alg, n, epsilon=epsilon, steps=steps)
    except InvalidParameterError as exc:
        raise ConfigError("--epsilon", str(exc)) from None


def _engine(name, n):
    try:
        engine = parse_engine(name)
    except InvalidInputError as exc:
        raise ConfigError("--engine", str(exc)) from None
    try:
        check_capacity(engine, n)
    except InvalidInputError as exc:
        raise ConfigError("--n", str(exc)) from None
    return engine


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# run ----------------------------------------------------------------------


def cmd_run(args):
    alg = Algorithm.parse(args.alg)
    _require(1 <= args.n <= 62, "--n", f"must lie in [1, 62], got {args.n}")
    epsilon = _check_epsilon(alg, args.epsilon)
    engine = _engine(args.engine, args.n)
    marked = resolve_marked(args.marked, args.n)
    _require(args.shots is None or args.shots >= 1, "--shots", f"must be >= 1, got {args.shots}")
    plan = _plan(alg, args.n, epsilon, args.steps)

    header = [
        ("subcommand", "run"),
        ("alg", alg.value),
        ("n", args.n),
        ("N", 1 << args.n),
        ("marked", marked),
        ("marked_spec", args.marked),
        ("epsilon", fmt(epsilon)),
        ("R", plan.R),
        ("steps_override", args.steps if args.steps is not None else ""),
        ("engine", engine),
        ("shots", args.shots if args.shots is not None else ""),
        ("seed", args.seed),
        ("backend", BACKEND),
    ]
    if args.plan_out:
        _write(args.plan_out, header_lines(header) + plan.to_csv())
    if args.emit_gates:
        _write(args.emit_gates, compile_plan(plan).to_text())

    oracle = OracleSpec(args.n, marked)
    try:
        report = execute_plan(plan, engine, oracle)
    except InvalidInputError:
        raise
    except Exception as exc:
        raise RunFailure(f"{engine} run failed: {exc}") from exc

    text = report.to_csv(header)
    if args.shots is not None:
        text += _shots_footer(report, engine, args.shots, args.seed)
    _write(args.output, text)
    return EXIT_OK


def _shots_footer(report, engine, shots, seed):
    if engine == "twolevel":
        p = abs(report.final_state.amplitudes[0]) ** 2
        hits = int(np.random.default_rng(seed).binomial(shots, min(1.0, p)))
        return header_lines([("shots_marked", hits), ("shots_other", shots - hits)])
    counts = measure_counts(report.final_state, shots, seed)
    hits = counts.get(report.marked, 0)
    listing = ";".join(f"{k}:{v}" for k, v in sorted(counts.items()))
    return header_lines([("shots_marked", hits), ("counts", listing)])


# schedule -----------------------------------------------------------------


def schedule_csv(N, epsilon, samples):
    sched = LocalAdiabaticSchedule(N, epsilon)
    lines = [",".join(SCHEDULE_COLUMNS)]
    for k in range(samples):
        s = k / (samples - 1)
        e0, e1 = twolevel.eigenvalues(s, N)
        lines.append(
            ",".join(
                fmt(v)
                for v in (
                    s,
                    sched.t_of_s(s),
                    twolevel.ground_state_angle(s, N),
                    twolevel.ground_state_angle_approx(s, N),
                    e0,
                    e1,
                    twolevel.gap(s, N),
                )
            )
        )
    return "\n".join(lines) + "\n"


def staircase_csv(N, epsilon, steps):
    """``t,s_staircase`` corner points: ``(0,0)``, then ``(t_{j-1}, s_j), (t_j, s_j)``."""
    times, levels = staircase_points(LocalAdiabaticSchedule(N, epsilon), steps)
    lines = ["t,s_staircase", f"{fmt(0.0)},{fmt(0.0)}"]
    for j in range(1, steps + 1):
        lines.append(f"{fmt(times[j - 1])},{fmt(levels[j])}")
        lines.append(f"{fmt(times[j])},{fmt(levels[j])}")
    return "\n".join(lines) + "\n"


def cmd_schedule(args):
    if args.N is not None:
        _require(args.n is None, "--N", "give either --n or --N, not both")
        _require(args.N >= 2, "--N", f"must be >= 2, got {args.N}")
        N = float(args.N)
    else:
        _require(args.n is not None, "--n", "one of --n or --N is required")
        _require(1 <= args.n <= 62, "--n", f"must lie in [1, 62], got {args.n}")
        N = float(1 << args.n)
    _require(args.epsilon is not None, "--epsilon", "required")
    _require(0.0 < args.epsilon < 1.0, "--epsilon", f"must lie in (0, 1), got {args.epsilon}")
    _require(args.samples >= 2, "--samples", f"must be >= 2, got {args.samples}")
    staircase_path = None
    if args.steps is not None:
        _require(args.steps >= 1, "--steps", f"must be >= 1, got {args.steps}")
        staircase_path = args.staircase_output
        if staircase_path is None:
            _require(
                args.output not in (None, "-"),
                "--staircase-output",
                "required with --steps when the schedule goes to stdout",
            )
            root, ext = os.path.splitext(args.output)
            staircase_path = f"{root}_staircase{ext or '.csv'}"

    header = [
        ("subcommand", "schedule"),
        ("N", fmt(N) if args.N is not None else int(N)),
        ("epsilon", fmt(args.epsilon)),
        ("samples", args.samples),
        ("steps", args.steps if args.steps is not None else ""),
        ("T_ad", fmt(LocalAdiabaticSchedule(N, args.epsilon).total_time)),
        ("backend", BACKEND),
    ]
    _write(args.output, header_lines(header) + schedule_csv(N, args.epsilon, args.samples))
    if staircase_path is not None:
        _write(staircase_path, header_lines(header) + staircase_csv(N, args.epsilon, args.steps))
    return EXIT_OK


# sweep --------------------------------------------------------------------


def parse_sweep_values(axis, text):
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    _require(parts, "--values", "needs at least one value")
    try:
        if axis == "epsilon":
            values = [float(p) for p in parts]
        else:
            values = [int(p) for p in parts]
    except ValueError:
        raise ConfigError("--values", f"cannot parse {text!r} for axis {axis}") from None
    values = sorted(values)
    _require(len(set(values)) == len(values), "--values", "values must be distinct")
    if axis == "N":
        for v in values:
            _require(v >= 2 and v & (v - 1) == 0, "--values", f"N must be a power of two >= 2, got {v}")
    elif axis == "R":
        _require(values[0] >= 1, "--values", "R values must be >= 1")
    else:
        _require(0.0 < values[0] and values[-1] < 1.0, "--values", "epsilon values must lie in (0, 1)")
    return values


def _sweep_element(alg, axis, value, n, epsilon, steps, engine, marked_spec, repetitions, seed):
    if axis == "N":
        n = int(value).bit_length() - 1
    elif axis == "epsilon":
        epsilon = value
    else:
        steps = value
    plan = build_plan(alg, n, epsilon=epsilon, steps=steps)
    check_capacity(engine, n)
    dist, prob, calls = 0.0, 1.0, 0
    for rep in range(repetitions):
        spec = marked_spec if marked_spec is not None else f"random:{seed + rep}"
        oracle = OracleSpec(n, resolve_marked(spec, n))
        report = execute_plan(plan, engine, oracle, record=False)
        # worst case over repetitions
        dist = max(dist, report.final_distance)
        prob = min(prob, report.final_probability)
        calls = max(calls, report.total_calls)
    op_err = analysis.plan_unitary_error(plan)
    return (value, plan.R, dist, prob, calls, op_err)


def _sweep_row(axis, row):
    value, R, dist, prob, calls, op_err = row
    shown = fmt(value) if axis == "epsilon" else str(value)
    return ",".join([shown, str(R), fmt(dist), fmt(prob), str(calls), fmt(op_err)])


def _slope_footer(axis, rows):
    if axis not in ("R", "N") or len(rows) < 2:
        return []
    xs = [r[0] for r in rows]
    out = []
    for name, col in (("slope_dist", 2), ("slope_op_err", 5)):
        ys = [r[col] for r in rows]
        if all(y is not None and y > 0 for y in ys):
            out.append((name, fmt(analysis.loglog_slope(xs, ys))))
    return out


def cmd_sweep(args):
    alg = Algorithm.parse(args.alg)
    axis = args.axis
    values = parse_sweep_values(axis, args.values)
    if axis != "N":
        _require(args.n is not None, "--n", f"required when sweeping {axis}")
        _require(1 <= args.n <= 62, "--n", f"must lie in [1, 62], got {args.n}")
    n_ref = args.n if axis != "N" else max(values).bit_length() - 1
    if axis == "epsilon":
        _require(alg is not Algorithm.GROVER, "--axis", "grover has no epsilon")
        epsilon = None
    else:
        epsilon = _check_epsilon(alg, args.epsilon)
    if axis == "R":
        _require(args.steps is None, "--steps", "cannot be fixed while sweeping R")
    else:
        _require(args.steps is None or args.steps >= 1, "--steps", f"must be >= 1, got {args.steps}")
    engine = _engine(args.engine, n_ref)
    _require(args.repetitions >= 1, "--repetitions", f"must be >= 1, got {args.repetitions}")
    if args.marked is not None:
        for v in values:
            resolve_marked(args.marked, n_ref if axis != "N" else int(v).bit_length() - 1)
    threads = resolve_threads(args.threads)

    header = [
        ("subcommand", "sweep"),
        ("alg", alg.value),
        ("axis", axis),
        ("values", ",".join(fmt(v) if axis == "epsilon" else str(v) for v in values)),
        ("n", args.n if axis != "N" else ""),
        ("epsilon", fmt(epsilon)),
        ("steps", args.steps if args.steps is not None else ""),
        ("engine", engine),
        ("marked_spec", args.marked if args.marked is not None else f"random:{args.seed}+rep"),
        ("repetitions", args.repetitions),
        ("seed", args.seed),
        ("backend", BACKEND),
    ]

    def job(value):
        return _sweep_element(
            alg, axis, value, args.n, epsilon, args.steps, engine, args.marked, args.repetitions, args.seed
        )

    rows, failure = [], None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(job, v) for v in values]
        # collect in axis order; stop at the first failing element
        for v, fut in zip(values, futures):
            try:
                rows.append(fut.result())
            except Exception as exc:
                failure = (v, exc)
                for f in futures:
                    f.cancel()
                break

    text = header_lines(header) + ",".join(SWEEP_COLUMNS) + "\n"
    text += "".join(_sweep_row(axis, r) + "\n" for r in rows)
    if failure is not None:
        v, exc = failure
        text += header_lines([("error", f"{axis}={v}: {type(exc).__name__}: {exc}")])
        _write(args.output, text)
        raise RunFailure(f"sweep element {axis}={v} failed: {exc}")
    text += header_lines(_slope_footer(axis, rows))
    _write(args.output, text)
    return EXIT_OK


# verify -------------------------------------------------------------------


def cmd_verify(args):
    if args.tamper is not None and args.tamper not in verify.check_names(args.level):
        raise ConfigError("--tamper", f"no check named {args.tamper!r} at level {args.level}")
    results = verify.run_checks(args.level, tamper=args.tamper, emit=lambda line: print(line, flush=True))
    failed = sum(not r.passed for r in results)
    print(f"# level={args.level} checks={len(results)} failed={failed} backend={BACKEND}")
    return EXIT_VERIFY if failed else EXIT_OK


# parser -------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="qsearch", description="Quantum search simulations and checks.")
    p.add_argument("--version", action="version", version=f"qsearch {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    r = sub.add_parser("run", help="run one algorithm and write its per-step CSV")
    r.add_argument("--alg", required=True, choices=[a.value for a in Algorithm])
    r.add_argument("--n", type=int, required=True, help="number of qubits")
    r.add_argument("--epsilon", type=float)
    r.add_argument("--marked", default="random:0", help="index or random:<seed> (default random:0)")
    r.add_argument("--steps", type=int, help="override the step count R")
    r.add_argument("--engine", default="statevector", help=f"one of {', '.join(ENGINES)}")
    r.add_argument("--output", help="CSV path (default stdout)")
    r.add_argument("--shots", type=int, help="sample the final state this many times")
    r.add_argument("--seed", type=int, default=0, help="seed for --shots sampling")
    r.add_argument("--threads", type=int, help="accepted for symmetry with sweep; runs are serial")
    r.add_argument("--emit-gates", metavar="PATH", help="write the compiled gate sequence")
    r.add_argument("--plan-out", metavar="PATH", help="write the step plan as j,s,dt0,dtf")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("schedule", help="dump the local adiabatic schedule and spectrum")
    s.add_argument("--n", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--samples", type=int, default=101)
    s.add_argument("--steps", type=int, help="also write the R-step staircase s'(t)")
    s.add_argument("--output")
    s.add_argument("--staircase-output")
    s.set_defaults(func=cmd_schedule)

    w = sub.add_parser("sweep", help="final error against R, N or epsilon")
    w.add_argument("--alg", required=True, choices=[a.value for a in Algorithm])
    w.add_argument("--axis", required=True, choices=["R", "N", "epsilon"])
    w.add_argument("--values", required=True, help="comma-separated axis values")
    w.add_argument("--n", type=int)
    w.add_argument("--epsilon", type=float)
    w.add_argument("--steps", type=int)
    w.add_argument("--engine", default="twolevel")
    w.add_argument("--marked", help="index or random:<seed>; default random:<seed+rep>")
    w.add_argument("--repetitions", type=int, default=1)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--threads", type=int)
    w.add_argument("--output")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the self-check suite")
    v.add_argument("--level", choices=list(verify.LEVELS), default="fast")
    v.add_argument("--tamper", metavar="NAME", help="force the named check to fail")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"qsearch: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RunFailure as exc:
        print(f"qsearch: error: {exc}", file=sys.stderr)
        return EXIT_RUN
    except Exception as exc:
        print(f"qsearch: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUN


if __name__ == "__main__":
    sys.exit(main())
