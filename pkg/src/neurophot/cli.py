"""``neurophot`` command-line front end.

Every subcommand writes its artifacts into the output directory
(``--output-dir``, else ``$NEUROPHOT_OUTPUT_DIR``, else ``./out``) and
exits 0 on success, 1 on a module or input error, 2 on bad usage.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import Config, ConfigError, RunConfig, load_config
from .laser import (
    InputSignal,
    LifParams,
    YamadaParams,
    excitability_threshold,
    simulate_lif,
    simulate_yamada,
    write_spikes_csv,
    write_trajectory_csv,
)
from .metrics import (
    energy_per_mac,
    format_reference_table,
    reference_table_csv,
    total_mac_throughput,
)
from .network import (
    BankTemplate,
    NetworkSpec,
    build_network,
    simulate_network,
    write_network_traces,
    write_spike_events,
)
from .qp import HopfieldConfig, QpProblem, solve_qp, solve_via_network
from .weightbank import (
    Bench,
    InfeasibleTargetError,
    MIN_SPACING_LINEWIDTHS,
    WeightBank,
    apply_weights,
    calibrate_interpolation,
    calibrate_model_based,
    evaluate_accuracy,
    max_channel_count,
    weight_accuracy,
    write_calibration_report,
)

REQ = Config.REQUIRED


def _fmt(x):
    return format(float(x), ".17g")


def _write_kv(path, pairs):
    with open(path, "w", newline="") as fh:
        for key, value in pairs:
            if isinstance(value, (list, tuple, np.ndarray)):
                value = ",".join(_fmt(v) for v in value)
            elif isinstance(value, bool):
                value = str(value).lower()
            elif isinstance(value, float):
                value = _fmt(value)
            fh.write(f"{key} = {value}\n")


def _bits(cfg, key, default):
    raw = cfg.str(key, None)
    if raw is None:
        return default
    if raw.strip().lower() in ("inf", "none", "infinite"):
        return None
    return cfg.int(key)


# -- parameter blocks ---------------------------------------------------------------
_YAMADA_KEYS = ("A", "B", "a", "gamma_G", "gamma_Q", "gamma_I", "epsilon")


def yamada_from_config(cfg: Config) -> YamadaParams:
    preset = cfg.str("preset", "default")
    overrides = {k: cfg.float(k) for k in _YAMADA_KEYS if k in cfg}
    if preset == "default":
        return YamadaParams(**overrides)
    if preset == "restoring":
        return YamadaParams.restoring(**overrides)
    raise ConfigError(f"{cfg.source}: unknown preset {preset!r} (default, restoring)")


def lif_from_config(cfg: Config) -> LifParams:
    return LifParams(
        gamma_G=cfg.float("gamma_G", 0.05), A=cfg.float("A", 0.0),
        G_thresh=cfg.float("G_thresh", 1.0), G_reset=cfg.float("G_reset", 0.0),
        refractory=cfg.float("refractory", 0.0),
    )


def _input_from(cfg: Config, prefix="") -> InputSignal:
    sig = InputSignal.none()
    times = cfg.floats(prefix + "impulse_times", None)
    if times is not None:
        areas = cfg.floats(prefix + "impulse_areas", REQ)
        if areas.size == 1 and times.size > 1:
            areas = np.full(times.size, areas[0])
        if areas.size != times.size:
            raise ConfigError(f"{cfg.source}: {prefix}impulse_times and impulse_areas differ in length")
        sig = sig + InputSignal.impulses(times.tolist(), areas.tolist())
    const = cfg.float(prefix + "constant_input", None)
    if const is not None:
        sig = sig + InputSignal.constant(const)
    return sig


# -- subcommands ------------------------------------------------------------------------
def cmd_simulate(args, run: RunConfig):
    cfg = load_config(args.config)
    model = cfg.str("model", "yamada")
    dt = cfg.float("dt", 0.05)
    T = cfg.float("T", 200.0)
    inp = _input_from(cfg)
    out = run.output_dir
    if model == "yamada":
        params = yamada_from_config(cfg)
        res = simulate_yamada(params, inp, dt=dt, T=T,
                              spike_threshold=cfg.float("spike_threshold", 0.5),
                              dead_time=cfg.float("dead_time", 0.0))
        find = cfg.bool("find_threshold", False)
        cfg.check_unused()
        write_trajectory_csv(out / "trajectory.csv", res)
        write_spikes_csv(out / "spikes.csv", res.spikes)
        summary = [("model", model), ("dt", dt), ("T", T), ("spikes", len(res.spikes))]
        if find:
            summary.append(("threshold_area", excitability_threshold(params, dt=dt)))
    elif model == "lif":
        params = lif_from_config(cfg)
        res = simulate_lif(params, inp, dt=dt, T=T)
        cfg.check_unused()
        with open(out / "trajectory.csv", "w", newline="") as fh:
            fh.write("t,G\n")
            for t, g in zip(res.t, res.G):
                fh.write(f"{_fmt(t)},{_fmt(g)}\n")
        write_spikes_csv(out / "spikes.csv", res.spikes)
        summary = [("model", model), ("dt", dt), ("T", T), ("spikes", len(res.spikes))]
    else:
        raise ConfigError(f"{cfg.source}: unknown model {model!r} (yamada, lif)")
    _write_kv(out / "summary.txt", summary)
    print(f"{len(res.spikes)} spike(s); wrote {out / 'trajectory.csv'}")


def network_spec_from_config(cfg: Config) -> NetworkSpec:
    n = cfg.int("nodes", REQ)
    if n < 1:
        raise ConfigError(f"{cfg.source}: nodes must be >= 1")
    model = cfg.str("model", "yamada")
    if model == "yamada":
        node = yamada_from_config(cfg)
    elif model == "lif":
        node = lif_from_config(cfg)
    else:
        raise ConfigError(f"{cfg.source}: unknown model {model!r} (yamada, lif)")
    W = cfg.floats("weights", None)
    W = np.zeros((n, n)) if W is None else W
    if W.size != n * n:
        raise ConfigError(f"{cfg.source}: weights needs {n * n} entries, got {W.size}")
    lams = cfg.floats("wavelengths", None)
    lams = 1550.0 + 0.4 * np.arange(n) if lams is None else lams
    loops = cfg.ints("loops", None)
    inputs = [_input_from(cfg, f"input.{j}.") for j in range(n)]
    return NetworkSpec(
        W.reshape(n, n), [node] * n, tuple(lams), inputs,
        loop_id=None if loops is None else tuple(loops),
        drive_gain=cfg.float("drive_gain", 1.0),
        output_coupling=cfg.float("output_coupling", 1.0),
        delay=cfg.float("delay", None),
    )


def cmd_network(args, run: RunConfig):
    cfg = load_config(args.config)
    spec = network_spec_from_config(cfg)
    template = BankTemplate(dac_bits=_bits(cfg, "dac_bits", 12))
    net = build_network(spec, template, finesse=cfg.float("finesse", None),
                        spacing=cfg.float("spacing", MIN_SPACING_LINEWIDTHS),
                        mode=cfg.str("mode", "physics"))
    dt = cfg.float("dt", 0.05)
    T = cfg.float("T", 200.0)
    thr = cfg.float("spike_threshold", 0.5)
    cfg.check_unused()
    res = simulate_network(net, dt=dt, T=T, spike_threshold=thr)
    out = run.output_dir
    write_network_traces(out / "traces.csv", res)
    write_spike_events(out / "spikes.csv", res)
    _write_kv(out / "summary.txt", [
        ("nodes", spec.N), ("mode", net.mode), ("capacity_per_loop", net.capacity),
        ("max_weight_error", float(np.max(np.abs(net.weights - spec.weight_matrix)))),
        ("spikes", [len(s) for s in res.spikes]),
    ])
    print(f"{sum(len(s) for s in res.spikes)} spike(s) over {spec.N} node(s); "
          f"wrote {out / 'spikes.csv'}")


def cmd_calibrate(args, run: RunConfig):
    cfg = load_config(args.config)
    n = cfg.int("channels", 4)
    method = cfg.str("method", "model")
    points = cfg.int("points", 20)
    bank = WeightBank.uniform(n, spacing=cfg.float("channel_spacing", 1.6),
                              fwhm=cfg.float("fwhm", 0.1),
                              rest_offset=cfg.float("rest_offset", 0.8),
                              adc_bits=_bits(cfg, "adc_bits", 12),
                              dac_bits=_bits(cfg, "dac_bits", 12))
    targets = cfg.int("targets", 100)
    seed = cfg.int("seed", run.seed)
    cfg.check_unused()
    bench = Bench(bank)
    out = run.output_dir
    if method == "interpolation":
        cals, reports = [], []
        for j in range(n):
            cal, rep = calibrate_interpolation(bank, j, points, bench=bench)
            cals.append(cal)
            reports.append(rep)
        calib = cals
    elif method == "model":
        calib = calibrate_model_based(bank, {"filter": points}, bench=bench)
        reports = [evaluate_accuracy(bank, c) for c in calib.channels]
    else:
        raise ConfigError(f"{cfg.source}: unknown method {method!r} (model, interpolation)")
    write_calibration_report(out / "calibration.csv", reports)

    rng = np.random.default_rng(seed)
    worst, infeasible = 0.0, 0
    for _ in range(targets):
        w = rng.uniform(-1.0, 1.0, n)
        try:
            _, achieved = apply_weights(bank, calib, w)
        except InfeasibleTargetError:
            infeasible += 1
            continue
        worst = max(worst, float(np.max(np.abs(achieved - w))))
    summary = [("method", method), ("channels", n), ("seed", seed),
               ("measurements", bench.count), ("targets", targets),
               ("infeasible_targets", infeasible), ("worst_error", worst)]
    if worst > 0:
        dB, bits = weight_accuracy(2.0, worst)
        summary += [("bits", bits), ("dB", dB)]
    _write_kv(out / "summary.txt", summary)
    print(f"{bench.count} measurements; worst simultaneous error {worst:.4g} over "
          f"{targets - infeasible} target vector(s)")


def cmd_channels(args, run: RunConfig):
    print(max_channel_count(args.finesse, args.spacing))


def qp_from_config(cfg: Config) -> QpProblem:
    n = cfg.int("n", REQ)
    Q = cfg.floats("Q", REQ)
    if Q.size != n * n:
        raise ConfigError(f"{cfg.source}: Q needs {n * n} entries, got {Q.size}")
    c = cfg.floats("c", REQ)
    lo = cfg.floats("lower", REQ)
    hi = cfg.floats("upper", REQ)
    for key, v in (("c", c), ("lower", lo), ("upper", hi)):
        if v.size not in (1, n):
            raise ConfigError(f"{cfg.source}: {key} needs 1 or {n} entries")
    return QpProblem(Q.reshape(n, n), c, lo, hi)


def cmd_solve_qp(args, run: RunConfig):
    cfg = load_config(args.file)
    problem = qp_from_config(cfg)
    config = HopfieldConfig(dt=cfg.float("dt", None), max_steps=cfg.int("max_steps", 100_000),
                            tol=cfg.float("tol", 1e-8), eta=cfg.float("eta", None))
    x0 = cfg.floats("x0", None)
    cfg.check_unused()
    res = solve_qp(problem, config, x0=x0)
    pairs = [("n", problem.n), ("x", res.x), ("objective", res.objective), ("steps", res.steps),
             ("converged", res.converged), ("dt", res.dt)]
    if config.eta is not None:
        xn = solve_via_network(problem, config.eta, max(res.steps, 1), x0=x0)
        pairs += [("eta", config.eta), ("x_network", xn),
                  ("network_deviation", float(np.max(np.abs(xn - res.x))))]
    out = run.output_dir
    _write_kv(out / "solution.txt", pairs)
    print(f"objective {res.objective:.12g} after {res.steps} step(s)"
          f"{'' if res.converged else ' (not converged)'}")
    if not res.converged:
        print("warning: solver did not reach the tolerance", file=sys.stderr)


def cmd_metrics(args, run: RunConfig):
    if args.table:
        sys.stdout.write(reference_table_csv() if args.csv else format_reference_table())
        return
    needed = (args.wallplug, args.neurons, args.fan_in, args.rate)
    if any(v is None for v in needed):
        raise ConfigError("metrics needs --table or all of --wallplug --neurons --fan-in --rate")
    e = energy_per_mac(args.wallplug, args.neurons, args.fan_in, args.rate)
    thr = total_mac_throughput(args.neurons, args.fan_in, args.rate)
    print(f"energy_per_mac_J = {_fmt(e)}")
    print(f"energy_per_mac_pJ = {_fmt(e * 1e12)}")
    print(f"mac_throughput_per_s = {_fmt(thr)}")


# -- entry point --------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", help="artifact directory (default $NEUROPHOT_OUTPUT_DIR or ./out)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized instances")

    p = argparse.ArgumentParser(prog="neurophot", description="Photonic spiking network toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    s = sub.add_parser("simulate", parents=[common], help="single neuron from a config file")
    s.add_argument("config")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("network", parents=[common], help="broadcast-and-weight network")
    s.add_argument("config")
    s.set_defaults(func=cmd_network)

    s = sub.add_parser("calibrate", parents=[common], help="weight-bank calibration run")
    s.add_argument("config")
    s.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("channels", parents=[common], help="WDM channel capacity of a bank")
    s.add_argument("--finesse", type=float, required=True)
    s.add_argument("--spacing", type=float, default=MIN_SPACING_LINEWIDTHS,
                   help="minimum channel spacing in linewidths (default %(default)s)")
    s.set_defaults(func=cmd_channels)

    s = sub.add_parser("solve-qp", parents=[common], help="box-constrained QP from a file")
    s.add_argument("file")
    s.set_defaults(func=cmd_solve_qp)

    s = sub.add_parser("metrics", parents=[common], help="MAC metrics and reference table")
    s.add_argument("--table", action="store_true", help="print the reference comparison table")
    s.add_argument("--csv", action="store_true", help="with --table, print CSV")
    s.add_argument("--wallplug", type=float, help="wall-plug power (W)")
    s.add_argument("--neurons", type=float)
    s.add_argument("--fan-in", type=float)
    s.add_argument("--rate", type=float, help="MAC rate per synapse (1/s)")
    s.set_defaults(func=cmd_metrics)
    return p


_WRITES = {"simulate", "network", "calibrate", "solve-qp"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = RunConfig(args.subcommand, [], RunConfig.resolve_output_dir(args.output_dir),
                        seed=args.seed)
        if args.subcommand in _WRITES:
            Path(run.output_dir).mkdir(parents=True, exist_ok=True)
        args.func(args, run)
    except (ConfigError, FileNotFoundError, ValueError, RuntimeError, OSError,
            np.linalg.LinAlgError) as exc:
        print(f"neurophot {args.subcommand}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
