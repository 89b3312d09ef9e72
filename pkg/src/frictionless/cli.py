"""Command-line front end emitting CSV tables.

Subcommands
-----------
design      b(t), its derivatives and omega^2(t) for one ansatz
simulate    analytic energies of expanding modes, optionally checked on a grid
bangbang    solved three-jump protocol and its trace
reference   final excess energy of the linear and uniform reference ramps
sweep       per-(tf, n) summary over a list of durations

Exit codes: 0 success, 2 bad flags or parameters, 3 design or solve failure,
4 propagation failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .ansatz import design_exp_polynomial, design_phase_constrained, design_polynomial
from .bangbang import BangBangLaw, bangbang_profile, solve_matching, t_min
from .ermakov import adiabaticity_margin, ermakov_final_state, inverse_frequency
from .errors import (
    BlowUp,
    DomainError,
    GridTooSmall,
    NegativeFrequencyRegion,
    NoBracket,
    NonPositiveParameter,
    NormDrift,
    NoSolution,
    PositivityViolated,
    SingularSystem,
    StepUnderflow,
)
from .model import hz_to_angular, linear_ramp, make_spec, uniform_ramp

DEFAULT_OMEGA0_HZ = 250.0
DEFAULT_OMEGAF_HZ = 2.5
DEFAULT_TF_MS = 25.0
DEFAULT_SWEEP_MS = "2,6,10,15,25"

EXIT_USAGE = 2
EXIT_DESIGN = 3
EXIT_PROPAGATION = 4

_DESIGN_ERRORS = (
    NoBracket,
    PositivityViolated,
    SingularSystem,
    NoSolution,
    DomainError,
    BlowUp,
    StepUnderflow,
)
_PROPAGATION_ERRORS = (GridTooSmall, NormDrift)


class UsageError(Exception):
    pass


def fmt(x):
    """17 significant digits, enough to round-trip a double."""
    return format(float(x) + 0.0, ".17g")  # + 0.0 folds -0 into 0


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _shared(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--omega0-hz", type=float, help="initial trap frequency in Hz (default 250)")
    g.add_argument("--omega0-rad", type=float, help="initial trap frequency in rad/s")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--omegaf-hz", type=float, help="final trap frequency in Hz (default 2.5)")
    g.add_argument("--omegaf-rad", type=float, help="final trap frequency in rad/s")
    p.add_argument("--tf-ms", type=float, default=DEFAULT_TF_MS, help="duration in ms")
    p.add_argument("--samples", type=_positive_int, default=1000, help="rows in time traces")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--config", default=None, help="flat key = value file of flag defaults")


def _design_flags(p, verify=True):
    p.add_argument("--ansatz", choices=("poly", "exppoly", "phase"), default="poly")
    p.add_argument("--tprime-ms", type=float, default=None, help="target time for --ansatz phase")
    p.add_argument("--n", type=_nonneg_int, action="append", default=None, help="mode (repeatable)")
    if verify:
        p.add_argument("--verify", action="store_true", help="check with the grid propagator")
        p.add_argument("--grid-points", type=_positive_int, default=None)
        p.add_argument("--grid-halfwidth", type=float, default=None, help="in units of sqrt(hbar / (m omega0))")
        p.add_argument("--dt-ns", type=float, default=None, help="propagator step in ns")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="frictionless",
        description="Inverse-engineered trap expansions and their verification.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="scaling law and frequency trace")
    _shared(p)
    _design_flags(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="expanding-mode energies")
    _shared(p)
    _design_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bangbang", help="three-jump protocol")
    _shared(p)
    p.add_argument("--omegaI-frac", dest="omegaI_frac", type=float, default=0.9)
    p.add_argument("--omega2-frac", dest="omega2_frac", type=float, default=1.0)
    p.set_defaults(func=cmd_bangbang)

    p = sub.add_parser("reference", help="excess energy of the reference ramps")
    _shared(p)
    p.add_argument("--ramp", choices=("linear", "uniform"), default="uniform")
    p.add_argument("--tf-min-ms", type=float, default=None)
    p.add_argument("--tf-max-ms", type=float, default=None)
    p.add_argument("--tf-steps", type=_positive_int, default=25)
    p.set_defaults(func=cmd_reference)

    p = sub.add_parser("sweep", help="summary over several durations")
    _shared(p)
    _design_flags(p)
    p.add_argument("--tf-ms-list", default=DEFAULT_SWEEP_MS, help="comma-separated durations in ms")
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)
    return parser


def _read_config(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, value = line.split("=", 1)
            else:
                parts = line.split(None, 1)
                key, value = parts[0], parts[1] if len(parts) > 1 else "true"
            values[key.strip().lstrip("-")] = value.strip()
    return values


def _apply_config(subparser, argv, values):
    """Install config values as defaults; explicit flags still win."""
    actions = {}
    for action in subparser._actions:
        for opt in action.option_strings:
            actions[opt.lstrip("-")] = action
    given = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
    exclusive = {"omega0-hz": "omega0-rad", "omega0-rad": "omega0-hz",
                 "omegaf-hz": "omegaf-rad", "omegaf-rad": "omegaf-hz"}
    for a, b in (("omega0-hz", "omega0-rad"), ("omegaf-hz", "omegaf-rad")):
        if a in values and b in values:
            raise UsageError(f"config sets both '{a}' and '{b}'")
    defaults = {}
    for key, text in values.items():
        action = actions.get(key)
        if action is None or key in ("config", "help"):
            raise UsageError(f"unknown config key '{key}'")
        if "--" + exclusive.get(key, "") in given:
            continue
        try:
            if isinstance(action, argparse._StoreTrueAction):
                value = text.lower() in ("1", "true", "yes", "on")
            elif isinstance(action, argparse._AppendAction):
                value = [action.type(v) for v in text.replace(",", " ").split()]
            else:
                value = action.type(text) if action.type else text
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"config key '{key}': {exc}") from exc
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"config key '{key}': {value!r} not in {sorted(action.choices)}")
        defaults[action.dest] = value
    subparser.set_defaults(**defaults)


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        try:
            values = _read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        _apply_config(subparser, argv, values)
        args = parser.parse_args(argv)
    return args


def _spec_from(args, tf=None):
    if args.omega0_rad is not None:
        w0 = args.omega0_rad
    else:
        w0 = hz_to_angular(DEFAULT_OMEGA0_HZ if args.omega0_hz is None else args.omega0_hz)
    if args.omegaf_rad is not None:
        wf = args.omegaf_rad
    else:
        wf = hz_to_angular(DEFAULT_OMEGAF_HZ if args.omegaf_hz is None else args.omegaf_hz)
    tf = args.tf_ms * 1e-3 if tf is None else tf
    values = (w0, wf, tf)
    if not all(math.isfinite(v) for v in values):
        raise UsageError("frequencies and durations must be finite")
    try:
        return make_spec(w0, wf, tf)
    except NonPositiveParameter as exc:
        raise UsageError(str(exc)) from exc


def _modes(args):
    return sorted(set(args.n)) if args.n else [0]


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _header(args):
    skip = {"func", "out", "config", "command"}
    items = [f"{k}={v}" for k, v in sorted(vars(args).items()) if k not in skip]
    return f"# frictionless {__version__} {args.command} " + " ".join(items)


class _Table:
    def __init__(self, args, columns):
        self.header = _header(args)
        self.notes = []
        self.lines = [",".join(columns)]

    def note(self, text):
        """Comment placed between the flag record and the column names."""
        self.notes.append("# " + text)

    def comment(self, text):
        self.lines.append("# " + text)

    def row(self, values):
        self.lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in values))

    def text(self):
        return "\n".join([self.header, *self.notes, *self.lines]) + "\n"

    def write(self, out):
        if out is None:
            sys.stdout.write(self.text())
        else:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(self.text())


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _design(args, spec):
    if args.ansatz == "poly":
        return design_polynomial(spec)
    if args.ansatz == "exppoly":
        return design_exp_polynomial(spec)
    if args.tprime_ms is None:
        raise UsageError("--ansatz phase needs --tprime-ms")
    if not args.tprime_ms > 0:
        raise UsageError("--tprime-ms must be positive")
    return design_phase_constrained(spec, args.tprime_ms * 1e-3)


def cmd_design(args):
    spec = _spec_from(args)
    law = _design(args, spec)
    profile = inverse_frequency(law, spec.omega0)
    t = np.linspace(0.0, spec.tf, args.samples)
    table = _Table(args, ["t_s", "s", "b", "bdot", "bddot", "omega_sq_rad2_s2"])
    cols = (t, t / spec.tf, law.b(t), law.bdot(t), law.bddot(t), profile.omega_sq(t))
    for values in zip(*cols):
        table.row(values)
    if args.verify:
        _verify_footer(table, _modes(args), law, profile, spec, args)
    return table


def _verify_mode(n, law, profile, spec, args, n_max=None):
    from .dynamics import (
        ExpandingMode,
        default_dt,
        default_grid,
        eigenstate_grid,
        fidelity,
        grid_energy,
        mode_grid,
        populations,
        propagate,
    )

    halfwidth, n_points = default_grid(spec, n, law)
    if args.grid_halfwidth is not None:
        halfwidth = args.grid_halfwidth * spec.length_scale
    if args.grid_points is not None:
        n_points = args.grid_points
    if halfwidth <= 0 or n_points < 3:
        raise UsageError("grid needs a positive half-width and at least three points")
    dt = default_dt(spec) if args.dt_ns is None else args.dt_ns * 1e-9
    if not dt > 0:
        raise UsageError("--dt-ns must be positive")
    psi0 = eigenstate_grid(n, spec.omega0, spec, halfwidth=halfwidth, n_points=n_points)
    psi = propagate(profile, psi0, spec, dt=dt)
    exact = mode_grid(ExpandingMode(n, law, spec), spec.tf, psi)
    energy = grid_energy(psi, spec.omegaf**2, spec) / (spec.hbar * spec.omega0)
    return {
        "fidelity_final": fidelity(exact, psi),
        "max_abs_error": float(np.max(np.abs(psi.amplitudes - exact.amplitudes))),
        "grid_energy_over_hbar_omega0": energy,
        "populations": populations(psi, spec.omegaf, n if n_max is None else n_max, spec),
    }


def cmd_simulate(args):
    from .dynamics import ExpandingMode, mode_energy

    spec = _spec_from(args)
    law = _design(args, spec)
    profile = inverse_frequency(law, spec.omega0)
    modes = _modes(args)
    t = np.linspace(0.0, spec.tf, args.samples)
    scale0 = spec.hbar * spec.omega0
    scalef = spec.hbar * spec.omegaf
    columns = ["t_s"]
    columns += [f"energy_over_hbar_omega0_n{n}" for n in modes]
    columns += [f"energy_over_hbar_omegaf_n{n}" for n in modes]
    table = _Table(args, columns)
    energies = [mode_energy(ExpandingMode(n, law, spec), profile, t) for n in modes]
    for i in range(t.size):
        table.row([t[i]] + [e[i] / scale0 for e in energies] + [e[i] / scalef for e in energies])
    if args.verify:
        _verify_footer(table, modes, law, profile, spec, args)
    return table


def _verify_footer(table, modes, law, profile, spec, args):
    """Grid-oracle results as trailing comment lines, one per mode."""
    nmax = max(modes)
    table.comment("verify")
    table.comment(
        ",".join(
            ["n", "fidelity_final", "max_abs_error", "grid_energy_over_hbar_omega0"]
            + [f"p_{k}" for k in range(nmax + 1)]
        )
    )
    for n in modes:
        res = _verify_mode(n, law, profile, spec, args, n_max=nmax)
        pops = res["populations"]
        values = [str(n), fmt(res["fidelity_final"]), fmt(res["max_abs_error"]),
                  fmt(res["grid_energy_over_hbar_omega0"])] + [fmt(p) for p in pops]
        table.comment(",".join(values))


def cmd_bangbang(args):
    spec = _spec_from(args)
    for name in ("omegaI_frac", "omega2_frac"):
        value = getattr(args, name)
        if not (math.isfinite(value) and value > 0):
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    plan = solve_matching(args.omegaI_frac * spec.omega0, args.omega2_frac * spec.omega0, spec)
    tmin = t_min(spec)
    law = BangBangLaw(plan)
    profile = bangbang_profile(plan, spec)
    table = _Table(args, ["t_s", "s", "b", "bdot", "omega_sq_rad2_s2"])
    table.note(
        f"tau1_s={fmt(plan.tau1)} tau2_s={fmt(plan.tau2)} tf_s={fmt(plan.tf)} "
        f"tmin_s={fmt(tmin)} tf_over_tmin={fmt(plan.tf / tmin)} residual={fmt(plan.residual)}"
    )
    if len(plan.candidates) > 1:
        roots = " ".join(f"({fmt(a)};{fmt(b)})" for a, b, _ in plan.candidates)
        table.note(f"all roots (tau1_s;tf_s): {roots}")
    t = np.linspace(0.0, plan.tf, args.samples)
    for values in zip(t, t / plan.tf, law.b(t), law.bdot(t), profile.omega_sq(t)):
        table.row(values)
    return table


_REFERENCE_RANGES_MS = {"linear": (1e3, 2e4), "uniform": (10.0, 500.0)}


def reference_point(ramp, spec):
    """(E/(hbar omegaf), relative excess, adiabaticity margin) for one ramp."""
    profile = linear_ramp(spec) if ramp == "linear" else uniform_ramp(spec)
    b, bdot = ermakov_final_state(profile, spec.omega0)
    w0 = spec.omega0
    energy = spec.hbar / (4.0 * w0) * (bdot**2 + spec.omegaf**2 * b**2 + w0**2 / b**2)
    ratio = energy / (spec.hbar * spec.omegaf)
    return ratio, ratio / 0.5 - 1.0, adiabaticity_margin(profile)


def cmd_reference(args):
    spec = _spec_from(args)
    if args.ramp == "uniform" and not spec.omegaf < spec.omega0:
        raise UsageError("the uniform ramp is defined for expansions (omegaf < omega0)")
    lo, hi = _REFERENCE_RANGES_MS[args.ramp]
    lo = lo if args.tf_min_ms is None else args.tf_min_ms
    hi = hi if args.tf_max_ms is None else args.tf_max_ms
    if not (0 < lo <= hi and math.isfinite(hi)):
        raise UsageError("need 0 < --tf-min-ms <= --tf-max-ms")
    tfs = np.geomspace(lo, hi, args.tf_steps) * 1e-3 if args.tf_steps > 1 else [lo * 1e-3]
    table = _Table(args, ["tf_s", "energy_over_hbar_omegaf", "relative_excess", "adiabaticity_margin"])
    for tf in tfs:
        table.row([tf, *reference_point(args.ramp, spec.with_tf(float(tf)))])
    return table


def _sweep_row(job):
    args, tf, n = job
    from .dynamics import ExpandingMode, mode_energy

    spec = _spec_from(args, tf=tf)
    law = _design(args, spec)
    profile = inverse_frequency(law, spec.omega0)
    energy = mode_energy(ExpandingMode(n, law, spec), profile, spec.tf)
    t = np.linspace(0.0, spec.tf, 10_001)
    wsq = profile.omega_sq(t)
    try:
        margin = adiabaticity_margin(profile)
    except NegativeFrequencyRegion:
        margin = math.nan
    row = [tf, float(n), energy / (spec.hbar * spec.omega0), energy / (spec.hbar * spec.omegaf)]
    if args.verify:
        row.append(_verify_mode(n, law, profile, spec, args)["fidelity_final"])
    row += [float(np.min(wsq)), float(np.max(np.abs(wsq))), margin]
    return row


def cmd_sweep(args):
    try:
        tfs = [float(v) * 1e-3 for v in args.tf_ms_list.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad --tf-ms-list: {exc}") from exc
    if not tfs:
        raise UsageError("--tf-ms-list is empty")
    if not all(math.isfinite(v) and v > 0 for v in tfs):
        raise UsageError("durations must be positive")
    for tf in tfs:
        _spec_from(args, tf=tf)
    columns = ["tf_s", "n", "energy_over_hbar_omega0", "energy_over_hbar_omegaf"]
    if args.verify:
        columns.append("fidelity_final")
    columns += ["min_omega_sq_rad2_s2", "max_abs_omega_sq_rad2_s2", "adiabaticity_margin"]
    jobs = [(args, tf, n) for tf in tfs for n in _modes(args)]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(job) for job in jobs]
    table = _Table(args, columns)
    for row in rows:
        table.row([row[0], str(int(row[1]))] + row[2:])
    return table


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse_args(argv)
        table = args.func(args)
        table.write(args.out)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"frictionless: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _DESIGN_ERRORS as exc:
        print(f"frictionless: design failed: {exc}", file=sys.stderr)
        return EXIT_DESIGN
    except _PROPAGATION_ERRORS as exc:
        print(f"frictionless: propagation failed: {exc}", file=sys.stderr)
        return EXIT_PROPAGATION
    except OSError as exc:
        print(f"frictionless: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
