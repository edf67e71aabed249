"""Command-line interface: ``isochron <subcommand> ...``.

Exit codes: 0 success, 1 input/parse/I-O error, 2 no usable well,
3 integration or matching failure, 4 parameter out of range,
5 crossvalidate found disagreements.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

import numpy as np

from . import corpus, formats
from .classify import classification_to_json, classify, is_isochronous
from .dynamics import (
    CMSystem,
    State1D,
    StateND,
    integrate_1d,
    integrate_cm,
    measure_period,
)
from .errors import (
    AsymptoticCutoffTooLarge,
    DomainTooSmall,
    EnergyOutOfRange,
    GridTooCoarse,
    InsufficientCrossings,
    IntegrationError,
    IsochronError,
    MatchingFailure,
    NoMinimumFound,
    NotAMinimum,
    ParameterRangeError,
    SpecParseError,
    UnsupportedForExactClassification,
)
from .period import (
    ISOCHRONOUS_THRESHOLD,
    default_scan_range,
    delta_criterion,
    divergence_probe,
    find_well,
    isochronicity_scan,
    period_at,
)
from .quantum import (
    QuantumPotential,
    equidistance_report,
    extrapolated_levels,
    fd_ladder,
    spectrum_shooting,
)

EXIT_INPUT, EXIT_WELL, EXIT_INTEGRATION, EXIT_RANGE, EXIT_DISAGREE = 1, 2, 3, 4, 5

# most specific first
_EXIT_CODES = (
    (SpecParseError, EXIT_INPUT),
    (UnsupportedForExactClassification, EXIT_INPUT),
    (NoMinimumFound, EXIT_WELL),
    (NotAMinimum, EXIT_WELL),
    (IntegrationError, EXIT_INTEGRATION),
    (MatchingFailure, EXIT_INTEGRATION),
    (ParameterRangeError, EXIT_RANGE),
    (EnergyOutOfRange, EXIT_RANGE),
    (GridTooCoarse, EXIT_RANGE),
    (DomainTooSmall, EXIT_RANGE),
    (AsymptoticCutoffTooLarge, EXIT_RANGE),
)


def exit_code(err: Exception) -> int:
    for cls, code in _EXIT_CODES:
        if isinstance(err, cls):
            return code
    if isinstance(err, OSError):
        return EXIT_INPUT
    return EXIT_INTEGRATION


def number(text: str) -> float:
    """A float, also accepting exact fractions such as ``-3/16``."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def number_list(text: str) -> list[float]:
    return [number(t) for t in text.split(",") if t.strip()]


class Output:
    def __init__(self, args):
        self.args = args

    def info(self, msg: str) -> None:
        if not self.args.quiet:
            print(msg, file=sys.stderr)

    def summary(self, obj) -> None:
        text = formats.dumps(obj) + "\n"
        if self.args.json:
            formats.write_text(self.args.json, text)
        if not self.args.quiet and self.args.json != "-":
            sys.stdout.write(text)

    def csv(self, text: str) -> None:
        if self.args.csv:
            formats.write_text(self.args.csv, text)


def _load(args, out: Output) -> formats.PotentialSpec:
    if getattr(args, "builtin", None):
        return formats.builtin_spec(args.builtin)
    spec = formats.load_spec(args.spec)
    if spec.reduced:
        out.info(f"note: reduced to lowest terms: {spec.to_json()}")
    return spec


def _potential(args, out: Output):
    spec = _load(args, out)
    return spec, spec.evaluable(args.well_hint)


def _well(u, args):
    return find_well(u, args.well_hint)


# -- subcommands ---------------------------------------------------------------------

def cmd_classify(args, out: Output) -> int:
    spec = _load(args, out)
    out.summary(classification_to_json(classify(spec.exact())))
    return 0


def cmd_scan(args, out: Output) -> int:
    spec, u = _potential(args, out)
    w = _well(u, args)
    lo, hi = default_scan_range(w)
    e_lo = lo if args.emin is None else args.emin
    e_hi = hi if args.emax is None else args.emax
    res = isochronicity_scan(u, w, e_lo, e_hi, args.n)
    periods = [s.period for s in res.samples]
    summary = {
        "potential": spec.to_json(),
        "well": w.to_json(),
        "e_lo": e_lo,
        "e_hi": e_hi,
        "n": args.n,
        "spread": res.spread,
        "mean_period": float(np.mean(periods)),
        "isochronous": res.spread <= ISOCHRONOUS_THRESHOLD,
    }
    if "barrier" in (w.left_kind, w.right_kind):
        summary["divergence"] = [{"epsilon": e, "period": t} for e, t in divergence_probe(u, w)]
    out.csv(formats.scan_csv(res.samples))
    out.summary(summary)
    return 0


def cmd_delta(args, out: Output) -> int:
    spec, u = _potential(args, out)
    w = _well(u, args)
    T = args.period
    if T is None:
        verdict = classify(spec.rational) if spec.kind == "rational" else None
        if verdict is not None and is_isochronous(verdict):
            T = verdict.period
        else:
            T = period_at(u, w, args.energy).period
    d = delta_criterion(u, w, args.energy, T)
    out.summary({
        "potential": spec.to_json(),
        "energy": args.energy,
        "T_target": T,
        "delta": d.delta,
        "delta_harmonic": d.delta_harmonic,
        "difference": d.delta - d.delta_harmonic,
    })
    return 0


def cmd_simulate(args, out: Output) -> int:
    if args.cm is not None:
        n, omega, C = int(args.cm[0]), args.cm[1], args.cm[2]
        if n != args.cm[0]:
            raise ParameterRangeError("particle count must be an integer")
        system = CMSystem(n, omega, C)
        if args.x0 is None:
            raise ParameterRangeError("--cm needs --x0")
        mom = args.mom0 if args.mom0 is not None else [0.0] * len(args.x0)
        s0 = StateND(args.x0, mom)
        t_end = system.period if args.tend is None else args.tend
        traj = integrate_cm(system, s0, t_end, args.tol, args.n_out)
        summary = {
            "system": {"n": n, "omega": omega, "C": C},
            "t_end": t_end,
            "energy_drift": traj.energy_drift,
            "return_distance": traj.return_distance(),
            "min_gap": traj.min_gap,
        }
    else:
        if args.q0 is None:
            raise ParameterRangeError("1-D simulation needs --q0")
        spec, u = _potential(args, out)
        if args.tend is None:
            raise ParameterRangeError("1-D simulation needs --tend")
        traj = integrate_1d(u, State1D(args.q0, args.p0), args.tend, args.tol, args.n_out)
        section = args.section
        if section is None:
            section = find_well(u, args.q0 if args.well_hint is None else args.well_hint).x_min
        try:
            period = measure_period(traj, section)
        except InsufficientCrossings as e:
            out.info(f"note: {e}")
            period = None
        summary = {
            "potential": spec.to_json(),
            "t_end": args.tend,
            "section": section,
            "energy_drift": traj.energy_drift,
            "measured_period": period,
        }
    out.csv(formats.trajectory_csv(traj))
    out.summary(summary)
    return 0


def cmd_spectrum(args, out: Output) -> int:
    qp = QuantumPotential(args.A, args.B)
    if args.method == "fd":
        ladder = fd_ladder(qp, args.m, args.x_max, args.points, args.levels)
        best = extrapolated_levels(ladder) if len(ladder) > 1 else ladder[0].eigenvalues
        results = ladder
    else:
        tols = [args.tol * 100 ** k for k in range(args.levels - 1, -1, -1)]
        results = [spectrum_shooting(qp, args.m, args.x_max, t) for t in tols if t <= 1e-6]
        best = results[-1].eigenvalues
    report = equidistance_report(results) if args.m >= 3 else None
    gaps = np.diff(best)
    out.csv(formats.spectrum_csv(best))
    out.summary({
        "A": args.A,
        "B": args.B,
        "method": args.method,
        "eigenvalues": best,
        "gaps": gaps,
        "mean_gap": float(np.mean(gaps)) if len(gaps) else None,
        "report": report.to_json() if report else None,
    })
    return 0


def cmd_crossvalidate(args, out: Output) -> int:
    report = corpus.crossvalidate(args.count, args.seed, args.max_deg)
    out.summary(report.to_json())
    t = report.totals
    out.info(f"{t['count']} potentials, {t['positive']} isochronous, {t['disagree']} disagreements")
    return 0 if not report.disagreements else EXIT_DISAGREE


# -- parser -----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors count as input errors, not as the "no well" code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


_NEGATIVE = re.compile(r"^-[0-9.][0-9.,/eE+-]*$")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """``--x0 -1,1`` -> ``--x0=-1,1`` so argparse does not read ``-1,1`` as an option."""
    out: list[str] = []
    for tok in argv:
        if out and _NEGATIVE.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON summary here ('-' for stdout only)")
    common.add_argument("--csv", metavar="PATH", help="write CSV data here ('-' for stdout)")
    common.add_argument("--quiet", action="store_true", help="print nothing to stdout or stderr")

    potential = _Parser(add_help=False)
    src = potential.add_mutually_exclusive_group(required=True)
    src.add_argument("spec", nargs="?", help="PotentialSpec JSON file ('-' for stdin)")
    src.add_argument("--builtin", help="named builtin potential")
    potential.add_argument("--well-hint", type=number, default=None, metavar="X",
                           help="position inside the well to analyse")

    p = _Parser(prog="isochron", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="exact classification of a rational potential")
    s.add_argument("spec", help="PotentialSpec JSON file ('-' for stdin)")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("scan", parents=[common, potential], help="period over a range of energies")
    s.add_argument("--emin", type=number)
    s.add_argument("--emax", type=number)
    s.add_argument("--n", type=int, default=10)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("delta", parents=[common, potential], help="branch-difference criterion at one energy")
    s.add_argument("--energy", type=number, required=True)
    s.add_argument("--period", type=number, help="target period (default: exact or measured)")
    s.set_defaults(func=cmd_delta)

    s = sub.add_parser("simulate", parents=[common], help="integrate a trajectory")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--potential", dest="spec", metavar="SPEC", help="PotentialSpec JSON file")
    src.add_argument("--builtin")
    src.add_argument("--cm", nargs=3, type=number, metavar=("N", "OMEGA", "C"))
    s.add_argument("--well-hint", type=number, default=None, metavar="X")
    s.add_argument("--q0", type=number)
    s.add_argument("--p0", type=number, default=0.0)
    s.add_argument("--x0", type=number_list)
    s.add_argument("--mom0", type=number_list)
    s.add_argument("--tend", type=number)
    s.add_argument("--tol", type=number, default=1e-10)
    s.add_argument("--section", type=number, help="crossing position for the period (default: well minimum)")
    s.add_argument("--n-out", type=int, default=1001)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("spectrum", parents=[common], help="spectrum of -d2/dx2 + A x^2 + B/x^2")
    s.add_argument("--A", type=number, required=True)
    s.add_argument("--B", type=number, required=True)
    s.add_argument("--m", type=int, default=5)
    s.add_argument("--method", choices=("fd", "shooting"), default="fd")
    s.add_argument("--x-max", type=number)
    s.add_argument("--points", type=int, default=2000, help="fd grid points on the coarsest level")
    s.add_argument("--levels", type=int, default=2, help="discretizations in the ladder")
    s.add_argument("--tol", type=number, default=1e-10, help="shooting tolerance on the finest level")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("crossvalidate", parents=[common], help="exact vs numeric oracle on a seeded corpus")
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--max-deg", type=int, default=6)
    s.set_defaults(func=cmd_crossvalidate)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    for name in ("spec", "builtin", "well_hint"):
        if not hasattr(args, name):
            setattr(args, name, None)
    out = Output(args)
    try:
        return args.func(args, out)
    except (IsochronError, OSError, ValueError, KeyError) as e:
        code = exit_code(e)
        if not args.quiet:
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
