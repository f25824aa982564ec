"""
Command-line front end.

    cohtele coherence --theta T --phi P
    cohtele teleport  --resource maxent|nonmax:N|mems:P1,P2,P3,P4|werner:P --case I --outcome 0 ...
    cohtele sweep     --param phi --start 0 --stop 6.283 --count 64 ...
    cohtele verify    theorem|formulas|basis|bounds|all [--seed S]

Exit codes: 0 success, 2 usage error, 3 degenerate outcome, 4 verification
failure. Floats are written with 17 significant digits.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from cohtele.errors import DegenerateOutcomeError, ValidationError
from cohtele.protocol import normalize_case, teleport
from cohtele.sampling import DEFAULT_SEED
from cohtele.states import MemsParams, PureQubit, check_density, l1_coherence
from cohtele.verify import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_DEGENERATE, EXIT_VERIFY = 0, 2, 3, 4
SEED_ENV = "COHTELE_SEED"

CSV_COLUMNS = (
    "index", "theta", "phi", "n_re", "n_im", "resource", "case", "outcome",
    "probability", "coherence_in", "coherence_out", "ratio",
)
SWEEP_PARAMS = ("theta", "phi", "n_abs", "n_arg", "werner_p",
                "mems_p1", "mems_p2", "mems_p3", "mems_p4")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    return format(float(x), ".17g")


def parse_complex(text: str) -> complex:
    """Parse ``re+imi`` style complex numbers, e.g. ``2+0i``, ``-1.5i``, ``3``."""
    s = text.strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}; use the form 2+0i") from None


@dataclass
class Resource:
    family: str
    n: complex | None = None
    p: float | None = None
    mems: tuple | None = None

    def kwargs(self, strict=True):
        if self.family == "mems":
            return {"mems": MemsParams(*self.mems, strict=strict)}
        return {"n": self.n, "p": self.p}

    def label(self) -> str:
        if self.family == "werner":
            return f"werner:{fmt(self.p)}"
        if self.family == "mems":
            return "mems:" + ",".join(fmt(v) for v in self.mems)
        return self.family


def parse_resource(token: str) -> Resource:
    family, _, arg = token.strip().partition(":")
    family = family.lower()
    try:
        if family == "maxent" and not arg:
            return Resource("maxent")
        if family == "nonmax":
            return Resource("nonmax", n=parse_complex(arg) if arg else 1 + 0j)
        if family == "werner" and arg:
            return Resource("werner", p=float(arg))
        if family == "mems" and arg:
            vals = tuple(float(v) for v in arg.split(","))
            if len(vals) != 4:
                raise UsageError("mems needs four comma-separated weights")
            return Resource("mems", mems=vals)
    except ValueError:
        raise UsageError(f"cannot parse resource parameters in {token!r}") from None
    raise UsageError(
        f"unknown resource {token!r}; use maxent, nonmax:<n>, werner:<p> or mems:<p1>,<p2>,<p3>,<p4>"
    )


def parse_density(text: str) -> np.ndarray:
    """2x2 matrix from JSON rows of [re, im] pairs (or plain numbers)."""
    try:
        rows = json.loads(text)
        m = np.array([[complex(*e) if isinstance(e, list) else complex(e) for e in row] for row in rows])
    except (ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse --rho: {exc}") from None
    if m.shape != (2, 2):
        raise UsageError(f"--rho must be a 2x2 matrix, got shape {m.shape}")
    return check_density(m)


# ---------------------------------------------------------------- output


def _json_value(v):
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt(v) if math.isfinite(v) else "null"
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    return _json_value(obj)


def _record(index, state, resource, case, outcome, result):
    theta = state.theta if isinstance(state, PureQubit) else None
    phi = state.phi if isinstance(state, PureQubit) else None
    n = resource.n if resource.family == "nonmax" else None
    return {
        "index": index,
        "theta": theta,
        "phi": phi,
        "n_re": None if n is None else n.real,
        "n_im": None if n is None else n.imag,
        "resource": resource.label(),
        "case": case,
        "outcome": outcome,
        "probability": None if result is None else result.probability,
        "coherence_in": None if result is None else result.coherence_in,
        "coherence_out": None if result is None else result.coherence_out,
        "ratio": None if result is None else result.ratio,
    }


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return fmt(v)
    return str(v)


# ---------------------------------------------------------------- commands


def _input_state(args):
    if getattr(args, "rho", None):
        return parse_density(args.rho)
    return PureQubit(args.theta, args.phi)


def cmd_coherence(args, out):
    state = _input_state(args)
    rho = state.density() if isinstance(state, PureQubit) else state
    rec = {"coherence": l1_coherence(rho)}
    if isinstance(state, PureQubit):
        rec = {"theta": state.theta, "phi": state.phi, **rec}
    out.write(dumps(rec) + "\n")
    return EXIT_OK


def cmd_teleport(args, out):
    resource = parse_resource(args.resource)
    case = normalize_case(args.case)
    state = _input_state(args)
    result = teleport(state, resource.family, case, args.outcome, route=args.route, **resource.kwargs())
    rec = _record(0, state, resource, case, args.outcome, result)
    rec["route"] = result.route
    rec["bob_state"] = [[[z.real, z.imag] for z in row] for row in result.bob_state.tolist()]
    out.write(dumps(rec) + "\n")
    return EXIT_OK


@dataclass
class SweepSpec:
    swept_parameter: str
    start: float
    stop: float
    count: int
    resource: Resource
    case: str = "I"
    outcome: int = 0
    fixed: dict = field(default_factory=dict)
    endpoint: bool = True

    def __post_init__(self):
        if self.swept_parameter not in SWEEP_PARAMS:
            raise UsageError(f"cannot sweep {self.swept_parameter!r}; choose from {SWEEP_PARAMS}")
        if self.count < 2:
            raise UsageError("--count must be at least 2")
        if not self.start < self.stop:
            raise UsageError("--start must be below --stop")
        needs = {"n_abs": "nonmax", "n_arg": "nonmax", "werner_p": "werner"}
        family = needs.get(self.swept_parameter, "mems" if self.swept_parameter.startswith("mems") else None)
        if family and self.resource.family != family:
            raise UsageError(f"sweeping {self.swept_parameter} needs a {family} resource")

    def values(self):
        return np.linspace(self.start, self.stop, self.count, endpoint=self.endpoint)


def _point(spec: SweepSpec, value):
    """(state, resource) for one grid value."""
    theta, phi = spec.fixed["theta"], spec.fixed["phi"]
    r = spec.resource
    name = spec.swept_parameter
    if name == "theta":
        theta = value
    elif name == "phi":
        phi = value
    elif name == "n_abs":
        r = Resource("nonmax", n=value * np.exp(1j * np.angle(r.n)))
    elif name == "n_arg":
        r = Resource("nonmax", n=abs(r.n) * np.exp(1j * value))
    elif name == "werner_p":
        r = Resource("werner", p=value)
    else:
        k = int(name[-1]) - 1
        rest = [w for i, w in enumerate(r.mems) if i != k]
        total = sum(rest)
        scale = [(1 - value) * w / total if total > 0 else (1 - value) / 3 for w in rest]
        scale.insert(k, value)
        r = Resource("mems", mems=tuple(scale))
    if r.family == "nonmax":
        r = Resource("nonmax", n=complex(r.n))
    return PureQubit(float(theta), float(phi)), r


def run_sweep(spec: SweepSpec, route="direct"):
    """Rows (as dicts) for every grid point, in grid order."""
    rows = []
    for index, value in enumerate(spec.values()):
        state, res = _point(spec, float(value))
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                result = teleport(state, res.family, spec.case, spec.outcome, route=route,
                                  **res.kwargs(strict=False))
        except DegenerateOutcomeError as exc:
            print(f"warning: row {index}: {exc}", file=sys.stderr)
            result = None
        rows.append(_record(index, state, res, spec.case, spec.outcome, result))
    return rows


def write_csv(rows, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in CSV_COLUMNS])


def cmd_sweep(args, out):
    spec = SweepSpec(
        swept_parameter=args.param,
        start=args.start,
        stop=args.stop,
        count=args.count,
        resource=parse_resource(args.resource),
        case=normalize_case(args.case),
        outcome=args.outcome,
        fixed={"theta": args.theta, "phi": args.phi},
        endpoint=not args.exclude_stop,
    )
    rows = run_sweep(spec, route=args.route)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    else:
        buf = io.StringIO()
        write_csv(rows, buf)
        out.write(buf.getvalue())
    return EXIT_OK


def resolve_seed(flag):
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer") from None
    return DEFAULT_SEED


def cmd_verify(args, out):
    report = run_suite(args.suite, seed=resolve_seed(args.seed), grid=args.grid)
    if args.json:
        out.write(dumps(report.as_dict()) + "\n")
    else:
        out.write(f"suite {report.suite} (seed {report.seed})\n")
        for c in report.checks:
            status = "PASS" if c.passed else "FAIL"
            out.write(f"  {status}  {c.name}: max deviation {c.max_deviation:.3e} "
                      f"(tol {c.tolerance:.0e}) {c.detail}\n")
        out.write(f"overall: {'pass' if report.passed else 'fail'}\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


# ---------------------------------------------------------------- parser


def _add_state_args(p, required=True):
    p.add_argument("--theta", type=float, default=None if required else math.pi / 2,
                   help="polar angle in radians, 0 <= theta <= pi")
    p.add_argument("--phi", type=float, default=0.0, help="azimuthal angle in radians")
    p.add_argument("--rho", help="mixed input as JSON rows of [re, im] pairs (overrides theta/phi)")


def build_parser():
    parser = argparse.ArgumentParser(prog="cohtele", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coherence", help="l1 coherence of an input qubit")
    _add_state_args(p)
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("teleport", help="run one protocol instance and print JSON")
    p.add_argument("--resource", default="maxent")
    p.add_argument("--case", default="I")
    p.add_argument("--outcome", type=int, choices=(0, 1), default=0)
    p.add_argument("--route", choices=("direct", "theorem"), default="direct")
    _add_state_args(p)
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    p.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--exclude-stop", action="store_true", help="half-open range [start, stop)")
    p.add_argument("--resource", default="maxent")
    p.add_argument("--case", default="I")
    p.add_argument("--outcome", type=int, choices=(0, 1), default=0)
    p.add_argument("--route", choices=("direct", "theorem"), default="direct")
    p.add_argument("--theta", type=float, default=math.pi / 2)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--output", "-o", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--seed", type=int, default=None,
                   help=f"generator seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    p.add_argument("--grid", type=int, default=32, help="points per axis of the (theta, phi) grid")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("coherence", "teleport") and args.theta is None and not args.rho:
        parser.error("give --theta (and --phi) or --rho")
    try:
        return args.func(args, out)
    except DegenerateOutcomeError as exc:
        print(f"cohtele: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (UsageError, ValidationError, ValueError) as exc:
        print(f"cohtele: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
