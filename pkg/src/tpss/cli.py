"""Command-line front end.

Angles are accepted in degrees on the command line and always stored in
radians in emitted files (column names carry the unit).  Exit codes: 0 on
success, 1 on a domain error, 2 on verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .correlations import (
    CorrelationRecord,
    circular_analyzer,
    closed_form_W,
    coincidence,
    linear_analyzer,
    records_to_csv,
)
from .distribution import (
    DEFAULT_GRID_POINTS,
    Method,
    classify,
    curves_to_csv,
    tabulate_curve,
)
from .errors import DomainError, NoIntensityError
from .polarization import density_matrix, density_to_json, polarization_params
from .sampler import RunConfig, run_coincidence, tally_to_json
from .states import StateLabel, state_counts
from .verify import run_all


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage problems are domain errors, not verification failures
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json_rows(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2) + "\n"


def _resolve_state(token: str, variant: str | None) -> StateLabel:
    if variant:
        if token.endswith(("a", "b")):
            raise DomainError("variant given both in the state token and via --variant")
        token = token + variant
    return StateLabel.parse(token)


def _cmd_states(args) -> int:
    rows = []
    for j in range(args.jmax + 1):
        n_plus, n_minus = state_counts(j)
        rows.append((j, n_plus, n_minus))
    if args.format == "json":
        doc = [{"J": j, "n_plus": p or None, "n_minus": m or None} for j, p, m in rows]
        _write(_json_rows(doc), args.out)
    else:
        lines = ["J,n_plus,n_minus"]
        for j, p, m in rows:
            lines.append(f"{j},{p if p else '-'},{m if m else '-'}")
        _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_angdist(args) -> int:
    state = _resolve_state(args.state, args.variant)
    methods = [Method.DIRECT, Method.SERIES] if args.method == "both" else [Method(args.method)]
    curves = [tabulate_curve(state, args.grid, m) for m in methods]
    if args.format == "json":
        rows = [{"theta_rad": float(t), "w_sr_inv": float(w),
                 "method": c.method.value, "state": c.state.token}
                for c in curves for t, w in zip(c.thetas, c.values)]
        _write(_json_rows(rows), args.out)
    else:
        _write(curves_to_csv(curves), args.out)
    return 0


def _cmd_density(args) -> int:
    state = _resolve_state(args.state, args.variant)
    theta = math.radians(args.theta) if args.theta is not None else None
    pm = density_matrix(state, theta, Method(args.method))
    _write(density_to_json(pm), args.out)
    return 0


def _cmd_params(args) -> int:
    state = _resolve_state(args.state, args.variant)
    if classify(state) != 2:
        raise DomainError(
            f"state {state.token} has no polarization parameters "
            "(equal-helicity class)")
    methods = [Method.DIRECT, Method.SERIES] if args.method == "both" else [Method(args.method)]
    if args.theta is not None:
        thetas = [math.radians(args.theta)]
        skip_undefined = False
    else:
        thetas = np.linspace(0.0, math.pi, args.grid)
        skip_undefined = True
    rows = []
    for method in methods:
        for theta in thetas:
            try:
                p = polarization_params(state.j, state.m, float(theta), method)
            except NoIntensityError:
                if skip_undefined:
                    continue
                raise
            rows.append({"theta_rad": float(theta), "xi": p.xi, "zeta": p.zeta,
                         "method": method.value, "state": state.token})
    if args.format == "json":
        _write(_json_rows(rows), args.out)
    else:
        lines = ["theta_rad,xi,zeta,method,state"]
        for r in rows:
            lines.append(f"{r['theta_rad']!r},{r['xi']!r},{r['zeta']!r},"
                         f"{r['method']},{r['state']}")
        _write("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_correlate(args) -> int:
    state = _resolve_state(args.state, args.variant)
    theta = math.radians(args.theta) if args.theta is not None else None
    needs_theta = classify(state) == 2
    rho = density_matrix(state, theta if needs_theta else None)

    if args.analyzer == "circular":
        if args.psi is not None or args.psi_prime is not None or args.grid is not None:
            raise DomainError("circular analyzers take no orientation angles")
        if args.source != "trace":
            raise DomainError("only the trace route applies to circular analyzers")
        pairs = [(None, None)]
    else:
        psi_prime = math.radians(args.psi_prime) if args.psi_prime is not None else 0.0
        if args.grid is not None:
            pairs = [(float(p), psi_prime)
                     for p in np.linspace(0.0, math.pi, args.grid, endpoint=False)]
        else:
            psi = math.radians(args.psi) if args.psi is not None else 0.0
            pairs = [(psi, psi_prime)]

    sources = ["trace", "closed_form"] if args.source == "both" else [args.source]
    records = []
    for psi, psi_prime in pairs:
        for source in sources:
            if args.analyzer == "circular":
                a, b = circular_analyzer(+1), circular_analyzer(+1)
                value = coincidence(rho, a, b).value
            elif source == "trace":
                a = linear_analyzer(psi, "forward")
                b = linear_analyzer(psi_prime, "backward")
                value = coincidence(rho, a, b).value
            else:
                value = closed_form_W(state, psi, psi_prime,
                                      theta if needs_theta else None)
            records.append(CorrelationRecord(psi, psi_prime, value, state.token,
                                             rho.theta, source))
    if args.format == "json":
        rows = [{"psi_rad": r.psi, "psi_prime_rad": r.psi_prime, "W": r.value,
                 "state": r.state_token, "theta_rad": r.theta, "source": r.source}
                for r in records]
        _write(_json_rows(rows), args.out)
    else:
        _write(records_to_csv(records), args.out)
    return 0


def _cmd_sample(args) -> int:
    state = _resolve_state(args.state, args.variant)
    if args.analyzer == "circular":
        analyzers = (circular_analyzer(+1), circular_analyzer(+1))
    else:
        psi = math.radians(args.psi) if args.psi is not None else 0.0
        psi_prime = math.radians(args.psi_prime) if args.psi_prime is not None else 0.0
        analyzers = (linear_analyzer(psi, "forward"),
                     linear_analyzer(psi_prime, "backward"))
    theta = math.radians(args.theta) if args.theta is not None else None
    config = RunConfig(state, args.events, args.seed, analyzers, theta)
    tally = run_coincidence(config, workers=args.workers)
    _write(tally_to_json(config, tally), args.out)
    return 0


def _cmd_verify(args) -> int:
    results = run_all(inject_failure=args.inject_failure)
    all_passed = all(r.passed for r in results)
    if args.json:
        doc = {"checks": [{"name": r.name, "passed": r.passed, "detail": r.detail}
                          for r in results],
               "all_passed": all_passed}
        _write(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        lines = []
        for r in results:
            lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
        lines.append("all checks passed" if all_passed else "VERIFICATION FAILED")
        _write("\n".join(lines) + "\n", args.out)
    return 0 if all_passed else 2


def _add_state_args(sub):
    sub.add_argument("--state", required=True,
                     help="state token, e.g. J2M1P+a or J0M0P+")
    sub.add_argument("--variant", choices=["a", "b"],
                     help="variant selector for even-j positive-parity states")


def build_parser() -> _Parser:
    parser = _Parser(prog="tpss",
                     description="Two-photon spherical states: distributions, "
                                 "density matrices, correlations, sampling.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("states", help="allowed-state counts per j")
    p.add_argument("--jmax", type=int, default=12)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_states)

    p = subs.add_parser("angdist", help="angular distribution curve")
    _add_state_args(p)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID_POINTS)
    p.add_argument("--method", choices=["direct", "series", "both"], default="direct")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_angdist)

    p = subs.add_parser("density", help="pair polarization density matrix (JSON)")
    _add_state_args(p)
    p.add_argument("--theta", type=float, help="emission polar angle in degrees")
    p.add_argument("--method", choices=["direct", "series"], default="direct")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_density)

    p = subs.add_parser("params", help="polarization parameters xi and zeta")
    _add_state_args(p)
    p.add_argument("--theta", type=float, help="emission polar angle in degrees")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID_POINTS,
                   help="theta grid size when --theta is not given "
                        "(points without pair intensity are omitted)")
    p.add_argument("--method", choices=["direct", "series", "both"], default="direct")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_params)

    p = subs.add_parser("correlate", help="coincidence probability of two analyzers")
    _add_state_args(p)
    p.add_argument("--psi", type=float, help="forward analyzer azimuth in degrees")
    p.add_argument("--psi-prime", type=float, help="backward analyzer azimuth in degrees")
    p.add_argument("--theta", type=float, help="emission polar angle in degrees")
    p.add_argument("--grid", type=int,
                   help="sweep psi over this many points in [0, 180) degrees")
    p.add_argument("--analyzer", choices=["linear", "circular"], default="linear")
    p.add_argument("--source", choices=["trace", "closed_form", "both"], default="trace")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_correlate)

    p = subs.add_parser("sample", help="Monte Carlo coincidence run (JSON tally)")
    _add_state_args(p)
    p.add_argument("--events", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--theta", type=float,
                   help="fix the emission angle in degrees (otherwise sampled)")
    p.add_argument("--psi", type=float)
    p.add_argument("--psi-prime", type=float)
    p.add_argument("--analyzer", choices=["linear", "circular"], default="linear")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_sample)

    p = subs.add_parser("verify", help="run the full cross-route oracle suite")
    p.add_argument("--json", action="store_true")
    p.add_argument("--inject-failure", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as exc:
        print(f"tpss: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
