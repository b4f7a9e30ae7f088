"""Command-line interface.

Subcommands::

    verify-algebra    run the R-matrix identity suite (YBE, unitarity, fusion,
                      epsilon/delta contractions); exit 1 if any residual
                      exceeds tolerance
    verify-matrices   check the singlet Gram matrices (exact integers) and the
                      difference-equation matrices against their closed forms
                      at randomized non-singular points
    two-site          closed-form nearest-neighbour functions at a given lambda
    three-site        next-to-nearest correlator <P12 P23> from the
                      functional-equation solver
    ed                exact diagonalization of a finite periodic chain
    report-table1     finite-size versus thermodynamic comparison table

Output is JSON by default (stable key order, byte-identical for identical
invocations and seeds) with the top-level layout
{"command", "inputs", "results", "diagnostics", "paper_reference_values"};
``--format text`` gives key: value lines, and ``report-table1`` also supports
``--format csv``.  A plain ``key = value`` config file can preload any option;
explicit flags win.  Thread count can be set with ``--threads`` or the
``SU3CHAIN_THREADS`` environment variable; all reductions use fixed summation
order, so results do not depend on it.

Exit codes: 0 success, 1 verification failure (the failing check is named),
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import basis as basis_mod
from . import ed as ed_mod
from . import rmatrix
from . import threesite
from .twosite import ALPHA33_HOMOGENEOUS, OMEGA33_HOMOGENEOUS, TwoSiteSolution

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2

#: published reference values, embedded so result diffing needs no lookup
PAPER_REFERENCE_VALUES = {
    "omega33_homogeneous": -0.703212076746182,
    "alpha33_homogeneous": -0.12956817625994,
    "p12p23_thermodynamic": 0.191368820116674,
    "table1": {str(L): list(v) for L, v in ed_mod.REFERENCE_TABLE1.items()},
}

_ALGEBRA_TOL = 1e-12
_MATRIX_TOL = 1e-10


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif fmt == "text":
        for section in ("command", "inputs", "results", "diagnostics"):
            print(f"[{section}]")
            value = payload[section]
            if isinstance(value, dict):
                for k in sorted(value):
                    print(f"{k} = {value[k]}")
            else:
                print(value)
    elif fmt == "csv":
        rows = payload["results"].get("rows")
        if rows is None:
            raise ValueError("csv format is only available for report-table1")
        print(",".join(rows[0].keys()))
        for row in rows:
            print(",".join(str(v) for v in row.values()))
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _payload(command: str, inputs: dict, results: dict, diagnostics: dict) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "diagnostics": diagnostics,
        "paper_reference_values": PAPER_REFERENCE_VALUES,
    }


def _fail(fmt: str, payload: dict, message: str) -> int:
    _emit(payload, fmt)
    print(f"verification failed: {message}", file=sys.stderr)
    return EXIT_VERIFY


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_verify_algebra(args) -> int:
    residuals = rmatrix.identity_suite(seed=args.seed, samples=args.samples)
    worst = max(residuals, key=residuals.get)
    results = {name: float(res) for name, res in sorted(residuals.items())}
    payload = _payload(
        "verify-algebra",
        {"seed": args.seed, "samples": args.samples, "tolerance": _ALGEBRA_TOL},
        results,
        {"worst_identity": worst, "worst_residual": float(residuals[worst])},
    )
    if residuals[worst] > _ALGEBRA_TOL:
        return _fail(
            args.format, payload, f"identity {worst!r} residual {residuals[worst]:.3e}"
        )
    _emit(payload, args.format)
    return EXIT_OK


def _random_points(rng, count):
    pts = []
    while len(pts) < count:
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        # keep clear of the singular sets lam in {0, -3} (and x = y for m = 3)
        if min(abs(z), abs(z + 3)) > 0.2:
            pts.append(z)
    return pts


def _cmd_verify_matrices(args) -> int:
    rng = np.random.default_rng(args.seed)
    diagnostics: dict = {}
    # Gram matrices: build_basis raises if contraction != printed integers
    for m in (2, 3):
        basis_mod.build_basis(m)
    results: dict = {"gram_2_exact": True, "gram_3_exact": True}
    dev2 = 0.0
    for lam in _random_points(rng, args.points):
        a = basis_mod.a_matrix(2, lam, 0.0)
        dev2 = max(dev2, float(np.abs(a - basis_mod.a2_closed_form(lam)).max()))
    dev3 = 0.0
    zero_dev = 0.0
    zero_pattern = basis_mod.a3_printed_zero_pattern()
    for x in _random_points(rng, args.points):
        y = _random_points(rng, 1)[0]
        while abs(x - y) < 0.2:
            y = _random_points(rng, 1)[0]
        a = basis_mod.a_matrix(3, x, x - y, x - x)
        closed = basis_mod.a3_closed_form(x, y)
        dev3 = max(dev3, float(np.abs(a - closed).max()))
        zero_dev = max(zero_dev, float(np.abs(a[zero_pattern]).max()))
    results.update(
        {
            "a2_max_deviation": dev2,
            "a3_max_deviation": dev3,
            "a3_zero_entries_max": zero_dev,
        }
    )
    diagnostics["points_per_matrix"] = args.points
    payload = _payload(
        "verify-matrices",
        {"seed": args.seed, "points": args.points, "tolerance": _MATRIX_TOL},
        results,
        diagnostics,
    )
    for name in ("a2_max_deviation", "a3_max_deviation", "a3_zero_entries_max"):
        if results[name] > _MATRIX_TOL:
            return _fail(args.format, payload, f"{name} = {results[name]:.3e}")
    _emit(payload, args.format)
    return EXIT_OK


def _cmd_two_site(args) -> int:
    ts = TwoSiteSolution()
    lam = complex(args.lam)
    results = {
        "omega33": float(np.real(ts.omega33(lam)))
        if lam.imag == 0
        else complex(ts.omega33(lam)),
        "alpha33": float(np.real(ts.alpha33(lam)))
        if lam.imag == 0
        else complex(ts.alpha33(lam)),
    }
    if isinstance(results["omega33"], complex):
        results = {k: [v.real, v.imag] for k, v in results.items()}
    diagnostics = {}
    check_point = lam if min(abs(lam), abs(lam - 1), abs(lam + 1)) > 1e-3 else 0.4 + 0.3j
    res1, res2 = ts.check_difference_equations(check_point)
    diagnostics["difference_equation_residuals"] = [float(res1), float(res2)]
    diagnostics["three_term_residual"] = float(ts.check_three_term(check_point + 0.1))
    if lam == 0:
        diagnostics["omega33_delta_vs_reference"] = float(
            np.real(ts.omega33(0.0)) - PAPER_REFERENCE_VALUES["omega33_homogeneous"]
        )
        diagnostics["alpha33_delta_vs_reference"] = float(
            np.real(ts.alpha33(0.0)) - PAPER_REFERENCE_VALUES["alpha33_homogeneous"]
        )
    payload = _payload(
        "two-site",
        {"lambda": [lam.real, lam.imag]},
        results,
        diagnostics,
    )
    worst = max(res1, res2)
    if worst > 1e-11:
        return _fail(args.format, payload, f"difference-equation residual {worst:.3e}")
    _emit(payload, args.format)
    return EXIT_OK


def _cmd_three_site(args) -> int:
    problem = threesite.ThreeSiteProblem(
        comb_terms=args.comb_terms, richardson_levels=args.levels
    )
    solution = threesite.three_site_correlator(problem)
    results = {
        "p12p23": solution.p12p23,
        "f1": solution.f1,
        "f2": solution.f2,
        "f3": solution.f3,
    }
    diagnostics = {
        k: v
        for k, v in solution.diagnostics.items()
        if k not in ("c2_per_level",)
    }
    diagnostics["p12p23_delta_vs_reference"] = float(
        solution.p12p23 - PAPER_REFERENCE_VALUES["p12p23_thermodynamic"]
    )
    payload = _payload(
        "three-site",
        {"comb_terms": args.comb_terms, "richardson_levels": args.levels},
        results,
        diagnostics,
    )
    if abs(diagnostics["p12p23_delta_vs_reference"]) > 1e-6:
        return _fail(
            args.format,
            payload,
            f"p12p23 off reference by {diagnostics['p12p23_delta_vs_reference']:.3e}",
        )
    _emit(payload, args.format)
    return EXIT_OK


def _cmd_ed(args) -> int:
    try:
        spec = ed_mod.ChainSpec(args.L)
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = ed_mod.ground_state(spec)
    rdm2 = result.observables["rdm2"]
    trace_defect = float(abs(np.trace(rdm2) - 1))
    min_eig = float(np.linalg.eigvalsh((rdm2 + rdm2.T) / 2).min())
    results = {
        "energy_per_bond": result.energy_per_bond,
        "ground_energy": result.ground_energy,
        "p12": result.observables["p12"],
        "p12p23": result.observables["p12p23"],
    }
    diagnostics = {
        "method": result.method,
        "iterations": result.iterations,
        "residual_norm": result.residual_norm,
        "degeneracy": result.degeneracy,
        "rdm2_trace_defect": trace_defect,
        "rdm2_min_eigenvalue": min_eig,
    }
    if args.L in ed_mod.REFERENCE_TABLE1:
        ref = ed_mod.REFERENCE_TABLE1[args.L]
        diagnostics["energy_per_bond_delta_vs_reference"] = float(
            result.energy_per_bond - ref[0]
        )
        diagnostics["p12p23_delta_vs_reference"] = float(
            result.observables["p12p23"] - ref[1]
        )
    payload = _payload("ed", {"L": args.L}, results, diagnostics)
    if result.residual_norm > 1e-10:
        return _fail(args.format, payload, f"eigenresidual {result.residual_norm:.3e}")
    if trace_defect > 1e-12 or min_eig < -1e-12:
        return _fail(
            args.format,
            payload,
            f"rdm2 trace defect {trace_defect:.3e}, min eigenvalue {min_eig:.3e}",
        )
    _emit(payload, args.format)
    return EXIT_OK


def _cmd_report_table1(args) -> int:
    rows = []
    for L in (3, 6, 9):
        result = ed_mod.ground_state(ed_mod.ChainSpec(L))
        ref = ed_mod.REFERENCE_TABLE1[L]
        rows.append(
            {
                "length": f"L={L}",
                "omega33": result.energy_per_bond,
                "p12p23": result.observables["p12p23"],
                "omega33_reference": ref[0],
                "p12p23_reference": ref[1],
                "omega33_delta": result.energy_per_bond - ref[0],
                "p12p23_delta": result.observables["p12p23"] - ref[1],
            }
        )
    ts = TwoSiteSolution()
    omega_inf = float(np.real(ts.omega33(0.0)))
    problem = threesite.ThreeSiteProblem(comb_terms=args.comb_terms)
    solution = threesite.three_site_correlator(problem)
    rows.append(
        {
            "length": "thermodynamic",
            "omega33": omega_inf,
            "p12p23": solution.p12p23,
            "omega33_reference": PAPER_REFERENCE_VALUES["omega33_homogeneous"],
            "p12p23_reference": PAPER_REFERENCE_VALUES["p12p23_thermodynamic"],
            "omega33_delta": omega_inf
            - PAPER_REFERENCE_VALUES["omega33_homogeneous"],
            "p12p23_delta": solution.p12p23
            - PAPER_REFERENCE_VALUES["p12p23_thermodynamic"],
        }
    )
    payload = _payload(
        "report-table1",
        {"comb_terms": args.comb_terms},
        {"rows": rows},
        {"three_site_diagnostics": {
            "last_level_shift": solution.diagnostics["last_level_shift"],
        }},
    )
    _emit(payload, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _load_config(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line: {line!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="su3chain",
        description="correlation functions of the integrable SU(3) spin chain",
    )
    parser.add_argument("--config", help="key = value file preloading any option")
    parser.add_argument("--threads", type=int, default=None,
                        help="thread-count hint (results are independent of it)")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--format", choices=("json", "text", "csv"), default="json")

    p = sub.add_parser("verify-algebra", help="run the R-matrix identity suite")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--samples", type=int, default=50)
    common(p)
    p.set_defaults(func=_cmd_verify_algebra)

    p = sub.add_parser("verify-matrices", help="check Gram and difference matrices")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--points", type=int, default=20)
    common(p)
    p.set_defaults(func=_cmd_verify_matrices)

    p = sub.add_parser("two-site", help="closed-form two-site functions")
    p.add_argument("--lambda", dest="lam", type=complex, default=0.0)
    common(p)
    p.set_defaults(func=_cmd_two_site)

    p = sub.add_parser("three-site", help="<P12 P23> from the functional equations")
    p.add_argument("--comb-terms", type=int, default=12500)
    p.add_argument("--levels", type=int, default=3)
    common(p)
    p.set_defaults(func=_cmd_three_site)

    p = sub.add_parser("ed", help="exact diagonalization of a finite chain")
    p.add_argument("--L", type=int, default=6)
    common(p)
    p.set_defaults(func=_cmd_ed)

    p = sub.add_parser("report-table1", help="finite-size comparison table")
    p.add_argument("--comb-terms", type=int, default=12500)
    common(p)
    p.set_defaults(func=_cmd_report_table1)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if args.config:
        try:
            overrides = _load_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        explicit = set()
        raw = argv if argv is not None else sys.argv[1:]
        for token in raw:
            if token.startswith("--"):
                explicit.add(token[2:].split("=", 1)[0].replace("-", "_"))
        for key, val in overrides.items():
            if key in explicit or not hasattr(args, key):
                continue
            current = getattr(args, key)
            caster = type(current) if current is not None else str
            if caster is bool:
                val = val.lower() in ("1", "true", "yes")
                setattr(args, key, val)
            else:
                try:
                    setattr(args, key, caster(val))
                except (TypeError, ValueError):
                    print(f"config error: bad value for {key}: {val!r}", file=sys.stderr)
                    return EXIT_USAGE
    threads = args.threads
    env_threads = os.environ.get("SU3CHAIN_THREADS")
    if threads is None and env_threads is not None:
        try:
            threads = int(env_threads)
        except ValueError:
            print("config error: SU3CHAIN_THREADS must be an integer", file=sys.stderr)
            return EXIT_USAGE
    if threads is not None and threads < 1:
        print("config error: thread count must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
