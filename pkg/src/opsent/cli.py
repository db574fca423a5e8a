"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 degenerate kinematics.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import measures
from .kinematics import (
    Infeasible,
    OutOfRange,
    classify_region,
    cos_angle_from_energies,
    energy_fractions,
    is_feasible,
)
from .luopt import OptimizerConfig, StateKind, angle_grid, optimize, sweep
from .qops import check_density_matrix, ghz_state, pauli_expectation, projector, w_state
from .states import DecayAngles, DegenerateKinematics, mixed_state, pure_state
from .table import COLUMNS, LABELS, reproduce_table
from .witnesses import PAULI_XY, element_from_pauli, witness_function, witness_name

EXIT_USAGE = 2
EXIT_DEGENERATE = 3

CSV_HEADER = ["theta_ab", "theta_bc", "region", "witness", "raw", "optimized", "degenerate"]


def _g12(x: float) -> str:
    return format(x, ".12g")


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def _emit_json(obj, path):
    with _output(path) as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _emit_csv(header, rows, path):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    with _output(path) as fh:
        fh.write(buf.getvalue())


def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _decay_angles(args) -> DecayAngles:
    return DecayAngles(_angle(args, args.theta_ab), _angle(args, args.theta_bc))


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(restarts=args.restarts, seed=args.seed, local_iterations=args.iterations, hops=args.hops)


def _witness_list(text: str) -> list[str]:
    if text.lower() == "all":
        return list(COLUMNS)
    return [witness_name(w) for w in text.split(",")]


def _complex_list(z):
    return {"re": [float(v) for v in np.real(z).ravel()], "im": [float(v) for v in np.imag(z).ravel()]}


def _build_rho(args):
    """Density matrix selected by --preset, or the decay state from the angle flags."""
    preset = getattr(args, "preset", None)
    if preset == "ghz":
        return projector(ghz_state()), {"preset": "ghz"}
    if preset == "w":
        return projector(w_state()), {"preset": "w"}
    ang = _decay_angles(args)
    phi = _angle(args, args.phi)
    meta = {"theta_ab": ang.theta_ab, "theta_bc": ang.theta_bc, "phi": phi}
    if args.mixed:
        meta.update(kind="mixed", p=args.p)
        return mixed_state(ang, phi, args.p), meta
    meta.update(kind="pure", s=args.s)
    return projector(pure_state(ang, args.s, phi)), meta


def cmd_state(args):
    ang = _decay_angles(args)
    phi = _angle(args, args.phi)
    labels = [format(i, "03b") for i in range(8)]
    if args.mixed:
        rho = check_density_matrix(mixed_state(ang, phi, args.p))
        if args.format == "csv":
            rows = [[i, j, repr(rho[i, j].real), repr(rho[i, j].imag)] for i in range(8) for j in range(8)]
            _emit_csv(["row", "col", "re", "im"], rows, args.out)
            return 0
        out = {
            "kind": "mixed",
            "theta_ab": ang.theta_ab,
            "theta_bc": ang.theta_bc,
            "phi": phi,
            "p": args.p,
            "basis": labels,
            "matrix": {
                "re": [[float(v) for v in row] for row in rho.real],
                "im": [[float(v) for v in row] for row in rho.imag],
            },
        }
    else:
        psi = pure_state(ang, args.s, phi)
        check_density_matrix(projector(psi))
        if args.format == "csv":
            rows = [[i, labels[i], repr(psi[i].real), repr(psi[i].imag)] for i in range(8)]
            _emit_csv(["index", "label", "re", "im"], rows, args.out)
            return 0
        out = {
            "kind": "pure",
            "theta_ab": ang.theta_ab,
            "theta_bc": ang.theta_bc,
            "phi": phi,
            "s": args.s,
            "basis": labels,
            "amplitudes": _complex_list(psi),
        }
    _emit_json(out, args.out)
    return 0


def cmd_witness(args):
    rho, meta = _build_rho(args)
    check_density_matrix(rho)
    cfg = _config(args)
    reports = []
    for name in _witness_list(args.witness):
        if args.no_optimize:
            raw = float(witness_function(name)(rho))
            reports.append({"witness": name, "raw_value": raw})
        else:
            reports.append(optimize(rho, name, cfg).to_dict())
    expectations = {s: pauli_expectation(rho, s) for s in PAULI_XY}
    elem = element_from_pauli(expectations)
    out = {
        "state": meta,
        "reports": reports,
        "element_000_111": {"direct": [float(rho[0, 7].real), float(rho[0, 7].imag)],
                            "from_pauli": [elem.real, elem.imag]},
        "pauli_expectations": expectations,
    }
    if args.format == "csv":
        rows = [[r["witness"], repr(r["raw_value"]), repr(r.get("optimized_value", r["raw_value"]))] for r in reports]
        _emit_csv(["witness", "raw", "optimized"], rows, args.out)
        return 0
    _emit_json(out, args.out)
    return 0


def cmd_measures(args):
    if args.preset == "ghz":
        psi, meta = ghz_state(), {"preset": "ghz"}
    elif args.preset == "w":
        psi, meta = w_state(), {"preset": "w"}
    else:
        ang = _decay_angles(args)
        psi = pure_state(ang, 0, 0.0)
        meta = {"theta_ab": ang.theta_ab, "theta_bc": ang.theta_bc, "region": classify_region(ang)}
    check_density_matrix(projector(psi))
    reports = [measures.monogamy_gap(psi, p).to_dict() for p in "abc"]
    out = {
        "state": meta,
        "monogamy": reports,
        "concurrence": {
            "ab": measures.pair_concurrence(psi, "a", "b"),
            "ac": measures.pair_concurrence(psi, "a", "c"),
            "bc": measures.pair_concurrence(psi, "b", "c"),
        },
    }
    if args.format == "csv":
        rows = [[r["pivot"], repr(r["tangle"]), repr(r["c_sq_1"]), repr(r["c_sq_2"]), repr(r["gap"])] for r in reports]
        _emit_csv(["pivot", "tangle", "c_sq_1", "c_sq_2", "gap"], rows, args.out)
        return 0
    _emit_json(out, args.out)
    return 0


def _kinematics_record(ang: DecayAngles) -> dict:
    rec = {
        "theta_ab": ang.theta_ab,
        "theta_bc": ang.theta_bc,
        "theta_ca": ang.theta_ca,
        "region": classify_region(ang),
        "feasible": is_feasible(ang),
    }
    try:
        w = energy_fractions(ang)
    except Infeasible:
        return rec
    rec["energy_fractions"] = list(w.as_tuple())
    rec["max_energy_fraction"] = w.max()
    try:
        rec["cos_theta_ab_from_energies"] = cos_angle_from_energies(w.wa, w.wb)
    except OutOfRange:
        pass
    return rec


def cmd_kinematics(args):
    if args.grid is None:
        _emit_json(_kinematics_record(_decay_angles(args)), args.out)
        return 0
    rows = []
    for ang in angle_grid(args.grid):
        rec = _kinematics_record(ang)
        mx = rec.get("max_energy_fraction")
        rows.append([_g12(ang.theta_ab), _g12(ang.theta_bc), rec["region"], "" if mx is None else _g12(mx)])
    if args.format == "json":
        _emit_json([dict(zip(["theta_ab", "theta_bc", "region", "max_energy"], r)) for r in rows], args.out)
    else:
        _emit_csv(["theta_ab", "theta_bc", "region", "max_energy"], rows, args.out)
    return 0


def _sweep_records(args):
    grid = angle_grid(args.grid)
    if args.quantity == "max-energy":
        for ang in grid:
            region = classify_region(ang)
            try:
                v = energy_fractions(ang).max()
            except Infeasible:
                yield (ang, region, "max-energy", None, None)
                continue
            yield (ang, region, "max-energy", v, v)
        return
    if args.quantity == "gap":
        for ang in grid:
            region = classify_region(ang)
            try:
                psi = pure_state(ang)
            except DegenerateKinematics:
                yield (ang, region, "gap", None, None)
                continue
            v = measures.monogamy_gap(psi, "a").gap
            yield (ang, region, "gap", v, v)
        return
    if args.witness is None:
        raise ValueError("sweep: --witness is required for --quantity witness")
    mixed = args.mixed or args.state == "mixed"
    kind = StateKind("mixed" if mixed else "pure", s=args.s, phi_plane=_angle(args, args.phi), p=args.p)
    for ang in grid:
        try:
            check_density_matrix(kind.build(ang))
        except DegenerateKinematics:
            pass
    results = {w: sweep(grid, kind, w, _config(args)) for w in _witness_list(args.witness)}
    for i, ang in enumerate(grid):
        for w, pts in results.items():
            pt = pts[i]
            if pt.degenerate:
                yield (ang, pt.region, w, None, None)
            else:
                yield (ang, pt.region, w, pt.report.raw_value, pt.report.optimized_value)


def cmd_sweep(args):
    if args.grid < 2:
        print("sweep: --grid must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    records = list(_sweep_records(args))
    if args.format == "json":
        out = [
            {
                "theta_ab": a.theta_ab,
                "theta_bc": a.theta_bc,
                "region": region,
                "witness": w,
                "raw": raw,
                "optimized": opt,
                "degenerate": raw is None,
            }
            for a, region, w, raw, opt in records
        ]
        _emit_json(out, args.out)
        return 0
    rows = [
        [
            _g12(a.theta_ab),
            _g12(a.theta_bc),
            region,
            w,
            "" if raw is None else _g12(raw),
            "" if opt is None else _g12(opt),
            "true" if raw is None else "false",
        ]
        for a, region, w, raw, opt in records
    ]
    _emit_csv(CSV_HEADER, rows, args.out)
    return 0


def cmd_table(args):
    res = reproduce_table(_config(args), grid=args.grid, screen_restarts=args.screen_restarts, refine=args.refine)
    if args.format == "json":
        out = [
            {
                "row": c.row,
                "state": LABELS[c.row],
                "witness": c.witness,
                "computed": c.computed,
                "reference": c.reference,
                "abs_diff": c.abs_diff,
                "angles": None if c.angles is None else list(c.angles),
            }
            for c in res.cells
        ]
        _emit_json(out, args.out)
        return 0
    if args.format == "csv":
        rows = [
            [c.row, c.witness, _g12(c.computed), _g12(c.reference), _g12(c.abs_diff),
             "" if c.angles is None else _g12(c.angles[0]), "" if c.angles is None else _g12(c.angles[1])]
            for c in res.cells
        ]
        _emit_csv(["row", "witness", "computed", "reference", "abs_diff", "theta_ab", "theta_bc"], rows, args.out)
        return 0
    lines = [f"{'state':34s} {'witness':>7s} {'computed':>9s} {'ref':>7s} {'|diff|':>8s}"]
    for c in res.cells:
        where = "" if c.angles is None else f"  at ({c.angles[0] / np.pi:.4g} pi, {c.angles[1] / np.pi:.4g} pi)"
        lines.append(f"{LABELS[c.row]:34s} {'Q_' + c.witness:>7s} {c.computed:9.4f} {c.reference:7.3f} {c.abs_diff:8.4f}{where}")
    with _output(args.out) as fh:
        fh.write("\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opsent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    angles = argparse.ArgumentParser(add_help=False)
    angles.add_argument("--theta-ab", type=float, default=2 * math.pi / 3)
    angles.add_argument("--theta-bc", type=float, default=2 * math.pi / 3)
    angles.add_argument("--degrees", action="store_true", help="angle flags are in degrees")

    spin = argparse.ArgumentParser(add_help=False)
    spin.add_argument("--phi", type=float, default=0.0, help="angle between spin axis and decay plane")
    spin.add_argument("--s", type=int, choices=(-1, 0, 1), default=0)
    spin.add_argument("--mixed", action="store_true", help="equal spin mixture instead of a pure state")
    spin.add_argument("--p", type=_unit_interval, default=1 / 3, help="weight of s=0 in the mixture")

    opt = argparse.ArgumentParser(add_help=False)
    opt.add_argument("--restarts", type=_positive_int, default=200)
    opt.add_argument("--iterations", type=_positive_int, default=500, help="Nelder-Mead iterations per descent")
    opt.add_argument("--seed", type=int, default=0)
    opt.add_argument("--hops", type=_non_negative_int, default=4, help="perturb-and-descend hops per restart")

    def output(fmt_choices, default):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--format", choices=fmt_choices, default=default)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        return p

    p = sub.add_parser("state", parents=[angles, spin, output(("json", "csv"), "json")], help="print a decay state")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser(
        "witness", parents=[angles, spin, opt, output(("json", "csv"), "json")], help="optimise witnesses for one state"
    )
    p.add_argument("--witness", default="all", help="qsep, qghz, qw, a comma list, or all")
    p.add_argument("--preset", choices=("ghz", "w"), default=None)
    p.add_argument("--no-optimize", action="store_true")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("measures", parents=[angles, output(("json", "csv"), "json")], help="concurrences and tangles")
    p.add_argument("--preset", choices=("ghz", "w"), default=None)
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("kinematics", parents=[angles, output(("json", "csv"), "csv")], help="energies and region")
    p.add_argument("--grid", type=int, default=None, help="classify an N x N grid instead of one point")
    p.set_defaults(func=cmd_kinematics)

    p = sub.add_parser("sweep", parents=[spin, opt, output(("csv", "json"), "csv")], help="grid sweep")
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--witness", default=None, help="qsep, qghz, qw, a comma list, or all")
    p.add_argument("--state", choices=("pure", "mixed"), default="pure")
    p.add_argument("--quantity", choices=("witness", "max-energy", "gap"), default="witness")
    p.add_argument("--degrees", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table", parents=[opt, output(("text", "csv", "json"), "text")], help="reference table")
    p.add_argument("--grid", type=int, default=32, help="angle grid for the pure-state maxima")
    p.add_argument("--screen-restarts", type=_positive_int, default=16)
    p.add_argument("--refine", type=_positive_int, default=6)
    p.set_defaults(func=cmd_table)
    return parser


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _non_negative_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _unit_interval(text):
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a value in [0, 1], got {text}")
    return v


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegenerateKinematics as exc:
        print(f"opsent: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, KeyError) as exc:
        print(f"opsent: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
