"""Command-line entry point exposing every module.

Every run prints a machine-readable JSON report to stdout (and optionally
writes it, plus CSV/SVG artifacts, into the output directory).  Exit codes:
0 success, 64 usage error, 65 data error (unreadable or invalid inputs),
70 internal numerical failure.  For `resonance pair` the code encodes the
verdict: 0 found, 1 no relation within bounds, 2 inconclusive.

RESLAB_THREADS (or --threads) caps worker parallelism; computations are
deterministic regardless of its value.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import List, Optional

from . import billiard, constructor, quasiperiodic, resonance, simulate, svg
from .errors import IdentityViolation, NumericalCornerAmbiguity, ReslabError
from .periods import hit_time, quarter_period, sum_a_abar
from .polygon import (
    build_p_e_theta,
    energy_partition,
    load_polygon,
    save_polygon,
    side_parameter_sets,
)
from .potential import (
    is_sp,
    load_potential,
    make_potential,
    save_potential,
)

EX_OK = 0
EX_USAGE = 64
EX_DATA = 65
EX_INTERNAL = 70


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EX_USAGE)


def _floats(text: str) -> List[float]:
    return [float(t) for t in text.split(",") if t.strip() != ""]


def _load_pot(path: str):
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    return load_potential(path)


def _load_poly(path: str):
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    return load_polygon(path)


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=_jsonable)
    print(text)
    if getattr(args, "report", None):
        with open(args.report, "w") as fh:
            fh.write(text + "\n")


def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "__dict__"):
        return {k: v for k, v in vars(obj).items()}
    if isinstance(obj, tuple):
        return list(obj)
    return str(obj)


def _pot_from_args(args, which: str):
    path = getattr(args, which, None)
    if path:
        return _load_pot(path)
    coeffs = _floats(getattr(args, which + "_wcoeffs"))
    m = getattr(args, which + "_m", 2) or 2
    R = getattr(args, which + "_radius")
    return make_potential(m, coeffs, R)


def build_parser() -> _Parser:
    ap = _Parser(prog="reslab")
    ap.add_argument("--out", default=".", help="output directory for artifacts")
    ap.add_argument("--report", default=None, help="also write the JSON report here")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("potential", help="validate and describe a potential")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--wcoeffs", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--save", default=None)

    p = sub.add_parser("periods", help="quarter periods and barrier hit times")
    p.add_argument("--potential", default=None)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--wcoeffs", default=None)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--thetas", required=True)
    p.add_argument("--barrier", type=float, default=None)

    p = sub.add_parser("polygon", help="side sets, partition, or table build")
    p.add_argument("--polygon", required=True)
    p.add_argument("--v1", default=None)
    p.add_argument("--v2", default=None)
    p.add_argument("--e", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--save-table", default=None)

    p = sub.add_parser("billiard", help="saddle connections or orbit tracing")
    p.add_argument("--polygon", required=True)
    p.add_argument("--length-bound", type=float, default=None)
    p.add_argument("--start", default=None, help="x,y interior starting point")
    p.add_argument("--signs", default="1,1")
    p.add_argument("--max-reflections", type=int, default=1000)

    p = sub.add_parser("resonance", help="pair verdict / scan / trichotomy")
    p.add_argument("mode", choices=("pair", "scan", "trichotomy"))
    p.add_argument("--polygon", required=True)
    p.add_argument("--v1", required=True)
    p.add_argument("--v2", required=True)
    p.add_argument("--e", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--e-grid", default=None)
    p.add_argument("--grid-size", type=int, default=21)
    p.add_argument("--length-bound", type=float, default=None)
    p.add_argument("--relation-bound", type=int, default=10)

    p = sub.add_parser("qp", help="averaging-operator kernels and obstructions")
    p.add_argument("mode", choices=("rho", "agamma", "obstruction"))
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--thetas", default=None)
    p.add_argument("--coeffs", default=None, help="Fourier-data JSON file")
    p.add_argument("--side", choices=("pos", "neg"), default="pos")

    p = sub.add_parser("construct", help="build resonant pairs")
    p.add_argument("mode", choices=("even", "noneven", "self", "tune"))
    p.add_argument("--pcoeffs", default=None)
    p.add_argument("--scoeffs", default=None)
    p.add_argument("--e", type=float, default=None)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--auto-d", action="store_true")
    p.add_argument("--d1", type=float, default=0.0)
    p.add_argument("--d1-bar", type=float, default=0.0)
    p.add_argument("--v1", default=None)
    p.add_argument("--v2", default=None)
    p.add_argument("--ratio", type=float, default=None)
    p.add_argument("--prefix", default="pair")

    p = sub.add_parser("simulate", help="integrate the reflected flow")
    p.add_argument("mode", choices=("run", "conjugacy"))
    p.add_argument("--polygon", required=True)
    p.add_argument("--v1", required=True)
    p.add_argument("--v2", required=True)
    p.add_argument("--state", required=True, help="x,y,px,py")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("render", help="deterministic SVG of a polygon/orbit")
    p.add_argument("--polygon", required=True)
    p.add_argument("--orbit", default=None, help="CSV file of x,y samples")
    p.add_argument("--mark-corners", action="store_true")
    p.add_argument("--svg", required=True)

    return ap


def _cmd_potential(args) -> dict:
    pot = make_potential(args.m, _floats(args.wcoeffs), args.radius)
    cert = is_sp(pot)
    if args.save:
        save_potential(pot, args.save)
    return {
        "m": pot.m,
        "w_coeffs": list(pot.w_coeffs),
        "radius": pot.domain_bound,
        "is_sp": cert.is_sp,
        "offending_degrees": list(cert.offending_degrees),
        "saved": args.save,
    }


def _cmd_periods(args) -> dict:
    if args.potential:
        pot = _load_pot(args.potential)
    else:
        if args.wcoeffs is None or args.radius is None:
            raise ValueError("need --potential or --wcoeffs/--radius")
        pot = make_potential(args.m, _floats(args.wcoeffs), args.radius)
    rows = []
    for theta in _floats(args.thetas):
        if args.barrier is not None:
            val = hit_time(pot, args.barrier, theta)
        else:
            val = quarter_period(pot, theta)
        rows.append({"theta": theta, "value": val})
    rep = {"barrier": args.barrier, "values": rows}
    if args.format == "csv":
        path = os.path.join(args.out, "periods.csv")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "value"])
            for r in rows:
                w.writerow([r["theta"], r["value"]])
        rep["csv"] = path
    return rep


def _cmd_polygon(args) -> dict:
    P = _load_poly(args.polygon)
    sets = side_parameter_sets(P)
    rep = {
        "area": float(P.area()),
        "x_plus": [float(v) for v in sets.x_plus],
        "x_minus": [float(v) for v in sets.x_minus],
        "y_plus": [float(v) for v in sets.y_plus],
        "y_minus": [float(v) for v in sets.y_minus],
    }
    if args.v1 and args.v2 and args.e is not None:
        V1, V2 = _load_pot(args.v1), _load_pot(args.v2)
        part = energy_partition(P, V1, V2, args.e)
        rep["breakpoints"] = [float(b) for b in part.breakpoints]
        if args.theta is not None:
            table = build_p_e_theta(P, V1, V2, args.e, args.theta)
            rep["table_loops"] = table.polygon.to_json()["loops"]
            rep["tags"] = [list(t) for t in table.tags]
            rep["marginal_params"] = table.marginal_params
            if args.save_table:
                save_polygon(table.polygon, args.save_table)
                rep["saved_table"] = args.save_table
    return rep


def _cmd_billiard(args) -> dict:
    P = _load_poly(args.polygon)
    if args.start:
        x, y = _floats(args.start)
        s1, s2 = (int(v) for v in args.signs.split(","))
        traj = billiard.trace(P, (x, y), (s1, s2),
                              max_reflections=args.max_reflections)
        return {
            "points": [[float(a), float(b)] for a, b in traj.points],
            "total_t": float(traj.total_t),
            "terminated": traj.terminated,
            "crossing_counts": {str(k): v for k, v in traj.counts.items()},
        }
    bound = args.length_bound or 10.0 * P.diameter()
    scs = billiard.find_saddle_connections(P, bound)
    return {
        "length_bound": bound,
        "count": len(scs),
        "connections": [
            {
                "start": [float(v) for v in sc.start_vertex],
                "end": [float(v) for v in sc.end_vertex],
                "tau": float(sc.tau),
                "direction": float(sc.direction),
                "residual": abs(sc.residual),
            }
            for sc in scs
        ],
    }


def _cmd_resonance(args) -> tuple:
    P = _load_poly(args.polygon)
    V1, V2 = _load_pot(args.v1), _load_pot(args.v2)
    if args.mode == "pair":
        if args.e is None or args.theta is None:
            raise ValueError("pair mode needs --e and --theta")
        v = resonance.is_resonant_pair(
            P, V1, V2, args.e, args.theta,
            length_bound=args.length_bound, M=args.relation_bound,
        )
        code = {
            resonance.RESONANT_FOUND: 0,
            resonance.CERTIFIED_NON_RESONANT: 1,
            resonance.NO_RELATION_WITHIN_BOUNDS: 1,
            resonance.INCONCLUSIVE: 2,
        }[v.status]
        return {"status": v.status, "E": v.E, "theta": v.theta}, code
    if args.mode == "scan":
        if args.e is None:
            raise ValueError("scan mode needs --e")
        grid = [args.e * (k + 0.5) / args.grid_size for k in range(args.grid_size)]
        rep = resonance.scan_energy(
            P, V1, V2, args.e, grid,
            length_bound=args.length_bound, M=args.relation_bound,
        )
        return {
            "E": rep.E,
            "candidate": rep.candidate,
            "fractions": [
                {"interval": [lo, hi], "fraction": f, "points": n}
                for (lo, hi), f, n in rep.interval_fractions
            ],
        }, EX_OK
    e_grid = _floats(args.e_grid) if args.e_grid else [0.5, 1.0, 1.5, 2.0]
    rep = resonance.classify_trichotomy(
        V1, V2, P, e_grid, theta_grid_size=args.grid_size,
        length_bound=args.length_bound, M=args.relation_bound,
    )
    return {
        "status": rep.status,
        "candidate_levels": list(rep.candidate_levels),
        "sp1": rep.sp1,
        "sp2": rep.sp2,
        "warnings": list(rep.warnings),
    }, EX_OK


def _cmd_qp(args) -> dict:
    if args.mode == "rho":
        thetas = _floats(args.thetas) if args.thetas else [1.0]
        vals = [quasiperiodic.rho_xik(args.xi, args.k, t) for t in thetas]
        return {
            "xi": args.xi,
            "k": args.k,
            "values": [{"theta": t, "re": v.real, "im": v.imag}
                       for t, v in zip(thetas, vals)],
        }
    if args.mode == "agamma":
        thetas = _floats(args.thetas) if args.thetas else [0.5, 1.0, 2.0]
        err = quasiperiodic.check_agamma(args.xi, args.k, thetas)
        return {"xi": args.xi, "k": args.k, "max_error": err}
    if not args.coeffs:
        raise ValueError("obstruction mode needs --coeffs")
    with open(args.coeffs) as fh:
        data = quasiperiodic.FourierData.from_json(fh.read())
    if args.side == "neg":
        return {"side": "neg", "value": quasiperiodic.positivity_obstruction_neg(data)}
    rep = quasiperiodic.positivity_obstruction_pos(data)
    return {
        "side": "pos",
        "min_value": rep.value,
        "argmin": rep.argmin,
        "obstructed": rep.obstructed,
        "diagnosis": rep.diagnosis,
    }


def _cmd_construct(args) -> dict:
    if args.mode == "tune":
        if args.v1 is None or args.v2 is None or args.ratio is None:
            raise ValueError("tune mode needs --v1, --v2, --ratio")
        A, B = _load_pot(args.v1), _load_pot(args.v2)
        A2, B2 = constructor.tune_irrational_ratio(A, B, args.ratio)
        p1 = os.path.join(args.out, f"{args.prefix}_v1.json")
        p2 = os.path.join(args.out, f"{args.prefix}_v2.json")
        save_potential(A2, p1)
        save_potential(B2, p2)
        return {"v1": p1, "v2": p2, "ratio": args.ratio}
    if args.e is None:
        raise ValueError("construct needs --e")
    if args.mode == "even":
        if args.pcoeffs is None:
            raise ValueError("even mode needs --pcoeffs")
        rec = constructor.build_even_pair(
            _floats(args.pcoeffs), args.e, d=args.d,
            auto_raise=args.auto_d or args.d == 0.0,
        )
    elif args.mode == "noneven":
        if args.pcoeffs is None:
            raise ValueError("noneven mode needs --pcoeffs")
        rec = constructor.build_noneven_pair(
            _floats(args.pcoeffs), args.e, d1=args.d1, d1_bar=args.d1_bar,
            d=args.d,
        )
    else:
        if args.scoeffs is None:
            raise ValueError("self mode needs --scoeffs")
        rec = constructor.build_self_paired(_floats(args.scoeffs), args.e,
                                            d=args.d)
    p1 = os.path.join(args.out, f"{args.prefix}_v1.json")
    p2 = os.path.join(args.out, f"{args.prefix}_v2.json")
    save_potential(rec.V1, p1)
    save_potential(rec.V2, p2)
    return {
        "v1": p1,
        "v2": p2,
        "E": rec.E,
        "offset": rec.offset,
        "quarter_match_residual": rec.quarter_match_residual,
        "sum_match_residual": rec.sum_match_residual,
    }


def _cmd_simulate(args) -> dict:
    P = _load_poly(args.polygon)
    V1, V2 = _load_pot(args.v1), _load_pot(args.v2)
    state0 = _floats(args.state)
    if len(state0) != 4:
        raise ValueError("--state must be x,y,px,py")
    if args.mode == "conjugacy":
        res = simulate.conjugacy_residual(P, V1, V2, state0, args.t_end,
                                          n_samples=args.samples)
        return {"conjugacy_residual": res}
    osc = simulate.integrate(P, V1, V2, state0, args.t_end)
    rows = []
    for i in range(args.samples):
        t = args.t_end * i / max(args.samples - 1, 1)
        x, y, px, py = osc(t)
        rows.append([t, x, y, px, py])
    rep = {
        "energy": osc.energy,
        "max_drift": osc.max_drift,
        "reflections": len(osc.times),
        "final_state": list(osc.final_state),
    }
    path = os.path.join(args.out, "orbit.csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "y", "px", "py"])
        w.writerows(rows)
    rep["csv"] = path
    return rep


def _cmd_render(args) -> dict:
    P = _load_poly(args.polygon)
    orbits = []
    if args.orbit:
        with open(args.orbit) as fh:
            r = csv.reader(fh)
            header = next(r)
            ix, iy = header.index("x"), header.index("y")
            orbits.append([(float(row[ix]), float(row[iy])) for row in r])
    marked = []
    if args.mark_corners:
        for loop, labels in zip(P.loops, P.corner_types()):
            for v, lab in zip(loop, labels):
                if lab == "concave":
                    marked.append((float(v[0]), float(v[1])))
    doc = svg.render_svg(P, orbits, marked)
    with open(args.svg, "w") as fh:
        fh.write(doc)
    return {"svg": args.svg, "orbits": len(orbits), "marked": len(marked)}


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EX_USAGE
    if args.threads is None:
        args.threads = int(os.environ.get("RESLAB_THREADS", "1"))
    os.makedirs(args.out, exist_ok=True)
    code = EX_OK
    try:
        if args.cmd == "potential":
            rep = _cmd_potential(args)
        elif args.cmd == "periods":
            rep = _cmd_periods(args)
        elif args.cmd == "polygon":
            rep = _cmd_polygon(args)
        elif args.cmd == "billiard":
            rep = _cmd_billiard(args)
        elif args.cmd == "resonance":
            rep, code = _cmd_resonance(args)
        elif args.cmd == "qp":
            rep = _cmd_qp(args)
        elif args.cmd == "construct":
            rep = _cmd_construct(args)
        elif args.cmd == "simulate":
            rep = _cmd_simulate(args)
        else:
            rep = _cmd_render(args)
    except (IdentityViolation, NumericalCornerAmbiguity, ArithmeticError) as e:
        _emit({"error": type(e).__name__, "message": str(e)}, args)
        return EX_INTERNAL
    except (FileNotFoundError, ValueError, KeyError, json.JSONDecodeError,
            ReslabError) as e:
        _emit({"error": type(e).__name__, "message": str(e)}, args)
        return EX_DATA
    rep["threads"] = args.threads
    _emit(rep, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
