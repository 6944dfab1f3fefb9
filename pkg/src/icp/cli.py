"""Command line entry point.

Exit status: 0 success, 1 validation failure (diagnostics as JSON lines on
stderr), 2 usage or I/O error.  stdout only carries requested artifacts.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import io
from .errors import IcpError, SchemaError, UsageError

log = logging.getLogger("icp")


class JsonLines(logging.Formatter):
    def format(self, record):
        d = {"level": record.levelname.lower(), "logger": record.name, "msg": record.getMessage()}
        d.update(getattr(record, "extra_fields", {}))
        return json.dumps(d, sort_keys=True)


def _setup_logging():
    level = os.environ.get("ICP_LOG", "WARNING").upper()
    h = logging.StreamHandler(sys.stderr)
    h.setFormatter(JsonLines())
    root = logging.getLogger("icp")
    root.handlers[:] = [h]
    root.setLevel(getattr(logging, level, logging.WARNING))
    root.propagate = False


def diag(kind: str, **fields):
    """One machine-readable diagnostic line on stderr."""
    d = {"level": "error", "error": kind}
    d.update(fields)
    sys.stderr.write(json.dumps(d, sort_keys=True, default=str) + "\n")


class Failed(Exception):
    """Validation failure already reported on stderr."""


def _emit(text: str, out=None):
    if out:
        io.write_text(out, text)
    else:
        sys.stdout.write(text)


def _csv(rows, header) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([io.fmt(x) if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _ids(s: str):
    try:
        return {int(x) for x in s.split(",") if x.strip()}
    except ValueError as exc:
        raise UsageError(f"bad vertex list {s!r}") from exc


def _load_complex(path):
    c, a = io.complex_from_dict(io.read_json(path))
    return c, a


def _need_angles(a, path):
    if a is None:
        raise SchemaError(f"{path}: no theta field")
    return a


def _load_state(path, complex_path=None):
    st, c, a = io.state_from_dict(io.read_json(path))
    if complex_path:
        c, a = _load_complex(complex_path)
    if c is None:
        raise SchemaError(f"{path}: state has no complex; pass --complex")
    return st, c, _need_angles(a, path)


def _generator(label: str):
    from .complex import Deg7Generator, KeyexampleGenerator, SquareLatticeGenerator

    name = label.lower()
    if name in ("square", "lattice"):
        return SquareLatticeGenerator()
    if name in ("deg7", "triangulated_deg7"):
        return Deg7Generator()
    if name == "keyexample":
        return KeyexampleGenerator()
    raise UsageError(f"unknown generator {label!r}; use square, deg7 or keyexample")


# -- commands --------------------------------------------------------------------


def cmd_complex(args):
    if args.action == "validate":
        c, a = _load_complex(args.file)
        if a is not None:
            a.check_defined_on(c)
        info = {
            "vertices": len(c.vertices),
            "edges": len(c.edges),
            "faces": len(c.faces),
            "boundary_vertices": len(c.boundary_vertices),
            "euler_characteristic": len(c.vertices) - len(c.edges) + len(c.faces),
            "max_degree": c.max_degree(),
            "has_angles": a is not None,
        }
        _emit(io.dumps(info) + "\n")
        return
    from .complex import generate_keyexample, generate_lattice

    if args.kind == "keyexample":
        c, a = generate_keyexample(args.size)
    else:
        c, a = generate_lattice(args.kind, args.size)
    _emit(io.dumps(io.complex_dict(c, a)) + "\n", args.output)


def cmd_check(args):
    from .conditions import check_conditions

    c, a = _load_complex(args.file)
    a = _need_angles(a, args.file)
    rep = check_conditions(c, a, tol=args.tol)
    cyc = rep.min_nonfacial_cycle
    bad = False
    for i, r in rep.c1_residuals.items():
        if abs(r) > args.tol:
            diag("FaceConditionViolated", face=i, vertices=list(c.faces[i]), residual=r)
            bad = True
    need = args.c2plus if args.c2plus is not None else 0.0
    if rep.c2_margin is not None and not rep.c2_margin > need:
        diag("CycleConditionViolated", cycle=cyc[1], weight=cyc[0], margin=rep.c2_margin, required=need)
        bad = True
    if args.report == "csv":
        text = _csv([(i, r) for i, r in sorted(rep.c1_residuals.items())], ["face_id", "residual"])
        if cyc is not None:
            text += _csv([(" ".join(map(str, cyc[1])), cyc[0], rep.c2_margin)], ["cycle", "weight", "margin"])
    else:
        text = io.dumps({
            "face_condition": rep.c1_passed,
            "worst_face_residual": max((abs(r) for r in rep.c1_residuals.values()), default=0.0),
            "cycle_condition": rep.c2_passed,
            "min_nonfacial_cycle": None if cyc is None else {"weight": cyc[0], "cycle": cyc[1]},
            "margin": rep.c2_margin,
            "face_degree_bound": rep.face_degree_bound,
            "notes": rep.notes,
        }) + "\n"
    _emit(text, args.output)
    if bad:
        raise Failed


def _boundary_arg(value, c):
    try:
        r = float(value)
    except ValueError:
        return io.radii_from_dict(io.read_json(value))
    if not r > 0 or math.isinf(r):
        raise UsageError("boundary radius must be positive")
    return r


def cmd_solve(args):
    from .solver import solve_dirichlet

    c, a = _load_complex(args.file)
    a = _need_angles(a, args.file)
    br = _boundary_arg(args.boundary_r, c)
    target = None
    if args.target:
        raw = io.read_json(args.target)
        target = {int(k): float(x) for k, x in raw.get("k", raw).items() if k != "format"}
    st, rep = solve_dirichlet(c, a, br, target, args.background, tol=args.tol)
    _emit(io.dumps(io.state_dict(st, c, a, rep)) + "\n", args.output)


def cmd_layout(args):
    from .layout import audit_pattern, check_embedding, develop, export_svg, lift_to_polyhedron

    st, c, a = _load_state(args.state, args.complex)
    p = develop(c, a, st)
    emb = check_embedding(p)
    aud = audit_pattern(p)
    summary = {
        "background": p.background,
        "holonomy_residual": p.holonomy_residual,
        "embedded": emb.embedded,
        "violations": len(emb.violations),
        "angle_error": aud.angle_error,
        "concurrency_spread": aud.concurrency_spread,
    }
    if args.svg:
        export_svg(p, args.svg)
    if args.lift or args.dihedral_report:
        lift = lift_to_polyhedron(p)
        summary["max_dihedral_error"] = lift.max_dihedral_error
        summary["stereographic_roundtrip_error"] = lift.roundtrip_error
        if args.lift:
            lift.to_obj(args.lift)
        if args.dihedral_report:
            rows = [(f"{e[0]}-{e[1]}", a[e], lift.dihedral[e], abs(lift.dihedral[e] - a[e])) for e in sorted(lift.dihedral)]
            io.write_text(args.dihedral_report, _csv(rows, ["edge", "theta", "dihedral", "error"]))
    _emit(io.dumps(summary) + "\n")
    if not emb.embedded:
        diag("NotEmbedded", violations=len(emb.violations))
        raise Failed


def cmd_vel(args):
    from .vel import mod_vel

    g = io.graph_from_dict(io.read_json(args.graph))
    r = mod_vel(g, _ids(args.src), _ids(args.dst), tol=args.tol, method=args.method)
    out = {
        "mod": r.mod_value,
        "vel": r.vel_value,
        "gap": r.gap,
        "method": r.method,
        "metric": {str(v): x for v, x in r.metric.items() if x > 0},
    }
    _emit(io.dumps(out) + "\n", args.output)


def cmd_type(args):
    from .vel import type_detect

    gen = _generator(args.gen)
    ev = type_detect(gen, None, range(2, args.levels + 1), args.walks, args.seed, args.budget)
    if args.report == "csv":
        rows = zip(ev.levels, ev.vel, ev.escape_mc, ev.escape_se, ev.escape_exact)
        text = _csv(rows, ["level", "vel", "escape_mc", "escape_se", "escape_exact"])
        text += f"# verdict {ev.verdict} (vel {ev.vel_signal}, escape {ev.escape_signal}); seed {ev.seed}; {ev.note}\n"
    else:
        text = io.dumps({
            "verdict": ev.verdict,
            "levels": ev.levels,
            "vel": ev.vel,
            "vel_fit": None if ev.vel_fit is None else {"a": ev.vel_fit[0], "c": ev.vel_fit[1], "r2": ev.vel_fit[2]},
            "vel_signal": ev.vel_signal,
            "escape_mc": ev.escape_mc,
            "escape_se": ev.escape_se,
            "escape_exact": ev.escape_exact,
            "escape_signal": ev.escape_signal,
            "mc_consistent": ev.mc_consistent,
            "seed": ev.seed,
            "note": ev.note,
        }) + "\n"
    _emit(text, args.output)


def cmd_rigidity(args):
    from .rigidity import rigidity_diagnostic

    sa, c, a = _load_state(args.state_a, args.complex)
    sb, cb, _ = _load_state(args.state_b, args.complex)
    rep = rigidity_diagnostic(c, a, sa, sb)
    _emit(io.dumps({
        "ratio_sup": rep.ratio_sup,
        "ratio_inf": rep.ratio_inf,
        "argmax": rep.argmax,
        "argmin": rep.argmin,
        "harmonic_residual": rep.harmonic_residual,
        "weight_sums_max": rep.weight_sums_max,
        "derivative_constant": rep.derivative_constant,
        "weight_bound_holds": rep.weight_bound_holds,
        "similar": rep.similar,
    }) + "\n")


def cmd_ring(args):
    from .layout import develop
    from .rigidity import ring_statistics

    st, c, a = _load_state(args.state, args.complex)
    eps = None if args.epsilon == "auto" else float(args.epsilon)
    rs = ring_statistics(develop(c, a, st), eps)
    _emit(io.dumps({
        "min_ratio": rs.min_ratio,
        "witness": list(rs.witness),
        "depth": rs.depth,
        "deep_vertices": rs.deep_vertices,
        "epsilon": rs.epsilon,
        "separation_radius": rs.separation_radius,
    }) + "\n")


def keyexample_rows(level: int):
    from .complex import KeyexampleGenerator
    from .conditions import check_c1

    gen = KeyexampleGenerator(max_level=level)
    rows = []
    for i in range(level + 1):
        c, a = gen.level(i)
        cyc = c.boundary_cycle()
        n = len(cyc)
        bsum = math.fsum(math.pi - a[(cyc[k], cyc[(k + 1) % n])] for k in range(n)) - 2 * math.pi
        rows.append((
            i, gen.deltas[i], gen.epsilon(i), n, bsum, check_c1(c, a).worst, a.sup,
            min(c.degree(v) for v in gen.ring(i - 1)) if i else 0,
            len(c.vertices),
        ))
    return rows


def cmd_keyexample(args):
    rows = keyexample_rows(args.level)
    header = ["level", "delta", "epsilon", "boundary_edges", "boundary_sum", "face_residual", "max_theta",
              "min_previous_ring_degree", "vertices"]
    if args.report == "csv":
        text = _csv(rows, header)
    else:
        text = io.dumps([dict(zip(header, r)) for r in rows]) + "\n"
    _emit(text, args.output)


def cmd_demo(args):
    from .complex import generate_keyexample, generate_lattice
    from .layout import audit_pattern, check_embedding, develop, export_svg, lift_to_polyhedron
    from .solver import horocycle_limit, solve_dirichlet

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.name == "square":
        c, a = generate_lattice("square", args.n)
        st, _ = solve_dirichlet(c, a, 1.0)
    elif args.name == "wheel":
        c, a = generate_keyexample(0)
        st = horocycle_limit(c, a).state
    elif args.name == "keyexample":
        c, a = generate_keyexample(args.n)
        st = horocycle_limit(c, a).state
    else:
        raise UsageError(f"unknown demo {args.name!r}")
    p = develop(c, a, st)
    emb = check_embedding(p)
    aud = audit_pattern(p)
    svg = out / f"{args.name}.svg"
    export_svg(p, svg)
    lift = lift_to_polyhedron(p, check_embedded=False)
    obj = out / f"{args.name}.obj"
    lift.to_obj(obj)
    _emit(io.dumps({
        "demo": args.name,
        "background": p.background,
        "vertices": len(c.vertices),
        "embedded": emb.embedded,
        "angle_error": aud.angle_error,
        "holonomy_residual": p.holonomy_residual,
        "max_dihedral_error": lift.max_dihedral_error,
        "svg": str(svg),
        "obj": str(obj),
    }) + "\n")


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="icp", description="Ideal circle patterns: solve, lay out, classify, audit.")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for linear algebra (default 1)")
    ap.add_argument("--seed", type=int, default=0, help="random seed (logged with every report)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("complex", help="validate or generate complexes")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("validate")
    q.add_argument("file")
    q = ps.add_parser("gen")
    q.add_argument("--kind", required=True, choices=["square", "deg7", "wheel", "keyexample"])
    q.add_argument("--size", type=int, required=True)
    q.add_argument("-o", "--output")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("check", help="angle conditions")
    p.add_argument("file")
    p.add_argument("--c2plus", type=float, default=None, metavar="EPS0", help="require cycle margin above EPS0")
    p.add_argument("--report", choices=["json", "csv"], default="json")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="prescribed boundary radii")
    p.add_argument("file")
    p.add_argument("--boundary-r", required=True, help="constant radius or JSON file of radii")
    p.add_argument("--background", default="euc", choices=["euc", "hyp", "euclidean", "hyperbolic"])
    p.add_argument("--target", help="JSON file of target curvatures")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("layout", help="develop a solved state")
    p.add_argument("state")
    p.add_argument("--complex")
    p.add_argument("--svg")
    p.add_argument("--lift")
    p.add_argument("--dihedral-report")
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("vel", help="vertex extremal length")
    p.add_argument("graph")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--method", default="auto", choices=["auto", "cutting_plane", "potential"])
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_vel)

    p = sub.add_parser("type", help="type evidence along an exhaustion")
    p.add_argument("gen")
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--walks", type=int, default=10_000)
    p.add_argument("--budget", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--report", choices=["json", "csv"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_type)

    p = sub.add_parser("rigidity", help="compare two patterns")
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("compare")
    q.add_argument("state_a")
    q.add_argument("state_b")
    q.add_argument("--complex")
    p.set_defaults(func=cmd_rigidity)

    p = sub.add_parser("ring", help="empirical ring constant")
    p.add_argument("state")
    p.add_argument("--complex")
    p.add_argument("--epsilon", default="auto")
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("keyexample", help="ladder example level table")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--report", choices=["json", "csv"], default="csv")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_keyexample)

    p = sub.add_parser("demo", help="end-to-end runs writing SVG and OBJ")
    p.add_argument("name", choices=["square", "wheel", "keyexample"])
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--out", default="icp-demo")
    p.set_defaults(func=cmd_demo)
    return ap


def main(argv=None) -> int:
    _setup_logging()
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        diag("UsageError", message="--threads must be positive")
        return 2
    log.info("run", extra={"extra_fields": {"command": args.command, "seed": args.seed, "threads": args.threads}})
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:  # pragma: no cover
        threadpool_limits = None
    try:
        if threadpool_limits is not None:
            with threadpool_limits(limits=args.threads):
                args.func(args)
        else:
            args.func(args)
    except Failed:
        return 1
    except UsageError as exc:
        diag("UsageError", message=str(exc))
        return 2
    except OSError as exc:
        diag("IOError", message=str(exc), path=getattr(exc, "filename", None))
        return 2
    except IcpError as exc:
        diag(type(exc).__name__, message=str(exc))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
