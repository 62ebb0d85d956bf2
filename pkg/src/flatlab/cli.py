"""``flatlab`` command-line front end.

Exit codes: 0 on success, 1 on a domain or IO error (one JSON line on
stderr), 2 on usage errors.  Floats are written with 17 significant digits,
rationals as ``p/q`` and field elements as coordinate lists under a field header.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

import sympy

from . import homology, margulis, planes, surface, veech
from .errors import FlatlabError
from .exact_scalar import QQ, ExactScalar, NumberField, common_field, rational

DEFAULT_SEED = 20240917


# -- formatting -------------------------------------------------------------------------------

def fmt_float(x: float) -> str:
    return format(x, ".17g")


def fmt_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def scalar_coords(x, field: NumberField) -> list[str]:
    if not isinstance(x, ExactScalar):
        x = rational(Fraction(x))
    if x.field is not field:
        x = x.lift(field)
    return [fmt_rational(c) for c in x.coordinates]


def parse_scalar(text: str) -> ExactScalar:
    """Parse ``"3/2"``, ``"1/2 + sqrt(5)/2"`` and similar (at most one square root)."""
    expr = sympy.nsimplify(sympy.sympify(text, rational=True))
    roots = {a for a in expr.atoms(sympy.Pow) if a.exp == sympy.Rational(1, 2)}
    if not roots:
        q = sympy.Rational(expr)
        return rational(Fraction(int(q.p), int(q.q)))
    if len(roots) > 1:
        raise ValueError(f"more than one square root in {text!r}")
    r = roots.pop()
    m = sympy.Rational(r.base)
    if m.q != 1:
        raise ValueError("radicand must be an integer")
    expr = sympy.expand(expr)
    b = sympy.Rational(expr.coeff(r))
    a = sympy.Rational(sympy.simplify(expr - b * r))
    K = NumberField.quadratic(int(m))
    return K((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))


def parse_vectors(text: str):
    """``"1,0,0,0;0,1,0,0"`` -> list of vectors."""
    out = []
    for part in text.split(";"):
        out.append([parse_scalar(x.strip()) for x in part.split(",")])
    return out


def _field_of(values) -> NumberField:
    return common_field(*[v for v in values if isinstance(v, ExactScalar)]) if values else QQ


def matrix_json(rows, field: NumberField | None = None) -> dict:
    flat = [x for row in rows for x in row]
    K = field or _field_of(flat)
    return {"field": K.to_dict(), "rows": [[scalar_coords(x, K) for x in row] for row in rows]}


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliIOError(f"cannot read {path}: {exc.strerror}", path=path) from None


class CliIOError(FlatlabError):
    code = "IOError"


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _threads(args) -> int:
    if getattr(args, "threads", None) is not None:
        return args.threads
    env = os.environ.get("FLATLAB_THREADS")
    return int(env) if env else 1


# -- subcommands -------------------------------------------------------------------------------

def cmd_build(args) -> None:
    if args.mcmullen_b is not None:
        s = surface.build_mcmullen_surface(Fraction(args.mcmullen_b))
    elif args.origami:
        right, up = ([int(x) for x in part.split(",")] for part in args.origami)
        s = surface.build_origami(right, up)
    else:
        s = {
            "torus": surface.square_torus,
            "l-shape": surface.l_shaped_surface,
            "octagon": surface.regular_octagon,
        }[args.named]()
    _write(surface.dumps(s) + "\n", args.output)


def _signature_json(s) -> dict:
    sig = surface.classify_stratum(s)
    A = surface.area(s)
    return {
        "genus": sig.genus,
        "zero_orders": list(sig.zero_orders),
        "cone_angles_2pi": list(sig.cone_angles),
        "marked_points": sig.marked_points,
        "stratum": str(sig),
        "area": {"field": A.field.to_dict(), "coordinates": scalar_coords(A, A.field), "text": str(A)},
    }


def cmd_classify(args) -> None:
    s = surface.loads(_read(args.surface))
    _write(_dump(_signature_json(s)), args.output)


def cmd_periods(args) -> None:
    s = surface.loads(_read(args.surface))
    d = homology.homology_bases(s)
    rep = homology.tau_rank(s, d)
    K = s.field
    out = {
        "relative_basis": [list(v) for v in d.rel_basis],
        "absolute_basis": [list(v) for v in d.abs_basis],
        "inclusion_matrix": [list(r) for r in d.inclusion_matrix],
        "period_matrix": matrix_json(d.period_matrix, K),
        "absolute_period_matrix": matrix_json(d.abs_period_matrix, K),
        "rel_rank": d.rel_rank,
        "abs_rank": d.abs_rank,
        "genus": d.genus,
        "z_rank": rep.z_rank,
        "q_dim": rep.q_dim,
        "q_dim_rel": rep.q_dim_rel,
        "holonomy_field_degree": rep.holonomy_field_degree,
        "torus_lattice": matrix_json(rep.torus_lattice, K) if rep.torus_lattice else None,
    }
    cover = homology.detect_torus_cover(s, d)
    out["torus_cover"] = (
        None
        if cover is None
        else {
            "degree": cover.degree,
            "lattice": matrix_json(cover.lattice, K),
            "branch_points": [[fmt_rational(x), fmt_rational(y)] for x, y in cover.branch_points],
        }
    )
    try:
        r = homology.left_inverse_r(s, d)
        out["left_inverse"] = {
            "matrix": [[fmt_rational(x) for x in row] for row in r.matrix],
            "kernel": [list(v) for v in r.kernel],
        }
    except FlatlabError as exc:
        out["left_inverse"] = {"error": exc.code, "message": str(exc)}
    if not args.json:
        text = "\n".join(
            f"{k}: {out[k]}" for k in ("genus", "rel_rank", "abs_rank", "z_rank", "q_dim", "holonomy_field_degree")
        )
        _write(text + "\n", args.output)
    else:
        _write(_dump(out), args.output)


def _omega(name: str) -> planes.SymplecticForm:
    if name.startswith("std"):
        return planes.standard_form(int(name[3:]))
    if name.startswith("split"):
        return planes.split_form(int(name[5:]))
    return planes.SymplecticForm.from_matrix(json.loads(_read(name)))


def _result_json(r: planes.IntegralityResult) -> dict:
    return {
        "ok": r.ok,
        "reason": r.reason,
        "lattice": [list(v) for v in r.lattice] if r.lattice else None,
        "covolume": r.covolume,
        "certificate": [list(row) for row in r.operator] if r.operator else None,
        "detail": r.detail,
    }


def cmd_planes(args) -> None:
    if args.test == "size":
        vals = [int(x) for x in args.size.split(",")]
        x = planes.SizeInput(*vals)
        _write(_dump({"verdict": planes.classify_size(x)}), args.output)
        return
    omega = _omega(args.omega)
    if args.test == "eigen":
        A = [[parse_scalar(x.strip()) for x in row.split(",")] for row in args.matrix.split(";")]
        dec = planes.eigenplane_decomposition(A, omega, mode=args.mode)
        out = {
            "direct_sum": dec.direct_sum,
            "orthogonal": dec.orthogonal,
            "self_adjoint": dec.self_adjoint,
            "planes": [
                {"eta": str(p.eta), "eta_field": p.eta.field.to_dict(), "eta_coordinates": scalar_coords(p.eta, p.eta.field),
                 "basis": matrix_json(p.basis), "nondegenerate": p.nondegenerate}
                for p in dec.planes
            ],
        }
        _write(_dump(out), args.output)
        return
    v1, v2 = parse_vectors(args.plane)
    plane = planes.SymplecticPlane.span(v1, v2)
    if args.test == "d-integral":
        _write(_dump(_result_json(planes.is_D_integral(omega, plane, args.D))), args.output)
    elif args.test == "eta-integral":
        eta, sig = parse_scalar(args.eta), parse_scalar(args.sigma_eta)
        _write(_dump(_result_json(planes.is_eta_integral(omega, plane, eta, sig))), args.output)
    elif args.test == "probe":
        lat = planes.integral_points(plane)
        res = planes.discreteness_probe(
            omega, lat[:2], D=args.D, radius=Fraction(args.radius), bound=args.bound, threads=_threads(args)
        )
        _write(_dump({"count": res.count, "candidates": res.candidates,
                      "members": [[list(v) for v in m] for m in res.members]}), args.output)


def _elements_json(field, enum, R, budget) -> dict:
    K = field
    return {
        "field": K.to_dict(),
        "radius": fmt_float(R),
        "budget": budget,
        "budget_exhausted": enum.budget_exhausted,
        "products_tried": enum.products_tried,
        "generators": [[[scalar_coords(x, K) for x in row] for row in g] for g in enum.generators],
        "elements": [[[scalar_coords(x, K) for x in row] for row in g] for g in enum.elements],
    }


def cmd_veech(args) -> None:
    s = surface.loads(_read(args.surface))
    budget = int(float(args.budget))
    enum = veech.enumerate_stabilizer(s, args.radius, budget=budget, threads=_threads(args))
    _write(_dump(_elements_json(s.field, enum, args.radius, budget)), args.emit)


def load_elements(text: str):
    d = json.loads(text)
    K = NumberField.from_dict(d["field"])
    return [
        tuple(tuple(ExactScalar(K, [Fraction(c) for c in x]) for x in row) for row in g) for g in d["elements"]
    ]


def delta_csv(est: veech.CriticalExponentEstimate) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["R", "count", "delta_hat"])
    for R, c, dh in est.rows():
        w.writerow([fmt_float(R), c, fmt_float(dh)])
    return buf.getvalue()


def cmd_delta(args) -> None:
    els = load_elements(_read(args.elements))
    est = veech.critical_exponent_estimate(els, [float(r) for r in args.radii.split(",")])
    if args.csv:
        _write(delta_csv(est), args.output)
    else:
        _write(_dump({"radii": list(est.radii), "counts": list(est.counts), "delta_hat": list(est.delta_hat)}), args.output)


def chain_rows(args):
    steps = int(float(args.steps))
    if args.model == "lattice":
        return margulis.simulate_lattice_chain(args.p, args.ell, steps, args.seed)
    chain = margulis.drift_chain(args.levels, Fraction(args.q))
    return margulis.simulate_finite_chain(chain, args.ell, steps, args.seed, alpha=float)


def cmd_chain(args) -> None:
    buf = io.StringIO()
    if args.csv:
        buf.write("step,state_id,alpha\n")
        for n, sid, a in chain_rows(args):
            buf.write(f"{n},{sid},{fmt_float(a)}\n")
    else:
        rows = [{"step": n, "state_id": sid, "alpha": a} for n, sid, a in chain_rows(args)]
        buf.write(json.dumps(rows) + "\n")
    _write(buf.getvalue(), args.output)


def cmd_margulis_check(args) -> None:
    cfg_d = json.loads(_read(args.config))
    text = _read(args.sample)
    states = [int(row["state_id"]) for row in csv.DictReader(io.StringIO(text))]
    if not states:
        raise margulis_empty()
    chain = margulis.drift_chain(int(cfg_d.get("levels", 200)), Fraction(str(cfg_d.get("q", "3/20"))))
    T0 = float(cfg_d.get("T0", math.log(2)))
    cfg = margulis.AdditiveMargulisConfig(
        alpha=float, T0=T0, T1=float(cfg_d.get("T1", 1.0)), epsilon=float(cfg_d.get("epsilon", 0.0))
    )
    rep = margulis.check_additive_margulis(chain, cfg, states)
    out = {
        "verdict": rep.verdict,
        "M_b_measure": fmt_float(rep.M_b_measure),
        "epsilon": fmt_float(rep.epsilon),
        "M_a_violations": [list(map(str, v)) for v in rep.M_a_violations],
        "sample_size": len(states),
    }
    _write(_dump(out), args.output)


def margulis_empty():
    from .errors import EmptyInput

    return EmptyInput("sample file has no rows")


# -- parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flatlab", description="Exact computations on translation surfaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=False, threads=False):
        p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        if threads:
            p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("build", help="construct a surface")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--mcmullen-b", dest="mcmullen_b", help="S(a) with a = b - 1 + sqrt(b^2 - b + 1)")
    g.add_argument("--named", choices=["torus", "l-shape", "octagon"])
    g.add_argument("--origami", nargs=2, metavar=("RIGHT", "UP"), help="comma-separated 0-based square indices")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("classify", help="stratum of a surface file")
    p.add_argument("surface")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("periods", help="homology bases, periods and ranks")
    p.add_argument("surface")
    p.add_argument("--json", action="store_true")
    common(p)
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("planes", help="integral plane tests")
    p.add_argument("--omega", default="std4", help="std<n>, split<n> or a JSON matrix file")
    p.add_argument("--test", required=True, choices=["d-integral", "eta-integral", "eigen", "probe", "size"])
    p.add_argument("--plane", help='"v1;v2" with comma-separated entries')
    p.add_argument("--D", type=int, default=1)
    p.add_argument("--eta")
    p.add_argument("--sigma-eta", dest="sigma_eta")
    p.add_argument("--matrix", help='rows separated by ";"')
    p.add_argument("--mode", default="direct", choices=["direct", "symmetrized"])
    p.add_argument("--radius", default="1/1000")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--size", help="d,d',dimTM,rankM,dim(ker p cap TM)")
    common(p, threads=True)
    p.set_defaults(func=cmd_planes)

    p = sub.add_parser("veech", help="enumerate stabilizer elements in a ball")
    p.add_argument("surface")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--budget", default="1e6")
    p.add_argument("--emit", default=None, help="elements JSON file (default stdout)")
    common(p, threads=True)
    p.set_defaults(func=cmd_veech)

    p = sub.add_parser("delta", help="critical exponent estimates from an element list")
    p.add_argument("elements")
    p.add_argument("--radii", default="2,4,6,8")
    p.add_argument("--csv", action="store_true")
    common(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("chain", help="simulate the two-branch chain")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--steps", default="1000")
    p.add_argument("--model", choices=["lattice", "drift"], default="lattice")
    p.add_argument("--levels", type=int, default=200)
    p.add_argument("--q", default="3/20")
    p.add_argument("--csv", action="store_true")
    common(p, seed=True)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("margulis-check", help="check an additive Margulis configuration on a sample")
    p.add_argument("config")
    p.add_argument("sample")
    common(p)
    p.set_defaults(func=cmd_margulis_check)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except FlatlabError as exc:
        sys.stderr.write(json.dumps(exc.as_dict(), sort_keys=True, default=str) + "\n")
        return 1
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "IOError", "message": str(exc)}) + "\n")
        return 1
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        sys.stderr.write(json.dumps({"error": "InvalidInput", "message": str(exc)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
