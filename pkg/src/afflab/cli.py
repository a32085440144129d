"""Command-line entry point: ``afflab <command> [flags]``.

JSON goes to stdout (or ``--out``), a one-line summary to stderr.  Exit codes:
0 success, 2 domain error, 3 verification failure, 64 usage error.
Set ``AFFLAB_MODE=float`` to run the Type A pipelines in floating point.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from .catalogue import CanonicalLabel, canonical_model, label
from .classify import classify
from .completeness import completeness_probe, verdict
from .connection import (Connection, TypeAModel, geometry_n, model_from_json, ricci_general,
                         ricci_rank, ricci_type_a)
from .errors import AfflabError, DomainError, VerificationError
from .exp_poly import ep_format, ep_parse
from .geodesics import T_MAX, integrate
from .maps import MAP_NAMES, grid_points, catalogue_map, verify_affine_map
from .portrait import DEFAULT_RAYS, DEFAULT_VIEW, PortraitSpec, cmd_portrait as render_portrait
from .projective import flatten, linear_transform
from .quasi_einstein import qe_apply, qe_solve_type_a
from .scalars import exact, format_scalar, is_exact, to_float

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY, EXIT_USAGE = 0, 2, 3, 64
MAP_TOL = 1e-9

# flags whose values may start with "-" (e.g. "--params -1,1")
_VALUE_FLAGS = ("--params", "--gamma", "--x0", "--u0", "--view", "--tmax")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def float_mode() -> bool:
    mode = os.environ.get("AFFLAB_MODE", "exact").strip().lower()
    if mode not in ("exact", "float"):
        raise DomainError(f"AFFLAB_MODE must be 'exact' or 'float', got {mode!r}")
    return mode == "float"


def _scalar(text: str):
    try:
        return float(text) if float_mode() else exact(text)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"not a number: {text!r}") from None


def _scalars(text: str | None, n: int | None = None) -> tuple:
    if text is None or text.strip() == "":
        vals = ()
    else:
        vals = tuple(_scalar(t) for t in text.split(","))
    if n is not None and len(vals) != n:
        raise DomainError(f"expected {n} comma-separated values, got {text!r}")
    return vals


def _floats(text: str, n: int) -> tuple:
    return tuple(float(v) for v in _scalars(text, n))


def _num(x):
    return format_scalar(x) if is_exact(x) else float(x)


def _label(args) -> CanonicalLabel:
    return label(args.label, *_scalars(args.params))


def _model(args, allow_general: bool = False):
    """Model from ``--model`` (JSON text or file), ``--gamma`` or ``--label/--params``."""
    if getattr(args, "model", None):
        text = args.model
        if not text.lstrip().startswith("{"):
            try:
                text = Path(text).read_text()
            except OSError as exc:
                raise DomainError(f"cannot read model file: {exc}") from None
        try:
            m = model_from_json(text)
        except (ValueError, KeyError, TypeError) as exc:
            raise DomainError(f"bad model JSON: {exc}") from None
    elif getattr(args, "gamma", None):
        m = TypeAModel(*_scalars(args.gamma, 6))
    elif getattr(args, "label", None):
        lab = _label(args)
        m = geometry_n() if lab.family == "N" else canonical_model(lab)
    else:
        raise DomainError("give a model with --model, --gamma or --label")
    if isinstance(m, Connection):
        if m.is_constant:
            m = m.to_type_a()
        elif not allow_general:
            raise DomainError("this command needs a Type A model (constant Christoffel symbols)")
    if isinstance(m, TypeAModel) and float_mode():
        m = m.to_float()
    return m


def _emit(args, report: dict, summary: str) -> None:
    text = json.dumps(report, indent=2)
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    print(summary, file=sys.stderr)


def _matrix(rows):
    return [[_num(v) for v in row] for row in rows]


# -- commands ------------------------------------------------------------------

def cmd_ricci(args) -> int:
    m = _model(args, allow_general=True)
    if isinstance(m, TypeAModel):
        rho = ricci_type_a(m)
        entries = _matrix(rho.matrix())
        rank = ricci_rank(m)
    else:
        rho = ricci_general(m)
        entries = [[ep_format(v) for v in row] for row in rho.entries]
        rank = None
    _emit(args, {"model": m.to_json(), "ricci": entries, "rank": rank, "symmetric": rho.symmetric},
          f"ricci: rank {rank}")
    return EXIT_OK


def cmd_flatten(args) -> int:
    m = _model(args)
    res = flatten(m)
    after = ricci_type_a(res.model).components()
    _emit(args, {"model": m.to_json(), "w": res.w.to_json(), "w_original": res.w_original.to_json(),
                 "prescale": _matrix(res.prescale) if res.prescale else None,
                 "flat_model": res.model.to_json(), "ricci_after": [_num(v) for v in after]},
          f"flatten: w = {res.w_original.to_json()}")
    return EXIT_OK


def cmd_classify(args) -> int:
    m = _model(args)
    res = classify(m)
    T = linear_transform(m, res.A)
    target = canonical_model(res.label)
    residual = max(abs(to_float(x) - to_float(y)) for x, y in zip(T.gamma, target.gamma))
    report = res.to_json()
    report.update({"model": m.to_json(), "transformed": T.to_json(), "residual": residual})
    _emit(args, report, f"classify: {res.label}")
    return EXIT_OK


def cmd_qsolve(args) -> int:
    m = _model(args)
    span = qe_solve_type_a(m)
    report = {"model": m.to_json(), "dim": span.dim, "basis": [ep_format(f) for f in span]}
    _emit(args, report, f"qsolve: dim {span.dim}")
    return EXIT_OK


def cmd_qcheck(args) -> int:
    m = _model(args, allow_general=True)
    f = ep_parse(args.fn)
    r = qe_apply(m, f)
    report = {"fn": ep_format(f), "exact_zero": r.exact_zero, "max_abs": r.max_abs,
              "scale": r.scale, "member": r.vanishes}
    _emit(args, report, f"qcheck: {'member' if r.vanishes else 'not a member'} (max {r.max_abs:.3g})")
    return EXIT_OK if r.vanishes else EXIT_VERIFY


def cmd_geodesic(args) -> int:
    m = _model(args, allow_general=True)
    tr = integrate(m, _floats(args.x0, 2), _floats(args.u0, 2), args.tmax)
    if args.csv:
        Path(args.csv).write_text(tr.to_csv())
    report = {"termination": tr.termination.to_json(), "t_end": tr.t_end, "steps": len(tr.t) - 1,
              "residual_max": tr.residual_max, "x_end": tr.x[-1].tolist(), "u_end": tr.u[-1].tolist()}
    _emit(args, report, f"geodesic: {tr.termination} at t = {tr.t_end:.6g}")
    return EXIT_OK


def cmd_probe(args) -> int:
    if args.label:
        target = _label(args)
    else:
        target = _model(args, allow_general=True)
    rep = completeness_probe(target, n=args.rays, t_max=args.tmax)
    report = rep.to_json()
    if args.json:
        Path(args.json).write_text(json.dumps(report, indent=2) + "\n")
    _emit(args, {k: v for k, v in report.items() if k != "fan"} if args.json else report,
          f"probe: {rep.model}: {len(rep.blowups())} of {len(rep.fan)} rays stop early")
    return EXIT_VERIFY if rep.agrees_with_table is False else EXIT_OK


def cmd_verdict(args) -> int:
    lab = _label(args)
    v = verdict(lab)
    _emit(args, v.to_json(), f"verdict: {lab}: {v}")
    return EXIT_OK


def cmd_maps_verify(args) -> int:
    names = MAP_NAMES if args.name == "all" else (args.name,)
    rows, ok = [], True
    for name in names:
        spec = catalogue_map(name, *(_scalars(args.params) if args.name != "all" else ()))
        r = verify_affine_map(spec, grid_points(args.grid))
        rows.append({"name": name, "residual": r, "ok": r < MAP_TOL})
        ok &= r < MAP_TOL
    _emit(args, {"maps": rows, "tol": MAP_TOL},
          f"maps verify: {sum(r['ok'] for r in rows)}/{len(rows)} affine")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_portrait(args) -> int:
    if args.label:
        target = _label(args)
    else:
        target = _model(args, allow_general=True)
    spec = PortraitSpec(target, args.rays, args.tmax, _floats(args.view, 4), args.svg)
    p = render_portrait(spec)
    report = {"svg": args.svg, "rays": spec.rays, "view": list(spec.view), "blowups": p.blowups}
    if not args.svg:
        sys.stdout.write(p.svg)
        print(f"portrait: {len(p.polylines)} rays, {p.blowups} blow-ups", file=sys.stderr)
    else:
        _emit(args, report, f"portrait: wrote {args.svg}")
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def _model_flags(p, label_ok: bool = True):
    p.add_argument("--model", help="model JSON text or path to a JSON file")
    p.add_argument("--gamma", help="six Christoffel symbols a,b,c,d,e,f")
    if label_ok:
        p.add_argument("--label", help="catalogue label, e.g. M_2^2 or N")
        p.add_argument("--params", default="", help="comma-separated family parameters")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="afflab", description="Type A affine surfaces: curvature, projective "
                     "flattening, quasi-Einstein spaces, classification and geodesics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        return p

    _model_flags(add("ricci", cmd_ricci, "Ricci tensor and rank"))
    _model_flags(add("flatten", cmd_flatten, "linear potential making the model projectively flat"))
    _model_flags(add("classify", cmd_classify, "catalogue normal form with a linear change A"))
    _model_flags(add("qsolve", cmd_qsolve, "basis of the quasi-Einstein solution space"))
    p = add("qcheck", cmd_qcheck, "quasi-Einstein residual of one function")
    _model_flags(p)
    p.add_argument("--fn", required=True, help="exponential polynomial, e.g. \"exp(x1)*x2\"")

    p = add("geodesic", cmd_geodesic, "integrate one geodesic")
    _model_flags(p)
    p.add_argument("--x0", default="0,0")
    p.add_argument("--u0", required=True)
    p.add_argument("--tmax", type=float, default=T_MAX, help="signed time span")
    p.add_argument("--csv", help="write the trace as CSV (t,x1,x2,u1,u2)")

    p = add("probe", cmd_probe, "completeness probe with a fan of rays")
    _model_flags(p)
    p.add_argument("--rays", type=int, default=64)
    p.add_argument("--tmax", type=float, default=T_MAX)
    p.add_argument("--json", help="write the full per-ray report here")

    p = add("verdict", cmd_verdict, "completeness verdict from the classification table")
    p.add_argument("--label", required=True)
    p.add_argument("--params", default="")

    p = sub.add_parser("maps", help="catalogue affine maps")
    msub = p.add_subparsers(dest="maps_command", required=True, parser_class=_Parser)
    v = msub.add_parser("verify", help="check the affine-map equation on a grid")
    v.set_defaults(func=cmd_maps_verify)
    v.add_argument("--name", required=True, choices=MAP_NAMES + ("all",))
    v.add_argument("--grid", type=int, default=5)
    v.add_argument("--params", default="")
    v.add_argument("--out")

    p = add("portrait", cmd_portrait, "SVG portrait of geodesics from the origin")
    _model_flags(p)
    p.add_argument("--rays", type=int, default=DEFAULT_RAYS)
    p.add_argument("--tmax", type=float, default=T_MAX)
    p.add_argument("--view", default=",".join(str(v) for v in DEFAULT_VIEW), help="x_lo,x_hi,y_lo,y_hi")
    p.add_argument("--svg", help="output SVG path (stdout if omitted)")
    return parser


def _glue_values(argv):
    """Turn ``--params -1,1`` into ``--params=-1,1`` so argparse keeps the value."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and re.match(r"^-[\d.]", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"afflab: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (DomainError, AfflabError) as exc:
        print(f"afflab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
