"""Command-line front end.

Exit codes: 0 success, 1 negative verification/validation, 2 input error,
3 internal contradiction.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import arrays, families, lie, monomial, numeric, system
from .errors import ContradictionError, FirstIntegralError
from .exact import format_rational as fr, parse_rational

OK, NEGATIVE, INPUT_ERROR, CONTRADICTION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _vec(v):
    return [fr(x) for x in v]


def _system_json(s):
    return {"n": s.n, "terms": [{"coef": _vec(t.coef), "expo": _vec(t.expo)} for t in s.terms]}


def _integral_json(i):
    if isinstance(i, lie.AlgebraicIntegral):
        return {"kind": "algebraic", "terms": [{"e": fr(t.e), "B": _vec(t.B)} for t in i.terms]}
    if isinstance(i, lie.LogIntegralA):
        return {"kind": "logA", "logterm": _vec(i.log_expo),
                "terms": [{"e": fr(t.e), "B": _vec(t.B)} for t in i.terms]}
    return {"kind": "logB", "lead": {"e": fr(i.lead.e), "B": _vec(i.lead.B)},
            "terms": [{"e": fr(t.e), "B": _vec(t.B)} for t in i.inner]}


def _derivative_json(d):
    return [{"E": _vec(E), "coeff": fr(c)} for E, c in d]


def _format_derivative(d) -> str:
    lines = ["derivative"] + [f"term {fr(c)} | {' '.join(_vec(E))}" for E, c in d]
    return "\n".join(lines) + "\n"


def _array_json(a):
    return [[None if c is None else c + 1 for c in row] for row in a.cells]


def _report_json(rep):
    return {
        "ok": rep.ok,
        "normal": rep.normal,
        "abnormal_terms": [t + 1 for t in rep.abnormal_terms],
        "connected": rep.connected,
        "components": [[k + 1 for k in comp] for comp in rep.components],
        "conditions": {c.name: {"status": c.status, "witness": [_witness(w) for w in c.witness]}
                       for c in rep.conditions},
        "matrix": None if rep.matrix is None else [_vec(r) for r in rep.matrix.entries],
    }


def _witness(w):
    return [x if isinstance(x, str) else (list(x) if isinstance(x, tuple) else x) for x in w]


def _format_report(rep) -> str:
    lines = [f"valid {'yes' if rep.ok else 'no'}",
             f"normal {'yes' if rep.normal else 'no'}"
             + ("" if rep.normal else " (terms in every column: "
                + " ".join(str(t + 1) for t in rep.abnormal_terms) + ")"),
             f"connected {'yes' if rep.connected else 'no'}"]
    if not rep.connected and rep.components:
        lines.append("components " + " ".join("{" + ",".join(str(k + 1) for k in c) + "}"
                                              for c in rep.components)
                     + "  (submit each component separately)")
    for c in rep.conditions:
        line = f"condition {c.name} {c.status}"
        if c.witness:
            line += "  " + "; ".join(" ".join(str(x) for x in w) for w in c.witness)
        lines.append(line)
    if rep.matrix is not None:
        lines.append("matrix")
        lines += ["  " + " ".join(_vec(r)) for r in rep.matrix.entries]
    return "\n".join(lines) + "\n"


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(text)


# --- subcommands ---------------------------------------------------------------------

def cmd_parse(args):
    s, report = system.parse_system_report(_read(args.system))
    for out_idx, sources in report.merged:
        print(f"# term {out_idx + 1} merged from input terms "
              + ",".join(str(i + 1) for i in sources), file=sys.stderr)
    for h in report.dropped:
        print(f"# dropped cancelled terms with exponent {' '.join(_vec(h))}", file=sys.stderr)
    payload = _system_json(s)
    payload["merged"] = [[o + 1, [i + 1 for i in src]] for o, src in report.merged]
    payload["dropped"] = [_vec(h) for h in report.dropped]
    _emit(args, payload, system.format_system(s))
    return OK


def cmd_reduce(args):
    s = system.reduce_scalar_ode(system.parse_scalar_ode(_read(args.ode)))
    _emit(args, _system_json(s), system.format_system(s))
    return OK


def _load_pair(args):
    return system.parse_system(_read(args.system)), lie.parse_integral(_read(args.integral))


def cmd_derive(args):
    s, i = _load_pair(args)
    d = lie.derivative(i, s)
    _emit(args, {"derivative": _derivative_json(d)}, _format_derivative(d))
    return OK


def cmd_verify(args):
    s, i = _load_pair(args)
    res = lie.verify(i, s)
    text = "holds\n" if res.holds else "fails\n" + _format_derivative(res.residual)
    _emit(args, {"holds": res.holds, "residual": _derivative_json(res.residual)}, text)
    return OK if res.holds else NEGATIVE


def cmd_monomials(args):
    s = system.parse_system(_read(args.system))
    basis = monomial.monomial_integral_basis(s)
    integrals = [lie.AlgebraicIntegral([(1, B)]) for B in basis]
    _emit(args, {"basis": [_vec(B) for B in basis]},
          "\n".join(lie.format_integral(i) for i in integrals))
    return OK


def cmd_separate(args):
    s = system.parse_system(_read(args.system))
    res = monomial.separation_check(s)
    if res is None:
        _emit(args, {"separable": False}, "not separable\n")
        return NEGATIVE
    text = "".join(f"z{i + 1} = Y^({' '.join(_vec(H))})  z{i + 1}' = {fr(d)} z{i + 1}^2\n"
                   for i, (H, d) in enumerate(zip(res.substitutions, res.diagonal)))
    _emit(args, {"separable": True, "substitutions": [_vec(H) for H in res.substitutions],
                 "diagonal": _vec(res.diagonal)}, text)
    return OK


def cmd_validate(args):
    s = system.parse_system(_read(args.system))
    a = arrays.parse_array(_read(args.array))
    rep = arrays.validate(a, s)
    _emit(args, _report_json(rep), _format_report(rep))
    return OK if rep.ok else NEGATIVE


def _synthesis_json(res):
    return {"array": _array_json(res.array), "integral": _integral_json(res.integral),
            "exponents": [_vec(B) for B in res.exponents], "coefficients": _vec(res.coefficients),
            "row_exponents": [_vec(E) for E in res.row_exponents],
            "matrix": [_vec(r) for r in res.matrix.entries]}


def cmd_synthesize(args):
    s = system.parse_system(_read(args.system))
    a = arrays.parse_array(_read(args.array))
    try:
        res = arrays.synthesize(a, s)
    except arrays.InvalidArrayError as exc:
        _emit(args, _report_json(exc.report), _format_report(exc.report))
        return NEGATIVE
    _emit(args, _synthesis_json(res), lie.format_integral(res.integral))
    return OK


def cmd_search(args):
    s = system.parse_system(_read(args.system))
    found = arrays.search(s, args.max_p, args.max_q)
    text = "".join(arrays.format_array(r.array) + lie.format_integral(r.integral) + "\n" for r in found)
    _emit(args, {"results": [_synthesis_json(r.synthesis) for r in found]},
          text or "no integral arrays found\n")
    return OK


def cmd_scale(args):
    s = system.sigma_alpha(system.parse_system(_read(args.system)), args.alpha)
    _emit(args, _system_json(s), system.format_system(s))
    return OK


def cmd_independence(args):
    o = system.parse_scalar_ode(_read(args.ode))
    flags = system.check_exponent_independence(o)
    text = "".join(f"term {fr(t.l)} | {' '.join(_vec(t.m))}  {'independent' if f else 'excluded-shape'}\n"
                   for t, f in zip(o.terms, flags))
    _emit(args, {"terms": [{"l": fr(t.l), "m": _vec(t.m), "independent": f}
                           for t, f in zip(o.terms, flags)]}, text)
    return OK


def cmd_simulate(args):
    s, i = _load_pair(args)
    y0 = [float(parse_rational(v)) if "/" in v else float(v) for v in args.y0.split(",")]
    tr = numeric.rk4(s, y0, args.h, args.t)
    rep = numeric.drift(i, tr)
    _emit(args, {"initial": f"{rep.initial:.16e}", "max_drift": f"{rep.max_drift:.16e}",
                 "h": f"{rep.h:.16e}", "horizon": f"{rep.horizon:.16e}"}, str(rep))
    return OK


def _family_output(args, tag, s, integral, extra=None):
    payload = {"branch": tag, "system": _system_json(s),
               "integral": None if integral is None else _integral_json(integral)}
    payload.update(extra or {})
    text = f"branch {tag}\n" + "".join(f"{k} {v}\n" for k, v in (extra or {}).items())
    text += system.format_system(s)
    if integral is not None:
        text += lie.format_integral(integral)
    if args.out:
        Path(args.out + ".mvf").write_text(system.format_system(s), encoding="utf-8")
        if integral is not None:
            Path(args.out + ".int").write_text(lie.format_integral(integral), encoding="utf-8")
    _emit(args, payload, text)
    return OK


def cmd_family(args):
    if args.kind == "log":
        p = families.LogFamilyParams(args.h21, args.h32, args.c22, args.c23, args.q)
        fam = families.log_family(p)
        extra = {"ode": system.format_scalar_ode(fam.ode).strip().replace("\n", "; ")}
        return _family_output(args, "LogB", fam.system, fam.integral, extra)
    theta = families.PlanarTheta.from_sequence(args.theta)
    if args.kind == "planar":
        br = families.planar_branch(theta)
        return _family_output(args, br.tag, theta.system(), br.integral, {"d": fr(theta.d)})
    x = families.ExtensionParams(theta, args.l1, args.l2, args.h3)
    ext = families.extend_case1(x) if args.kind == "extend1" else families.extend_case2(x)
    extra = {} if ext.determinant is None else {"determinant": fr(ext.determinant)}
    return _family_output(args, "Algebraic", ext.system, ext.integral, extra)


# --- argument parsing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="firstint", description="First integrals of multinomial ODE systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    sp = add("parse", cmd_parse, "canonicalize a system file")
    sp.add_argument("system")
    sp = add("reduce", cmd_reduce, "reduce a scalar ODE file to a system")
    sp.add_argument("ode")
    for name, func, help_ in (("derive", cmd_derive, "collected derivative of an integral"),
                              ("verify", cmd_verify, "check a first-integral claim")):
        sp = add(name, func, help_)
        sp.add_argument("system")
        sp.add_argument("--integral", required=True)
    sp = add("monomials", cmd_monomials, "basis of monomial first integrals")
    sp.add_argument("system")
    sp = add("separate", cmd_separate, "separation-of-variables check")
    sp.add_argument("system")
    for name, func, help_ in (("validate-array", cmd_validate, "check an integral array"),
                              ("synthesize", cmd_synthesize, "build the integral of an array")):
        sp = add(name, func, help_)
        sp.add_argument("system")
        sp.add_argument("array")
    sp = add("search", cmd_search, "enumerate integral arrays")
    sp.add_argument("system")
    sp.add_argument("--max-p", type=int, default=2)
    sp.add_argument("--max-q", type=int, default=2)
    sp = add("scale", cmd_scale, "scale every exponent row by alpha")
    sp.add_argument("system")
    sp.add_argument("--alpha", type=parse_rational, required=True)
    sp = add("independence", cmd_independence, "flag terms whose coefficient cannot move exponents")
    sp.add_argument("ode")
    sp = add("simulate", cmd_simulate, "RK4 drift of an integral")
    sp.add_argument("system")
    sp.add_argument("--integral", required=True)
    sp.add_argument("--y0", required=True, help="comma-separated initial state")
    sp.add_argument("--h", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)

    sp = add("family", cmd_family, "closed-form parameter families")
    sp.add_argument("kind", choices=["planar", "extend1", "extend2", "log"])
    sp.add_argument("--theta", nargs=8, type=parse_rational,
                    metavar=("c11", "c21", "c12", "c22", "h11", "h12", "h21", "h22"))
    sp.add_argument("--l1", type=parse_rational, default=0)
    sp.add_argument("--l2", type=parse_rational, default=0)
    sp.add_argument("--h3", nargs=2, type=parse_rational, metavar=("h31", "h32"))
    sp.add_argument("--q", type=int)
    sp.add_argument("--h21", type=parse_rational)
    sp.add_argument("--h32", type=parse_rational)
    sp.add_argument("--c22", type=parse_rational)
    sp.add_argument("--c23", type=parse_rational)
    sp.add_argument("--out", help="write <OUT>.mvf and <OUT>.int")
    return p


def _check_family_args(parser, args):
    if args.command != "family":
        return
    need = {"planar": ["theta"], "extend1": ["theta", "h3"], "extend2": ["theta", "h3"],
            "log": ["q", "h21", "h32", "c22", "c23"]}[args.kind]
    missing = [n for n in need if getattr(args, n) is None]
    if missing:
        parser.error(f"family {args.kind} requires " + ", ".join("--" + n for n in missing))


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_family_args(parser, args)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ContradictionError as exc:
        print(f"internal contradiction: {exc}", file=sys.stderr)
        return CONTRADICTION
    except (FirstIntegralError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
