"""Command-line front end: ``fusioncat <command> FILE [options]``.

FILE is a category JSON file or the name of bundled data (``trivial``, ``yang_lee``,
``e6``).  Exit codes: 0 ok, 1 an invariant failed, 2 the input could not be used.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .catdata import CategoryDataError, FusionCategoryData, load_category, save_category, validate
from .dims import DimensionError, dimension_summary
from .dy import DYComplex
from .gauge import GaugeError, make_fair_basis, pairing_kit
from .pivotal import PivotalError, pivotal_report
from .structures import (StructureError, frobenius_schur, fusion_homomorphisms, solve_pivotal,
                         sphericalize)

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT = 0, 1, 2


@dataclass
class AnalysisReport:
    sections: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {**self.sections, "failures": self.failures, "ok": self.ok}


# ---------------------------------------------------------------- formatting

def _clean(x, digits=12):
    """JSON-ready copy with floats rounded (stable text across platforms)."""
    if isinstance(x, dict):
        return {str(k): _clean(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v, digits) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist(), digits)
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(float(x.real), digits), _clean(float(x.imag), digits)]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(f"{float(x):.{digits}g}")
        return 0.0 if v == 0 else v
    return x


def _cmat(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _text(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{str(k).ljust(width)}  {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(pad + json.dumps(obj))
    return lines


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)


def render(payload: dict, fmt: str) -> str:
    payload = _clean(payload)
    if fmt == "json":
        return json.dumps(payload, indent=1) + "\n"
    return "\n".join(_text(payload)) + "\n"


# ---------------------------------------------------------------- sections

def header(data: FusionCategoryData) -> dict:
    return {"tool": "fusioncat", "version": __version__, "name": data.name,
            "input_digest": data.digest(), "tol": data.tol, "labels": list(data.labels)}


def validate_section(data) -> tuple[dict, list]:
    reps = validate(data)
    out = {r.check: {"ok": r.ok, "max_residual": r.max_residual, "violations": r.violations} for r in reps}
    fails = [f"validate.{r.check}: {v}" for r in reps for v in r.violations]
    return out, fails


def dims_section(data) -> dict:
    return dimension_summary(data).as_dict(data.labels)


def gauge_section(data):
    fair, g = make_fair_basis(data)
    kit = pairing_kit(fair)
    labs = data.labels
    sec = {
        "gauge": g.as_dict(labs),
        "pairing": {labs[i]: {"cup": kit.cup[i], "cap": kit.cap[i], "left_cup": kit.left_cup[i],
                              "left_cap": kit.left_cap[i], "loop_right": kit.loops[(i, "e.eta")],
                              "loop_left": kit.loops[(i, "eps.n")]} for i in range(len(labs))},
        "max_snake_residual": kit.max_snake_residual,
    }
    return fair, sec


def _triple_name(labs, t):
    return f"{labs[t[0]]};{labs[t[1]]},{labs[t[2]]}"


def _index_name(labs, t):
    # apex associators are indexed by labels, not by the vertex space they act on
    return ",".join(labs[x] for x in t)


def pivotal_section(data):
    rep = pivotal_report(data)
    labs = data.labels
    ring = rep.data.ring
    sec = {
        "pivotal_indicators": {labs[i]: int(rep.p[i]) for i in range(ring.rank)},
        "apex_associators": {_index_name(labs, t): _cmat(m) for t, m in rep.S.items()},
        "apex_monodromy": {_index_name(labs, t): _cmat(m) for t, m in rep.A.items()},
        "pivotal_operators": {_triple_name(labs, t): _cmat(m) for t, m in rep.T.items()},
        "symbols": {_triple_name(labs, t): s for t, s in rep.symbols.items()},
        "traces": {_triple_name(labs, t): float(rep.traces[t].real) for t in rep.T},
        "trace_residuals": rep.trace_residuals,
        "max_involution_residual": max(rep.involution_residuals.values(), default=0.0),
        "coherence_residual": rep.coherence_residual,
        "orientable": rep.orientable,
        "monodromy_is_identity": rep.monodromy_is_identity,
    }
    fails = []
    tol = 10 * data.tol
    if sec["max_involution_residual"] > tol:
        fails.append("pivotal: T^2 != id")
    fails += [f"pivotal: trace identity {k} residual {v:.3g}" for k, v in rep.trace_residuals.items() if v > tol]
    if rep.coherence_residual > tol:
        fails.append(f"pivotal: coherence residual {rep.coherence_residual:.3g}")
    return rep, sec, fails


def solve_section(data, rep):
    sols = solve_pivotal(data, rep)
    labs = data.labels
    return sols, {"count": len(sols), "reason": sols.reason,
                  "certificate": {str(k): v for k, v in (sols.certificate or {}).items()},
                  "structures": [{**s.as_dict(labs), "frobenius_schur": _fs(data, s.gamma)} for s in sols]}


def _fs(data, gamma):
    out = {}
    for i, lab in enumerate(data.labels):
        nu2, nu3 = frobenius_schur(data, gamma, i)
        out[lab] = {"nu2": None if nu2 is None else [float(nu2.real), float(nu2.imag)],
                    "nu3": [float(nu3.real), float(nu3.imag)]}
    return out


def homs_section(data) -> dict:
    res = fusion_homomorphisms(data)
    labs = data.labels
    fmt = lambda h: {labs[i]: h.values[i] for i in range(len(labs))}  # noqa: E731
    return {"ring_homomorphisms": [fmt(h) for h in res.ring_homs],
            "fusion_homomorphisms": [fmt(h) for h in res.fusion_homs],
            "warnings": res.warnings}


def sphericalize_section(data, rep):
    sph, canonical = sphericalize(data, rep)
    reps = validate(sph)
    sols = solve_pivotal(sph)
    contains = any(np.abs(s.gamma - canonical.gamma).max() < 1e-9 for s in sols)
    labs = sph.labels
    sec = {"labels": list(labs),
           "fusion": {f"{labs[a]} {labs[b]}": [labs[c] for c in range(sph.rank) if sph.ring.N(c, a, b)
                                                for _ in range(sph.ring.N(c, a, b))]
                      for a in range(sph.rank) for b in range(sph.rank)},
           "canonical_structure": canonical.as_dict(labs),
           "pentagon_residual": reps[-1].max_residual,
           "canonical_solves": contains,
           "global_dim": dimension_summary(sph).global_dim}
    fails = [f"sphericalize.{r.check}: {v}" for r in reps for v in r.violations]
    if not contains:
        fails.append("sphericalize: canonical structure does not solve the pivotal equations")
    return sph, sec, fails


def dy_section(data, max_degree):
    cx = DYComplex(data, max_degree=max_degree)
    top = max_degree - 1
    sec = {"dims": {n: cx.dim(n) for n in range(max_degree + 1)}, "rank": {}, "H": {}, "ambiguous": {},
           "dd_residual": {}, "contracting_residual": {}, "chi_face_residuals": {}}
    fails = []
    for n in range(top + 1):
        r, amb = cx.rank(n)
        sec["rank"][n] = r
        sec["ambiguous"][n] = amb
    for n in range(1, top + 1):
        h, amb = cx.cohomology_dim(n)
        sec["H"][n] = h
        sec["dd_residual"][n] = cx.dd_residual(n)
        if sec["dd_residual"][n] > data.tol:
            fails.append(f"dy: d^{n} d^{n - 1} residual {sec['dd_residual'][n]:.3g}")
        if n + 2 <= max_degree:
            sec["contracting_residual"][n] = cx.contracting_residual(n)
            sec["chi_face_residuals"][n] = cx.chi_face_residuals(n)
            if sec["contracting_residual"][n] > 1e-8:
                fails.append(f"dy: contracting homotopy residual {sec['contracting_residual'][n]:.3g} in degree {n}")
    return sec, fails


def run_full(path, tol=None, max_degree=3) -> AnalysisReport:
    """validate, dims, fair basis, pivotal, structures, DY complex."""
    data = load_category(path, tol=tol)
    rep = AnalysisReport({"header": header(data)})
    sec, fails = validate_section(data)
    rep.sections["validate"] = sec
    rep.failures += fails
    if fails:
        return rep
    steps = [("dims", lambda: (dims_section(data), [])),
             ("gauge", lambda: (gauge_section(data)[1], []))]
    for name, fn in steps:
        try:
            rep.sections[name], f = fn()
            rep.failures += f
        except (DimensionError, GaugeError) as exc:
            rep.failures.append(f"{name}: {exc}")
            return rep
    try:
        prep, sec, fails = pivotal_section(data)
        rep.sections["pivotal"] = sec
        rep.failures += fails
        rep.sections["solve"] = solve_section(data, prep)[1]
        rep.sections["fusion_homs"] = homs_section(data)
        if prep.orientable:
            _, sec, fails = sphericalize_section(data, prep)
            rep.sections["sphericalize"] = sec
            rep.failures += fails
    except (PivotalError, StructureError) as exc:
        rep.failures.append(f"pivotal/structures: {exc}")
    sec, fails = dy_section(data, max_degree + 1)
    rep.sections["dy"] = sec
    rep.failures += fails
    return rep


# ---------------------------------------------------------------- entry point

def _parser():
    p = argparse.ArgumentParser(prog="fusioncat", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"fusioncat {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="numeric tolerance (default: file value or 1e-9)")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--max-degree", type=int, default=3, help="highest DY degree (differential d^n, n <= N)")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [("validate", "ring axioms, unit blocks, inverses, pentagon"),
                        ("dims", "Frobenius-Perron, paired and fusion dimensions"),
                        ("pivotal", "apex associators, pivotal operators, symbols and traces"),
                        ("solve", "all pivotal structures"),
                        ("fusion-homs", "ring and fusion homomorphisms"),
                        ("dy", "Davydov-Yetter complex, cohomology and contracting homotopy"),
                        ("report", "full analysis")]:
        sp_ = sub.add_parser(name, parents=[common], help=help_)
        sp_.add_argument("file")
    g = sub.add_parser("gauge", parents=[common], help="fair-basis gauge (writes data with --out)")
    g.add_argument("mode", choices=("fair",), nargs="?", default="fair")
    g.add_argument("file")
    s = sub.add_parser("sphericalize", parents=[common], help="sphericalization (writes data with --out)")
    s.add_argument("file")
    return p


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        data = load_category(args.file, tol=args.tol)
    except (OSError, CategoryDataError) as exc:
        print(f"fusioncat: cannot load {args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        payload, fails = _dispatch(args, data)
    except (DimensionError, GaugeError, PivotalError, StructureError) as exc:
        print(f"fusioncat {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    payload = {"header": header(data), **payload, "failures": fails, "ok": not fails}
    if args.command not in ("gauge", "sphericalize"):
        _emit(render(payload, args.format), args.out)
    else:
        sys.stdout.write(render(payload, args.format))
    return EXIT_OK if not fails else EXIT_INVARIANT


def _dispatch(args, data):
    cmd = args.command
    if cmd == "validate":
        sec, fails = validate_section(data)
        return {"validate": sec}, fails
    if cmd == "report":
        rep = run_full(args.file, tol=args.tol, max_degree=args.max_degree)
        rep.sections.pop("header", None)
        return rep.sections, rep.failures
    sec, fails = validate_section(data)
    if fails:
        return {"validate": sec}, fails
    if cmd == "dims":
        return {"dims": dims_section(data)}, []
    if cmd == "gauge":
        fair, sec = gauge_section(data)
        if args.out:
            save_category(fair, args.out)
            sec["written"] = args.out
        return {"gauge": sec}, []
    if cmd == "pivotal":
        _, sec, fails = pivotal_section(data)
        return {"pivotal": sec}, fails
    if cmd == "solve":
        rep = pivotal_report(data)
        return {"solve": solve_section(data, rep)[1]}, []
    if cmd == "fusion-homs":
        return {"fusion_homs": homs_section(data)}, []
    if cmd == "sphericalize":
        rep = pivotal_report(data)
        if not rep.orientable:
            return {"sphericalize": {"reason": "not orientable"}}, ["sphericalize: not orientable"]
        sph, sec, fails = sphericalize_section(data, rep)
        if args.out:
            save_category(sph, args.out)
            sec["written"] = args.out
        return {"sphericalize": sec}, fails
    if cmd == "dy":
        sec, fails = dy_section(data, args.max_degree + 1)
        return {"dy": sec}, fails
    raise AssertionError(cmd)


if __name__ == "__main__":
    sys.exit(main())
