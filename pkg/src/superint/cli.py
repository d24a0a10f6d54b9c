"""Command line entry point: ``superint <subcommand> ...``.

Exit codes: 0 success, 1 domain error (any SuperintError), 2 usage error.
Data goes to stdout (or ``--output``), diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Optional

import numpy as np

from . import potential_catalog as catalog
from .errors import SuperintError, UnknownPotential
from .spectra import SpectrumEntry, merge_levels

log = logging.getLogger("superint")

SIG_DIGITS = 12
VERIFY_TOL = 1e-3


# ---------------------------------------------------------------------------
# output helpers

def _clean(obj):
    """Recursively round floats to 12 significant digits and turn numpy scalars into Python."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return None
        return float(f"{v:.{SIG_DIGITS}g}") + 0.0
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _num(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _table(header, rows) -> str:
    cells = [[str(h) for h in header]] + [[_num(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _render(fmt, report, header, rows, extra: str = "") -> str:
    if fmt == "json":
        return dumps(report)
    if fmt == "csv":
        return _csv(header, rows)
    return _table(header, rows) + extra


# ---------------------------------------------------------------------------
# parameters

def _params(args, potential_id: str) -> dict:
    if potential_id not in catalog.IDS:
        raise UnknownPotential(f"unknown potential id {potential_id!r}; try 'list'")
    kw = {"hbar": args.hbar}
    if potential_id in ("p1", "p4", "p5", "p6"):
        if args.a is not None:
            kw["a"] = args.a
        else:
            kw["a0"] = args.a0
    else:
        kw["omega"] = args.omega
        if potential_id in ("reducible_sw1", "reducible_sw2"):
            kw["b"], kw["c"] = args.b, args.c
    return kw


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _pos_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


# ---------------------------------------------------------------------------
# subcommands

def cmd_list(args):
    rows = [(i, catalog.FORMULAS[i]) for i in catalog.IDS]
    report = {"potentials": [{"id": i, "formula": f} for i, f in rows]}
    return _render(args.format, report, ("id", "formula"), rows)


def _poly(p):
    return list(p.coefficients)


def cmd_algebra(args):
    kw = _params(args, args.id)
    alg = catalog.get_algebra(args.id, **kw)
    spec = catalog.get_potential(args.id, **kw)
    names = ("gamma", "delta", "epsilon", "nu", "xi", "zeta", "casimir")
    report = {
        "potential": args.id,
        "params": spec.params,
        "case": 1 if alg.is_case1 else 2,
        "alpha": alg.alpha, "beta": alg.beta, "mu": alg.mu,
        "coefficients_in_E": {n: _poly(getattr(alg, n)) for n in names},
        "sqrt_delta_sign": alg.sqrt_delta_sign,
    }
    if spec.phi_factored is not None:
        report["phi_factored"] = {"c": spec.phi_factored.c,
                                  "roots_affine_in_E": [list(r) for r in spec.phi_factored.roots]}
    rows = [(n, " ".join(f"{c:.10g}" for c in _poly(getattr(alg, n)))) for n in names]
    rows = [("alpha", alg.alpha), ("beta", alg.beta), ("mu", alg.mu)] + rows
    extra = ""
    if spec.phi_factored is not None:
        roots = ", ".join(f"{s:.6g}*E{t:+.6g}" for s, t in spec.phi_factored.roots)
        extra = f"\nPhi(z) = {spec.phi_factored.c:.10g} * prod(z - r_i(E)),  r_i = {roots}\n"
    return _render(args.format, report, ("coefficient", "value (constant term first)"), rows, extra)


def _spectrum_report(potential_id, kw, pmax):
    from .spectrum_solver import representations

    spec = catalog.get_potential(potential_id, **kw)
    sols = representations(potential_id, pmax, **kw)
    formulas = {f.family_id: f.formula for f in spec.reference_families}
    fams: dict = {}
    for s in sols:
        fams.setdefault(s.family_id, []).append(s)
    families = []
    for fid in sorted(fams, key=lambda f: (min(s.energy for s in fams[f]), f)):
        families.append({
            "family_id": fid,
            "formula": formulas.get(fid, "unlabelled root pairing"),
            "entries": [{"p": s.p, "E": s.energy, "degeneracy": s.dimension,
                         "unitary": s.unitary, "physical": s.physical}
                        for s in sorted(fams[fid], key=lambda s: s.p)],
        })
    return {"potential": potential_id, "params": spec.params, "p_max": pmax,
            "v_min": spec.v_min, "families": families}


def _family_rows(report):
    rows = []
    for fam in report["families"]:
        for e in fam["entries"]:
            rows.append((fam["family_id"], e["p"], e["E"], e["degeneracy"],
                         e["unitary"], e["physical"]))
    return rows


_FAMILY_HEADER = ("family", "p", "E", "degeneracy", "unitary", "physical")


def cmd_spectrum(args):
    kw = _params(args, args.id)
    report = _spectrum_report(args.id, kw, args.pmax)
    rows = sorted(_family_rows(report), key=lambda r: (r[2], r[0]))
    extra = ""
    if args.format == "table" and not args.all:
        hidden = sum(1 for r in rows if not r[5])
        rows = [r for r in rows if r[5]]
        if hidden:
            extra = f"\n{hidden} unitary solutions below v_min = {report['v_min']:.10g} hidden (--all shows them)\n"
    return _render(args.format, report, _FAMILY_HEADER, rows, extra)


def _reference_levels(report):
    ents = [SpectrumEntry(float(e["E"]), int(e["degeneracy"]), fam["family_id"])
            for fam in report["families"] for e in fam["entries"]
            if e.get("physical", True) and e.get("unitary", True)]
    return merge_levels(ents, 1e-8)


def compare_levels(numeric, reference, tol=VERIFY_TOL) -> dict:
    """Pair each numeric level with the nearest reference level below the numeric ceiling."""
    rows = []
    top = numeric[-1].energy + tol if numeric else -math.inf
    used = set()
    for lv in numeric:
        ref = min(reference, key=lambda r: abs(r.energy - lv.energy), default=None)
        delta = abs(ref.energy - lv.energy) if ref is not None else math.inf
        ok = ref is not None and delta < tol and ref.degeneracy == lv.degeneracy
        if ref is not None and delta < tol:
            used.add(ref.energy)
        rows.append({"E": lv.energy, "degeneracy": lv.degeneracy,
                     "E_ref": None if ref is None else ref.energy,
                     "degeneracy_ref": None if ref is None else ref.degeneracy,
                     "delta": delta, "match": bool(ok)})
    missing = [r.energy for r in reference if r.energy <= top and r.energy not in used]
    finite = [r["delta"] for r in rows if math.isfinite(r["delta"])]
    return {"numeric": rows, "unmatched_reference": missing,
            "max_abs_delta": max(finite) if finite else None, "tol": tol,
            "pass": bool(rows) and all(r["match"] for r in rows) and not missing}


def cmd_verify(args):
    from .schrodinger_oracle import spectrum_2d

    kw = _params(args, args.id)
    if args.expected:
        with open(args.expected) as fh:
            report = json.load(fh)
        if report.get("potential") != args.id:
            raise UnknownPotential(f"expected file is for {report.get('potential')!r}, not {args.id!r}")
    else:
        report = _spectrum_report(args.id, kw, args.pmax if args.pmax is not None else 2 * args.levels)
    num = spectrum_2d(args.id, k=args.levels, n=args.grid_n, L=args.box, **kw)
    report["verification"] = compare_levels(num.levels(), _reference_levels(report))
    ver = report["verification"]
    rows = [(r["E"], r["degeneracy"], r["E_ref"], r["degeneracy_ref"], r["delta"],
             "ok" if r["match"] else "MISMATCH") for r in ver["numeric"]]
    extra = (f"\nmax |dE| = {_num(ver['max_abs_delta'])}   "
             f"verdict: {'PASS' if ver['pass'] else 'FAIL'}\n")
    if ver["unmatched_reference"]:
        extra += "reference levels with no numeric partner: " + \
            ", ".join(f"{e:.10g}" for e in ver["unmatched_reference"]) + "\n"
    return _render(args.format, report,
                   ("E_numeric", "deg", "E_algebraic", "deg_alg", "|dE|", "status"), rows, extra)


def _susy_checks(a0, hbar):
    from . import susy_factorization as sf

    grid = sf.default_grid(a0)
    x, h = grid.x, grid.h
    pair = sf.partner_pair_p1(a0, hbar)
    phi0 = sf.ground_state_p1(a0, hbar, grid)
    zero = float(np.linalg.norm(pair.b(phi0.values, x, h)) / np.linalg.norm(phi0.values))
    raised = []
    for k in range(4):
        psi = sf.WaveFunction1D(x, sf.harmonic_state(k, x, a0))
        E2 = hbar**2 * (k + 0.5) / (2 * a0**2)
        r = sf.raise_eigenfunction(pair, psi, E2).values
        cf = sf.raised_closed(k, x, a0)
        raised.append(float(np.max(np.abs(r - np.sign(np.dot(r, cf)) * cf))))
    l1, l2 = sf.partner_levels(pair, k=8)
    M, M_dag, _, _ = sf.ladder_operators_p1(a0, hbar, grid)
    nrm = np.linalg.norm(phi0.values)
    return {"b_phi0_residual": zero, "raised_vs_closed_max": max(raised),
            "isospectral_max_delta": float(np.max(np.abs(np.asarray(l1)[1:] - np.asarray(l2)))),
            "M_phi0": float(np.linalg.norm(M(phi0.values)) / nrm),
            "Mdag_phi0": float(np.linalg.norm(M_dag(phi0.values)) / nrm)}


def cmd_susy(args):
    from .susy_factorization import susy_spectrum

    kw = _params(args, args.id)
    if "a" in kw:
        raise SuperintError("susy uses the a = i*a0 mode; pass --a0, not --a")
    sp = susy_spectrum(args.id, args.emax, hbar=kw["hbar"], a0=kw["a0"])
    states = [{"E": s.energy, "kx": s.kx, "ky": s.ky, "x_form": s.x_form, "y_form": s.y_form,
               "family_id": s.family_id} for s in sp.solutions]
    report = {"potential": args.id, "params": sp.parameters,
              "levels": [{"E": lv.energy, "degeneracy": lv.degeneracy, "families": list(lv.families)}
                         for lv in sp.levels()],
              "states": states}
    extra = ""
    if args.checks:
        if args.id != "p1":
            raise SuperintError("--checks is implemented for p1 only")
        report["checks"] = _susy_checks(kw["a0"], kw["hbar"])
        extra = "\n" + "".join(f"{k}: {_num(v)}\n" for k, v in report["checks"].items())
    rows = [(lv["E"], lv["degeneracy"], ",".join(lv["families"])) for lv in report["levels"]]
    return _render(args.format, report, ("E", "degeneracy", "families"), rows, extra)


def cmd_pt(args):
    from . import pt_complexification as pt

    eps = args.epsilon if args.epsilon is not None else pt.default_epsilon(args.a_pt)
    recs = pt.pt_records(args.part, a=args.a_pt, hbar=args.hbar, eps=eps, k=args.levels,
                         n=args.grid_n)
    sp = pt.pt_spectrum_2d(a=args.a_pt, hbar=args.hbar, eps=eps, k=args.levels, n=args.grid_n)
    report = {"params": {"a": args.a_pt, "hbar": args.hbar, "eps": eps, "part": args.part},
              "records": [r.to_json() for r in recs],
              "spectrum_2d": [{"E": lv.energy, "degeneracy": lv.degeneracy} for lv in sp.levels()],
              "max_imag_2d": sp.parameters["max_imag"]}
    rows = [(r.index, r.re, r.im, r.sigma) for r in recs]
    extra = "\n2D levels: " + ", ".join(f"{lv.energy:.8g}({lv.degeneracy})" for lv in sp.levels()) + "\n"
    return _render(args.format, report, ("n", "Re E", "Im E", "sigma"), rows, extra)


def cmd_quintic(args):
    from .susy_factorization import quintic_subset_check

    a0 = args.a0
    rep = quintic_subset_check(a0=a0, hbar=args.hbar, basis_size=args.basis)
    rows = [(k, v) for k, v in rep["residuals"].items()]
    return _render(args.format, rep, ("relation", "relative residual"), rows)


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--hbar", type=_positive, default=1.0)
    common.add_argument("--omega", type=_positive, default=1.0)
    common.add_argument("--a0", type=_positive, default=1.0, help="a = i*a0 (default mode)")
    common.add_argument("--a", type=_positive, default=None, help="real a (singular mode)")
    common.add_argument("--b", type=float, default=1.0)
    common.add_argument("--c", type=float, default=1.0)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="superint",
                                description="Cubic-algebra spectra of superintegrable potentials.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("list", parents=[common], help="catalog ids and formulas")
    s.set_defaults(func=cmd_list)

    s = sub.add_parser("algebra", parents=[common], help="cubic algebra coefficients")
    s.add_argument("id")
    s.set_defaults(func=cmd_algebra)

    s = sub.add_parser("spectrum", parents=[common], help="unitary representations up to --pmax")
    s.add_argument("id")
    s.add_argument("--pmax", type=int, default=4)
    s.add_argument("--all", action="store_true", help="table: include unphysical solutions")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("verify", parents=[common], help="algebraic vs numeric spectrum")
    s.add_argument("id")
    s.add_argument("--levels", type=_pos_int, default=10)
    s.add_argument("--grid-n", type=_pos_int, default=4000)
    s.add_argument("--box", type=_positive, default=None)
    s.add_argument("--pmax", type=int, default=None, help="default: 2 * levels")
    s.add_argument("--expected", help="JSON report from 'spectrum --format json'")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("susy", parents=[common], help="spectrum from the factorized 1D blocks")
    s.add_argument("id")
    s.add_argument("--emax", type=float, default=3.0)
    s.add_argument("--checks", action="store_true", help="zero mode, raising and ladder residuals (p1)")
    s.set_defaults(func=cmd_susy)

    s = sub.add_parser("pt", parents=[common], help="complexified p1 with real a")
    s.add_argument("--epsilon", type=_positive, default=None, help="default 0.1*a")
    s.add_argument("--levels", type=_pos_int, default=8)
    s.add_argument("--part", choices=("h1", "h2", "x", "y"), default="h1")
    s.add_argument("--grid-n", type=_pos_int, default=2000)
    s.set_defaults(func=cmd_pt)

    s = sub.add_parser("quintic", parents=[common], help="quintic relation residuals")
    s.add_argument("--basis", type=int, default=30)
    s.set_defaults(func=cmd_quintic)
    return p


def run(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                         format="%(levelname)s: %(message)s", stream=sys.stderr)
    if args.command == "pt":
        args.a_pt = args.a if args.a is not None else 1.0
    if getattr(args, "pmax", None) is not None and args.pmax < 0:
        parser.error("--pmax must be >= 0")
    try:
        text = args.func(args)
    except SuperintError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        log.info("wrote %s", args.output)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
