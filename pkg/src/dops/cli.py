"""Command-line entry point.  Each subcommand loads input, calls the library, writes JSON lines.

Exit codes: 0 when every verification passes, 1 when one fails (the first
failing identity goes to stderr), 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import io
from .checks import CHECKS, is_zero, random_perturbation, residual_terms, run_check
from .copoly import co_dilated, co_dilated_closed_form, co_modified, co_recursive, co_recursive_closed_form
from .core import RecCoeffs, associated, generate, random_coeffs
from .darboux import darboux_chain, jacobi_matrix, kernel, lu, lu_residual, ul, ul_residual
from .dsym import (LINK_SELECTORS, SymData, chain_components, component_coeffs_checked, component_horizon,
                   hahn_check, hahn_positive, link_sweep)
from .errors import DopsError
from .fixtures import FIXTURES, fixture
from .forms import moments, quasi_detect, uvarov
from .poly import to_fraction
from .zeros import interlacing_check, oscillation_check, spectra_for_interlacing, tn_check, zero_structure, zeros_of


class VerificationFailed(Exception):
    pass


class InputError(Exception):
    pass


# --- input -------------------------------------------------------------------

def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        key, _, val = item.partition("=")
        if not _:
            raise InputError(f"--param expects key=value, got {item!r}")
        if "," in val:
            out[key] = [v for v in val.split(",") if v]
        else:
            try:
                out[key] = int(val)
            except ValueError:
                out[key] = val
    return out


def horizon_for(d: int, n: int) -> int:
    # the 20-term Stieltjes checks read about n + 21 + d coefficients
    return max(n, 8) + 4 * (d + 1) + 24


def _horizon(args) -> int:
    return horizon_for(args.d, args.n)


def load_descriptor(args, rng: random.Random):
    """--input file, --fixture with --param, --rho for a constant symmetric family, else random."""
    if args.input:
        return io.load_coeffs(args.input)
    if args.fixture:
        params = _parse_params(args.param)
        params.setdefault("d", args.d)
        return fixture(args.fixture, **params)
    if getattr(args, "rho", None) is not None:
        return SymData.constant(args.d, to_fraction(args.rho), 4 * _horizon(args))
    return random_coeffs(args.d, _horizon(args), rng)


def as_coeffs(obj, component: int | None = None) -> RecCoeffs:
    if isinstance(obj, SymData):
        if component is None:
            return obj.as_coeffs()
        return component_coeffs_checked(obj, component, component_horizon(obj, component))
    return obj


# --- report plumbing ------------------------------------------------------------

class Report:
    def __init__(self, args):
        self.args = args
        self.lines: list[str] = []
        self.failure: str | None = None

    def emit(self, record: dict) -> None:
        self.lines.append(io.dumps(record))

    def fail(self, what: str) -> None:
        if self.failure is None:
            self.failure = what

    def check(self, what: str, ok: bool) -> bool:
        if not ok:
            self.fail(what)
        return ok

    def write(self, text: str | None = None) -> None:
        body = text if text is not None else "".join(line + "\n" for line in self.lines)
        if self.args.output:
            with open(self.args.output, "w") as fh:
                fh.write(body)
        else:
            sys.stdout.write(body)


def _seq_json(seq) -> list:
    return [io.poly_json(p) for p in seq]


# --- subcommands ----------------------------------------------------------------

def cmd_gen(args, rep: Report, rng):
    c = as_coeffs(load_descriptor(args, rng), args.component)
    rep.emit({"command": "gen", "coeffs": c.to_json(), "P": _seq_json(generate(c, args.n))})


def cmd_assoc(args, rep, rng):
    c = as_coeffs(load_descriptor(args, rng), args.component)
    a = associated(c, args.r)
    rep.emit({"command": "assoc", "r": args.r, "coeffs": a.to_json(), "P": _seq_json(generate(a, args.n))})


def cmd_copoly(args, rep, rng):
    c = as_coeffs(load_descriptor(args, rng), args.component)
    p = io.perturbation_from_obj(io.read_json(args.perturbation)) if args.perturbation else random_perturbation(c.d, rng)
    N = min(args.n, c.horizon - c.d - 2)
    if args.kind == "co_recursive":
        out, res = co_recursive(c, p), co_recursive_closed_form(c, p, N)[1]
    elif args.kind == "co_dilated":
        out, res = co_dilated(c, p.k + 1, p.lam), co_dilated_closed_form(c, p.k + 1, p.lam, N)
    else:
        out, res = co_modified(c, p, N)
    ok = rep.check(f"{args.kind} closed form", is_zero(res))
    rep.emit({"command": "copoly", "kind": args.kind, "perturbation": p.to_json(), "coeffs": out.to_json(),
              "residual_is_zero": ok, "residual_coeffs": residual_terms(res)})


def cmd_darboux(args, rep, rng):
    c = as_coeffs(load_descriptor(args, rng), args.component)
    N = args.n
    f = lu(c, N)
    g = ul(c, N=N)
    rec = {"command": "darboux", "n": N, "m": [io.rat(v) for v in f.m],
           "L": [[io.rat(v) for v in row] for row in f.L],
           "lu_residual_is_zero": rep.check("lu", is_zero(lu_residual(c, f))),
           "ul_residual_is_zero": rep.check("ul", is_zero(ul_residual(c, g)))}
    if args.kernel:
        k = kernel(c, N)
        rec["kernel"] = {"coeffs": k.coeffs.truncate(min(N, k.coeffs.horizon)).to_json(), "K": _seq_json(k.K),
                         "residual_is_zero": rep.check("kernel", k.all_zero())}
    if args.chain:
        links, factor, res = darboux_chain(c, N)
        rec["chain"] = {"coeffs": [l.coeffs.truncate(min(N, l.coeffs.horizon)).to_json() for l in links],
                        "positive": factor.positive,
                        "residual_is_zero": rep.check("darboux chain", is_zero(res))}
    rep.emit(rec)


def cmd_dsym(args, rep, rng):
    s = load_descriptor(args, rng)
    if not isinstance(s, SymData):
        raise InputError("dsym needs SymData input (--input with rho, or --rho)")
    d = s.d
    rec = {"command": "dsym", "d": d}
    if args.components or args.emit_component is not None:
        comps = []
        for i in range(d + 1):
            ci = component_coeffs_checked(s, i, min(args.n, component_horizon(s, i)))
            comps.append(ci)
        if args.emit_component is not None:
            rep.write(io.dumps(comps[args.emit_component].to_json()) + "\n")
            return "written"
        rec["components"] = [ci.to_json() for ci in comps]
    if args.links:
        links = {}
        for which in LINK_SELECTORS:
            pairs = link_sweep(s, which, min(args.n, 6))
            links[which] = rep.check(f"link {which}", all(is_zero(r) for _, r in pairs))
        chain, comps, res = chain_components(s, min(args.n, 8))
        links["chain"] = rep.check("chain equals components", chain == comps and is_zero(res))
        rec["links"] = links
    if args.hahn:
        objs = [("family", s)] + [(f"component{i}", component_coeffs_checked(s, i, 24)) for i in range(d + 1)]
        hahn = {}
        for name, obj in objs:
            reports = hahn_check(obj, 3)
            ok = hahn_positive(reports)
            rep.check(f"hahn {name}", ok)
            hahn[name] = {"positive": ok, "orders": [r.to_json() for r in reports]}
        rec["hahn"] = hahn
    rep.emit(rec)


def _instance(job):
    name, d, n, seed = job
    rng = random.Random(seed)
    c = random_coeffs(d, horizon_for(d, n), rng)
    return [dict(r, d=d, seed=seed) for r in run_check(name, c, n, rng)]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("DOPS_THREADS", "1")))
    except ValueError:
        return 1


def _run_jobs(jobs):
    if _threads() == 1 or len(jobs) == 1:
        return [_instance(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=_threads()) as ex:
        return list(ex.map(_instance, jobs))


def _emit_checks(rep, batches):
    for batch in batches:
        for r in batch:
            rep.emit(r)
            if not r["residual_is_zero"]:
                rep.fail(f"{r['identity']} {r['params']}")


def cmd_verify(args, rep, rng):
    names = sorted(CHECKS) if args.identity == "all" else [args.identity]
    if args.input or args.fixture:
        c = as_coeffs(load_descriptor(args, rng), args.component)
        _emit_checks(rep, [[dict(r, source="input") for r in run_check(nm, c, args.n, rng)] for nm in names])
        return
    jobs = [(nm, args.d, args.n, args.seed + i) for nm in names for i in range(args.count)]
    _emit_checks(rep, _run_jobs(jobs))


def cmd_sweep(args, rep, rng):
    names = sorted(CHECKS) if args.identity == "all" else [args.identity]
    ds = [args.d] if args.d_max is None else list(range(1, args.d_max + 1))
    jobs = [(nm, d, n, args.seed + i) for nm in names for d in ds
            if not (nm in ("cd_product", "cd_sum") and d != 2)
            for n in range(args.n + 1) for i in range(args.count)]
    _emit_checks(rep, _run_jobs(jobs))


def cmd_zeros(args, rep, rng):
    c = as_coeffs(load_descriptor(args, rng), args.component)
    tol = dict(tol_real=args.tol_real, tol_gap=args.tol_gap)
    zs = zeros_of(c, args.n, **tol)
    certs = {"all_real": zs.all_real(), "refined": all(r.refined for r in zs.roots)}
    if args.check_tn:
        J = jacobi_matrix(c, args.n)
        certs["tn"] = rep.check("tn", bool(tn_check(J, "constructive")))
    if args.check_oscillation:
        certs["oscillation"] = rep.check("oscillation", oscillation_check(jacobi_matrix(c, args.n)))
    if args.interlace_with:
        a, b = spectra_for_interlacing(c, args.n, args.interlace_with, **tol)
        certs[f"interlace_{args.interlace_with}"] = rep.check(f"interlacing with {args.interlace_with}",
                                                              interlacing_check(a, b))
    st = zero_structure(c, args.n)
    certs["max_multiplicity"] = st.max_multiplicity
    certs["no_common_zero"] = st.common_gcd_degree == 0
    rep.check("multiplicity bound", st.ok(c.d))
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for key in sorted(certs):
        buf.write(f"# {key}={str(certs[key]).lower()}\n")
    w.writerow(["index", "re", "im", "refined"])
    for i, (re, im, ok) in enumerate(zs.to_rows()):
        w.writerow([i, repr(re), repr(im), str(ok).lower()])
    rep.write(buf.getvalue())
    return "written"


def cmd_moments(args, rep, rng):
    c = as_coeffs(load_descriptor(args, rng), args.component)
    mt = moments(c, args.n, count=args.count)
    rep.emit(dict(mt.to_json(), command="moments"))


def cmd_uvarov(args, rep, rng):
    c = as_coeffs(load_descriptor(args, rng), args.component)
    res = uvarov(c, to_fraction(args.c), to_fraction(args.lam), args.n)
    ok = rep.check("uvarov value at c", is_zero(res.at_c))
    rep.emit({"command": "uvarov", "c": args.c, "lambda": args.lam, "Q": _seq_json(res.Q),
              "at_c_is_zero": ok, "orthogonality_defects": len(res.defects)})


def cmd_quasi(args, rep, rng):
    c = as_coeffs(load_descriptor(args, rng), args.component)
    k = kernel(c, args.n)
    q = quasi_detect(generate(c, args.n), k.K, c.d)
    f = lu(c, args.n + 1)
    bands = all(row[j] == f.L[n][n - j] for n, row in enumerate(q.a) for j in range(len(row)))
    rep.check("quasi order 1", q.l == 1)
    rep.check("quasi table equals L bands", bands)
    rep.emit({"command": "quasi", "l": q.l, "a": [[io.rat(v) for v in row] for row in q.a],
              "matches_L_bands": bands})


COMMANDS = {
    "gen": cmd_gen, "assoc": cmd_assoc, "copoly": cmd_copoly, "darboux": cmd_darboux, "dsym": cmd_dsym,
    "verify": cmd_verify, "zeros": cmd_zeros, "moments": cmd_moments, "uvarov": cmd_uvarov,
    "quasi": cmd_quasi, "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=2)
    common.add_argument("--n", type=int, default=6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--input")
    common.add_argument("--output")
    common.add_argument("--fixture", choices=sorted(FIXTURES))
    common.add_argument("--param", action="append", metavar="KEY=VALUE")
    common.add_argument("--component", type=int, help="use this component of SymData input instead of the family")
    common.add_argument("--timing", action="store_true", help="append a timing line (breaks byte-identity)")

    p = argparse.ArgumentParser(prog="dops", description="Exact d-orthogonal polynomial toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common])
    a = sub.add_parser("assoc", parents=[common])
    a.add_argument("--r", type=int, default=1)
    cp = sub.add_parser("copoly", parents=[common])
    cp.add_argument("--kind", choices=["co_recursive", "co_dilated", "co_modified"], default="co_recursive")
    cp.add_argument("--perturbation")
    dx = sub.add_parser("darboux", parents=[common])
    dx.add_argument("--chain", action="store_true")
    dx.add_argument("--kernel", action="store_true")
    ds = sub.add_parser("dsym", parents=[common])
    ds.add_argument("--rho")
    ds.add_argument("--components", action="store_true")
    ds.add_argument("--emit-component", type=int)
    ds.add_argument("--links", action="store_true")
    ds.add_argument("--hahn", action="store_true")
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("--identity", default="delta", choices=sorted(CHECKS) + ["all"])
    v.add_argument("--count", type=int, default=1)
    z = sub.add_parser("zeros", parents=[common])
    z.add_argument("--rho")
    z.add_argument("--check-tn", action="store_true")
    z.add_argument("--check-oscillation", action="store_true")
    z.add_argument("--interlace-with", choices=["prev", "assoc1"])
    z.add_argument("--tol-real", type=float, default=1e-9)
    z.add_argument("--tol-gap", type=float, default=1e-8)
    m = sub.add_parser("moments", parents=[common])
    m.add_argument("--count", type=int)
    u = sub.add_parser("uvarov", parents=[common])
    u.add_argument("--c", default="1/2")
    u.add_argument("--lam", default="1")
    sub.add_parser("quasi", parents=[common])
    sw = sub.add_parser("sweep", parents=[common])
    sw.add_argument("--identity", default="all", choices=sorted(CHECKS) + ["all"])
    sw.add_argument("--count", type=int, default=3)
    sw.add_argument("--d-max", type=int)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    rng = random.Random(args.seed)
    rep = Report(args)
    t0 = time.perf_counter()
    try:
        done = COMMANDS[args.command](args, rep, rng)
    except (io.SchemaError, InputError, DopsError, ValueError, OSError) as exc:
        print(f"dops: error: {exc}", file=sys.stderr)
        return 2
    if done != "written":
        status = "fail" if rep.failure else "ok"
        rep.emit({"status": status, "first_failure": rep.failure})
        if args.timing:
            rep.emit({"timing_s": round(time.perf_counter() - t0, 3)})
        rep.write()
    if rep.failure:
        print(f"dops: verification failed: {rep.failure}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
