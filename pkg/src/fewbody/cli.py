"""Command line entry point.

Exit codes: 0 on success or a passing verdict, 1 when a verification fails,
2 on bad input (malformed files, dimension cap, invalid parameters).
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import os
import sys

import numpy as np

from . import bounds, moments
from .decomposition import decompose
from .io import InputError, atomic_write, dumps, load_json, load_operator, load_state
from .operators import analyze_profile, center
from .spectral import DimensionError, StateVector, mgf_exact, spectral_distribution, tail_exact
from .verifier import SweepPlan, default_plan, run_sweep

THEOREMS = ("lemma1", "lemma3", "thm1", "cor2", "thm3", "cor4", "lemma5", "thm6", "akl", "chebyshev")


class VerificationFailed(Exception):
    pass


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        atomic_write(args.out, text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _csv(header, *cols) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in zip(*cols):
        w.writerow([f"{float(v):.17g}" for v in row])
    return buf.getvalue()


def _pure_vector(state) -> StateVector:
    vecs = []
    for i, f in enumerate(state.factors):
        w, v = np.linalg.eigh(f)
        if w[-1] < 1 - 1e-10:
            raise InputError(f"factor {i} is mixed; a pure product state is required here")
        vecs.append(v[:, -1])
    return StateVector.product(vecs)


def _need(args, name, value=None):
    if getattr(args, name, None) is None:
        raise InputError(f"--{name.replace('_', '-')} is required for theorem {args.theorem}")
    return getattr(args, name) if value is None else value


def cmd_analyze(args):
    _emit(args, dumps(analyze_profile(load_operator(args.input)).as_dict()))


def cmd_decompose(args):
    _emit(args, dumps(decompose(load_operator(args.input), args.layers).report()))


def cmd_mgf(args):
    op = load_operator(args.input)
    state = load_state(args.state, op.lattice)
    centered = center(op, state)
    p = analyze_profile(centered)
    tau_max = args.tau_max if args.tau_max is not None else (1 / (4 * p.lam) if p.lam else 1.0)
    taus = np.linspace(-tau_max, tau_max, args.points)
    dist = spectral_distribution(centered, state)
    _emit(args, _csv(("tau", "exact_value"), taus, mgf_exact(dist, taus)))


def cmd_tail(args):
    op = load_operator(args.input)
    state = load_state(args.state, op.lattice)
    dist = spectral_distribution(center(op, state), state)
    top = float(np.max(np.abs(dist.eigenvalues)))
    xs = np.linspace(0.0, top, args.points)
    _emit(args, _csv(("x", "exact_value"), xs, tail_exact(dist, xs)))


def _certify(args):
    op = load_operator(args.input)
    other = load_operator(args.input_b) if args.input_b else None
    state = load_state(args.state, op.lattice) if args.state else None
    th = args.theorem
    if th == "lemma1":
        base_op = load_operator(_need(args, "base"))
        if len(base_op.terms) != 1:
            raise InputError("--base must hold exactly one term")
        chain = [op] + ([other] if other else [])
        return bounds.certify_lemma1(chain, base_op.terms[0]).as_dict()
    if th == "thm1":
        cert = bounds.certify_thm1(op, _need(args, "input_b", other), _need(args, "state", state),
                                   args.commutator_mode)
    elif th == "chebyshev":
        cert = bounds.certify_chebyshev(op, _need(args, "input_b", other), _need(args, "state", state))
    elif th == "lemma3":
        cert = bounds.certify_lemma3(op, _need(args, "state", state))
    elif th in ("cor4", "akl"):
        probe = load_operator(_need(args, "probe"))
        omega = _pure_vector(_need(args, "state", state))
        cert = (bounds.certify_cor4 if th == "cor4" else bounds.certify_akl)(op, probe, omega)
    else:
        layering = decompose(op, args.layers)
        state = _need(args, "state", state)
        if th == "cor2":
            cert = bounds.certify_cor2(layering.layers, state)
        elif th == "thm3":
            mgf_c, tail_c = bounds.certify_thm3(layering, state)
            return _pair("thm3", mgf_c, tail_c)
        elif th == "lemma5":
            mgf_c, tail_c = bounds.certify_lemma5(layering, state, args.variant)
            return _pair("lemma5", mgf_c, tail_c)
        elif th == "thm6":
            mt = moments.moment_tail_bound(layering, state, args.m_max, args.variant)
            dist = spectral_distribution(layering.centered(state).op, state)
            top = float(np.max(np.abs(dist.eigenvalues)))
            xs = np.linspace(top / 100 if top else 1e-3, 1.1 * top + 1e-9, bounds.GRID_POINTS)
            exact = np.maximum(tail_exact(dist, xs, "geq"), tail_exact(dist, xs, "leq"))
            cert = bounds.BoundCertificate("thm6", xs, mt.tail(xs), exact, mt.constants, grid_name="x",
                                           extra={"moment_bounds": {str(k): v for k, v in mt.moment_bounds.items()}})
        else:
            raise InputError(f"unknown theorem {th!r}")
    return cert.as_dict()


def _pair(name, mgf_cert, tail_cert):
    # MGF certificate at top level, tail certificate nested
    out = mgf_cert.as_dict()
    tail = tail_cert.as_dict()
    out["tail"] = tail
    out["margin_min"] = min(out["margin_min"], tail["margin_min"])
    out["verdict"] = "pass" if out["verdict"] == tail["verdict"] == "pass" else "fail"
    return out


def cmd_certify(args):
    out = _certify(args)
    _emit(args, dumps(out))
    if out["verdict"] != "pass":
        raise VerificationFailed(f"{args.theorem} certificate failed")


def cmd_moments(args):
    op = load_operator(args.input)
    state = load_state(args.state, op.lattice)
    layering = decompose(op, args.layers)
    mt = moments.moment_tail_bound(layering, state, args.m_max, args.variant)
    try:
        dist = spectral_distribution(layering.centered(state).op, state)
        top = float(np.max(np.abs(dist.eigenvalues)))
        exact = None
    except DimensionError:
        dist, top = None, mt.x_max or 1.0
    xs = np.linspace(top / 100 if top else 1e-3, 1.1 * top + 1e-9, args.points)
    bound = mt.tail(xs)
    if dist is not None:
        exact = np.maximum(tail_exact(dist, xs, "geq"), tail_exact(dist, xs, "leq"))
        text = _csv(("x", "bound", "exact"), xs, bound, exact)
    else:
        text = _csv(("x", "bound"), xs, bound)
    _emit(args, text)
    if exact is not None and np.any(bound < exact - 1e-9):
        raise VerificationFailed("moment tail bound below exact tail")


def cmd_verify(args):
    plan = SweepPlan.from_dict(load_json(args.plan)) if args.plan else default_plan()
    if args.seed is not None:
        plan = SweepPlan(args.seed, plan.families)
    report = run_sweep(plan, workers=args.workers)
    _emit(args, report.to_json())
    if report.verdict != "pass":
        raise VerificationFailed("sweep failed")


def cmd_appendix_check(args):
    rows = moments.appendix_table(args.nbar_max)
    bad = [r for r in rows if not (r["theta_ok"] and r["count_ok"])]
    lines = [f"{'n_bar':>5} {'m':>3} {'theta':>6} {'count':>24} {'cap':>24}"]
    for r in rows:
        lines.append(f"{r['n_bar']:>5} {r['m']:>3} {'ok' if r['theta_ok'] else 'FAIL':>6} "
                     f"{r['count']:>24} {r['count_cap']:>24}")
    lines.append(f"{len(rows)} cases, {len(bad)} mismatches")
    _emit(args, "\n".join(lines))
    if bad:
        raise VerificationFailed("appendix check failed")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fewbody", description=__doc__.splitlines()[0])
    p.add_argument("--dim-cap", type=int, help="override the dense Hilbert-space dimension cap")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, needs_input=True, needs_state=False):
        sp = sub.add_parser(name, help=help_)
        if needs_input:
            sp.add_argument("--input", required=True, help="operator JSON file")
        if needs_state:
            sp.add_argument("--state", required=True, help="product state JSON file")
        sp.add_argument("--out", help="output path (stdout if omitted)")
        sp.set_defaults(func=func)
        return sp

    add("analyze", cmd_analyze, "locality / extensiveness profile")
    sp = add("decompose", cmd_decompose, "layer into non-overlapping parts")
    sp.add_argument("--layers", type=int)
    sp = add("mgf", cmd_mgf, "exact log-MGF curve (CSV)", needs_state=True)
    sp.add_argument("--points", type=int, default=bounds.GRID_POINTS)
    sp.add_argument("--tau-max", type=float)
    sp = add("tail", cmd_tail, "exact tail curve (CSV)", needs_state=True)
    sp.add_argument("--points", type=int, default=bounds.GRID_POINTS)

    sp = add("certify", cmd_certify, "certify one bound against exact diagonalization")
    sp.add_argument("--theorem", required=True, choices=THEOREMS)
    sp.add_argument("--state")
    sp.add_argument("--input-b", help="second operator (thm1, chebyshev, lemma1)")
    sp.add_argument("--probe", help="probe operator A (cor4, akl)")
    sp.add_argument("--base", help="single-term base operator (lemma1)")
    sp.add_argument("--layers", type=int)
    sp.add_argument("--variant", choices=("statement", "proof"), default="statement")
    sp.add_argument("--commutator-mode", choices=("exact", "lambda_gN"), default="exact")
    sp.add_argument("--m-max", type=int, default=moments.DEFAULT_M_MAX)

    sp = add("moments", cmd_moments, "moment-based tail curve (CSV)", needs_state=True)
    sp.add_argument("--layers", type=int)
    sp.add_argument("--m-max", type=int, default=moments.DEFAULT_M_MAX)
    sp.add_argument("--variant", choices=("statement", "proof"), default="statement")
    sp.add_argument("--points", type=int, default=bounds.GRID_POINTS)

    sp = add("verify", cmd_verify, "randomized soundness sweep", needs_input=False)
    sp.add_argument("--plan")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("appendix-check", cmd_appendix_check, "exact theta / summand-count table", needs_input=False)
    sp.add_argument("--nbar-max", type=int, default=30)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get("FEWBODY_DIM_CAP")
    if args.dim_cap:
        os.environ["FEWBODY_DIM_CAP"] = str(args.dim_cap)
    try:
        return _run(args)
    finally:
        # in-process callers should not inherit the override
        if saved is None:
            os.environ.pop("FEWBODY_DIM_CAP", None)
        else:
            os.environ["FEWBODY_DIM_CAP"] = saved


def _run(args) -> int:
    for attr in ("input", "state", "input_b", "probe", "base", "plan"):
        path = getattr(args, attr, None)
        if path and not os.path.exists(path):
            print(f"error: {attr.replace('_', '-')} file not found: {path}", file=sys.stderr)
            return 2
    try:
        args.func(args)
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (InputError, DimensionError, bounds.DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
