"""``frame-forge`` command-line front end.

Exit codes: 0 when every verdict passes, 1 when a verification fails (the
report is still written), 2 for invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import random
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .checks import VerificationError
from .dyadic import DEFAULT_WINDOW_EXP, PeriodicSet, WindowError, num_exp
from .filterbank import SQRT_HALF, check_FP, check_LP, extend_lowpass, make_highpass
from .io import (
    CATALOG,
    SCHEMA,
    InputError,
    Source,
    catalog,
    dumps,
    lineset_to_json,
    parse_pset,
    pset_from_json,
    pset_to_json,
    pstep_to_json,
    read_source,
    step_to_json,
)
from .naimark import (
    MaximalizationChoices,
    check_projection_conditions,
    is_maximal,
    maximalize,
    project,
    smith_barnwell_defect,
)
from .scaling import ScalingPair, is_scaling
from .stepfn import VALUE_TOL, PeriodicStepFunction, StepFunction
from .unimodular import delta
from .wavelet import Wavelet, gauge_wavelet, is_parseval, synthesize, telescoping

CSV_HEADER = ["xi_num", "xi_exp", "re", "im", "abs"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Run:
    """Collects the report of one command."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.args = args
        self.report: dict = {"ff-schema": SCHEMA, "command": command, "version": __version__,
                             "inputs": {}, "verdicts": {}, "max_dev": {}, "witnesses": {}}
        self.output_fn = None

    def source(self, ref: str, role: str) -> Source:
        src = read_source(ref, self.args.window_exp)
        self.report["inputs"][role] = {"name": src.label, "sha256": src.sha256}
        return src

    def verdict(self, name: str, check) -> None:
        self.report["verdicts"][name] = bool(check)
        dev = getattr(check, "max_dev", None)
        if dev is not None:
            self.report["max_dev"][name] = dev
        wit = getattr(check, "witness", None)
        if wit is not None:
            self.report["witnesses"][name] = wit.to_json()

    @property
    def ok(self) -> bool:
        return all(self.report["verdicts"].values())


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _phase_arg(run: Run, value: Optional[str], role: str):
    """``one`` (default), ``random`` (seeded ±1 step), or a pstep file."""
    if value in (None, "one", "1"):
        return None
    if value == "random":
        return random_sign_step(random.Random(run.args.seed))
    return run.source(value, role).pstep(role)


def random_sign_step(rng: random.Random, depth: int = 3) -> PeriodicStepFunction:
    """Random ±1 step function on the grid of mesh ``2**-depth``."""
    n = 1 << depth
    return PeriodicStepFunction(tuple((Fraction(k, n), Fraction(k + 1, n), rng.choice((1, -1)))
                                      for k in range(n)))


def _scaling_from(run: Run, ref: str) -> ScalingPair:
    phi = run.source(ref, "scaling").step("phi")
    return is_scaling(phi, run.args.tol)


def _scaling_bundle(pair: ScalingPair) -> dict:
    return {"kind": "scaling",
            "phi": step_to_json(pair.phi_hat),
            "m0": pstep_to_json(pair.m0) if pair.m0 is not None else None,
            "C": lineset_to_json(pair.C), "S": pset_to_json(pair.S),
            "verdicts": dict(pair.verdicts),
            "witnesses": {k: c.to_json() for k, c in pair.witnesses.items()}}


def _set_arg(run: Run, text: str) -> PeriodicSet:
    if ":" in text and not text.endswith(".json"):
        return parse_pset(text)
    return pset_from_json(run.source(text, "set").obj)


def _record_scaling(run: Run, pair: ScalingPair) -> None:
    for k in ("S1", "S2", "S3"):
        run.report["verdicts"][k] = pair.verdicts[k]
        if k in pair.witnesses:
            run.report["witnesses"][k] = pair.witnesses[k].to_json()


def _wavelet_from(run: Run, ref: str) -> Wavelet:
    src = run.source(ref, "wavelet")
    psi = src.step("psi")
    if src.get("kind") == "wavelet":
        return Wavelet(psi, src.step("phi"), src.pstep("m0"), src.pstep("m1"))
    return Wavelet(psi)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_catalog(run: Run) -> int:
    if run.args.name is None:
        run.report["catalog"] = {k: kind for k, (kind, _) in sorted(CATALOG.items())}
        return EXIT_OK
    f = catalog(run.args.name, run.args.window_exp)
    run.report["function"] = step_to_json(f)
    run.output_fn = f
    return EXIT_OK


def cmd_verify_scaling(run: Run) -> int:
    pair = _scaling_from(run, run.args.source)
    _record_scaling(run, pair)
    if pair.m0 is not None:
        lp = check_LP(pair.m0, pair.C, run.args.tol)
        run.verdict("admissible", lp["admissible"])
    maximal = is_maximal(pair.phi_hat)
    run.report["is_maximal"] = maximal.ok
    if maximal.witness is not None:
        run.report["witnesses"]["is_maximal"] = maximal.witness.to_json()
    run.report["norm_sq"] = pair.phi_hat.norm_sq()
    run.report["bundle"] = _scaling_bundle(pair)
    return EXIT_OK if run.ok else EXIT_FAIL


def cmd_synthesize(run: Run) -> int:
    pair = _scaling_from(run, run.args.scaling or run.args.source)
    _record_scaling(run, pair)
    if not pair.ok:
        return EXIT_FAIL
    mu0 = _phase_arg(run, run.args.mu0, "mu0")
    mu1 = _phase_arg(run, run.args.mu1, "mu1")
    m0 = extend_lowpass(pair.m0, mu0)
    m1 = make_highpass(m0, mu1)
    run.verdict("FP", check_FP(m0, m1, pair.S_tilde, run.args.tol))
    w = synthesize(pair, m1, m0)
    run.report["wavelet"] = {"kind": "wavelet", "psi": step_to_json(w.psi_hat),
                             "phi": step_to_json(pair.phi_hat),
                             "m0": pstep_to_json(m0), "m1": pstep_to_json(m1)}
    return EXIT_OK if run.ok else EXIT_FAIL


def cmd_verify_wavelet(run: Run) -> int:
    w = _wavelet_from(run, run.args.source)
    rep = is_parseval(w, run.args.tq_range, run.args.tol)
    run.report["verdicts"]["calderon"] = rep.calderon_max_dev <= run.args.tol
    run.report["verdicts"]["tq"] = all(d <= run.args.tol for d in rep.tq_max_dev.values())
    run.report["calderon_max_dev"] = rep.calderon_max_dev
    run.report["tq_max_dev"] = {str(q): d for q, d in sorted(rep.tq_max_dev.items())}
    run.report["vacuous_q"] = list(rep.vacuous_q)
    run.report["parseval"] = rep.parseval_verdict
    run.report["witnesses"].update({k: v.to_json() for k, v in rep.witnesses.items()})
    if w.has_provenance:
        run.verdict("telescoping", telescoping(w.phi_hat, w, run.args.tol))
    if run.args.norm_check:
        n = w.psi_hat.norm_sq()
        run.report["norm_sq"] = n
        run.report["orthonormal"] = abs(n - 1) <= run.args.tol and rep.parseval_verdict
    return EXIT_OK if run.ok else EXIT_FAIL


def cmd_project(run: Run) -> int:
    src = run.source(run.args.source, "scaling")
    E = _set_arg(run, run.args.set)
    phi = project(src.step("phi"), E)
    pair = is_scaling(phi, run.args.tol)
    _record_scaling(run, pair)
    run.report["bundle"] = _scaling_bundle(pair)
    return EXIT_OK if run.ok else EXIT_FAIL


def cmd_check_projection(run: Run) -> int:
    src = run.source(run.args.source, "scaling")
    E = _set_arg(run, run.args.set)
    phi_star = src.step("phi")
    pair = is_scaling(phi_star, run.args.tol)
    if not pair.ok:
        raise InputError("phi* is not a scaling function")
    m0 = src.pstep("m0") if src.get("m0") else pair.m0
    rep = check_projection_conditions(phi_star, m0, E, run.args.depth, run.args.tol)
    v = run.report["verdicts"]
    v["cond1"], v["cond2"], v["cond3"] = rep.cond1, rep.cond2, rep.cond3
    # the three conditions alone do not force C/2 ⊆ C
    v["reductive"] = rep.reductive
    run.report["cond1_displayed"] = rep.cond1_displayed
    run.report["undecided"] = rep.undecided
    run.report["witnesses"] = {k: w.to_json() for k, w in rep.witnesses.items() if hasattr(w, "to_json")}
    run.report["C"] = lineset_to_json(rep.C)
    if rep.undecided:
        return EXIT_FAIL
    return EXIT_OK if run.ok else EXIT_FAIL


def cmd_maximalize(run: Run) -> int:
    pair = _scaling_from(run, run.args.source)
    _record_scaling(run, pair)
    if not pair.ok:
        return EXIT_FAIL
    nu = _phase_arg(run, run.args.nu, "nu")
    pair_value = (SQRT_HALF, SQRT_HALF)
    if run.args.pair:
        try:
            r1, i1, r2, i2 = (float(t) for t in run.args.pair.split(","))
        except ValueError as exc:
            raise InputError("--pair expects re,im,re,im") from exc
        pair_value = (complex(r1, i1), complex(r2, i2))
    res = maximalize(pair, MaximalizationChoices(nu=nu, pair=pair_value), run.args.tol)
    star = is_scaling(res.phi_star, run.args.tol)
    run.report["verdicts"] = dict(star.verdicts)
    run.verdict("is_maximal", is_maximal(res.phi_star))
    run.report["smith_barnwell_defect"] = smith_barnwell_defect(res.m0_star)
    run.report["tail_mass_bound"] = res.tail_mass_bound
    run.report["changed"] = res.changed
    bundle = _scaling_bundle(star)
    bundle["m0"] = pstep_to_json(res.m0_star)
    run.report["bundle"] = bundle
    return EXIT_OK if run.ok else EXIT_FAIL


def cmd_gauge(run: Run) -> int:
    w = _wavelet_from(run, run.args.source)
    if not w.has_provenance:
        raise InputError("gauge needs a wavelet bundle produced by synthesize")
    mu = _phase_arg(run, run.args.mu, "mu")
    nu = _phase_arg(run, run.args.nu, "nu")
    sigma = _phase_arg(run, run.args.sigma, "sigma")
    if sigma is None and mu is not None:
        sigma = delta(mu)
    res = gauge_wavelet(w, mu, nu, sigma, run.args.tol)
    run.report["verdicts"]["paths_agree"] = res.max_dev <= run.args.tol
    run.report["verdicts"]["modulus_invariant"] = res.modulus_dev <= run.args.tol
    run.report["max_dev"] = {"paths": res.max_dev, "modulus": res.modulus_dev}
    return EXIT_OK if run.ok else EXIT_FAIL


def cmd_export_plot(run: Run) -> int:
    src = run.source(run.args.source, "function")
    key = run.args.key
    fn = src.pstep(key) if (src.get("kind") == "pstep" or key in ("m0", "m1")) else src.step(key)
    text = plot_csv(fn)
    if run.args.output in (None, "-"):
        sys.stdout.write(text)
        return EXIT_OK
    with open(run.args.output, "w", newline="") as fh:
        fh.write(text)
    run.report["rows"] = text.count("\n") - 1
    run.report["output"] = run.args.output
    return EXIT_OK


def cmd_extend_filter(run: Run) -> int:
    pair = _scaling_from(run, run.args.source)
    _record_scaling(run, pair)
    if not pair.ok:
        return EXIT_FAIL
    m0 = extend_lowpass(pair.m0, _phase_arg(run, run.args.mu0, "mu0"))
    m1 = make_highpass(m0, _phase_arg(run, run.args.mu1, "mu1"))
    run.verdict("FP", check_FP(m0, m1, pair.S_tilde, run.args.tol))
    run.report["filters"] = {"kind": "filters", "m0": pstep_to_json(m0), "m1": pstep_to_json(m1),
                             "S_tilde": pset_to_json(pair.S_tilde)}
    return EXIT_OK if run.ok else EXIT_FAIL


def cmd_check_fp(run: Run) -> int:
    src = run.source(run.args.source, "filters")
    m0, m1 = src.pstep("m0"), src.pstep("m1")
    St = pset_from_json(src.get("S_tilde")) if src.get("S_tilde") else None
    run.verdict("FP", check_FP(m0, m1, St, run.args.tol))
    return EXIT_OK if run.ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def plot_csv(fn) -> str:
    """Rows ``xi_num, xi_exp, re, im, abs`` at the left end of each piece."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    pieces = fn.scaled_pieces() if isinstance(fn, StepFunction) else fn.pieces
    for a, _, _ in pieces:
        v = fn(a)
        n, e = num_exp(a)
        w.writerow([n, e, repr(v.real), repr(v.imag), repr(abs(v))])
    return buf.getvalue()


def _flatten(prefix: str, obj, rows: list) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, obj))


def render(run: Run, fmt: str) -> str:
    if fmt == "json":
        return dumps(run.report) + "\n"
    if run.output_fn is not None:
        return plot_csv(run.output_fn)
    rows: list = []
    _flatten("", {k: v for k, v in run.report.items() if k != "bundle"}, rows)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

COMMANDS = {
    "catalog": cmd_catalog,
    "verify-scaling": cmd_verify_scaling,
    "synthesize": cmd_synthesize,
    "verify-wavelet": cmd_verify_wavelet,
    "verify": cmd_verify_wavelet,
    "project": cmd_project,
    "check-projection": cmd_check_projection,
    "maximalize": cmd_maximalize,
    "gauge": cmd_gauge,
    "export-plot": cmd_export_plot,
    "extend-filter": cmd_extend_filter,
    "check-fp": cmd_check_fp,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window-exp", type=int, default=DEFAULT_WINDOW_EXP)
    common.add_argument("--tol", type=float, default=VALUE_TOL)
    common.add_argument("--tq-range", type=int, default=9)
    common.add_argument("--depth", type=int, default=20, help="halving depth cap for cond1")
    common.add_argument("--seed", type=int, default=0, help="seed for 'random' phases")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--timing", action="store_true", help="add wall time to the report")
    common.add_argument("-o", "--output", help="write the report (or CSV) here instead of stdout")

    p = argparse.ArgumentParser(prog="frame-forge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"frame-forge {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, source=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if source:
            sp.add_argument("source", nargs="?" if name in ("synthesize", "verify-wavelet", "verify") else None,
                            help="catalog name, JSON file, or - for stdin")
        return sp

    sp = add("catalog", "list or emit built-in functions", source=False)
    sp.add_argument("name", nargs="?")
    add("verify-scaling", "check S1-S3, admissibility and maximality")
    sp = add("synthesize", "build (m0, m1) and the wavelet from a scaling function")
    sp.add_argument("--scaling")
    sp.add_argument("--mu0")
    sp.add_argument("--mu1")
    for name in ("verify-wavelet", "verify"):
        sp = add(name, "Calderón and t_q tests" + (" (alias)" if name == "verify" else ""))
        sp.add_argument("--norm-check", action="store_true")
        sp.add_argument("--wavelet", dest="source_flag")
    for name in ("project", "check-projection"):
        sp = add(name, "project phi* onto E" if name == "project" else "projection conditions for E")
        sp.add_argument("--set", required=True, help="pset JSON file or inline a:b,c:d")
    sp = add("maximalize", "construct a maximal phi* over a scaling function")
    sp.add_argument("--nu")
    sp.add_argument("--pair", help="re,im,re,im")
    sp = add("gauge", "gauge a synthesized wavelet and compare both paths")
    sp.add_argument("--mu")
    sp.add_argument("--nu")
    sp.add_argument("--sigma")
    sp = add("export-plot", "CSV over the canonical partition")
    sp.add_argument("--key", default="phi", help="bundle member to export")
    sp = add("extend-filter", "extend m0 to S~ and build m1")
    sp.add_argument("--mu0")
    sp.add_argument("--mu1")
    add("check-fp", "unitarity of a filter bundle")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "source_flag", None):
        args.source = args.source_flag
    try:
        if args.command == "synthesize" and not (args.scaling or args.source):
            parser.error("synthesize needs a scaling source")
        if args.command in ("verify-wavelet", "verify") and not args.source:
            parser.error(f"{args.command} needs a wavelet source")
    except SystemExit:
        return EXIT_INPUT
    run = Run(args.command, args)
    t0 = time.perf_counter()
    try:
        code = COMMANDS[args.command](run)
    except (InputError, WindowError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, VerificationError) and not isinstance(exc, InputError):
            run.report["error"] = str(exc)
            if exc.witness is not None:
                run.report["witnesses"]["error"] = exc.witness.to_json()
            code = EXIT_FAIL
        else:
            print(f"frame-forge: error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    if args.timing:
        run.report["wall_time_s"] = time.perf_counter() - t0
    if args.command == "export-plot":
        return code
    text = render(run, args.format)
    if args.output and args.output != "-":
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
