"""Command-line batch runner: ``python -m lyapmean <command> [options]``.

Commands: ``jack``, ``jmat``, ``lyap``, ``verify-main``, ``repro-paper``.
Every command writes one report (JSON object or CSV rows of
``name,value,stderr,verdict``) to stdout or ``--out``.

Exit codes: 0 all verdicts pass or inconclusive, 1 some verdict failed,
2 usage or configuration error, 3 numerical degeneracy.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__
from .errors import DegenerateMatrix, InvalidPartition, NonGenericSpectrum, NotInvariant
from .jchar import j_exact, j_exact_from_squared, j_mc
from .linalg import RngStream, eig_log_moduli, haar_orthogonal_batch
from .lyapunov import LeftHaarOrbit, PointMass, TwoSidedHaarOrbit, lyapunov_spectrum_qr, topk_sum_grassmann
from .montecarlo import combined_sigma
from .symfun import Partition, conjugate, eval_monomial, format_sympoly, jack_in_monomials
from .verify import FAIL, PASS, sl_corollary_check, verdict, verify_main

SCHEMA_VERSION = 1

DEFAULTS = {
    "seed": 0,
    "workers": 1,
    "format": "json",
    "out": None,
    "strict": False,
    "no_timestamp": False,
}


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- parsing

def parse_number(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {s!r}") from exc


def parse_list(s: str, conv=float) -> list:
    return [conv(x) for x in s.split(",") if x.strip()]


def parse_partition(s: str) -> Partition:
    s = s.strip().strip("()[]")
    return Partition(int(x) for x in s.split(",") if x.strip())


def parse_matrix(spec: str, n: int | None = None) -> np.ndarray:
    """Matrix from ``diag:a,b,..``, ``randsv:min,max,seed`` or ``a,b;c,d`` rows.

    Entries may be written as fractions (``1/3``).
    """
    spec = spec.strip()
    if spec.startswith("diag:"):
        return np.diag([float(parse_number(x)) for x in spec[5:].split(",")])
    if spec.startswith("randsv:"):
        parts = spec[7:].split(",")
        if len(parts) != 3 or n is None:
            raise ConfigError("randsv needs min,max,seed and a known dimension")
        lo, hi, seed = float(parse_number(parts[0])), float(parse_number(parts[1])), int(parts[2])
        return random_sv_matrix(n, lo, hi, RngStream(seed))
    try:
        rows = [[float(parse_number(x)) for x in r.split(",")] for r in spec.split(";")]
        a = np.array(rows, dtype=float)
    except ValueError as exc:
        raise ConfigError(f"bad matrix spec {spec!r}") from exc
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigError(f"matrix spec {spec!r} is not square")
    return a


def random_sv_matrix(n: int, lo: float, hi: float, rng: RngStream) -> np.ndarray:
    """``U diag(s) V`` with Haar U, V and s log-uniform on [lo, hi]."""
    s = np.exp(rng.gen.uniform(np.log(lo), np.log(hi), n))
    u, v = haar_orthogonal_batch(n, 2, rng)
    return (u * s) @ v


def parse_model(spec: str, n: int | None = None):
    kind, _, rest = spec.partition(":")
    if kind not in ("point", "left", "two"):
        raise ConfigError(f"model kind must be point, left or two, got {kind!r}")
    a = parse_matrix(rest, n)
    if kind == "point":
        return PointMass(a)
    if kind == "left":
        return LeftHaarOrbit(a)
    if not np.allclose(a, np.diag(np.diag(a))):
        raise ConfigError("two-sided orbit needs a diagonal matrix")
    return TwoSidedHaarOrbit(np.diag(a))


def read_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = (x.strip() for x in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


# ---------------------------------------------------------------- reports

class Report:
    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.results: list[dict] = []
        self.extra: dict = {}

    def add(self, name, value, stderr=None, verdict_=None):
        self.results.append({"name": name, "value": _jsonable(value),
                             "stderr": _jsonable(stderr), "verdict": verdict_})

    @property
    def failed(self) -> bool:
        return any(r["verdict"] == FAIL for r in self.results)

    def to_dict(self, timestamp: bool, wall: float | None) -> dict:
        d = {
            "schema_version": SCHEMA_VERSION,
            "library_version": __version__,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "extra": _jsonable(self.extra),
        }
        if timestamp:
            d["timestamp"] = datetime.now(timezone.utc).isoformat()
            d["wall_clock_s"] = wall
        return d


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, Fraction):
        return str(v)
    if v is None or isinstance(v, str):
        return v
    return str(v)


def render(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "value", "stderr", "verdict"])
    for r in d["results"]:
        val = r["value"]
        if isinstance(val, (list, dict)):
            val = json.dumps(val, sort_keys=True)
        w.writerow([r["name"], val, "" if r["stderr"] is None else r["stderr"], r["verdict"] or ""])
    return buf.getvalue()


def agree(a: float, b: float, sigma: float, nsigma: float = 3.0) -> str:
    """Verdict for an equality claim checked by Monte Carlo."""
    tol = nsigma * sigma + 1e-9 * max(1.0, abs(a), abs(b))
    return PASS if abs(a - b) <= tol else FAIL


# ---------------------------------------------------------------- commands

def cmd_jack(args, rep: Report):
    lam = parse_partition(args.partition)
    alpha = parse_number(args.alpha)
    nvars = args.nvars if args.nvars is not None else max(len(lam), 1)
    p = jack_in_monomials(lam, alpha, nvars)
    rep.add(f"P{list(lam)}", format_sympoly(p))
    rep.extra["coefficients"] = {",".join(map(str, mu)): str(c) for mu, c in sorted(p.coeffs.items(), reverse=True)}
    rep.extra["normalization"] = p.normalization


def _worked_example(which: str, rep: Report):
    import sympy as sp

    if which == "4-2":
        a = sp.symbols("a1 a2", positive=True)
        b = sp.symbols("b1 b2", positive=True)
    elif which == "6-2":
        a = sp.symbols("a1 a2", positive=True)
        b = sp.symbols("b1 b2 b3 b4", positive=True)
    else:
        raise ConfigError(f"unknown worked example {which!r}")
    cp = j_exact_from_squared([x**2 for x in a], [x**2 for x in b])
    coeffs = [sp.factor(sp.nsimplify(c)) for c in cp.coeffs]
    det_a2 = sp.prod([x**2 for x in a])
    det_b2 = sp.prod([x**2 for x in b])
    if which == "4-2":
        expected = {4: det_b2 / det_a2}
    else:
        e2 = sum(b[i] ** 2 * b[j] ** 2 for i in range(4) for j in range(i + 1, 4))
        expected = {4: sp.Rational(1, 6) * e2 / det_a2, 8: det_b2 / det_a2**2}
    for j, c in enumerate(coeffs):
        want = expected.get(j, 1 if j == 0 else 0)
        ok = sp.simplify(c - want) == 0
        rep.add(f"c{j}", str(c), None, PASS if ok else FAIL)


def cmd_jmat(args, rep: Report, seed: int, workers: int):
    if args.paper_example:
        _worked_example(args.paper_example, rep)
        return
    if args.k is None or args.n is None or args.b1 is None or args.b2 is None:
        raise ConfigError("jmat needs --k, --n, --b1 and --b2 (or --paper-example)")
    k, n = args.k, args.n
    b1 = parse_matrix(args.b1, k)
    b2 = parse_matrix(args.b2, n - k)
    if b1.shape != (k, k) or b2.shape != (n - k, n - k):
        raise ConfigError("B1 must be k x k and B2 must be (n-k) x (n-k)")
    cp = j_exact(b1, b2)
    for j, c in enumerate(cp.coeffs):
        rep.add(f"c{j}", c)
    one = cp(1.0)
    rep.add("J(1)", one, None, PASS if one >= 1 - 1e-9 else FAIL)
    us = parse_list(args.u) if args.u else [1.0]
    for u in us:
        rep.add(f"J_exact({u})", cp(u))
    if args.nsamples:
        ests = j_mc(b1, b2, us, args.nsamples, RngStream(seed, 1), workers=workers)
        for u, e in zip(us, ests):
            rep.add(f"J_mc({u})", e.estimate, e.stderr, agree(cp(u), e.estimate, e.stderr))


def cmd_lyap(args, rep: Report, seed: int, workers: int):
    model = parse_model(args.model, args.n)
    est = lyapunov_spectrum_qr(model, args.m, RngStream(seed, 1))
    rep.add("r", est.r, est.stderr)
    ks = parse_list(args.k, int) if args.k else list(range(1, model.n))
    if isinstance(model, PointMass):
        ref = eig_log_moduli(model.a)
        for i, (ri, vi) in enumerate(zip(est.r, ref), 1):
            rep.add(f"r{i}-log|lambda{i}|", ri - vi, None, PASS if abs(ri - vi) <= 1e-4 else FAIL)
        return
    for k in ks:
        s, se = est.partial_sum(k)
        rep.add(f"sum_r[:{k}]_qr", s, se)
        if args.nsamples:
            g = topk_sum_grassmann(model, k, args.nsamples, RngStream(seed, 2 + k), workers=workers)
            sig = combined_sigma(se, g.stderr)
            rep.add(f"sum_r[:{k}]_grassmann", g.estimate, g.stderr, agree(s, g.estimate, sig))


def cmd_verify_main(args, rep: Report, seed: int, workers: int):
    model = parse_model(args.model, args.n)
    n = model.n
    ks = list(range(1, n)) if args.k in (None, "all") else parse_list(args.k, int)
    total_rej = total = 0
    for k in ks:
        chk = verify_main(model, k, args.nsamples, RngStream(seed, 10 + k), workers=workers)
        rep.add(f"k{k}.lhs_sup", chk.lhs_sup, chk.lhs_sup_se)
        rep.add(f"k{k}.lhs_eigen", chk.lhs_eigen, chk.lhs_eigen_se)
        rep.add(f"k{k}.rhs", chk.rhs, chk.rhs_se)
        rep.add(f"k{k}.margin_sigmas", chk.margin_sigmas, None, chk.verdict)
        eig_margin = chk.lhs_eigen - chk.lhs_sup
        rep.add(f"k{k}.eigen_minus_sup", eig_margin,
                combined_sigma(chk.lhs_eigen_se, chk.lhs_sup_se),
                verdict(eig_margin, combined_sigma(chk.lhs_eigen_se, chk.lhs_sup_se)))
        rep.add(f"k{k}.pointwise_violations", chk.pointwise_violations, None,
                PASS if chk.pointwise_violations == 0 else FAIL)
        total_rej += chk.rejected
        total += chk.total
    rep.extra["rejections"] = {"rejected": total_rej, "total": total,
                               "flagged": bool(total and total_rej / total > 1e-3)}
    if abs(model.abs_log_det()) < 1e-10:
        viol, checked, mn = sl_corollary_check(model, min(args.nsamples, 10_000), RngStream(seed, 99))
        rep.add("det1.partial_sum_min", mn, None, PASS if viol == 0 else FAIL)


def cmd_repro(args, rep: Report, seed: int, workers: int):
    _worked_example("4-2", rep)
    rep.results = [dict(r, name="4-2." + r["name"]) for r in rep.results]
    mark = len(rep.results)
    _worked_example("6-2", rep)
    for r in rep.results[mark:]:
        r["name"] = "6-2." + r["name"]
    lam = Partition((4, 4))
    rep.add("conjugate(4,4)", list(conjugate(lam)), None,
            PASS if conjugate(lam) == Partition((2, 2, 2, 2)) else FAIL)
    val = eval_monomial((1, 1), [Fraction(1)] * 4)
    rep.add("m[1,1](1,1,1,1)", val, None, PASS if val == 6 else FAIL)
    est = lyapunov_spectrum_qr(PointMass(np.diag([2.0, 1.0, 0.5])), 10_000, RngStream(seed, 1))
    ok = np.max(np.abs(est.r - np.log([2.0, 1.0, 0.5]))) <= 1e-4
    rep.add("pointmass.r", est.r, None, PASS if ok else FAIL)
    if args.mc_confirm:
        mc_rng = RngStream(seed, 2)
        b1, b2 = np.diag([2.0, 3.0]), np.diag([1.0, 1.5])
        cp = j_exact(b1, b2)
        e = j_mc(b1, b2, 1.0, 100_000, mc_rng.substream(0), workers=workers)
        rep.add("mc.4-2.J(1)", e.estimate, e.stderr, agree(cp(1.0), e.estimate, e.stderr))
        b1, b2 = np.diag([1.5, 0.8]), np.diag([1.0, 1.2, 0.7, 1.4])
        cp = j_exact(b1, b2)
        e = j_mc(b1, b2, 1.0, 100_000, mc_rng.substream(1), workers=workers)
        rep.add("mc.6-2.J(1)", e.estimate, e.stderr, agree(cp(1.0), e.estimate, e.stderr))


COMMANDS = {
    "jack": cmd_jack,
    "jmat": cmd_jmat,
    "lyap": cmd_lyap,
    "verify-main": cmd_verify_main,
    "repro-paper": cmd_repro,
}


# ---------------------------------------------------------------- entry point

def _global_options(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="master seed (u64)")
    p.add_argument("--workers", type=int, default=d)
    p.add_argument("--format", choices=["json", "csv"], default=d)
    p.add_argument("--out", default=d, help="output path (default stdout)")
    p.add_argument("--strict", action="store_true", default=d, help="require an explicit seed")
    p.add_argument("--no-timestamp", dest="no_timestamp", action="store_true", default=d)
    p.add_argument("--config", default=d, help="key=value file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lyapmean", description=__doc__.splitlines()[0])
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("jack", help="Jack polynomial in the monomial basis")
    s.add_argument("--partition", required=True)
    s.add_argument("--alpha", default="2")
    s.add_argument("--nvars", type=int)

    s = sub.add_parser("jmat", help="characteristic polynomial integral J(B1,B2;u)")
    s.add_argument("--k", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--b1")
    s.add_argument("--b2")
    s.add_argument("--u", help="comma-separated u values")
    s.add_argument("--nsamples", type=int, default=0)
    s.add_argument("--paper-example", choices=["4-2", "6-2"])

    s = sub.add_parser("lyap", help="Lyapunov spectrum by QR and Grassmannian estimators")
    s.add_argument("--model", required=True, help="point|left|two:<matrix spec>")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int, default=10_000)
    s.add_argument("--k", help="comma-separated k values")
    s.add_argument("--nsamples", type=int, default=0)

    s = sub.add_parser("verify-main", help="Haar-form main inequality campaign")
    s.add_argument("--model", required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--k", help="comma-separated k values or 'all'")
    s.add_argument("--nsamples", type=int, default=100_000)

    s = sub.add_parser("repro-paper", help="golden reproduction of the worked examples")
    s.add_argument("--mc-confirm", action="store_true")

    for sp_ in sub.choices.values():
        _global_options(sp_, suppress=True)
    return p


def _actions_by_dest(parser: argparse.ArgumentParser, command: str) -> dict:
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    acts = {a.dest: a for a in parser._actions}
    acts.update({a.dest: a for a in sub.choices[command]._actions})
    return acts


def _explicit_dests(argv) -> set:
    """Destinations the user set on the command line (defaults suppressed)."""
    parser = build_parser()
    stack = [parser]
    while stack:
        p = stack.pop()
        for a in p._actions:
            if isinstance(a, argparse._SubParsersAction):
                stack.extend(a.choices.values())
            elif a.dest != "help":
                a.default = argparse.SUPPRESS
    return set(vars(parser.parse_args(argv)))


def _merge_config(args, argv, parser) -> set:
    """Fill options from the ``--config`` file unless given as flags; return keys set."""
    explicit = _explicit_dests(argv)
    file_cfg = read_config(args.config) if getattr(args, "config", None) else {}
    acts = _actions_by_dest(parser, args.command)
    for key, raw in file_cfg.items():
        if key not in acts or key in ("command", "config", "help"):
            raise ConfigError(f"unknown config key {key!r}")
        if key in explicit:
            continue
        act = acts[key]
        if act.nargs == 0:
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            value = act.type(raw) if act.type else raw
            if act.choices and value not in act.choices:
                raise ConfigError(f"bad value for {key}: {raw!r}")
        setattr(args, key, value)
    for key, default in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, default)
    return explicit | set(file_cfg)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        given = _merge_config(args, sys.argv[1:] if argv is None else argv, parser)
        if args.strict and "seed" not in given:
            raise ConfigError("--strict requires an explicit --seed")
        if args.seed < 0 or args.seed >= 2**64:
            raise ConfigError("seed must be a u64")
        config = {k: v for k, v in sorted(vars(args).items()) if k not in ("config",)}
        rep = Report(args.command, _jsonable(config))
        fn = COMMANDS[args.command]
        if args.command == "jack":
            fn(args, rep)
        else:
            fn(args, rep, args.seed, args.workers)
    except (ConfigError, InvalidPartition, OSError, ValueError) as exc:
        if isinstance(exc, (DegenerateMatrix, NonGenericSpectrum, NotInvariant)):
            print(f"error: {exc}", file=sys.stderr)
            return 3
        print(f"error: {exc}", file=sys.stderr)
        return 2
    wall = time.perf_counter() - started
    text = render(rep.to_dict(not args.no_timestamp, wall), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if rep.failed else 0
