"""Batch front end: parse symbol and geometry files, run pipeline stages,
emit machine-readable reports.

Exit codes: 0 success, 2 validation error, 3 numeric non-convergence.
Reports embed the full configuration and a version string, and numbers are
exact rational strings whenever the computation stayed exact.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .config import RunConfig
from .scalars import QI
from .serialize import (SchemaError, dump_json, geometry_from_json, load_json,
                        matrix_symbol_from_json, principal_from_json,
                        symbol_from_json, symbol_to_json, value_to_json)
from .trace import FinitePartNotConverged, TraceConfig, res_trace, trh_detailed
from .sphere import QuadratureNotConverged
from .weyl import FormalSymbol, NotInvertible, invert_formal, star


class CliError(Exception):
    def __init__(self, message, code=2):
        super().__init__(message)
        self.code = code


def _config_from_args(args) -> RunConfig:
    base = {}
    if getattr(args, "config", None):
        base = load_json(args.config)
    cfg = RunConfig.from_dict(base)
    for key, attr in (("cutoff", "cutoff"), ("u_window", "u_window"),
                      ("quad_order", "quad"), ("tol", "tol"), ("seed", "seed")):
        v = getattr(args, attr, None)
        if v is not None:
            setattr(cfg, key, v)
    cfg.__post_init__()
    return cfg


def _report(payload: dict, cfg: RunConfig, out_path=None, flags=()):
    payload = dict(payload)
    payload["config"] = cfg.to_dict()
    payload["version"] = f"heischar-{__version__}"
    payload["truncation_flags"] = sorted(flags)
    text = dump_json(payload, out_path)
    if not out_path:
        print(text)
    return payload


def _load_symbol(path, cfg: RunConfig) -> FormalSymbol:
    try:
        sym = symbol_from_json(load_json(path))
    except (OSError, json.JSONDecodeError, SchemaError) as exc:
        raise CliError(f"cannot read symbol file {path}: {exc}")
    return sym.truncate(cfg.cutoff) if sym.cutoff is None or sym.cutoff > cfg.cutoff else sym


def cmd_star(args):
    cfg = _config_from_args(args)
    a = _load_symbol(args.a, cfg)
    b = _load_symbol(args.b, cfg)
    prod = star(a, b)
    _report({"op": "star", "result": symbol_to_json(prod)}, cfg, args.out)
    return 0


def cmd_invert(args):
    cfg = _config_from_args(args)
    a = _load_symbol(args.symbol, cfg)
    try:
        inv = invert_formal(a, cutoff=cfg.cutoff)
    except NotInvertible as exc:
        raise CliError(f"symbol is not invertible: {exc}")
    _report({"op": "invert", "result": symbol_to_json(inv)}, cfg, args.out)
    return 0


def cmd_res(args):
    cfg = _config_from_args(args)
    a = _load_symbol(args.symbol, cfg)
    try:
        v = res_trace(a)
    except QuadratureNotConverged as exc:
        raise CliError(str(exc), code=3)
    _report({"op": "res", "value": value_to_json(v)}, cfg, args.out)
    return 0


def cmd_trh(args):
    cfg = _config_from_args(args)
    a = _load_symbol(args.symbol, cfg)
    try:
        r = trh_detailed(a, cfg=cfg.trace_config())
    except FinitePartNotConverged as exc:
        raise CliError(str(exc), code=3)
    payload = {"op": "trh", "method": r.method,
               "value": value_to_json(r.exact if r.exact is not None else r.value),
               "error_estimate": r.error}
    _report(payload, cfg, args.out)
    return 0


def cmd_chern(args):
    cfg = _config_from_args(args)
    try:
        data = load_json(args.symbol)
        mat = matrix_symbol_from_json(data) if "entries" in data else None
    except (OSError, json.JSONDecodeError, SchemaError) as exc:
        raise CliError(f"cannot read matrix symbol file: {exc}")
    if mat is None:
        raise CliError("chern expects a matrix symbol file with 'entries'")
    from .torus import Section, SectionAlgebra, SymbolFiber
    from .character import uchern
    fibs = SymbolFiber(1, cfg.cutoff)
    alg = SectionAlgebra(3, fibs)
    r = [[Section.constant(3, fibs, e) for e in row] for row in mat.entries]
    try:
        ch = uchern(alg, r, L=cfg.u_window - 1)
    except (NotInvertible, ArithmeticError, NotImplementedError) as exc:
        raise CliError(f"cannot form the character: {exc}")
    payload = {"op": "chern", "u_powers": {}}
    for p, chain in sorted(ch.parts.items()):
        payload["u_powers"][str(p)] = {
            "degree": chain.degree, "terms": len(chain.terms),
            "norm": chain.norm()}
    _report(payload, cfg, args.out)
    return 0


def _chi_setup(args):
    cfg = _config_from_args(args)
    try:
        sym = principal_from_json(load_json(args.symbol))
        conn, riemann = geometry_from_json(load_json(args.geometry))
    except (OSError, json.JSONDecodeError, SchemaError, ValueError) as exc:
        raise CliError(f"input validation failed: {exc}")
    from .character import CharContext
    ctx = CharContext(conn, cfg.char_config())
    return cfg, sym, ctx, riemann


def cmd_chi(args):
    cfg, sym, ctx, _ = _chi_setup(args)
    from .character import character_form
    try:
        chi = character_form(sym, ctx)
    except (NotInvertible, ArithmeticError) as exc:
        raise CliError(f"character computation failed: {exc}", code=3)
    payload = {"op": "chi", "degrees": {}}
    for p, form in sorted(chi.parts.items()):
        comps = {}
        for I, sec in sorted(form.comps.items()):
            comps["d" + "".join(f"y{i}" for i in I)] = [
                {"freq": list(K), "value": value_to_json(v)}
                for K, v in sorted(sec.waves.items())]
        payload["degrees"][str(p)] = comps
    _report(payload, cfg, args.out)
    return 0


def cmd_pair(args):
    cfg, sym, ctx, riemann = _chi_setup(args)
    from .character import index_pairing
    try:
        value = index_pairing(sym, ctx)
    except (NotInvertible, ArithmeticError) as exc:
        raise CliError(f"pairing computation failed: {exc}", code=3)
    payload = {"op": "pair", "value_re": value.real, "value_im": value.imag,
               "error_estimate": 1e-10, "nearest_integer": round(value.real)}
    _report(payload, cfg, args.out)
    return 0


def cmd_verify(args):
    cfg = _config_from_args(args)
    from .verify import SUITES, run_suite
    if args.suite not in SUITES:
        raise CliError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    rep = run_suite(args.suite, seed=cfg.seed)
    for r in rep["checks"]:
        mark = "PASS" if r["passed"] else "FAIL"
        resid = f"  residual={r['residual']:.3e}" if r["residual"] else ""
        print(f"[{mark}] {r['name']}{resid}")
    _report(rep, cfg, args.out)
    return 0 if rep["passed"] else 3


def build_parser():
    p = argparse.ArgumentParser(prog="heischar",
                                description="symbol calculus, regularized "
                                "traces, cyclic chains, index pairing")
    p.add_argument("--version", action="version",
                   version=f"heischar {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--cutoff", type=int)
        sp.add_argument("--u-window", dest="u_window", type=int)
        sp.add_argument("--quad", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", help="write the JSON report here")

    sp = sub.add_parser("star", help="star product of two symbol files")
    sp.add_argument("a")
    sp.add_argument("b")
    common(sp)
    sp.set_defaults(fn=cmd_star)

    sp = sub.add_parser("invert", help="formal star inverse of a symbol file")
    sp.add_argument("symbol")
    common(sp)
    sp.set_defaults(fn=cmd_invert)

    sp = sub.add_parser("res", help="residue trace of a symbol file")
    sp.add_argument("symbol")
    common(sp)
    sp.set_defaults(fn=cmd_res)

    sp = sub.add_parser("trh", help="regularized trace of a symbol file")
    sp.add_argument("symbol")
    common(sp)
    sp.set_defaults(fn=cmd_trh)

    sp = sub.add_parser("chern", help="character chain of a matrix symbol")
    sp.add_argument("symbol")
    common(sp)
    sp.set_defaults(fn=cmd_chern)

    sp = sub.add_parser("chi", help="characteristic form of a principal symbol")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--geometry", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_chi)

    sp = sub.add_parser("pair", help="index pairing of a principal symbol")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--geometry", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_pair)

    sp = sub.add_parser("verify", help="run a named property suite")
    sp.add_argument("suite")
    common(sp)
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
