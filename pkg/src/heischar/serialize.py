"""JSON encodings for symbols, sections, geometry, and reports.

Exact rationals travel as "p/q" strings; complex pairs as [re, im].
Symbol files:    {"n": 1, "cutoff": 12, "components": [
                    {"degree": -2, "num": [[[exps], [re, im]], ...],
                     "den": [...]}]}
Matrix files:    {"q": 2, "entries": [[symbol, ...], ...]}
Section files:   {"d": 3, "waves": [{"freq": [0,0,1], "symbol": {...}}]}
Geometry files:  {"d": 3, "n": 1, "beta": [{"axis": 0, "freq": [0,1,0],
                     "amp": ["1/2", "0"]}], "riemann": []}
Principal files: {"q": 1, "w_plus": [[section, ...]], "w_minus": [[...]]}
"""

from __future__ import annotations

import json
from fractions import Fraction

from .connection import ConnectionData
from .homog import HomogRat
from .poly import Poly
from .scalars import QI, qi_from_pair, qi_to_pair
from .torus import Section, SymbolFiber
from .weyl import FormalSymbol, MatrixSymbol
from .extension import PrincipalSymbol


class SchemaError(ValueError):
    pass


def poly_to_json(p: Poly):
    return [[list(e), qi_to_pair(c)] for e, c in sorted(p.terms.items())]


def poly_from_json(data, nvars: int) -> Poly:
    terms = {}
    for item in data:
        if len(item) != 2:
            raise SchemaError(f"polynomial term must be [exps, [re, im]]: {item}")
        e, pair = item
        if len(e) != nvars:
            raise SchemaError(f"exponent tuple of length {len(e)}, expected {nvars}")
        terms[tuple(int(v) for v in e)] = qi_from_pair(pair)
    return Poly(nvars, terms)


def symbol_to_json(a: FormalSymbol):
    comps = []
    for deg in sorted(a.comps, reverse=True):
        h = a.comps[deg]
        comps.append({"degree": deg, "num": poly_to_json(h.num),
                      "den": poly_to_json(h.den)})
    return {"n": a.n, "cutoff": a.cutoff, "components": comps}


def symbol_from_json(data) -> FormalSymbol:
    try:
        n = int(data["n"])
        cutoff = data.get("cutoff")
        comps = {}
        for entry in data["components"]:
            deg = int(entry["degree"])
            num = poly_from_json(entry["num"], 2 * n)
            den = poly_from_json(entry.get("den", [[[0] * 2 * n, ["1", "0"]]]), 2 * n)
            comps[deg] = HomogRat(num, den)
        sym = FormalSymbol(n, comps, cutoff if cutoff is None else int(cutoff))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad symbol file: {exc}")
    if n == 1 and sym.is_even() and sym.is_polynomial():
        from .spectral import attach_model
        sym = attach_model(sym)
    return sym


def section_to_json(s: Section):
    return {"d": s.d, "waves": [{"freq": list(K), "symbol": symbol_to_json(v)}
                                for K, v in sorted(s.waves.items())]}


def section_from_json(data, cutoff: int = 12, op: bool = False) -> Section:
    d = int(data["d"])
    fib = SymbolFiber(1, cutoff, op=op)
    waves = {}
    for entry in data["waves"]:
        waves[tuple(int(k) for k in entry["freq"])] = symbol_from_json(entry["symbol"])
    return Section(d, fib, waves)


def matrix_symbol_to_json(m: MatrixSymbol):
    return {"q": m.q, "entries": [[symbol_to_json(e) for e in row]
                                  for row in m.entries]}


def matrix_symbol_from_json(data) -> MatrixSymbol:
    return MatrixSymbol([[symbol_from_json(e) for e in row]
                         for row in data["entries"]])


def principal_to_json(sym: PrincipalSymbol):
    return {"q": sym.q, "d": sym.d, "cutoff": sym.cutoff,
            "w_plus": [[section_to_json(e) for e in row] for row in sym.wp],
            "w_minus": [[section_to_json(e) for e in row] for row in sym.wm]}


def principal_from_json(data) -> PrincipalSymbol:
    try:
        d = int(data.get("d", 3))
        cutoff = int(data.get("cutoff", 12))
        wp = [[section_from_json(e, cutoff, op=False) for e in row]
              for row in data["w_plus"]]
        wm = [[section_from_json(e, cutoff, op=True) for e in row]
              for row in data["w_minus"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad principal-symbol file: {exc}")
    return PrincipalSymbol(wp, wm, d=d, cutoff=cutoff)


def geometry_from_json(data):
    """Returns (ConnectionData, riemann or None)."""
    try:
        d = int(data.get("d", 3))
        modes = {}
        for entry in data.get("beta", []):
            axis = int(entry["axis"])
            freq = tuple(int(k) for k in entry["freq"])
            amp = entry["amp"]
            modes[(axis, freq)] = QI(Fraction(str(amp[0])), Fraction(str(amp[1])))
        conn = ConnectionData.abelian(d, modes)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad geometry file: {exc}")
    return conn, data.get("riemann") or None


def value_to_json(v):
    if isinstance(v, QI):
        return {"exact": qi_to_pair(v)}
    if isinstance(v, Fraction):
        return {"exact": [str(v), "0"]}
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return {"re": float(v), "im": 0.0}


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
