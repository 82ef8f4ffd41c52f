"""The characteristic map: cyclic chains of symbol sections to torus forms.

Chains here carry literal Laurent u-powers (no parity renormalization), so
every identity reads off exactly: the boundary is b + uB, the curvature
insertions carry one u each, and the exterior derivative enters as (u d).
The two evaluation routes for the trace words (multi-index sums with
Dirichlet coefficients, and the simplex integral with exact polynomial
t-integration) share only the word assembly and cross-check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .connection import ConnectionData, beta_plus, curvature, nabla
from .cyclic import Chain, hochschild_b, connes_B, gauss_legendre_rational, mat_mul
from .extension import (ExtensionElement, PrincipalSymbol, TPolyMatrix,
                        iota_lam_section, lam_section, section_s,
                        symbol_algebra)
from .forms import ExtForm, FormSum, integrate_top, a_hat_form
from .scalars import QI
from .torus import Section, SectionAlgebra, SymbolFiber, ComplexFiber
from .trace import TraceConfig, res_trace, trh_detailed
from .weyl import FormalSymbol, delta


@dataclass
class CharConfig:
    d: int = 3
    cutoff: int = 12
    u_window: int = 2
    tch_order: int = 16
    tch_panels: int = 1
    trace: TraceConfig = field(default_factory=TraceConfig)


# --------------------------------------------------------------------------
# u-graded chains
# --------------------------------------------------------------------------

class UChain:
    """Finite sum of u^p * (chain); p may be negative."""

    def __init__(self, alg, parts=None):
        self.alg = alg
        self.parts = {}
        for p, ch in (parts or {}).items():
            if not ch.is_zero():
                self.parts[int(p)] = ch

    def is_zero(self):
        return not self.parts

    def __add__(self, other):
        out = dict(self.parts)
        for p, ch in other.parts.items():
            s = out.get(p)
            s = ch if s is None else s + ch
            if s.is_zero():
                out.pop(p, None)
            else:
                out[p] = s
        return UChain(self.alg, out)

    def scale(self, c):
        return UChain(self.alg, {p: ch.scale(c) for p, ch in self.parts.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def shift_u(self, k: int) -> "UChain":
        return UChain(self.alg, {p + k: ch for p, ch in self.parts.items()})

    def boundary(self) -> "UChain":
        out = UChain(self.alg)
        for p, ch in self.parts.items():
            out = out + UChain(self.alg, {p: hochschild_b(ch)})
            out = out + UChain(self.alg, {p + 1: connes_B(ch)})
        return out

    def map_slots(self, fn, alg=None) -> "UChain":
        alg = alg or self.alg
        out = {}
        for p, ch in self.parts.items():
            out[p] = Chain(alg, ch.degree,
                           [(c, tuple(fn(a) for a in slots))
                            for c, slots in ch.terms])
        return UChain(alg, out)

    def class_residual(self, trials: int = 6, max_power=None) -> float:
        return max((ch.class_residual(trials) for p, ch in self.parts.items()
                    if max_power is None or p <= max_power), default=0.0)

    def __repr__(self):
        return f"UChain(u-powers={sorted(self.parts)})"


def uchern(alg, r, L: int, rinv=None) -> UChain:
    """Odd Chern character with literal u-powers 0..L."""
    from .cyclic import _trace_word
    if rinv is None:
        rinv = alg.inv_matrix(r)
    pref = -1 / (2j * math.pi)
    parts = {}
    for l in range(L + 1):
        mats = []
        for _ in range(l + 1):
            mats.extend([rinv, r])
        word = _trace_word(alg, mats, 2 * l + 1)
        parts[l] = word.scale(pref * ((-1) ** l) * math.factorial(l))
    return UChain(alg, parts)


def utch(alg, r_of_t, dr_of_t, L: int, order: int = 16, panels: int = 1,
         rinv_of_t=None) -> UChain:
    """Transgression chain of a path, literal u-powers 0..L."""
    from .cyclic import _trace_word
    nodes, weights = gauss_legendre_rational(order, panels)
    pref = -1 / (2j * math.pi)
    acc = UChain(alg)
    for t, wq in zip(nodes, weights):
        r = r_of_t(t)
        rinv = rinv_of_t(t) if rinv_of_t is not None else alg.inv_matrix(r)
        dr = dr_of_t(t)
        rdr = mat_mul(alg, rinv, dr)
        parts = {0: _trace_word(alg, [rdr], 0).scale(pref * float(wq))}
        for l in range(L):
            coeff = pref * ((-1) ** (l + 1)) * math.factorial(l) * float(wq)
            total = None
            for j in range(l + 1):
                mats = []
                for _ in range(j + 1):
                    mats.extend([rinv, r])
                mats.append(rdr)
                for _ in range(l - j):
                    mats.extend([rinv, r])
                w = _trace_word(alg, mats, 2 * l + 2)
                total = w if total is None else total + w
            parts[l + 1] = total.scale(coeff)
        acc = acc + UChain(alg, parts)
    return acc


# --------------------------------------------------------------------------
# geometric context
# --------------------------------------------------------------------------

class CharContext:
    """Connection data promoted to the fiber algebras used by the words."""

    def __init__(self, conn: ConnectionData, cfg: CharConfig = None):
        self.cfg = cfg or CharConfig()
        self.conn = conn
        self.bp = beta_plus(conn, self.cfg.cutoff)
        cur = curvature(conn, self.cfg.cutoff)
        self.theta_plus = cur.theta_plus
        self.theta = cur.theta
        self.d = conn.d

    def flat(self) -> bool:
        return self.theta_plus.is_zero()


def flat_context(d: int = 3, cfg: CharConfig = None) -> CharContext:
    return CharContext(ConnectionData.abelian(d, {}), cfg)


# --------------------------------------------------------------------------
# the trace words
# --------------------------------------------------------------------------

def _as_fiber_form(form: ExtForm, fib) -> ExtForm:
    return ExtForm(form.d, form.degree, fib,
                   {I: Section(s.d, fib, s.waves) for I, s in form.comps.items()})


def _word_products(ordered, theta, d: int, max_u: int):
    """All theta-decorated products of the slot forms.

    Returns [(extra_u, product form)] where extra_u theta factors were
    inserted into the len(ordered)+1 gaps; form degrees above d are pruned.
    """
    results = []

    def rec(pos, acc, used):
        # gap before slot `pos`: insert 0..max theta powers
        here = acc
        extra = 0
        while True:
            if pos == len(ordered):
                results.append((used + extra, here))
            else:
                rec(pos + 1, here.wedge(ordered[pos]), used + extra)
            if used + extra >= max_u:
                break
            here = here.wedge(theta)
            extra += 1
            if here.is_zero() or here.degree > d:
                break
        return

    unitf = ExtForm.constant(theta.d, ordered[0].fib, ordered[0].fib.unit()) \
        if ordered else None
    if not ordered:
        return results
    rec(0, unitf, 0)
    return results


def _trace_form(form: ExtForm, cfg: CharConfig, use_res: bool):
    """Apply Res or Trh to every section coefficient; lands in scalar forms."""
    fib = ComplexFiber()
    out = {}
    for I, s in form.comps.items():
        waves = {}
        for K, sym in s.waves.items():
            if hasattr(sym, "trace"):
                sym = sym.trace()
            if use_res:
                v = res_trace(sym)
            else:
                r = trh_detailed(sym, cfg=cfg.trace)
                v = r.exact if r.exact is not None else r.value
            if isinstance(v, complex):
                if v == 0:
                    continue
                vq = v
            else:
                if v.is_zero():
                    continue
                vq = v
            waves[K] = vq if isinstance(vq, QI) else QI.of(vq)
        sec = Section(form.d, fib, waves)
        if not sec.is_zero():
            out[I] = sec
    return ExtForm(form.d, form.degree, fib, out)


class UForm:
    """{u power: FormSum} with scalar coefficients."""

    def __init__(self, d: int, parts=None):
        self.d = d
        self.parts = {}
        for p, f in (parts or {}).items():
            if not f.is_zero():
                self.parts[int(p)] = f

    def is_zero(self):
        return not self.parts

    def part(self, p: int) -> FormSum:
        return self.parts.get(p, FormSum(self.d, ComplexFiber()))

    def __add__(self, other):
        out = dict(self.parts)
        for p, f in other.parts.items():
            g = out.get(p)
            s = f if g is None else g + f
            if s.is_zero():
                out.pop(p, None)
            else:
                out[p] = s
        return UForm(self.d, out)

    def scale(self, c):
        return UForm(self.d, {p: f.scale(c) for p, f in self.parts.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def apply_ud(self) -> "UForm":
        return UForm(self.d, {p + 1: f.ext_d() for p, f in self.parts.items()})

    def norm(self) -> float:
        return sum(f.norm() for f in self.parts.values())

    def rescale_R(self) -> FormSum:
        """Collapse u by the substitution u^p -> (2 pi i)^{-p}."""
        out = FormSum(self.d, ComplexFiber())
        for p, f in self.parts.items():
            out = out + f.scale((2j * math.pi) ** (-p))
        return out

    def shift(self, p: int) -> "UForm":
        return UForm(self.d, {q + p: f for q, f in self.parts.items()})

    def __repr__(self):
        return f"UForm(u={sorted(self.parts)})"


def char_plus(chain_or_uchain, ctx: CharContext, sign: int = +1,
              simplex: bool = False) -> UForm:
    """Phi on plus (sign +1) or minus (sign -1) chains."""
    if isinstance(chain_or_uchain, UChain):
        out = UForm(ctx.d)
        for p, ch in chain_or_uchain.parts.items():
            out = out + _char_chain(ch, ctx, sign, simplex).shift(p)
        return out
    return _char_chain(chain_or_uchain, ctx, sign, simplex).shift(0)


def _char_chain(ch: Chain, ctx: CharContext, sign: int, simplex: bool) -> UForm:
    out = UForm(ctx.d)
    if ch.is_zero():
        return out
    fib = None
    for coeff, slots in ch.terms:
        fib = slots[0].fib
        break
    theta = _as_fiber_form(ctx.theta_plus if sign > 0 else -ctx.theta_plus, fib)
    bp = ctx.bp
    cfg = ctx.cfg
    for coeff, slots in ch.terms:
        k = len(slots) - 1
        lifts = [ExtForm.function(s) for s in slots]
        nablas = [nabla(f, _as_fiber_form(bp, fib), sign=sign) for f in lifts]
        for m in range(k + 1):
            rot_sign = (-1) ** (m * (k - m))
            ordered = nablas[m + 1:] + [lifts[0]] + nablas[1:m + 1]
            if simplex:
                pieces = _simplex_pieces(ordered, theta, ctx.d, cfg.u_window)
            else:
                pieces = [((extra, Fraction((-1) ** extra,
                                            math.factorial(extra + k + 1))), form)
                          for extra, form in _word_products(ordered, theta,
                                                            ctx.d, cfg.u_window)]
            for (extra, weight), form in pieces:
                if form.is_zero():
                    continue
                traced = _trace_form(form, cfg, use_res=False)
                if traced.is_zero():
                    continue
                scalar = _combine_coeff(coeff, weight, rot_sign)
                out = out + UForm(ctx.d, {extra: FormSum.of(traced.scale(scalar))})
    return out


def _combine_coeff(coeff, weight, rot_sign):
    w = QI(weight * rot_sign)
    if isinstance(coeff, QI):
        return coeff * w
    return complex(coeff) * complex(w)


def _simplex_pieces(ordered, theta, d: int, max_u: int):
    """Exponential-form route to the same words.

    Each gap carries e^{-t_j u theta}; expanding gives the t-monomial
    prod t_j^{e_j} with weight prod (-u)^{e_j}/e_j!, and the exact simplex
    integral contributes prod e_j! / (sum e + q)!.  The two exact factors
    are assembled separately, so the route shares no coefficient logic
    with the multi-index sum.
    """
    q = len(ordered)
    results = []

    def finish(exps, form):
        total = sum(exps)
        expansion = Fraction((-1) ** total, 1)
        for e in exps:
            expansion /= math.factorial(e)
        dirichlet = Fraction(1, math.factorial(total + q))
        for e in exps:
            dirichlet *= math.factorial(e)
        results.append(((total, expansion * dirichlet), form))

    def rec(pos, acc, exps):
        here = acc
        e = 0
        while True:
            if pos == q:
                finish(exps + [e], here)
            else:
                rec(pos + 1, here.wedge(ordered[pos]), exps + [e])
            if sum(exps) + e >= max_u:
                break
            here = here.wedge(theta)
            e += 1
            if here.is_zero() or here.degree > d:
                break

    unitf = ExtForm.constant(theta.d, ordered[0].fib, ordered[0].fib.unit())
    rec(0, unitf, [])
    return results


def char_residue(chain_or_uchain, ctx: CharContext) -> UForm:
    """The residue-side map: one log-derivation insertion per position."""
    if isinstance(chain_or_uchain, UChain):
        out = UForm(ctx.d)
        for p, ch in chain_or_uchain.parts.items():
            out = out + _char_res_chain(ch, ctx).shift(p)
        return out
    return _char_res_chain(chain_or_uchain, ctx)


def _delta_section(s: Section) -> Section:
    return s.map_fibers(lambda v: delta(v))


def _char_res_chain(ch: Chain, ctx: CharContext) -> UForm:
    out = UForm(ctx.d)
    if ch.is_zero():
        return out
    fib = ch.terms[0][1][0].fib
    theta = _as_fiber_form(ctx.theta_plus, fib)
    cfg = ctx.cfg
    for coeff, slots in ch.terms:
        k = len(slots) - 1
        if k == 0:
            continue
        lifts = [ExtForm.function(s) for s in slots]
        nablas = [None] + [nabla(f, _as_fiber_form(ctx.bp, fib), sign=+1)
                           for f in lifts[1:]]
        deltas = [None] + [ExtForm.function(_delta_section(s)) for s in slots[1:]]
        for m in range(1, k + 1):
            ordered = [lifts[0]]
            for j in range(1, k + 1):
                ordered.append(deltas[j] if j == m else nablas[j])
            pieces = _word_products_trailing(ordered, theta, ctx.d, cfg.u_window)
            for extra, form in pieces:
                if form.is_zero():
                    continue
                traced = _trace_form(form, cfg, use_res=True)
                if traced.is_zero():
                    continue
                weight = Fraction((-1) ** extra, math.factorial(extra + k))
                scalar = _combine_coeff(coeff, weight, (-1) ** (m - 1))
                out = out + UForm(ctx.d, {extra: FormSum.of(traced.scale(scalar))})
    return out


def _word_products_trailing(ordered, theta, d: int, max_u: int):
    """Theta insertions in the k+1 gaps after each slot (none leading)."""
    results = []

    def rec(pos, acc, used):
        here = acc.wedge(ordered[pos]) if pos < len(ordered) else acc
        if pos < len(ordered):
            nxt = here
            extra = 0
            while True:
                rec(pos + 1, nxt, used + extra)
                if used + extra >= max_u:
                    break
                nxt = nxt.wedge(theta)
                extra += 1
                if nxt.is_zero() or nxt.degree > d:
                    break
        else:
            results.append((used, acc))

    unitf = ExtForm.constant(theta.d, ordered[0].fib, ordered[0].fib.unit())
    rec(0, unitf, 0)
    return results


# --------------------------------------------------------------------------
# the extension complex and the index pairing
# --------------------------------------------------------------------------

from .extension import (ExtensionElement, PrincipalSymbol, iota_lam_section,
                        lam_section, section_s)


class TripleChain:
    """(zeta_plus, zeta_minus, gamma): the cyclic complex of the extension.

    gamma sits one u-power below the Chern slots (its top chain is a
    transgression), which the literal Laurent bookkeeping keeps visible.
    """

    def __init__(self, zp: UChain, zm: UChain, g: UChain):
        self.zp = zp
        self.zm = zm
        self.g = g

    def __add__(self, other):
        return TripleChain(self.zp + other.zp, self.zm + other.zm,
                           self.g + other.g)

    def scale(self, c):
        return TripleChain(self.zp.scale(c), self.zm.scale(c), self.g.scale(c))

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self):
        return self.zp.is_zero() and self.zm.is_zero() and self.g.is_zero()

    def class_residual(self, trials: int = 6, max_power=None) -> float:
        return max(self.zp.class_residual(trials, max_power),
                   self.zm.class_residual(trials, max_power),
                   self.g.class_residual(trials, max_power))

    def __repr__(self):
        return f"TripleChain(zp={self.zp}, zm={self.zm}, g={self.g})"


def extension_boundary(t: TripleChain) -> TripleChain:
    """((b+uB) z+, (b+uB) z-, lam(z+) - (iota lam)(z-) - (b+uB) gamma)."""
    lam_zp = t.zp.map_slots(lam_section, alg=t.g.alg)
    lam_zm = t.zm.map_slots(iota_lam_section, alg=t.g.alg)
    third = lam_zp - lam_zm - t.g.boundary()
    return TripleChain(t.zp.boundary(), t.zm.boundary(), third)


def ch_extension(e: ExtensionElement, L: int = 1, order: int = 16,
                 panels: int = 1) -> TripleChain:
    """The Chern character triple of an invertible extension element."""
    zp = uchern(e.alg_plus, e.wp, L)
    zm = uchern(e.alg_minus, e.wm, L)

    def r_of_t(t):
        return e.r.at(t)

    def dr_of_t(t):
        return e.r.deriv_at(t)

    g = utch(e.alg_b, r_of_t, dr_of_t, L, order, panels).shift_u(-1)
    return TripleChain(zp, zm, g)


def char_total(t: TripleChain, ctx: CharContext) -> UForm:
    """Phi on triples; the minus slot enters with sign -(-1)^n (n = 1)."""
    out = char_plus(t.zp, ctx, sign=+1)
    out = out + char_plus(t.zm, ctx, sign=-1)
    out = out - char_residue(t.g, ctx)
    return out


def character_form(sym: PrincipalSymbol, ctx: CharContext,
                   cfg: CharConfig = None) -> FormSum:
    """chi: rescaled image of the Chern triple of the canonical section."""
    cfg = cfg or ctx.cfg
    e = section_s(sym)
    triple = ch_extension(e, L=max(1, cfg.u_window - 1), order=cfg.tch_order,
                          panels=cfg.tch_panels)
    return char_total(triple, ctx).rescale_R()


def index_pairing(sym: PrincipalSymbol, ctx: CharContext, riemann=None,
                  cfg: CharConfig = None) -> complex:
    """integral over the torus of chi wedge the curvature genus form."""
    chi = character_form(sym, ctx, cfg)
    if riemann is None:
        genus = FormSum.of(ExtForm.constant(ctx.d, ComplexFiber(), QI(1)))
    else:
        genus = a_hat_form(riemann)
    total = chi.wedge(genus).part(ctx.d)
    if total.is_zero():
        return 0j
    return integrate_top(total)
