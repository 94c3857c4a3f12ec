"""Generic representations of GL_n as unlinked segment multisets, the
correspondences V and C = CV o V, and Rankin-Selberg style factors on
unramified cuspidal lines.

Cuspidal labels are either supercuspidal (a character of GL_1 here, carried
by its Galois-side image) or the cuspidal non-supercuspidal objects
St_k(Z_rho) built on a full twist orbit; the latter form the totally
non-banal part, which is invisible to L-factors.  The Rankin-Selberg base
case is the Tate factor of the product character, computed directly rather
than through the correspondence, so the preservation check really does
cross-validate CV, the semisimple tensor and the kernel bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass

from .deligne import (Character, DeligneClass, cv_map, normalize, seg,
                      tensor_ss, trivial_character)
from .errors import (EpsilonNotUnit, InvalidGenericRep, MixedLines,
                     RamifiedCuspLine)
from .factors import epsilon_factor, gamma_factor, gamma_from_counts, l_factor
from .laurent import FactorExpr, RationalFraction, euler_factor, is_unit
from .weil import Line, UnramifiedChar, dual_irr, irr_order, line_of


@dataclass(frozen=True)
class SuperCusp:
    """Supercuspidal label, carried by its V-dictionary irreducible."""

    irr: object

    def __repr__(self):
        return f"{self.irr!r}"


@dataclass(frozen=True)
class NonSuperCusp:
    """St_k(Z_rho) = St(o(rho) ell^k, rho): cuspidal, non-supercuspidal,
    fixed by nu-twisting (its own cuspidal line is a singleton)."""

    line: Line
    k: int

    def __repr__(self):
        return f"stk(line={self.line.base!r}, k={self.k})"


@dataclass(frozen=True)
class GLSegment:
    """St(r, nu^a cusp)."""

    cusp: object
    r: int
    a: int

    def __repr__(self):
        if isinstance(self.cusp, NonSuperCusp):
            return f"stk(line={self.cusp.line.base!r}, k={self.cusp.k}; r={self.r})"
        return f"st(r={self.r}; cusp={self.cusp!r}; a={self.a})"


def cusp_order(cusp, ctx):
    if isinstance(cusp, NonSuperCusp):
        return 1
    return irr_order(cusp.irr, ctx)


def cusp_chi_line(cusp, ctx) -> Line:
    """The underlying supercuspidal twist line."""
    if isinstance(cusp, NonSuperCusp):
        return cusp.line
    return line_of(cusp.irr, ctx)[0]


def _cusp_key(cusp, ctx):
    lk = cusp_chi_line(cusp, ctx).key()
    if isinstance(cusp, NonSuperCusp):
        return (lk, 1, cusp.k)
    return (lk, 0, 0)


def _seg_key(s, ctx):
    return (_cusp_key(s.cusp, ctx), s.r, s.a)


def _coverage(s: GLSegment, ctx):
    """Twist coverage counts of the segment on its cuspidal line."""
    o = cusp_order(s.cusp, ctx)
    cov = [0] * o
    for i in range(s.r):
        cov[(s.a + i) % o] += 1
    return cov


def unlinked(s: GLSegment, s2: GLSegment, ctx) -> bool:
    """Neither segment precedes the other.  Precedence is decided by brute
    force: linked iff a strictly longer segment can be extracted from the
    combined twist coverage, evaluated cyclically on the window."""
    if _cusp_key(s.cusp, ctx) != _cusp_key(s2.cusp, ctx):
        return True
    o = cusp_order(s.cusp, ctx)
    cov = [x + y for x, y in zip(_coverage(s, ctx), _coverage(s2, ctx))]
    lo, hi = max(s.r, s2.r), s.r + s2.r
    for length in range(lo + 1, hi + 1):
        for c in range(o):
            need = [0] * o
            for i in range(length):
                need[(c + i) % o] += 1
            if all(n <= have for n, have in zip(need, cov)):
                return False
    return True


class GenericRep:
    """Multiset of pairwise unlinked segments (a generic representation)."""

    __slots__ = ("ctx", "segs")

    def __init__(self, ctx, segs):
        self.ctx = ctx
        self.segs = segs

    def items(self):
        return self.segs

    def gl_rank(self):
        ctx = self.ctx
        out = 0
        for s, m in self.segs:
            if isinstance(s.cusp, NonSuperCusp):
                o = s.cusp.line.order
                out += m * s.r * o * (ctx.ell ** s.cusp.k)
            else:
                out += m * s.r
        return out

    def is_zero(self):
        return not self.segs

    def __eq__(self, other):
        return isinstance(other, GenericRep) and self.segs == other.segs

    def __hash__(self):
        return hash(self.segs)

    def __repr__(self):
        if not self.segs:
            return "prod{ }"
        bits = [f"{s!r}" if m == 1 else f"{s!r}*{m}" for s, m in self.segs]
        return "prod{ " + ", ".join(bits) + " }"


def _canonical_segment(s: GLSegment, ctx) -> GLSegment:
    if isinstance(s.cusp, NonSuperCusp):
        line = line_of(s.cusp.line.base, ctx)[0]
        if s.cusp.k < 0:
            raise InvalidGenericRep("stk level must be nonnegative")
        if not 1 <= s.r < ctx.ell:
            raise InvalidGenericRep(
                f"St(r, St_k) needs 1 <= r < ell, got r={s.r}")
        return GLSegment(NonSuperCusp(line, s.cusp.k), s.r, 0)
    base, shift = line_of(s.cusp.irr, ctx)
    o = irr_order(s.cusp.irr, ctx)
    a = (s.a + shift) % o
    if o == 1:
        # on a non-banal line the cuspidal rho equals St_0(Z_rho)
        return _canonical_segment(
            GLSegment(NonSuperCusp(base, 0), s.r, 0), ctx)
    if s.r < 1:
        raise InvalidGenericRep("segment length must be positive")
    if s.r >= o:
        raise InvalidGenericRep(
            f"supercuspidal segment of length {s.r} >= o(rho)={o}: "
            "full-orbit cuspidals must be entered as stk(...)")
    return GLSegment(SuperCusp(base.base), s.r, a)


def make_generic(segments, ctx, check=True) -> GenericRep:
    """Normalize and validate a generic representation."""
    counts = {}
    for entry in segments:
        if isinstance(entry, tuple):
            s, m = entry
        else:
            s, m = entry, 1
        if m <= 0:
            continue
        s = _canonical_segment(s, ctx)
        counts[s] = counts.get(s, 0) + m
    segs = tuple(sorted(counts.items(), key=lambda p: _seg_key(p[0], ctx)))
    rep = GenericRep(ctx, segs)
    if check:
        flat = list(segs)
        for i, (s, m) in enumerate(flat):
            if m > 1 and not unlinked(s, s, ctx):
                raise InvalidGenericRep(f"{s!r} is linked with itself")
            for s2, _ in flat[i + 1:]:
                if not unlinked(s, s2, ctx):
                    raise InvalidGenericRep(f"linked segments {s!r}, {s2!r}")
    return rep


def st(r, cusp_irr, a=0, ctx=None) -> GLSegment:
    return GLSegment(SuperCusp(cusp_irr), r, a)


def stk(line_irr, k, r, ctx) -> GLSegment:
    return GLSegment(NonSuperCusp(line_of(line_irr, ctx)[0], k), r, 0)


def banal_tnb_split(pi: GenericRep):
    """Split a single-line generic representation into banal x totally
    non-banal factors."""
    ctx = pi.ctx
    lines = {cusp_chi_line(s.cusp, ctx).key() for s, _ in pi.segs}
    if len(lines) > 1:
        raise MixedLines("banal_tnb_split expects a single supercuspidal line")
    banal = [(s, m) for s, m in pi.segs if isinstance(s.cusp, SuperCusp)]
    tnb = [(s, m) for s, m in pi.segs if isinstance(s.cusp, NonSuperCusp)]
    return (GenericRep(ctx, tuple(banal)), GenericRep(ctx, tuple(tnb)))


def j_ell(k: int, lift, ctx) -> GenericRep:
    """Reduction of the ell-adic Steinberg St(k, lift) through the
    ell-adic digit combinatorics.

    lift is a cusp label describing the reduction of the lifted cuspidal:
    a SuperCusp for supercuspidal reduction (euclidean division by o(rho),
    then digits of the quotient), a NonSuperCusp(line, r0) when the
    reduction is cuspidal non-supercuspidal (digits of k, levels from r0).
    """
    if k < 1:
        raise ValueError("j_ell needs k >= 1")
    out = []
    if isinstance(lift, NonSuperCusp):
        line, base_level = lift.line, lift.k
        digits = []
        kk = k
        while kk:
            digits.append(kk % ctx.ell)
            kk //= ctx.ell
        for i, d in enumerate(digits):
            if d:
                out.append(GLSegment(NonSuperCusp(line, base_level + i), d, 0))
        return make_generic(out, ctx)
    o = irr_order(lift.irr, ctx)
    u, r = divmod(k, o)
    if r:
        out.append(GLSegment(lift, r, 0))
    line = line_of(lift.irr, ctx)[0]
    digits = []
    while u:
        digits.append(u % ctx.ell)
        u //= ctx.ell
    for i, d in enumerate(digits):
        if d:
            out.append(GLSegment(NonSuperCusp(line, i), d, 0))
    return make_generic(out, ctx)


# -- correspondences -----------------------------------------------------------

def v_map(pi: GenericRep) -> DeligneClass:
    """The nilpotent parameter: segments go to segments; a segment over
    St_k(Z_rho) contributes ell^k copies of the full twist orbit."""
    ctx = pi.ctx
    out = []
    for s, m in pi.segs:
        if isinstance(s.cusp, SuperCusp):
            out.append((seg(s.cusp.irr, s.r, s.a, ctx), m))
        else:
            line = s.cusp.line
            w = m * ctx.ell ** s.cusp.k
            for j in range(line.order):
                out.append((seg(line.base, s.r, j, ctx), w))
    return normalize(out, ctx)


def c_map(pi: GenericRep) -> DeligneClass:
    return cv_map(v_map(pi))


def dual_rep(pi: GenericRep) -> GenericRep:
    ctx = pi.ctx
    out = []
    for s, m in pi.segs:
        if isinstance(s.cusp, SuperCusp):
            o = irr_order(s.cusp.irr, ctx)
            out.append((GLSegment(SuperCusp(dual_irr(s.cusp.irr)), s.r,
                                  (-s.a - s.r + 1) % o), m))
        else:
            out.append((GLSegment(NonSuperCusp(s.cusp.line.dual(ctx), s.cusp.k),
                                  s.r, 0), m))
    return make_generic(out, ctx, check=False)


def twist_rep(pi: GenericRep, nu_power=0, chi: UnramifiedChar = None) -> GenericRep:
    ctx = pi.ctx
    out = []
    for s, m in pi.segs:
        if isinstance(s.cusp, SuperCusp):
            psi = s.cusp.irr
            if chi is not None:
                psi = UnramifiedChar(psi.t * chi.t)
            out.append((GLSegment(SuperCusp(psi), s.r, s.a + nu_power), m))
        else:
            line = s.cusp.line
            if chi is not None:
                line = line_of(UnramifiedChar(line.base.t * chi.t), ctx)[0]
            out.append((GLSegment(NonSuperCusp(line, s.cusp.k), s.r, 0), m))
    return make_generic(out, ctx, check=False)


# -- Rankin-Selberg style factors ---------------------------------------------

def _require_unramified(pi: GenericRep):
    for s, _ in pi.segs:
        base = (s.cusp.line.base if isinstance(s.cusp, NonSuperCusp)
                else s.cusp.irr)
        if not isinstance(base, UnramifiedChar):
            raise RamifiedCuspLine(f"{s!r} is not on an unramified line")


def _support_value_counts(pi: GenericRep):
    """Supercuspidal support as value -> multiplicity (ell^k weighted)."""
    ctx = pi.ctx
    _require_unramified(pi)
    counts = {}
    for s, m in pi.segs:
        if isinstance(s.cusp, SuperCusp):
            t = s.cusp.irr.t
            for i in range(s.r):
                u = (t * ctx.nu_value(s.a + i)).i
                counts[u] = counts.get(u, 0) + m
        else:
            t = s.cusp.line.base.t
            w = m * ctx.ell ** s.cusp.k
            for i in range(s.r):
                for j in range(s.cusp.line.order):
                    u = (t * ctx.nu_value(i + j)).i
                    counts[u] = counts.get(u, 0) + w
    return counts


def rs_l_factor(pi: GenericRep, pi2: GenericRep) -> RationalFraction:
    """L of the pair: totally non-banal segments contribute 1; a banal
    segment pair St(n, nu^a chi) x St(m, nu^b chi'), m <= n, contributes
    prod_k 1/(1 - value(nu^(n-1+a) chi * nu^(k+b) chi') X)."""
    ctx = pi.ctx
    _require_unramified(pi)
    _require_unramified(pi2)
    roots = []
    for s, m in pi.segs:
        if not isinstance(s.cusp, SuperCusp):
            continue
        for s2, m2 in pi2.segs:
            if not isinstance(s2.cusp, SuperCusp):
                continue
            (n, a, t), (mm, b, t2) = ((s.r, s.a, s.cusp.irr.t),
                                      (s2.r, s2.a, s2.cusp.irr.t))
            if mm > n:
                (n, a, t), (mm, b, t2) = (mm, b, t2), (n, a, t)
            for k in range(mm):
                u = t * t2 * ctx.nu_value(n - 1 + a + k + b)
                roots.extend([u] * (m * m2))
    return euler_factor(roots, field=ctx.field)


def rs_gamma_factor(pi: GenericRep, pi2: GenericRep) -> FactorExpr:
    """Product over supercuspidal support pairs of the gamma factors of
    the product characters."""
    ctx = pi.ctx
    c1 = _support_value_counts(pi)
    c2 = _support_value_counts(pi2)
    field = ctx.field
    pair_counts = {}
    for u, cu in c1.items():
        for v, cv in c2.items():
            w = field.mul_idx(u, v)
            pair_counts[w] = pair_counts.get(w, 0) + cu * cv
    return gamma_from_counts(pair_counts, {}, ctx)


def rs_epsilon_factor(pi: GenericRep, pi2: GenericRep) -> FactorExpr:
    ctx = pi.ctx
    g = rs_gamma_factor(pi, pi2)
    lf = rs_l_factor(pi, pi2)
    ld = rs_l_factor(dual_rep(pi), dual_rep(pi2)).subst_qinv(ctx.q_img)
    eps = g * FactorExpr.from_rational(lf) / FactorExpr.from_rational(ld)
    ok, _ = is_unit(eps)
    if not ok:
        raise EpsilonNotUnit(f"pair epsilon is not a unit: {eps!r}")
    return eps


def central_char(pi: GenericRep) -> Character:
    """Product of the supercuspidal support values (= det of the
    C-parameter, by the correspondence)."""
    ctx = pi.ctx
    acc = trivial_character(ctx)
    for u, c in sorted(_support_value_counts(pi).items()):
        acc = acc * Character(ctx.field.elem(u) ** c)
    return acc


# -- the preservation harness ---------------------------------------------------

@dataclass
class PreservationReport:
    rs_l: RationalFraction
    gal_l: RationalFraction
    rs_gamma: FactorExpr
    gal_gamma: FactorExpr
    rs_eps: FactorExpr
    gal_eps: FactorExpr
    v_side_l: RationalFraction

    @property
    def l_match(self):
        return self.rs_l == self.gal_l

    @property
    def gamma_match(self):
        return self.rs_gamma == self.gal_gamma

    @property
    def eps_match(self):
        return self.rs_eps == self.gal_eps

    @property
    def all_match(self):
        return self.l_match and self.gamma_match and self.eps_match

    def lines(self):
        yield f"L   rs={self.rs_l!r}"
        yield f"L   gal={self.gal_l!r}  [{'MATCH' if self.l_match else 'MISMATCH'}]"
        yield f"L   v-side={self.v_side_l!r}"
        yield f"GAMMA rs={self.rs_gamma!r}"
        yield f"GAMMA gal={self.gal_gamma!r}  [{'MATCH' if self.gamma_match else 'MISMATCH'}]"
        yield f"EPS rs={self.rs_eps!r}"
        yield f"EPS gal={self.gal_eps!r}  [{'MATCH' if self.eps_match else 'MISMATCH'}]"


def check_preservation(pi: GenericRep, pi2: GenericRep, table=None,
                       with_v_side=True) -> PreservationReport:
    """Both sides of the three preservation identities, plus (optionally)
    the V-side L-factor witnessing that the plain nilpotent parameter does
    not preserve L."""
    tens = tensor_ss(c_map(pi), c_map(pi2), table)
    if with_v_side:
        v_side = l_factor(tensor_ss(v_map(pi), v_map(pi2), table))
    else:
        v_side = None
    return PreservationReport(
        rs_l=rs_l_factor(pi, pi2),
        gal_l=l_factor(tens),
        rs_gamma=rs_gamma_factor(pi, pi2),
        gal_gamma=gamma_factor(tens),
        rs_eps=rs_epsilon_factor(pi, pi2),
        gal_eps=epsilon_factor(tens),
        v_side_l=v_side,
    )
