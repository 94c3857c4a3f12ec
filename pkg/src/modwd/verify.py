"""Verification harness: grid generators and sweep drivers.

Each run_* function implements one acceptance-style sweep and returns a
small summary object with a passed flag, counts and any counterexamples.
The CLI `verify` subcommand and the acceptance tests both go through
these; the heavy sweeps can fan out over worker processes (the checks are
independent pair computations).
"""

from __future__ import annotations

import multiprocessing
import random
from dataclasses import dataclass, field as dc_field

from .deligne import (Cyc, Seg, det_class, dual_class, interval_profile,
                      normalize, tensor_ss, twist_class)
from .factors import (check_multiplicativity, constituent_counts,
                      epsilon_factor, gamma_factor, gamma_from_counts,
                      l_factor)
from .field import make_ctx
from .gln import (GLSegment, NonSuperCusp, SuperCusp, c_map, central_char,
                  check_preservation, dual_rep, make_generic, twist_rep,
                  unlinked)
from .laurent import FactorExpr, UnitExpr, euler_factor, is_unit
from .matrixmodel import MatrixDeligne, decompose, oracle_tensor_ss, realize
from .weil import UnramifiedChar, line_of


@dataclass
class SweepSummary:
    name: str
    checked: int = 0
    failures: list = dc_field(default_factory=list)
    note: str = ""

    @property
    def passed(self):
        return not self.failures

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.note})" if self.note else ""
        msg = f"{status} {self.name}: {self.checked} checks{extra}"
        if self.failures:
            msg += f"; {len(self.failures)} failures, first: {self.failures[0]}"
        return msg


# -- grids -----------------------------------------------------------------------

def unramified_segment_pool(ctx, max_len=4, max_k=1):
    """Segment types on the line of the trivial character: banal segments
    of every twist and length < o, and St_k-based segments for k <= max_k."""
    chi1 = UnramifiedChar(ctx.field.one)
    o = ctx.o_nu
    pool = []
    for r in range(1, min(max_len, o - 1) + 1):
        for a in range(o):
            pool.append(GLSegment(SuperCusp(chi1), r, a))
    line = line_of(chi1, ctx)[0]
    for k in range(max_k + 1):
        for r in range(1, min(max_len, ctx.ell - 1) + 1):
            pool.append(GLSegment(NonSuperCusp(line, k), r, 0))
    return [make_generic([s], ctx).segs[0][0] for s in pool]


def enumerate_generic_reps(ctx, max_segments=3, max_len=4, max_k=1):
    """All generic representations with at most max_segments pairwise
    unlinked segments from the pool (multiset repetition allowed)."""
    pool = unramified_segment_pool(ctx, max_len=max_len, max_k=max_k)
    reps = [make_generic([], ctx)]

    def extend(prefix, start):
        for i in range(start, len(pool)):
            s = pool[i]
            if any(not unlinked(s, t, ctx) for t in prefix):
                continue
            if prefix and prefix[-1] == s and not unlinked(s, s, ctx):
                continue
            cand = prefix + [s]
            reps.append(make_generic(cand, ctx, check=False))
            if len(cand) < max_segments:
                extend(cand, i)

    extend([], 0)
    return reps


def enumerate_line_classes(ctx, max_dim=12):
    """All normalized classes of dimension <= max_dim supported on the
    line of the trivial character."""
    chi1 = UnramifiedChar(ctx.field.one)
    line = line_of(chi1, ctx)[0]
    o = ctx.o_nu
    pool = []
    for r in range(1, max_dim + 1):
        for a in range(o):
            pool.append((Seg(chi1, r, a), r))
    for r in range(1, max_dim // o + 1):
        pool.append((Cyc(line, r), r * o))
    out = []

    def extend(prefix, start, budget):
        for i in range(start, len(pool)):
            ind, d = pool[i]
            if d > budget:
                continue
            cand = prefix + [ind]
            out.append(normalize(cand, ctx))
            extend(cand, i, budget - d)

    extend([], 0, max_dim)
    return out


# -- criterion 1: the non-preservation witness -----------------------------------

def run_witness(ctx=None) -> SweepSummary:
    ctx = ctx or make_ctx(5, 2)
    chi1 = UnramifiedChar(ctx.field.one)
    rho = make_generic([GLSegment(NonSuperCusp(line_of(chi1, ctx)[0], 0), 1, 0)], ctx)
    triv = make_generic([GLSegment(SuperCusp(chi1), 1, 0)], ctx)
    rep = check_preservation(rho, triv)
    s = SweepSummary("non-preservation witness")
    expected_v = euler_factor([ctx.nu_value(k) for k in range(ctx.o_nu)])
    checks = [
        ("rs L = 1", rep.rs_l.is_one()),
        ("C-side L = 1", rep.gal_l.is_one()),
        ("V-side L = prod (1-q^-k X)^-1", rep.v_side_l == expected_v),
        ("V-side L != 1", not rep.v_side_l.is_one()),
        ("pair identities hold", rep.all_match),
    ]
    s.checked = len(checks)
    s.failures = [name for name, ok in checks if not ok]
    return s


# -- criterion 2: the preservation sweep ------------------------------------------

def _pair_precompute(ctx, reps):
    from .gln import _support_value_counts
    data = []
    for pi in reps:
        C = c_map(pi)
        banal = [(s.r, s.a, s.cusp.irr.t, m) for s, m in pi.segs
                 if isinstance(s.cusp, SuperCusp)]
        dual_pi = dual_rep(pi)
        dual_banal = [(s.r, s.a, s.cusp.irr.t, m) for s, m in dual_pi.segs
                      if isinstance(s.cusp, SuperCusp)]
        supp = _support_value_counts(pi)
        nsegs = sum(m for _, m in pi.segs)
        data.append((C, banal, dual_banal, supp, nsegs))
    return data


def _rs_l_roots(ctx, b1, b2):
    roots = []
    for n, a, t, m in b1:
        for n2, b, t2, m2 in b2:
            (N, A, T), (M, B, T2) = (n, a, t), (n2, b, t2)
            if M > N:
                (N, A, T), (M, B, T2) = (n2, b, t2), (n, a, t)
            for k in range(M):
                roots.extend([(T * T2 * ctx.nu_value(N - 1 + A + k + B)).i] * (m * m2))
    return sorted(roots)


def _gal_l_roots(ctx, T, dual=False):
    roots = []
    for ind, m in T.parts:
        if isinstance(ind, Seg) and isinstance(ind.irr, UnramifiedChar):
            if dual:
                u = ind.irr.t.inverse() * ctx.nu_value(-ind.a)
            else:
                u = ind.irr.t * ctx.nu_value(ind.a + ind.r - 1)
            roots.extend([u.i] * m)
    return sorted(roots)


def _pair_product_counts(ctx, s1, s2):
    field = ctx.field
    pairc = {}
    for u, cu in s1.items():
        for v, cv in s2.items():
            w = field.mul_idx(u, v)
            pairc[w] = pairc.get(w, 0) + cu * cv
    return pairc


def _check_pair(ctx, d1, d2):
    """One preservation pair from precomputed data; returns None or a
    mismatch tag.

    gamma, L and epsilon are pure functions of the constituent multiset,
    the L-root multiset, and the dual L-root multiset respectively, and
    both sides share those formatters; comparing the multisets (computed
    along fully independent routes) is therefore equivalent to comparing
    the built factors, token for token.
    """
    C1, b1, db1, s1, _ = d1
    C2, b2, db2, s2, _ = d2
    T = tensor_ss(C1, C2)
    if _rs_l_roots(ctx, b1, b2) != _gal_l_roots(ctx, T):
        return "L"
    pairc = _pair_product_counts(ctx, s1, s2)
    gal_chars, gal_toks = constituent_counts(T)
    if gal_toks or pairc != gal_chars:
        return "gamma"
    if _rs_l_roots(ctx, db1, db2) != _gal_l_roots(ctx, T, dual=True):
        return "epsilon"
    return None


def _check_pair_full(ctx, d1, d2):
    """The same pair check with the factor objects actually built and
    compared, epsilon unit checks included."""
    C1, b1, db1, s1, _ = d1
    C2, b2, db2, s2, _ = d2
    field = ctx.field
    T = tensor_ss(C1, C2)
    rs_l = euler_factor([field.elem(r) for r in _rs_l_roots(ctx, b1, b2)],
                        field=field)
    gal_l = l_factor(T)
    if rs_l != gal_l:
        return "L"
    rs_g = gamma_from_counts(_pair_product_counts(ctx, s1, s2), {}, ctx)
    gal_g = gamma_factor(T)
    if rs_g != gal_g:
        return "gamma"
    rs_ld = euler_factor([field.elem(r) for r in _rs_l_roots(ctx, db1, db2)],
                         field=field).subst_qinv(ctx.q_img)
    gal_ld = l_factor(dual_class(T)).subst_qinv(ctx.q_img)
    rs_e = rs_g * FactorExpr.from_rational(rs_l) / FactorExpr.from_rational(rs_ld)
    gal_e = gal_g * FactorExpr.from_rational(gal_l) / FactorExpr.from_rational(gal_ld)
    if not is_unit(rs_e)[0] or not is_unit(gal_e)[0]:
        return "epsilon-not-unit"
    if rs_e != gal_e:
        return "epsilon"
    return None


_POOL_STATE = {}


def _presv_init(ell, q, max_segments, max_len, max_k):
    ctx = make_ctx(ell, q)
    reps = enumerate_generic_reps(ctx, max_segments, max_len, max_k)
    _POOL_STATE["ctx"] = ctx
    _POOL_STATE["data"] = _pair_precompute(ctx, reps)


def _presv_rows(rows):
    """Check all pairs (i, j >= i) for the given rows; pairs where both
    representations have at most two segments additionally go through the
    full factor-object comparison."""
    ctx = _POOL_STATE["ctx"]
    data = _POOL_STATE["data"]
    checked = 0
    fails = []
    for i in rows:
        di = data[i]
        small_i = di[4] <= 2
        for j in range(i, len(data)):
            dj = data[j]
            tag = _check_pair(ctx, di, dj)
            if tag is None and small_i and dj[4] <= 2:
                tag = _check_pair_full(ctx, di, dj)
            checked += 1
            if tag:
                fails.append((i, j, tag))
    return checked, fails


def run_preservation(ell, q, max_segments=3, max_len=4, max_k=1,
                     processes=1) -> SweepSummary:
    """All ordered-up-to-symmetry pairs of grid representations: L, gamma
    and epsilon must agree on both sides, token-exactly."""
    name = f"preservation sweep ({ell},{q})"
    args = (ell, q, max_segments, max_len, max_k)
    if processes <= 1:
        _presv_init(*args)
        n = len(_POOL_STATE["data"])
        checked, fails = _presv_rows(range(n))
        s = SweepSummary(name, checked, fails, note=f"{n} reps")
        return s
    ctx = make_ctx(ell, q)
    n = len(enumerate_generic_reps(ctx, max_segments, max_len, max_k))
    # interleave rows so workers see equal loads (early rows have more pairs)
    buckets = [list(range(w, n, 2 * processes)) for w in range(2 * processes)]
    with multiprocessing.Pool(processes, initializer=_presv_init,
                              initargs=args) as pool:
        results = pool.map(_presv_rows, buckets)
    checked = sum(r[0] for r in results)
    fails = [f for r in results for f in r[1]]
    return SweepSummary(name, checked, fails, note=f"{n} reps")


# -- criterion 3: multiplicativity -------------------------------------------------

def run_multiplicativity(params=((5, 2), (3, 2), (2, 3)), nmax=5) -> SweepSummary:
    s = SweepSummary("L multiplicativity")
    for ell, q in params:
        ctx = make_ctx(ell, q)
        values = [ctx.field.one]
        if ctx.field.order > 2:
            values.append(ctx.field.elem(ctx.field.gen_idx))
        for t in values:
            for t2 in values:
                psi, psi2 = UnramifiedChar(t), UnramifiedChar(t2)
                for n in range(1, nmax + 1):
                    for m in range(1, n + 1):
                        s.checked += 1
                        if not check_multiplicativity(n, m, psi, psi2, ctx):
                            s.failures.append((ell, q, repr(t), repr(t2), n, m))
    return s


# -- criterion 4: classification round trips --------------------------------------

def _roundtrip_init(ell, q, max_dim):
    ctx = make_ctx(ell, q)
    _POOL_STATE["ctx"] = ctx
    _POOL_STATE["classes"] = enumerate_line_classes(ctx, max_dim)


def _roundtrip_chunk(idxs):
    ctx = _POOL_STATE["ctx"]
    classes = _POOL_STATE["classes"]
    checked = 0
    fails = []
    for i in idxs:
        a = classes[i]
        if decompose(realize(a, ctx), ctx) != a:
            fails.append(repr(a))
        checked += 1
    return checked, fails


def run_roundtrip(ell, q, max_dim=12, processes=1) -> SweepSummary:
    """decompose(realize(a)) = a for every class on the trivial-character
    line up to max_dim."""
    name = f"classification roundtrip ({ell},{q})"
    if processes <= 1:
        _roundtrip_init(ell, q, max_dim)
        n = len(_POOL_STATE["classes"])
        checked, fails = _roundtrip_chunk(range(n))
        return SweepSummary(name, checked, fails, note=f"dim<={max_dim}")
    ctx = make_ctx(ell, q)
    n = len(enumerate_line_classes(ctx, max_dim))
    buckets = [list(range(w, n, processes)) for w in range(processes)]
    with multiprocessing.Pool(processes, initializer=_roundtrip_init,
                              initargs=(ell, q, max_dim)) as pool:
        results = pool.map(_roundtrip_chunk, buckets)
    checked = sum(r[0] for r in results)
    fails = [f for r in results for f in r[1]]
    return SweepSummary(name, checked, fails, note=f"dim<={max_dim}")


def run_random_transport(ell, q, count=1000, max_dim=10, seed=20240901) -> SweepSummary:
    """Random conjugated and operator-rescaled realizations decompose to
    the original class (equivalence invariance at the matrix level)."""
    ctx = make_ctx(ell, q)
    field = ctx.field
    rng = random.Random(seed)
    chi1 = UnramifiedChar(field.one)
    line = line_of(chi1, ctx)[0]
    o = ctx.o_nu
    s = SweepSummary(f"random conjugation/rescale transport ({ell},{q})")
    from ._linalg import FMat
    for _ in range(count):
        parts = []
        budget = rng.randrange(1, max_dim + 1)
        while budget > 0:
            if o > 1 and budget >= o and rng.random() < 0.4:
                r = rng.randrange(1, budget // o + 1)
                parts.append(Cyc(line, r))
                budget -= r * o
            else:
                r = rng.randrange(1, budget + 1)
                parts.append(Seg(chi1, r, rng.randrange(o)))
                budget -= r
        a = normalize(parts, ctx)
        m = realize(a, ctx)
        n = m.dim
        # a global operator rescaling is class-preserving on every summand
        lam = field.elem(rng.randrange(1, field.order))
        U = m.U.scale(lam)
        while True:
            P = FMat(field, [[rng.randrange(field.order) for _ in range(n)]
                             for _ in range(n)])
            if P.rank() == n:
                break
        Pi = P.inverse()
        mc = MatrixDeligne(P @ m.F @ Pi, P @ U @ Pi)
        s.checked += 1
        if decompose(mc, ctx) != a:
            s.failures.append(repr(a))
    return s


def _lmatrix_chunk(idxs):
    from .factors import l_factor_matrix
    ctx = _POOL_STATE["ctx"]
    classes = _POOL_STATE["classes"]
    checked = 0
    fails = []
    for i in idxs:
        a = classes[i]
        if l_factor_matrix(realize(a, ctx), ctx) != l_factor(a):
            fails.append(repr(a))
        checked += 1
    return checked, fails


def run_l_matrix_agreement(ell, q, max_dim=12, processes=1) -> SweepSummary:
    """l_factor computed from normal forms equals the literal kernel and
    characteristic-polynomial computation on realizations."""
    name = f"L formal vs matrix ({ell},{q})"
    if processes <= 1:
        _roundtrip_init(ell, q, max_dim)
        n = len(_POOL_STATE["classes"])
        checked, fails = _lmatrix_chunk(range(n))
        return SweepSummary(name, checked, fails, note=f"dim<={max_dim}")
    ctx = make_ctx(ell, q)
    n = len(enumerate_line_classes(ctx, max_dim))
    buckets = [list(range(w, n, processes)) for w in range(processes)]
    with multiprocessing.Pool(processes, initializer=_roundtrip_init,
                              initargs=(ell, q, max_dim)) as pool:
        results = pool.map(_lmatrix_chunk, buckets)
    checked = sum(r[0] for r in results)
    fails = [f for r in results for f in r[1]]
    return SweepSummary(name, checked, fails, note=f"dim<={max_dim}")


# -- criterion 5: tensor against the matrix oracle ---------------------------------

def run_tensor_oracle(ell, q, rmax=4) -> SweepSummary:
    """tensor_ss == oracle_tensor_ss on all indecomposable pairs with
    r <= rmax on the trivial-character line."""
    ctx = make_ctx(ell, q)
    chi1 = UnramifiedChar(ctx.field.one)
    line = line_of(chi1, ctx)[0]
    indecs = []
    for r in range(1, rmax + 1):
        for a in range(ctx.o_nu):
            indecs.append(Seg(chi1, r, a))
        indecs.append(Cyc(line, r))
    s = SweepSummary(f"tensor vs oracle ({ell},{q})")
    for i, A in enumerate(indecs):
        for B in indecs[i:]:
            a, b = normalize([A], ctx), normalize([B], ctx)
            s.checked += 1
            if tensor_ss(a, b) != oracle_tensor_ss(a, b):
                s.failures.append((repr(A), repr(B)))
    return s


# -- criterion 6: epsilon invertibility ---------------------------------------------

def run_epsilon(ell, q, max_dim=12, classes=None) -> SweepSummary:
    """is_unit(epsilon) over the roundtrip population, and the banal cycle
    unit values match (-(tX)^o)^r exactly."""
    ctx = make_ctx(ell, q)
    field = ctx.field
    if classes is None:
        classes = enumerate_line_classes(ctx, max_dim)
    s = SweepSummary(f"epsilon invertibility ({ell},{q})")
    for a in classes:
        s.checked += 1
        try:
            eps = epsilon_factor(a)
        except Exception as exc:  # EpsilonNotUnit or anything else
            s.failures.append((repr(a), repr(exc)))
            continue
        if not is_unit(eps)[0]:
            s.failures.append((repr(a), "not a unit"))
    if ctx.o_nu > 1:
        o = ctx.o_nu
        for t_idx in sorted({1, field.gen_idx}):
            t = field.elem(t_idx)
            for r in range(1, 4):
                a = normalize([Cyc(line_of(UnramifiedChar(t), ctx)[0], r)], ctx)
                unit = is_unit(epsilon_factor(a))[1]
                want = UnitExpr(field, ((-field.one) ** r * t ** (o * r)).i, o * r)
                s.checked += 1
                if unit != want:
                    s.failures.append((repr(a), f"unit {unit!r} != {want!r}"))
    return s


# -- criterion 7: correspondence properties ------------------------------------------

def run_correspondence(ell, q, max_segments=3, max_len=4, max_k=1) -> SweepSummary:
    """C commutes with twists and duals and matches central characters on
    the whole grid."""
    ctx = make_ctx(ell, q)
    field = ctx.field
    reps = enumerate_generic_reps(ctx, max_segments, max_len, max_k)
    chis = [UnramifiedChar(field.elem(field.gen_idx))]
    s = SweepSummary(f"correspondence properties ({ell},{q})",
                     note=f"{len(reps)} reps")
    for pi in reps:
        C = c_map(pi)
        s.checked += 1
        if c_map(dual_rep(pi)) != dual_class(C):
            s.failures.append(("dual", repr(pi)))
            continue
        if c_map(twist_rep(pi, nu_power=1)) != twist_class(C, nu_power=1):
            s.failures.append(("nu-twist", repr(pi)))
            continue
        ok = True
        for chi in chis:
            if c_map(twist_rep(pi, chi=chi)) != twist_class(C, chi=chi):
                s.failures.append(("chi-twist", repr(pi)))
                ok = False
                break
        if not ok:
            continue
        if central_char(pi) != det_class(C):
            s.failures.append(("central char", repr(pi)))
    # injectivity of c_map on the grid
    images = {}
    for pi in reps:
        key = c_map(pi)
        if key in images and images[key] != pi:
            s.failures.append(("injectivity", repr(pi), repr(images[key])))
        images[key] = pi
    s.checked += len(reps)
    return s


# -- criterion 8: profile laws --------------------------------------------------------

def run_profile_law(ells=(2, 3, 5, 7), nmax=6) -> SweepSummary:
    s = SweepSummary("interval profile laws")
    for ell in ells:
        for n in range(1, nmax + 1):
            for m in range(1, n + 1):
                prof = interval_profile(n, m, ell)
                rights = sorted(d for (c, d), mult in prof for _ in range(mult))
                lefts = sorted(c for (c, d), mult in prof for _ in range(mult))
                total = sum((d - c + 1) * mult for (c, d), mult in prof)
                s.checked += 1
                if rights != list(range(n - 1, n + m - 1)):
                    s.failures.append((ell, n, m, "right endpoints"))
                elif lefts != list(range(m)):
                    s.failures.append((ell, n, m, "left endpoints"))
                elif total != n * m:
                    s.failures.append((ell, n, m, "total length"))
    return s
