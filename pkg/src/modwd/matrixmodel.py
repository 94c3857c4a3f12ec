"""Concrete matrix realizations of unramified-line classes.

A MatrixDeligne is a pair (F, U) over the context field with UF = qFU,
F invertible and semisimple (inertia acts trivially, so F determines the
Weil action).  realize() builds the normal-form blocks; decompose() is the
inverse, assembled from the classification proofs: split by Frobenius
eigenvalue orbits, read segment multiplicities off rank persistence of the
nilpotent transition maps, and cycle lengths off the unipotent part of the
holonomy around each orbit.  oracle_tensor_ss() tensors realizations at
generic operator scalings and decomposes, which is the independent check
for every formal tensor rule.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import _poly
from ._linalg import FMat
from .deligne import Cyc, DeligneClass, Seg, cyc, normalize, zero_class
from .errors import (FNotInvertible, NeedsLargerField, NotNilpotent,
                     NotSemisimple, RamifiedLine, RelationViolated,
                     ZeroElement)
from .field import make_ctx
from .weil import UnramifiedChar, line_of


@dataclass
class MatrixDeligne:
    F: FMat
    U: FMat

    @property
    def dim(self):
        return self.F.nrows


@dataclass
class JordanPair:
    D: FMat
    N: FMat


def validate(m: MatrixDeligne, ctx) -> bool:
    """Check the Deligne relation UF = qFU, invertibility and
    semisimplicity of F.  Raises on violation, returns True when ok."""
    F, U = m.F, m.U
    if F.nrows != F.ncols or U.a.shape != F.a.shape:
        raise ValueError("F and U must be square of equal size")
    n = F.nrows
    if n == 0:
        return True
    if (U @ F) != (F @ U).scale(ctx.q_img):
        raise RelationViolated("UF != qFU")
    if F.is_diagonal():
        if any(int(F.a[i, i]) == 0 for i in range(n)):
            raise FNotInvertible("zero Frobenius eigenvalue")
        return True
    if F.rank() != n:
        raise FNotInvertible("Frobenius matrix is singular")
    rad = _poly.radical(F.field, F.charpoly())
    if not F.poly_eval(rad).is_zero():
        raise NotSemisimple("Frobenius matrix is not semisimple")
    return True


# -- Jordan-Chevalley ----------------------------------------------------------

def _jc_newton(U: FMat) -> JordanPair:
    """Exact additive Jordan decomposition by Newton iteration on the
    radical of the characteristic polynomial; D and N are polynomials in U."""
    field = U.field
    n = U.nrows
    if n == 0:
        return JordanPair(U.copy(), U.copy())
    cp = U.charpoly()
    rad = _poly.radical(field, cp)
    radd = _poly.pderiv(field, rad)
    d = _poly.pmod(field, [0, 1], cp)
    for _ in range(n.bit_length() + 2):
        e = _poly.pcompose_mod(field, rad, d, cp)
        if not e:
            break
        der = _poly.pcompose_mod(field, radd, d, cp)
        d = _poly.pmod(field, _poly.psub(field, d, _poly.pmul(
            field, e, _poly.pinv_mod(field, der, cp))), cp)
    else:
        raise RuntimeError("Jordan-Chevalley iteration failed to converge")
    D = U.poly_eval(d)
    return JordanPair(D, U - D)


def jordan_chevalley(U: FMat, ctx=None) -> JordanPair:
    """Jordan decomposition U = D + N under the strict contract that the
    eigenvalues of U lie in the context field."""
    if U.nrows:
        _, rem = _poly.roots_with_multiplicity(U.field, U.charpoly())
        if rem:
            raise NeedsLargerField("eigenvalues of U lie outside the field")
    return _jc_newton(U)


# -- realization ----------------------------------------------------------------

def _cycle_matrix(field, o):
    a = np.zeros((o, o), dtype=np.int32)
    for k in range(o):
        a[(k + 1) % o, k] = 1
    return FMat(field, a)


def _shift_matrix(field, r):
    a = np.zeros((r, r), dtype=np.int32)
    for j in range(r - 1):
        a[j + 1, j] = 1
    return FMat(field, a)


def realize(a: DeligneClass, ctx) -> MatrixDeligne:
    """Block-diagonal matrix pair for a class supported on unramified lines.

    Seg(chi_t, r, a): F = diag(t q^-(a+j)), U the lower shift.
    Cyc(Z_chi, r): F = diag(q^-i) (x) diag(t q^-k), U = Id (x) C + N (x) Id
    with C the full cycle of holonomy 1.
    """
    field = ctx.field
    fb, ub = [], []
    for ind, mult in a.parts:
        if isinstance(ind, Seg):
            if not isinstance(ind.irr, UnramifiedChar):
                raise RamifiedLine(f"cannot realize {ind!r}")
            t = ind.irr.t
            Fb = FMat.diag(field, [(t * ctx.nu_value(ind.a + j)).i
                                   for j in range(ind.r)])
            Ub = _shift_matrix(field, ind.r)
        else:
            base = ind.line.base
            if not isinstance(base, UnramifiedChar):
                raise RamifiedLine(f"cannot realize {ind!r}")
            o, r = ind.line.order, ind.r
            Fseg = FMat.diag(field, [ctx.nu_value(i).i for i in range(r)])
            Fcyc = FMat.diag(field, [(base.t * ctx.nu_value(k)).i for k in range(o)])
            Fb = Fseg.kron(Fcyc)
            D = FMat.identity(field, r).kron(_cycle_matrix(field, o))
            N = _shift_matrix(field, r).kron(FMat.identity(field, o))
            Ub = D + N
        for _ in range(mult):
            fb.append(Fb)
            ub.append(Ub)
    if not fb:
        z = FMat.zeros(field, 0, 0)
        return MatrixDeligne(z, z)
    return MatrixDeligne(FMat.block_diag(field, fb), FMat.block_diag(field, ub))


def raw_tensor(m1: MatrixDeligne, m2: MatrixDeligne) -> MatrixDeligne:
    """(F1 (x) F2, U1 (x) Id + Id (x) U2); the relation holds automatically."""
    field = m1.F.field
    I1 = FMat.identity(field, m1.dim)
    I2 = FMat.identity(field, m2.dim)
    return MatrixDeligne(m1.F.kron(m2.F), m1.U.kron(I2) + I1.kron(m2.U))


def matrix_dual(m: MatrixDeligne) -> MatrixDeligne:
    """(F, U) -> ((F^-1)^T, (D - N)^T): the dual pair in coordinates."""
    jp = _jc_newton(m.U)
    return MatrixDeligne(m.F.inverse().T, (jp.D - jp.N).T)


# -- decomposition ----------------------------------------------------------------

def _adapted(m: MatrixDeligne, ctx):
    """Change of basis grouping Frobenius eigenspaces.

    Returns (ranges, G, P) with ranges: eigenvalue index -> (lo, hi) column
    range, G = U in the adapted basis, P the basis (None when F is already
    diagonal and only a permutation was applied).
    """
    field = m.F.field
    n = m.F.nrows
    if m.F.is_diagonal():
        groups = {}
        for i in range(n):
            groups.setdefault(int(m.F.a[i, i]), []).append(i)
        vals = sorted(groups)
        perm = np.array([i for v in vals for i in groups[v]], dtype=np.intp)
        G = FMat(field, m.U.a[np.ix_(perm, perm)])
        Pm = FMat(field, np.eye(n, dtype=np.int32)[:, perm])
        ranges = {}
        lo = 0
        for v in vals:
            ranges[v] = (lo, lo + len(groups[v]))
            lo += len(groups[v])
        return ranges, G, Pm
    cp = m.F.charpoly()
    roots, rem = _poly.roots_with_multiplicity(field, cp)
    if rem:
        raise NeedsLargerField("Frobenius eigenvalues lie outside the field")
    vals = sorted(v for v, _ in roots)
    mults = dict(roots)
    bases = []
    ranges = {}
    lo = 0
    for v in vals:
        E = (m.F - FMat.identity(field, n).scale(v)).kernel()
        if E.ncols != mults[v]:
            raise NotSemisimple("eigenspace smaller than multiplicity")
        bases.append(E)
        ranges[v] = (lo, lo + E.ncols)
        lo += E.ncols
    P = FMat.hstack(bases)
    G = P.inverse() @ m.U @ P
    return ranges, G, P


def _lines_of_values(vals, ctx, field):
    """Group eigenvalue indices into q-multiplication orbits; returns
    (canonical t0, orbit value at each twist c) per line."""
    out = []
    seen = set()
    for v in vals:
        if v in seen:
            continue
        orbit = []
        x = v
        for _ in range(ctx.o_nu):
            orbit.append(x)
            x = field.mul_idx(x, ctx.q_img.i)
        seen.update(orbit)
        t0 = min(orbit, key=field.dlog_idx)
        slice_vals = []
        x = t0
        for _ in range(ctx.o_nu):
            slice_vals.append(x)
            x = field.mul_idx(x, ctx.q_inv.i)
        out.append((t0, slice_vals))
    return sorted(out, key=lambda p: field.dlog_idx(p[0]))


def decompose(m: MatrixDeligne, ctx, check=True) -> DeligneClass:
    """The unique normalized class with realize(decompose(m)) equivalent
    to m."""
    field = m.F.field
    n = m.F.nrows
    if n == 0:
        return zero_class(ctx)
    if check:
        validate(m, ctx)
    ranges, G, _ = _adapted(m, ctx)
    lines = _lines_of_values(list(ranges), ctx, field)
    o = ctx.o_nu
    out = []
    for t0, slice_vals in lines:
        idxs = []
        for v in slice_vals:
            lo, hi = ranges.get(v, (0, 0))
            idxs.append(np.arange(lo, hi, dtype=np.intp))
        trans = [G.submatrix(idxs[(c + 1) % o], idxs[c]) for c in range(o)]
        # U must shift each slice into the next one
        for c in range(o):
            if idxs[c].size:
                block = G.a[:, idxs[c]]
                nzrows = set(np.nonzero(block)[0].tolist())
                if not nzrows <= set(idxs[(c + 1) % o].tolist()):
                    raise RelationViolated("operator does not shift eigenspaces")

        # holonomies H_c around the orbit from prefix/suffix products
        prefixes = [FMat.identity(field, idxs[0].size)]
        for c in range(o - 1):
            prefixes.append(trans[c] @ prefixes[-1])
        suffixes = [None] * o
        suffixes[o - 1] = trans[o - 1]
        for c in range(o - 2, -1, -1):
            suffixes[c] = suffixes[c + 1] @ trans[c]
        H0 = None
        W_bases, B0 = [], None
        for c in range(o):
            d = idxs[c].size
            if d == 0:
                W_bases.append(FMat.zeros(field, 0, 0))
                continue
            H = suffixes[0] if c == 0 else prefixes[c] @ suffixes[c]
            if c == 0:
                H0 = H
            if H.is_zero():
                W_bases.append(FMat.identity(field, d))
                if c == 0:
                    B0 = FMat.zeros(field, d, 0)
                continue
            Hd = H.power(d)
            W_bases.append(Hd.kernel())
            if c == 0:
                B0 = Hd.column_space_basis()
        # nilpotent part: transition maps between generalized kernels
        ntrans = []
        for c in range(o):
            W, W2 = W_bases[c], W_bases[(c + 1) % o]
            if W.ncols == 0 or W2.ncols == 0:
                ntrans.append(FMat.zeros(field, W2.ncols, W.ncols))
                continue
            if W.ncols == idxs[c].size and W2.ncols == idxs[(c + 1) % o].size:
                ntrans.append(trans[c])
                continue
            ntrans.append(W2.solve_in_basis(trans[c] @ W))
        dims = [W.ncols for W in W_bases]
        jmax = sum(dims)
        ranks = {}
        for c in range(o):
            ranks[(c, 0)] = dims[c]
            M = None
            for j in range(1, jmax + 2):
                step = ntrans[(c + j - 1) % o]
                M = step if M is None else step @ M
                r = M.rank()
                ranks[(c, j)] = r
                if r == 0:
                    break

        def R(c, j):
            return ranks.get((c % o, j), 0)

        base_char = UnramifiedChar(field.elem(t0))
        for c in range(o):
            for r in range(1, jmax + 1):
                mult = R(c, r - 1) - R(c - 1, r) - R(c, r) + R(c - 1, r + 1)
                if mult < 0:
                    raise RuntimeError("negative segment multiplicity")
                if mult:
                    out.append((Seg(base_char, r, c), mult))
        # bijective part: cycle lengths from the unipotent part of the
        # holonomy on the canonical slice
        if B0 is not None and B0.ncols:
            Hb = B0.solve_in_basis(H0 @ B0)
            jp = _jc_newton(Hb)
            T = jp.D.inverse() @ Hb
            M = T - FMat.identity(field, T.nrows)
            rs = {0: B0.ncols}
            Mp = None
            for s in range(1, B0.ncols + 2):
                Mp = M if Mp is None else Mp @ M
                rs[s] = Mp.rank()
                if rs[s] == 0:
                    break
            line = line_of(base_char, ctx)[0]
            for s in range(1, B0.ncols + 1):
                mult = rs.get(s - 1, 0) - 2 * rs.get(s, 0) + rs.get(s + 1, 0)
                if mult < 0:
                    raise RuntimeError("negative cycle multiplicity")
                if mult:
                    out.append((Cyc(line, s), mult))
    cls = normalize(out, ctx)
    if cls.dim() != n:
        raise RuntimeError("decomposition lost dimension; input not in the model")
    return cls


def semisimplify(m: MatrixDeligne, ctx) -> DeligneClass:
    """Jordan-Holder multiset of irreducible Deligne subquotients:
    characters from the generalized kernel of the operator (which forgets
    the nilpotent structure) and one C(Z) per holonomy eigen-line."""
    field = m.F.field
    n = m.F.nrows
    if n == 0:
        return zero_class(ctx)
    validate(m, ctx)
    ranges, G, _ = _adapted(m, ctx)
    lines = _lines_of_values(list(ranges), ctx, field)
    o = ctx.o_nu
    out = []
    for t0, slice_vals in lines:
        idxs = []
        for v in slice_vals:
            lo, hi = ranges.get(v, (0, 0))
            idxs.append(np.arange(lo, hi, dtype=np.intp))
        trans = [G.submatrix(idxs[(c + 1) % o], idxs[c]) for c in range(o)]
        base_char = UnramifiedChar(field.elem(t0))
        line = line_of(base_char, ctx)[0]
        for c in range(o):
            d = idxs[c].size
            if d == 0:
                continue
            H = FMat.identity(field, d)
            for s in range(o):
                H = trans[(c + s) % o] @ H
            Hd = H.power(d)
            wdim = d - Hd.rank()
            if wdim:
                out.append((Seg(base_char, 1, c), wdim))
            if c == 0 and d - wdim:
                out.append((Cyc(line, 1), d - wdim))
    cls = normalize(out, ctx)
    if cls.dim() != n:
        raise RuntimeError("semisimplification lost dimension")
    return cls


def rescale_witness(m: MatrixDeligne, lam, ctx) -> FMat:
    """For nilpotent U and lam != 0, an invertible P with PF = FP and
    P (lam U) = U P, built as lam^i on graded complements S_i."""
    field = m.F.field
    n = m.F.nrows
    if hasattr(lam, "i"):
        lam_idx = lam.i
    else:
        lam_idx = int(lam) % field.order
    if lam_idx == 0:
        raise ZeroElement("rescaling by zero")
    if not m.U.power(n).is_zero():
        raise NotNilpotent("rescale_witness needs a nilpotent operator")
    ranges, G, P = _adapted(m, ctx)
    blocks = [np.arange(lo, hi, dtype=np.intp) for lo, hi in
              sorted(ranges.values())]

    def graded_basis(X):
        """Split the columns of a graded subspace along the eigen blocks."""
        pieces = []
        for blk in blocks:
            proj = np.zeros_like(X.a)
            proj[blk, :] = X.a[blk, :]
            pieces.append(FMat(field, proj).column_space_basis())
        return pieces

    def graded_complement(A, B):
        """Graded complement of A inside B (A a graded subspace of B)."""
        outs = []
        for Ab, Bb in zip(graded_basis(A), graded_basis(B)):
            if Bb.ncols == 0:
                continue
            aug = FMat.hstack([Ab, Bb]) if Ab.ncols else Bb
            _, pivots = aug.rref()
            ext = [p - Ab.ncols for p in pivots if p >= Ab.ncols]
            if ext:
                outs.append(FMat(field, Bb.a[:, ext]))
        if not outs:
            return FMat.zeros(field, n, 0)
        return FMat.hstack(outs)

    # iterated kernels of U in the adapted basis
    kernels = [FMat.zeros(field, n, 0)]
    j = 0
    Gp = FMat.identity(field, n)
    while kernels[-1].ncols < n:
        Gp = Gp @ G
        kernels.append(Gp.kernel())
        j += 1
    r = j
    S = [None] * r
    S[r - 1] = graded_complement(kernels[r - 1], FMat.identity(field, n))
    for k in range(r - 2, -1, -1):
        NS = G @ S[k + 1]
        NS = NS.column_space_basis() if NS.ncols else NS
        span = FMat.hstack([NS, kernels[k]]) if NS.ncols else kernels[k]
        span = span.column_space_basis() if span.ncols else span
        C = graded_complement(span, kernels[k + 1])
        S[k] = FMat.hstack([NS, C]) if NS.ncols else C
    cols = []
    scalings = []
    for i, Si in enumerate(S):
        cols.append(Si)
        scalings.extend([field.pow_idx(lam_idx, i)] * Si.ncols)
    B = FMat.hstack(cols)
    Pm = B @ FMat.diag(field, scalings) @ B.inverse()
    return P @ Pm @ P.inverse()


# -- the tensor oracle ------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _embedding(ell, k_small, k_big):
    """Index tables for the embedding F_{ell^k_small} -> F_{ell^k_big}
    sending x to the first root (in index order) of the small modulus."""
    from .field import finite_field
    small = finite_field(ell, k_small)
    big = finite_field(ell, k_big)
    mod = [big.from_int_idx(c) for c in small.modulus]
    root = None
    for x in range(big.order):
        if _poly.peval(big, mod, x) == 0:
            root = x
            break
    table = [0] * small.order
    for i in range(small.order):
        acc, pw = 0, 1
        for c in small.digits(i):
            acc = big.add_idx(acc, big.mul_idx(big.from_int_idx(c), pw))
            pw = big.mul_idx(pw, root)
        table[i] = acc
    inverse = {v: i for i, v in enumerate(table)}
    return tuple(table), inverse


def _indec_spectrum(ind, ctx):
    """Distinct nonzero eigenvalues of the semisimple operator part of the
    realized indecomposable (empty for segments)."""
    if isinstance(ind, Seg):
        return ()
    return tuple(sorted({ctx.nu_value(-j).i for j in range(ind.line.order)}))


def _admissible_pair(field, conditions):
    """Deterministic sweep over increasing discrete logs for (lam, mu)
    outside the bad hyperplanes; None when the field is exhausted."""
    top = field.order - 1
    for s in range(2 * top - 1):
        for i in range(max(0, s - top + 1), min(s, top - 1) + 1):
            lam, mu = field.exp[i], field.exp[s - i]
            ok = True
            for SA, SB in conditions:
                vals = set()
                for a in SA:
                    for b in SB:
                        v = field.add_idx(field.mul_idx(lam, a),
                                          field.mul_idx(mu, b))
                        if v == 0 or v in vals:
                            ok = False
                            break
                        vals.add(v)
                    if not ok:
                        break
                if not ok:
                    break
            if ok:
                return lam, mu
    return None


def oracle_tensor_ss(a: DeligneClass, b: DeligneClass) -> DeligneClass:
    """Realize, scale operators by an admissible (lam, mu), tensor,
    decompose: the class tensor_ss must match.  Extends the field when no
    admissible pair exists in the context field."""
    ctx = a.ctx
    if a.is_zero() or b.is_zero():
        return zero_class(ctx)
    conditions = []
    for A, _ in a.parts:
        for B, _ in b.parts:
            SA, SB = _indec_spectrum(A, ctx), _indec_spectrum(B, ctx)
            if SA and SB:
                conditions.append((SA, SB))
    ma, mb = realize(a, ctx), realize(b, ctx)
    work, table, inverse = ctx, None, None
    for _ in range(4):
        if table is None:
            conds = conditions
        else:
            conds = [(tuple(table[x] for x in SA), tuple(table[x] for x in SB))
                     for SA, SB in conditions]
        pair = _admissible_pair(work.field, conds)
        if pair is not None:
            break
        nxt = make_ctx(ctx.ell, ctx.q_residue, 2 * work.k)
        table, inverse = _embedding(ctx.ell, ctx.k, nxt.k)
        work = nxt
    else:
        raise NeedsLargerField("no admissible scaling pair found")
    lam, mu = pair
    if table is not None:
        emb = np.array(table, dtype=np.int32)
        ma = MatrixDeligne(FMat(work.field, emb[ma.F.a]), FMat(work.field, emb[ma.U.a]))
        mb = MatrixDeligne(FMat(work.field, emb[mb.F.a]), FMat(work.field, emb[mb.U.a]))
    scaled = raw_tensor(MatrixDeligne(ma.F, ma.U.scale(lam)),
                        MatrixDeligne(mb.F, mb.U.scale(mu)))
    cls = decompose(scaled, work, check=False)
    if table is None:
        return cls
    out = []
    for ind, mult in cls.parts:
        if isinstance(ind, Seg):
            t = inverse[ind.irr.t.i]
            out.append((Seg(UnramifiedChar(ctx.field.elem(t)), ind.r, ind.a), mult))
        else:
            t = inverse[ind.line.base.t.i]
            out.append((cyc(UnramifiedChar(ctx.field.elem(t)), ind.r, ctx), mult))
    return normalize(out, ctx)
