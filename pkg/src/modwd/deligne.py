"""Equivalence classes of Frobenius-semisimple Deligne representations.

A class is a normalized multiset of indecomposables: segments
[0,r-1] (x) nu^a psi (nilpotent operator) and cycles [0,r-1] (x) C(Z_psi)
(bijective operator, which exists only because the twist orbit is finite).
Krull-Schmidt makes the multiset well defined, so all operations here are
multiset combinatorics plus the modular interval profile of a tensor of
two shift operators.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import ContainsCyc, MixedLines
from .field import FieldElem
from .weil import (Line, UnramifiedChar, dual_irr, fuse, irr_dim, irr_order,
                   line_of, line_product)


@dataclass(frozen=True)
class Seg:
    """[0, r-1] (x) nu^a psi with psi the canonical line representative."""

    irr: object
    r: int
    a: int

    def dim(self, ctx):
        return self.r * irr_dim(self.irr)

    def __repr__(self):
        return f"seg({self.irr!r}; r={self.r}; a={self.a})"


@dataclass(frozen=True)
class Cyc:
    """[0, r-1] (x) C(Z_psi); no intertwiner is stored since the class
    does not depend on it."""

    line: Line
    r: int

    def dim(self, ctx):
        return self.r * self.line.order * irr_dim(self.line.base)

    def __repr__(self):
        return f"cyc({self.line!r}; r={self.r})"


def seg(psi, r, a, ctx) -> Seg:
    """Build a segment in canonical form (canonical line rep, twist reduced)."""
    if r < 1:
        raise ValueError("segment length must be positive")
    base, shift = line_of(psi, ctx)
    o = irr_order(psi, ctx)
    return Seg(base.base, r, (a + shift) % o)


def cyc(line_or_irr, r, ctx) -> Cyc:
    if r < 1:
        raise ValueError("cycle length must be positive")
    if isinstance(line_or_irr, Line):
        line = line_of(line_or_irr.base, ctx)[0]
    else:
        line = line_of(line_or_irr, ctx)[0]
    return Cyc(line, r)


def _indec_key(ind):
    if isinstance(ind, Seg):
        base = ind.irr
        variant, r, a = 0, ind.r, ind.a
    else:
        base = ind.line.base
        variant, r, a = 1, ind.r, 0
    if isinstance(base, UnramifiedChar):
        lk = (0, base.t.field.dlog_idx(base.t.i))
    else:
        lk = (1, base.label)
    return (lk, variant, r, a)


class DeligneClass:
    """Normalized multiset of indecomposables, stored as sorted
    (indec, multiplicity) pairs."""

    __slots__ = ("ctx", "parts")

    def __init__(self, ctx, parts):
        self.ctx = ctx
        self.parts = parts

    def items(self):
        return self.parts

    def dim(self):
        return sum(ind.dim(self.ctx) * m for ind, m in self.parts)

    def is_zero(self):
        return not self.parts

    def is_nilpotent(self):
        return all(isinstance(ind, Seg) for ind, _ in self.parts)

    def scale(self, m):
        if m == 0:
            return DeligneClass(self.ctx, ())
        return DeligneClass(self.ctx, tuple((i, mult * m) for i, mult in self.parts))

    def __eq__(self, other):
        return isinstance(other, DeligneClass) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        if not self.parts:
            return "{ }"
        bits = []
        for ind, m in self.parts:
            bits.append(f"{ind!r}" if m == 1 else f"{ind!r}*{m}")
        return "{ " + ", ".join(bits) + " }"


def normalize(raw, ctx) -> DeligneClass:
    """Canonical sorted multiset: twists reduced, lines canonicalized."""
    counts = {}
    for entry in raw:
        if isinstance(entry, tuple):
            ind, m = entry
        else:
            ind, m = entry, 1
        if m < 0:
            raise ValueError("negative multiplicity")
        if m == 0:
            continue
        if isinstance(ind, Seg):
            ind = seg(ind.irr, ind.r, ind.a, ctx)
        else:
            ind = cyc(ind.line, ind.r, ctx)
        counts[ind] = counts.get(ind, 0) + m
    parts = tuple(sorted(counts.items(), key=lambda p: _indec_key(p[0])))
    return DeligneClass(ctx, parts)


def zero_class(ctx) -> DeligneClass:
    return DeligneClass(ctx, ())


def dsum(a: DeligneClass, b: DeligneClass) -> DeligneClass:
    return normalize(list(a.parts) + list(b.parts), a.ctx)


def dual_class(a: DeligneClass) -> DeligneClass:
    """Seg(psi,r,a) -> Seg(psi*, r, -a-r+1); Cyc(L,r) -> Cyc(L*, r).

    Both rules are validated against the matrix-model oracle in the tests.
    """
    ctx = a.ctx
    out = []
    for ind, m in a.parts:
        if isinstance(ind, Seg):
            o = irr_order(ind.irr, ctx)
            out.append((seg(dual_irr(ind.irr), ind.r, (-ind.a - ind.r + 1) % o, ctx), m))
        else:
            out.append((cyc(ind.line.dual(ctx), ind.r, ctx), m))
    return normalize(out, ctx)


def twist_class(a: DeligneClass, nu_power=0, chi: UnramifiedChar = None) -> DeligneClass:
    """Twist by nu^k and/or an unramified character.  Cycles absorb nu
    powers entirely and change line under a general character."""
    ctx = a.ctx
    out = []
    for ind, m in a.parts:
        if isinstance(ind, Seg):
            psi, extra = ind.irr, 0
            if chi is not None:
                if isinstance(psi, UnramifiedChar):
                    psi = UnramifiedChar(psi.t * chi.t)
                else:
                    (extra, psi), = fuse(chi, psi, ctx)
            out.append((seg(psi, ind.r, ind.a + nu_power + extra, ctx), m))
        else:
            line = ind.line
            if chi is not None:
                line = line_product(line, line_of(chi, ctx)[0], ctx)
            out.append((cyc(line, ind.r, ctx), m))
    return normalize(out, ctx)


# -- modular interval profile of [0,n-1] (x) [0,m-1] -------------------------

def _rank_mod(rows, ell):
    """Rank of a small integer matrix mod ell, by plain Gaussian elimination."""
    rows = [list(r) for r in rows if any(x % ell for x in r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] % ell:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col] % ell, -1, ell)
        rows[rank] = [(x * inv) % ell for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % ell:
                f = rows[i][col] % ell
                rows[i] = [(x - f * y) % ell for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


@functools.lru_cache(maxsize=None)
def interval_profile(n, m, ell):
    """Multiset of intervals [c,d] in the decomposition over F_ell of the
    graded nilpotent N(n) (x) Id + Id (x) N(m), by rank persistence.

    Returns a sorted tuple of ((c, d), multiplicity) pairs; the ranks are
    exact ranks of iterated maps between the graded pieces.
    """
    top = n + m - 2
    layers = []
    for k in range(top + 1):
        layers.append([(i, k - i) for i in range(max(0, k - m + 1), min(n - 1, k) + 1)])
    steps = []
    for k in range(top):
        src, dst = layers[k], layers[k + 1]
        pos = {v: idx for idx, v in enumerate(dst)}
        mat = [[0] * len(src) for _ in dst]
        for col, (i, j) in enumerate(src):
            if i + 1 < n:
                mat[pos[(i + 1, j)]][col] += 1
            if j + 1 < m:
                mat[pos[(i, j + 1)]][col] += 1
        steps.append(mat)

    def _compose(c, d):
        # matrix of N^(d-c) restricted to layer c
        if c < 0 or d > top:
            return None
        mat = [[1 if i == j else 0 for j in range(len(layers[c]))]
               for i in range(len(layers[c]))]
        for k in range(c, d):
            step = steps[k]
            mat = [[sum(step[i][t] * mat[t][j] for t in range(len(mat)))
                    for j in range(len(mat[0]))] for i in range(len(step))]
        return mat

    def rank(c, d):
        # rank of the composite map layer c -> layer d; full dim when c == d
        if c < 0 or d > top or c > d:
            return 0
        if c == d:
            return len(layers[c])
        return _rank_mod(_compose(c, d), ell)

    out = []
    for c in range(top + 1):
        for d in range(c, top + 1):
            mult = rank(c, d) - rank(c - 1, d) - rank(c, d + 1) + rank(c - 1, d + 1)
            if mult:
                out.append(((c, d), mult))
    return tuple(sorted(out))


def seg_tensor_profile(n, m, ctx) -> tuple:
    """Interval multiset of [0,n-1] (x) [0,m-1] over the context's residue
    characteristic."""
    if n < 1 or m < 1:
        raise ValueError("profile needs positive lengths")
    return interval_profile(n, m, ctx.ell)


# -- semisimple tensor product ------------------------------------------------

def _orbit_cycle_counts(entries, twists, ctx):
    """Distribute nu^t * entry over full twist orbits.

    entries: fusion output ((k, irr), ...); twists: iterable of ambient
    twist offsets.  Returns {Line: number of full orbits}; the multiset is
    always nu-stable because the ambient twists run over a full orbit.
    """
    per_line = {}
    for t in twists:
        for k, theta in entries:
            line, shift = line_of(theta, ctx)
            o = line.order
            key = line
            counts = per_line.setdefault(key, [0] * o)
            counts[(t + k + shift) % o] += 1
    out = {}
    for line, counts in per_line.items():
        mu = counts[0]
        if any(c != mu for c in counts):
            # a semisimplified tensor against a full orbit is twist-stable;
            # a declared fusion entry violating this cannot be correct
            raise ValueError(
                f"fusion output is not twist-stable on {line!r}")
        out[line] = mu
    return out


@functools.lru_cache(maxsize=None)
def _tensor_indec_cached(A, B, ctx):
    return tuple(_tensor_indec(A, B, ctx, None))


def _tensor_indec(A, B, ctx, table):
    """Tensor of two indecomposables as a list of (indec, mult)."""
    profile = interval_profile(A.r, B.r, ctx.ell)
    out = []
    a_seg, b_seg = isinstance(A, Seg), isinstance(B, Seg)
    if a_seg and b_seg:
        entries = fuse(A.irr, B.irr, ctx, table)
        for (c, d), pm in profile:
            for k, theta in entries:
                out.append((seg(theta, d - c + 1, A.a + B.a + c + k, ctx), pm))
        return out
    if a_seg or b_seg:
        S, C = (A, B) if a_seg else (B, A)
        entries = fuse(S.irr, C.line.base, ctx, table)
        orbits = _orbit_cycle_counts(entries, [S.a + j for j in range(C.line.order)], ctx)
    else:
        entries = fuse(A.line.base, B.line.base, ctx, table)
        twists = [i + j for i in range(A.line.order) for j in range(B.line.order)]
        orbits = _orbit_cycle_counts(entries, twists, ctx)
    for (c, d), pm in profile:
        for line, mu in sorted(orbits.items(), key=lambda p: p[0].key()):
            out.append((cyc(line, d - c + 1, ctx), pm * mu))
    return out


def tensor_ss(a: DeligneClass, b: DeligneClass, table=None) -> DeligneClass:
    """Semisimple tensor product, bilinear over direct sums.

    On indecomposables it is the interval profile tensored with the fusion
    of the irreducible parts; any pair involving a cycle lands entirely in
    cycles (the operator stays bijective at generic scalings).
    """
    ctx = a.ctx
    out = []
    for A, ma in a.parts:
        for B, mb in b.parts:
            if table is None:
                pieces = _tensor_indec_cached(A, B, ctx)
            else:
                pieces = _tensor_indec(A, B, ctx, table)
            for ind, m in pieces:
                out.append((ind, m * ma * mb))
    return normalize(out, ctx)


# -- acyclic/cyclic split and the CV map --------------------------------------

def split_cyclic(a: DeligneClass):
    """Split a single-line nilpotent class into (acyclic, cyclic) parts:
    per length r, the cyclic part receives b_r = min_k mult(r, k) full
    twist orbits."""
    ctx = a.ctx
    if not a.is_nilpotent():
        raise ContainsCyc("split_cyclic expects a nilpotent class")
    if a.is_zero():
        return zero_class(ctx), zero_class(ctx)
    lines = {_indec_key(ind)[0] for ind, _ in a.parts}
    if len(lines) > 1:
        raise MixedLines("split_cyclic expects a single line")
    base = a.parts[0][0].irr
    o = irr_order(base, ctx)
    by_r = {}
    for ind, m in a.parts:
        by_r.setdefault(ind.r, {})[ind.a] = m
    acyc, cycl = [], []
    for r, twists in sorted(by_r.items()):
        b = min(twists.get(k, 0) for k in range(o))
        for k in range(o):
            m = twists.get(k, 0)
            if m - b:
                acyc.append((Seg(base, r, k), m - b))
            if b:
                cycl.append((Seg(base, r, k), b))
    return normalize(acyc, ctx), normalize(cycl, ctx)


def cv_map(a: DeligneClass) -> DeligneClass:
    """Replace each full cyclic orbit block of length r by [0,r-1](x)C(Z);
    the acyclic part is kept verbatim.  Injective on nilpotent classes."""
    ctx = a.ctx
    if not a.is_nilpotent():
        raise ContainsCyc("cv_map expects a nilpotent class (a V-parameter)")
    by_line = {}
    for ind, m in a.parts:
        by_line.setdefault(_indec_key(ind)[0], []).append((ind, m))
    out = []
    for _, parts in sorted(by_line.items()):
        piece = normalize(parts, ctx)
        acyc, cycl = split_cyclic(piece)
        out.extend(acyc.parts)
        by_r = {}
        for ind, m in cycl.parts:
            by_r[ind.r] = m  # uniform over twists by construction
        line = line_of(parts[0][0].irr, ctx)[0]
        for r, b in sorted(by_r.items()):
            out.append((Cyc(line, r), b))
    return normalize(out, ctx)


# -- determinant --------------------------------------------------------------

@dataclass(frozen=True)
class Character:
    """Formal determinant value: concrete unramified part times a formal
    product of finite-order labels (for abstract ramified constituents)."""

    unram_value: FieldElem
    finite: tuple = ()

    def __mul__(self, other):
        d = dict(self.finite)
        for lbl, e in other.finite:
            d[lbl] = d.get(lbl, 0) + e
        fin = tuple(sorted((l, e) for l, e in d.items() if e))
        return Character(self.unram_value * other.unram_value, fin)

    def is_trivial(self):
        return self.unram_value == 1 and not self.finite

    def __repr__(self):
        parts = [repr(self.unram_value)]
        parts += [f"{l}^{e}" for l, e in self.finite]
        return "*".join(parts)


def trivial_character(ctx) -> Character:
    return Character(ctx.field.one)


def det_class(a: DeligneClass) -> Character:
    """Product of the determinant contributions of all constituents; fully
    concrete on unramified lines."""
    ctx = a.ctx
    acc = trivial_character(ctx)
    for ind, m in a.parts:
        if isinstance(ind, Seg):
            base, r, tw = ind.irr, ind.r, ind.a
            reps = 1
        else:
            base, r, tw = ind.line.base, ind.r, 0
            reps = ind.line.order
        d = irr_dim(base)
        # sum of all nu-exponents over the constituents of the indecomposable
        if isinstance(ind, Seg):
            nu_exp = d * (r * tw + r * (r - 1) // 2)
        else:
            o = ind.line.order
            nu_exp = d * (r * o * (o - 1) // 2 + o * r * (r - 1) // 2)
        if isinstance(base, UnramifiedChar):
            val = base.t ** (r * reps) * ctx.nu_value(nu_exp)
            contrib = Character(val)
        else:
            lbl = base.det_hint or f"det({base.label})"
            contrib = Character(ctx.nu_value(nu_exp), ((lbl, r * reps),))
        for _ in range(m):
            acc = acc * contrib
    return acc
