"""Exact arithmetic in F_{ell^k} and the ambient modular context.

A FiniteField is F_ell[x]/(m) for the lexicographically least monic
irreducible m of degree k; elements are encoded as integer indices
(base-ell digit strings), with exp/log tables for multiplication.  The
FieldCtx bundles the image of the residual cardinality q, the
multiplicative order o(nu) of that image, and a fixed square root of q.

Everything here is deterministic: rebuilding the same (ell, q, k) gives
bit-identical tables, moduli and canonical choices.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from math import gcd

from .errors import NonPrime, QDivisibleByEll, ZeroElement

_ADD_TABLE_MAX_ORDER = 1500


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _factor(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- prime-field polynomial helpers used only for the modulus search --------

def _ppmul(f, g, p):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _ppmod(f, m, p):
    f = list(f)
    inv = pow(m[-1], p - 2, p)
    while len(f) >= len(m):
        if f[-1]:
            s = f[-1] * inv % p
            d = len(f) - len(m)
            for i, c in enumerate(m):
                f[d + i] = (f[d + i] - s * c) % p
        f.pop()
    while f and f[-1] == 0:
        f.pop()
    return f


def _ppgcd(f, g, p):
    while g:
        f, g = g, _ppmod(f, g, p)
    return f


def _pppow_x(q, m, p):
    """x^q mod m over F_p."""
    r = [0, 1]
    r = _ppmod(r, m, p) if len(m) <= 2 else r
    acc = [1]
    base = list(r)
    e = q
    while e:
        if e & 1:
            acc = _ppmod(_ppmul(acc, base, p), m, p)
        base = _ppmod(_ppmul(base, base, p), m, p)
        e >>= 1
    return acc


def _is_irreducible(m, p):
    k = len(m) - 1
    if k == 1:
        return True
    # Rabin: x^(p^k) = x mod m, and gcd(x^(p^(k/r)) - x, m) = 1 for prime r | k
    xq = _pppow_x(p ** k, m, p)
    lhs = list(xq)
    if len(lhs) < 2:
        lhs += [0] * (2 - len(lhs))
    lhs[1] = (lhs[1] - 1) % p
    while lhs and lhs[-1] == 0:
        lhs.pop()
    if lhs:
        return False
    for r in _factor(k):
        xe = _pppow_x(p ** (k // r), m, p)
        diff = list(xe)
        if len(diff) < 2:
            diff += [0] * (2 - len(diff))
        diff[1] = (diff[1] - 1) % p
        while diff and diff[-1] == 0:
            diff.pop()
        if not diff:
            return False
        if len(_ppgcd(list(m), diff, p)) > 1:
            return False
    return True


def _least_irreducible(p, k):
    """Lexicographically least monic irreducible of degree k over F_p.

    Candidates are ordered by the integer c_0 + c_1 p + ... encoding the
    non-leading coefficients.
    """
    for enc in range(p ** k):
        coeffs = []
        e = enc
        for _ in range(k):
            coeffs.append(e % p)
            e //= p
        m = coeffs + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class FiniteField:
    """The field F_{ell^k}, with elements indexed by 0 .. ell^k - 1."""

    __slots__ = ("ell", "k", "order", "modulus", "exp", "log", "gen_idx",
                 "_add", "_neg", "_np_add", "_np_mul", "_np_neg", "_inv")

    def __init__(self, ell, k, modulus=None):
        if not _is_prime(ell):
            raise NonPrime(f"{ell} is not prime")
        if k < 1:
            raise ValueError("extension degree must be positive")
        self.ell = ell
        self.k = k
        self.order = ell ** k
        self.modulus = tuple(modulus) if modulus else _least_irreducible(ell, k)
        self._build_tables()
        self._np_add = None
        self._np_mul = None
        self._np_neg = None

    # -- index <-> digits ---------------------------------------------------

    def digits(self, i):
        out = []
        for _ in range(self.k):
            out.append(i % self.ell)
            i //= self.ell
        return out

    def _enc(self, digits):
        out = 0
        for c in reversed(digits[:self.k]):
            out = out * self.ell + (c % self.ell)
        return out

    def _raw_mul(self, i, j):
        a, b = self.digits(i), self.digits(j)
        prod = [0] * (2 * self.k - 1)
        for x, ca in enumerate(a):
            if ca:
                for y, cb in enumerate(b):
                    prod[x + y] = (prod[x + y] + ca * cb) % self.ell
        m = self.modulus
        for d in range(len(prod) - 1, self.k - 1, -1):
            c = prod[d]
            if c:
                for t in range(self.k + 1):
                    prod[d - self.k + t] = (prod[d - self.k + t] - c * m[t]) % self.ell
        return self._enc(prod)

    def _build_tables(self):
        Q = self.order
        # least primitive element by index order
        primes = _factor(Q - 1)
        g = None
        for cand in range(1, Q):
            if Q - 1 == 1:
                g = cand
                break
            ok = True
            for r in primes:
                if self._pow_raw(cand, (Q - 1) // r) == 1:
                    ok = False
                    break
            if ok:
                g = cand
                break
        self.gen_idx = g
        exp = [1] * (Q - 1)
        for e in range(1, Q - 1):
            exp[e] = self._raw_mul(exp[e - 1], g)
        log = [-1] * Q
        for e, v in enumerate(exp):
            log[v] = e
        self.exp = exp
        self.log = log
        if Q <= _ADD_TABLE_MAX_ORDER:
            add = []
            for i in range(Q):
                di = self.digits(i)
                row = [0] * Q
                for j in range(Q):
                    dj = self.digits(j)
                    row[j] = self._enc([(x + y) % self.ell for x, y in zip(di, dj)])
                add.append(row)
            self._add = add
        else:
            self._add = None
        self._inv = [0] * Q
        for i in range(1, Q):
            self._inv[i] = exp[(Q - 1 - log[i]) % (Q - 1)]
        self._neg = [self._enc([(-x) % self.ell for x in self.digits(i)])
                     for i in range(Q)]

    def _pow_raw(self, i, e):
        acc, base = 1, i
        while e:
            if e & 1:
                acc = self._raw_mul(acc, base)
            base = self._raw_mul(base, base)
            e >>= 1
        return acc

    # -- index arithmetic ----------------------------------------------------

    def add_idx(self, i, j):
        if self._add is not None:
            return self._add[i][j]
        di, dj = self.digits(i), self.digits(j)
        return self._enc([(x + y) % self.ell for x, y in zip(di, dj)])

    def neg_idx(self, i):
        return self._neg[i]

    def sub_idx(self, i, j):
        if self._add is not None:
            return self._add[i][self._neg[j]]
        return self.add_idx(i, self._neg[j])

    def mul_idx(self, i, j):
        if i == 0 or j == 0:
            return 0
        return self.exp[(self.log[i] + self.log[j]) % (self.order - 1)]

    def inv_idx(self, i):
        if i == 0:
            raise ZeroElement("zero is not invertible")
        return self._inv[i]

    def pow_idx(self, i, e):
        if i == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroElement("zero is not invertible")
            return 0
        return self.exp[(self.log[i] * e) % (self.order - 1)]

    def pth_root_idx(self, i):
        # Frobenius is x -> x^ell; its inverse is x -> x^(ell^(k-1))
        return self.pow_idx(i, self.ell ** (self.k - 1))

    def from_int_idx(self, n):
        return n % self.ell

    def dlog_idx(self, i):
        if i == 0:
            raise ZeroElement("zero has no discrete log")
        return self.log[i]

    def sqrt_idx(self, i):
        """Square roots of element i, sorted by discrete log (may be empty)."""
        if i == 0:
            return [0]
        Q = self.order
        e = self.log[i]
        if self.ell == 2:
            return [self.exp[(e * pow(2, -1, Q - 1)) % (Q - 1)]]
        if e % 2:
            return []
        r1, r2 = e // 2, (e // 2 + (Q - 1) // 2) % (Q - 1)
        return [self.exp[x] for x in sorted((r1, r2))]

    # -- numpy tables (built on first use) ------------------------------------

    @property
    def np_add(self):
        if self._np_add is None:
            import numpy as np
            Q = self.order
            if self._add is not None:
                self._np_add = np.array(self._add, dtype=np.int32)
            else:
                idx = np.arange(Q, dtype=np.int64)
                digs = []
                e = idx.copy()
                for _ in range(self.k):
                    digs.append(e % self.ell)
                    e //= self.ell
                tab = np.zeros((Q, Q), dtype=np.int64)
                mult = 1
                for d in digs:
                    tab += ((d[:, None] + d[None, :]) % self.ell) * mult
                    mult *= self.ell
                self._np_add = tab.astype(np.int32)
        return self._np_add

    @property
    def np_mul(self):
        if self._np_mul is None:
            import numpy as np
            Q = self.order
            lg = np.array(self.log, dtype=np.int64)
            ex = np.array(self.exp, dtype=np.int64)
            tab = np.zeros((Q, Q), dtype=np.int64)
            nz = np.arange(1, Q)
            tab[1:, 1:] = ex[(lg[nz][:, None] + lg[nz][None, :]) % (Q - 1)]
            self._np_mul = tab.astype(np.int32)
        return self._np_mul

    @property
    def np_neg(self):
        if self._np_neg is None:
            import numpy as np
            self._np_neg = np.array(self._neg, dtype=np.int32)
        return self._np_neg

    # -- element construction --------------------------------------------------

    def elem(self, i):
        return FieldElem(self, i % self.order)

    @property
    def zero(self):
        return FieldElem(self, 0)

    @property
    def one(self):
        return FieldElem(self, 1)

    def from_int(self, n):
        return FieldElem(self, n % self.ell)

    def from_coeffs(self, coeffs):
        return FieldElem(self, self._enc([c % self.ell for c in coeffs]))

    def elements(self):
        for i in range(self.order):
            yield FieldElem(self, i)

    def __eq__(self, other):
        return (isinstance(other, FiniteField)
                and self.ell == other.ell and self.k == other.k
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.ell, self.k, self.modulus))

    def __repr__(self):
        return f"F({self.ell}^{self.k})"


@functools.lru_cache(maxsize=None)
def finite_field(ell, k):
    return FiniteField(ell, k)


class FieldElem:
    """An element of a FiniteField; immutable, hashable, printable."""

    __slots__ = ("field", "i")

    def __init__(self, field, i):
        self.field = field
        self.i = i

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("elements from different fields")
            return other.i
        if isinstance(other, int):
            return other % self.field.ell
        return NotImplemented

    def __add__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.add_idx(self.i, j))

    __radd__ = __add__

    def __sub__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.sub_idx(self.i, j))

    def __rsub__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.sub_idx(j, self.i))

    def __mul__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.mul_idx(self.i, j))

    __rmul__ = __mul__

    def __truediv__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        if j == 0:
            raise ZeroElement("division by zero element")
        return FieldElem(self.field, self.field.mul_idx(self.i, self.field.inv_idx(j)))

    def __pow__(self, e):
        return FieldElem(self.field, self.field.pow_idx(self.i, e))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg_idx(self.i))

    def inverse(self):
        return FieldElem(self.field, self.field.inv_idx(self.i))

    def is_zero(self):
        return self.i == 0

    def dlog(self):
        return self.field.dlog_idx(self.i)

    @property
    def coeffs(self):
        return tuple(self.field.digits(self.i))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.i == other.i
        if isinstance(other, int):
            return self.i == other % self.field.ell
        return NotImplemented

    def __hash__(self):
        return hash((self.field.ell, self.field.k, self.i))

    def __repr__(self):
        cs = ",".join(str(c) for c in self.coeffs)
        return f"[{cs}]@F({self.field.ell}^{self.field.k})"


def mult_order(x: FieldElem) -> int:
    """Least n >= 1 with x^n = 1."""
    if x.i == 0:
        raise ZeroElement("zero has no multiplicative order")
    Q = x.field.order
    return (Q - 1) // gcd(x.field.dlog_idx(x.i), Q - 1)


@dataclass(frozen=True)
class FieldCtx:
    """Ambient modular context: F_{ell^k}, q mod ell, o(nu), sqrt(q)."""

    field: FiniteField
    q_residue: int
    q_img: FieldElem
    o_nu: int
    sqrt_q: FieldElem
    q_inv: FieldElem = dc_field(compare=False, default=None)

    @property
    def ell(self):
        return self.field.ell

    @property
    def k(self):
        return self.field.k

    def nu_value(self, j):
        """Value of nu^j at Frobenius: q^(-j)."""
        return self.q_img ** (-j)

    def header(self):
        return f"ctx ell={self.ell} q={self.q_residue} k={self.k}"

    def __repr__(self):
        return f"FieldCtx({self.header()}, o_nu={self.o_nu})"


def make_ctx(ell, q_residue, ext_deg=1) -> FieldCtx:
    """Build the modular context for (ell, q), extending F_{ell^k} until a
    square root of q exists (one doubling always suffices)."""
    if not _is_prime(ell):
        raise NonPrime(f"{ell} is not prime")
    if q_residue % ell == 0:
        raise QDivisibleByEll(f"q={q_residue} is divisible by ell={ell}")
    if ext_deg < 1:
        raise ValueError("ext_deg must be positive")
    k = ext_deg
    while True:
        F = finite_field(ell, k)
        q_img = F.from_int(q_residue)
        roots = F.sqrt_idx(q_img.i)
        if roots:
            sqrt_q = F.elem(roots[0])
            break
        k *= 2
    o_nu = mult_order(q_img)
    return FieldCtx(field=F, q_residue=q_residue, q_img=q_img, o_nu=o_nu,
                    sqrt_q=sqrt_q, q_inv=q_img.inverse())
