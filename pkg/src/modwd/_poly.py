"""Coefficient-list polynomial arithmetic over a FiniteField.

Polynomials are little-endian lists of element indices with no trailing
zeros ([] is the zero polynomial).  These helpers back minimal/characteristic
polynomial work in the matrix model and gcd reduction in the Laurent layer.
"""


def pnorm(f):
    n = len(f)
    while n and f[n - 1] == 0:
        n -= 1
    return f[:n]


def pdeg(f):
    return len(f) - 1


def padd(F, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add_idx(out[i], c)
    return pnorm(out)


def pneg(F, f):
    return [F.neg_idx(c) for c in f]


def psub(F, f, g):
    return padd(F, f, pneg(F, g))


def pscale(F, f, s):
    if s == 0:
        return []
    return [F.mul_idx(c, s) for c in f]


def pmul(F, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = F.add_idx(out[i + j], F.mul_idx(a, b))
    return pnorm(out)


def pdivmod(F, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    inv_lead = F.inv_idx(g[-1])
    while len(f) >= len(g) and pnorm(f):
        f = pnorm(f)
        if len(f) < len(g):
            break
        s = F.mul_idx(f[-1], inv_lead)
        d = len(f) - len(g)
        q[d] = s
        for i, c in enumerate(g):
            f[d + i] = F.sub_idx(f[d + i], F.mul_idx(s, c))
        f = f[:-1]
    return pnorm(q), pnorm(f)


def pmod(F, f, g):
    return pdivmod(F, f, g)[1]


def pmonic(F, f):
    if not f:
        return f
    return pscale(F, f, F.inv_idx(f[-1]))


def pgcd(F, f, g):
    while g:
        f, g = g, pmod(F, f, g)
    return pmonic(F, f)


def pderiv(F, f):
    out = []
    for i in range(1, len(f)):
        c = f[i]
        out.append(F.mul_idx(c, F.from_int_idx(i)))
    return pnorm(out)


def peval(F, f, x):
    acc = 0
    for c in reversed(f):
        acc = F.add_idx(F.mul_idx(acc, x), c)
    return acc


def ppow_mod(F, f, e, m):
    r = [1]
    f = pmod(F, f, m)
    while e:
        if e & 1:
            r = pmod(F, pmul(F, r, f), m)
        f = pmod(F, pmul(F, f, f), m)
        e >>= 1
    return r


def pxgcd(F, f, g):
    """Extended gcd; returns (d, u, v) with u*f + v*g = d, d monic."""
    r0, r1 = list(f), list(g)
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        q, r = pdivmod(F, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, psub(F, u0, pmul(F, q, u1))
        v0, v1 = v1, psub(F, v0, pmul(F, q, v1))
    if r0:
        s = F.inv_idx(r0[-1])
        r0, u0, v0 = pscale(F, r0, s), pscale(F, u0, s), pscale(F, v0, s)
    return r0, u0, v0


def pinv_mod(F, f, m):
    d, u, _ = pxgcd(F, f, m)
    if d != [1]:
        raise ZeroDivisionError("element not invertible in quotient ring")
    return pmod(F, u, m)


def pcompose_mod(F, f, g, m):
    """f(g) mod m, by Horner."""
    acc = []
    for c in reversed(f):
        acc = pmod(F, pmul(F, acc, g), m)
        if c:
            acc = padd(F, acc, [c])
    return acc


def pth_root(F, f):
    """Inverse Frobenius on coefficients of f(x) = g(x^p); returns g."""
    p = F.ell
    out = []
    for i in range(0, len(f), p):
        out.append(F.pth_root_idx(f[i]))
    return pnorm(out)


def radical(F, f):
    """Product of the distinct monic irreducible factors of f (char-p safe)."""
    f = pmonic(F, f)
    if pdeg(f) <= 0:
        return [1]
    fp = pderiv(F, f)
    if not fp:
        return radical(F, pth_root(F, f))
    g = pgcd(F, f, fp)
    w = pdivmod(F, f, g)[0]
    # w carries the factors with multiplicity prime to p; the rest sit in g
    r = radical(F, g) if pdeg(g) >= 1 else [1]
    d = pgcd(F, r, w)
    while pdeg(d) >= 1:
        r = pdivmod(F, r, d)[0]
        d = pgcd(F, r, w)
    return pmonic(F, pmul(F, w, r))


def roots_with_multiplicity(F, f):
    """All roots of f in F with multiplicities, by deflation.

    Returns (roots, remainder_degree): remainder_degree > 0 signals
    irreducible factors of degree >= 2 (roots outside the field).
    """
    f = pmonic(F, f)
    out = []
    for x in range(F.order):
        if pdeg(f) <= 0:
            break
        if peval(F, f, x) == 0:
            mult = 0
            lin = [F.neg_idx(x), 1]
            while True:
                q, r = pdivmod(F, f, lin)
                if r:
                    break
                f = q
                mult += 1
            out.append((x, mult))
    return out, pdeg(f)
