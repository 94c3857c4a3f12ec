"""Laurent polynomials, reduced rational fractions, and the unit group
where gamma and epsilon live.

A FactorExpr is unit * num/den with the unit part c * X^m * (product of
opaque epsilon tokens) and num, den coprime ordinary polynomials with
constant term 1.  This normal form is unique, so equality of local
constants is literal structural equality.
"""

from __future__ import annotations

from . import _poly
from .errors import DivisionByZero
from .field import FieldElem


class LaurentPoly:
    """Finitely supported map exponent -> nonzero field element."""

    __slots__ = ("field", "c")

    def __init__(self, field, coeffs=None):
        self.field = field
        self.c = {e: v for e, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def one(cls, field):
        return cls(field, {0: 1})

    @classmethod
    def const(cls, elem):
        return cls(elem.field, {0: elem.i})

    @classmethod
    def monomial(cls, elem, n):
        return cls(elem.field, {n: elem.i})

    @classmethod
    def from_coeff_list(cls, field, coeffs, shift=0):
        return cls(field, {i + shift: c for i, c in enumerate(coeffs)})

    def is_zero(self):
        return not self.c

    def min_exp(self):
        return min(self.c) if self.c else 0

    def coeff(self, e):
        return FieldElem(self.field, self.c.get(e, 0))

    def to_coeff_list(self):
        """Write self as X^shift * p with p(0) != 0; returns (shift, p)."""
        if not self.c:
            return 0, []
        lo, hi = min(self.c), max(self.c)
        return lo, [self.c.get(e, 0) for e in range(lo, hi + 1)]

    def __add__(self, other):
        F = self.field
        out = dict(self.c)
        for e, v in other.c.items():
            s = F.add_idx(out.get(e, 0), v)
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return LaurentPoly(F, out)

    def __neg__(self):
        F = self.field
        return LaurentPoly(F, {e: F.neg_idx(v) for e, v in self.c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        out = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                s = F.add_idx(out.get(e, 0), F.mul_idx(v1, v2))
                if s:
                    out[e] = s
                elif e in out:
                    del out[e]
        return LaurentPoly(F, out)

    def scale(self, s):
        if isinstance(s, FieldElem):
            s = s.i
        F = self.field
        return LaurentPoly(F, {e: F.mul_idx(v, s) for e, v in self.c.items()})

    def shift(self, n):
        return LaurentPoly(self.field, {e + n: v for e, v in self.c.items()})

    def subst_qinv(self, q_img):
        """The ring map X -> q^(-1) X^(-1)."""
        F = self.field
        out = {}
        for e, v in self.c.items():
            out[-e] = F.mul_idx(v, F.pow_idx(q_img.i, -e))
        return LaurentPoly(F, out)

    def __eq__(self, other):
        return (isinstance(other, LaurentPoly) and self.field == other.field
                and self.c == other.c)

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.c.items()))))

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            v = FieldElem(self.field, self.c[e])
            if e == 0:
                parts.append(f"{v!r}")
            elif e == 1:
                parts.append(f"{v!r}*X")
            else:
                parts.append(f"{v!r}*X^{e}")
        return " + ".join(parts)


def one_minus_ax(a: FieldElem) -> LaurentPoly:
    """The Euler-factor building block 1 - aX."""
    F = a.field
    return LaurentPoly(F, {0: 1, 1: F.neg_idx(a.i)})


class RationalFraction:
    """num/den in reduced form: gcd of polynomial parts 1, den an ordinary
    polynomial with constant term 1 (X-powers pushed into num)."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num: LaurentPoly, den: LaurentPoly):
        F = num.field
        if den.is_zero():
            raise DivisionByZero("rational fraction with zero denominator")
        if num.is_zero():
            return cls(F, LaurentPoly.zero(F), LaurentPoly.one(F))
        a, n = num.to_coeff_list()
        b, d = den.to_coeff_list()
        if len(n) > 1 and len(d) > 1:
            g = _poly.pgcd(F, n, d)
            if _poly.pdeg(g) >= 1:
                n = _poly.pdivmod(F, n, g)[0]
                d = _poly.pdivmod(F, d, g)[0]
        s = F.inv_idx(d[0])
        n = _poly.pscale(F, n, s)
        d = _poly.pscale(F, d, s)
        return cls(F,
                   LaurentPoly.from_coeff_list(F, n, shift=a - b),
                   LaurentPoly.from_coeff_list(F, d))

    @classmethod
    def one(cls, field):
        return cls(field, LaurentPoly.one(field), LaurentPoly.one(field))

    @classmethod
    def from_poly(cls, p: LaurentPoly):
        return cls.make(p, LaurentPoly.one(p.field))

    def is_one(self):
        return self.num == LaurentPoly.one(self.field) and \
            self.den == LaurentPoly.one(self.field)

    def is_zero(self):
        return self.num.is_zero()

    def __mul__(self, other):
        return RationalFraction.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.num.is_zero():
            raise DivisionByZero("division by zero fraction")
        return RationalFraction.make(self.num * other.den, self.den * other.num)

    def inverse(self):
        return RationalFraction.one(self.field) / self

    def subst_qinv(self, q_img):
        return RationalFraction.make(self.num.subst_qinv(q_img),
                                     self.den.subst_qinv(q_img))

    def __eq__(self, other):
        return (isinstance(other, RationalFraction)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"


class UnitExpr:
    """c * X^m * prod(token^e): an element of F^x x X^Z x (free abelian
    group on epsilon tokens)."""

    __slots__ = ("field", "scalar", "x_power", "tokens")

    def __init__(self, field, scalar=1, x_power=0, tokens=()):
        if isinstance(scalar, FieldElem):
            scalar = scalar.i
        if scalar == 0:
            raise DivisionByZero("unit with zero scalar")
        self.field = field
        self.scalar = scalar
        self.x_power = x_power
        self.tokens = tuple(sorted((t, e) for t, e in dict(tokens).items() if e))

    @classmethod
    def one(cls, field):
        return cls(field)

    def __mul__(self, other):
        F = self.field
        toks = dict(self.tokens)
        for t, e in other.tokens:
            toks[t] = toks.get(t, 0) + e
        return UnitExpr(F, F.mul_idx(self.scalar, other.scalar),
                        self.x_power + other.x_power, toks)

    def inverse(self):
        F = self.field
        return UnitExpr(F, F.inv_idx(self.scalar), -self.x_power,
                        {t: -e for t, e in self.tokens})

    def __pow__(self, n):
        F = self.field
        if n == 0:
            return UnitExpr.one(F)
        return UnitExpr(F, F.pow_idx(self.scalar, n), self.x_power * n,
                        {t: e * n for t, e in self.tokens})

    def is_one(self):
        return self.scalar == 1 and self.x_power == 0 and not self.tokens

    def subst_qinv(self, q_img):
        """X -> q^(-1)X^(-1) on the unit part; tokens are left fixed."""
        F = self.field
        s = F.mul_idx(self.scalar, F.pow_idx(q_img.i, -self.x_power))
        return UnitExpr(F, s, -self.x_power, dict(self.tokens))

    def scalar_elem(self):
        return FieldElem(self.field, self.scalar)

    def __eq__(self, other):
        return (isinstance(other, UnitExpr) and self.field == other.field
                and self.scalar == other.scalar
                and self.x_power == other.x_power
                and self.tokens == other.tokens)

    def __hash__(self):
        return hash((self.scalar, self.x_power, self.tokens))

    def __repr__(self):
        parts = [repr(self.scalar_elem())]
        if self.x_power:
            parts.append(f"X^{self.x_power}")
        for t, e in self.tokens:
            parts.append(t if e == 1 else f"{t}^{e}")
        return "*".join(parts)


class FactorExpr:
    """unit * num/den with num, den coprime polynomials, num(0)=den(0)=1."""

    __slots__ = ("field", "unit", "num", "den")

    def __init__(self, field, unit, num, den):
        self.field = field
        self.unit = unit
        self.num = num
        self.den = den

    @classmethod
    def one(cls, field):
        one = LaurentPoly.one(field)
        return cls(field, UnitExpr.one(field), one, one)

    @classmethod
    def from_unit(cls, unit: UnitExpr):
        one = LaurentPoly.one(unit.field)
        return cls(unit.field, unit, one, one)

    @classmethod
    def from_rational(cls, rf: RationalFraction, unit=None):
        F = rf.field
        if rf.is_zero():
            raise DivisionByZero("factor expressions are nonzero")
        unit = unit or UnitExpr.one(F)
        shift, n = rf.num.to_coeff_list()
        c = n[0]
        num = LaurentPoly.from_coeff_list(F, _poly.pscale(F, n, F.inv_idx(c)))
        extra = UnitExpr(F, c, shift)
        return cls(F, unit * extra, num, rf.den)

    def fraction(self) -> RationalFraction:
        return RationalFraction(self.field, self.num, self.den)

    def __mul__(self, other):
        merged = RationalFraction.make(self.num * other.num,
                                       self.den * other.den)
        return FactorExpr.from_rational(merged, self.unit * other.unit)

    def inverse(self):
        merged = RationalFraction.make(self.den, self.num)
        return FactorExpr.from_rational(merged, self.unit.inverse())

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        out = FactorExpr.one(self.field)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out

    def subst_qinv(self, q_img):
        return FactorExpr.from_rational(
            self.fraction().subst_qinv(q_img), self.unit.subst_qinv(q_img))

    def __eq__(self, other):
        return (isinstance(other, FactorExpr) and self.unit == other.unit
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.unit, self.num, self.den))

    def __repr__(self):
        return f"unit: {self.unit!r}  frac: ({self.num!r})/({self.den!r})"


def euler_factor(reciprocal_roots, field=None) -> RationalFraction:
    """1 / prod(1 - a_i X) for the given reciprocal roots a_i."""
    if field is None:
        if not reciprocal_roots:
            raise ValueError("euler_factor of empty list needs an explicit field")
        field = reciprocal_roots[0].field
    den = LaurentPoly.one(field)
    for a in reciprocal_roots:
        den = den * one_minus_ax(a)
    return RationalFraction.make(LaurentPoly.one(field), den)


def is_unit(f: FactorExpr):
    """True iff the fraction part is trivial; returns (flag, combined unit)."""
    one = LaurentPoly.one(f.field)
    if f.num == one and f.den == one:
        return True, f.unit
    return False, None
