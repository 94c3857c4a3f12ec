import pytest
from hypothesis import given, settings, strategies as st

from modwd import euler_factor, is_unit, make_ctx
from modwd.errors import DivisionByZero
from modwd.laurent import (FactorExpr, LaurentPoly, RationalFraction,
                           UnitExpr)


def expand_product(roots, field):
    # independent oracle: multiply the linear factors coefficient by
    # coefficient in a plain dict
    coeffs = {0: field.one}
    for a in roots:
        out = {}
        for e, c in coeffs.items():
            out[e] = out.get(e, field.zero) + c
            out[e + 1] = out.get(e + 1, field.zero) - c * a
        coeffs = {e: c for e, c in out.items() if not c.is_zero()}
    return coeffs


def test_euler_factor_empty(ctx52):
    assert euler_factor([], field=ctx52.field).is_one()


def test_euler_factor_orbit_collapses(ctx52):
    # roots t q^-k over the full orbit multiply to 1 - (tX)^o
    F = ctx52.field
    for t_int in (1, 2):
        t = F.from_int(t_int)
        roots = [t * ctx52.nu_value(k) for k in range(4)]
        ef = euler_factor(roots)
        expect = expand_product(roots, F)
        assert ef.den == LaurentPoly(F, {e: c.i for e, c in expect.items()})
        assert ef.den == LaurentPoly(F, {0: 1, 4: (-(t ** 4)).i})


def test_euler_factor_explicit_values(ctx52):
    # {1,3,4,2} in F_5 is exactly {q^-k}, so the product is 1 - X^4
    F = ctx52.field
    roots = [F.from_int(v) for v in (1, 3, 4, 2)]
    ef = euler_factor(roots)
    assert ef.den == LaurentPoly(F, {0: 1, 4: F.neg_idx(1)})
    assert ef.num == LaurentPoly.one(F)


def test_fraction_group_laws(ctx52):
    F = ctx52.field
    f = euler_factor([F.from_int(2)])
    assert f * RationalFraction.one(F) == f
    assert (f / f).is_one()
    with pytest.raises(DivisionByZero):
        f / RationalFraction.make(LaurentPoly.zero(F), LaurentPoly.one(F))


def test_unit_group(ctx52):
    F = ctx52.field
    u = UnitExpr(F, F.from_int(3), 2, {"eps(a)": 1})
    assert (u * u.inverse()).is_one()
    assert (u ** 3).x_power == 6
    fe = FactorExpr.from_unit(u)
    assert (fe * fe.inverse()) == FactorExpr.one(F)


def test_is_unit_examples(ctx52):
    F = ctx52.field
    t = F.from_int(2)
    nontrivial = FactorExpr.from_rational(euler_factor([t]))
    assert is_unit(nontrivial)[0] is False
    trivial = FactorExpr.from_rational(euler_factor([t]) / euler_factor([t]))
    ok, unit = is_unit(trivial)
    assert ok and unit.is_one()
    # (1 - u X)/(1 - u X) * (-(tX)^o)^r  ->  unit (-1)^r t^(o r) X^(o r)
    o, r = 4, 3
    mono = FactorExpr.from_rational(RationalFraction.make(
        LaurentPoly(F, {o: (-(t ** o)).i}), LaurentPoly.one(F)))
    combined = trivial * mono ** r
    ok, unit = is_unit(combined)
    assert ok
    assert unit == UnitExpr(F, ((-F.one) ** r * t ** (o * r)).i, o * r)


def test_normal_form_canonical(ctx52):
    F = ctx52.field
    # the same fraction assembled two ways reduces identically
    a, b = F.from_int(2), F.from_int(3)
    f1 = euler_factor([a, b]) * RationalFraction.one(F)
    f2 = euler_factor([b]) * euler_factor([a])
    assert f1 == f2
    g1 = FactorExpr.from_rational(f1)
    g2 = FactorExpr.from_rational(f2)
    assert g1 == g2 and hash(g1) == hash(g2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 24)),
                min_size=0, max_size=4),
       st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 24)),
                min_size=1, max_size=4))
def test_subst_qinv_is_involutive(num_terms, den_terms):
    ctx = make_ctx(5, 2)
    F = ctx.field
    num = LaurentPoly(F, dict(num_terms))
    den = LaurentPoly(F, dict(den_terms))
    if den.is_zero():
        return
    rf = RationalFraction.make(num, den)
    twice = rf.subst_qinv(ctx.q_img).subst_qinv(ctx.q_img)
    assert twice == rf


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 24), st.integers(-4, 4), st.integers(1, 24))
def test_subst_qinv_unit(scalar, xpow, root):
    ctx = make_ctx(5, 2)
    F = ctx.field
    fe = FactorExpr.from_rational(
        euler_factor([F.elem(root)]),
        UnitExpr(F, scalar, xpow))
    assert fe.subst_qinv(ctx.q_img).subst_qinv(ctx.q_img) == fe


def test_print_format(ctx52):
    F = ctx52.field
    fe = FactorExpr.from_rational(euler_factor([F.one]),
                                  UnitExpr(F, F.from_int(3), 1, {"eps(x)": 2}))
    text = repr(fe)
    assert text.startswith("unit: ")
    assert "frac: " in text and "eps(x)^2" in text
