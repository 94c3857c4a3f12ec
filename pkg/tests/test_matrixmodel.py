import random

import pytest

from modwd import (Cyc, Seg, UnramifiedChar, jordan_chevalley, normalize,
                   oracle_tensor_ss, raw_tensor, realize, rescale_witness,
                   semisimplify, tensor_ss, validate)
from modwd._linalg import FMat
from modwd.errors import (FNotInvertible, NeedsLargerField, NotNilpotent,
                          RamifiedLine, RelationViolated)
from modwd.matrixmodel import MatrixDeligne, decompose, matrix_dual
from modwd.weil import RamifiedAbstract, line_of


def chi(ctx, v):
    return UnramifiedChar(ctx.field.from_int(v))


def rand_invertible(field, n, rng):
    while True:
        P = FMat(field, [[rng.randrange(field.order) for _ in range(n)]
                         for _ in range(n)])
        if P.rank() == n:
            return P


def test_validate_examples(ctx52):
    F = ctx52.field
    ok = MatrixDeligne(FMat.diag(F, [F.from_int(2).i]), FMat.zeros(F, 1, 1))
    assert validate(ok, ctx52)
    bad = MatrixDeligne(FMat.identity(F, 2), FMat.identity(F, 2))
    with pytest.raises(RelationViolated):
        validate(bad, ctx52)  # UF = I != qI = qFU since q != 1
    m = realize(normalize([Cyc(line_of(chi(ctx52, 1), ctx52)[0], 1)], ctx52), ctx52)
    assert validate(m, ctx52)
    sing = MatrixDeligne(FMat.zeros(F, 1, 1), FMat.zeros(F, 1, 1))
    with pytest.raises(FNotInvertible):
        validate(sing, ctx52)


def test_realize_examples(ctx52):
    F = ctx52.field
    m = realize(normalize([Seg(chi(ctx52, 1), 1, 0)], ctx52), ctx52)
    assert m.F.a.tolist() == [[1]] and m.U.a.tolist() == [[0]]
    m = realize(normalize([Cyc(line_of(chi(ctx52, 1), ctx52)[0], 1)], ctx52), ctx52)
    assert [int(m.F.a[i, i]) for i in range(4)] == \
        [F.from_int(v).i for v in (1, 3, 4, 2)]
    # U is the cyclic permutation sending slot k to slot k+1
    perm = [[0] * 4 for _ in range(4)]
    for k in range(4):
        perm[(k + 1) % 4][k] = 1
    assert m.U.a.tolist() == perm
    m = realize(normalize([Seg(chi(ctx52, 1), 2, 0)], ctx52), ctx52)
    assert [int(m.F.a[i, i]) for i in range(2)] == [1, F.from_int(3).i]
    assert m.U.a.tolist() == [[0, 0], [1, 0]]


def test_realize_rejects_ramified(ctx52):
    psi = RamifiedAbstract("psi", 2, 2, "psiv")
    with pytest.raises(RamifiedLine):
        realize(normalize([Seg(psi, 1, 0)], ctx52), ctx52)


def test_jordan_chevalley(ctx52):
    F = ctx52.field
    m = realize(normalize([Seg(chi(ctx52, 1), 3, 0)], ctx52), ctx52)
    jp = jordan_chevalley(m.U, ctx52)
    assert jp.D.is_zero() and jp.N == m.U  # nilpotent input
    jp = jordan_chevalley(m.F, ctx52)
    assert jp.N.is_zero() and jp.D == m.F  # semisimple input
    # construct-and-recover roundtrip on a mixed operator
    mixed = realize(normalize([(Cyc(line_of(chi(ctx52, 2), ctx52)[0], 2), 1),
                               (Seg(chi(ctx52, 1), 2, 1), 1)], ctx52), ctx52)
    jp = jordan_chevalley(mixed.U, ctx52)
    assert jp.D + jp.N == mixed.U
    assert (jp.D @ jp.N) == (jp.N @ jp.D)
    assert jp.N.power(mixed.dim).is_zero()
    # both parts satisfy the Deligne relation
    q = ctx52.q_img
    assert (jp.D @ mixed.F) == (mixed.F @ jp.D).scale(q)
    assert (jp.N @ mixed.F) == (mixed.F @ jp.N).scale(q)
    # D is semisimple: annihilated by a squarefree polynomial
    from modwd import _poly
    rad = _poly.radical(F, jp.D.charpoly())
    assert jp.D.poly_eval(rad).is_zero()


def test_jordan_chevalley_needs_splitting(ctx23):
    F = ctx23.field
    # companion matrix of x^2 + x + 1, irreducible over F_2
    U = FMat(F, [[0, 1], [1, 1]])
    with pytest.raises(NeedsLargerField):
        jordan_chevalley(U, ctx23)


def test_decompose_roundtrip_examples(ctx52):
    a = normalize([Seg(chi(ctx52, 1), 2, 0)], ctx52)
    assert decompose(realize(a, ctx52), ctx52) == a
    # lambda-scaled cycle decomposes to the same class for every lambda
    line = line_of(chi(ctx52, 1), ctx52)[0]
    cy = normalize([Cyc(line, 1)], ctx52)
    m = realize(cy, ctx52)
    for lam in range(1, ctx52.field.order):
        assert decompose(MatrixDeligne(m.F, m.U.scale(lam)), ctx52) == cy


def test_decompose_wrapped_segment(ctx52):
    # r > o: the Frobenius eigenvalue sequence wraps around the orbit
    a = normalize([Seg(chi(ctx52, 2), 6, 1)], ctx52)
    assert decompose(realize(a, ctx52), ctx52) == a


def test_decompose_random_shuffles(ctx52):
    rng = random.Random(11)
    line1 = line_of(chi(ctx52, 1), ctx52)[0]
    line2 = line_of(chi(ctx52, 2), ctx52)[0]
    cases = [
        [(Seg(chi(ctx52, 1), 2, 0), 1), (Seg(chi(ctx52, 1), 1, 2), 2)],
        [(Cyc(line1, 1), 1), (Seg(chi(ctx52, 2), 2, 1), 1)],
        [(Cyc(line2, 2), 1), (Cyc(line1, 1), 1)],
    ]
    for parts in cases:
        a = normalize(parts, ctx52)
        m = realize(a, ctx52)
        for _ in range(3):
            P = rand_invertible(ctx52.field, m.dim, rng)
            Pi = P.inverse()
            mc = MatrixDeligne(P @ m.F @ Pi, P @ m.U @ Pi)
            assert decompose(mc, ctx52) == a


def test_decompose_nilpotent_scaling_invariance(ctx52):
    a = normalize([(Seg(chi(ctx52, 1), 3, 0), 1), (Seg(chi(ctx52, 1), 1, 1), 1)],
                  ctx52)
    m = realize(a, ctx52)
    for lam in (2, 7, 24):
        assert decompose(MatrixDeligne(m.F, m.U.scale(lam)), ctx52) == a


def test_decompose_needs_larger_field(ctx23):
    F = ctx23.field
    # Frobenius acting by the companion matrix of x^2+x+1: unramified
    # eigenvalues outside F_2
    Frob = FMat(F, [[0, 1], [1, 1]])
    m = MatrixDeligne(Frob, FMat.zeros(F, 2, 2))
    with pytest.raises(NeedsLargerField):
        decompose(m, ctx23)


def test_rescale_witness(ctx52):
    F = ctx52.field
    # single segment: P = diag(1, lam, lam^2)
    a = normalize([Seg(chi(ctx52, 1), 3, 0)], ctx52)
    m = realize(a, ctx52)
    lam = F.from_int(3)
    P = rescale_witness(m, lam, ctx52)
    # lam^i on the graded piece S_i; our shift puts Ker(U) at the last
    # basis vector, so the diagonal reads top grade first
    assert P.a.tolist() == FMat.diag(F, [(lam * lam).i, lam.i, 1]).a.tolist()
    assert rescale_witness(m, F.one, ctx52) == FMat.identity(F, 3)
    # random nilpotent pair: the defining identities hold
    b = normalize([(Seg(chi(ctx52, 2), 2, 1), 2), (Seg(chi(ctx52, 2), 1, 3), 1)],
                  ctx52)
    mb = realize(b, ctx52)
    lam = F.elem(F.gen_idx)
    P = rescale_witness(mb, lam, ctx52)
    assert (P @ mb.F) == (mb.F @ P)
    assert (P @ mb.U.scale(lam)) == (mb.U @ P)
    assert P.rank() == mb.dim
    with pytest.raises(NotNilpotent):
        cyc_m = realize(normalize([Cyc(line_of(chi(ctx52, 1), ctx52)[0], 1)],
                                  ctx52), ctx52)
        rescale_witness(cyc_m, lam, ctx52)


def test_semisimplify_examples(ctx52):
    F = ctx52.field
    t = F.from_int(2)
    m = MatrixDeligne(FMat.diag(F, [t.i]), FMat.zeros(F, 1, 1))
    assert semisimplify(m, ctx52) == normalize([Seg(chi(ctx52, 2), 1, 0)], ctx52)
    # uniserial 2x2: F = diag(t, t q^-1), U kills the head; the
    # semisimplification is the character plus the kernel character
    tq = t * ctx52.nu_value(1)
    m = MatrixDeligne(FMat.diag(F, [t.i, tq.i]), FMat(F, [[0, 0], [1, 0]]))
    ss = semisimplify(m, ctx52)
    assert ss == normalize([Seg(chi(ctx52, 2), 1, 0), Seg(chi(ctx52, 2), 1, 1)],
                           ctx52)
    # full cycle roundtrip
    line = line_of(chi(ctx52, 1), ctx52)[0]
    cy = normalize([Cyc(line, 1)], ctx52)
    assert semisimplify(realize(cy, ctx52), ctx52) == cy
    # JH of [0,r-1] (x) C(Z) is r copies of C(Z)
    m = realize(normalize([Cyc(line, 3)], ctx52), ctx52)
    assert semisimplify(m, ctx52) == normalize([(Cyc(line, 1), 3)], ctx52)


def test_raw_tensor(ctx52):
    rng = random.Random(5)
    a = realize(normalize([Seg(chi(ctx52, 2), 2, 0)], ctx52), ctx52)
    one = realize(normalize([Seg(chi(ctx52, 1), 1, 0)], ctx52), ctx52)
    t = raw_tensor(a, one)
    assert t.dim == a.dim
    assert t.F == a.F and t.U == a.U
    b = realize(normalize([Cyc(line_of(chi(ctx52, 1), ctx52)[0], 1)], ctx52), ctx52)
    t = raw_tensor(a, b)
    assert t.dim == a.dim * b.dim
    assert validate(t, ctx52)
    # relation on random valid pairs: scale operators arbitrarily
    for _ in range(3):
        lam = rng.randrange(1, 25)
        mu = rng.randrange(1, 25)
        t = raw_tensor(MatrixDeligne(a.F, a.U.scale(lam)),
                       MatrixDeligne(b.F, b.U.scale(mu)))
        assert validate(t, ctx52)


def test_oracle_matches_formal_small(ctx52, ctx32, ctx23):
    for ctx in (ctx52, ctx32, ctx23):
        c1 = UnramifiedChar(ctx.field.one)
        line = line_of(c1, ctx)[0]
        indecs = [Seg(c1, 1, 0), Seg(c1, 2, 0), Cyc(line, 1), Cyc(line, 2)]
        for i, A in enumerate(indecs):
            for B in indecs[i:]:
                a, b = normalize([A], ctx), normalize([B], ctx)
                assert oracle_tensor_ss(a, b) == tensor_ss(a, b)


def test_oracle_cyc_cyc_multiplicity(ctx52, ctx23):
    for ctx, mult in ((ctx52, 4), (ctx23, 1)):
        line = line_of(UnramifiedChar(ctx.field.one), ctx)[0]
        cy = normalize([Cyc(line, 1)], ctx)
        assert oracle_tensor_ss(cy, cy) == cy.scale(mult)


def test_decompose_dimension_guard(ctx52):
    # a Frobenius-stable but operator-invalid pair must be rejected
    F = ctx52.field
    m = MatrixDeligne(FMat.diag(F, [1, 1]), FMat(F, [[0, 1], [0, 0]]))
    with pytest.raises(RelationViolated):
        decompose(m, ctx52)


def test_decompose_multiline(ctx52):
    # at (5,2) the orbit of 1 is all of F_5^x, so a second line needs a
    # value outside the prime field
    F = ctx52.field
    g = UnramifiedChar(F.elem(F.gen_idx))
    c1 = chi(ctx52, 1)
    a = normalize([(Seg(c1, 2, 0), 1), (Seg(g, 1, 0), 2),
                   (Cyc(line_of(g, ctx52)[0], 1), 1)], ctx52)
    m = realize(a, ctx52)
    assert decompose(m, ctx52) == a
    rng = random.Random(23)
    P = rand_invertible(F, m.dim, rng)
    mc = MatrixDeligne(P @ m.F @ P.inverse(), P @ m.U @ P.inverse())
    assert decompose(mc, ctx52) == a
