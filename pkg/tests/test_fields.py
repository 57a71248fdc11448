import math

import numpy as np
import pytest

from hfx.algebra import AlgebraError, Signature
from hfx.fields import (
    LEFT_D,
    LEFT_DBAR,
    VECTOR,
    FueterIndex,
    PolynomialField,
    StencilSpec,
    apply_cr_exact,
    apply_cr_operator,
    apply_dirac,
    constant_field,
    coordinate_field,
    exponential_scalar_field,
    factorization_check,
    fueter_polynomial,
    fueter_variable,
    identity_paravector_field,
    laplacian,
    monogenic_residual,
    poly_constant,
    weierstrass_limit_check,
)

SIG = Signature(2, -1)
S2 = StencilSpec(1e-3, 2)
S4 = StencilSpec(1e-3, 4)
RNG = np.random.default_rng(20)
PTS = RNG.uniform(-0.8, 0.8, (30, 3))


def test_stencil_spec_validation():
    with pytest.raises(AlgebraError):
        StencilSpec(1e-7, 2)
    with pytest.raises(AlgebraError):
        StencilSpec(0.5, 2)
    with pytest.raises(AlgebraError):
        StencilSpec(1e-3, 3)


def test_fueter_variable_values():
    z1 = fueter_variable(SIG, 1)
    got = z1(np.array([1.0, 2.0, 0.0]))
    assert (got - (SIG.scalar(2.0) - SIG.e(1))).norm() == 0.0
    assert z1(np.zeros(3)).norm() == 0.0
    with pytest.raises(AlgebraError):
        fueter_variable(SIG, 3)


def test_fueter_variable_monogenic():
    z1 = fueter_variable(SIG, 1)
    pts = RNG.uniform(-1.0, 1.0, (100, 3))
    assert monogenic_residual(z1, pts, S4) <= 1e-10


def test_fueter_polynomial_cases():
    one = fueter_polynomial(SIG, (0, 0))
    assert (one(PTS[0]) - SIG.scalar(1.0)).norm() == 0.0

    v11 = fueter_polynomial(SIG, (1, 1))
    z1, z2 = fueter_variable(SIG, 1), fueter_variable(SIG, 2)
    sym = z1.poly_mul(z2).poly_add(z2.poly_mul(z1)).scaled(0.5)
    for p in PTS[:5]:
        assert (v11(p) - sym(p)).norm() <= 1e-15
    assert monogenic_residual(v11, PTS, S4) <= 1e-8

    v20 = fueter_polynomial(SIG, (2, 0))
    sq = z1.poly_mul(z1)
    for p in PTS[:5]:
        assert (v20(p) - sq(p)).norm() <= 1e-15
    assert monogenic_residual(v20, PTS, S4) <= 1e-8

    # the unsymmetrized product is NOT monogenic; symmetrization matters
    assert monogenic_residual(z1.poly_mul(z2), PTS, S4) > 1e-2


def test_fueter_index_validation():
    with pytest.raises(AlgebraError):
        FueterIndex((4, 3))  # degree 7 over the cap
    with pytest.raises(AlgebraError):
        FueterIndex((-1, 0))
    with pytest.raises(AlgebraError):
        fueter_polynomial(SIG, (1, 1, 1))  # wrong length


def test_cr_operator_on_constant_and_linear():
    const = constant_field(SIG, SIG.scalar(2.0) + SIG.e(2))
    assert monogenic_residual(const, PTS, S2) <= 1e-12

    ident = identity_paravector_field(SIG)
    d = apply_cr_operator(ident, S2, LEFT_D)
    expect = SIG.scalar(1.0 - SIG.n)
    for p in PTS[:10]:
        assert (d(p) - expect).norm() <= 1e-10  # exact for order-2 on linear

    z1 = fueter_variable(SIG, 1)
    assert monogenic_residual(z1, PTS, S2) <= 1e-10


def test_cr_operator_sides_and_domain_checks():
    y0 = coordinate_field(SIG, 0)
    d = apply_cr_operator(y0, S4, LEFT_D)
    dbar = apply_cr_operator(y0, S4, LEFT_DBAR)
    for p in PTS[:5]:
        assert (d(p) - SIG.scalar(1.0)).norm() <= 1e-10
        assert (dbar(p) - SIG.scalar(1.0)).norm() <= 1e-10
    with pytest.raises(AlgebraError):
        apply_cr_operator(y0, S4, "right-D")
    vec_field = PolynomialField(SIG, VECTOR, 2, {(0, 0): SIG.scalar(1.0).coeff})
    with pytest.raises(AlgebraError):
        apply_cr_operator(vec_field, S4)


def test_monogenic_residual_scalar_probe():
    y0 = coordinate_field(SIG, 0)
    r = monogenic_residual(y0, PTS, S4)
    assert abs(r - 1.0) <= 1e-10


def test_dirac_examples():
    # f = sum_i x_i e_i on R^d has D f = sum e_i^2 = -d
    for d in (2, 3):
        sig = Signature(d, -1)
        euler = PolynomialField(
            sig, VECTOR, d,
            {tuple(1 if i == j else 0 for i in range(d)): sig.e(j + 1).coeff
             for j in range(d)})
        df = apply_dirac(euler, S4)
        pts = RNG.uniform(-1, 1, (10, d))
        for p in pts:
            assert (df(p) - sig.scalar(-float(d))).norm() <= 1e-10

    # f = x1 e2 - x2 e1: D f = e1 e2 - e2 e1 = 2 e1e2 (hand expansion)
    rot = PolynomialField(SIG, VECTOR, 2,
                          {(1, 0): SIG.e(2).coeff, (0, 1): -SIG.e(1).coeff})
    df = apply_dirac(rot, S4)
    expect = SIG.blade([1, 2]) * 2.0
    for p in RNG.uniform(-1, 1, (10, 2)):
        assert (df(p) - expect).norm() <= 1e-10

    const = PolynomialField(SIG, VECTOR, 2, {(0, 0): SIG.e(1).coeff})
    dc = apply_dirac(const, S4)
    assert dc(np.array([0.3, 0.4])).norm() <= 1e-12


def test_factorization_examples():
    # harmonic polynomial: both sides vanish
    y0, y1 = coordinate_field(SIG, 0), coordinate_field(SIG, 1)
    harm = y0.poly_mul(y0).poly_add(y1.poly_mul(y1).scaled(-1.0))
    assert factorization_check(harm, PTS, S4) <= 1e-8

    # |y|^2: laplacian = 2(n+1), and D Dbar matches it
    r2 = y0.poly_mul(y0)
    for j in range(1, SIG.n + 1):
        yj = coordinate_field(SIG, j)
        r2 = r2.poly_add(yj.poly_mul(yj))
    assert factorization_check(r2, PTS, S4) <= 1e-8
    lap = laplacian(r2, S4)
    for p in PTS[:5]:
        assert (lap(p) - SIG.scalar(2.0 * (SIG.n + 1))).norm() <= 1e-8

    # constant field: zero up to the 1/h^2-amplified roundoff floor
    const = poly_constant(SIG, SIG.e(1))
    assert factorization_check(const, PTS, S4) <= 1e-8


def test_cr_linearity():
    f = fueter_polynomial(SIG, (2, 0))
    g = fueter_polynomial(SIG, (1, 1))
    a, b = 1.7, -0.45
    combo = apply_cr_operator(f.scaled(a).poly_add(g.scaled(b)), S4)
    df = apply_cr_operator(f, S4)
    dg = apply_cr_operator(g, S4)
    for p in PTS[:10]:
        lhs = combo(p)
        rhs = df(p) * a + dg(p) * b
        assert (lhs - rhs).norm() <= 1e-12


def test_symbolic_matches_stencil():
    for f in (fueter_polynomial(SIG, (2, 1)), identity_paravector_field(SIG),
              coordinate_field(SIG, 1)):
        exact = apply_cr_exact(f)
        sten = apply_cr_operator(f, S4)
        for p in PTS[:10]:
            assert (exact(p) - sten(p)).norm() <= 1e-7
    # exact path certifies monogenicity of Fueter polynomials algebraically
    v = fueter_polynomial(SIG, (2, 2))
    dv = apply_cr_exact(v)
    assert all(np.linalg.norm(c) <= 1e-12 for c in dv.terms.values()) or \
        float(np.max(np.linalg.norm(dv.eval_batch(PTS), axis=1))) <= 1e-12


def test_stencil_convergence_order():
    direction = np.array([0.3, 0.4, -0.2])
    coeff = SIG.scalar(1.0) + SIG.e(1) + SIG.e(2) * 0.5
    f = exponential_scalar_field(SIG, direction, coeff)
    d_mv = SIG.scalar(0.3) + SIG.e(1) * 0.4 + SIG.e(2) * (-0.2)
    from hfx.algebra import geometric_product
    exact_row = geometric_product(d_mv, coeff).coeff
    pts = np.array([[0.11, -0.07, 0.13]])
    exact = math.exp(float(pts[0] @ direction)) * exact_row

    def err(h, order):
        df = apply_cr_operator(f, StencilSpec(h, order))
        return np.linalg.norm(df(pts[0]).coeff - exact)

    order2 = math.log2(err(4e-3, 2) / err(2e-3, 2))
    order4 = math.log2(err(4e-2, 4) / err(2e-2, 4))
    assert abs(order2 - 2.0) <= 0.2
    assert abs(order4 - 4.0) <= 0.2


def test_weierstrass_convergent_sequence():
    z1, z2 = fueter_variable(SIG, 1), fueter_variable(SIG, 2)
    seq = [z1.poly_add(z2.scaled(1.0 / k)) for k in range(1, 9)]
    compacts = [RNG.uniform(-0.4, 0.4, (12, 3)), RNG.uniform(-0.2, 0.2, (12, 3))]
    rec = weierstrass_limit_check(seq, z1, compacts, S4)
    assert rec.precondition_ok
    assert rec.limit_residual <= 1e-8
    assert rec.distances_monotone()
    assert rec.derivatives_converge()
    # distances scale like 1/k
    d = rec.sup_distances[0]
    for k in range(1, len(d)):
        assert abs(d[k] * (k + 1) - d[0]) <= 1e-10 * (k + 1)


def test_weierstrass_constant_sequence():
    c = poly_constant(SIG, SIG.scalar(1.0) + SIG.e(1))
    rec = weierstrass_limit_check([c, c, c], c, [PTS[:10]], S4)
    assert rec.precondition_ok
    assert all(np.max(dd) <= 1e-14 for dd in rec.sup_distances)


def test_weierstrass_flags_non_monogenic_member():
    y0 = coordinate_field(SIG, 0)  # D y0 = 1, not monogenic
    z1 = fueter_variable(SIG, 1)
    rec = weierstrass_limit_check([z1, y0], z1, [PTS[:10]], S4)
    assert not rec.precondition_ok
    assert rec.member_residuals[1] > 0.5


def test_weierstrass_exp_partial_sums_geometric():
    z1 = fueter_variable(SIG, 1)
    powers = [poly_constant(SIG, SIG.scalar(1.0))]
    for _ in range(8):
        powers.append(powers[-1].poly_mul(z1))
    partials = []
    acc = None
    for m, pw in enumerate(powers):
        term = pw.scaled(1.0 / math.factorial(m))
        acc = term if acc is None else acc.poly_add(term)
        partials.append(acc)
    limit = partials[-1]
    ball = RNG.uniform(-0.35, 0.35, (20, 3))
    dists = [float(np.max(np.linalg.norm(
        p.eval_batch(ball) - limit.eval_batch(ball), axis=1)))
        for p in partials[:-2]]
    for a, b in zip(dists, dists[1:]):
        if a > 1e-14:
            assert b / a <= 0.5
