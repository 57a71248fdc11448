import math

import numpy as np
import pytest

from hfx.algebra import (
    AlgebraError,
    Paravector,
    Signature,
    clifford_exp,
    geometric_product,
    random_multivector,
)
from hfx.cauchy import cauchy_integral, make_ball_quadrature, make_sphere_quadrature
from hfx.fields import StencilSpec, fueter_variable, monogenic_residual, poly_constant
from hfx.mass import (
    MassOperator,
    cauchy_integral_mass,
    cauchy_theorem_mass,
    exp_mass,
    exp_mass_apply_batch,
    exp_scalar_mass_solution,
    intertwine,
    intertwining_residual,
    left_mult_matrix,
    make_mass_solution,
    mass_equation_residual,
    mean_value_mass,
    right_mult_matrix,
)

SIG = Signature(2, -1)
S4 = StencilSpec(1e-3, 4)
RNG = np.random.default_rng(41)
PTS = RNG.uniform(-0.7, 0.7, (25, 3))
ORIGIN = Paravector(0.0, [0.0, 0.0])
Q = make_sphere_quadrature(ORIGIN, 1.0, 2, 4)
M0 = MassOperator.right_mult(SIG.scalar(0.0))
M05 = MassOperator.right_mult(SIG.scalar(0.5))
ME1 = MassOperator.right_mult(SIG.e(1))


def test_exp_mass_examples():
    a = SIG.scalar(0.7) + SIG.e(2) * 1.3
    assert (exp_mass(M05, 0.0)(a) - a).norm() == 0.0
    # lambda = 0.5, t = 2 on f = 1 gives e^1
    got = exp_mass(M05, 2.0)(SIG.scalar(1.0))
    assert abs(got.scalar_part - math.e) <= 1e-14
    # lambda = e1: f -> f (cos t + e1 sin t)
    t = 0.8
    got = exp_mass(ME1, t)(a)
    expect = geometric_product(a, SIG.scalar(math.cos(t)) + SIG.e(1) * math.sin(t))
    assert (got - expect).norm() <= 1e-14


def test_exp_mass_round_trip():
    M = MassOperator.right_mult(SIG.scalar(0.5) + SIG.e(1) * 0.3)
    for _ in range(100):
        a = random_multivector(SIG, RNG)
        assert (exp_mass(M, -0.8)(exp_mass(M, 0.8)(a)) - a).norm() <= 1e-12


def test_exp_mass_batch_matches_scalar_path():
    M = MassOperator.right_mult(SIG.scalar(0.4) + SIG.e(2) * 0.9)
    rows = np.stack([random_multivector(SIG, RNG).coeff for _ in range(16)])
    ts = RNG.uniform(-1.2, 1.2, 16)
    got = exp_mass_apply_batch(M, ts, rows)
    from hfx.algebra import Multivector
    for i in range(16):
        expect = exp_mass(M, float(ts[i]))(Multivector(SIG, rows[i]))
        assert np.linalg.norm(got[i] - expect.coeff) <= 1e-13


def test_make_mass_solution():
    g = fueter_variable(SIG, 1)
    # lambda = 0 leaves the field untouched
    f0 = make_mass_solution(g, M0)
    for p in PTS[:5]:
        assert (f0(p) - g(p)).norm() <= 1e-15
    # g = 1, lambda = 0.5: f = e^{0.5 y0}, D f = 0.5 f
    one = poly_constant(SIG, SIG.scalar(1.0))
    f = make_mass_solution(one, M05)
    assert mass_equation_residual(f, M05, PTS, S4) <= 1e-7
    for p in PTS[:5]:
        assert abs(f(p).scalar_part - math.exp(0.5 * p[0])) <= 1e-14
    # g = z1
    fz = make_mass_solution(g, M05)
    assert mass_equation_residual(fz, M05, PTS, S4) <= 1e-7


def test_make_mass_solution_precondition():
    from hfx.fields import coordinate_field
    y0 = coordinate_field(SIG, 0)  # not monogenic
    with pytest.raises(AlgebraError):
        make_mass_solution(y0, M05, check_points=PTS)


def test_intertwining_theorem_both_directions():
    g = fueter_variable(SIG, 1)
    for M in (M05, ME1, MassOperator.right_mult(SIG.scalar(1.0))):
        f = make_mass_solution(g, M)
        # forward: dressing an M-solution down to the monogenic theory
        assert intertwining_residual(f, M, M0, PTS, S4) <= 1e-7
        # reverse: monogenic up to the M-theory
        assert intertwining_residual(g, M0, M, PTS, S4) <= 1e-7
        # M1 = M2 is the identity transport
        r_self = intertwining_residual(f, M, M, PTS, S4)
        assert abs(r_self - mass_equation_residual(f, M, PTS, S4)) <= 1e-9


def test_intertwining_precondition():
    g = fueter_variable(SIG, 1)  # monogenic, NOT an M05-solution
    with pytest.raises(AlgebraError):
        intertwining_residual(g, M05, M0, PTS, S4, pre_tol=1e-7)


def test_exponential_direction_discriminator():
    # dressing an M-solution with e^{+y0 M} again must break monogenicity
    f = exp_scalar_mass_solution(SIG, 0.5)
    wrong = make_mass_solution(f, M05)
    assert monogenic_residual(wrong, PTS, S4) >= 1e-2
    right = intertwine(f, M05, M0)
    assert monogenic_residual(right, PTS, S4) <= 1e-7


def test_cauchy_theorem_mass():
    one = poly_constant(SIG, SIG.scalar(1.0))
    z1 = fueter_variable(SIG, 1)
    # lambda = 0 reduces to the plain residual
    from hfx.cauchy import cauchy_theorem_residual
    assert abs(cauchy_theorem_mass(z1, Q, M0)
               - cauchy_theorem_residual(z1, Q)) <= 1e-15
    f = make_mass_solution(one, M05)
    assert cauchy_theorem_mass(f, Q, M05) <= 1e-8
    fz = make_mass_solution(z1, M05)
    assert cauchy_theorem_mass(fz, Q, M05) <= 1e-7
    fe = make_mass_solution(z1, ME1)
    assert cauchy_theorem_mass(fe, Q, ME1) <= 1e-7


def test_cauchy_integral_mass_values():
    one = poly_constant(SIG, SIG.scalar(1.0))
    f = make_mass_solution(one, M05)
    x = Paravector(0.3, [-0.2, 0.1])
    got = cauchy_integral_mass(f, Q, x, M05)
    assert abs(got.scalar_part - math.exp(0.15)) <= 1e-6
    assert (got - SIG.scalar(math.exp(0.15))).norm() <= 1e-6
    # any f vanishes outside
    far = Paravector(2.0, [0.0, 0.0])
    assert cauchy_integral_mass(f, Q, far, M05).norm() <= 1e-6
    # lambda = 0 reduces exactly to the undressed integral
    z1 = fueter_variable(SIG, 1)
    assert (cauchy_integral_mass(z1, Q, x, M0)
            - cauchy_integral(z1, Q, x)).norm() <= 1e-14


def test_mean_value_mass():
    one = poly_constant(SIG, SIG.scalar(1.0))
    b0 = make_ball_quadrature(ORIGIN, 0.7, 2, 3)
    assert (mean_value_mass(one, b0, M0) - SIG.scalar(1.0)).norm() <= 1e-12
    f = make_mass_solution(one, M05)
    assert (mean_value_mass(f, b0, M05) - SIG.scalar(1.0)).norm() <= 1e-6
    c = Paravector(0.1, [0.2, 0.0])
    bc = make_ball_quadrature(c, 0.7, 2, 3)
    z1 = fueter_variable(SIG, 1)
    fz = make_mass_solution(z1, M05)
    expect = geometric_product(z1(c.as_point()), SIG.scalar(math.exp(0.05)))
    assert (mean_value_mass(fz, bc, M05) - expect).norm() <= 1e-6


def test_real_lambda_two_sided():
    for _ in range(200):
        a = random_multivector(SIG, RNG)
        e = clifford_exp(SIG.scalar(RNG.uniform(-1.0, 1.0)))
        assert (geometric_product(a, e) - geometric_product(e, a)).norm() <= 1e-12


def test_commutation_hypothesis():
    assert M05.commutes_with_generators()
    assert ME1.commutation_defect() == 0.0  # right multiplication, exact
    good = MassOperator.general_linear(SIG, right_mult_matrix(SIG, SIG.e(1)))
    assert good.commutes_with_generators()
    bad = MassOperator.general_linear(SIG, left_mult_matrix(SIG, SIG.e(1)))
    assert not bad.commutes_with_generators()
    assert bad.commutation_defect() >= 0.1
    assert good.operator_norm() > 0.0


def test_general_linear_matches_right_mult():
    lam = SIG.e(1)
    M_rm = MassOperator.right_mult(lam)
    M_gl = MassOperator.general_linear(SIG, right_mult_matrix(SIG, lam))
    g = fueter_variable(SIG, 1)
    f1 = make_mass_solution(g, M_rm)
    f2 = make_mass_solution(g, M_gl)
    for p in PTS[:10]:
        assert (f1(p) - f2(p)).norm() <= 1e-13


def test_mass_operator_validation():
    with pytest.raises(AlgebraError):
        MassOperator.general_linear(SIG, np.zeros((3, 3)))
