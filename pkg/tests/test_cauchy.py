import math

import numpy as np
import pytest

from hfx.algebra import Paravector, Signature, SingularElement
from hfx.cauchy import (
    QuadratureAccuracyWarning,
    ball_volume,
    cauchy_integral,
    cauchy_kernel,
    cauchy_theorem_residual,
    fundamental_solution,
    kernel_from_fundamental,
    make_ball_quadrature,
    make_sphere_quadrature,
    mean_value,
    mean_value_constant,
    sphere_area,
)
from hfx.fields import (
    StencilSpec,
    constant_field,
    coordinate_field,
    fueter_polynomial,
    fueter_variable,
    identity_paravector_field,
    poly_constant,
)

SIG = Signature(2, -1)
ORIGIN = Paravector(0.0, [0.0, 0.0])
RNG = np.random.default_rng(31)


def test_kernel_values():
    e = cauchy_kernel(Paravector(1.0, [0.0, 0.0]))
    assert abs(e.scalar_part - 1.0 / (4.0 * math.pi)) <= 1e-16
    assert np.linalg.norm(e.vector_part()) == 0.0

    e1 = cauchy_kernel(Paravector(0.0, [1.0]), 1)
    sig1 = Signature(1, -1)
    assert (e1 + sig1.e(1) / (2.0 * math.pi)).norm() <= 1e-16


def test_kernel_homogeneity_and_singularity():
    x = Paravector(0.3, [0.4, -0.2])
    x2 = Paravector(0.6, [0.8, -0.4])
    assert (cauchy_kernel(x2) - cauchy_kernel(x) * 2.0 ** (-2)).norm() <= 1e-14
    with pytest.raises(SingularElement):
        cauchy_kernel(Paravector(0.0, [0.0, 1e-15]))


def test_fundamental_solution_values():
    # n = 2: F = -1/(4 pi |x|)
    assert abs(fundamental_solution(Paravector(1.0, [0.0, 0.0]))
               + 1.0 / (4.0 * math.pi)) <= 1e-16
    # n = 1: log branch vanishes on the unit circle
    assert fundamental_solution(Paravector(0.0, [1.0]), 1) == 0.0
    # radial symmetry
    a = fundamental_solution(Paravector(0.6, [0.8, 0.0]))
    b = fundamental_solution(Paravector(0.0, [0.6, -0.8]))
    assert abs(a - b) <= 1e-16
    with pytest.raises(SingularElement):
        fundamental_solution(Paravector(0.0, [0.0, 0.0]))


def test_kernel_from_fundamental_matches():
    s = StencilSpec(1e-4, 2)
    for p in (Paravector(1.0, [0.0, 0.0]), Paravector(0.3, [0.4, -0.2])):
        assert (kernel_from_fundamental(p, 2, s) - cauchy_kernel(p)).norm() <= 1e-7
    p1 = Paravector(0.0, [1.0])
    assert (kernel_from_fundamental(p1, 1, s) - cauchy_kernel(p1, 1)).norm() <= 1e-7
    with pytest.raises(SingularElement):
        kernel_from_fundamental(Paravector(1e-5, [0.0, 0.0]), 2, StencilSpec(1e-2, 2))


def test_kernel_from_fundamental_richardson():
    x = Paravector(0.5, [0.7, -0.3])
    errs = [(kernel_from_fundamental(x, 2, StencilSpec(h, 2))
             - cauchy_kernel(x)).norm() for h in (2e-3, 4e-3)]
    order = math.log2(errs[1] / errs[0])
    assert abs(order - 2.0) <= 0.2


@pytest.mark.parametrize("n,level", [(1, 4), (2, 3), (3, 2)])
def test_sphere_quadrature_invariants(n, level):
    center = Paravector(0.0, np.zeros(n))
    q = make_sphere_quadrature(center, 1.3, n, level)
    area = sphere_area(n, 1.3)
    assert abs(q.weights.sum() - area) <= 1e-10 * area
    assert np.all(q.weights > 0)
    assert np.max(np.abs(np.linalg.norm(q.normals, axis=1) - 1.0)) <= 1e-14
    recon = center.as_point()[None, :] + 1.3 * q.normals
    assert np.max(np.abs(recon - q.nodes)) <= 1e-14
    # vector cancellation and the divergence-theorem probe
    assert np.linalg.norm((q.weights[:, None] * q.normals).sum(0)) <= 1e-10 * area
    div = float((q.weights * np.einsum("ij,ij->i", q.normals,
                                       q.nodes - center.as_point())).sum())
    assert abs(div - (n + 1) * ball_volume(n, 1.3)) <= 1e-10 * area


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ball_quadrature_volume(n):
    b = make_ball_quadrature(Paravector(0.2, [0.1] * n), 0.9, n, 3)
    vol = ball_volume(n, 0.9)
    assert abs(b.weights.sum() - vol) <= 1e-10 * vol
    assert np.all(np.linalg.norm(b.nodes - b.center.as_point()[None, :], axis=1) < 0.9)


def test_cauchy_theorem_monogenic_and_stokes():
    q = make_sphere_quadrature(ORIGIN, 1.0, 2, 4)
    assert cauchy_theorem_residual(constant_field(SIG, SIG.scalar(1.0)), q) <= 1e-12
    assert cauchy_theorem_residual(fueter_polynomial(SIG, (1, 1)), q) <= 1e-8
    # Stokes: integral of dsigma y0 equals the ball volume (D y0 = 1)
    got = cauchy_theorem_residual(coordinate_field(SIG, 0), q)
    assert abs(got - 4.0 * math.pi / 3.0) <= 1e-6


def test_cauchy_integral_constant_dichotomy():
    q = make_sphere_quadrature(ORIGIN, 1.0, 2, 4)
    one = constant_field(SIG, SIG.scalar(1.0))
    inside = cauchy_integral(one, q, ORIGIN)
    assert (inside - SIG.scalar(1.0)).norm() <= 1e-10
    outside = cauchy_integral(one, q, Paravector(2.0, [0.0, 0.0]))
    assert outside.norm() <= 1e-10


def test_cauchy_integral_reproduces_fueter_variable():
    q = make_sphere_quadrature(ORIGIN, 1.0, 2, 4)
    z1 = fueter_variable(SIG, 1)
    x = Paravector(0.2, [0.1, 0.3])
    got = cauchy_integral(z1, q, x)
    expect = SIG.scalar(0.1) - SIG.e(1) * 0.2
    assert (got - expect).norm() <= 1e-6


def test_cauchy_integral_dichotomy_over_corpus():
    q = make_sphere_quadrature(ORIGIN, 1.0, 2, 4)
    corpus = [constant_field(SIG, SIG.e(1)),
              fueter_variable(SIG, 1),
              fueter_polynomial(SIG, (1, 1)),
              fueter_polynomial(SIG, (2, 0))]
    for f in corpus:
        for _ in range(5):
            v = RNG.normal(size=3)
            v /= np.linalg.norm(v)
            xin = Paravector.from_point(v * RNG.uniform(0.0, 0.45))
            assert (cauchy_integral(f, q, xin) - f(xin.as_point())).norm() <= 1e-6
            xout = Paravector.from_point(v * RNG.uniform(1.55, 1.9))
            assert cauchy_integral(f, q, xout).norm() <= 1e-6


def test_near_boundary_warning():
    q = make_sphere_quadrature(ORIGIN, 1.0, 2, 4)
    one = constant_field(SIG, SIG.scalar(1.0))
    with pytest.warns(QuadratureAccuracyWarning):
        cauchy_integral(one, q, Paravector(0.97, [0.0, 0.0]))


def test_refinement_monotone():
    z1 = fueter_variable(SIG, 1)
    resid = [cauchy_theorem_residual(z1, make_sphere_quadrature(ORIGIN, 1.0, 2, lv))
             for lv in (2, 3, 4)]
    assert max(np.diff(resid)) <= 1e-13


def test_mean_value():
    b = make_ball_quadrature(ORIGIN, 1.0, 2, 3)
    one = constant_field(SIG, SIG.scalar(1.0))
    assert (mean_value(one, b) - SIG.scalar(1.0)).norm() <= 1e-12
    c = Paravector(0.1, [0.2, 0.0])
    b2 = make_ball_quadrature(c, 0.7, 2, 3)
    z1 = fueter_variable(SIG, 1)
    assert (mean_value(z1, b2) - z1(c.as_point())).norm() <= 1e-6


def test_mean_value_constant_is_inverse_volume():
    for n in (1, 2, 3):
        for r in (0.5, 1.0, 1.7):
            assert abs(mean_value_constant(n, r) * ball_volume(n, r) - 1.0) <= 1e-12


def test_classical_complex_reduction():
    # n = 1 with 256 trapezoid nodes: the machinery must reproduce the
    # classical Cauchy formula for f(z) = z^k, k <= 5
    sig1 = Signature(1, -1)
    q1 = make_sphere_quadrature(Paravector(0.0, [0.0]), 1.0, 1, 4)
    assert len(q1.weights) == 256
    ident = identity_paravector_field(sig1)
    f = poly_constant(sig1, sig1.scalar(1.0))
    for k in range(6):
        for zpt in ([0.3, 0.2], [-0.5, 0.1], [0.0, -0.6]):
            x = Paravector(zpt[0], [zpt[1]])
            got = cauchy_integral(f, q1, x)
            zc = complex(zpt[0], zpt[1]) ** k
            expect = sig1.scalar(zc.real) + sig1.e(1) * zc.imag
            assert (got - expect).norm() <= 1e-10
            # independent complex-plane oracle: plain trapezoid sum of
            # (1/2 pi i) f(t)/(t - z) dt on the same nodes
            t = q1.nodes[:, 0] + 1j * q1.nodes[:, 1]
            oracle = np.mean(t ** k * t / (t - complex(zpt[0], zpt[1])))
            assert abs(oracle - zc) <= 1e-12
        f = f.poly_mul(ident)
