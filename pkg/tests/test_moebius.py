import numpy as np
import pytest

from hfx.algebra import AlgebraError, geometric_product
from hfx.moebius import (
    STAR_CONJUGATION,
    BallPoint,
    PoleError,
    apply_moebius,
    ball_signature,
    clifford_group_element,
    compose,
    conformality_probe,
    make_moebius,
    point_map,
    verify_ball_theorem,
)

SIG = ball_signature(3)
RNG = np.random.default_rng(53)


def rand_ball(n, rmax=0.8):
    v = RNG.normal(size=n)
    return v * rmax * RNG.uniform() / np.linalg.norm(v)


def test_ball_point_validation():
    with pytest.raises(AlgebraError):
        BallPoint([1.0, 0.0, 0.0])
    with pytest.raises(AlgebraError):
        BallPoint([0.8, 0.8])
    p = BallPoint([0.3, -0.2, 0.1])
    assert p.n == 3


def test_make_moebius_entries_for_b_one():
    # for b = 1 the matrix is [[1, -a], [a, -1]] (reversion fixes vectors)
    a = BallPoint([0.3, 0.1, -0.2])
    m = make_moebius(a, SIG.scalar(1.0))
    av = a.as_multivector(SIG)
    assert (m.p - SIG.scalar(1.0)).norm() == 0.0
    assert (m.q + av).norm() == 0.0
    assert (m.r - av).norm() == 0.0
    assert (m.s + SIG.scalar(1.0)).norm() == 0.0


def test_origin_map_is_antipode():
    # a = 0, b = 1: x -> x (-1)^{-1} = -x
    m = make_moebius(BallPoint([0.0, 0.0, 0.0]), SIG.scalar(1.0))
    x = SIG.from_vector([0.2, -0.4, 0.1])
    assert (apply_moebius(m, x) + x).norm() <= 1e-15


def test_swap_identities():
    for _ in range(20):
        a = BallPoint(rand_ball(3))
        m = point_map(a)
        f0 = apply_moebius(m, np.zeros(3))
        assert (f0 - a.as_multivector(SIG)).norm() <= 1e-14
        fa = apply_moebius(m, a)
        assert fa.norm() <= 1e-12


def test_involution_identity():
    for _ in range(50):
        m = point_map(BallPoint(rand_ball(3)))
        x = SIG.from_vector(rand_ball(3, 0.95))
        assert (apply_moebius(m, apply_moebius(m, x)) - x).norm() <= 1e-10


def test_sphere_and_ball_preservation():
    for _ in range(50):
        b = clifford_group_element(
            SIG, [RNG.normal(size=3) / np.linalg.norm(RNG.normal(size=3))
                  for _ in range(int(RNG.integers(0, 4)))])
        m = make_moebius(BallPoint(rand_ball(3)), b)
        u = RNG.normal(size=3)
        u /= np.linalg.norm(u)
        img = apply_moebius(m, u)
        assert abs(np.linalg.norm(img.vector_part()) - 1.0) <= 1e-10
        x = SIG.from_vector(rand_ball(3, 0.9))
        assert np.linalg.norm(apply_moebius(m, x).vector_part()) <= 1.0 + 1e-12


def test_rotation_subgroup_member():
    # b = e1 e2, a = 0: a sphere-preserving stabilizer element
    b = geometric_product(SIG.e(1), SIG.e(2))
    m = make_moebius(BallPoint([0.0, 0.0, 0.0]), b)
    for _ in range(20):
        u = RNG.normal(size=3)
        u /= np.linalg.norm(u)
        img = apply_moebius(m, u)
        assert abs(np.linalg.norm(img.vector_part()) - 1.0) <= 1e-12


def test_compose_compatibility_and_associativity():
    maps = [make_moebius(BallPoint(rand_ball(3)), SIG.scalar(1.0)) for _ in range(3)]
    x = SIG.from_vector(rand_ball(3, 0.9))
    lhs = apply_moebius(compose(maps[0], maps[1]), x)
    rhs = apply_moebius(maps[0], apply_moebius(maps[1], x))
    assert (lhs - rhs).norm() <= 1e-10
    m_ab_c = compose(compose(maps[0], maps[1]), maps[2])
    m_a_bc = compose(maps[0], compose(maps[1], maps[2]))
    assert (apply_moebius(m_ab_c, x) - apply_moebius(m_a_bc, x)).norm() <= 1e-10


def test_inverse_composition_is_identity():
    a = BallPoint(rand_ball(3))
    m = point_map(a)  # self-inverse
    mm = compose(m, m)
    for _ in range(100):
        x = SIG.from_vector(rand_ball(3, 0.95))
        assert (apply_moebius(mm, x) - x).norm() <= 1e-10


def test_transitivity_witness():
    p = BallPoint(rand_ball(3))
    q = BallPoint(rand_ball(3))
    carrier = compose(point_map(q), point_map(p))
    img = apply_moebius(carrier, p)
    assert (img - q.as_multivector(SIG)).norm() <= 1e-10


def test_pole_raises():
    m = point_map(BallPoint([0.5, 0.0]))
    # denominator a x - 1 vanishes at x = a / |a|^2, outside the ball
    with pytest.raises(PoleError):
        apply_moebius(m, np.array([2.0, 0.0]))


def test_verify_ball_theorem_record():
    for n in (2, 3, 4):
        rec = verify_ball_theorem(n, 300, seed=7)
        assert rec.all_passed, [c.name for c in rec.failed()]
    assert verify_ball_theorem(3, 0, 0).all_passed  # vacuous
    with pytest.raises(AlgebraError):
        verify_ball_theorem(5, 10, 0)


def test_verify_ball_theorem_deterministic():
    r1 = verify_ball_theorem(3, 200, seed=11)
    r2 = verify_ball_theorem(3, 200, seed=11)
    assert [c.value for c in r1] == [c.value for c in r2]


def test_conjugation_star_negative_control():
    rec = verify_ball_theorem(3, 100, seed=7, star=STAR_CONJUGATION)
    assert max(c.value for c in rec) >= 0.1
    # specifically sphere/ball preservation is what breaks
    by_name = {c.name.split(".")[-1]: c.value for c in rec}
    assert by_name["sphere"] >= 0.1 or by_name["ball"] >= 0.1


def test_conformality():
    assert conformality_probe(3, 100, seed=5) <= 1e-4


def test_group_element_validation():
    with pytest.raises(AlgebraError):
        make_moebius(BallPoint([0.1, 0.2]), SIG.scalar(1.0))  # dim mismatch
