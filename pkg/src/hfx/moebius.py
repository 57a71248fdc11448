"""The group of Moebius automorphisms of the open unit ball in R^n.

Maps are 2x2 matrices with Clifford entries acting fractional-linearly on
grade-1 vectors, x |-> (p x + q)(r x + s)^{-1}, built as
diag(b, b*^{-1}) . [[1, -a], [a*, -1]] for a point a of the ball and b in
the Clifford group.  The star is reversion, and the module runs in the
e_j^2 = +1 convention: that is the combination under which the sphere
and ball are actually preserved (with e_j^2 = -1 and reversion, boundary
collinear points land strictly inside: xi = 1 maps to (alpha-1)/(1+alpha)).
The conjugation star is kept available as a negative control; note that
[[1, -a], [a*, -1]]^2 = (1 - a a*) I is scalar under *every* convention,
so the self-inverse identity alone does not discriminate - the control
fails through sphere/ball preservation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraError,
    Multivector,
    Signature,
    SingularElement,
    geometric_product as gp,
    involution,
    is_clifford_group_element,
)
from .report import Check, VerificationRecord

#: generator-square convention for the ball group
BALL_SIGN = +1

STAR_REVERSION = "reversion"
STAR_CONJUGATION = "conjugation"

#: denominators with coefficient norm below this raise PoleError
POLE_EPS = 1e-12

#: tolerance for the grade-1 postcondition of the fractional-linear action
GRADE1_TOL = 1e-10


class PoleError(AlgebraError):
    """The fractional-linear denominator is numerically non-invertible."""


def ball_signature(n: int) -> Signature:
    return Signature(n, BALL_SIGN)


@dataclass(frozen=True)
class BallPoint:
    """A point of the open unit ball, embedded as a grade-1 element."""

    coords: tuple

    def __init__(self, coords):
        coords = tuple(float(c) for c in coords)
        if np.linalg.norm(coords) >= 1.0:
            raise AlgebraError(f"ball point must have norm < 1, got {np.linalg.norm(coords):g}")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def as_multivector(self, sig: Signature | None = None) -> Multivector:
        sig = sig or ball_signature(self.n)
        return sig.from_vector(np.array(self.coords))


def clifford_group_element(sig: Signature, vectors) -> Multivector:
    """Product of grade-1 elements; the empty product is 1."""
    out = sig.scalar(1.0)
    for v in vectors:
        out = gp(out, sig.from_vector(np.asarray(v, dtype=float)))
    if not is_clifford_group_element(out):
        raise AlgebraError("product is not a valid Clifford-group element")
    return out


@dataclass(frozen=True)
class MoebiusMap:
    """2x2 Clifford matrix acting as x |-> (p x + q)(r x + s)^{-1}."""

    p: Multivector
    q: Multivector
    r: Multivector
    s: Multivector

    @property
    def sig(self) -> Signature:
        return self.p.sig


def make_moebius(a: BallPoint, b: Multivector, star: str = STAR_REVERSION) -> MoebiusMap:
    """diag(b, b*^{-1}) . [[1, -a], [a*, -1]] for |a| < 1, b invertible.

    ``star`` selects the involution used for a* and b*; reversion is the
    convention under which the ball theorem holds, conjugation is the
    documented negative control.
    """
    if star not in (STAR_REVERSION, STAR_CONJUGATION):
        raise AlgebraError(f"unknown star operation {star!r}")
    sig = b.sig
    if sig.n != a.n:
        raise AlgebraError(f"ball point dimension {a.n} != algebra generators {sig.n}")
    av = a.as_multivector(sig)
    astar = involution(av, star)
    bstar_inv = involution(b, star).inverse()
    one = sig.scalar(1.0)
    return MoebiusMap(
        p=gp(b, one),
        q=gp(b, -av),
        r=gp(bstar_inv, astar),
        s=gp(bstar_inv, -one),
    )


def point_map(a: BallPoint, sig: Signature | None = None) -> MoebiusMap:
    """The involutive map phi_(a,1): swaps a and 0."""
    sig = sig or ball_signature(a.n)
    return make_moebius(a, sig.scalar(1.0))


def _apply_raw(m: MoebiusMap, x: Multivector):
    den = gp(m.r, x) + m.s
    if den.norm() < POLE_EPS:
        raise PoleError(f"denominator norm {den.norm():g} below {POLE_EPS:g}")
    try:
        den_inv = den.inverse()
    except SingularElement as exc:
        raise PoleError(str(exc)) from exc
    out = gp(gp(m.p, x) + m.q, den_inv)
    defect = out.max_grade_defect(1)
    return out.grade_projection(1), defect


def apply_moebius(m: MoebiusMap, x, check_grade: bool = True) -> Multivector:
    """Fractional-linear action on a grade-1 element (or BallPoint/array).

    The result is verified grade-1 (Moebius maps send vectors to vectors)
    and returned as its grade-1 part.
    """
    if isinstance(x, BallPoint):
        x = x.as_multivector(m.sig)
    elif isinstance(x, np.ndarray) or isinstance(x, (list, tuple)):
        x = m.sig.from_vector(np.asarray(x, dtype=float))
    out, defect = _apply_raw(m, x)
    if check_grade and defect > GRADE1_TOL * max(1.0, out.norm()):
        raise AlgebraError(f"action produced a non-vector result (defect {defect:.3g})")
    return out


def compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    """Matrix product; action-compatible with applying m2 then m1."""
    return MoebiusMap(
        p=gp(m1.p, m2.p) + gp(m1.q, m2.r),
        q=gp(m1.p, m2.q) + gp(m1.q, m2.s),
        r=gp(m1.r, m2.p) + gp(m1.s, m2.r),
        s=gp(m1.r, m2.q) + gp(m1.s, m2.s),
    )


def _sample_ball(rng, n: int, rmax: float = 0.85) -> np.ndarray:
    v = rng.normal(size=n)
    v /= np.linalg.norm(v)
    return v * rmax * rng.uniform() ** (1.0 / n)


def _sample_sphere(rng, n: int) -> np.ndarray:
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def _sample_group_element(rng, sig: Signature, max_vectors: int = 3) -> Multivector:
    k = rng.integers(0, max_vectors + 1)
    return clifford_group_element(sig, [_sample_sphere(rng, sig.n) for _ in range(k)])


def verify_ball_theorem(n: int, samples: int, seed: int,
                        star: str = STAR_REVERSION) -> VerificationRecord:
    """Sampled verification of the ball-automorphism identities.

    Records max deviations for: the self-inverse identity of phi_(a,1),
    phi_(a,1)(0) = a, phi_(a,1)(a) = 0, ball and sphere preservation,
    stabilizer (O(n)) closure of products of phi_(0,b), and transitivity.
    ``samples = 0`` yields an empty, vacuously passing record.
    """
    if n not in (2, 3, 4):
        raise AlgebraError(f"ball theorem verification supports n in {{2,3,4}}, got {n}")
    rec = VerificationRecord(label=f"ball-theorem n={n} star={star}")
    if samples == 0:
        return rec
    sig = ball_signature(n)
    rng = np.random.Generator(np.random.Philox(key=seed))

    dev = {k: 0.0 for k in (
        "involution", "phi0_a", "phia_0", "ball", "sphere",
        "stabilizer_closure", "transitivity", "grade1", "compose")}
    for _ in range(samples):
        a = BallPoint(_sample_ball(rng, n))
        x = sig.from_vector(_sample_ball(rng, n, rmax=0.95))
        u = sig.from_vector(_sample_sphere(rng, n))
        m = make_moebius(a, sig.scalar(1.0), star=star)

        y, d1 = _apply_raw(m, x)
        yy, d2 = _apply_raw(m, y)
        dev["grade1"] = max(dev["grade1"], d1, d2)
        dev["involution"] = max(dev["involution"], (yy - x).norm())
        dev["ball"] = max(dev["ball"], float(np.linalg.norm(y.vector_part())) - 1.0)

        f0, _ = _apply_raw(m, sig.from_vector(np.zeros(n)))
        dev["phi0_a"] = max(dev["phi0_a"], (f0 - a.as_multivector(sig)).norm())
        fa, _ = _apply_raw(m, a.as_multivector(sig))
        dev["phia_0"] = max(dev["phia_0"], fa.norm())

        us, _ = _apply_raw(m, u)
        dev["sphere"] = max(dev["sphere"], abs(float(np.linalg.norm(us.vector_part())) - 1.0))

        b1 = _sample_group_element(rng, sig)
        b2 = _sample_group_element(rng, sig)
        mb = compose(make_moebius(BallPoint(np.zeros(n)), b1, star=star),
                     make_moebius(BallPoint(np.zeros(n)), b2, star=star))
        off = mb.q.norm() + mb.r.norm()
        ps = gp(mb.p, involution(mb.s, star))
        scale = max(abs(ps.scalar_part), 1e-30)
        dev["stabilizer_closure"] = max(
            dev["stabilizer_closure"], off,
            float(np.linalg.norm(ps.coeff[1:])) / scale)
        ub, _ = _apply_raw(mb, u)
        dev["stabilizer_closure"] = max(
            dev["stabilizer_closure"],
            abs(float(np.linalg.norm(ub.vector_part())) - 1.0))

        # transitivity: phi_(q,1) . phi_(p,1) carries p to q
        pq = BallPoint(_sample_ball(rng, n))
        mt = compose(point_map(pq, sig), point_map(BallPoint(tuple(x.vector_part())), sig))
        tx, _ = _apply_raw(mt, x)
        dev["transitivity"] = max(dev["transitivity"], (tx - pq.as_multivector(sig)).norm())

        # action compatibility of composition
        m2 = make_moebius(pq, sig.scalar(1.0), star=star)
        lhs, _ = _apply_raw(compose(m, m2), x)
        mid, _ = _apply_raw(m2, x)
        rhs, _ = _apply_raw(m, mid)
        dev["compose"] = max(dev["compose"], (lhs - rhs).norm())

    tolerances = {
        "involution": 1e-10, "phi0_a": 1e-14, "phia_0": 1e-12,
        "ball": 1e-10, "sphere": 1e-10, "stabilizer_closure": 1e-10,
        "transitivity": 1e-10, "grade1": GRADE1_TOL, "compose": 1e-10,
    }
    for name, value in dev.items():
        rec.add(Check(name=f"moebius.n{n}.{name}", value=value, tolerance=tolerances[name]))
    return rec


def conformality_probe(n: int, samples: int, seed: int, h: float = 1e-5) -> float:
    """Max first-order angle distortion of orthonormal displacement pairs.

    A conformal map preserves angles to O(h) under an h-sized probe; the
    returned value is the worst |cos angle| of the image displacements.
    """
    sig = ball_signature(n)
    rng = np.random.Generator(np.random.Philox(key=seed + 1))
    worst = 0.0
    for _ in range(samples):
        a = BallPoint(_sample_ball(rng, n))
        m = make_moebius(a, _sample_group_element(rng, sig))
        x = _sample_ball(rng, n, rmax=0.8)
        u = _sample_sphere(rng, n)
        v = rng.normal(size=n)
        v -= (v @ u) * u
        v /= np.linalg.norm(v)
        fx, _ = _apply_raw(m, sig.from_vector(x))
        fu, _ = _apply_raw(m, sig.from_vector(x + h * u))
        fv, _ = _apply_raw(m, sig.from_vector(x + h * v))
        du = fu.vector_part() - fx.vector_part()
        dv = fv.vector_part() - fx.vector_part()
        cosang = abs(du @ dv) / (np.linalg.norm(du) * np.linalg.norm(dv))
        worst = max(worst, float(cosang))
    return worst
