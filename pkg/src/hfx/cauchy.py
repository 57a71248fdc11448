"""Cauchy kernel, fundamental solution, and sphere/ball quadrature.

Everything here lives in the e_j^2 = -1 convention on paravector space
R^(n+1).  The oriented surface element is realized as nu(y) dS(y) with nu
the outward unit normal paravector and dS scalar surface measure, and the
reproducing integral is evaluated in the kernel * normal * function order.
Domains are spheres and balls only; quadrature is Gauss-Legendre /
trapezoid product rules (trapezoid alone on the circle), which are
spectrally accurate for the analytic integrands that arise here.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraError,
    Multivector,
    Paravector,
    Signature,
    SingularElement,
    gp_batch,
    paravectors_to_batch,
)
from .fields import LEFT_DBAR, CliffordField, StencilSpec, partial_derivative

#: generator-square convention for the whole function-theory stack
FUNCTION_THEORY_SIGN = -1

#: evaluation closer to the surface than this many node spacings is flagged
NEAR_BOUNDARY_FACTOR = 10.0


class QuadratureAccuracyWarning(UserWarning):
    """Evaluation point too close to the integration surface for the
    stated accuracy guarantees."""


def _sig(n: int) -> Signature:
    return Signature(n, FUNCTION_THEORY_SIGN)


def sphere_area(n: int, radius: float = 1.0) -> float:
    """Surface measure of the n-sphere of given radius in R^(n+1)."""
    return 2.0 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2) * radius**n


def ball_volume(n: int, radius: float = 1.0) -> float:
    """Volume of the unit-ball analogue in R^(n+1)."""
    return math.pi ** ((n + 1) / 2) * radius ** (n + 1) / math.gamma((n + 3) / 2)


def mean_value_constant(n: int, radius: float) -> float:
    """The closed-form normalizer (n+1) Gamma((n+1)/2) / (2 R^(n+1) pi^((n+1)/2)).

    Equal to 1 / ball_volume(n, radius) via Gamma((n+3)/2) = ((n+1)/2) Gamma((n+1)/2).
    """
    return ((n + 1) * math.gamma((n + 1) / 2)
            / (2.0 * radius ** (n + 1) * math.pi ** ((n + 1) / 2)))


def kernel_constant(n: int) -> float:
    return math.gamma((n + 1) / 2) / (2.0 * math.pi ** ((n + 1) / 2))


def cauchy_kernel(x: Paravector, n: int | None = None, eps: float = 1e-14) -> Multivector:
    """E(x) = c_n conj(x) / |x|^(n+1), the reproducing kernel of D.

    c_n = Gamma((n+1)/2) / (2 pi^((n+1)/2)); homogeneous of degree -n.
    """
    if n is None:
        n = x.n
    if n != x.n:
        raise AlgebraError(f"kernel dimension {n} != paravector components {x.n}")
    r = x.abs()
    if r <= eps:
        raise SingularElement(f"Cauchy kernel evaluated at |x| = {r:g} <= {eps:g}")
    sig = _sig(n)
    return x.conjugate().as_multivector(sig) * (kernel_constant(n) / r ** (n + 1))


def cauchy_kernel_batch(n: int, diffs: np.ndarray, eps: float = 1e-14) -> np.ndarray:
    """Kernel coefficient rows for a stack of paravector differences."""
    diffs = np.atleast_2d(diffs)
    r = np.linalg.norm(diffs, axis=1)
    if np.any(r <= eps):
        raise SingularElement("Cauchy kernel evaluated at a singular difference")
    conj = diffs.copy()
    conj[:, 1:] *= -1.0
    rows = paravectors_to_batch(_sig(n), conj)
    return rows * (kernel_constant(n) / r ** (n + 1))[:, None]


def fundamental_solution(x: Paravector, n: int | None = None, eps: float = 1e-14) -> float:
    """Fundamental solution F of the Laplacian on R^(n+1), radial form.

    F(x) = -c_n / (n-1) |x|^(1-n) for n >= 2 and log|x| / (2 pi) for n = 1;
    normalized so that applying (d_0 - sum e_j d_j) recovers the Cauchy
    kernel.
    """
    if n is None:
        n = x.n
    if n != x.n:
        raise AlgebraError(f"dimension {n} != paravector components {x.n}")
    r = x.abs()
    if r <= eps:
        raise SingularElement(f"fundamental solution at |x| = {r:g} <= {eps:g}")
    if n == 1:
        return math.log(r) / (2.0 * math.pi)
    return -kernel_constant(n) / (n - 1) * r ** (1 - n)


def kernel_from_fundamental(x: Paravector, n: int | None = None,
                            s: StencilSpec = StencilSpec()) -> Multivector:
    """(d_0 - sum_j e_j d_j) F by central differences; matches cauchy_kernel."""
    if n is None:
        n = x.n
    if x.abs() < NEAR_BOUNDARY_FACTOR * s.h:
        raise SingularElement(
            f"|x| = {x.abs():g} too close to the singularity for step {s.h:g}")
    sig = _sig(n)
    F = CliffordField(
        sig, "paravector", n + 1,
        lambda p: sig.scalar(fundamental_solution(Paravector.from_point(p), n)),
        lambda P: np.column_stack(
            [[fundamental_solution(Paravector.from_point(p), n) for p in P]]
            + [np.zeros(P.shape[0])] * (sig.dim - 1)),
        label="F",
    )
    point = x.as_point()
    out = partial_derivative(F, 0, s)(point)
    for j in range(1, n + 1):
        out = out - sig.e(j) * partial_derivative(F, j, s)(point)
    return out


@dataclass(frozen=True)
class SphereQuadrature:
    """Nodes, weights, and outward unit normals discretizing a sphere."""

    center: Paravector
    radius: float
    n: int
    level: int
    nodes: np.ndarray    # (N, n+1)
    weights: np.ndarray  # (N,)

    @property
    def normals(self) -> np.ndarray:
        return (self.nodes - self.center.as_point()[None, :]) / self.radius

    @property
    def node_spacing(self) -> float:
        """Mean inter-node distance scale, (area / N)^(1/n)."""
        area = sphere_area(self.n, self.radius)
        return (area / len(self.weights)) ** (1.0 / self.n)

    def distance_to_surface(self, x: Paravector) -> float:
        return abs(np.linalg.norm(x.as_point() - self.center.as_point()) - self.radius)

    def is_near_boundary(self, x: Paravector) -> bool:
        return self.distance_to_surface(x) < NEAR_BOUNDARY_FACTOR * self.node_spacing


@dataclass(frozen=True)
class BallQuadrature:
    """Interior nodes and weights for the solid ball."""

    center: Paravector
    radius: float
    n: int
    level: int
    nodes: np.ndarray
    weights: np.ndarray


def _unit_sphere_rule(n: int, level: int):
    """Nodes/weights on the unit n-sphere; product rules per dimension."""
    if level < 1:
        raise AlgebraError(f"quadrature level must be >= 1, got {level}")
    if n == 1:
        m = 1 << (level + 4)
        theta = 2.0 * math.pi * np.arange(m) / m
        nodes = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(m, 2.0 * math.pi / m)
        return nodes, weights
    if n == 2:
        n_t = 12 * level
        n_p = 2 * n_t
        t, wt = np.polynomial.legendre.leggauss(n_t)
        phi = 2.0 * math.pi * np.arange(n_p) / n_p
        st = np.sqrt(1.0 - t * t)
        x0 = np.repeat(t, n_p)
        x1 = np.repeat(st, n_p) * np.tile(np.cos(phi), n_t)
        x2 = np.repeat(st, n_p) * np.tile(np.sin(phi), n_t)
        weights = np.repeat(wt, n_p) * (2.0 * math.pi / n_p)
        return np.column_stack([x0, x1, x2]), weights
    if n == 3:
        # cos(psi) by Gauss-Chebyshev II (weight sqrt(1-u^2) = sin^2 psi dpsi)
        m = 8 * level
        i = np.arange(1, m + 1)
        u = np.cos(i * math.pi / (m + 1))
        wu = (math.pi / (m + 1)) * np.sin(i * math.pi / (m + 1)) ** 2
        s2_nodes, s2_weights = _unit_sphere_rule(2, level)
        su = np.sqrt(1.0 - u * u)
        x0 = np.repeat(u, len(s2_weights))
        rest = np.repeat(su, len(s2_weights))[:, None] * np.tile(s2_nodes, (m, 1))
        weights = np.repeat(wu, len(s2_weights)) * np.tile(s2_weights, m)
        return np.column_stack([x0, rest]), weights
    raise AlgebraError(f"sphere quadrature supports n in {{1, 2, 3}}, got {n}")


def make_sphere_quadrature(center: Paravector, radius: float, n: int,
                           level: int) -> SphereQuadrature:
    """Surface rule on the sphere |y - center| = radius in R^(n+1)."""
    if radius <= 0:
        raise AlgebraError(f"radius must be positive, got {radius}")
    if center.n != n:
        raise AlgebraError(f"center has {center.n} vector components, expected {n}")
    unit_nodes, unit_weights = _unit_sphere_rule(n, level)
    nodes = center.as_point()[None, :] + radius * unit_nodes
    weights = unit_weights * radius**n
    return SphereQuadrature(center, float(radius), n, level, nodes, weights)


def make_ball_quadrature(center: Paravector, radius: float, n: int,
                         level: int) -> BallQuadrature:
    """Solid rule: radial Gauss-Legendre (weight r^n) x unit-sphere rule."""
    if radius <= 0:
        raise AlgebraError(f"radius must be positive, got {radius}")
    unit_nodes, unit_weights = _unit_sphere_rule(n, level)
    m_r = 6 * level
    t, wt = np.polynomial.legendre.leggauss(m_r)
    r = 0.5 * radius * (t + 1.0)
    wr = 0.5 * radius * wt * r**n
    nodes = center.as_point()[None, :] + r[:, None, None] * unit_nodes[None, :, :]
    weights = wr[:, None] * unit_weights[None, :]
    return BallQuadrature(center, float(radius), n, level,
                          nodes.reshape(-1, n + 1), weights.reshape(-1))


def cauchy_theorem_residual(f: CliffordField, q: SphereQuadrature) -> float:
    """|| sum_i w_i nu_i f(y_i) ||, the discretized boundary integral of D f.

    Vanishes for monogenic f; by the divergence theorem it equals the
    volume integral of D f in general.
    """
    sig = _sig(q.n)
    nu = paravectors_to_batch(sig, q.normals)
    fv = f.eval_batch(q.nodes)
    integrand = gp_batch(sig, nu, fv)
    total = (q.weights[:, None] * integrand).sum(axis=0)
    return float(np.linalg.norm(total))


def cauchy_integral(f: CliffordField, q: SphereQuadrature, x: Paravector) -> Multivector:
    """sum_i w_i E(y_i - x) nu_i f(y_i): f(x) inside, 0 outside, for monogenic f.

    Emits QuadratureAccuracyWarning when x is within NEAR_BOUNDARY_FACTOR
    node spacings of the surface.
    """
    if q.is_near_boundary(x):
        warnings.warn(
            f"evaluation point at distance {q.distance_to_surface(x):.3g} from the "
            f"surface; accuracy guaranteed only beyond {NEAR_BOUNDARY_FACTOR * q.node_spacing:.3g}",
            QuadratureAccuracyWarning, stacklevel=2)
    sig = _sig(q.n)
    diffs = q.nodes - x.as_point()[None, :]
    E = cauchy_kernel_batch(q.n, diffs)
    nu = paravectors_to_batch(sig, q.normals)
    fv = f.eval_batch(q.nodes)
    integrand = gp_batch(sig, gp_batch(sig, E, nu), fv)
    total = (q.weights[:, None] * integrand).sum(axis=0)
    return Multivector(sig, total)


def mean_value(f: CliffordField, b: BallQuadrature) -> Multivector:
    """Volume average of f over the ball; equals f(center) for monogenic f."""
    sig = _sig(b.n)
    fv = f.eval_batch(b.nodes)
    total = (b.weights[:, None] * fv).sum(axis=0)
    return Multivector(sig, total / b.weights.sum())
