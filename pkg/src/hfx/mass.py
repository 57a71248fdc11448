"""Mass-term function theory and the exponential intertwining of theories.

A mass operator M is a bounded linear map on the algebra commuting with
left multiplication by every generator; the model case is right
multiplication by a fixed Clifford number lambda.  Solutions of
D f = M f (with D = d_0 + sum_j e_j d_j, e_j^2 = -1) are carried to
monogenic functions by y |-> e^{-y_0 M} f(y) and back by e^{+y_0 M},
which transports the Cauchy theorem, integral formula, and mean value
theorem verbatim with exponential dressings.

On the choice of direction: transporting with e^{+y_0 M} in the
M-to-monogenic direction is inconsistent with the intertwining theorem
itself (it produces D g = 2 M g, not D g = 0); the negative direction is
enforced here and exposed as a negative-control check in the suites.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .algebra import (
    AlgebraError,
    Multivector,
    Signature,
    _tables,
    clifford_exp,
    geometric_product,
    gp_batch,
    paravectors_to_batch,
)
from .cauchy import (
    BallQuadrature,
    QuadratureAccuracyWarning,
    SphereQuadrature,
    cauchy_kernel_batch,
)
from .fields import PARAVECTOR, CliffordField, StencilSpec

RIGHT_MULT = "right-mult"
GENERAL_LINEAR = "general-linear"

#: commutator tolerance for the generator-commutation invariant
COMMUTATION_TOL = 1e-12

#: series term cutoff for the vectorised exponential in the parameter t
_T_SERIES_TOL = 1e-18
_T_SERIES_MAX = 120


def left_mult_matrix(sig: Signature, a: Multivector) -> np.ndarray:
    """Matrix of v |-> a v on coefficient space."""
    t = _tables(sig.n, sig.sign)
    return np.einsum("i,ijk->kj", a.coeff, t["cayley"])


def right_mult_matrix(sig: Signature, a: Multivector) -> np.ndarray:
    """Matrix of v |-> v a on coefficient space."""
    t = _tables(sig.n, sig.sign)
    return np.einsum("j,ijk->ki", a.coeff, t["cayley"])


@dataclass(frozen=True)
class MassOperator:
    """Bounded operator on the algebra commuting with left e_j-multiplication.

    ``right-mult`` wraps a Clifford number lambda (f |-> f lambda), which
    commutes exactly; ``general-linear`` wraps an arbitrary matrix on
    coefficient space, with the commutation hypothesis checked numerically.
    """

    sig: Signature
    kind: str
    lam: Multivector | None = None
    matrix: np.ndarray | None = None

    @classmethod
    def right_mult(cls, lam: Multivector) -> "MassOperator":
        return cls(lam.sig, RIGHT_MULT, lam=lam)

    @classmethod
    def general_linear(cls, sig: Signature, matrix: np.ndarray) -> "MassOperator":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (sig.dim, sig.dim):
            raise AlgebraError(
                f"mass matrix must be {sig.dim}x{sig.dim}, got {matrix.shape}")
        return cls(sig, GENERAL_LINEAR, matrix=matrix)

    def as_matrix(self) -> np.ndarray:
        if self.kind == RIGHT_MULT:
            return right_mult_matrix(self.sig, self.lam)
        return self.matrix

    def commutation_defect(self) -> float:
        """max_j || M L_{e_j} - L_{e_j} M ||, the theorem's hypothesis."""
        m = self.as_matrix()
        worst = 0.0
        for j in range(1, self.sig.n + 1):
            lj = left_mult_matrix(self.sig, self.sig.e(j))
            worst = max(worst, float(np.linalg.norm(m @ lj - lj @ m)))
        return worst

    def commutes_with_generators(self, tol: float = COMMUTATION_TOL) -> bool:
        if self.kind == RIGHT_MULT:
            return True
        return self.commutation_defect() <= tol * max(1.0, float(np.linalg.norm(self.matrix)))

    def operator_norm(self) -> float:
        return float(np.linalg.norm(self.as_matrix(), 2))

    def apply(self, f: Multivector) -> Multivector:
        if self.kind == RIGHT_MULT:
            return geometric_product(f, self.lam)
        return Multivector(self.sig, self.as_matrix() @ f.coeff)


class ExpMassMap:
    """The linear map e^{t M} on the algebra, applicable to batches.

    For right multiplication the map is f |-> f e^{t lambda}; in batch
    form with node-dependent t it is evaluated as the series
    sum_k t^k (lambda^k / k!) (or matrix powers), vectorised over t.
    """

    def __init__(self, M: MassOperator, t: float):
        self.M = M
        self.t = float(t)
        if M.kind == RIGHT_MULT:
            self._factor = clifford_exp(M.lam * self.t)
            self._matrix = None
        else:
            self._factor = None
            self._matrix = expm(self.t * M.matrix)

    def __call__(self, f: Multivector) -> Multivector:
        if self._factor is not None:
            return geometric_product(f, self._factor)
        return Multivector(self.M.sig, self._matrix @ f.coeff)


def exp_mass(M: MassOperator, t: float) -> ExpMassMap:
    """The intertwining exponential e^{t M} as a reusable linear map."""
    return ExpMassMap(M, t)


def _exp_power_series(M: MassOperator, t_scale: float):
    """Coefficients of e^{t M} as a polynomial in t (multivector rows or matrices)."""
    sig = M.sig
    if M.kind == RIGHT_MULT:
        powers = [sig.scalar(1.0).coeff]
        acc = sig.scalar(1.0)
        for k in range(1, _T_SERIES_MAX + 1):
            acc = geometric_product(acc, M.lam) / k
            powers.append(acc.coeff)
            if acc.norm() * t_scale**k <= _T_SERIES_TOL:
                break
        return powers
    powers = [np.eye(sig.dim)]
    acc = np.eye(sig.dim)
    for k in range(1, _T_SERIES_MAX + 1):
        acc = acc @ M.matrix / k
        powers.append(acc)
        if np.linalg.norm(acc) * t_scale**k <= _T_SERIES_TOL:
            break
    return powers


def exp_mass_apply_batch(M: MassOperator, t: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Apply e^{t_i M} to coefficient row i, vectorised over nodes."""
    t = np.asarray(t, dtype=float)
    t_scale = float(np.max(np.abs(t))) if t.size else 0.0
    powers = _exp_power_series(M, max(t_scale, 1e-300))
    if M.kind == RIGHT_MULT:
        factors = np.zeros((len(t), M.sig.dim))
        tk = np.ones_like(t)
        for k, p in enumerate(powers):
            if k > 0:
                tk = tk * t
            factors += tk[:, None] * p[None, :]
        return gp_batch(M.sig, rows, factors)
    out = np.zeros_like(rows)
    tk = np.ones_like(t)
    for k, p in enumerate(powers):
        if k > 0:
            tk = tk * t
        out += tk[:, None] * (rows @ p.T)
    return out


def make_mass_solution(g: CliffordField, M: MassOperator,
                       check_points=None, s: StencilSpec = StencilSpec(1e-3, 4),
                       mono_tol: float = 1e-6) -> CliffordField:
    """Dress a monogenic g into the M-solution f(y) = e^{y_0 M} g(y).

    Satisfies D f = M f.  When ``check_points`` is given, g's monogenicity
    is verified first and a violation raises.
    """
    if g.domain != PARAVECTOR:
        raise AlgebraError("mass solutions live on paravector space")
    if check_points is not None:
        from .fields import monogenic_residual
        res = monogenic_residual(g, check_points, s)
        if res > mono_tol:
            raise AlgebraError(
                f"input field is not monogenic: residual {res:.3g} > {mono_tol:g}")

    def fn_batch(P):
        P = np.atleast_2d(P)
        return exp_mass_apply_batch(M, P[:, 0], g.eval_batch(P))

    return CliffordField(
        g.sig, g.domain, g.dim,
        lambda p: exp_mass(M, float(p[0]))(g(p)),
        fn_batch, label=f"mass({g.label})")


def mass_equation_residual(f: CliffordField, M: MassOperator, points,
                           s: StencilSpec = StencilSpec(1e-3, 4)) -> float:
    """max_p || (D f)(p) - M f(p) ||, the defining equation of an M-solution."""
    from .fields import apply_cr_operator
    df = apply_cr_operator(f, s)
    P = np.atleast_2d(points)
    lhs = df.eval_batch(P)
    if M.kind == RIGHT_MULT:
        rhs = gp_batch(M.sig, f.eval_batch(P), M.lam.coeff[None, :])
    else:
        rhs = f.eval_batch(P) @ M.as_matrix().T
    return float(np.max(np.linalg.norm(lhs - rhs, axis=1)))


def intertwine(f: CliffordField, M1: MassOperator, M2: MassOperator) -> CliffordField:
    """g(y) = e^{y_0 M2} e^{-y_0 M1} f(y): M1-solutions become M2-solutions."""

    def fn_batch(P):
        P = np.atleast_2d(P)
        rows = exp_mass_apply_batch(M1, -P[:, 0], f.eval_batch(P))
        return exp_mass_apply_batch(M2, P[:, 0], rows)

    return CliffordField(
        f.sig, f.domain, f.dim,
        lambda p: exp_mass(M2, float(p[0]))(exp_mass(M1, -float(p[0]))(f(p))),
        fn_batch, label=f"intertwined({f.label})")


def intertwining_residual(f: CliffordField, M1: MassOperator, M2: MassOperator,
                          points, s: StencilSpec = StencilSpec(1e-3, 4),
                          pre_tol: float | None = None) -> float:
    """Residual of the M2-equation for the intertwined field.

    When ``pre_tol`` is set, f is first checked to satisfy the M1-equation
    at that tolerance (the theorem's hypothesis) and a violation raises.
    """
    if pre_tol is not None:
        pre = mass_equation_residual(f, M1, points, s)
        if pre > pre_tol:
            raise AlgebraError(
                f"input does not satisfy the M1-equation: residual {pre:.3g} > {pre_tol:g}")
    g = intertwine(f, M1, M2)
    return mass_equation_residual(g, M2, points, s)


def _dressed_boundary_rows(f: CliffordField, q: SphereQuadrature,
                           M: MassOperator) -> np.ndarray:
    rows = f.eval_batch(q.nodes)
    return exp_mass_apply_batch(M, -q.nodes[:, 0], rows)


def cauchy_theorem_mass(f: CliffordField, q: SphereQuadrature, M: MassOperator) -> float:
    """|| sum_i w_i nu_i e^{-(y_i)_0 M} f(y_i) ||; zero for M-solutions."""
    sig = f.sig
    nu = paravectors_to_batch(sig, q.normals)
    rows = _dressed_boundary_rows(f, q, M)
    total = (q.weights[:, None] * gp_batch(sig, nu, rows)).sum(axis=0)
    return float(np.linalg.norm(total))


def cauchy_integral_mass(f: CliffordField, q: SphereQuadrature, x,
                         M: MassOperator) -> Multivector:
    """e^{x_0 M} sum_i w_i E(y_i - x) nu_i e^{-(y_i)_0 M} f(y_i).

    Reproduces f(x) inside the sphere and 0 outside for M-solutions.
    """
    if q.is_near_boundary(x):
        warnings.warn(
            f"evaluation point at distance {q.distance_to_surface(x):.3g} from the surface",
            QuadratureAccuracyWarning, stacklevel=2)
    sig = f.sig
    diffs = q.nodes - x.as_point()[None, :]
    E = cauchy_kernel_batch(q.n, diffs)
    nu = paravectors_to_batch(sig, q.normals)
    rows = _dressed_boundary_rows(f, q, M)
    integrand = gp_batch(sig, gp_batch(sig, E, nu), rows)
    total = Multivector(sig, (q.weights[:, None] * integrand).sum(axis=0))
    return exp_mass(M, x.x0)(total)


def mean_value_mass(f: CliffordField, b: BallQuadrature, M: MassOperator) -> Multivector:
    """e^{x_0 M} of the volume average of e^{-y_0 M} f; equals f(center)."""
    sig = f.sig
    rows = exp_mass_apply_batch(M, -b.nodes[:, 0], f.eval_batch(b.nodes))
    total = (b.weights[:, None] * rows).sum(axis=0) / b.weights.sum()
    return exp_mass(M, b.center.x0)(Multivector(sig, total))


def exp_scalar_mass_solution(sig: Signature, lam: float) -> CliffordField:
    """The closed-form solution e^{lambda y_0} of D f = f lambda, lambda real."""

    def fn_batch(P):
        P = np.atleast_2d(P)
        rows = np.zeros((P.shape[0], sig.dim))
        rows[:, 0] = np.exp(lam * P[:, 0])
        return rows

    return CliffordField(
        sig, PARAVECTOR, sig.n + 1,
        lambda p: sig.scalar(math.exp(lam * float(p[0]))),
        fn_batch, label=f"exp({lam:g} y0)")
