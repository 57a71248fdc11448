"""Clifford-valued function fields and first-order operator calculus.

A field is an evaluable mapping from points to multivectors; nothing is
gridded.  Two domain kinds exist: paravector fields on R^(n+1) (points
(x_0, x_1..x_n), the home of the generalized Cauchy-Riemann operator
D = d_0 + sum_j e_j d_j) and plain vector fields on R^d (the home of the
Dirac operator sum_i e_i d_i).  Derivatives come from central-difference
stencils of order 2 or 4; polynomial fields additionally carry an exact
term-rewriting derivative so the two paths can cross-validate.

The convention throughout is e_j^2 = -1 and *left* monogenicity D f = 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import (
    AlgebraError,
    Multivector,
    Signature,
    geometric_product,
    gp_batch,
)

PARAVECTOR = "paravector"
VECTOR = "vector"

MAX_FUETER_DEGREE = 6


@dataclass(frozen=True)
class StencilSpec:
    """Central-difference step and accuracy order."""

    h: float = 1e-3
    order: int = 2

    def __post_init__(self):
        if not 1e-6 <= self.h <= 1e-1:
            raise AlgebraError(f"stencil step must be in [1e-6, 1e-1], got {self.h}")
        if self.order not in (2, 4):
            raise AlgebraError(f"stencil order must be 2 or 4, got {self.order}")


# First-derivative stencil offsets/coefficients, scaled by 1/h at use site.
_D1 = {
    2: ((-1, -0.5), (1, 0.5)),
    4: ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12)),
}
# Second derivative, scaled by 1/h^2.
_D2 = {
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    4: ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12)),
}


class CliffordField:
    """Evaluable multivector-valued function on R^dim.

    ``fn`` maps one point (1-d array) to a Multivector; ``fn_batch``, when
    given, maps an (N, dim) array to (N, 2^n) coefficients and is used by
    the quadrature and residual scans.
    """

    def __init__(self, sig: Signature, domain: str, dim: int, fn,
                 fn_batch=None, label: str = ""):
        if domain not in (PARAVECTOR, VECTOR):
            raise AlgebraError(f"unknown domain kind {domain!r}")
        if domain == PARAVECTOR and dim != sig.n + 1:
            raise AlgebraError(f"paravector domain needs dim = n+1 = {sig.n + 1}, got {dim}")
        self.sig = sig
        self.domain = domain
        self.dim = dim
        self._fn = fn
        self._fn_batch = fn_batch
        self.label = label or "field"

    def __call__(self, point) -> Multivector:
        return self._fn(np.asarray(point, dtype=float))

    def eval_batch(self, points: np.ndarray) -> np.ndarray:
        """Coefficient rows for a stack of points."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self._fn_batch is not None:
            return self._fn_batch(points)
        return np.stack([self._fn(p).coeff for p in points])

    # -- pointwise combinators ------------------------------------------

    def _like(self, fn, fn_batch, label):
        return CliffordField(self.sig, self.domain, self.dim, fn, fn_batch, label)

    def _check_compatible(self, other: "CliffordField"):
        if (self.sig, self.domain, self.dim) != (other.sig, other.domain, other.dim):
            raise AlgebraError("fields live on different domains or algebras")

    def __add__(self, other: "CliffordField") -> "CliffordField":
        self._check_compatible(other)
        return self._like(
            lambda p: self(p) + other(p),
            lambda P: self.eval_batch(P) + other.eval_batch(P),
            f"({self.label}+{other.label})",
        )

    def __sub__(self, other: "CliffordField") -> "CliffordField":
        self._check_compatible(other)
        return self._like(
            lambda p: self(p) - other(p),
            lambda P: self.eval_batch(P) - other.eval_batch(P),
            f"({self.label}-{other.label})",
        )

    def __mul__(self, other):
        """Pointwise geometric product with a field, or scaling by a number."""
        if isinstance(other, (int, float)):
            c = float(other)
            return self._like(lambda p: self(p) * c,
                              lambda P: self.eval_batch(P) * c,
                              f"({self.label}*{c:g})")
        self._check_compatible(other)
        return self._like(
            lambda p: geometric_product(self(p), other(p)),
            lambda P: gp_batch(self.sig, self.eval_batch(P), other.eval_batch(P)),
            f"({self.label}*{other.label})",
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return NotImplemented

    def right_mul(self, c: Multivector) -> "CliffordField":
        """Pointwise f(x) * c; preserves left monogenicity."""
        return self._like(
            lambda p: geometric_product(self(p), c),
            lambda P: gp_batch(self.sig, self.eval_batch(P), c.coeff[None, :]),
            f"({self.label}*const)",
        )

    def left_mul(self, c: Multivector) -> "CliffordField":
        return self._like(
            lambda p: geometric_product(c, self(p)),
            lambda P: gp_batch(self.sig, np.broadcast_to(c.coeff, (P.shape[0], self.sig.dim)), self.eval_batch(P)),
            f"(const*{self.label})",
        )


def constant_field(sig: Signature, value: Multivector, domain: str = PARAVECTOR,
                   dim: int | None = None) -> CliffordField:
    if dim is None:
        dim = sig.n + 1 if domain == PARAVECTOR else sig.n
    return CliffordField(
        sig, domain, dim,
        lambda p: value,
        lambda P: np.broadcast_to(value.coeff, (P.shape[0], sig.dim)).copy(),
        label="const",
    )


# -- polynomial fields with exact derivatives ----------------------------

class PolynomialField(CliffordField):
    """Polynomial in the coordinates with multivector coefficients.

    ``terms`` maps an exponent tuple (one entry per coordinate) to a
    coefficient row.  Coordinates are scalars, so they commute with the
    coefficients and differentiation is plain term rewriting.
    """

    def __init__(self, sig: Signature, domain: str, dim: int, terms: dict,
                 label: str = ""):
        self.terms = {k: np.asarray(v, dtype=float) for k, v in terms.items()
                      if np.any(np.asarray(v) != 0.0)}
        super().__init__(sig, domain, dim, self._eval_point, self._eval_rows, label)

    def _eval_point(self, p: np.ndarray) -> Multivector:
        return Multivector(self.sig, self._eval_rows(p[None, :])[0])

    def _eval_rows(self, P: np.ndarray) -> np.ndarray:
        out = np.zeros((P.shape[0], self.sig.dim))
        for expo, coeff in self.terms.items():
            mono = np.ones(P.shape[0])
            for axis, k in enumerate(expo):
                if k:
                    mono = mono * P[:, axis] ** k
            out += mono[:, None] * coeff[None, :]
        return out

    def diff_exact(self, axis: int) -> "PolynomialField":
        """Exact partial derivative along one coordinate."""
        out: dict = {}
        for expo, coeff in self.terms.items():
            k = expo[axis]
            if k == 0:
                continue
            new = list(expo)
            new[axis] = k - 1
            key = tuple(new)
            out[key] = out.get(key, 0.0) + k * coeff
        return PolynomialField(self.sig, self.domain, self.dim, out,
                               label=f"d{axis}({self.label})")

    def gp_right(self, coeff_row: np.ndarray) -> "PolynomialField":
        out = {expo: gp_batch(self.sig, c[None, :], coeff_row[None, :])[0]
               for expo, c in self.terms.items()}
        return PolynomialField(self.sig, self.domain, self.dim, out, label=self.label)

    def gp_left(self, coeff_row: np.ndarray) -> "PolynomialField":
        out = {expo: gp_batch(self.sig, coeff_row[None, :], c[None, :])[0]
               for expo, c in self.terms.items()}
        return PolynomialField(self.sig, self.domain, self.dim, out, label=self.label)

    def poly_mul(self, other: "PolynomialField") -> "PolynomialField":
        self._check_compatible(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                prod = gp_batch(self.sig, c1[None, :], c2[None, :])[0]
                out[key] = out.get(key, 0.0) + prod
        return PolynomialField(self.sig, self.domain, self.dim, out,
                               label=f"({self.label}*{other.label})")

    def poly_add(self, other: "PolynomialField") -> "PolynomialField":
        self._check_compatible(other)
        out = dict(self.terms)
        for expo, coeff in other.terms.items():
            out[expo] = out.get(expo, np.zeros(self.sig.dim)) + coeff
        return PolynomialField(self.sig, self.domain, self.dim, out,
                               label=f"({self.label}+{other.label})")

    def scaled(self, c: float) -> "PolynomialField":
        return PolynomialField(self.sig, self.domain, self.dim,
                               {e: v * c for e, v in self.terms.items()}, label=self.label)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)


def poly_constant(sig: Signature, value: Multivector, domain: str = PARAVECTOR,
                  dim: int | None = None) -> PolynomialField:
    if dim is None:
        dim = sig.n + 1 if domain == PARAVECTOR else sig.n
    zero = (0,) * dim
    return PolynomialField(sig, domain, dim, {zero: value.coeff}, label="const")


def coordinate_field(sig: Signature, axis: int, domain: str = PARAVECTOR,
                     dim: int | None = None) -> PolynomialField:
    """The scalar coordinate x_axis as a polynomial field."""
    if dim is None:
        dim = sig.n + 1 if domain == PARAVECTOR else sig.n
    expo = [0] * dim
    expo[axis] = 1
    c = np.zeros(sig.dim)
    c[0] = 1.0
    return PolynomialField(sig, domain, dim, {tuple(expo): c}, label=f"x{axis}")


@dataclass(frozen=True)
class FueterIndex:
    """Multi-index alpha over the n hypercomplex variables."""

    alpha: tuple

    def __init__(self, alpha):
        object.__setattr__(self, "alpha", tuple(int(a) for a in alpha))
        if any(a < 0 for a in self.alpha):
            raise AlgebraError("multi-index entries must be nonnegative")
        if self.degree > MAX_FUETER_DEGREE:
            raise AlgebraError(
                f"multi-index degree {self.degree} exceeds cap {MAX_FUETER_DEGREE}")

    @property
    def degree(self) -> int:
        return sum(self.alpha)


def fueter_variable(sig: Signature, k: int) -> PolynomialField:
    """The monogenic coordinate z_k(x) = x_k - x_0 e_k on R^(n+1).

    D z_k = 0 exactly: d_0 contributes -e_k and e_k d_k contributes +e_k.
    """
    if not 1 <= k <= sig.n:
        raise AlgebraError(f"variable index must be in [1, {sig.n}], got {k}")
    dim = sig.n + 1
    ek = np.zeros(sig.dim)
    ek[1 << (k - 1)] = 1.0
    one = np.zeros(sig.dim)
    one[0] = 1.0
    e_k = tuple(1 if i == k else 0 for i in range(dim))
    e_0 = tuple(1 if i == 0 else 0 for i in range(dim))
    return PolynomialField(sig, PARAVECTOR, dim, {e_k: one, e_0: -ek}, label=f"z{k}")


def fueter_polynomial(sig: Signature, alpha: FueterIndex | tuple) -> PolynomialField:
    """Symmetrized product of Fueter variables over the multi-index.

    Averages the ordered products over the distinct orderings of the
    multiset {z_k with multiplicity alpha_k}; the empty index gives 1.
    The symmetrization is what keeps the product monogenic, since the z_k
    do not commute.
    """
    if not isinstance(alpha, FueterIndex):
        alpha = FueterIndex(alpha)
    if len(alpha.alpha) != sig.n:
        raise AlgebraError(f"multi-index length {len(alpha.alpha)} != n = {sig.n}")
    listing = []
    for k, mult in enumerate(alpha.alpha, start=1):
        listing.extend([k] * mult)
    if not listing:
        return poly_constant(sig, sig.scalar(1.0))
    zs = {k: fueter_variable(sig, k) for k in set(listing)}
    orderings = sorted(set(itertools.permutations(listing)))
    acc = None
    for order in orderings:
        prod = zs[order[0]]
        for k in order[1:]:
            prod = prod.poly_mul(zs[k])
        acc = prod if acc is None else acc.poly_add(prod)
    out = acc.scaled(1.0 / len(orderings))
    out.label = "V" + "".join(str(a) for a in alpha.alpha)
    return out


# -- stencil derivatives ---------------------------------------------------

def partial_derivative(f: CliffordField, axis: int, s: StencilSpec) -> CliffordField:
    """Central-difference partial along one coordinate, as a field."""
    offsets = _D1[s.order]

    def fn_batch(P):
        out = np.zeros((P.shape[0], f.sig.dim))
        for off, w in offsets:
            Q = P.copy()
            Q[:, axis] += off * s.h
            out += (w / s.h) * f.eval_batch(Q)
        return out

    return CliffordField(f.sig, f.domain, f.dim,
                         lambda p: Multivector(f.sig, fn_batch(p[None, :])[0]),
                         fn_batch, label=f"d{axis}({f.label})")


def second_derivative(f: CliffordField, axis: int, s: StencilSpec) -> CliffordField:
    offsets = _D2[s.order]

    def fn_batch(P):
        out = np.zeros((P.shape[0], f.sig.dim))
        for off, w in offsets:
            Q = P.copy()
            Q[:, axis] += off * s.h
            out += (w / (s.h * s.h)) * f.eval_batch(Q)
        return out

    return CliffordField(f.sig, f.domain, f.dim,
                         lambda p: Multivector(f.sig, fn_batch(p[None, :])[0]),
                         fn_batch, label=f"d{axis}2({f.label})")


def _left_generator_rows(sig: Signature):
    """Rows of e_j as coefficient arrays, j = 1..n."""
    rows = []
    for j in range(1, sig.n + 1):
        c = np.zeros(sig.dim)
        c[1 << (j - 1)] = 1.0
        rows.append(c)
    return rows


LEFT_D = "left-D"
LEFT_DBAR = "left-Dbar"


def apply_cr_operator(f: CliffordField, s: StencilSpec, side: str = LEFT_D) -> CliffordField:
    """d_0 f +/- sum_j e_j (d_j f) by central differences.

    ``left-D`` is the generalized Cauchy-Riemann (monogenicity) operator,
    ``left-Dbar`` its conjugate; D Dbar = Laplacian on R^(n+1).
    """
    if f.domain != PARAVECTOR:
        raise AlgebraError("the Cauchy-Riemann operator needs a paravector-domain field")
    if side not in (LEFT_D, LEFT_DBAR):
        raise AlgebraError(f"unknown side {side!r}")
    sgn = 1.0 if side == LEFT_D else -1.0
    gens = _left_generator_rows(f.sig)
    parts = [partial_derivative(f, axis, s) for axis in range(f.dim)]

    def fn_batch(P):
        out = parts[0].eval_batch(P)
        for j, gen in enumerate(gens):
            dj = parts[j + 1].eval_batch(P)
            out += sgn * gp_batch(f.sig, gen[None, :], dj)
        return out

    return CliffordField(f.sig, f.domain, f.dim,
                         lambda p: Multivector(f.sig, fn_batch(p[None, :])[0]),
                         fn_batch, label=f"{side}({f.label})")


def apply_cr_exact(f: PolynomialField, side: str = LEFT_D) -> PolynomialField:
    """Exact counterpart of apply_cr_operator on polynomial fields."""
    if f.domain != PARAVECTOR:
        raise AlgebraError("the Cauchy-Riemann operator needs a paravector-domain field")
    sgn = 1.0 if side == LEFT_D else -1.0
    out = f.diff_exact(0)
    for j, gen in enumerate(_left_generator_rows(f.sig)):
        out = out.poly_add(f.diff_exact(j + 1).gp_left(sgn * gen))
    out.label = f"{side}_exact({f.label})"
    return out


def apply_dirac(f: CliffordField, s: StencilSpec) -> CliffordField:
    """sum_i e_i d_i f for vector-domain fields on R^d."""
    if f.domain != VECTOR:
        raise AlgebraError("the Dirac operator needs a vector-domain field on R^d")
    if f.dim > f.sig.n:
        raise AlgebraError("vector domain dimension exceeds generator count")
    gens = _left_generator_rows(f.sig)
    parts = [partial_derivative(f, axis, s) for axis in range(f.dim)]

    def fn_batch(P):
        out = np.zeros((P.shape[0], f.sig.dim))
        for i in range(f.dim):
            out += gp_batch(f.sig, gens[i][None, :], parts[i].eval_batch(P))
        return out

    return CliffordField(f.sig, f.domain, f.dim,
                         lambda p: Multivector(f.sig, fn_batch(p[None, :])[0]),
                         fn_batch, label=f"dirac({f.label})")


def monogenic_residual(f: CliffordField, points, s: StencilSpec) -> float:
    """max_p || (D f)(p) || over the sample points."""
    df = apply_cr_operator(f, s, LEFT_D)
    vals = df.eval_batch(np.atleast_2d(points))
    return float(np.max(np.linalg.norm(vals, axis=1)))


def laplacian(f: CliffordField, s: StencilSpec) -> CliffordField:
    parts = [second_derivative(f, axis, s) for axis in range(f.dim)]

    def fn_batch(P):
        out = parts[0].eval_batch(P)
        for p in parts[1:]:
            out += p.eval_batch(P)
        return out

    return CliffordField(f.sig, f.domain, f.dim,
                         lambda p: Multivector(f.sig, fn_batch(p[None, :])[0]),
                         fn_batch, label=f"lap({f.label})")


def factorization_check(f: CliffordField, points, s: StencilSpec) -> float:
    """max_p || D(Dbar f) - Lap f ||: the factorization D Dbar = Lap.

    Exact to stencil accuracy for sign=-1 paravector fields; order-4
    stencils differentiate degree-<=4 polynomials exactly up to roundoff.
    """
    ddbar = apply_cr_operator(apply_cr_operator(f, s, LEFT_DBAR), s, LEFT_D)
    lap = laplacian(f, s)
    P = np.atleast_2d(points)
    diff = ddbar.eval_batch(P) - lap.eval_batch(P)
    return float(np.max(np.linalg.norm(diff, axis=1)))


@dataclass
class WeierstrassRecord:
    """Outcome of a uniform-limit check for a sequence of monogenic fields."""

    sup_distances: list  # one array per compact, indexed by sequence member
    derivative_sup: list  # same layout, max over multi-indices |beta| <= 2
    limit_residual: float
    precondition_ok: bool
    member_residuals: list = dc_field(default_factory=list)

    def distances_monotone(self, noise_floor: float = 1e-13) -> bool:
        for d in self.sup_distances:
            if np.any(np.diff(d) > noise_floor):
                return False
        return True

    def derivatives_converge(self, factor: float = 0.5, noise_floor: float = 1e-12) -> bool:
        for d in self.derivative_sup:
            if d[-1] > noise_floor and d[-1] > factor * d[0]:
                return False
        return True


def _sup_distance(f: CliffordField, g: CliffordField, points: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(f.eval_batch(points) - g.eval_batch(points), axis=1)))


def weierstrass_limit_check(seq, f_limit: CliffordField, compacts, s: StencilSpec,
                            mono_tol: float = 1e-7) -> WeierstrassRecord:
    """Check that a monogenic sequence converges to a monogenic limit.

    Records sup-norm distances per compact, the limit's monogenicity
    residual, and sup norms of d^beta(f_k - f_limit) for |beta| <= 2.
    A non-monogenic sequence member marks the precondition failed rather
    than raising.
    """
    compacts = [np.atleast_2d(c) for c in compacts]
    member_residuals = [monogenic_residual(fk, compacts[0], s) for fk in seq]
    precondition_ok = all(r <= mono_tol for r in member_residuals)

    sup_distances = [np.array([_sup_distance(fk, f_limit, pts) for fk in seq])
                     for pts in compacts]

    dim = f_limit.dim
    betas = [b for b in itertools.product(range(3), repeat=dim) if 0 < sum(b) <= 2]

    def apply_beta(g, beta):
        out = g
        for axis, k in enumerate(beta):
            for _ in range(k):
                out = partial_derivative(out, axis, s)
        return out

    derivative_sup = []
    for pts in compacts:
        rows = []
        for fk in seq:
            worst = 0.0
            for beta in betas:
                d = _sup_distance(apply_beta(fk, beta), apply_beta(f_limit, beta), pts)
                worst = max(worst, d)
            rows.append(worst)
        derivative_sup.append(np.array(rows))

    limit_residual = monogenic_residual(f_limit, np.vstack(compacts), s)
    return WeierstrassRecord(sup_distances, derivative_sup, limit_residual,
                             precondition_ok, member_residuals)


def identity_paravector_field(sig: Signature) -> PolynomialField:
    """f(y) = y as a paravector-valued polynomial field; D y = 1 - n."""
    dim = sig.n + 1
    one = np.zeros(sig.dim)
    one[0] = 1.0
    terms = {tuple(1 if i == 0 else 0 for i in range(dim)): one}
    for j in range(1, dim):
        ej = np.zeros(sig.dim)
        ej[1 << (j - 1)] = 1.0
        terms[tuple(1 if i == j else 0 for i in range(dim))] = ej
    return PolynomialField(sig, PARAVECTOR, dim, terms, label="y")


def exponential_scalar_field(sig: Signature, direction, coeff: Multivector,
                             domain: str = PARAVECTOR) -> CliffordField:
    """exp(<direction, x>) * coeff, a smooth non-polynomial probe field."""
    direction = np.asarray(direction, dtype=float)
    dim = len(direction)

    def fn_batch(P):
        expo = np.exp(P @ direction)
        return expo[:, None] * coeff.coeff[None, :]

    return CliffordField(sig, domain, dim,
                         lambda p: Multivector(sig, math.exp(float(p @ direction)) * coeff.coeff),
                         fn_batch, label="exp")
