"""Exact arithmetic in finite-dimensional real Clifford algebras.

Basis blades are indexed by bitmasks over the generators e_1..e_n: bit
(j-1) of the index is set iff e_j divides the blade, so index 0 is the
scalar unit and index 2^n - 1 the pseudoscalar.  The product of two
blades is the blade of the symmetric difference of their index sets, with
an integer sign obtained by transposition counting plus one factor of the
generator square for every common generator.  All structure constants are
therefore exact; floating error enters only through coefficients.

Both generator conventions e_j^2 = +1 and e_j^2 = -1 are supported; each
module built on top fixes the convention it needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_GENERATORS = 4

#: products of elements with coefficient norm below this count as singular
SINGULAR_EPS = 1e-14

#: relative truncation tolerance for the exponential power series
EXP_SERIES_RTOL = 1e-16
EXP_SERIES_MAX_TERMS = 200


class AlgebraError(ValueError):
    """Base class for Clifford-algebra usage errors."""


class SignatureMismatch(AlgebraError):
    """Operands live in different algebras."""


class SingularElement(AlgebraError):
    """Inversion was requested for a (numerically) non-invertible element."""


@dataclass(frozen=True)
class Signature:
    """Generator count and the common square of the generators.

    ``sign=+1`` gives e_j e_k + e_k e_j = 2 delta_jk, ``sign=-1`` the
    negative-definite convention used by the Cauchy-kernel machinery.
    """

    n: int
    sign: int = -1

    def __post_init__(self):
        if not 1 <= self.n <= MAX_GENERATORS:
            raise AlgebraError(f"generator count must be in [1, {MAX_GENERATORS}], got {self.n}")
        if self.sign not in (+1, -1):
            raise AlgebraError(f"generator square must be +1 or -1, got {self.sign}")

    @property
    def dim(self) -> int:
        return 1 << self.n

    # -- constructors -------------------------------------------------

    def zero(self) -> "Multivector":
        return Multivector(self, np.zeros(self.dim))

    def scalar(self, value: float) -> "Multivector":
        c = np.zeros(self.dim)
        c[0] = value
        return Multivector(self, c)

    def e(self, j: int) -> "Multivector":
        """The generator e_j, 1-based."""
        if not 1 <= j <= self.n:
            raise AlgebraError(f"generator index must be in [1, {self.n}], got {j}")
        c = np.zeros(self.dim)
        c[1 << (j - 1)] = 1.0
        return Multivector(self, c)

    def blade(self, indices, coeff: float = 1.0) -> "Multivector":
        """Basis blade e_{i1} e_{i2} ... for strictly increasing indices."""
        mask = 0
        prev = 0
        for j in indices:
            if not 1 <= j <= self.n:
                raise AlgebraError(f"generator index must be in [1, {self.n}], got {j}")
            if j <= prev:
                raise AlgebraError("blade indices must be strictly increasing")
            mask |= 1 << (j - 1)
            prev = j
        c = np.zeros(self.dim)
        c[mask] = coeff
        return Multivector(self, c)

    def from_vector(self, xv) -> "Multivector":
        """Embed a coefficient list as the grade-1 element sum x_j e_j."""
        xv = np.asarray(xv, dtype=float)
        if xv.shape != (self.n,):
            raise AlgebraError(f"expected {self.n} vector components, got shape {xv.shape}")
        c = np.zeros(self.dim)
        for j in range(self.n):
            c[1 << j] = xv[j]
        return Multivector(self, c)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _blade_product_sign(a: int, b: int, sign: int) -> int:
    """Integer sign of e_A e_B: transposition count plus squared generators."""
    swaps = 0
    t = a >> 1
    while t:
        swaps += _popcount(t & b)
        t >>= 1
    s = -1 if swaps & 1 else 1
    if sign < 0 and (_popcount(a & b) & 1):
        s = -s
    return s


@lru_cache(maxsize=None)
def _tables(n: int, sign: int):
    """Cayley tensor and involution sign vectors for Cl with n generators."""
    dim = 1 << n
    cayley = np.zeros((dim, dim, dim))
    for a in range(dim):
        for b in range(dim):
            cayley[a, b, a ^ b] = _blade_product_sign(a, b, sign)
    grades = np.array([_popcount(i) for i in range(dim)])
    grade_inv = np.where(grades % 2 == 0, 1.0, -1.0)
    reversion = np.where((grades * (grades - 1) // 2) % 2 == 0, 1.0, -1.0)
    conjugation = grade_inv * reversion
    return {
        "cayley": cayley,
        "grades": grades,
        "grade": grade_inv,
        "reversion": reversion,
        "conjugation": conjugation,
    }


class Multivector:
    """Immutable element of a real Clifford algebra.

    Coefficients are stored densely, indexed by blade bitmask.  Arithmetic
    returns new instances; operands must share a Signature.
    """

    __slots__ = ("sig", "coeff")

    def __init__(self, sig: Signature, coeff):
        coeff = np.asarray(coeff, dtype=float)
        if coeff.shape != (sig.dim,):
            raise AlgebraError(f"expected {sig.dim} coefficients, got shape {coeff.shape}")
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeff", coeff)
        coeff.setflags(write=False)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # -- helpers -------------------------------------------------------

    def _check_sig(self, other: "Multivector"):
        if self.sig != other.sig:
            raise SignatureMismatch(
                f"operands have different signatures: {self.sig} vs {other.sig}"
            )

    @property
    def scalar_part(self) -> float:
        return float(self.coeff[0])

    def vector_part(self) -> np.ndarray:
        """Grade-1 coefficients as a plain length-n array."""
        return np.array([self.coeff[1 << j] for j in range(self.sig.n)])

    def grade_projection(self, k: int) -> "Multivector":
        t = _tables(self.sig.n, self.sig.sign)
        out = np.where(t["grades"] == k, self.coeff, 0.0)
        return Multivector(self.sig, out)

    def max_grade_defect(self, k: int) -> float:
        """Norm of everything outside grade k."""
        t = _tables(self.sig.n, self.sig.sign)
        return float(np.linalg.norm(np.where(t["grades"] == k, 0.0, self.coeff)))

    # -- ring operations -----------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = self.sig.scalar(float(other))
        self._check_sig(other)
        return Multivector(self.sig, self.coeff + other.coeff)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = self.sig.scalar(float(other))
        self._check_sig(other)
        return Multivector(self.sig, self.coeff - other.coeff)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return Multivector(self.sig, -self.coeff)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Multivector(self.sig, self.coeff * float(other))
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Multivector(self.sig, self.coeff * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Multivector(self.sig, self.coeff / float(other))
        return NotImplemented

    # -- involutions and norms ------------------------------------------

    def reverse(self) -> "Multivector":
        return involution(self, "reversion")

    def conjugate(self) -> "Multivector":
        return involution(self, "conjugation")

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeff))

    def inverse(self, eps: float = SINGULAR_EPS) -> "Multivector":
        """Two-sided inverse via the left-regular representation.

        Solves (left multiplication by self) v = 1.  In an associative
        unital algebra a right inverse obtained this way is two-sided.
        """
        t = _tables(self.sig.n, self.sig.sign)
        lmat = np.einsum("i,ijk->kj", self.coeff, t["cayley"])
        rhs = np.zeros(self.sig.dim)
        rhs[0] = 1.0
        try:
            sol = np.linalg.solve(lmat, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularElement(f"element is not invertible: {self!r}") from exc
        if not np.all(np.isfinite(sol)) or np.linalg.norm(sol) * eps > 1.0 + np.linalg.norm(sol):
            raise SingularElement(f"element is numerically singular: {self!r}")
        return Multivector(self.sig, sol)

    # -- misc ------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Multivector)
            and self.sig == other.sig
            and np.array_equal(self.coeff, other.coeff)
        )

    def __hash__(self):
        return hash((self.sig, self.coeff.tobytes()))

    def __repr__(self):
        terms = []
        for idx in range(self.sig.dim):
            c = self.coeff[idx]
            if c == 0.0:
                continue
            if idx == 0:
                terms.append(f"{c:g}")
            else:
                name = "e" + "".join(str(j + 1) for j in range(self.sig.n) if idx >> j & 1)
                terms.append(f"{c:g}*{name}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} | n={self.sig.n}, e^2={self.sig.sign:+d}>"


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    """Associative bilinear product with e_j e_k + e_k e_j = 2*sign*delta_jk."""
    a._check_sig(b)
    t = _tables(a.sig.n, a.sig.sign)
    out = np.einsum("i,j,ijk->k", a.coeff, b.coeff, t["cayley"])
    return Multivector(a.sig, out)


_INVOLUTION_KINDS = ("grade", "reversion", "conjugation")


def involution(a: Multivector, kind: str) -> Multivector:
    """Grade involution, reversion, or their composition (conjugation).

    A grade-k blade is scaled by (-1)^k, (-1)^(k(k-1)/2), or the product of
    both, respectively.
    """
    if kind not in _INVOLUTION_KINDS:
        raise AlgebraError(f"unknown involution {kind!r}; expected one of {_INVOLUTION_KINDS}")
    t = _tables(a.sig.n, a.sig.sign)
    return Multivector(a.sig, a.coeff * t[kind])


def norm(a: Multivector) -> float:
    """Euclidean norm of the coefficient vector.

    Submultiplicative up to the dimension constant 2^(n/2):
    ||ab|| <= 2^(n/2) ||a|| ||b||, since every column of the left-regular
    matrix of ``a`` is a signed permutation of a's coefficients.
    """
    return a.norm()


def clifford_exp(a: Multivector) -> Multivector:
    """Exponential by power series, with closed forms when a^2 is scalar.

    For a^2 = s: cosh/sinh branch for s > 0, cos/sin for s < 0, 1 + a for
    s = 0.  Otherwise the series runs until the term norm drops below
    EXP_SERIES_RTOL relative to the partial sum.
    """
    sq = geometric_product(a, a)
    off_scalar = np.linalg.norm(sq.coeff[1:])
    scale = max(1.0, float(np.abs(sq.coeff[0])))
    if off_scalar <= 1e-15 * scale:
        s = sq.scalar_part
        if s > 0:
            r = math.sqrt(s)
            return a.sig.scalar(math.cosh(r)) + a * (math.sinh(r) / r)
        if s < 0:
            r = math.sqrt(-s)
            return a.sig.scalar(math.cos(r)) + a * (math.sin(r) / r)
        return a.sig.scalar(1.0) + a
    total = a.sig.scalar(1.0)
    term = a.sig.scalar(1.0)
    for k in range(1, EXP_SERIES_MAX_TERMS + 1):
        term = geometric_product(term, a) / k
        total = total + term
        if term.norm() <= EXP_SERIES_RTOL * max(total.norm(), 1.0):
            break
    return total


@dataclass(frozen=True)
class Paravector:
    """The element x_0 + sum_j x_j e_j identifying a point of R^(n+1).

    Signature-agnostic; operations that need products take one explicitly.
    For sign=-1 the conjugate satisfies x conj(x) = |x|^2 exactly.
    """

    x0: float
    xv: tuple

    def __init__(self, x0: float, xv):
        object.__setattr__(self, "x0", float(x0))
        object.__setattr__(self, "xv", tuple(float(v) for v in xv))
        if not 1 <= len(self.xv) <= MAX_GENERATORS:
            raise AlgebraError(f"paravector needs 1..{MAX_GENERATORS} vector components")

    @classmethod
    def from_point(cls, point) -> "Paravector":
        point = np.asarray(point, dtype=float)
        return cls(point[0], point[1:])

    @property
    def n(self) -> int:
        return len(self.xv)

    def as_point(self) -> np.ndarray:
        return np.array((self.x0,) + self.xv)

    def as_multivector(self, sig: Signature) -> Multivector:
        if sig.n != self.n:
            raise SignatureMismatch(f"paravector has {self.n} components, signature {sig.n}")
        return sig.scalar(self.x0) + sig.from_vector(self.xv)

    def conjugate(self) -> "Paravector":
        return Paravector(self.x0, tuple(-v for v in self.xv))

    def abs(self) -> float:
        return math.sqrt(self.x0 * self.x0 + sum(v * v for v in self.xv))


def paravector_inverse(x: Paravector, sig: Signature | None = None,
                       eps: float = SINGULAR_EPS) -> Multivector:
    """conj(x) / |x|^2 in the sign=-1 convention, where it inverts x."""
    if sig is None:
        sig = Signature(x.n, -1)
    if sig.sign != -1:
        raise AlgebraError("paravector inversion by conjugation requires e_j^2 = -1")
    r = x.abs()
    if r <= eps:
        raise SingularElement(f"paravector norm {r:g} below epsilon {eps:g}")
    return x.conjugate().as_multivector(sig) / (r * r)


# -- batch kernels over (N, 2^n) coefficient arrays ----------------------
#
# The quadrature and sampling paths work on stacked coefficient arrays to
# stay vectorised; these helpers share the cached tables with Multivector.

def gp_batch(sig: Signature, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise geometric product of two (..., 2^n) coefficient arrays."""
    t = _tables(sig.n, sig.sign)
    return np.einsum("...i,...j,ijk->...k", a, b, t["cayley"])


def involution_batch(sig: Signature, a: np.ndarray, kind: str) -> np.ndarray:
    if kind not in _INVOLUTION_KINDS:
        raise AlgebraError(f"unknown involution {kind!r}")
    t = _tables(sig.n, sig.sign)
    return a * t[kind]


def paravectors_to_batch(sig: Signature, points: np.ndarray) -> np.ndarray:
    """Stack points of R^(n+1) (rows x0, x1..xn) into coefficient rows."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.zeros((points.shape[0], sig.dim))
    out[:, 0] = points[:, 0]
    for j in range(sig.n):
        out[:, 1 << j] = points[:, 1 + j]
    return out


def vectors_to_batch(sig: Signature, vectors: np.ndarray) -> np.ndarray:
    """Stack grade-1 coefficient rows from plain R^n rows."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    out = np.zeros((vectors.shape[0], sig.dim))
    for j in range(sig.n):
        out[:, 1 << j] = vectors[:, j]
    return out


def random_multivector(sig: Signature, rng, scale: float = 1.0) -> Multivector:
    """Dense random element with i.i.d. uniform coefficients in [-scale, scale]."""
    return Multivector(sig, rng.uniform(-scale, scale, sig.dim))


def is_clifford_group_element(b: Multivector, tol: float = 1e-10) -> bool:
    """True when b * conj(b) is a nonzero scalar, the Clifford-group norm test."""
    p = geometric_product(b, b.conjugate())
    off = np.linalg.norm(p.coeff[1:])
    return off <= tol * max(1.0, abs(p.scalar_part)) and abs(p.scalar_part) > SINGULAR_EPS
