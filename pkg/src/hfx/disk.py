"""Unit-disk realization of the group-representation function theory.

The group SU(1,1) acts on the closed disk by fractional-linear maps; its
boundary action on equispaced circle grids gives unitary representations
with a weight cocycle.  Weight 1 acts unitarily on L2 of the circle and
its Hardy subspace reproduces the classical Cauchy integral through the
wavelet transform against the transported vacuum f_0 = 1.  Weight 2 is
the square-integrable representation whose coherent-state group integral
synthesizes the Bergman kernel; the weight-1 version of that integral
diverges logarithmically and is kept as a documented negative experiment.

Grids are power-of-two circle samplings; spectral (FFT) interpolation
resamples transformed functions, with corpora kept band-limited well
under the Nyquist range so aliasing stays at roundoff.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraError

MIN_GRID = 64
MAX_GRID = 65536

#: relative magnitude below which Fourier coefficients are dropped when
#: resampling; sits above the FFT roundoff floor (~1e-16 relative) so pure
#: noise frequencies are not interpolated, and the dropped L2 mass stays
#: under sqrt(N) * trim ~ 3e-14, clear of every 1e-10 tolerance
COEFF_TRIM = 5e-16

#: evaluation guard for the boundary Cauchy integral
DISK_EVAL_RADIUS = 0.95


class PoleOnCircleError(AlgebraError):
    """Fractional-linear denominator vanished (needs |z| > 1)."""


@dataclass(frozen=True)
class SU11Element:
    """Matrix [[alpha, beta], [conj(beta), conj(alpha)]] with unit determinant.

    Construction renormalizes so |alpha|^2 - |beta|^2 = 1; inputs with
    |alpha| <= |beta| are rejected (they do not map the disk to itself).
    """

    alpha: complex
    beta: complex

    def __init__(self, alpha: complex, beta: complex):
        det = abs(alpha) ** 2 - abs(beta) ** 2
        if det <= 0:
            raise AlgebraError(f"|alpha|^2 - |beta|^2 must be positive, got {det:g}")
        scale = 1.0 / math.sqrt(det)
        object.__setattr__(self, "alpha", complex(alpha) * scale)
        object.__setattr__(self, "beta", complex(beta) * scale)

    @classmethod
    def identity(cls) -> "SU11Element":
        return cls(1.0, 0.0)

    @classmethod
    def section(cls, w: complex) -> "SU11Element":
        """The coset representative g_w with real positive alpha: g_w(0) = w."""
        w = complex(w)
        if abs(w) >= 1.0:
            raise AlgebraError(f"section point must be inside the disk, got |w| = {abs(w):g}")
        a = 1.0 / math.sqrt(1.0 - abs(w) ** 2)
        return cls(a, a * w)

    @classmethod
    def rotation(cls, phi: float) -> "SU11Element":
        return cls(cmath.exp(1j * phi), 0.0)

    def inverse(self) -> "SU11Element":
        return SU11Element(self.alpha.conjugate(), -self.beta)

    def compose(self, other: "SU11Element") -> "SU11Element":
        """Matrix product; the action is a left action of the product."""
        a = self.alpha * other.alpha + self.beta * other.beta.conjugate()
        b = self.alpha * other.beta + self.beta * other.alpha.conjugate()
        return SU11Element(a, b)


def mobius_disk(g: SU11Element, z: complex) -> complex:
    """(alpha z + beta) / (conj(beta) z + conj(alpha)); disk and circle stable."""
    den = g.beta.conjugate() * z + g.alpha.conjugate()
    if abs(den) < 1e-14:
        raise PoleOnCircleError(f"denominator vanished at z = {z}")
    return (g.alpha * z + g.beta) / den


@dataclass(frozen=True)
class CircleGrid:
    """Complex samples at the N-th roots of unity, N a power of two."""

    values: np.ndarray

    def __init__(self, values):
        values = np.asarray(values, dtype=complex)
        n = len(values)
        if n < MIN_GRID or n > MAX_GRID or (n & (n - 1)) != 0:
            raise AlgebraError(
                f"grid size must be a power of two in [{MIN_GRID}, {MAX_GRID}], got {n}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def N(self) -> int:
        return len(self.values)

    @classmethod
    def nodes(cls, N: int) -> np.ndarray:
        return np.exp(2j * math.pi * np.arange(N) / N)

    @classmethod
    def from_function(cls, N: int, fn) -> "CircleGrid":
        return cls(fn(cls.nodes(N)))

    @classmethod
    def from_coefficients(cls, N: int, coeffs: dict) -> "CircleGrid":
        """Sum of c_m z^m over integer frequencies m (negative allowed)."""
        z = cls.nodes(N)
        vals = np.zeros(N, dtype=complex)
        for m, c in coeffs.items():
            vals += c * z ** m
        return cls(vals)

    def spectrum(self) -> np.ndarray:
        """Normalized FFT: index k holds frequency k for k < N/2, else k - N."""
        return np.fft.fft(self.values) / self.N

    def norm(self) -> float:
        """L2(S^1, dtheta/2pi) norm on the grid."""
        return math.sqrt(float(np.mean(np.abs(self.values) ** 2)))

    def inner(self, other: "CircleGrid") -> complex:
        if self.N != other.N:
            raise AlgebraError("grids have different sizes")
        return complex(np.mean(self.values * np.conj(other.values)))


@dataclass(frozen=True)
class HardyFunction:
    """Circle grid whose negative-frequency coefficients vanish."""

    grid: CircleGrid

    def __init__(self, grid: CircleGrid, tol: float = 1e-12):
        spec = grid.spectrum()
        neg = np.linalg.norm(spec[grid.N // 2:])
        scale = max(np.linalg.norm(spec), 1e-300)
        if neg > tol * scale:
            raise AlgebraError(
                f"negative-frequency content {neg / scale:.3g} exceeds {tol:g}")
        object.__setattr__(self, "grid", grid)

    @property
    def N(self) -> int:
        return self.grid.N


def hardy_project(f: CircleGrid) -> HardyFunction:
    """Zero the negative-frequency coefficients; idempotent and self-adjoint."""
    spec = np.fft.fft(f.values)
    spec[f.N // 2:] = 0.0
    return HardyFunction(CircleGrid(np.fft.ifft(spec)))


def _significant_coefficients(f: CircleGrid):
    spec = f.spectrum()
    freqs = np.fft.fftfreq(f.N, d=1.0 / f.N).astype(int)
    keep = np.abs(spec) > COEFF_TRIM * max(np.max(np.abs(spec)), 1e-300)
    return freqs[keep], spec[keep]


def evaluate_extension(f: CircleGrid | HardyFunction, points) -> np.ndarray:
    """Evaluate the trigonometric interpolant at arbitrary complex points.

    For Hardy functions and |point| < 1 this is the holomorphic extension.
    Evaluation is Horner recursion over the dense frequency range of the
    significant coefficients, in z for m >= 0 and in 1/z for m < 0.
    """
    grid = f.grid if isinstance(f, HardyFunction) else f
    freqs, coeffs = _significant_coefficients(grid)
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    out = np.zeros(len(points), dtype=complex)
    if len(freqs) == 0:
        return out
    pos = freqs >= 0
    if np.any(pos):
        dense = np.zeros(int(freqs[pos].max()) + 1, dtype=complex)
        dense[freqs[pos]] = coeffs[pos]
        for c in dense[::-1]:
            out = out * points + c
    if np.any(~pos):
        inv = 1.0 / points
        dense = np.zeros(int(-freqs[~pos].min()), dtype=complex)
        dense[-freqs[~pos] - 1] = coeffs[~pos]
        neg = np.zeros(len(points), dtype=complex)
        for c in dense[::-1]:
            neg = neg * inv + c
        out = out + neg * inv
    return out


def pi_action(g: SU11Element, f: CircleGrid, weight: int = 1) -> CircleGrid:
    """[pi(g) f](z) = (-conj(beta) z + alpha)^(-weight) f(g^{-1} z).

    Weight 1 is unitary on L2 of the circle: the cocycle modulus squared
    is exactly the boundary Jacobian of the action.  Resampling is
    spectral, via the trigonometric interpolant of f.
    """
    if weight not in (1, 2):
        raise AlgebraError(f"weight must be 1 or 2, got {weight}")
    z = CircleGrid.nodes(f.N)
    den = -g.beta.conjugate() * z + g.alpha
    pulled = (g.alpha.conjugate() * z - g.beta) / den
    vals = den ** (-weight) * evaluate_extension(f, pulled)
    return CircleGrid(vals)


def vacuum_state(N: int) -> HardyFunction:
    """f_0 = 1, the constant vacuum."""
    return HardyFunction(CircleGrid(np.ones(N, dtype=complex)))


def coherent_state(w: complex, N: int, weight: int = 1) -> CircleGrid:
    """pi(g_w) f_0 in closed form: (1-|w|^2)^(weight/2) (1 - conj(w) z)^(-weight)."""
    z = CircleGrid.nodes(N)
    return CircleGrid((1.0 - abs(w) ** 2) ** (weight / 2.0)
                      * (1.0 - np.conj(w) * z) ** (-float(weight)))


def wavelet_transform(f: HardyFunction, g: SU11Element) -> complex:
    """<f, pi(g) f_0> on L2(S^1, dtheta/2pi).

    For the section g_w this equals (1-|w|^2)^(1/2) f(w), with f(w) the
    holomorphic extension; i.e. the Cauchy integral with the square-root
    weight factor.
    """
    z = CircleGrid.nodes(f.N)
    state = (-g.beta.conjugate() * z + g.alpha) ** (-1.0)
    return complex(np.mean(f.grid.values * np.conj(state)))


def cauchy_integral_disk(f: CircleGrid, y: complex, warn: list | None = None) -> complex:
    """Trapezoidal (1/2 pi i) contour integral of f(t)/(t - y) over the circle.

    Spectrally accurate for |y| <= DISK_EVAL_RADIUS; beyond that an
    accuracy flag is appended to ``warn`` (when given).
    """
    y = complex(y)
    if abs(y) > DISK_EVAL_RADIUS and warn is not None:
        warn.append(f"evaluation at |y| = {abs(y):.3g} exceeds the accuracy "
                    f"guard {DISK_EVAL_RADIUS}")
    z = CircleGrid.nodes(f.N)
    return complex(np.mean(f.values * z / (z - y)))


def taylor_coefficients(f: HardyFunction, K: int) -> np.ndarray:
    """First K Fourier coefficients; the power-series coefficients of f."""
    if K > f.N // 2:
        raise AlgebraError(f"K = {K} exceeds N/2 = {f.N // 2}")
    return f.grid.spectrum()[:K].copy()


def taylor_partial_sum(coeffs: np.ndarray, y: complex) -> complex:
    return complex(np.polyval(coeffs[::-1], y))


# -- reproducing-kernel group integral ------------------------------------

GRID_SAMPLER = "grid"
MC_SAMPLER = "monte-carlo"


@dataclass(frozen=True)
class KernelSampler:
    """How to integrate over the disk section of the group."""

    kind: str = MC_SAMPLER
    size: int = 100_000
    seed: int = 0
    r_max: float = 0.99

    def __post_init__(self):
        if self.kind not in (GRID_SAMPLER, MC_SAMPLER):
            raise AlgebraError(f"unknown sampler kind {self.kind!r}")
        if not 0 < self.r_max < 1:
            raise AlgebraError(f"r_max must be in (0, 1), got {self.r_max}")
        if self.size < 1:
            raise AlgebraError("sampler size must be positive")


def _sampler_points(sampler: KernelSampler, stream: int = 0):
    """Disk points and quadrature weights w.r.t. plain area measure dA."""
    if sampler.kind == GRID_SAMPLER:
        m_r = max(4, int(math.sqrt(sampler.size / 2)))
        m_t = 2 * m_r
        t, wt = np.polynomial.legendre.leggauss(m_r)
        rho = 0.5 * sampler.r_max * (t + 1.0)
        wr = 0.5 * sampler.r_max * wt * rho
        theta = 2.0 * math.pi * np.arange(m_t) / m_t
        pts = (rho[:, None] * np.exp(1j * theta)[None, :]).ravel()
        wts = (wr[:, None] * np.full(m_t, 2.0 * math.pi / m_t)[None, :]).ravel()
        return pts, wts
    seq = np.random.SeedSequence(entropy=sampler.seed, spawn_key=(stream,))
    rng = np.random.Generator(np.random.Philox(seq))
    u = rng.random(sampler.size)
    phi = rng.random(sampler.size) * 2.0 * math.pi
    pts = sampler.r_max * np.sqrt(u) * np.exp(1j * phi)
    area = math.pi * sampler.r_max**2
    wts = np.full(sampler.size, area / sampler.size)
    return pts, wts


def bergman_kernel_raw(x: complex, y: complex, sampler: KernelSampler,
                       stream: int = 0) -> complex:
    """Group integral of the weight-2 coherent-state product, unnormalized.

    integral over the section of [pi_g f_0](x) conj([pi_g f_0](y)) with
    invariant measure dA(w)/(1-|w|^2)^2; the (1-|w|^2)^2 state norms
    cancel the measure density, leaving dA / ((1-conj(w)x)^2 (1-w conj(y))^2).
    Truncated oracle: pi r^2 / (1 - x conj(y) r^2)^2 for |w| < r.
    """
    w, wt = _sampler_points(sampler, stream)
    vals = 1.0 / ((1.0 - np.conj(w) * x) ** 2 * (1.0 - w * np.conj(y)) ** 2)
    return complex(np.sum(wt * vals))


def bergman_kernel_mc_error(x: complex, y: complex, sampler: KernelSampler,
                            stream: int = 0) -> tuple:
    """Monte-Carlo estimate plus a standard-error report."""
    if sampler.kind != MC_SAMPLER:
        return bergman_kernel_raw(x, y, sampler, stream), 0.0
    w, wt = _sampler_points(sampler, stream)
    vals = wt * len(w) / ((1.0 - np.conj(w) * x) ** 2 * (1.0 - w * np.conj(y)) ** 2)
    est = complex(np.mean(vals))
    stderr = float(np.std(vals) / math.sqrt(len(vals)))
    return est, stderr


def bergman_oracle_truncated(x: complex, y: complex, r_max: float) -> complex:
    """Exact integral over |w| < r_max (termwise power-series evaluation)."""
    q = x * np.conj(y) * r_max**2
    return math.pi * r_max**2 / (1.0 - q) ** 2


def bergman_kernel_group_integral(x: complex, y: complex,
                                  sampler: KernelSampler,
                                  reference: tuple = (0.0, 0.0)) -> complex:
    """Normalized reproducing kernel: proportional value / constant at reference.

    The raw integral is proportional to 1/(1 - x conj(y))^2; dividing by
    the estimate at the reference pair (scaled by its own kernel factor)
    removes the proportionality constant.
    """
    if abs(x) > 0.8 or abs(y) > 0.8:
        raise AlgebraError("kernel integral is guarded to |x|, |y| <= 0.8")
    raw = bergman_kernel_raw(x, y, sampler)
    x0, y0 = reference
    c = bergman_kernel_raw(x0, y0, sampler) * (1.0 - x0 * np.conj(y0)) ** 2
    return complex(raw / c)


def szego_weight1_raw(x: complex, y: complex, sampler: KernelSampler) -> complex:
    """The same group integral with weight-1 states.

    The integrand keeps one power of (1-|w|^2) in the denominator, so the
    full-group integral diverges logarithmically; values grow like
    -log(1 - r_max^2) as the cutoff rises.
    """
    w, wt = _sampler_points(sampler)
    vals = 1.0 / ((1.0 - np.abs(w) ** 2)
                  * (1.0 - np.conj(w) * x) * (1.0 - w * np.conj(y)))
    return complex(np.sum(wt * vals))
