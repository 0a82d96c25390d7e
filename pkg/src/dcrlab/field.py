"""Mixed-representation field: x1 grid (or its Fourier dual) times Hermite modes."""

import math
from dataclasses import dataclass, replace

import numpy as np

from .hermite import HermiteBasis, ladder_matrix

PHYSICAL = "physical_x1"
FOURIER = "fourier_x1"


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid on ``[-L, L)`` with ``n_points`` samples."""

    n_points: int
    half_length: float

    def __post_init__(self):
        n = self.n_points
        if int(n) != n or n < 8 or (int(n) & (int(n) - 1)):
            raise ValueError(f"n_points must be a power of two >= 8, got {n!r}")
        if not (math.isfinite(self.half_length) and self.half_length > 0):
            raise ValueError(f"half_length must be positive, got {self.half_length!r}")

    @property
    def spacing(self):
        return 2.0 * self.half_length / self.n_points

    @property
    def x(self):
        return -self.half_length + self.spacing * np.arange(self.n_points)

    @property
    def fourier_wavenumbers(self):
        """Wavenumbers ``pi k / L`` in FFT order (k = 0, 1, ..., -1)."""
        return (math.pi / self.half_length) * np.fft.fftfreq(self.n_points, 1.0 / self.n_points)

    @property
    def max_wavenumber(self):
        return math.pi * self.n_points / (2.0 * self.half_length)


@dataclass(frozen=True)
class Field:
    """Simulation state. ``coeffs[j, n]`` is the mode-``n`` amplitude at x1 point ``j``.

    In the ``fourier_x1`` representation axis 0 holds the unnormalised DFT
    of the physical rows.
    """

    grid: Grid1D
    basis: HermiteBasis
    coeffs: np.ndarray
    representation: str = PHYSICAL

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.n_points, self.basis.n_modes):
            raise ValueError(f"coeffs shape {c.shape} does not match grid/basis "
                             f"({self.grid.n_points}, {self.basis.n_modes})")
        if self.representation not in (PHYSICAL, FOURIER):
            raise ValueError(f"unknown representation {self.representation!r}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, grid, basis):
        return cls(grid, basis, np.zeros((grid.n_points, basis.n_modes), dtype=np.complex128))

    def with_coeffs(self, coeffs, representation=None):
        return replace(self, coeffs=coeffs, representation=representation or self.representation)

    def physical(self):
        if self.representation == PHYSICAL:
            return self
        return self.with_coeffs(np.fft.ifft(self.coeffs, axis=0), PHYSICAL)

    def fourier(self):
        if self.representation == FOURIER:
            return self
        return self.with_coeffs(np.fft.fft(self.coeffs, axis=0), FOURIER)

    def is_finite(self):
        return bool(np.all(np.isfinite(self.coeffs)))

    def __add__(self, other):
        return self.physical().with_coeffs(self.physical().coeffs + other.physical().coeffs)

    def __sub__(self, other):
        return self.physical().with_coeffs(self.physical().coeffs - other.physical().coeffs)

    def __mul__(self, scalar):
        return self.with_coeffs(self.coeffs * scalar)

    __rmul__ = __mul__


def field_from_profiles(grid, basis, profiles):
    """Build a field from ``{mode: callable(x1) or array}``."""
    coeffs = np.zeros((grid.n_points, basis.n_modes), dtype=np.complex128)
    x = grid.x
    for n, prof in profiles.items():
        coeffs[:, n] = prof(x) if callable(prof) else prof
    return Field(grid, basis, coeffs)


def gaussian_mode(grid, basis, mode=0, sigma=1.0, amplitude=1.0, center=0.0):
    """``amplitude * exp(-(x1-center)^2 / (2 sigma^2))`` in a single Hermite mode."""
    return field_from_profiles(
        grid, basis, {mode: lambda x: amplitude * np.exp(-((x - center) ** 2) / (2 * sigma**2))})


def random_field(grid, basis, rng, sigma=1.0, decay=0.7):
    """Smooth random test field: random complex Gaussians in every mode.

    Profiles are Gaussian envelopes times random low-order polynomials, with
    mode amplitudes decaying geometrically so the data are well resolved.
    """
    x = grid.x
    coeffs = np.empty((grid.n_points, basis.n_modes), dtype=np.complex128)
    env = np.exp(-x**2 / (2 * sigma**2))
    for n in range(basis.n_modes):
        a = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        coeffs[:, n] = decay**n * env * (a[0] + a[1] * x / sigma + a[2] * (x / sigma) ** 2 / 2)
    return Field(grid, basis, coeffs)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def row_mass(coeffs):
    """``sum_n |c_n|^2`` per x1 row (the squared x2-L2 norm)."""
    return np.sum(coeffs.real**2 + coeffs.imag**2, axis=-1)


def l2_sq(coeffs, grid):
    """Squared L2 norm of physical-representation coefficients (any mode count)."""
    return float(grid.spacing * np.sum(row_mass(coeffs)))


def mass(f):
    if f.representation == FOURIER:
        return float(f.grid.spacing / f.grid.n_points * np.sum(row_mass(f.coeffs)))
    return l2_sq(f.coeffs, f.grid)


def norm_lp_l2(f, p=2.0):
    """Mixed norm ``L^p_{x1} L^2_{x2}`` by the rectangle rule on the x1 grid."""
    if p != math.inf and not p >= 1:
        raise ValueError(f"p must be >= 1 or inf, got {p!r}")
    rows = np.sqrt(row_mass(f.physical().coeffs))
    if p == math.inf:
        return float(rows.max())
    return float((f.grid.spacing * np.sum(rows**p)) ** (1.0 / p))


def dx1_coeffs(f):
    """Spectral ``d/dx1`` of every mode row (physical representation)."""
    fh = f.fourier().coeffs
    return np.fft.ifft(1j * f.grid.fourier_wavenumbers[:, None] * fh, axis=0)


def kinetic_x1_sq(f):
    """``||d/dx1 f||^2`` evaluated on the Fourier side."""
    fh = f.fourier().coeffs
    xi2 = f.grid.fourier_wavenumbers[:, None] ** 2
    return float(f.grid.spacing / f.grid.n_points * np.sum(xi2 * (fh.real**2 + fh.imag**2)))


def hermite_weighted_sq(f, s=1.0):
    """``sum_n (2n+1)^s ||c_n||^2_{L2_{x1}}``."""
    c = f.physical().coeffs
    per_mode = f.grid.spacing * np.sum(c.real**2 + c.imag**2, axis=0)
    return float(np.sum(f.basis.eigenvalues**s * per_mode))


@dataclass(frozen=True)
class NormReport:
    mass: float
    lp_l2: float
    hermite_sobolev_s: float
    sigma: float


def sobolev_and_sigma(f, p=2.0, s=1.0):
    """Mass, mixed Lebesgue norm, Hermite-Sobolev norm and the weighted ``Sigma`` norm.

    The x2 part of ``Sigma`` is assembled from the exact ladder images of ``x2``
    and ``d/dx2`` (one extra mode each), not from the eigenvalue shortcut.
    """
    f = f.physical()
    m = mass(f)
    x2f, d2f = x2_ladder_images(f)
    sigma_sq = m + kinetic_x1_sq(f) + l2_sq(d2f, f.grid) + l2_sq(x2f, f.grid)
    return NormReport(
        mass=m,
        lp_l2=norm_lp_l2(f, p),
        hermite_sobolev_s=math.sqrt(hermite_weighted_sq(f, s)),
        sigma=math.sqrt(sigma_sq),
    )


def x2_ladder_images(f):
    """``(x2 f, d/dx2 f)`` as ``(N1, n_modes + 1)`` coefficient arrays."""
    c = f.physical().coeffs
    n = f.basis.n_modes
    return c @ ladder_matrix(n, "position").T, c @ ladder_matrix(n, "derivative").T


def boundary_mass(f):
    """Mass carried by ``|x1| > L/2``; a wrap-around validity indicator."""
    g = f.physical()
    outside = np.abs(g.grid.x) > 0.5 * g.grid.half_length
    return float(g.grid.spacing * np.sum(row_mass(g.coeffs)[outside]))


# ---------------------------------------------------------------------------
# frequency projectors
# ---------------------------------------------------------------------------

def bump(r):
    """Smooth cutoff: 1 on ``r <= 1``, 0 on ``r >= 2``, ``exp(1 - 1/(1-(r-1)^2))`` between."""
    r = np.asarray(r, dtype=np.float64)
    out = np.where(r <= 1.0, 1.0, 0.0)
    mid = (r > 1.0) & (r < 2.0)
    s = r[mid] - 1.0
    out[mid] = np.exp(1.0 - 1.0 / (1.0 - s * s))
    return out


def freq_project(f, cutoff, center=0.0, kind="low_pass"):
    """Partial Littlewood-Paley projection in x1, optionally about a centre ``center``."""
    if not cutoff > 0:
        raise ValueError(f"cutoff must be positive, got {cutoff!r}")
    r = np.abs(f.grid.fourier_wavenumbers - center) / cutoff
    if kind == "low_pass":
        mult = bump(r)
    elif kind == "band":
        mult = bump(r) - bump(2.0 * r)
    else:
        raise ValueError(f"kind must be 'low_pass' or 'band', got {kind!r}")
    fh = f.fourier()
    return fh.with_coeffs(fh.coeffs * mult[:, None]).physical()


# ---------------------------------------------------------------------------
# X1(t), X2(t)
# ---------------------------------------------------------------------------

def apply_X_coeffs(f, which, t):
    """Extended ``(N1, n_modes + 1)`` coefficients of ``X1(t) f`` or ``X2(t) f``.

    ``X1(t) = x2 sin t - i cos t d/dx2`` and ``X2(t) = x2 cos t + i sin t d/dx2``.
    """
    xf, df = x2_ladder_images(f)
    s, c = math.sin(t), math.cos(t)
    if which == "X1":
        return s * xf - 1j * c * df
    if which == "X2":
        return c * xf + 1j * s * df
    raise ValueError(f"which must be 'X1' or 'X2', got {which!r}")


def apply_X(f, which, t):
    """``X_k(t) f`` truncated back to ``n_modes`` modes.

    Returns
    -------
    Field, float
        The truncated field and the L2 norm of the discarded top mode.
    """
    ext = apply_X_coeffs(f, which, t)
    tail = math.sqrt(l2_sq(ext[:, -1:], f.grid))
    return f.physical().with_coeffs(ext[:, :-1]), tail
