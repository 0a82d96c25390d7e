"""Symmetry group actions on fields: phase, translation, Galilean boost, dilation."""

import math

import numpy as np

from .field import Grid1D

_LATTICE_TOL = 1e-9
MAX_HALF_LENGTH = 1e12


def _lattice_index(value, unit):
    k = value / unit
    m = round(k)
    return int(m) if abs(k - m) <= _LATTICE_TOL * max(1.0, abs(k)) else None


def phase_rotate(f, theta):
    """Multiply by ``exp(i theta)``."""
    if theta == 0:
        return f
    return f.with_coeffs(f.coeffs * np.exp(1j * theta))


def translation_is_exact(grid, x0):
    """True when ``x0`` is a whole number of grid spacings (a pure index shift)."""
    return _lattice_index(x0, grid.spacing) is not None


def translate(f, x0):
    """``f(x1 - x0, x2)`` with periodic wrap.

    Whole-spacing shifts are index rolls and exact; other shifts are applied
    as Fourier phases, which act on the trigonometric interpolant.
    """
    g = f.physical()
    m = _lattice_index(x0, g.grid.spacing)
    if m is not None:
        return g.with_coeffs(np.roll(g.coeffs, m % g.grid.n_points, axis=0))
    fh = g.fourier()
    mult = np.exp(-1j * g.grid.fourier_wavenumbers * x0)
    return fh.with_coeffs(fh.coeffs * mult[:, None]).physical()


def modulate(f, xi0):
    """Pointwise ``exp(i x1 xi0)``; on the Fourier lattice this is a bin shift."""
    g = f.physical()
    return g.with_coeffs(g.coeffs * np.exp(1j * xi0 * g.grid.x)[:, None])


def galilean(f, xi0, t):
    """``exp(-i t xi0^2) exp(i x1 xi0) f(x1 - 2 xi0 t, x2)``.

    ``xi0`` must lie on the Fourier lattice ``(pi/L) Z``.
    """
    g = f.physical()
    if _lattice_index(xi0, math.pi / g.grid.half_length) is None:
        raise ValueError(f"xi0={xi0!r} is not a multiple of pi/L={math.pi / g.grid.half_length!r}")
    if xi0 == 0:
        return g
    shifted = translate(g, 2.0 * xi0 * t) if t != 0 else g
    boosted = modulate(shifted, xi0)
    return phase_rotate(boosted, -t * xi0 * xi0)


def rescale(f, lam):
    """Mass-critical dilation ``lam^(-1/2) f(x1 / lam, x2)``.

    The samples are kept and the box is stretched: the output grid has the
    same ``n_points`` and half-length ``lam * L``.
    """
    if not lam > 0:
        raise ValueError(f"scale factor must be positive, got {lam!r}")
    k = math.log2(lam)
    if abs(k - round(k)) > 1e-12:
        raise ValueError(f"scale factor must be a power of two, got {lam!r}")
    if lam == 1:
        return f
    g = f.physical()
    new_l = g.grid.half_length * lam
    if new_l > MAX_HALF_LENGTH:
        raise ValueError(f"rescaled half-length {new_l:g} exceeds capacity")
    return type(g)(Grid1D(g.grid.n_points, new_l), g.basis, g.coeffs / math.sqrt(lam))
