"""Resonant quintic nonlinearity of the continuous resonant system and its functionals.

The resonant sum over ``n1 - n2 + n3 - n4 + n5 = n`` is evaluated as a
discrete average over the confined flow,

    F(v) = (1/M) sum_j exp(-i tau_j H) ( |w_j|^4 w_j ),  w_j = exp(i tau_j H) v,

with ``tau_j = pi j / M``. The integrand is a trigonometric polynomial in
``exp(2 i tau)`` of degree ``3 (N_h - 1)``, so the average is exact once
``M > 3 (N_h - 1)``; the default ``M = 6 N_h + 1`` leaves a wide margin.
Projections use the sqrt(3)-scaled Gauss rule, exact for sextic products.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .field import kinetic_x1_sq, l2_sq, mass
from .hermite import MAX_MODES, forward_transform, hermite_matrix, scaled_rule

DIRECT_MAX_MODES = 6
E0_SEXTIC = 1.0 / (math.pi * math.sqrt(3.0))  # integral of e_0^6


def default_n_tau(n_modes):
    return 6 * n_modes + 1


def tau_phases(n_modes, n_tau):
    """``exp(i tau_j (2n+1))`` as an ``(n_tau, n_modes)`` array."""
    tau = math.pi * np.arange(n_tau) / n_tau
    return np.exp(1j * tau[:, None] * (2.0 * np.arange(n_modes) + 1.0)[None, :])


def _flowed_samples(coeffs, basis, n_tau):
    """Samples of ``exp(i tau_j H) v`` on the nonlinear nodes: ``(n_tau, N1, Q_nl)``."""
    ph = tau_phases(basis.n_modes, n_tau)
    return np.einsum("jn,xn,qn->jxq", ph, coeffs, basis.basis_on_nonlinear, optimize=True), ph


def dcr_nonlinearity(f, n_tau=None):
    """Resonant nonlinearity ``F(v)``, computed by the exact phase average.

    Parameters
    ----------
    f : Field
    n_tau : int, optional
        Number of ``tau`` nodes. Defaults to ``6 n_modes + 1``; smaller values
        are accepted for aliasing experiments.
    """
    g = f.physical()
    basis = g.basis
    if basis.n_modes > MAX_MODES:
        raise ValueError("too many modes")
    n_tau = default_n_tau(basis.n_modes) if n_tau is None else int(n_tau)
    w, ph = _flowed_samples(g.coeffs, basis, n_tau)
    q = _kernels.quintic(w)
    proj = np.einsum("jxq,q,qn,jn->xn", q, basis.nonlinear_weights, basis.basis_on_nonlinear,
                     np.conj(ph), optimize=True) / n_tau
    return g.with_coeffs(proj)


def resonant_tail(f, n_tau=None):
    """L2 norm of the resonant output in modes ``n_modes .. 3 n_modes - 3``.

    These modes are produced by the resonant sum but discarded by the
    fixed-shape state. Evaluated with an enlarged sqrt(3)-scaled rule so the
    projections stay exact.
    """
    g = f.physical()
    n = g.basis.n_modes
    top = 3 * n - 2
    if top <= n:
        return 0.0
    n_tau = max(default_n_tau(n), 6 * n) if n_tau is None else int(n_tau)
    x, wq = scaled_rule(4 * n)
    full = hermite_matrix(top, x)
    ph_in = tau_phases(n, n_tau)
    ph_out = tau_phases(top, n_tau)[:, n:]
    w = np.einsum("jn,xn,qn->jxq", ph_in, g.coeffs, full[:, :n], optimize=True)
    q = _kernels.quintic(w)
    proj = np.einsum("jxq,q,qn,jn->xn", q, wq, full[:, n:], np.conj(ph_out), optimize=True) / n_tau
    return math.sqrt(l2_sq(proj, g.grid))


@dataclass(frozen=True)
class SexticTensor:
    """``entries[a,b,c,d,e,n] = integral e_a e_b e_c e_d e_e e_n dx``."""

    n_modes: int
    entries: np.ndarray


def sextic_tensor(basis):
    """Sextic Hermite product integrals for ``n_modes <= 6`` by the nonlinear rule."""
    n = basis.n_modes
    if n > DIRECT_MAX_MODES:
        raise ValueError(f"sextic tensor limited to n_modes <= {DIRECT_MAX_MODES}, got {n}")
    b = basis.basis_on_nonlinear
    t = np.einsum("qa,qb,qc,qd,qe,qf,q->abcdef", b, b, b, b, b, b, basis.nonlinear_weights,
                  optimize=True)
    return SexticTensor(n, t)


def dcr_nonlinearity_direct(f, tensor=None):
    """Literal resonant quintuple sum; cost ``O(N_h^5)`` per x1 point."""
    g = f.physical()
    if g.basis.n_modes > DIRECT_MAX_MODES:
        raise ValueError(f"direct resonant sum limited to n_modes <= {DIRECT_MAX_MODES}")
    if tensor is None:
        tensor = sextic_tensor(g.basis)
    if tensor.n_modes != g.basis.n_modes:
        raise ValueError("tensor and field mode counts differ")
    return g.with_coeffs(_kernels.resonant_direct(g.coeffs, tensor.entries))


def resonant_mass(f):
    """``(mass, M_S)`` with ``M_S = sum_n (2n+1) ||c_n||^2``."""
    g = f.physical()
    per_mode = g.grid.spacing * np.sum(g.coeffs.real**2 + g.coeffs.imag**2, axis=0)
    return mass(g), float(np.sum(g.basis.eigenvalues * per_mode))


def _sextic_average(f, n_tau=None):
    """Phase-averaged ``|exp(i tau H) u|^6`` on (x1 grid, nonlinear x2 nodes)."""
    g = f.physical()
    n_tau = default_n_tau(g.basis.n_modes) if n_tau is None else int(n_tau)
    w, _ = _flowed_samples(g.coeffs, g.basis, n_tau)
    return _kernels.sextic_density(w).sum(axis=0) / n_tau


def resonant_sextic(f, n_tau=None):
    """The resonant six-fold sum ``sum_{n1+n3+n5=n2+n4+n6} int u_n1 ubar_n2 ... ubar_n6``."""
    dens = _sextic_average(f, n_tau)
    return float(f.grid.spacing * np.sum(dens @ f.basis.nonlinear_weights))


def resonant_energy(f, n_tau=None):
    """``E_S = 1/2 sum_n ||d/dx1 u_n||^2 + 1/6 (resonant sextic sum)``."""
    return 0.5 * kinetic_x1_sq(f) + resonant_sextic(f, n_tau) / 6.0


def sextic_positivity(f, n_tau=None):
    """Minimum of the pointwise resonant sextic density over all grid points."""
    return float(_sextic_average(f, n_tau).min())


def resonance_defect(coeffs, fvals, basis):
    """``sum_n (2n+1) Im <c_n, F_n>`` summed over rows; zero for resonant ``F``."""
    return float(np.sum(basis.eigenvalues * np.imag(np.conj(coeffs) * fvals)))


def project_nonlinear(basis, samples):
    """Mode coefficients of samples on the nonlinear nodes (last axis)."""
    return forward_transform(basis, samples, nodes="nonlinear")
