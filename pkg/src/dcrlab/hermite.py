"""Hermite eigenbasis of the 1D harmonic oscillator.

The functions ``e_n`` are the L2-normalised eigenfunctions of ``-d^2/dx^2 + x^2``
with eigenvalues ``2n + 1``. Three Gauss-Hermite rules are carried by a
:class:`HermiteBasis`:

* the *linear* rule (``n_modes + 1`` points), exact for Gram-type integrals;
* the *nonlinear* rule (``3 n_modes + 2`` points, nodes scaled by ``1/sqrt(3)``),
  exact for every sextic product of basis functions;
* the *collocation* rule (``n_modes`` points), whose square synthesis matrix
  makes pointwise unimodular multiplications exactly unitary in mode space.

All weights are stored in "modified" form: the rule reads
``integral g(x) dx ~= sum_q w_q g(x_q)`` with the Gaussian carried by ``g``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import _kernels

MAX_MODES = 512
NODE_TOL = 1e-14
SQRT3 = math.sqrt(3.0)


def hermite_eval(n, x):
    """Evaluate the normalised Hermite function ``e_n`` at a real point.

    Parameters
    ----------
    n : int
        Mode index, ``n >= 0``.
    x : float
        Finite coordinate.

    Returns
    -------
    float
        ``e_n(x)``. The Gaussian factor is folded into the three-term
        recurrence so nothing overflows for ``|x| <= 40, n <= 512``.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"mode index must be a non-negative integer, got {n!r}")
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    return float(_kernels.hermite_matrix(int(n) + 1, np.array([x]))[0, -1])


def hermite_matrix(n_modes, x):
    """``e_n(x_k)`` for all ``n < n_modes`` as an array of shape ``(len(x), n_modes)``."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if not np.all(np.isfinite(x)):
        raise ValueError("coordinates must be finite")
    return _kernels.hermite_matrix(n_modes, x)


def gauss_hermite_rule(q):
    """Standard ``q``-point Gauss-Hermite rule with modified weights.

    Nodes come from the symmetric tridiagonal Jacobi matrix (Golub-Welsch)
    and are polished by Newton iterations on ``e_q``. The modified weights
    ``w_q e^{u_q^2}`` are evaluated as the inverse Christoffel function
    ``1 / sum_{k<q} e_k(u_q)^2`` so they never underflow.

    Returns
    -------
    nodes, weights : ndarray
        Strictly increasing, symmetric nodes and strictly positive weights.
    """
    q = int(q)
    if q < 1:
        raise ValueError("a quadrature rule needs at least one node")
    if q == 1:
        return np.zeros(1), np.array([math.sqrt(math.pi)])
    off = np.sqrt(np.arange(1, q) / 2.0)
    nodes = eigh_tridiagonal(np.zeros(q), off, eigvals_only=True)
    nodes = np.sort(nodes)
    scale = math.sqrt(2.0 * q)
    for _ in range(20):
        vals = _kernels.hermite_matrix(q + 1, nodes)
        # e_q'(u) = sqrt(2q) e_{q-1}(u) - u e_q(u), with e_q(u) ~ 0 at a node
        deriv = scale * vals[:, q - 1] - nodes * vals[:, q]
        step = vals[:, q] / deriv
        nodes = nodes - step
        if np.max(np.abs(step) / np.maximum(1.0, np.abs(nodes))) < NODE_TOL:
            break
    else:
        raise RuntimeError(f"Gauss-Hermite node refinement did not converge for q={q}")
    nodes = 0.5 * (nodes - nodes[::-1])
    vals = _kernels.hermite_matrix(q, nodes)
    weights = 1.0 / np.sum(vals * vals, axis=1)
    weights = 0.5 * (weights + weights[::-1])
    return nodes, weights


@dataclass(frozen=True)
class HermiteBasis:
    """Precomputed Hermite samples and quadrature rules for ``n_modes`` modes.

    ``basis_on_*`` matrices have shape ``(Q, n_modes)`` so samples of a
    coefficient vector ``c`` are ``B @ c``.
    """

    n_modes: int
    linear_nodes: np.ndarray
    linear_weights: np.ndarray
    nonlinear_nodes: np.ndarray
    nonlinear_weights: np.ndarray
    collocation_nodes: np.ndarray
    collocation_weights: np.ndarray
    basis_on_linear: np.ndarray = field(repr=False)
    basis_on_nonlinear: np.ndarray = field(repr=False)
    basis_on_collocation: np.ndarray = field(repr=False)

    @property
    def eigenvalues(self):
        return 2.0 * np.arange(self.n_modes) + 1.0

    def nodes(self, which):
        return getattr(self, f"{_grid_name(which)}_nodes")

    def weights(self, which):
        return getattr(self, f"{_grid_name(which)}_weights")

    def matrix(self, which):
        return getattr(self, f"basis_on_{_grid_name(which)}")


def _grid_name(which):
    if which not in ("linear", "nonlinear", "collocation"):
        raise ValueError(f"unknown quadrature grid {which!r}")
    return which


def scaled_rule(q, scale=SQRT3):
    """Gauss rule for integrands ``P(x) exp(-scale^2 x^2)`` in modified form."""
    u, w = gauss_hermite_rule(q)
    return u / scale, w / scale


def build_basis(n_modes):
    """Build the :class:`HermiteBasis` for modes ``0 .. n_modes-1``.

    >>> b = build_basis(4)
    >>> b.linear_nodes.size, b.nonlinear_nodes.size
    (5, 14)
    """
    if int(n_modes) != n_modes or not 1 <= n_modes <= MAX_MODES:
        raise ValueError(f"n_modes must be an integer in [1, {MAX_MODES}], got {n_modes!r}")
    n_modes = int(n_modes)
    lin_u, lin_w = gauss_hermite_rule(n_modes + 1)
    nl_x, nl_w = scaled_rule(3 * n_modes + 2)
    col_u, col_w = gauss_hermite_rule(n_modes)
    mats = [_kernels.hermite_matrix(n_modes, nodes) for nodes in (lin_u, nl_x, col_u)]
    for arr in mats:
        arr.setflags(write=False)
    for arr in (lin_u, lin_w, nl_x, nl_w, col_u, col_w):
        arr.setflags(write=False)
    return HermiteBasis(n_modes, lin_u, lin_w, nl_x, nl_w, col_u, col_w, *mats)


def _check_len(arr, n, what):
    if arr.shape[-1] != n:
        raise ValueError(f"{what}: expected last axis of length {n}, got {arr.shape[-1]}")


def forward_transform(basis, samples, nodes="linear"):
    """Mode coefficients ``c_n = sum_q w_q e_n(x_q) s_q`` of samples along the last axis."""
    samples = np.asarray(samples)
    w = basis.weights(nodes)
    _check_len(samples, w.size, "forward_transform")
    return (samples * w) @ basis.matrix(nodes)


def inverse_transform(basis, coeffs, nodes="linear"):
    """Samples ``sum_n c_n e_n(x_q)`` on the requested grid (last axis)."""
    coeffs = np.asarray(coeffs)
    _check_len(coeffs, basis.n_modes, "inverse_transform")
    return coeffs @ basis.matrix(nodes).T


def ladder_matrix(n_modes, which):
    """Real ``(n_modes + 1, n_modes)`` matrix of ``x`` or ``d/dx`` on the first modes.

    Uses ``x e_n = sqrt((n+1)/2) e_{n+1} + sqrt(n/2) e_{n-1}`` and
    ``e_n' = -sqrt((n+1)/2) e_{n+1} + sqrt(n/2) e_{n-1}``; the extra row
    holds the exact band growth.
    """
    n = np.arange(n_modes)
    up = np.sqrt((n + 1) / 2.0)
    down = np.sqrt(n[1:] / 2.0)
    mat = np.zeros((n_modes + 1, n_modes))
    if which == "position":
        mat[n + 1, n] = up
    elif which == "derivative":
        mat[n + 1, n] = -up
    else:
        raise ValueError(f"which must be 'position' or 'derivative', got {which!r}")
    mat[n[1:] - 1, n[1:]] = down
    return mat


def ladder_apply(basis, which, coeffs):
    """Apply ``x`` or ``d/dx`` in mode space; the output has ``n_modes + 1`` entries."""
    coeffs = np.asarray(coeffs)
    n_modes = basis if isinstance(basis, int) else basis.n_modes
    _check_len(coeffs, n_modes, "ladder_apply")
    return coeffs @ ladder_matrix(n_modes, which).T
