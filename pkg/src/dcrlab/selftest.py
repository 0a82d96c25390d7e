"""Fast built-in invariant suite used by ``dcrlab selftest``.

Every check is seeded from one generator so a failure can be replayed.
"""

import math
import time

import numpy as np

from .evolve import IntegratorSpec, run, step_phnls
from .field import Grid1D, apply_X_coeffs, l2_sq, mass, random_field, x2_ladder_images
from .hermite import build_basis, inverse_transform, forward_transform, ladder_apply
from .propagate import harmonic_flow_x2, mehler_apply, mehler_reference, phnls_linear_flow
from .resonant import (dcr_nonlinearity, dcr_nonlinearity_direct, resonance_defect,
                       sextic_positivity, sextic_tensor, E0_SEXTIC)
from .symmetry import galilean, phase_rotate
from .checkpoint import dumps, loads


def _gram(seed):
    b = build_basis(32)
    g = (b.basis_on_linear * b.linear_weights[:, None]).T @ b.basis_on_linear
    return float(np.abs(g - np.eye(32)).max()), 1e-12


def _eigen(seed):
    n = 32
    b = build_basis(n)
    worst = 0.0
    for k in range(n - 2):
        e = np.zeros(n)
        e[k] = 1.0
        d = ladder_apply(b, "derivative", e)
        d2 = ladder_apply(n + 1, "derivative", d)
        x = ladder_apply(b, "position", e)
        x2 = ladder_apply(n + 1, "position", x)
        h = x2 - d2
        target = np.zeros(n + 2)
        target[k] = 2 * k + 1
        worst = max(worst, float(np.abs(h - target).max()))
    return worst, 1e-12


def _round_trip(seed):
    rng = np.random.default_rng(seed)
    b = build_basis(24)
    a = rng.standard_normal(24) + 1j * rng.standard_normal(24)
    return float(np.abs(forward_transform(b, inverse_transform(b, a)) - a).max()), 1e-12


def _mehler(seed):
    rng = np.random.default_rng(seed)
    b = build_basis(16)
    s = inverse_transform(b, rng.standard_normal(16) + 1j * rng.standard_normal(16))
    return max(float(np.abs(mehler_apply(b, s, t) - mehler_reference(b, s, t)).max())
               for t in (math.pi / 6, math.pi / 4, math.pi / 3)), 1e-8


def _resonant(seed):
    rng = np.random.default_rng(seed)
    grid = Grid1D(8, 4.0)
    worst = 0.0
    for n in range(2, 7):
        b = build_basis(n)
        f = random_field(grid, b, rng, decay=1.0)
        d = dcr_nonlinearity_direct(f, sextic_tensor(b)).coeffs
        p = dcr_nonlinearity(f).coeffs
        worst = max(worst, float(np.abs(p - d).max() / np.abs(d).max()))
    return worst, 1e-10


def _single_mode(seed):
    b = build_basis(1)
    grid = Grid1D(8, 4.0)
    f = random_field(grid, b, np.random.default_rng(seed))
    c = f.coeffs[:, 0]
    expected = E0_SEXTIC * np.abs(c) ** 4 * c
    return float(np.abs(dcr_nonlinearity(f).coeffs[:, 0] - expected).max() / np.abs(expected).max()), 1e-12


def _positivity(seed):
    rng = np.random.default_rng(seed)
    b = build_basis(8)
    grid = Grid1D(8, 4.0)
    worst = 0.0
    for _ in range(10):
        f = random_field(grid, b, rng, decay=1.0)
        worst = max(worst, -sextic_positivity(f))
    return worst, 0.0


def _resonance(seed):
    rng = np.random.default_rng(seed)
    b = build_basis(8)
    grid = Grid1D(8, 4.0)
    worst = 0.0
    for _ in range(10):
        f = random_field(grid, b, rng, decay=1.0)
        worst = max(worst, abs(resonance_defect(f.coeffs, dcr_nonlinearity(f).coeffs, b)))
    return worst, 1e-11


def _x_identity(seed):
    rng = np.random.default_rng(seed)
    b = build_basis(10)
    grid = Grid1D(16, 6.0)
    worst = 0.0
    for _ in range(5):
        f = random_field(grid, b, rng)
        t = rng.uniform(-math.pi, math.pi)
        lhs = l2_sq(apply_X_coeffs(f, "X1", t), grid) + l2_sq(apply_X_coeffs(f, "X2", t), grid)
        xf, df = x2_ladder_images(f)
        rhs = l2_sq(xf, grid) + l2_sq(df, grid)
        worst = max(worst, abs(lhs - rhs) / rhs)
    return worst, 1e-10


def _unitarity(seed):
    rng = np.random.default_rng(seed)
    b = build_basis(8)
    grid = Grid1D(64, 12.0)
    f = random_field(grid, b, rng)
    m0 = mass(f)
    g = phnls_linear_flow(f, 0.37)
    h = step_phnls(f, 0.01)
    return max(abs(mass(g) - m0), abs(mass(h) - m0)) / m0, 1e-13


def _harmonic_period(seed):
    rng = np.random.default_rng(seed)
    b = build_basis(8)
    grid = Grid1D(8, 4.0)
    f = random_field(grid, b, rng)
    ok = (np.array_equal(harmonic_flow_x2(f, math.pi).coeffs, -f.coeffs)
          and np.array_equal(harmonic_flow_x2(f, 2 * math.pi).coeffs, f.coeffs))
    return (0.0 if ok else 1.0), 0.0


def _gauge_galilean(seed):
    rng = np.random.default_rng(seed)
    b = build_basis(5)
    grid = Grid1D(64, 16.0)
    f = random_field(grid, b, rng)
    ref = dcr_nonlinearity(f).coeffs
    scale = np.abs(ref).max()
    g1 = dcr_nonlinearity(phase_rotate(f, 0.7)).coeffs - np.exp(0.7j) * ref
    xi0 = 3 * math.pi / grid.half_length
    g2 = dcr_nonlinearity(galilean(f, xi0, 0.0)).coeffs - galilean(f.with_coeffs(ref), xi0, 0.0).coeffs
    return float(max(np.abs(g1).max(), np.abs(g2).max()) / scale), 1e-12


def _checkpoint(seed):
    rng = np.random.default_rng(seed)
    f = random_field(Grid1D(16, 5.0), build_basis(4), rng)
    data = dumps(f, 1.25)
    g, t = loads(data)
    return (0.0 if dumps(g, t) == data else 1.0), 0.0


def _run_cadence(seed):
    rng = np.random.default_rng(seed)
    f = random_field(Grid1D(16, 5.0), build_basis(3), rng, decay=0.3) * 0.1
    _, rows = run(f, IntegratorSpec("lawson_rk4_dcr", 0.05, 0.05, 1))
    return (0.0 if len(rows) == 2 else 1.0), 0.0


CHECKS = [
    ("gram_orthonormality", _gram),
    ("eigenrelation", _eigen),
    ("transform_round_trip", _round_trip),
    ("mehler_vs_spectral", _mehler),
    ("resonant_direct_vs_average", _resonant),
    ("single_mode_closed_form", _single_mode),
    ("sextic_positivity", _positivity),
    ("resonance_weighted_mass", _resonance),
    ("x_operator_identity", _x_identity),
    ("unitarity", _unitarity),
    ("harmonic_period", _harmonic_period),
    ("gauge_galilean_covariance", _gauge_galilean),
    ("checkpoint_round_trip", _checkpoint),
    ("run_cadence", _run_cadence),
]


def run_selftest(seed=0, stream=None):
    """Run every check; returns ``(all_ok, results)`` with ``(name, value, tol, ok, seconds)`` tuples."""
    results = []
    for i, (name, check) in enumerate(CHECKS):
        t0 = time.perf_counter()
        try:
            value, tol = check(seed + i)
            ok = bool(value <= tol)
        except Exception as exc:  # a crashing check is a failing check
            value, tol, ok = float("nan"), float("nan"), False
            name = f"{name} ({type(exc).__name__}: {exc})"
        dt = time.perf_counter() - t0
        results.append((name, value, tol, ok, dt))
        if stream is not None:
            print(f"{'PASS' if ok else 'FAIL'}  {name:<32s} value={value:.3e} tol={tol:.1e} ({dt:.2f}s)",
                  file=stream)
    return all(r[3] for r in results), results
