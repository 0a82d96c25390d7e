"""Numerical experiments: large-scale approximation sweep, conservation audit,
small-data scattering probe."""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .evolve import IntegratorSpec, l6_density, step_dcr, step_phnls
from .field import boundary_mass, freq_project, l2_sq, mass, row_mass
from .propagate import free_flow_x1, harmonic_flow_x2, phnls_linear_flow
from .symmetry import rescale

N_SAMPLE_INTERVALS = 16  # 17 sample times per run
BOUNDARY_TOL = 1e-6
MODE_TAIL_TOL = 1e-6


@dataclass
class ApproxSweepResult:
    lambdas: np.ndarray
    errors_l2: np.ndarray
    errors_h1: np.ndarray
    errors_l6: np.ndarray
    horizons: np.ndarray
    boundary_ok: np.ndarray
    mode_tail_ok: np.ndarray

    @property
    def validity_flags(self):
        return self.boundary_ok & self.mode_tail_ok


def _h1_sq(coeffs, f):
    per_mode = f.grid.spacing * np.sum(coeffs.real**2 + coeffs.imag**2, axis=0)
    return float(np.sum(f.basis.eigenvalues * per_mode))


def _evolve_sampled(f, stepper, dt, steps_per_sample, n_samples):
    out = [f]
    for _ in range(n_samples):
        for _ in range(steps_per_sample):
            f = stepper(f, dt)
        out.append(f)
    return out


def approx_sweep(phi, lambdas, T, phnls_spec, dcr_spec=None, theta=0.1,
                 n_intervals=N_SAMPLE_INTERVALS):
    """Compare the confined NLS at scale ``lam`` against the rescaled resonant flow.

    For each ``lam``: the PHNLS solution from ``lam^(-1/2) phi_lam(x1/lam, x2)``
    is run to ``T`` and compared on ``n_intervals + 1`` equispaced times with
    ``exp(it(d^2 - x2^2)) lam^(-1/2) v(t/lam^2, x1/lam, x2)``, where ``v`` solves
    the resonant system from ``phi_lam = P_{<= lam^theta} phi``.

    The PHNLS step is the largest step not exceeding ``phnls_spec.dt`` that
    divides the sample spacing; the resonant run uses the same number of
    steps on its rescaled clock unless ``dcr_spec.dt`` asks for finer steps.
    """
    lambdas = np.asarray(lambdas, dtype=np.float64)
    spacing = T / n_intervals
    steps_p = max(1, math.ceil(spacing / phnls_spec.dt - 1e-9))
    dt_p = spacing / steps_p
    IntegratorSpec("strang_phnls", dt_p, T).check_guard(phi.basis.n_modes)
    errors_l2, errors_h1, errors_l6, bnd_ok, tail_ok = [], [], [], [], []
    for lam in lambdas:
        phi_lam = freq_project(phi, lam**theta, 0.0, "low_pass") if theta is not None else phi
        u0 = rescale(phi_lam, lam)
        spacing_d = spacing / lam**2
        steps_d = steps_p
        if dcr_spec is not None:
            steps_d = max(steps_d, math.ceil(spacing_d / dcr_spec.dt - 1e-9))
        us = _evolve_sampled(u0, step_phnls, dt_p, steps_p, n_intervals)
        vs = _evolve_sampled(phi_lam, step_dcr, spacing_d / steps_d, steps_d, n_intervals)
        e2 = eh = 0.0
        l6 = []
        ok_b = ok_t = True
        for i, (u, v) in enumerate(zip(us, vs)):
            w = harmonic_flow_x2(rescale(v, lam), i * spacing)
            diff = u.coeffs - w.coeffs
            e2 = max(e2, math.sqrt(l2_sq(diff, u.grid)))
            eh = max(eh, math.sqrt(_h1_sq(diff, u)))
            l6.append(u.grid.spacing * float(np.sum(row_mass(diff) ** 3)))
            m = mass(u)
            ok_b &= boundary_mass(u) <= BOUNDARY_TOL * max(m, 1e-300)
            top = u.grid.spacing * float(np.sum(row_mass(u.coeffs[:, -2:])))
            ok_t &= top <= MODE_TAIL_TOL * max(m, 1e-300)
        errors_l2.append(e2)
        errors_h1.append(eh)
        errors_l6.append(float(np.trapezoid(l6, dx=spacing)) ** (1 / 6))
        bnd_ok.append(bool(ok_b))
        tail_ok.append(bool(ok_t))
    return ApproxSweepResult(
        lambdas=lambdas, errors_l2=np.array(errors_l2), errors_h1=np.array(errors_h1),
        errors_l6=np.array(errors_l6), horizons=T / lambdas**2,
        boundary_ok=np.array(bnd_ok), mode_tail_ok=np.array(tail_ok))


@dataclass
class AuditReport:
    drifts: dict
    orders: dict = dc_field(default_factory=dict)


CONSERVED = ("mass", "energy", "m_s", "e_s")


def _max_drift(rows, key):
    vals = np.array([getattr(r, key) for r in rows])
    ref = vals[0]
    dev = float(np.max(np.abs(vals - ref)))
    if ref == 0:
        return dev
    return dev / abs(ref)


def conservation_audit(rows, rows_half=None, keys=CONSERVED):
    """Maximum relative drift of each conserved quantity.

    With ``rows_half`` from the same run at half the step, the observed
    order ``log2(drift(dt) / drift(dt/2))`` is reported too.
    """
    drifts = {k: _max_drift(rows, k) for k in keys}
    orders = {}
    if rows_half is not None:
        for k in keys:
            d1, d2 = drifts[k], _max_drift(rows_half, k)
            orders[k] = math.log2(d1 / d2) if d1 > 0 and d2 > 0 else float("nan")
    return AuditReport(drifts, orders)


@dataclass
class ScatteringReport:
    checkpoints: list
    defects: list
    strichartz_increments: list
    pullback_norms: list


def scattering_probe(f0, T, checkpoints, dt, equation="dcr", nonlinearity=None):
    """Cauchy defects of the linear pullback ``b(t) = U(-t) u(t)`` at checkpoints.

    ``defects[i] = ||b(t_{i+1}) - b(t_i)||_{L2}`` and the matching L6
    (Strichartz) increments ``int_{t_i}^{t_{i+1}} int ||u||^6_{L2_x2} dx1 dt``.
    The report is descriptive; thresholds belong to the caller.
    """
    checkpoints = sorted(float(c) for c in checkpoints)
    if checkpoints and checkpoints[-1] > T * (1 + 1e-12):
        raise ValueError("checkpoints must not exceed T")
    if equation == "dcr":
        def stepper(g, h):
            return step_dcr(g, h, nonlinearity)
        pull = free_flow_x1
    elif equation == "phnls":
        stepper = step_phnls
        pull = phnls_linear_flow
    else:
        raise ValueError(f"unknown equation {equation!r}")
    f = f0.physical()
    t = 0.0
    acc = 0.0
    dens = l6_density(f)
    pulls, accs, norms = [], [], []
    for c in checkpoints:
        n = max(0, int(round((c - t) / dt)))
        h = (c - t) / n if n else 0.0
        for _ in range(n):
            f = stepper(f, h)
            d = l6_density(f)
            acc += 0.5 * h * (dens + d)
            dens = d
        t = c
        b = pull(f, -t)
        pulls.append(b)
        accs.append(acc)
        norms.append(math.sqrt(mass(b)))
    defects = [math.sqrt(l2_sq(pulls[i + 1].coeffs - pulls[i].coeffs, f0.grid))
               for i in range(len(pulls) - 1)]
    incr = [accs[i + 1] - accs[i] for i in range(len(accs) - 1)]
    return ScatteringReport(checkpoints, defects, incr, norms)
