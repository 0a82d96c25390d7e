"""Time integration: Strang splitting for the confined quintic NLS and
Lawson RK4 for the continuous resonant system, with trajectory diagnostics."""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels
from .field import boundary_mass, hermite_weighted_sq, kinetic_x1_sq, mass, row_mass
from .hermite import inverse_transform, scaled_rule, hermite_matrix
from .propagate import free_flow_x1, phnls_linear_flow
from .resonant import dcr_nonlinearity, resonant_energy, resonant_mass, resonant_tail

SCHEMES = ("strang_phnls", "lawson_rk4_dcr")


class BlowupError(RuntimeError):
    """Raised when the state stops being finite; keeps the partial trajectory."""

    def __init__(self, message, t=None, diagnostics=None):
        super().__init__(message)
        self.t = t
        self.diagnostics = diagnostics if diagnostics is not None else []


@dataclass(frozen=True)
class IntegratorSpec:
    scheme: str
    dt: float
    t_end: float
    diag_stride: int = 1

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ValueError(f"t_end must be positive, got {self.t_end!r}")
        if self.dt > self.t_end * (1 + 1e-12):
            raise ValueError(f"dt={self.dt} exceeds t_end={self.t_end}")
        if int(self.diag_stride) != self.diag_stride or self.diag_stride < 1:
            raise ValueError(f"diag_stride must be a positive integer, got {self.diag_stride!r}")

    @property
    def n_steps(self):
        return max(1, int(round(self.t_end / self.dt)))

    @property
    def step(self):
        return self.t_end / self.n_steps

    def check_guard(self, n_modes):
        """Phase-resolution guard for the split-step scheme."""
        if self.scheme == "strang_phnls" and self.step * (2 * n_modes + 1) > math.pi / 4 * (1 + 1e-12):
            raise ValueError(f"dt*(2*n_modes+1) = {self.step * (2 * n_modes + 1):.4g} exceeds pi/4; "
                             f"reduce dt below {math.pi / 4 / (2 * n_modes + 1):.4g}")


@dataclass
class DiagnosticsRow:
    t: float
    mass: float
    energy: float
    m_s: float
    e_s: float
    l6_accumulator: float
    max_amp: float
    boundary_mass: float
    mode_tail: float

    FIELDS = ("t", "mass", "energy", "m_s", "e_s", "l6_accumulator", "max_amp",
              "boundary_mass", "mode_tail")

    def as_tuple(self):
        return tuple(getattr(self, k) for k in self.FIELDS)


# ---------------------------------------------------------------------------
# confined NLS
# ---------------------------------------------------------------------------

def nonlinear_phase_step(f, dt):
    """Exact flow of ``i u_t = |u|^4 u`` by collocation in x2.

    The collocation synthesis matrix is square and orthogonal under the
    Gauss weights, so the pointwise unimodular factor is exactly unitary in
    mode space.
    """
    g = f.physical()
    b = g.basis
    u = g.coeffs @ b.basis_on_collocation.T
    u = _kernels.quintic_phase(u, dt)
    return g.with_coeffs((u * b.collocation_weights) @ b.basis_on_collocation)


def step_phnls(f, dt):
    """One Strang step: half linear flow, nonlinear phase, half linear flow."""
    g = phnls_linear_flow(f, 0.5 * dt)
    g = nonlinear_phase_step(g, dt)
    g = phnls_linear_flow(g, 0.5 * dt)
    if not g.is_finite():
        raise BlowupError("non-finite amplitudes in strang_phnls step")
    return g


def collocation_sextic(f):
    """``int |u|^6`` with the x2 integral on the collocation rule (the scheme's own quadrature)."""
    g = f.physical()
    u = g.coeffs @ g.basis.basis_on_collocation.T
    return float(g.grid.spacing * np.sum(_kernels.sextic_density(u) @ g.basis.collocation_weights))


def phnls_energy(f):
    """``1/2 ||grad u||^2 + 1/2 ||x2 u||^2 + 1/6 int |u|^6``.

    The x2 quadratic part is ``1/2 sum (2n+1) ||c_n||^2``; the sextic term
    uses the collocation rule, making this the exact invariant of the
    semi-discrete Strang scheme.
    """
    return 0.5 * kinetic_x1_sq(f) + 0.5 * hermite_weighted_sq(f) + collocation_sextic(f) / 6.0


def quintic_tail(f):
    """L2 norm of ``|u|^4 u`` in modes ``>= n_modes`` (content the state cannot hold)."""
    g = f.physical()
    n = g.basis.n_modes
    top = 5 * n - 4
    if top <= n:
        return 0.0
    x, wq = scaled_rule(5 * n)
    full = hermite_matrix(top, x)
    u = g.coeffs @ full[:, :n].T
    proj = (_kernels.quintic(u) * wq) @ full[:, n:]
    return math.sqrt(g.grid.spacing * float(np.sum(row_mass(proj))))


# ---------------------------------------------------------------------------
# resonant system
# ---------------------------------------------------------------------------

def _dcr_rhs(nonlinearity):
    if nonlinearity is None:
        nonlinearity = dcr_nonlinearity

    def rhs(v):
        out = nonlinearity(v)
        return out.with_coeffs(-1j * out.coeffs)

    return rhs


def _zero_nonlinearity(v):
    return v.physical().with_coeffs(np.zeros_like(v.coeffs))


ZERO_NONLINEARITY = _zero_nonlinearity


def step_dcr(f, dt, nonlinearity=None):
    """One Lawson RK4 step in the interaction picture of the free x1 flow."""
    rhs = _dcr_rhs(nonlinearity)
    h = dt
    v = f.physical()
    ev_half = free_flow_x1(v, 0.5 * h)
    k1 = rhs(v)
    k2 = rhs(ev_half + free_flow_x1(k1, 0.5 * h) * (0.5 * h))
    k3 = rhs(ev_half + k2 * (0.5 * h))
    k4 = rhs(free_flow_x1(v, h) + free_flow_x1(k3, 0.5 * h) * h)
    acc = free_flow_x1(v + k1 * (h / 6.0), h) + free_flow_x1(k2 + k3, 0.5 * h) * (h / 3.0) + k4 * (h / 6.0)
    if not acc.is_finite():
        raise BlowupError("non-finite amplitudes in lawson_rk4_dcr step")
    return acc


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def l6_density(f):
    """``int ||u(x1)||_{L2_x2}^6 dx1``."""
    g = f.physical()
    return float(g.grid.spacing * np.sum(row_mass(g.coeffs) ** 3))


def max_amplitude(f):
    g = f.physical()
    samples = inverse_transform(g.basis, g.coeffs, nodes="nonlinear")
    return float(np.max(np.abs(samples))) if samples.size else 0.0


def diagnostics_row(f, t, l6_acc, scheme):
    m, ms = resonant_mass(f)
    tail = resonant_tail(f) if scheme == "lawson_rk4_dcr" else quintic_tail(f)
    return DiagnosticsRow(
        t=float(t), mass=m, energy=phnls_energy(f), m_s=ms, e_s=resonant_energy(f),
        l6_accumulator=float(l6_acc), max_amp=max_amplitude(f),
        boundary_mass=boundary_mass(f), mode_tail=tail)


def run(f0, spec, nonlinearity=None, on_step=None):
    """Advance ``f0`` to ``spec.t_end``.

    Returns
    -------
    final : Field
    diagnostics : list of DiagnosticsRow
        Rows at ``t = 0``, every ``diag_stride`` steps and at ``t_end``.

    Raises
    ------
    BlowupError
        Carries the rows sampled before the state became non-finite.
    """
    spec.check_guard(f0.basis.n_modes)
    dt = spec.step
    n_steps = spec.n_steps
    if spec.scheme == "strang_phnls":
        if nonlinearity is not None:
            raise ValueError("custom nonlinearity is only supported for lawson_rk4_dcr")
        stepper = step_phnls
    else:
        def stepper(g, h):
            return step_dcr(g, h, nonlinearity)

    f = f0.physical()
    l6_acc = 0.0
    dens = l6_density(f)
    rows = [diagnostics_row(f, 0.0, l6_acc, spec.scheme)]
    for k in range(1, n_steps + 1):
        try:
            f = stepper(f, dt)
        except BlowupError as exc:
            exc.t = (k - 1) * dt
            exc.diagnostics = rows
            raise
        new_dens = l6_density(f)
        l6_acc += 0.5 * dt * (dens + new_dens)
        dens = new_dens
        if on_step is not None:
            on_step(k, k * dt, f)
        if k % spec.diag_stride == 0 or k == n_steps:
            rows.append(diagnostics_row(f, k * dt, l6_acc, spec.scheme))
    return f, rows
