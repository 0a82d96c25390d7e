"""Spectral laboratory for the quintic NLS under partial harmonic confinement
and its continuous resonant limit."""

__version__ = "0.1.0"

from .field import Field, Grid1D, NormReport, mass, norm_lp_l2, sobolev_and_sigma
from .hermite import HermiteBasis, build_basis, hermite_eval
from .evolve import DiagnosticsRow, IntegratorSpec, run, step_dcr, step_phnls
from .resonant import dcr_nonlinearity, dcr_nonlinearity_direct, resonant_energy, resonant_mass

__all__ = [
    "Field", "Grid1D", "NormReport", "mass", "norm_lp_l2", "sobolev_and_sigma",
    "HermiteBasis", "build_basis", "hermite_eval",
    "DiagnosticsRow", "IntegratorSpec", "run", "step_dcr", "step_phnls",
    "dcr_nonlinearity", "dcr_nonlinearity_direct", "resonant_energy", "resonant_mass",
]
