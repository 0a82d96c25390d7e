"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is chosen once at import time. Setting ``DCRLAB_DISABLE_NUMBA=1``
in the environment (or running where numba is not importable) selects the
numpy implementations. Both backends are always importable through
:data:`NUMPY_KERNELS` and :data:`NUMBA_KERNELS` so the benchmark and tests can
compare them directly.
"""

import math
import os

import numpy as np

_LOG_RESCALE = 230.0  # rescale the recurrence when |h| > e^230
_RESCALE_AT = math.exp(_LOG_RESCALE)
_PI_QUARTER = math.pi ** -0.25
_LOG_FLOOR = -700.0  # below this exp() underflows; combine in log space

try:  # pragma: no cover - exercised implicitly by whichever backend is active
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _env_disabled():
    return os.environ.get("DCRLAB_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


# --------------------------------------------------------------------------
# numpy implementations
# --------------------------------------------------------------------------

def hermite_matrix_numpy(n_modes, x):
    """Values e_n(x_k) as an array of shape (len(x), n_modes)."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((x.size, n_modes))
    h_prev = np.zeros_like(x)
    h = np.full_like(x, _PI_QUARTER)
    logscale = -0.5 * x * x
    out[:, 0] = _combine_numpy(h, logscale)
    for n in range(n_modes - 1):
        h_next = math.sqrt(2.0 / (n + 1)) * x * h - math.sqrt(n / (n + 1.0)) * h_prev
        h_prev, h = h, h_next
        big = np.abs(h) > _RESCALE_AT
        if big.any():
            h = np.where(big, h / _RESCALE_AT, h)
            h_prev = np.where(big, h_prev / _RESCALE_AT, h_prev)
            logscale = np.where(big, logscale + _LOG_RESCALE, logscale)
        out[:, n + 1] = _combine_numpy(h, logscale)
    return out


def _combine_numpy(h, logscale):
    safe = logscale > _LOG_FLOOR
    direct = h * np.exp(np.where(safe, logscale, 0.0))
    with np.errstate(divide="ignore"):
        via_log = np.sign(h) * np.exp(np.log(np.abs(h)) + logscale)
    return np.where(safe, direct, via_log)


def quintic_numpy(w):
    a = w.real * w.real + w.imag * w.imag
    return (a * a) * w


def quintic_phase_numpy(u, dt):
    a = u.real * u.real + u.imag * u.imag
    return u * np.exp(-1j * dt * (a * a))


def sextic_density_numpy(w):
    a = w.real * w.real + w.imag * w.imag
    return a * a * a


def resonant_direct_numpy(coeffs, tensor):
    """Literal resonant quintuple sum, one row of ``coeffs`` per x1 point."""
    n = coeffs.shape[1]
    idx = np.arange(n)
    total = (idx[:, None, None, None, None] - idx[None, :, None, None, None]
             + idx[None, None, :, None, None] - idx[None, None, None, :, None]
             + idx[None, None, None, None, :])
    mask = (total[..., None] == idx).astype(np.float64)
    masked = tensor * mask
    cc = np.conj(coeffs)
    return np.einsum("abcden,xa,xb,xc,xd,xe->xn", masked, coeffs, cc, coeffs, cc, coeffs,
                     optimize=True)


# --------------------------------------------------------------------------
# numba implementations
# --------------------------------------------------------------------------

def _combine(h, logscale):
    if logscale > _LOG_FLOOR:
        return h * math.exp(logscale)
    if h == 0.0:
        return 0.0
    return math.copysign(math.exp(math.log(abs(h)) + logscale), h)


def _hermite_matrix_loop(n_modes, x):
    npts = x.shape[0]
    out = np.empty((npts, n_modes))
    for k in range(npts):
        xk = x[k]
        h_prev = 0.0
        h = _PI_QUARTER
        logscale = -0.5 * xk * xk
        out[k, 0] = _combine(h, logscale)
        for n in range(n_modes - 1):
            h_next = math.sqrt(2.0 / (n + 1)) * xk * h - math.sqrt(n / (n + 1.0)) * h_prev
            h_prev = h
            h = h_next
            if abs(h) > _RESCALE_AT:
                h /= _RESCALE_AT
                h_prev /= _RESCALE_AT
                logscale += _LOG_RESCALE
            out[k, n + 1] = _combine(h, logscale)
    return out


def _quintic_loop(w):
    out = np.empty_like(w)
    flat_in = w.reshape(-1)
    flat_out = out.reshape(-1)
    for i in range(flat_in.size):
        z = flat_in[i]
        a = z.real * z.real + z.imag * z.imag
        flat_out[i] = (a * a) * z
    return out


def _quintic_phase_loop(u, dt):
    out = np.empty_like(u)
    flat_in = u.reshape(-1)
    flat_out = out.reshape(-1)
    for i in range(flat_in.size):
        z = flat_in[i]
        a = z.real * z.real + z.imag * z.imag
        theta = dt * a * a
        flat_out[i] = z * complex(math.cos(theta), -math.sin(theta))
    return out


def _sextic_density_loop(w):
    out = np.empty(w.shape)
    flat_in = w.reshape(-1)
    flat_out = out.reshape(-1)
    for i in range(flat_in.size):
        z = flat_in[i]
        a = z.real * z.real + z.imag * z.imag
        flat_out[i] = a * a * a
    return out


def _resonant_direct_loop(coeffs, tensor):
    npts, n = coeffs.shape
    out = np.zeros((npts, n), dtype=np.complex128)
    for x in range(npts):
        c = coeffs[x]
        for n1 in range(n):
            for n2 in range(n):
                p12 = c[n1] * np.conj(c[n2])
                for n3 in range(n):
                    p123 = p12 * c[n3]
                    for n4 in range(n):
                        p1234 = p123 * np.conj(c[n4])
                        for n5 in range(n):
                            m = n1 - n2 + n3 - n4 + n5
                            if m < 0 or m >= n:
                                continue
                            out[x, m] += tensor[n1, n2, n3, n4, n5, m] * p1234 * c[n5]
    return out


NUMPY_KERNELS = {
    "hermite_matrix": hermite_matrix_numpy,
    "quintic": quintic_numpy,
    "quintic_phase": quintic_phase_numpy,
    "sextic_density": sextic_density_numpy,
    "resonant_direct": resonant_direct_numpy,
}

if HAVE_NUMBA:
    _jit = numba.njit(cache=True)
    _combine = _jit(_combine)
    NUMBA_KERNELS = {
        "hermite_matrix": _jit(_hermite_matrix_loop),
        "quintic": _jit(_quintic_loop),
        "quintic_phase": _jit(_quintic_phase_loop),
        "sextic_density": _jit(_sextic_density_loop),
        "resonant_direct": _jit(_resonant_direct_loop),
    }
else:  # pragma: no cover
    NUMBA_KERNELS = {}

USE_NUMBA = HAVE_NUMBA and not _env_disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"
_ACTIVE = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS


def hermite_matrix(n_modes, x):
    return _ACTIVE["hermite_matrix"](int(n_modes), np.ascontiguousarray(x, dtype=np.float64))


def quintic(w):
    return _ACTIVE["quintic"](np.ascontiguousarray(w, dtype=np.complex128))


def quintic_phase(u, dt):
    return _ACTIVE["quintic_phase"](np.ascontiguousarray(u, dtype=np.complex128), float(dt))


def sextic_density(w):
    return _ACTIVE["sextic_density"](np.ascontiguousarray(w, dtype=np.complex128))


def resonant_direct(coeffs, tensor):
    return _ACTIVE["resonant_direct"](np.ascontiguousarray(coeffs, dtype=np.complex128),
                                      np.ascontiguousarray(tensor, dtype=np.float64))
