"""Complex log-gamma kernel.

Every series term and every contour-integrand evaluation in this library
funnels through the three functions here.  The implementation is a fixed
Lanczos approximation (g = 7, 9 coefficients) valid for Re z >= 0.5,
extended to the left half-plane by the reflection formula with an
overflow-safe log-sin.

Branch note: in the reflected region the imaginary part of ``ln_gamma``
may differ from the principal branch by a multiple of 2*pi.  All call
sites exponentiate sums of log-gammas, so the offset is invisible; the
principal branch is returned wherever Re z >= 0.5.
"""

from __future__ import annotations

import numpy as np

from .errors import PoleError

_LANCZOS_G = 7.0
_LANCZOS = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)
_LOG_SQRT_2PI = 0.91893853320467274178
_LOG_PI = 1.1447298858494001741

#: absolute distance below which an argument counts as sitting on a pole
POLE_TOL = 1e-14


def is_nonpositive_integer(z, tol: float = POLE_TOL) -> bool:
    """True when z lies within ``tol`` of 0, -1, -2, ..."""
    z = complex(z)
    if abs(z.imag) > tol:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


def _core(z):
    # Lanczos sum, valid for Re z >= 0.5; z is a complex ndarray.
    w = z - 1.0
    x = np.full_like(w, _LANCZOS[0])
    for k in range(1, len(_LANCZOS)):
        x = x + _LANCZOS[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (w + 0.5) * np.log(t) - t + np.log(x)


def _log_sin_pi(z):
    # log(sin(pi z)) correct mod 2*pi*i, safe for large |Im z|.
    z = np.asarray(z, dtype=complex)
    flip = z.imag < 0.0
    zz = np.where(flip, np.conj(z), z)
    small = np.abs(zz.imag) <= 1.0
    # direct formula where sin cannot overflow
    direct = np.log(np.sin(np.pi * np.where(small, zz, 0.5)))
    # sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2 i); |e^{2 i pi z}| < 1
    zl = np.where(small, 1.5j, zz)
    tail = (
        -1j * np.pi * zl
        + np.log1p(-np.exp(2j * np.pi * zl))
        + (1j * np.pi - np.log(2j))
    )
    out = np.where(small, direct, tail)
    return np.where(flip, np.conj(out), out)


def ln_gamma_vec(z):
    """Vectorized log Gamma on complex arrays.  No pole checking."""
    z = np.asarray(z, dtype=complex)
    refl = z.real < 0.5
    zz = np.where(refl, 1.0 - z, z)
    out = _core(zz)
    return np.where(refl, _LOG_PI - _log_sin_pi(z) - out, out)


def ln_gamma(z) -> complex:
    """log Gamma(z) for complex z, raising PoleError on the poles."""
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"ln_gamma requires finite argument, got {z}")
    if is_nonpositive_integer(z):
        raise PoleError(f"ln_gamma pole at z = {z}")
    return complex(ln_gamma_vec(z))


def gamma(z) -> complex:
    """Gamma(z) via exp(ln_gamma(z))."""
    return np.exp(ln_gamma(z))


def gamma_reciprocal(z) -> complex:
    """1 / Gamma(z); entire, returns exactly 0 at the poles of Gamma."""
    z = complex(z)
    if is_nonpositive_integer(z):
        return 0.0 + 0.0j
    return complex(np.exp(-ln_gamma_vec(z)))


def gamma_ratio(p: float, q: float) -> float:
    """Gamma(p) / Gamma(q) for real p, q.

    A pole of the denominator sends the ratio to 0 (the Riemann-Liouville
    kernel convention); a pole of the numerator raises PoleError.
    """
    if is_nonpositive_integer(p):
        raise PoleError(f"gamma_ratio numerator pole at p = {p}")
    if is_nonpositive_integer(q):
        return 0.0
    val = np.exp(complex(ln_gamma_vec(p)) - complex(ln_gamma_vec(q)))
    return float(val.real)
