"""Special functions used by the BER expressions."""
from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigurationError, PrecisionError

_SQRT2 = math.sqrt(2.0)
_SERIES_TOL = 1e-17
_DIRECT_LIMIT = 1.0 - 1e-3
_MAX_TERMS = 10**6


def log_gamma(x: float) -> float:
    if not x > 0:
        raise ConfigurationError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def q_function(x: float) -> float:
    """Gaussian tail probability ``Q(x) = P(N(0, 1) > x)``."""
    return 0.5 * math.erfc(x / _SQRT2)


def _series(ratio_num: float, ratio_den: float, x: float) -> float:
    """``sum_k prod_{j<k} (ratio_num + j) / (ratio_den + j) * x``, summed in chunks."""
    total = 0.0
    term = 1.0
    k0 = 0
    chunk = 64
    while k0 < _MAX_TERMS:
        k = np.arange(k0, k0 + chunk, dtype=float)
        factors = (ratio_num + k) / (ratio_den + k) * x
        terms = term * np.concatenate(([1.0], np.cumprod(factors[:-1])))
        total += float(terms.sum())
        term = float(terms[-1] * factors[-1])
        if term < _SERIES_TOL * total and factors[-1] < 1.0:
            return total
        k0 += chunk
        chunk = min(chunk * 2, 1 << 16)
    raise PrecisionError("hypergeometric series did not converge")


def gauss_2f1_special(a: float, z: float, one_minus_z: float | None = None) -> float:
    """``2F1(1, a + 1/2; a + 1; z)`` for ``a > 0`` and ``0 <= z < 1``.

    The Gauss series is summed directly up to ``z = 1 - 1e-3``.  Closer to
    one the ``1 - z`` connection formula is used; its second hypergeometric
    factor collapses to ``z**-a``, leaving

        B (1 - z)**-1/2 z**-a - 2a 2F1(1, a + 1/2; 3/2; 1 - z),
        B = sqrt(pi) Gamma(a + 1) / Gamma(a + 1/2).

    Callers that know ``1 - z`` more accurately than ``z`` itself can pass it
    as ``one_minus_z``.
    """
    if not a > 0:
        raise ConfigurationError("gauss_2f1_special needs a > 0")
    if not 0.0 <= z < 1.0:
        raise ConfigurationError(f"argument must lie in [0, 1), got {z}")
    if z == 0.0:
        return 1.0
    if z <= _DIRECT_LIMIT:
        # term ratio of 2F1(1, b; c; z) is (b + k) / (c + k) * z
        return _series(a + 0.5, a + 1.0, z)
    x = 1.0 - z if one_minus_z is None else one_minus_z
    log_b = 0.5 * math.log(math.pi) + math.lgamma(a + 1.0) - math.lgamma(a + 0.5)
    lead = math.exp(log_b - 0.5 * math.log(x) - a * math.log(z))
    return lead - 2.0 * a * _series(a + 0.5, 1.5, x)
