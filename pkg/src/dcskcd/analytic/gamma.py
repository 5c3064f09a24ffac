"""Gamma-distributed SNRs and sums of independent gammas.

``G(a, b)`` has density ``x**(a-1) exp(-x/b) / (b**a Gamma(a))``.  A sum of
independent gammas with a common scale is again gamma; with distinct scales
the density is expanded with Moschopoulos' single series

    f(x) = sum_i w_i g(x; rho + i, b0),    w_i = C eta_i,   sum_i w_i = 1,

a mixture of gamma densities sharing the smallest scale ``b0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sps

from ..errors import ConfigurationError, DivergenceError, PrecisionError

MAX_TERMS = 100_000
_EQUAL_RTOL = 1e-12


@dataclass(frozen=True)
class GammaDist:
    shape: float
    scale: float

    def __post_init__(self) -> None:
        if not (self.shape > 0 and self.scale > 0):
            raise ConfigurationError(f"gamma parameters must be positive: {self}")

    @property
    def mean(self) -> float:
        return self.shape * self.scale

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            logp = ((self.shape - 1.0) * np.log(x) - x / self.scale
                    - self.shape * math.log(self.scale) - math.lgamma(self.shape))
        return np.where(x > 0, np.exp(logp), 0.0)

    def scaled(self, factor: float) -> "GammaDist":
        return GammaDist(self.shape, self.scale * factor)


def gamma_mgf(d: GammaDist, s: float) -> float:
    """``E[exp(sX)] = (1 - s b)**-a``, defined for ``s < 1/b``."""
    if s * d.scale >= 1.0:
        raise DivergenceError(f"MGF of {d} diverges at s={s}")
    return (1.0 - s * d.scale) ** (-d.shape)


@dataclass
class GammaSum:
    components: tuple[GammaDist, ...]
    reduced: GammaDist | None
    rho: float
    b0: float
    log_c: float
    _z_rates: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)
    _eta: list = field(default_factory=list, repr=False)
    _log_scale: float = 0.0

    @property
    def c(self) -> float:
        return math.exp(self.log_c)

    @property
    def mean(self) -> float:
        return sum(d.mean for d in self.components)

    def z(self, j: int) -> float:
        """``z_j = sum_k a_k (1 - b0/b_k)**j / j``."""
        return float(sum(d.shape * (1.0 - self.b0 / d.scale) ** j for d in self.components) / j)

    def eta(self, count: int) -> np.ndarray:
        """First ``count`` coefficients ``eta_i`` (``eta_0 = 1``)."""
        self._extend(count)
        return np.asarray(self._eta[:count]) * math.exp(self._log_scale)

    def log_weights(self, count: int) -> np.ndarray:
        """``log(C eta_i)`` for ``i < count``; the weights sum to one."""
        self._extend(count)
        with np.errstate(divide="ignore"):
            return self.log_c + self._log_scale + np.log(np.asarray(self._eta[:count]))

    def terms_for_mass(self, tol: float) -> int:
        """Smallest term count whose mixture weights reach ``1 - tol``."""
        if self.reduced is not None:
            return 1
        n = 64
        while True:
            w = np.exp(self.log_weights(n))
            cum = np.cumsum(w)
            hit = np.nonzero(cum >= 1.0 - tol)[0]
            if hit.size:
                return int(hit[0]) + 1
            if n >= MAX_TERMS:
                raise PrecisionError(f"Moschopoulos weights reach only {cum[-1]!r} "
                                     f"after {MAX_TERMS} terms")
            n = min(2 * n, MAX_TERMS)

    def _extend(self, count: int) -> None:
        if count > MAX_TERMS:
            raise PrecisionError(f"more than {MAX_TERMS} Moschopoulos terms requested")
        have = len(self._eta)
        if have >= count:
            return
        if have == 0:
            self._eta = [1.0]
            have = 1
        if len(self._z_rates) < count:
            # t z_t = sum_k a_k (1 - b0/b_k)**t
            t = np.arange(1, count + 1, dtype=float)
            rates = np.zeros(count)
            for d in self.components:
                q = 1.0 - self.b0 / d.scale
                if q > 0:
                    rates += d.shape * np.exp(t * math.log(q))
            self._z_rates = rates
        tz = self._z_rates
        eta = np.empty(count)
        eta[:have] = self._eta
        for i in range(have, count):
            # stored values carry a common factor exp(-_log_scale)
            eta[i] = float(tz[:i] @ eta[i - 1::-1]) / i
            if eta[i] > 1e290:
                eta[: i + 1] *= 1e-290
                self._log_scale += 290.0 * math.log(10.0)
        self._eta = eta.tolist()


def gamma_sum(components) -> GammaSum:
    comps = tuple(components)
    if not comps:
        raise ConfigurationError("need at least one component")
    rho = float(sum(d.shape for d in comps))
    scales = [d.scale for d in comps]
    b0 = min(scales)
    if max(scales) - b0 <= _EQUAL_RTOL * b0:
        return GammaSum(comps, GammaDist(rho, b0), rho, b0, 0.0)
    log_c = float(sum(d.shape * math.log(b0 / d.scale) for d in comps))
    return GammaSum(comps, None, rho, b0, log_c)


def _mixture_log_terms(s: GammaSum, x: np.ndarray, count: int) -> np.ndarray:
    i = np.arange(count, dtype=float)
    shape = s.rho + i
    lw = s.log_weights(count)
    logx = np.log(x)[..., None]
    return (lw + (shape - 1.0) * logx - x[..., None] / s.b0
            - sps.gammaln(shape) - shape * math.log(s.b0))


def gamma_sum_pdf(s: GammaSum, x, tol: float = 1e-12, return_terms: bool = False):
    """Density of the sum at ``x > 0``.

    The series is extended until the next term adds less than ``tol``
    relative to the partial sum, past the largest term.
    """
    if not tol > 0:
        raise ConfigurationError("tol must be > 0")
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ConfigurationError("density is evaluated for x > 0 only")
    if s.reduced is not None:
        val = s.reduced.pdf(xa)
        return (val, 0) if return_terms else val
    # the i-th gamma density peaks near i = x/b0 - rho
    count = max(32, int(np.max(xa) / s.b0 - s.rho) + 32)
    while True:
        logt = _mixture_log_terms(s, xa.reshape(-1), count)
        peak = np.max(logt, axis=-1, keepdims=True)
        terms = np.exp(logt - peak)
        total = terms.sum(axis=-1)
        last = terms[:, -1]
        if np.all(last < tol * total) and np.all(np.argmax(logt, axis=-1) < count - 1):
            break
        if count >= MAX_TERMS:
            raise PrecisionError("Moschopoulos density did not converge")
        count = min(2 * count, MAX_TERMS)
    val = (total * np.exp(peak[:, 0])).reshape(xa.shape)
    if val.ndim == 0:
        val = float(val)
    return (val, count) if return_terms else val
