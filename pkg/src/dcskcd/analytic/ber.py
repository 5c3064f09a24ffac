"""Average BER of the non-cooperative and cooperative DCSK links.

Every link's instantaneous SNR is gamma distributed; the exact BER averages
the conditional BER ``Q(sqrt(g**2 / (2g + f)))`` over that distribution by
adaptive quadrature.  The approximate BER replaces the conditional BER by a
Gaussian tail in a moment-matched gamma variable and evaluates the Craig
integral in closed form.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize
from scipy import stats

from ..errors import ConfigurationError, PrecisionError, UnsupportedConfigurationError
from .gamma import GammaDist, GammaSum, _mixture_log_terms, gamma_sum
from .special import gauss_2f1_special, q_function

SQRT2 = math.sqrt(2.0)
TAIL = 1e-14
MIXTURE_TAIL = 1e-12
EPSABS = 1e-13
EPSREL = 1e-10


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def conditional_ber(gamma_b: float, f: float) -> float:
    if gamma_b < 0:
        raise ConfigurationError("SNR must be non-negative")
    if f < 1:
        raise ConfigurationError("segment length must be >= 1")
    if math.isinf(gamma_b):
        return 0.0
    return q_function(gamma_b / math.sqrt(2.0 * gamma_b + f))


def _density(snr):
    """Scalar density callable, total shape and a stochastically larger gamma."""
    if isinstance(snr, GammaDist):
        a, b = snr.shape, snr.scale
        log_norm = -a * math.log(b) - math.lgamma(a)

        def pdf(x: float) -> float:
            return math.exp((a - 1.0) * math.log(x) - x / b + log_norm)

        return pdf, a, b, b
    if snr.reduced is not None:
        return _density(snr.reduced)
    count = snr.terms_for_mass(MIXTURE_TAIL)

    def pdf(x: float) -> float:
        return float(np.exp(_mixture_log_terms(snr, np.array([x]), count)).sum())

    return pdf, snr.rho, snr.b0, max(d.scale for d in snr.components)


def average_ber(snr: GammaDist | GammaSum, f: float) -> float:
    """``E[conditional_ber(gamma, f)]`` for a gamma or gamma-sum SNR."""
    pdf, shape, b_small, b_big = _density(snr)
    upper = float(stats.gamma.isf(TAIL, shape, scale=b_big))
    mean = snr.mean if isinstance(snr, GammaSum) else snr.mean

    def g(x: float) -> float:
        if x <= 0.0:
            return 0.0
        return pdf(x) * q_function(x / math.sqrt(2.0 * x + f))

    if shape < 1.0:
        # x = v**(1/shape) removes the x**(shape-1) singularity at the origin
        p = 1.0 / shape

        def h(v: float) -> float:
            if v <= 0.0:
                return 0.0
            x = v ** p
            return g(x) * p * x / v

        func, hi, pts = h, upper ** shape, [min(mean, upper) ** shape]
    else:
        func, hi, pts = g, upper, [min(mean, upper), min(shape * b_small, upper)]
    pts = sorted({p for p in pts if 0.0 < p < hi})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(func, 0.0, hi, points=pts or None, epsabs=EPSABS,
                             epsrel=EPSREL, limit=500, full_output=1)
    value, err = out[0], out[1]
    if len(out) == 4 and err > max(1e-10, 1e-6 * value):
        raise PrecisionError(f"BER quadrature did not converge: {out[3]}")
    return min(max(value, 0.0), 0.5)


def exact_ber_nc(ebn0_db: float, m: float, L: int, f: float) -> float:
    if not m * L > 0:
        raise ConfigurationError("m*L must be positive")
    if ebn0_db == -math.inf:
        return 0.5
    g = db_to_linear(ebn0_db)
    return average_ber(GammaDist(m * L, g / (m * L)), f)


@dataclass(frozen=True)
class LinkBudget:
    """Gamma parameters of the S-D (1), R-D (2) and S-R (3) links."""

    a1: float
    b1: float
    a2: float
    b2: float
    a3: float
    b3: float

    @classmethod
    def from_parameters(cls, ebn0_db: float, m: float, L: int, n: int,
                        m_r: int = 1, m_d: int = 1, d_sd: float = 1.0,
                        d_sr: float = 1.0, d_rd: float = 1.0) -> "LinkBudget":
        if min(m, L, n, m_r, m_d, d_sd, d_sr, d_rd) <= 0:
            raise ConfigurationError("link budget parameters must be positive")
        g = db_to_linear(ebn0_db)
        base = m * n * L
        return cls(
            a1=m_d * m * L, b1=g / (2 * m_d * d_sd**2 * base),
            a2=m_r * m_d * m * L, b2=g / (2 * m_r * m_d * d_rd**2 * base),
            a3=m_r * m * L, b3=g / (2 * m_r * d_sr**2 * base),
        )

    @property
    def sd(self) -> GammaDist:
        return GammaDist(self.a1, self.b1)

    @property
    def rd(self) -> GammaDist:
        return GammaDist(self.a2, self.b2)

    @property
    def sr(self) -> GammaDist:
        return GammaDist(self.a3, self.b3)

    @property
    def balanced(self) -> bool:
        return abs(self.b1 - self.b2) <= 1e-12 * max(self.b1, self.b2)

    def destination(self) -> GammaSum:
        """Distribution of ``(gamma_SD + gamma_RD) / sqrt(2)``."""
        return gamma_sum([self.sd.scaled(1 / SQRT2), self.rd.scaled(1 / SQRT2)])


def compose_df(ber_sr: float, ber_sd: float, ber_d: float) -> float:
    """Relay forwards when it decodes correctly, otherwise only S-D is used."""
    for v in (ber_sr, ber_sd, ber_d):
        if not 0.0 <= v <= 1.0:
            raise ConfigurationError(f"probability out of range: {v}")
    return ber_sr * ber_sd + (1.0 - ber_sr) * ber_d


def exact_ber_cd_ef(budget: LinkBudget, f: float) -> float:
    return average_ber(budget.destination(), f)


def exact_ber_cd_df(budget: LinkBudget, f: float) -> float:
    return compose_df(average_ber(budget.sr, f), average_ber(budget.sd, f),
                      exact_ber_cd_ef(budget, f))


def _craig_shape(a: float, b: float, f: float) -> tuple[float, float]:
    mean = a * b
    a_w = a * ((mean + f / 2) / (mean + f)) ** 2
    b_w = b * mean * (mean + f) ** 2 / (2 * (mean + f / 2) ** 3)
    return a_w, b_w


def approx_ber(a: float, b: float, f: float) -> float:
    if not (a > 0 and b > 0):
        raise ConfigurationError("shape and scale must be positive")
    a_w, b_w = _craig_shape(a, b, f)
    if b_w == 0.0:
        return 0.5
    log_lead = (0.5 * math.log(b_w) + math.lgamma(a_w + 0.5) - math.lgamma(a_w + 1.0)
                - (a_w + 0.5) * math.log1p(b_w / 2))
    hyp = gauss_2f1_special(a_w, 2.0 / (2.0 + b_w), b_w / (2.0 + b_w))
    return math.exp(log_lead) * hyp / (2.0 * math.sqrt(2.0 * math.pi))


def approx_ber_nc(ebn0_db: float, m: float, L: int, f: float) -> float:
    if ebn0_db == -math.inf:
        return 0.5
    g = db_to_linear(ebn0_db)
    return approx_ber(m * L, g / (m * L), f)


def approx_ber_cd_ef(budget: LinkBudget, f: float) -> float:
    if not budget.balanced:
        raise UnsupportedConfigurationError(
            "closed form needs equal S-D and R-D scales (d_SD/d_RD = sqrt(M_R))")
    return approx_ber(budget.a1 + budget.a2, budget.b1 / SQRT2, f)


def approx_ber_cd_df(budget: LinkBudget, f: float) -> float:
    return compose_df(approx_ber(budget.a3, budget.b3, f),
                      approx_ber(budget.a1, budget.b1, f),
                      approx_ber_cd_ef(budget, f))


def ebn0_for_ber(curve, target: float, lo: float = -10.0, hi: float = 60.0) -> float:
    """Eb/N0 (dB) at which the decreasing ``curve(ebn0_db)`` reaches ``target``."""
    fn = lambda x: math.log(curve(x)) - math.log(target)  # noqa: E731
    if fn(lo) < 0 or fn(hi) > 0:
        raise ConfigurationError(f"target BER {target} not bracketed in [{lo}, {hi}] dB")
    return optimize.brentq(fn, lo, hi, xtol=1e-6)
