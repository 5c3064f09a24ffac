"""Exact and closed-form BER expressions."""
from .ber import (
    LinkBudget,
    approx_ber,
    approx_ber_cd_df,
    approx_ber_cd_ef,
    approx_ber_nc,
    average_ber,
    compose_df,
    conditional_ber,
    db_to_linear,
    ebn0_for_ber,
    exact_ber_cd_df,
    exact_ber_cd_ef,
    exact_ber_nc,
)
from .gamma import GammaDist, GammaSum, gamma_mgf, gamma_sum, gamma_sum_pdf
from .special import gauss_2f1_special, log_gamma, q_function

__all__ = [
    "GammaDist", "GammaSum", "LinkBudget", "approx_ber", "approx_ber_cd_df",
    "approx_ber_cd_ef", "approx_ber_nc", "average_ber", "compose_df",
    "conditional_ber", "db_to_linear", "ebn0_for_ber", "exact_ber_cd_df",
    "exact_ber_cd_ef", "exact_ber_nc", "gamma_mgf", "gamma_sum",
    "gamma_sum_pdf", "gauss_2f1_special", "log_gamma", "q_function",
]
