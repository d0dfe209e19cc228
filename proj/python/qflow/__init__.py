"""q-Gaussian porous medium flow: constants, closed forms and the quadrature oracle."""

from ._qflow import (
    DomainError,
    InvalidParameter,
    NumericalError,
    OutsideVerifiedRange,
    QGaussian1D,
    QParams,
    coefficients,
    entropy_diff,
    evolve_sigma,
    gamma_table,
    jh,
    jko_step,
    kh,
    make_params,
    mass_quad,
    q_exp,
    q_log,
    rescaled_first,
    rescaled_second,
    rescaled_third,
    verify,
    wasserstein2_sq,
)

__all__ = [
    "DomainError",
    "InvalidParameter",
    "NumericalError",
    "OutsideVerifiedRange",
    "QGaussian1D",
    "QParams",
    "coefficients",
    "entropy_diff",
    "evolve_sigma",
    "gamma_table",
    "jh",
    "jko_step",
    "kh",
    "make_params",
    "mass_quad",
    "q_exp",
    "q_log",
    "rescaled_first",
    "rescaled_second",
    "rescaled_third",
    "verify",
    "wasserstein2_sq",
]
