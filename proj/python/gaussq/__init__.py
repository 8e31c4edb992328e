"""Python access to the gaussq library.

Covariance construction, path-state preparation, norm estimation,
exponentiation and discrete sums are exposed as plain functions taking
and returning numpy arrays and dicts.
"""

from ._gaussq import (
    CalibrationError,
    Error,
    InvalidInput,
    UnknownFormula,
    build_cov,
    characteristics,
    complexity_exponent,
    discrete_sum,
    estimate_norm,
    expected_exponent,
    exponentiate,
    fit_power_law,
    hyp2f1,
    p_tilde,
    predict,
    prepare_x,
    prepare_y,
    rlfbm_cov,
    sample_std_normal,
    stdfbm_cov,
)

__all__ = [name for name in dir() if not name.startswith("_")]
