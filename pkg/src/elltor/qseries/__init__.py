"""Truncated series, parameter points and infinite-product special functions."""

from .params import DEFAULT, ParamError, ParamPoint, parse_quarter
from .series import NonTruncatable, Ring, Series, SeriesError
from .special import (elliptic_gamma, f_struct, f_struct_exp, finite_pochhammer, g_struct,
                      g_theta, pochhammer, pochhammer_inv, theta, theta_inv, theta_ratio)

__all__ = ["DEFAULT", "ParamError", "ParamPoint", "parse_quarter", "NonTruncatable", "Ring",
           "Series", "SeriesError", "elliptic_gamma", "f_struct", "f_struct_exp",
           "finite_pochhammer", "g_struct", "g_theta", "pochhammer", "pochhammer_inv",
           "theta", "theta_inv", "theta_ratio"]
