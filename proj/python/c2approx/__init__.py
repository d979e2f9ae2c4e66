from ._c2approx import (
    best_error,
    modulus,
    rho,
    suite_names,
    unity_residual,
)

__all__ = ["best_error", "modulus", "rho", "suite_names", "unity_residual"]
