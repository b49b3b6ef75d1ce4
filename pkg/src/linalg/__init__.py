# 稠密线性代数模块
from src.linalg.dense import (
    EigenResult,
    center_columns,
    cholesky_factor,
    cholesky_logdet,
    covariance,
    fix_signs,
    solve_spd,
    spd_inverse,
    sym_eig,
)

__all__ = [
    "EigenResult",
    "center_columns",
    "cholesky_factor",
    "cholesky_logdet",
    "covariance",
    "fix_signs",
    "solve_spd",
    "spd_inverse",
    "sym_eig",
]
