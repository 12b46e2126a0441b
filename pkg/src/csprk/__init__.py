"""Symplectic (partitioned) Runge-Kutta methods from continuous-stage coefficients."""

from .cscoeff import (
    CsCoeff,
    CsPair,
    build_general,
    build_symplectic_prk_AB,
    build_symplectic_prk_sym,
    build_symplectic_rk,
    check_C,
    check_D,
    check_symplectic_cs,
    check_symplectic_cs_pair,
    conjugate,
    order_bound_cs,
    order_bound_cs_pair,
)
from .quadrature import QuadratureRule, certify_order, gauss_rule, lobatto_rule, radau_left_rule, radau_right_rule
from .tableau import ButcherTableau, PartitionedTableau, retrieve_prk, retrieve_rk
from .verify import ConditionReport, report

__version__ = "0.1.0"
