import json
import warnings

import numpy as np
import pytest

from csprk.cscoeff import build_general, build_symplectic_prk_AB, build_symplectic_prk_sym, build_symplectic_rk
from csprk.quadrature import gauss_rule, lobatto_rule, radau_left_rule, radau_right_rule
from csprk.reproduce import table1, table2, table3, table4, table5, table6
from csprk.tableau import ButcherTableau, retrieve_prk, retrieve_rk
from csprk.verify import (
    AmbiguousLevelWarning,
    check_B,
    check_C_discrete,
    check_D_discrete,
    check_symplectic_prk,
    check_symplectic_rk,
    report,
)

from oracles import GAUSS2_A, GAUSS2_C, collocation_matrix, radau_left_nodes

RK4 = ButcherTableau(
    [[0, 0, 0, 0], [0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 1, 0]],
    [1 / 6, 1 / 3, 1 / 3, 1 / 6],
    [0, 0.5, 0.5, 1],
)
EULER = ButcherTableau([[0.0]], [1.0], [0.0])


def test_midpoint_levels():
    t = retrieve_rk(build_symplectic_rk(1), gauss_rule(1))
    assert (check_B(t), check_C_discrete(t), check_D_discrete(t)) == (2, 1, 1)
    assert check_symplectic_rk(t)[0]
    assert report(t).order_lower_bound == 2


def test_gauss2_levels():
    t = ButcherTableau(GAUSS2_A, [0.5, 0.5], GAUSS2_C)
    rep = report(t)
    assert (rep.b_order, rep.c_level, rep.d_level) == (4, 2, 2)
    assert rep.order_lower_bound == 4
    assert rep.symplectic and rep.symplectic_residual < 1e-15


def test_rk4_is_not_symplectic():
    ok, res = check_symplectic_rk(RK4)
    assert not ok and res > 1e-3
    assert check_B(RK4) == 4
    assert check_C_discrete(RK4) == 1


def test_euler():
    rep = report(EULER)
    assert (rep.b_order, rep.c_level, rep.d_level, rep.order_lower_bound) == (1, 1, 0, 1)
    assert not rep.symplectic


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_collocation_oracle_gauss(r):
    rule = gauss_rule(r)
    t = ButcherTableau(collocation_matrix(rule.nodes), rule.weights, rule.nodes)
    rep = report(t)
    assert rep.b_order == 2 * r
    assert rep.c_level == r and rep.d_level == r
    assert rep.symplectic


def test_radau_iia_three_stages():
    c = 1 - radau_left_nodes(3)[::-1]
    t = ButcherTableau(collocation_matrix(c), radau_right_rule(3).weights, c)
    rep = report(t)
    assert (rep.b_order, rep.c_level, rep.d_level) == (5, 3, 2)
    assert rep.order_lower_bound == 5
    assert not rep.symplectic


@pytest.mark.parametrize("lam", [-1.0, 0.0])
def test_table1_reports(lam):
    rep = report(table1(lam), rule_order=6)
    assert rep.kind == "rk"
    assert rep.symplectic
    assert rep.c_level == 1 and rep.d_level == 1
    assert rep.order_lower_bound == 3


def test_table1_lambda_one_is_gauss_collocation():
    t = table1(1.0)
    np.testing.assert_allclose(t.a, collocation_matrix(gauss_rule(3).nodes), atol=1e-14)
    rep = report(t, rule_order=6)
    assert (rep.c_level, rep.d_level, rep.order_lower_bound) == (3, 3, 6)


@pytest.mark.parametrize("make", [table2, table3, table4, table5, table6])
def test_pair_tables_are_symplectic(make):
    pt = make()
    ok, res = check_symplectic_prk(pt)
    assert ok and res < 1e-13
    rep = report(pt)
    assert rep.kind == "prk" and rep.symplectic
    assert rep.order_lower_bound >= 3


def test_table6_bound():
    rep = report(table6())
    assert rep.order_lower_bound == 3


def test_ambiguous_failure_warns():
    c = np.array(GAUSS2_C)
    a = np.array(GAUSS2_A)
    a[0, 0] += 1e-8
    t = ButcherTableau(a, [0.5, 0.5], c)
    with pytest.warns(AmbiguousLevelWarning):
        level = check_C_discrete(t)
    assert level == 0


def test_clean_failures_do_not_warn():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        report(RK4)
        report(table2())


def test_d_condition_tolerates_zero_weight():
    t = ButcherTableau([[0.0, 0.0], [0.5, 0.5]], [0.0, 1.0], [0.0, 1.0])
    assert np.isfinite(report(t).residual_max)


def test_report_json():
    data = json.loads(report(table2()).to_json())
    assert set(data) == {"kind", "b_order", "c_level", "d_level", "symplectic",
                         "symplectic_residual", "order_lower_bound", "residual_max"}


def test_rule_order_caps_b():
    t = ButcherTableau(GAUSS2_A, [0.5, 0.5], GAUSS2_C)
    assert report(t, rule_order=3).b_order == 3


@pytest.mark.parametrize("alpha, beta", [(1, 1), (2, 1), (2, 2), (3, 2), (2, 3)])
def test_discrete_levels_inherit_continuous(alpha, beta):
    rule = gauss_rule(5)
    t = retrieve_rk(build_general(alpha, beta), rule)
    assert check_C_discrete(t) >= alpha
    assert check_D_discrete(t) >= beta


def test_lobatto_pair_levels():
    pt = retrieve_prk(build_symplectic_prk_AB(3), lobatto_rule(4))
    rep = report(pt)
    assert rep.b_order == 6
    assert rep.symplectic


def test_exa3_radau_pair():
    pt = retrieve_prk(build_symplectic_prk_sym(2), radau_left_rule(3))
    assert check_symplectic_prk(pt)[0]
