import json
import math

import numpy as np
import pytest

from csprk.cscoeff import (
    CsCoeff,
    build_general,
    build_symplectic_prk_AB,
    build_symplectic_prk_sym,
    build_symplectic_rk,
    conjugate,
)
from csprk.quadrature import gauss_rule, lobatto_rule, radau_left_rule, radau_right_rule
from csprk.reproduce import table1, table3
from csprk.tableau import (
    ButcherTableau,
    PartitionedTableau,
    TableauParseError,
    from_json,
    retrieve_prk,
    retrieve_rk,
    to_json,
    to_text,
)

from conftest import family_matrix, rule_matrix
from oracles import GAUSS2_A, GAUSS2_C, collocation_matrix, d_condition_matrix


def test_midpoint():
    t = retrieve_rk(build_symplectic_rk(1), gauss_rule(1))
    assert t.a.tolist() == [[0.5]] and t.b.tolist() == [1.0] and t.c.tolist() == [0.5]
    assert json.loads(to_json(t)) == {"c": [0.5], "b": [1.0], "a": [[0.5]]}


def test_gauss2_from_exa1():
    t = retrieve_rk(build_symplectic_rk(2), gauss_rule(2))
    np.testing.assert_allclose(t.c, GAUSS2_C, atol=1e-15)
    np.testing.assert_allclose(t.a, GAUSS2_A, atol=1e-12)
    np.testing.assert_allclose(t.a, collocation_matrix(GAUSS2_C), atol=1e-12)


@pytest.mark.parametrize("lam", [-1.0, 0.0, 1.0, 2.7])
def test_table1_parameterised(lam):
    t = retrieve_rk(build_symplectic_rk(1, lam), gauss_rule(3))
    np.testing.assert_allclose(t.a, table1(lam).a, atol=1e-12)


def test_lobatto_iiia_iiib():
    pt = retrieve_prk(build_symplectic_prk_AB(2), lobatto_rule(2))
    np.testing.assert_allclose(pt.first.a, [[0, 0], [0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(pt.second.a, [[0.5, 0], [0.5, 0]], atol=1e-15)
    np.testing.assert_allclose(pt.first.a, collocation_matrix([0, 1]), atol=1e-15)
    np.testing.assert_allclose(pt.second.a, d_condition_matrix([0.5, 0.5], [0, 1]), atol=1e-15)


def test_radau_iia():
    pt = retrieve_prk(build_symplectic_prk_sym(1), radau_right_rule(2))
    np.testing.assert_allclose(pt.first.a, [[5 / 12, -1 / 12], [3 / 4, 1 / 4]], atol=1e-15)
    np.testing.assert_allclose(pt.first.a, collocation_matrix([1 / 3, 1]), atol=1e-14)


def test_table3_from_radau_left():
    pt = retrieve_prk(build_symplectic_prk_AB(2), radau_left_rule(3))
    assert pt.first.a[1, 0] == pytest.approx(19 / 150 - math.sqrt(6) / 225, abs=1e-12)
    np.testing.assert_allclose(pt.second.a, table3().second.a, atol=1e-12)


def test_retrieval_linearity(rng):
    rule = gauss_rule(4)
    for _ in range(10):
        a1 = CsCoeff(rng.normal(size=(3, 4)))
        a2 = CsCoeff(rng.normal(size=(5, 2)))
        zero = CsCoeff(np.zeros((1, 1)))
        lhs = retrieve_rk(a1 + a2, rule).a
        rhs = retrieve_rk(a1, rule).a + retrieve_rk(a2, rule).a - retrieve_rk(zero, rule).a
        assert np.max(np.abs(lhs - rhs)) < 1e-14


@pytest.mark.parametrize("rule", rule_matrix(), ids=repr)
def test_symplectic_transfer_single(rule):
    for s in (1, 2, 3):
        for lam in (0.0, 1.3):
            t = retrieve_rk(build_symplectic_rk(s, lam), rule)
            ba = t.b[:, None] * t.a
            assert np.max(np.abs(ba + ba.T - np.outer(t.b, t.b))) < 1e-13


@pytest.mark.parametrize("rule", rule_matrix(), ids=repr)
def test_conjugate_transfer(rule, rng):
    pairs = [p for _, p in family_matrix()]
    for _ in range(3):
        a = CsCoeff(rng.normal(size=(3, 3)))
        pairs.append(type(pairs[0])(a, conjugate(a)))
    for pair in pairs:
        pt = retrieve_prk(pair, rule)
        b = pt.b
        res = b[:, None] * pt.second.a + (b[:, None] * pt.first.a).T - np.outer(b, b)
        assert np.max(np.abs(res)) < 1e-13


def test_json_round_trip_bitwise():
    for t in [table1(0.3), retrieve_prk(build_symplectic_prk_sym(2), lobatto_rule(5)),
              retrieve_rk(build_general(2, 3, {(3, 2): 1 / 3}), radau_left_rule(4))]:
        back = from_json(to_json(t))
        assert back == t
        assert type(back) is type(t)


@pytest.mark.parametrize("text, fragment", [
    ('{"c":[0,1,2],"b":[1,1,1],"a":[[0,0,0],[1,0,0]]}', "a must be square"),
    ('{"c":[0],"b":[1]}', "missing field a"),
    ('{"c":[0, 1],"b":[1],"a":[[0]]}', "b and c differ"),
    ('{"c":[0],"b":[1],"a":[[0], [1, 2]]}', "ragged"),
    ('{"c":[0],"b":[1],"a":[[0]]', "malformed JSON"),
    ('{"c":[0],"b":["x"],"a":[[0]]}', "b must be"),
    ('{"first":{"c":[0],"b":[1],"a":[[0]]}}', "both"),
    ('{"first":{"c":[0],"b":[1],"a":[[0]]},"second":{"c":[0],"b":[1],"a":[[0, 1]]}}', "second.a"),
    ('{"first":{"c":[0],"b":[1],"a":[[0]]},"second":{"c":[0],"b":[0.5],"a":[[0]]}}', "share b"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(TableauParseError, match=fragment):
        from_json(text)


def test_pair_requires_shared_b_and_c():
    t = ButcherTableau([[0.5]], [1.0], [0.5])
    with pytest.raises(ValueError):
        PartitionedTableau(t, ButcherTableau([[0.5]], [1.0], [0.4]))


def test_to_text_layout():
    text = to_text(table1(0.0))
    lines = text.splitlines()
    assert len(lines) == 5
    assert len({len(line) for line in lines}) == 1
    assert "0.277778" in lines[-1]
    pair_text = to_text(retrieve_prk(build_symplectic_prk_AB(2), lobatto_rule(2)))
    assert len(pair_text.splitlines()) == 4
