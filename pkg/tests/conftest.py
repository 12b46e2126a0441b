import numpy as np
import pytest

from csprk import cscoeff
from csprk.quadrature import make_rule


def rule_matrix():
    rules = [("gauss", r) for r in range(1, 5)]
    rules += [(fam, r) for fam in ("radau_left", "radau_right") for r in range(2, 5)]
    rules += [("lobatto", r) for r in range(2, 6)]
    return [make_rule(f, r) for f, r in rules]


def family_matrix():
    """(label, CsPair) for every family/size combination of the verification matrix."""
    out = []
    for s in (1, 2, 3):
        a = cscoeff.build_symplectic_rk(s)
        out.append((f"exa1(s={s})", cscoeff.CsPair(a, cscoeff.conjugate(a))))
    for s in (2, 3):
        out.append((f"exa2(s={s})", cscoeff.build_symplectic_prk_AB(s)))
    for s in (1, 2):
        out.append((f"exa3(s={s})", cscoeff.build_symplectic_prk_sym(s)))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Log one acceptance line and return whether it passed."""

    def _record(tag, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {tag}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
