import math

import pytest

from fockmix import BeamsplitterParams, apply_bs_general, coherent_amplitudes, product_state
from fockmix.config import _coherent_cutoff
from fockmix.fock import fock_amplitudes


def hybrid_output(n, alpha, params):
    """|n>|alpha> through the splitter on an automatically sized grid."""
    c = n + _coherent_cutoff(abs(alpha) ** 2)
    state = product_state(fock_amplitudes(n, c), coherent_amplitudes(alpha, c))
    return apply_bs_general(state, params)


def coherent_output(alpha, beta, params):
    c = _coherent_cutoff(abs(alpha) ** 2 + abs(beta) ** 2)
    state = product_state(coherent_amplitudes(alpha, c), coherent_amplitudes(beta, c))
    return apply_bs_general(state, params)


@pytest.fixture
def balanced():
    return BeamsplitterParams(math.pi / 4)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
