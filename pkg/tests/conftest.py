import os
import sys

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from wqed.schemes import DrivenLambda, DrivenV, LambdaTwoTransition, TwoLevel, VTwoTransition

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

energies = st.floats(0.5, 1.5)
detunings = st.floats(-0.3, 0.3)
couplings = st.floats(0.01, 0.3)
losses = st.floats(0.0, 0.2)
frequencies = st.floats(0.3, 1.7)
rabis = st.just(0.0) | st.floats(1e-6, 0.5)


@st.composite
def two_level(draw, lossless=False):
    return TwoLevel(draw(energies), 0.0 if lossless else draw(losses), draw(couplings))


@st.composite
def driven_lambda(draw, lossless=False):
    g2, g3 = (0.0, 0.0) if lossless else (draw(losses), draw(losses))
    return DrivenLambda(draw(energies), draw(detunings), draw(rabis), g2, g3, draw(couplings))


@st.composite
def v_two(draw, lossless=False):
    g2, g3 = (0.0, 0.0) if lossless else (draw(losses), draw(losses))
    return VTwoTransition(draw(energies), draw(energies), g2, g3, draw(couplings), draw(couplings))


@st.composite
def lambda_two(draw, lossless=False):
    E1 = draw(st.floats(-0.2, 0.2))
    return LambdaTwoTransition(E1, E1 + draw(st.floats(0.0, 0.3)), draw(energies),
                               0.0 if lossless else draw(losses), draw(couplings), draw(couplings))


@st.composite
def driven_v(draw, lossless=False):
    return DrivenV(draw(energies), draw(detunings), draw(st.floats(0.01, 0.5)),
                   0.0 if lossless else draw(losses), draw(couplings))


# acceptance bookkeeping: one line per criterion in the terminal summary
_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[1])):
        status = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
