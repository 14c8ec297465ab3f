import pytest

from graded_workbench.algebra.polynomial import Ideal, Ring
from graded_workbench.cli.ideal_file import curve_ideal
from graded_workbench.cli.selftest import NONIC_FORMS, QUINTIC_FORMS, REFERENCE_CHAR
from graded_workbench.theory.analysis import analyze_ideal
from graded_workbench.theory.checks import verify


@pytest.fixture
def ring4():
    return Ring.standard(4, REFERENCE_CHAR)


@pytest.fixture
def twisted_cubic(ring4):
    return Ideal.parse(ring4, ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"])


@pytest.fixture(scope="session")
def quintic_ideal():
    return curve_ideal(QUINTIC_FORMS, REFERENCE_CHAR)


@pytest.fixture(scope="session")
def nonic_ideal():
    return curve_ideal(NONIC_FORMS, REFERENCE_CHAR)


@pytest.fixture(scope="session")
def quintic_analysis(quintic_ideal):
    return analyze_ideal(quintic_ideal, 0, oracle=True)


@pytest.fixture(scope="session")
def nonic_analysis(nonic_ideal):
    return analyze_ideal(nonic_ideal, 0, oracle=True)


@pytest.fixture(scope="session")
def quintic_verification(quintic_analysis):
    return verify(quintic_analysis)


@pytest.fixture(scope="session")
def nonic_verification(nonic_analysis):
    return verify(nonic_analysis)
