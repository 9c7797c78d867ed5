"""Shared fixtures: the expensive pipeline objects are built once per session."""

import pytest

from mpentropy import ascarlitz, hamburger


@pytest.fixture(scope="session")
def params():
    return ascarlitz.QParams("0.6", "1.2")


@pytest.fixture(scope="session")
def std_measure(params):
    return ascarlitz.mu_K(params, tol=1e-26)


@pytest.fixture(scope="session")
def m2_m4(std_measure):
    return (float(ascarlitz.moments_of_discrete(std_measure, 2)),
            float(ascarlitz.moments_of_discrete(std_measure, 4)))


@pytest.fixture(scope="session")
def moments80(params):
    return ascarlitz.moment_values(params, 80, precision_bits=512)


@pytest.fixture(scope="session")
def rec40(moments80):
    mseq = hamburger.MomentSequence(moments80, 512)
    return hamburger.recurrence_from_moments(mseq, 40)


@pytest.fixture(scope="session")
def quad40(rec40):
    return hamburger.build_quadruple(rec40, 40)


@pytest.fixture(scope="session")
def quad20(rec40):
    return hamburger.build_quadruple(rec40, 20)


@pytest.fixture(scope="session")
def moments40(params):
    return ascarlitz.moment_values(params, 40, precision_bits=512)


@pytest.fixture(scope="session")
def rec20(moments40):
    mseq = hamburger.MomentSequence(moments40, 512)
    return hamburger.recurrence_from_moments(mseq, 20)


@pytest.fixture(scope="session")
def moments140(params):
    return ascarlitz.moment_values(params, 140, precision_bits=512)


@pytest.fixture(scope="session")
def quad70(moments140):
    mseq = hamburger.MomentSequence(moments140, 512)
    rec = hamburger.recurrence_from_moments(mseq, 70)
    return hamburger.build_quadruple(rec, 71)


@pytest.fixture(scope="session")
def gaussian_moments():
    """m_{2k} = (2k-1)!!, m_{2k+1} = 0: the standard Gaussian, a
    determinate problem (the negative control for the pipeline)."""
    vals = [1, 0]
    for k in range(1, 21):
        vals.append(vals[-2] * (2 * k - 1))
        vals.append(0)
    return vals[:41]
