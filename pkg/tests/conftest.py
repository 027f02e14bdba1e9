import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ginocchio.potential import PotentialSpec

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

# criterion number -> (passed, detail), filled by the acceptance tests
CRITERIA = {}


@pytest.fixture
def criterion():
    def record(number, passed, detail=""):
        CRITERIA[number] = (bool(passed), detail)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        passed, detail = CRITERIA[number]
        terminalreporter.write_line(
            f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


@st.composite
def specs(draw, lam_min=0.3, lam_max=10.0, nu_max=8.0):
    re = draw(st.floats(-nu_max, nu_max))
    im = draw(st.floats(-nu_max, nu_max))
    lam = draw(st.floats(lam_min, lam_max))
    sign = draw(st.sampled_from([-1, 1]))
    return PotentialSpec(nu=complex(re, im), lam=lam, sign=sign)


@st.composite
def hermitian_specs(draw, lams=None):
    if draw(st.booleans()):
        nu = complex(draw(st.floats(-6, 6)), 0.0)
    else:
        nu = complex(-0.5, draw(st.floats(-6, 6)))
    lam = draw(st.sampled_from(lams)) if lams else draw(st.floats(0.5, 8.0))
    return PotentialSpec(nu=nu, lam=lam, sign=draw(st.sampled_from([-1, 1])))
