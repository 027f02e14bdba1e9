import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from ginocchio.errors import DomainError, Unclassifiable
from ginocchio.potential import (
    Emissivity,
    PotentialSpec,
    Profile,
    classify_profile,
    coordinates,
    emissivity,
    potential_value,
    s_of_x,
    x_of_s,
    x_of_y,
    y_of_x,
)
from ginocchio.table1 import NO_SS, ROWS, row

from conftest import specs

lams = st.floats(0.2, 12.0)


# ---- spec

@pytest.mark.parametrize("kw", [dict(nu=1, lam=0), dict(nu=1, lam=-2), dict(nu=1, lam=1, sign=2),
                                dict(nu=complex(math.inf, 0), lam=1)])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        PotentialSpec(**kw)


def test_spec_is_immutable_value():
    a = PotentialSpec(1 + 2j, 3.0, 1)
    assert a == PotentialSpec(1 + 2j, 3, 1)
    assert a.replace(lam=4.0).lam == 4.0 and a.lam == 3.0


# ---- x_of_y

@pytest.mark.parametrize("lam", [0.3, 1.0, 7.0])
def test_x_of_y_origin(lam):
    assert x_of_y(0.0, lam) == 0.0


def test_x_of_y_unit_lambda():
    assert x_of_y(0.5, 1.0) == pytest.approx(0.5493061443340549, abs=1e-15)


@pytest.mark.parametrize("lam,y", [(7.0, 0.9), (0.4, 0.95), (2.3, -0.6)])
def test_x_of_y_against_quadrature(lam, y):
    def dxdy(t):
        return (1 / (1 - t * t) + (lam * lam - 1) / (1 + (lam * lam - 1) * t * t)) / lam**2
    ref, _ = quad(dxdy, 0, y, epsabs=1e-14, epsrel=1e-14)
    assert x_of_y(y, lam) == pytest.approx(ref, abs=1e-10)


@pytest.mark.parametrize("y", [1.0, -1.0, 1.5])
def test_x_of_y_domain(y):
    with pytest.raises(DomainError):
        x_of_y(y, 2.0)


@given(lams)
def test_x_of_y_strictly_increasing_and_odd(lam):
    y = np.linspace(-0.999, 0.999, 1000)
    x = x_of_y(y, lam)
    assert np.all(np.diff(x) > 0)
    assert np.allclose(x, -x[::-1], atol=1e-13)


# ---- inverse

def test_y_of_x_origin():
    assert y_of_x(0.0, 3.0) == 0.0


def test_roundtrip_example():
    assert y_of_x(x_of_y(0.73, 3.4), 3.4) == pytest.approx(0.73, abs=1e-12)


def test_y_of_x_against_bisection():
    lam, x = 6.0, 10.0
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-15:
        mid = 0.5 * (lo + hi)
        try:
            xm = x_of_y(mid, lam)
        except DomainError:
            xm = math.inf
        lo, hi = (mid, hi) if xm < x else (lo, mid)
    assert abs(y_of_x(x, lam) - 0.5 * (lo + hi)) < 1e-12


@given(lams, st.floats(-0.999999, 0.999999))
def test_inverse_roundtrip_in_y(lam, y):
    x = x_of_y(y, lam)
    assert abs(x_of_y(y_of_x(x, lam), lam) - x) < 1e-12 * max(1.0, abs(x))


@given(lams, st.floats(-500, 500))
def test_inverse_roundtrip_in_s(lam, x):
    # s = atanh(y) stays accurate where y itself has rounded to +-1
    assert abs(x_of_s(s_of_x(x, lam), lam) - x) < 1e-12 * max(1.0, abs(x))


def test_tail_log_complement_accurate():
    c = coordinates(40.0, 1.0)
    assert float(c.log_q) == pytest.approx(math.log(4) - 80 - 2 * math.log1p(math.exp(-80)),
                                           rel=1e-14)


# ---- V(x)

def test_v0_row17():
    v = potential_value(0.0, row(17).spec)
    assert v.real == pytest.approx(0.01, abs=1e-9) and v.imag == pytest.approx(4.9, abs=1e-9)


def test_v0_row11():
    v = potential_value(0.0, row(11).spec)
    assert abs(v - (-106.778 + 245.328j)) < 0.01


def test_hermitian_line_is_real():
    spec = PotentialSpec(-0.5 + 2j, 6.0, -1)
    x = np.linspace(-3, 3, 301)
    assert np.all(np.imag(potential_value(x, spec)) == 0)


@given(specs(), st.floats(-20, 20))
def test_parity(spec, x):
    a, b = potential_value(x, spec), potential_value(-x, spec)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


@given(specs())
def test_v0_closed_form(spec):
    assert abs(potential_value(0.0, spec) - spec.v0()) <= 1e-12 * max(1.0, abs(spec.v0()))


@given(specs(lam_min=1.0, lam_max=1.0), st.floats(-15, 15))
def test_unit_lambda_sech2(spec, x):
    expected = spec.sign * spec.strength / math.cosh(x) ** 2
    assert abs(potential_value(x, spec) - expected) <= 1e-12 * max(1.0, abs(spec.strength))


@pytest.mark.parametrize("r", ROWS, ids=lambda r: f"row{r.row}")
def test_decay(r):
    spec = r.spec
    L = 50 / spec.lam**2
    for x in (L, -L):
        assert abs(potential_value(x, spec)) < 1e-6 * abs(spec.v0())


def test_vectorised_shape():
    x = np.linspace(-1, 1, 7).reshape(7, 1)
    assert potential_value(x, row(3).spec).shape == (7, 1)


# ---- classification

@pytest.mark.parametrize("number,expected", [(1, Profile.BARRIER), (11, Profile.WELL),
                                             (17, Profile.WELL_WITH_SIDE_BARRIERS)])
def test_classify_examples(number, expected):
    assert classify_profile(row(number).spec) is expected


@pytest.mark.parametrize("r", ROWS, ids=lambda r: f"row{r.row}")
def test_classify_all_rows(r):
    assert classify_profile(r.spec) is r.profile


def test_classify_flat_potential():
    with pytest.raises(Unclassifiable) as err:
        classify_profile(PotentialSpec(0.0, 1.0, -1))
    assert err.value.extrema == []


def test_classify_custom_grid():
    assert classify_profile(row(1).spec, np.linspace(-2, 2, 401)) is Profile.BARRIER


def test_emissive_row17():
    assert emissivity(row(17).spec) is Emissivity.EMISSIVE


@given(st.floats(-6, 6), st.floats(0.3, 8), st.sampled_from([-1, 1]))
def test_real_nu_has_no_imaginary_part(nu, lam, sign):
    assert emissivity(PotentialSpec(nu, lam, sign)) is Emissivity.NONE


@pytest.mark.parametrize("fam", NO_SS, ids=lambda f: f"row{f.row}")
@given(a=st.floats(0.05, 8), b=st.floats(0.05, 8), lam=st.floats(0.3, 8))
def test_no_ss_families_are_absorptive(fam, a, b, lam):
    assert emissivity(fam.spec(a, b, lam)) is Emissivity.ABSORPTIVE


@pytest.mark.parametrize("r", ROWS, ids=lambda r: f"row{r.row}")
def test_table_rows_are_emissive(r):
    assert emissivity(r.spec) is Emissivity.EMISSIVE
