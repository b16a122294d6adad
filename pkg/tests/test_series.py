import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyp32.gamma_kit import pochhammer, pole_distance
from hyp32.numerics import DomainViolation, SlowConvergence, Status, Tolerance, rel_err
from hyp32.series import (
    GaussSpec,
    Hyp32Spec,
    Params3F2NegDiff,
    gauss_2f1_unit,
    incomplete_beta,
    incomplete_beta_paths,
    partial_sum_2f1,
    partial_sum_via_3f2,
    sum_2f1_series,
    sum_3f2,
    sum_3f2_series,
    sum_3f2_unit_oracle,
    sum_terminating_3f2,
)
from hyp32.verify import SampleConstraints, sample_params

from mpref import hyp3f2_direct


def test_params_validation():
    with pytest.raises(DomainViolation):
        Params3F2NegDiff(0.5, 1, 2, -1, 0)
    with pytest.raises(DomainViolation):
        Params3F2NegDiff(0.5, -3, 2, 1, 0)  # b + 1 + m = -1
    p = Params3F2NegDiff(0.5, 1, 2, 0, 0)
    assert p.denominators == (2, 3)
    assert p.s == 1.5
    assert p.spec().thomae_p == 2 + 3 - 0.5 - 1


def test_oracle_examples():
    assert sum_3f2_unit_oracle(Params3F2NegDiff(-1, 1, 1, 0, 0)).value == pytest.approx(0.75, abs=1e-15)
    assert sum_3f2_unit_oracle(Params3F2NegDiff(0, 0.7, 1.9, 2, 1)).value == 1
    v = sum_3f2_unit_oracle(Params3F2NegDiff(0.5, 1, 2, 0, 0), Tolerance(rel_tol=1e-13))
    assert v.status is Status.OK
    assert rel_err(v.value, 4 / 3) < 1e-12


def test_oracle_refuses_slow_decay():
    with pytest.raises(SlowConvergence):
        sum_3f2_unit_oracle(Params3F2NegDiff(1.9, 1, 2, 0, 0))


def test_oracle_error_estimate_is_honest():
    ref = hyp3f2_direct((0.6, 1.3, 3.1), (3.3, 8.1))
    v = sum_3f2_unit_oracle(Params3F2NegDiff(0.6, 1.3, 3.1, 1, 4), Tolerance(rel_tol=1e-12))
    assert abs(v.value - ref) <= max(v.abs_err, 1e-15)
    assert rel_err(v.value, 1.11545193406531028221547928278) < 1e-11


def test_oracle_budget_exhaustion_flags_slow_convergence():
    v = sum_3f2_unit_oracle(Params3F2NegDiff(1.5, 1, 2, 0, 0), Tolerance(rel_tol=1e-15, max_terms=2000))
    assert v.status is Status.SLOW_CONVERGENCE


def test_oracle_self_consistency_under_doubled_budget():
    params = sample_params(SampleConstraints(), seed=7, count=100)
    small, big = Tolerance(rel_tol=1e-10, max_terms=2 * 10**5), Tolerance(rel_tol=1e-10, max_terms=4 * 10**5)
    for p in params:
        v1 = sum_3f2_unit_oracle(p, small)
        v2 = sum_3f2_unit_oracle(p, big)
        assert abs(v1.value - v2.value) <= max(v1.abs_err, 1e-15 * abs(v1.value))


def test_oracle_matches_terminating_sum():
    for N in range(6):
        p = Params3F2NegDiff(-N, 1.3 + 0.2j, 0.8, 2, 1)
        assert sum_3f2_unit_oracle(p).value == sum_terminating_3f2(p.spec())


def test_gauss_examples():
    assert gauss_2f1_unit(-1, 2, 5).value == pytest.approx(3 / 5, abs=1e-15)
    assert gauss_2f1_unit(0.37, 0, 2.2).value == 1
    assert rel_err(gauss_2f1_unit(0.5, 1, 3).value, 4 / 3) < 1e-14
    ref = 1.09057403708858845576594857546 + 0.0583804247674372844253184400785j
    assert rel_err(gauss_2f1_unit(0.3, 0.4 + 0.2j, 2.1).value, ref) < 1e-13
    with pytest.raises(DomainViolation):
        gauss_2f1_unit(1, 1, 2)


def test_sum_2f1_series_examples():
    assert sum_2f1_series(GaussSpec(0.3, 0.4, 1.5, 0)).value == 1
    assert rel_err(sum_2f1_series(GaussSpec(1, 1, 2, 0.5)).value, 2 * math.log(2)) < 1e-14
    assert rel_err(sum_2f1_series(GaussSpec(-2, 1, 2, 1)).value, 1 / 3) < 1e-15
    with pytest.raises(DomainViolation):
        sum_2f1_series(GaussSpec(0.3, 0.4, 1.5, 1.5))
    with pytest.raises(DomainViolation):
        sum_2f1_series(GaussSpec(0.3, 0.4, 1.5, -3), allow_pfaff=False)


def test_sum_2f1_series_uses_pfaff_near_minus_one():
    g = GaussSpec(0.7, 1.2, 2.5, -0.95)
    import mpmath
    ref = complex(mpmath.hyp2f1(0.7, 1.2, 2.5, -0.95))
    assert rel_err(sum_2f1_series(g).value, ref) < 1e-13
    assert rel_err(sum_2f1_series(g, allow_pfaff=False).value, ref) < 1e-12


def test_partial_sums():
    assert partial_sum_2f1(0.3, 1.1, 2.0, 0) == 1
    assert partial_sum_2f1(1, 2, 4, 1) == 1.5
    assert rel_err(partial_sum_2f1(0.5, 1, 3, 2), 1 + 1 / 6 + 1 / 16) < 1e-15
    assert partial_sum_via_3f2(0.3, 1.1, 2.0, 0) == 1
    assert rel_err(partial_sum_via_3f2(1, 2, 4, 1), 1.5) < 1e-15
    assert rel_err(partial_sum_via_3f2(0.3, 1.7, 2.4, 5), partial_sum_2f1(0.3, 1.7, 2.4, 5)) < 1e-12
    with pytest.raises(DomainViolation):
        partial_sum_2f1(1, 1, -1, 3)


cplx = st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(cplx, cplx, cplx, st.integers(0, 20))
def test_partial_sum_two_routes(a, b, c, n):
    if min(pole_distance(c), pole_distance(1 + b)) < 0.05:
        return
    direct = partial_sum_2f1(a, b, c, n)
    via = partial_sum_via_3f2(a, b, c, n)
    # size of the largest term on either route bounds the roundoff
    t, scale = 1.0, 1.0
    for k in range(n):
        t *= abs((a + k) * (b + k) / ((c + k) * (k + 1)))
        scale = max(scale, t)
    u, k_scale = 1.0, 1.0
    for k in range(n):
        u *= abs((k - n) * (b + k) * (c - a + k) / ((1 + b + k) * (c + k) * (k + 1)))
        k_scale = max(k_scale, u)
    k_scale *= abs(pochhammer(1 + b, n)) / math.factorial(n)
    assert abs(direct - via) <= 1e-12 * (n + 1) ** 2 * max(scale, k_scale)


def test_terminating_examples():
    assert sum_terminating_3f2(Hyp32Spec((0, 1.3, 2.0), (0.5, 4.0))) == 1
    assert sum_terminating_3f2(Hyp32Spec((-1, 1, 1), (2, 2))) == 0.75
    v = sum_terminating_3f2(Hyp32Spec((-3, 1.2, 0.7), (2.1, 3.3)))
    assert rel_err(v, 0.724867124407759703361346525251) < 1e-14
    with pytest.raises(DomainViolation):
        sum_terminating_3f2(Hyp32Spec((0.5, 1.2, 0.7), (2.1, 3.3)))
    with pytest.raises(DomainViolation):
        sum_terminating_3f2(Hyp32Spec((-3, 1.2, 0.7), (-1, 3.3)))


def test_sum_3f2_dispatch():
    assert rel_err(sum_3f2(Hyp32Spec((0.5, 1, 2), (3, 4), 0.5)).value, 1.04735231872023080119147296516) < 1e-13
    assert rel_err(sum_3f2(Hyp32Spec((0.5, 1, 2), (2, 3), 1)).value, 4 / 3) < 1e-9
    with pytest.raises(DomainViolation):
        sum_3f2_series(Hyp32Spec((0.5, 1, 2), (3, 4), 1.2))


@pytest.mark.parametrize("a,b,c", [(0.3, 0.4, 1.8), (1.1, -0.3, 2.0), (0.25, 0.25, 1.5), (2.0, 0.5, 5.5)])
def test_gauss_consistency_by_extrapolation(a, b, c):
    s = min(c - a - b, 1.0)
    e1, e2 = 1e-3, 1e-4
    f1 = sum_2f1_series(GaussSpec(a, b, c, 1 - e1), Tolerance(rel_tol=1e-15)).value
    f2 = sum_2f1_series(GaussSpec(a, b, c, 1 - e2), Tolerance(rel_tol=1e-15)).value
    w1, w2 = e1**s, e2**s
    extrap = (f2 * w1 - f1 * w2) / (w1 - w2)
    residual = abs(extrap - f2)
    assert abs(extrap - gauss_2f1_unit(a, b, c).value) <= 10 * residual


def test_incomplete_beta_examples():
    for z in (0.1, 0.45, 0.8):
        assert rel_err(incomplete_beta(z, 1, 1).value, z) < 1e-13
        assert rel_err(incomplete_beta(z, 2.5, 1).value, z**2.5 / 2.5) < 1e-13
    assert abs(incomplete_beta(0.5, 2, 2).value - 1 / 12) < 1e-13
    assert rel_err(incomplete_beta(0.6, 0.7, 2.3).value, 0.698774058623809592387363262978) < 1e-12
    with pytest.raises(DomainViolation):
        incomplete_beta(0.5, 0, 1)


def test_incomplete_beta_paths_agree():
    rng = np.random.default_rng(5)
    for _ in range(100):
        z, a, b = rng.uniform(0.01, 0.9), rng.uniform(0.1, 5), rng.uniform(0.1, 5)
        p1, p2 = incomplete_beta_paths(z, a, b)
        assert rel_err(p1.value, p2.value) < 1e-11
