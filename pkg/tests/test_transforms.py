import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from hyp32.identities import eval_theorem1
from hyp32.numerics import DomainViolation, NearSingular, Tolerance, rel_err
from hyp32.series import (
    GaussSpec,
    Hyp32Spec,
    Params3F2NegDiff,
    gauss_2f1_unit,
    sum_2f1_series,
    sum_3f2,
    sum_terminating_3f2,
)
from hyp32.transforms import (
    Hyp10Spec,
    KarMintonSpec,
    Rewrite,
    eval_karlsson_z,
    evaluate_spec,
    karlsson_minton_reduce,
    karlsson_z_reduce,
    pf_reduce,
    pfaff_linear,
    rd_reverse,
    re_transform,
    thomae_three_term,
    thomae_two_term,
)

from mpref import hyp3f2_direct
import transform_cases

TOL = Tolerance(rel_tol=1e-13)


def direct(s):
    return sum_3f2(s, TOL).value


def assembled(pieces):
    return sum(c * evaluate_spec(g, TOL).value for c, g in pieces)


# ---- Thomae

def test_thomae_two_term_c_zero():
    rw = thomae_two_term(Hyp32Spec((0.3, 0.6, 0), (2.2, 3.1)))
    assert rel_err(rw.prefactor, 1) < 1e-14
    assert rw.evaluate().value == pytest.approx(1, abs=1e-14)


def test_thomae_two_term_terminating():
    s = Hyp32Spec((-2, 1, 0.5), (3, 2.5))
    assert rel_err(thomae_two_term(s).evaluate().value, sum_terminating_3f2(s)) < 1e-14


def test_thomae_two_term_keeps_last_pair():
    s = Hyp32Spec((0.3 + 0.1j, 0.7, 1.4), (2.9, 3.3 - 0.2j))
    out = thomae_two_term(s).results[0][1]
    assert out.num[2] == s.num[2] and out.den[1] == s.den[1]
    assert rel_err(thomae_two_term(s).evaluate(TOL).value, hyp3f2_direct(s.num, s.den)) < 1e-12


def test_fa_to_fb_bridge():
    a, b, c, n = 0.25, 0.9, 2.7, 2
    s = Hyp32Spec((b, b - c, -n), (1 + b - c, 1 + b - a))
    rw = thomae_two_term(s)
    out = rw.results[0][1]
    expected = Hyp32Spec((1 - a, 1 - a + c, -n), (2 - a, 1 + b - a))
    assert all(abs(x - y) < 1e-14 for x, y in zip(out.num + out.den, expected.num + expected.den))
    pref = math.prod(2 - a + k for k in range(n)) / math.prod(1 + b - c + k for k in range(n))
    assert rel_err(rw.prefactor, pref) < 1e-13
    assert rel_err(rw.evaluate().value, sum_terminating_3f2(s)) < 1e-13


def test_thomae_two_term_rejects_divergent_side():
    with pytest.raises(DomainViolation):
        thomae_two_term(Hyp32Spec((0.5, 0.5, 1.5), (1, 2)))  # output excess d - c < 0
    with pytest.raises(DomainViolation):
        thomae_two_term(Hyp32Spec((0.5, 0.5, 0.5), (1, 3), 0.5))


def test_thomae_three_term_c_zero():
    # e must satisfy Re(1 + c - e) > 0
    rw = thomae_three_term(Hyp32Spec((0.3, 0.6, 0), (0.5, 3.1)))
    assert rel_err(rw.evaluate(TOL).value, 1) < 1e-12
    with pytest.raises(DomainViolation):
        thomae_three_term(Hyp32Spec((0.3, 0.6, 0), (2.2, 3.1)))


def test_thomae_three_term_general_and_terminating():
    for s in (Hyp32Spec((0.3, 0.65, 1.4), (1.1, 3.1)), Hyp32Spec((-2, 0.65, 1.4), (1.1, 3.1))):
        assert rel_err(thomae_three_term(s).evaluate(TOL).value, hyp3f2_direct(s.num, s.den)) < 1e-12


def test_thomae_three_term_coefficient_pole():
    with pytest.raises(NearSingular):
        thomae_three_term(Hyp32Spec((0.3, 0.6, 0.4), (0.9, 3.1)))


def test_thomae_three_term_on_equal_enhancement_input():
    # needs Re(c - b) > n for the first result to converge
    a, b, c, n = 0.4 + 0.2j, 1.1, 3.7, 2
    s = Hyp32Spec((b, a, c), (b + 1 + n, c + 1 + n))
    rw = thomae_three_term(s)
    first, second = rw.results[0][1], rw.results[1][1]
    assert first.num[1] == a
    assert abs(first.num[1] - first.den[0] - n) < 1e-14    # the (a, a-n) pair
    assert abs(second.num[2] - second.den[0] - n) < 1e-14  # the (2-a+2n, 2-a+n) pair
    assert abs(second.num[2] - (2 - a + 2 * n)) < 1e-14
    ref = eval_theorem1(Params3F2NegDiff(a, b, c, n, n)).value
    assert rel_err(rw.evaluate(TOL).value, ref) < 1e-11


# ---- terminating rules

def test_pf_reduce_examples():
    s = Hyp32Spec((0.4, 1.2, 0.7), (0.4, 2.5), 0.3)
    pieces = pf_reduce(s, 0)
    assert len(pieces) == 1 and pieces[0][0] == 1
    assert pieces[0][1] == GaussSpec(1.2, 0.7, 2.5, 0.3)
    # d = 3 would make both sides diverge at z = 1
    s = Hyp32Spec((0.5, 1, 1), (-0.5, 3.5))
    assert rel_err(assembled(pf_reduce(s, 1)), hyp3f2_direct(s.num, s.den)) < 1e-12
    s = Hyp32Spec((0.5 + 0.3j, -2, 1.3), (-1.5 + 0.3j, 2.2), 1)
    assert rel_err(assembled(pf_reduce(s, 2)), sum_terminating_3f2(s)) < 1e-13


def test_pf_reduce_errors():
    with pytest.raises(DomainViolation):
        pf_reduce(Hyp32Spec((2, 1, 1), (0, 3)), 2)  # (1 - a)_n = (-1)(0)
    with pytest.raises(DomainViolation):
        pf_reduce(Hyp32Spec((0.5, 1, 1), (-0.4, 3)), 1)


def test_rd_reverse_examples():
    s = Hyp32Spec((0, 1.2, 0.7), (2.3, 2.5))
    rw = rd_reverse(s, 0)
    assert rw.prefactor == 1
    a, b, c, n = 0.3, 0.8, 2.1, 2
    qw = Hyp32Spec((-n, 1 - a + b, 1), (1 + b - c - n, 2 - a))
    rw = rd_reverse(qw, n)
    qe = rw.results[0][1]
    expected = (-n, 1 - a + b, 1 - a), (1 - a + c, 2 - a)
    assert all(abs(x - y) < 1e-14 for x, y in zip(qe.num + qe.den, expected[0] + expected[1]))
    pref = math.prod(1 - a + c + k for k in range(n)) / math.prod(c - b + k for k in range(n))
    assert rel_err(rw.prefactor, pref) < 1e-14
    assert rel_err(rw.evaluate().value, sum_terminating_3f2(qw)) < 1e-13


def test_rd_reverse_needs_exact_top():
    with pytest.raises(DomainViolation):
        rd_reverse(Hyp32Spec((-2.0000001, 1.2, 0.7), (0.3, 2.5)), 2)


def test_re_transform_examples():
    s = Hyp32Spec((0, 0.4, 1.6), (2.3, 3.7))
    assert re_transform(s, 0).evaluate().value == 1
    A, B, C, D, n = 0.4, 1.6, 2.3, 3.7, 1
    s = Hyp32Spec((-n, A, B - n), (C - n, D - n))
    assert rel_err(re_transform(s, n).evaluate().value, sum_terminating_3f2(s)) < 1e-14


def test_re_transform_g_instance():
    # G_{m,k}: A = c-a-b-m, B = t+m, C = c-a, D = c-b, N = m-k
    a, b, c, t, m, k = 0.3, 0.7, 2.9, 1.4, 4, 1
    N = m - k
    A, B, C, D = c - a - b - m, t + m, c - a, c - b
    s = Hyp32Spec((-N, A, B - N), (C - N, D - N))
    assert rel_err(re_transform(s, N).evaluate().value, sum_terminating_3f2(s)) < 1e-13


def test_pfaff_linear_examples():
    g = GaussSpec(0.3, 0.7, 1.9, 0)
    pref, g2 = pfaff_linear(g)
    assert pref == 1 and evaluate_spec(g2).value == 1
    pref, g2 = pfaff_linear(GaussSpec(1, 1, 2, 0.5))
    assert pref == 2 and g2 == GaussSpec(1, 1, 2, -1)
    # 2F1(1, 1; 2; -1) = ln 2 sits on the unit circle, outside the series engine
    assert rel_err(pref * complex(mpmath.hyp2f1(1, 1, 2, -1)), 2 * math.log(2)) < 1e-14
    pref, g2 = pfaff_linear(GaussSpec(1, 1, 2, 0.3))
    assert rel_err(pref * sum_2f1_series(g2, allow_pfaff=False).value, -math.log(0.7) / 0.3) < 1e-14
    g = GaussSpec(-2, 1.3, 2.2, 0.3)
    pref, g2 = pfaff_linear(g)
    assert rel_err(pref * evaluate_spec(g2).value, evaluate_spec(g).value) < 1e-14
    with pytest.raises(DomainViolation):
        pfaff_linear(GaussSpec(1, 1, 2, 1))


@settings(max_examples=100, deadline=None)
@given(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.floats(0.3, 4), st.complex_numbers(max_magnitude=0.45, allow_nan=False, allow_infinity=False))
def test_pfaff_twice_is_identity(a, b, c, z):
    g = GaussSpec(a, b, c, z)
    p1, g1 = pfaff_linear(g)
    p2, g2 = pfaff_linear(g1)
    assume(abs(g1.z) < 0.95)
    assert abs(g2.z - z) < 1e-14 and abs(g2.b - b) < 1e-14
    v = sum_2f1_series(g, TOL, allow_pfaff=False).value
    w = p1 * p2 * sum_2f1_series(g2, TOL, allow_pfaff=False).value
    assert abs(w - v) <= 1e-12 * max(abs(v), 1e-3)


# ---- Karlsson reductions

def test_ka_specimen():
    a, b, c = 0.5 + 0.2j, 1.3, 2.7 - 0.4j
    pieces = karlsson_z_reduce(Params3F2NegDiff(a, b, c, 0, 0), 0.3)
    assert len(pieces) == 2
    (c1, g1), (c2, g2) = pieces
    assert rel_err(c1, c / (c - b)) < 1e-15 and rel_err(c2, -b / (c - b)) < 1e-15
    assert g1 == GaussSpec(a, b, b + 1, 0.3) and g2 == GaussSpec(a, c, c + 1, 0.3)


def test_ka_at_zero():
    p = Params3F2NegDiff(0.5, 1.3, 2.2, 2, 3)
    pieces = karlsson_z_reduce(p, 0)
    assert rel_err(sum(c for c, _ in pieces), 1) < 1e-11
    assert rel_err(eval_karlsson_z(p, 0).value, 1) < 1e-14


def test_ka_example_value():
    p = Params3F2NegDiff(0.5, 1, 2, 1, 1)
    with pytest.raises(DomainViolation):
        karlsson_z_reduce(p, 0.5)  # b - c + 1 - 0 = 0
    p = Params3F2NegDiff(0.5, 1.3, 2, 1, 2)
    ref = hyp3f2_direct((0.5, 1.3, 2), (3.3, 5), 0.5)
    assert rel_err(eval_karlsson_z(p, 0.5).value, ref) < 1e-13
    assert rel_err(Rewrite(1.0, karlsson_z_reduce(p, 0.5)).evaluate(TOL).value, ref) < 1e-11


def test_ka_at_unit_argument_reproduces_karlsson_sum():
    from hyp32.identities import eval_karlsson_kb
    p = Params3F2NegDiff(0.3, 1.4, 2.9 + 0.3j, 2, 1)
    v = sum(c * gauss_2f1_unit(g.a, g.b, g.c).value for c, g in karlsson_z_reduce(p, 1))
    assert rel_err(v, eval_karlsson_kb(p).value) < 1e-10
    with pytest.raises(DomainViolation):
        eval_karlsson_z(p, 1)
    with pytest.raises(DomainViolation):
        karlsson_z_reduce(p, 1.5)


def test_karlsson_minton_examples():
    ks = KarMintonSpec(1.3, 0, (0.4, 0.7), (2.9,), 0.4)
    pieces = karlsson_minton_reduce(ks)
    assert pieces == [(1.0, GaussSpec(0.4, 0.7, 2.9, 0.4))]
    ks = KarMintonSpec(1.3, 1, (0.4, 0.7), (2.9,), 0.4)
    assert len(karlsson_minton_reduce(ks)) == 2
    assert rel_err(assembled(karlsson_minton_reduce(ks)), hyp3f2_direct((2.3, 0.4, 0.7), (1.3, 2.9), 0.4)) < 1e-13
    ks = KarMintonSpec(1.3, 2, (0.7 + 0.1j,), (), 0.4, b2=2.1, m2=1)
    assert rel_err(assembled(karlsson_minton_reduce(ks)), hyp3f2_direct((3.3, 3.1, 0.7 + 0.1j), (1.3, 2.1), 0.4)) < 1e-13


def test_karlsson_minton_at_unit_argument():
    ks = KarMintonSpec(1.3, 2, (-2,), (), 1, b2=2.1, m2=1)
    assert rel_err(assembled(karlsson_minton_reduce(ks)), sum_3f2(ks.as_3f2()).value) < 1e-13
    ks = KarMintonSpec(1.3, 2, (0.4, 0.7), (5.9,), 1)
    assert rel_err(assembled(karlsson_minton_reduce(ks)), sum_3f2(ks.as_3f2(), TOL).value) < 1e-11


def test_karlsson_minton_validation():
    with pytest.raises(DomainViolation):
        KarMintonSpec(1.3, 17, (0.4, 0.7), (2.9,))
    with pytest.raises(DomainViolation):
        KarMintonSpec(1.3, 1, (0.4,), (2.9,))
    with pytest.raises(DomainViolation):
        karlsson_minton_reduce(KarMintonSpec(-1.0, 2, (0.4, 0.7), (2.9,), 0.4))


def test_hyp10():
    assert evaluate_spec(Hyp10Spec(-3, 1)).value == 0
    assert evaluate_spec(Hyp10Spec(0, 1)).value == 1
    assert evaluate_spec(Hyp10Spec(-2.5, 1)).value == 0
    assert rel_err(evaluate_spec(Hyp10Spec(0.7, 0.4)).value, 0.6 ** -0.7) < 1e-15
    with pytest.raises(DomainViolation):
        evaluate_spec(Hyp10Spec(0.7, 1))


# ---- value preservation on small seeded samples (the full runs are acceptance checks)

@pytest.mark.parametrize("rule", sorted(transform_cases.RULES))
def test_value_preservation_smoke(rule):
    cases = transform_cases.RULES[rule](np.random.default_rng(3), 20)
    assert max(rel_err(rhs, lhs) for lhs, rhs in cases) < 1e-10
