import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from udpainleve.errors import ConsistencyError, DomainError
from udpainleve.solutions import (
    G_amp,
    P_ladder,
    PiecewiseSolution,
    ai_type,
    bi_type,
    f_threshold,
    g_to_z,
    gamma_G,
    h_thresholds,
    k0_of,
    m0_bound,
    m0_of,
    params_for_theorem1,
    prop4_case,
    prop4_windows,
    prop4_zZ,
    select_G,
    theorem1_solution,
    theorem2_G,
    theorem4_solution,
    theorem5_solution,
    windows_tile,
)
from udpainleve.tropical import NEG_INF, UdValue, udp2_satisfied

Qs = st.fractions(min_value=-12, max_value=Fraction(-1, 8), max_denominator=8)
rationals = st.fractions(min_value=-80, max_value=80, max_denominator=8)

WORKED_EXAMPLE = {
    -18: (1, 29),
    -17: (1, 33),
    -16: (1, -32),
    -15: (-1, 32),
    -14: (1, 30),
    -13: (-1, -30),
    -12: (1, 30),
    -11: (1, 16),
    -10: (-1, -16),
}


def brute_m0(A, B, Q):
    D = B - A
    return next(m for m in range(-2, -10**6, -1) if m * m * Q <= D < (m + 1) ** 2 * Q)


def brute_leading(N, m, A, B, Q):
    best = max(range(N + 1), key=lambda k: (G_amp(N, k, m, A, B, Q), k))
    return gamma_G(N, best, m, A, B, Q)


@st.composite
def thm4_params(draw, max_N=4):
    """Admissible (N, A, B, Q) for the m0/k0 tables, B - A anywhere in its window."""
    N = draw(st.integers(0, max_N))
    m0 = m0_bound(N) - draw(st.integers(0, 3))
    Q = draw(Qs)
    t = draw(st.fractions(min_value=0, max_value=Fraction(999, 1000), max_denominator=1000))
    D = m0 * m0 * Q + t * ((m0 + 1) ** 2 * Q - m0 * m0 * Q)
    A = draw(rationals)
    return N, A, A + D, Q


# m0 / k0 ---------------------------------------------------------------------------


def test_m0_examples():
    assert m0_of(450, 25, -3) == -12
    assert m0_of(4, 0, -1) == -2  # boundary: m0^2 Q == B - A
    assert m0_of(9, 0, -2) == -3


@given(rationals, st.fractions(min_value=Fraction(1, 100), max_value=500, max_denominator=100), Qs)
def test_m0_matches_search(A, excess, Q):
    B = A + Q - excess
    assert m0_of(A, B, Q) == brute_m0(A, B, Q)


def test_m0_domain():
    with pytest.raises(DomainError, match="B - A < Q"):
        m0_of(0, -1, -1)
    with pytest.raises(DomainError):
        m0_of(0, -5, 1)


def test_k0_examples():
    assert k0_of(450, 25, -3, 3) == 2
    N, m0, Q = 2, -9, Fraction(-1)
    assert k0_of(0, m0 * m0 * Q, Q, N) == N
    assert k0_of(0, (m0 + 1) ** 2 * Q - Fraction(1, 1000), Q, N) == 0


def test_k0_names_violated_inequality():
    with pytest.raises(DomainError, match="m0 <="):
        k0_of(0, -30, -1, 3)  # m0 = -6 > -11
    with pytest.raises(DomainError):
        k0_of(0, -30, -1, 3, scheme="other")


@given(thm4_params())
def test_k0_is_bracketed_and_ladders_decrease(params):
    N, A, B, Q = params
    m0 = m0_of(A, B, Q)
    P = P_ladder(N, m0, Q, "Thm4")
    assert all(x > y for x, y in zip(P, P[1:]))
    k0 = k0_of(A, B, Q, N)
    assert P[k0 + 1] <= B - A < P[k0]
    if N >= 1:
        Pp = P_ladder(N, m0, Q, "Thm2")
        assert all(x > y for x, y in zip(Pp, Pp[1:]))


# gamma, G, f ------------------------------------------------------------------------------


def test_G_k0_formula():
    N, m, A, B, Q = 3, -9, Fraction(7), Fraction(2), Fraction(-3)
    expected = N * A + (Fraction(N, 2) * m * m + Fraction(N * (N - 2), 2) * m + Fraction(N * (N - 1) * (N - 2), 6)) * Q
    assert gamma_G(N, 0, m, A, B, Q) == UdValue(1, expected)


def test_f_special_case():
    for m in range(-20, 0):
        assert f_threshold(3, 3, m, -2) == (m + 4) ** 2 * -2


def test_gamma_parity():
    assert [gamma_G(3, k, -9, 0, 0, -1).parity for k in range(4)] == [1, 1, -1, -1]
    assert gamma_G(2, 1, -9, 0, 0, -1, alpha=-1).parity == -gamma_G(2, 1, -9, 0, 0, -1).parity
    with pytest.raises(DomainError):
        gamma_G(2, 3, -9, 0, 0, -1)


@settings(max_examples=200)
@given(st.integers(1, 6), st.data(), rationals, rationals, Qs)
def test_f_identity(N, data, A, B, Q):
    k = data.draw(st.integers(1, N))
    m = data.draw(st.integers(-40, -2 * N + 1))
    assert G_amp(N, k - 1, m, A, B, Q) - G_amp(N, k, m, A, B, Q) - A + B == f_threshold(N, k, m, Q)


@settings(max_examples=200)
@given(st.integers(0, 5), st.data(), rationals, rationals, Qs)
def test_local_maximum_is_global(N, data, A, B, Q):
    m = data.draw(st.integers(-40, -2 * N + 3))
    G = [G_amp(N, k, m, A, B, Q) for k in range(N + 1)]
    for k in range(N + 1):
        local = all(G[k] > G[j] for j in (k - 1, k + 1) if 0 <= j <= N)
        assert local == all(G[k] > G[j] for j in range(N + 1) if j != k)


# selection --------------------------------------------------------------------------------


def test_select_branches():
    N, m, Q = 3, -9, Fraction(-1)
    f1, fN = f_threshold(N, 1, m, Q), f_threshold(N, N, m, Q)
    assert select_G(N, m, 0, f1 - 1, Q) == gamma_G(N, 0, m, 0, f1 - 1, Q)
    assert select_G(N, m, 0, fN, Q) == gamma_G(N, N, m, 0, fN, Q)  # tie -> larger index
    assert select_G(0, m, 5, 1, Q) == UdValue(1, 0)
    with pytest.raises(DomainError, match="m <= -2N\\+1"):
        select_G(3, -4, 0, 0, Q)


@settings(max_examples=200)
@given(st.integers(1, 5), st.data(), rationals, rationals, Qs)
def test_select_is_argmax(N, data, A, B, Q):
    m = data.draw(st.integers(-40, -2 * N + 1))
    assert select_G(N, m, A, B, Q) == brute_leading(N, m, A, B, Q)


@settings(max_examples=100)
@given(st.integers(0, 6), st.data(), Qs)
def test_f_windows_tile(N, data, Q):
    m = data.draw(st.integers(-40, -2 * N + 1))
    assert windows_tile(f_threshold(N, k, m, Q) for k in range(1, N + 1))


def test_theorem2_cases():
    A, B, Q, N = Fraction(450), Fraction(25), Fraction(-3), 3
    m0 = m0_of(A, B, Q)
    assert theorem2_G(N, m0 - 2 * N + 2, A, B, Q) == gamma_G(N, N, m0 - 2 * N + 2, A, B, Q)
    for m in range(m0 + N, -2 * N + 2):
        assert theorem2_G(N, m, A, B, Q) == gamma_G(N, 0, m, A, B, Q)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4), st.data(), Qs, rationals)
def test_theorem2_equals_selection(N, data, Q, A):
    m0 = m0_bound(N, "Thm2") - data.draw(st.integers(0, 3))
    t = data.draw(st.fractions(min_value=0, max_value=Fraction(999, 1000), max_denominator=1000))
    B = A + m0 * m0 * Q + t * ((m0 + 1) ** 2 * Q - m0 * m0 * Q)
    for m in range(m0 - 2 * N - 3, -2 * N + 2):
        assert theorem2_G(N, m, A, B, Q) == select_G(N, m, A, B, Q)


# h thresholds / case table --------------------------------------------------------------


def test_h_examples():
    hI, hII, hIII, hIV = h_thresholds(1, 1, -4, -1)
    assert (hI, hII, hIII, hIV) == (f_threshold(2, 1, -4, -1), f_threshold(1, 1, -4, -1), f_threshold(2, 1, -3, -1), f_threshold(1, 1, -3, -1))
    assert hI < hII < hIII < hIV < f_threshold(2, 2, -4, -1)
    h_thresholds(3, 2, -9, -3)
    for N in range(0, 5):
        for l in range(0, N + 2):
            h_thresholds(N, l, -2 * N - 1, -1)
    with pytest.raises(DomainError):
        h_thresholds(2, 1, -4, -1)


@settings(max_examples=200)
@given(st.integers(0, 6), st.data(), Qs)
def test_h_chain_and_tiling(N, data, Q):
    m = data.draw(st.integers(-40, -2 * N - 1))
    for l in range(0, N + 2):
        h_thresholds(N, l, m, Q)
    assert windows_tile(w[0] for w in prop4_windows(N, m, Q))


def test_prop4_end_rows():
    N, m, Q = 2, -9, Fraction(-1)
    low = h_thresholds(N, 0, m, Q)[3] - 1
    assert prop4_zZ(N, m, 0, low, Q) == UdValue(1, m * Q)
    high = h_thresholds(N, N + 1, m, Q)[2]
    assert prop4_zZ(N, m, 0, high, Q) == UdValue(1, (-m - 2 * N - 1) * Q)
    assert prop4_case(N, m, 0, high, Q)[0] == "high"


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 4), st.data(), rationals, rationals, Qs)
def test_case_table_equals_g_to_z(N, data, A, B, Q):
    m = data.draw(st.integers(-40, -2 * N - 2))
    quad = [select_G(n, k, A, B, Q) for n, k in ((N, m), (N, m + 1), (N + 1, m), (N + 1, m + 1))]
    assert g_to_z(*quad, N, Q) == prop4_zZ(N, m, A, B, Q)


def test_g_to_z_examples():
    one = UdValue(1, 0)
    assert g_to_z(one, one, one, one, 0, -1) == one
    minus = UdValue(-1, 0)
    assert g_to_z(minus, minus, minus, one, 0, -1).parity == -1
    assert g_to_z(UdValue(1, 2), UdValue(1, 5), UdValue(1, 1), UdValue(1, 7), 2, -1) == UdValue(1, 7 - 1 - 5 + 2 + 2)
    with pytest.raises(DomainError):
        g_to_z(UdValue(1, NEG_INF), one, one, one, 0, -1)


# piecewise solutions ----------------------------------------------------------------------


def test_worked_example_table():
    s = theorem5_solution(3, 450, 25, -3, -30, 12)
    assert s.params["m0"] == -12 and s.params["k0"] == 2
    for m in range(-30, 13):
        if m <= -19:
            expected = (1, 3 * m + 21)
        elif m >= 0:
            expected = ((-1) ** m, 0)
        elif m >= -9:
            expected = (1, -3 * m)
        else:
            expected = WORKED_EXAMPLE[m]
        assert tuple(s[m]) == (expected[0], Fraction(expected[1])), m


def test_theorem1_cycle():
    N, m0, Q = 2, -8, Fraction(-1)
    C = Fraction(7, 2)
    s = theorem1_solution(N, m0, C, Q)
    assert s[m0 - 2 * N] == UdValue(1, -C)
    assert s[m0 - 2 * N + 1] == UdValue(1, (m0 + 1) * Q)
    assert s[m0 - 2 * N + 2] == UdValue(1, C + Q)


def test_window_errors_are_named():
    with pytest.raises(DomainError, match="C window"):
        theorem1_solution(2, -8, 100, -1)
    with pytest.raises(DomainError, match="m0 <="):
        theorem1_solution(2, -5, 0, -1)
    with pytest.raises(DomainError, match="m0 <="):
        theorem5_solution(3, 0, -30, -1)
    with pytest.raises(DomainError):
        theorem4_solution(3, 450, 25, -3, m_to=0)


def test_ai_bi_types():
    ai, bi = ai_type(2, -1), bi_type(2, -1)
    assert ai[3] == UdValue(-1, 0) and ai[-4] == UdValue(1, 4)
    assert bi[-4] == UdValue(-1, 0) and bi[-5] == UdValue(1, Fraction(-(5 - 4 - 1)))
    assert udp2_satisfied(ai).passed and udp2_satisfied(bi).passed


@settings(max_examples=120, deadline=None)
@given(thm4_params())
def test_generated_profiles_solve_udp2(params):
    N, A, B, Q = params
    assert udp2_satisfied(theorem5_solution(N, A, B, Q)).passed
    assert udp2_satisfied(theorem4_solution(N, A, B, Q)).passed


@settings(max_examples=150, deadline=None)
@given(thm4_params())
def test_theorem4_equals_case_table(params):
    N, A, B, Q = params
    for m, v, _ in theorem4_solution(N, A, B, Q).rows():
        assert v == prop4_zZ(N, m, A, B, Q), m


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4), st.integers(0, 3), Qs, st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000)))
def test_theorem1_equals_theorem5(N, shift, Q, t):
    m0 = m0_bound(N) - shift
    lo, hi = -(m0 + N * (N + 1)) * Q, (m0 + 1) * Q
    C = lo + t * (hi - lo)
    s1 = theorem1_solution(N, m0, C, Q)
    assert udp2_satisfied(s1).passed
    A, B = params_for_theorem1(N, m0, C, Q, A=Fraction(3, 7))
    s5 = theorem5_solution(N, A, B, Q, s1.m_from, s1.m_to)
    assert s5.params["k0"] == 0 and s5.params["m0"] == m0
    assert s1.entries == s5.entries


def test_serialization_round_trip():
    s = theorem5_solution(2, Fraction(601, 3), Fraction(-7, 2), Fraction(-5, 2))
    text = s.to_csv()
    assert "/" in text
    assert PiecewiseSolution.from_csv(text) == s
    assert PiecewiseSolution.from_json(s.to_json()) == s
    t1 = theorem1_solution(1, -6, Fraction(9, 2), -1)
    assert PiecewiseSolution.from_csv(t1.to_csv()) == t1


def test_table_holes_rejected():
    with pytest.raises(ConsistencyError):
        PiecewiseSolution(0, -1, 0, 2, {0: UdValue(1, 0), 2: UdValue(1, 0)})
