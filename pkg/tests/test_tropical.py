import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from udpainleve.errors import DomainError
from udpainleve.logsign import SignedLog
from udpainleve.tropical import (
    NEG_INF,
    UDP2_LHS,
    UDP2_RHS,
    S_gate,
    UdValue,
    ext,
    limit_consistency,
    s_gate,
    term_table_json,
    tmax,
    ud_airy_satisfied,
    ud_airy_sides,
    udp2_satisfied,
    udp2_sides,
)

# q-PII times (tau - z):  sum of coef * x^ex y^ey u^eu tau^et a^ea with
# x = z(m+1), y = z(m), u = z(m-1), a = q^(2N+1)
QPII_MONOMIALS = [
    (+1, 1, 2, 1, 1, 0),
    (+1, 1, 1, 0, 1, 0),
    (+1, 0, 1, 1, 1, 0),
    (+1, 0, 0, 0, 1, 0),
    (-1, 1, 3, 1, 0, 0),
    (-1, 1, 2, 0, 0, 0),
    (-1, 0, 2, 1, 0, 0),
    (-1, 0, 1, 0, 0, 0),
    (-1, 0, 1, 0, 2, 1),
]

# w(m+1) - tau w(m) + w(m-1)
AIRY_MONOMIALS = [(+1, 1, 0, 0, 0, 0), (-1, 0, 1, 0, 1, 0), (+1, 0, 0, 1, 0, 0)]


def brute_force_sides(monomials, triple, m, N, Q):
    """Max amplitude over positive-valued and over negative-valued monomials."""
    prev, cur, nxt = triple
    pos, neg = [], []
    for coef, ex, ey, eu, et, ea in monomials:
        sign, amp = coef, (et * m + ea * (2 * N + 1)) * Q
        for e, v in ((ex, nxt), (ey, cur), (eu, prev)):
            if e == 0:
                continue
            if v.amp is NEG_INF:
                amp = NEG_INF
                break
            sign *= v.parity**e
            amp = amp + e * v.amp
        if amp is NEG_INF:
            continue
        (pos if sign > 0 else neg).append(amp)
    return tmax(neg), tmax(pos)


amps = st.one_of(
    st.fractions(min_value=-50, max_value=50, max_denominator=12),
    st.just(NEG_INF),
)
ud_values = st.builds(UdValue, st.sampled_from([1, -1]), amps)
neg_Q = st.fractions(min_value=-20, max_value=Fraction(-1, 10), max_denominator=10)


@given(st.sampled_from([1, -1]), st.sampled_from([1, -1]))
def test_s_identities(z1, z2):
    assert s_gate(z1) * s_gate(z2) + s_gate(-z1) * s_gate(-z2) == s_gate(z1 * z2)
    assert (s_gate(z1) + s_gate(-z1)) ** 2 == 1


def test_gates():
    assert (s_gate(1), s_gate(-1)) == (1, 0)
    assert S_gate(1) == 0 and S_gate(-1) is NEG_INF
    with pytest.raises(DomainError):
        s_gate(0)
    with pytest.raises(DomainError):
        S_gate(2)


def test_neg_inf_is_absorbing_bottom():
    assert NEG_INF + Fraction(3) is NEG_INF
    assert Fraction(3) + NEG_INF is NEG_INF
    assert NEG_INF < Fraction(-10**9)
    assert not NEG_INF > Fraction(0)
    assert tmax([NEG_INF, Fraction(-4), Fraction(-7)]) == -4
    assert tmax([]) is NEG_INF


def test_ext_coercion():
    assert ext("3/4") == Fraction(3, 4)
    assert ext("-inf") is NEG_INF
    assert ext(-math.inf) is NEG_INF
    with pytest.raises(DomainError):
        ext(0.5)


def test_udvalue_normalises_zero():
    assert UdValue(-1, NEG_INF).parity == 1
    assert UdValue(1, 3).amp == Fraction(3)
    with pytest.raises(DomainError):
        UdValue(0, 1)


def test_term_table_sizes():
    assert len(UDP2_LHS) == 8 and len(UDP2_RHS) == 9
    doc = json.loads(term_table_json())
    assert len(doc["udAiry"]["lhs"]) == 3 and len(doc["udP2"]["rhs"]) == 9


@settings(max_examples=400, deadline=None)
@given(ud_values, ud_values, ud_values, st.integers(-30, 10), st.integers(0, 6), neg_Q)
def test_udp2_matches_monomial_split(prev, cur, nxt, m, N, Q):
    lhs, rhs = udp2_sides((prev, cur, nxt), m, N, Q)
    assert (lhs, rhs) == brute_force_sides(QPII_MONOMIALS, (prev, cur, nxt), m, N, Q)


@settings(max_examples=300, deadline=None)
@given(ud_values, ud_values, ud_values, st.integers(-30, 10), neg_Q)
def test_ud_airy_matches_monomial_split(prev, cur, nxt, m, Q):
    neg, pos = brute_force_sides(AIRY_MONOMIALS, (prev, cur, nxt), m, 0, Q)
    assert ud_airy_sides((prev, cur, nxt), m, Q) == (pos, neg)


def test_sides_reject_bad_input():
    v = UdValue(1, 0)
    with pytest.raises(DomainError):
        udp2_sides((v, v), 0, 0, -1)
    with pytest.raises(DomainError):
        udp2_sides((v, v, v), 0, 0, 1)


class _Table:
    def __init__(self, entries, N, Q, lo, hi):
        self.entries, self.N, self.Q, self.lo, self.hi = entries, N, Fraction(Q), lo, hi

    def interior(self):
        return range(self.lo + 1, self.hi)


def test_udp2_satisfied_reports_failures_per_m():
    Q = Fraction(-1)
    good = {m: UdValue(1, m * Q) if m < 0 else UdValue(-1 if m % 2 else 1, 0) for m in range(-6, 4)}
    assert udp2_satisfied(_Table(good, 0, Q, -6, 3)).passed
    bad = dict(good)
    bad[-3] = UdValue(-1, Fraction(5))
    rep = udp2_satisfied(_Table(bad, 0, Q, -6, 3))
    assert not rep.passed and {r.m for r in rep.failures()} <= {-4, -3, -2}


def test_udp2_satisfied_missing_entry():
    with pytest.raises(DomainError):
        udp2_satisfied(_Table({0: UdValue(1, 0)}, 0, -1, -1, 2), m_range=[0])


def test_ud_airy_satisfied_on_a_hand_solution():
    Q = Fraction(-2)
    # q-Ai image: (+1, m(m-1)Q/2) for m <= 0 and alternating parity above
    vals = {m: UdValue((-1) ** ((m * (m - 1) // 2) % 2) if m >= 0 else 1, Fraction(m * (m - 1), 2) * Q if m < 0 else 0)
            for m in range(-10, 8)}
    assert ud_airy_satisfied(vals, Q, range(-9, 7)).passed


def test_limit_consistency_flags():
    claimed = {1: UdValue(1, Fraction(2)), 2: UdValue(-1, Fraction(1))}

    def numeric(m, eps):
        # correct leading term with an eps*log 2 shift; m=2 has the wrong sign
        return SignedLog(1, float(claimed[m].amp) / eps + math.log(2))

    rep = limit_consistency(numeric, claimed, [0.2, 0.1, 0.05], lambda e: 0.5)
    by_m = {r.m: r for r in rep.rows}
    assert by_m[1].passed and by_m[1].monotone
    assert not by_m[2].parity_ok and not rep.passed
    with pytest.raises(DomainError):
        limit_consistency(numeric, claimed, [0.1, 0.2], lambda e: 1.0)


def test_limit_consistency_non_monotone():
    claimed = {0: UdValue(1, Fraction(0))}
    errs = {0.2: 0.01, 0.1: 0.2}
    rep = limit_consistency(lambda m, e: SignedLog(1, errs[e] / e), claimed, [0.2, 0.1], lambda e: 1.0)
    assert not rep.rows[0].monotone
