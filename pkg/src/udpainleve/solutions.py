"""Closed-form ultradiscrete objects, all in exact rational arithmetic.

Notation follows the determinant construction:

* ``(gamma_k, G_k)``: candidate leading terms of ``g^(N)(m)``, one per number
  ``k`` of q-Bi rows.  ``f_k = G_{k-1} - G_k - A + B`` are the thresholds on
  ``B - A`` between consecutive candidates.
* ``h`` thresholds: the four ``f``'s that meet when ``g^(N)`` and
  ``g^(N+1)`` at ``m`` and ``m+1`` are combined into ``(zeta, Z)``.
* ``m0``/``k0``: integer indices locating ``B - A`` on the quadratic ladder
  ``m**2 Q`` and on the finer ``P`` ladders.

Every window uses a weak lower and a strict upper bound (``lo <= B-A < hi``),
so ties go to the larger index.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Optional

from .errors import ConsistencyError, DomainError
from .qairy import as_fraction, ud_airy_closed_form
from .tropical import NEG_INF, UdValue, ext


def _neg_rational(Q) -> Fraction:
    Q = as_fraction(Q)
    if Q >= 0:
        raise DomainError(f"Q must be negative, got {Q}")
    return Q


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


# m0 and k0 ---------------------------------------------------------------------


def m0_of(A, B, Q) -> int:
    """The unique ``m0 <= -2`` with ``m0**2 Q <= B - A < (m0+1)**2 Q``."""
    A, B, Q = as_fraction(A), as_fraction(B), _neg_rational(Q)
    D = B - A
    if not D < Q:
        raise DomainError(f"need B - A < Q (got B - A = {D}, Q = {Q})")
    r = D / Q  # > 1
    n = math.isqrt(r.numerator // r.denominator)
    while n * n < r:
        n += 1
    while (n - 1) * (n - 1) >= r:
        n -= 1
    m0 = -n
    assert m0 * m0 * Q <= D < (m0 + 1) ** 2 * Q
    return m0


def m0_bound(N: int, scheme: str = "Thm4") -> int:
    """Largest m0 admitted by the chosen scheme."""
    if scheme == "Thm4":
        return min(-3 * N - 2, -N * (N + 1) // 2 - 1)
    if scheme == "Thm2":
        return min(-3 * N + 1, -N * (N - 1) // 2 - 1)
    raise DomainError(f"unknown scheme {scheme!r}; use 'Thm2' or 'Thm4'")


def P_ladder(N: int, m0: int, Q, scheme: str = "Thm4") -> list:
    """``[P_0, P_1, ...]``: N+2 rungs for Thm4, N+1 (the primed ladder) for Thm2."""
    Q = _neg_rational(Q)
    ladder = [Fraction((m0 + 1) ** 2) * Q]
    if scheme == "Thm4":
        ladder += [(m0 * m0 - (N - j + 1) * (N - j + 2)) * Q for j in range(1, N + 2)]
    elif scheme == "Thm2":
        ladder += [(m0 * m0 - (N - j) * (N - j + 1)) * Q for j in range(1, N + 1)]
    else:
        raise DomainError(f"unknown scheme {scheme!r}; use 'Thm2' or 'Thm4'")
    return ladder


def _check_m0(N: int, m0: int, scheme: str) -> None:
    bound = m0_bound(N, scheme)
    if m0 > bound:
        which = "min(-3N-2, -N(N+1)/2-1)" if scheme == "Thm4" else "min(-3N+1, -N(N-1)/2-1)"
        raise DomainError(f"m0 <= {which} = {bound} violated (m0 = {m0}, N = {N})")


def k0_of(A, B, Q, N: int, scheme: str = "Thm4") -> int:
    """Index with ``P_{k0+1} <= B - A < P_{k0}`` on the scheme's ladder."""
    A, B, Q = as_fraction(A), as_fraction(B), _neg_rational(Q)
    m0 = m0_of(A, B, Q)
    _check_m0(N, m0, scheme)
    D = B - A
    ladder = P_ladder(N, m0, Q, scheme)
    for k in range(len(ladder) - 1):
        if ladder[k + 1] <= D < ladder[k]:
            return k
    raise ConsistencyError(f"B - A = {D} not bracketed by the {scheme} ladder {ladder}")


# gamma, G, f --------------------------------------------------------------------


def G_amp(N: int, k: int, m: int, A, B, Q) -> Fraction:
    A, B, Q = as_fraction(A), as_fraction(B), as_fraction(Q)
    F = Fraction
    quad = (F(N, 2) - k) * m * m
    lin = (-3 * k * k + (2 * N + 1) * k + F(N * (N - 2), 2)) * m
    const = (
        F(-8, 3) * k**3
        + (2 * N + F(3, 2)) * k * k
        + (F(1, 6) - N) * k
        + F(N * (N - 1) * (N - 2), 6)
    )
    return (N - k) * A + k * B + (quad + lin + const) * Q


def gamma_sign(N: int, k: int) -> int:
    return _sgn(N * k - k * (k + 1) // 2)


def gamma_G(N: int, k: int, m: int, A, B, Q, alpha: int = 1, beta: int = 1) -> UdValue:
    """``(gamma_k, G_k)``; the parity also carries ``alpha**(N-k) beta**k``."""
    if not 0 <= k <= N:
        raise DomainError(f"need 0 <= k <= N, got k={k}, N={N}")
    parity = gamma_sign(N, k) * alpha ** (N - k) * beta**k
    return UdValue(parity, G_amp(N, k, m, A, B, Q))


def f_threshold(N: int, k: int, m: int, Q) -> Fraction:
    """Closed form of ``G_{k-1} - G_k - A + B``; defined for every integer k."""
    Q = as_fraction(Q)
    return ((m - (N - 3 * k + 2)) ** 2 - (N - k) * (N - k + 1)) * Q


def select_index(N: int, m: int, A, B, Q) -> int:
    if m > -2 * N + 1:
        raise DomainError(f"leading-term selection needs m <= -2N+1 = {-2 * N + 1}, got m = {m}")
    D = as_fraction(B) - as_fraction(A)
    k = 0
    for j in range(1, N + 1):
        if f_threshold(N, j, m, Q) <= D:
            k = j
    return k


def select_G(N: int, m: int, A, B, Q, alpha: int = 1, beta: int = 1) -> UdValue:
    """Ultradiscrete image of ``g^(N)(m)`` chosen by the f-window holding ``B - A``."""
    _neg_rational(Q)
    if N == 0:
        return UdValue(1, Fraction(0))
    return gamma_G(N, select_index(N, m, A, B, Q), m, A, B, Q, alpha, beta)


def theorem2_index(N: int, m: int, A, B, Q) -> int:
    A, B, Q = as_fraction(A), as_fraction(B), _neg_rational(Q)
    if m > -2 * N + 1:
        raise DomainError(f"need m <= -2N+1 = {-2 * N + 1}, got m = {m}")
    if N == 0:
        return 0
    m0 = m0_of(A, B, Q)
    k0 = k0_of(A, B, Q, N, "Thm2")
    if m <= m0 - 2 * N + 2:
        return N
    if m >= m0 + N:
        return 0
    for j in range(N - 1, -1, -1):
        base = m0 + N - 3 * j
        if j > k0:
            span = (base, base + 1, base + 2)
        elif j == k0:
            span = (base, base + 1)
        else:
            span = (base - 1, base, base + 1)
        if m in span:
            return j
    raise ConsistencyError(f"no case of the m0/k0 table covers m = {m}")


def theorem2_G(N: int, m: int, A, B, Q) -> UdValue:
    """Leading term of ``g^(N)(m)`` read off the m0/k0 case table."""
    return gamma_G(N, theorem2_index(N, m, A, B, Q), m, A, B, Q)


# h thresholds and (zeta, Z) ------------------------------------------------------


def h_thresholds(N: int, l: int, m: int, Q) -> tuple:
    """``(h_I, h_II, h_III, h_IV)`` at level l, with the ordering checked."""
    Q = _neg_rational(Q)
    if m > -2 * N - 1:
        raise DomainError(f"h thresholds need m <= -2N-1 = {-2 * N - 1}, got m = {m}")
    if not 0 <= l <= N + 1:
        raise DomainError(f"need 0 <= l <= N+1, got l = {l}")
    h = (
        f_threshold(N + 1, l, m, Q),
        f_threshold(N, l, m, Q),
        f_threshold(N + 1, l, m + 1, Q),
        f_threshold(N, l, m + 1, Q),
    )
    if 1 <= l <= N:
        chain = list(h) + [f_threshold(N + 1, l + 1, m, Q)]
    elif l == N + 1:
        chain = [h[0], h[2]]
    else:
        chain = [h[3], f_threshold(N + 1, 1, m, Q)]
    if any(not x < y for x, y in zip(chain, chain[1:])):
        raise ConsistencyError(f"h ordering violated at N={N}, l={l}, m={m}, Q={Q}: {chain}")
    return h


def prop4_windows(N: int, m: int, Q) -> list:
    """``[(lower_bound, label, l), ...]`` in increasing order of lower bound.

    The first window has lower bound ``None`` (unbounded below).
    """
    windows = [(None, "low", 0), (h_thresholds(N, 0, m, Q)[3], "IV", 0)]
    for l in range(1, N + 1):
        hI, hII, hIII, hIV = h_thresholds(N, l, m, Q)
        windows += [(hI, "I", l), (hII, "II", l), (hIII, "III", l), (hIV, "IV", l)]
    hI, _, hIII, _ = h_thresholds(N, N + 1, m, Q)
    windows += [(hI, "I", N + 1), (hIII, "high", N + 1)]
    return windows


def _ZI(N: int, l: int, m: int, A, B, Q) -> Fraction:
    return A - B + (m * m + (6 * l - 2 * N - 5) * m + 8 * l * l - (4 * N + 13) * l + 3 * N + 5) * Q


def prop4_case(N: int, m: int, A, B, Q) -> tuple:
    """``(label, UdValue)`` for ``z^(N)(m)`` from the h-window holding ``B - A``."""
    A, B, Q = as_fraction(A), as_fraction(B), _neg_rational(Q)
    D = B - A
    label, l = "low", 0
    for lo, lab, ll in prop4_windows(N, m, Q):
        if lo is None or lo <= D:
            label, l = lab, ll
    if label in ("low", "IV") and l == 0:
        return f"{label},{l}", UdValue(1, m * Q)
    if label == "high":
        return "high", UdValue(1, (-m - 2 * N - 1) * Q)
    if label == "I":
        value = UdValue(_sgn(N + l + 1), _ZI(N, l, m, A, B, Q))
    elif label == "II":
        value = UdValue(-1, (-m - 2 * l + 1) * Q)
    elif label == "III":
        value = UdValue(_sgn(N + l), -_ZI(N, l, m + 1, A, B, Q))
    else:
        value = UdValue(1, (m + 2 * l) * Q)
    return f"{label},{l}", value


def prop4_zZ(N: int, m: int, A, B, Q) -> UdValue:
    return prop4_case(N, m, A, B, Q)[1]


def g_to_z(gNm: UdValue, gNm1: UdValue, gN1m: UdValue, gN1m1: UdValue, N: int, Q) -> UdValue:
    """Combine ``g^(N)(m), g^(N)(m+1), g^(N+1)(m), g^(N+1)(m+1)`` into ``(zeta, Z)``."""
    Q = as_fraction(Q)
    vals = (gNm, gNm1, gN1m, gN1m1)
    if any(v.amp is NEG_INF for v in vals):
        raise DomainError("g_to_z needs finite amplitudes")
    parity = gNm.parity * gNm1.parity * gN1m.parity * gN1m1.parity
    return UdValue(parity, gN1m1.amp - gN1m.amp - gNm1.amp + gNm.amp - N * Q)


# piecewise solutions -------------------------------------------------------------


@dataclass
class PiecewiseSolution:
    """Exact ``(zeta, Z)`` table on the integer window ``[m_from, m_to]``."""

    N: int
    Q: Fraction
    m_from: int
    m_to: int
    entries: Dict[int, UdValue] = field(default_factory=dict)
    provenance: Dict[int, str] = field(default_factory=dict)
    params: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        self.Q = as_fraction(self.Q)
        if self.m_from > self.m_to:
            raise DomainError(f"empty window [{self.m_from}, {self.m_to}]")
        missing = [m for m in range(self.m_from, self.m_to + 1) if m not in self.entries]
        if missing:
            raise ConsistencyError(f"solution table has holes at {missing[:5]}")

    def interior(self) -> range:
        return range(self.m_from + 1, self.m_to)

    def __getitem__(self, m: int) -> UdValue:
        return self.entries[m]

    def rows(self):
        for m in range(self.m_from, self.m_to + 1):
            yield m, self.entries[m], self.provenance.get(m, "")

    # serialization
    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, value in self._header().items():
            buf.write(f"# {key}={value}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "zeta", "Z", "provenance"])
        for m, v, prov in self.rows():
            w.writerow([m, v.parity, str(v.amp), prov])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PiecewiseSolution":
        header, body = {}, []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                header[key] = value
            elif line.strip():
                body.append(line)
        reader = csv.DictReader(body)
        entries, prov = {}, {}
        for row in reader:
            m = int(row["m"])
            entries[m] = UdValue(int(row["zeta"]), ext(row["Z"]))
            prov[m] = row["provenance"]
        return cls._from_header(header, entries, prov)

    def to_json(self, indent: Optional[int] = 2) -> str:
        doc = dict(self._header())
        doc["rows"] = [
            {"m": m, "zeta": v.parity, "Z": str(v.amp), "provenance": prov} for m, v, prov in self.rows()
        ]
        return json.dumps(doc, indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseSolution":
        doc = json.loads(text)
        rows = doc.pop("rows")
        entries = {r["m"]: UdValue(int(r["zeta"]), ext(r["Z"])) for r in rows}
        prov = {r["m"]: r["provenance"] for r in rows}
        return cls._from_header({k: str(v) for k, v in doc.items()}, entries, prov)

    def _header(self) -> dict:
        head = {"N": self.N, "Q": str(self.Q), "m_from": self.m_from, "m_to": self.m_to}
        for k, v in self.params.items():
            head[f"param.{k}"] = str(v)
        return head

    @classmethod
    def _from_header(cls, header, entries, prov) -> "PiecewiseSolution":
        params = {}
        for k, v in header.items():
            if k.startswith("param."):
                name = k[len("param."):]
                params[name] = int(v) if name in ("m0", "k0", "N") else Fraction(v)
        return cls(
            N=int(header["N"]),
            Q=Fraction(header["Q"]),
            m_from=int(header["m_from"]),
            m_to=int(header["m_to"]),
            entries=entries,
            provenance=prov,
            params=params,
        )


class _Table:
    """Collects entries and refuses conflicting double assignments."""

    def __init__(self):
        self.entries: Dict[int, UdValue] = {}
        self.provenance: Dict[int, str] = {}

    def put(self, m: int, value: UdValue, label: str) -> None:
        old = self.entries.get(m)
        if old is not None and old != value:
            raise ConsistencyError(f"cases {self.provenance[m]!r} and {label!r} disagree at m = {m}")
        if old is None:
            self.entries[m] = value
            self.provenance[m] = label

    def restrict(self, lo: int, hi: int):
        keep = range(lo, hi + 1)
        return (
            {m: self.entries[m] for m in keep if m in self.entries},
            {m: self.provenance[m] for m in keep if m in self.provenance},
        )


def _theorem4_cases(N: int, m0: int, k0: int, A, B, Q, table: _Table) -> None:
    """Cases II-IV (the finite middle band ``m0-2N .. m0+N``)."""
    D = B - A
    s = m0 * m0 + m0
    for j in range(0, N - k0 + 1):
        base = m0 - 2 * N + 3 * j
        table.put(base, UdValue(_sgn(j), -D + (s - j * j) * Q), f"Thm4-II j={j}")
        table.put(base + 1, UdValue(1, (m0 + j + 1) * Q), f"Thm4-II j={j}")
        if j <= N - k0 - 1:
            table.put(base + 2, UdValue(_sgn(j), D - (s - (j + 1) ** 2) * Q), f"Thm4-II j={j}")
    if k0 != 0:
        m = m0 + N - 3 * k0 + 2
        table.put(m, UdValue(-1, (-m0 - N + k0 - 1) * Q), "Thm4-III")
        t = m0 * m0 - m0
        for j in range(N - k0 + 1, N + 1):
            base = m0 - 2 * N + 3 * j
            table.put(base, UdValue(1, (m0 + j) * Q), f"Thm4-IV j={j}")
            if j <= N - 1:
                table.put(base + 1, UdValue(_sgn(j), D - (t - (j + 1) ** 2) * Q), f"Thm4-IV j={j}")
                table.put(base + 2, UdValue(_sgn(j + 1), -D + (t - (j + 1) ** 2) * Q), f"Thm4-IV j={j}")


def _theorem4_table(N: int, A, B, Q, m_from: int, m_upper: int):
    A, B, Q = as_fraction(A), as_fraction(B), _neg_rational(Q)
    if N < 0:
        raise DomainError("only N >= 0 is supported")
    m0 = m0_of(A, B, Q)
    _check_m0(N, m0, "Thm4")
    k0 = k0_of(A, B, Q, N, "Thm4")
    table = _Table()
    _theorem4_cases(N, m0, k0, A, B, Q, table)
    for m in range(min(m_from, m0 - 2 * N - 1), m0 - 2 * N):
        table.put(m, UdValue(1, (-m - 2 * N - 1) * Q), "Thm4-I")
    for m in range(m0 + N + 1, m_upper + 1):
        table.put(m, UdValue(1, m * Q), "Thm4-V")
    return table, m0, k0


def theorem4_solution(N: int, A, B, Q, m_from: Optional[int] = None, m_to: Optional[int] = None) -> PiecewiseSolution:
    """Theorem-4 profile on ``[m_from, m_to]`` with ``m_to <= -2N-1``."""
    A, B, Q = as_fraction(A), as_fraction(B), _neg_rational(Q)
    m0 = m0_of(A, B, Q)
    m_from = m0 - 2 * N - 4 if m_from is None else m_from
    m_to = -2 * N - 1 if m_to is None else m_to
    if m_to > -2 * N - 1:
        raise DomainError(f"Theorem-4 table is defined for m <= -2N-1 = {-2 * N - 1}")
    table, m0, k0 = _theorem4_table(N, A, B, Q, m_from, -2 * N - 1)
    entries, prov = table.restrict(m_from, m_to)
    params = {"A": A, "B": B, "m0": m0, "k0": k0}
    return PiecewiseSolution(N, Q, m_from, m_to, entries, prov, params)


def _ai_value(m: int, Q: Fraction) -> UdValue:
    return UdValue(_sgn(m), Fraction(0)) if m >= 0 else UdValue(1, m * Q)


def theorem5_solution(N: int, A, B, Q, m_from: Optional[int] = None, m_to: Optional[int] = None) -> PiecewiseSolution:
    """Theorem-4 profile for ``m <= m0+N``, Ai-type tail beyond."""
    A, B, Q = as_fraction(A), as_fraction(B), _neg_rational(Q)
    m0 = m0_of(A, B, Q)
    m_from = m0 - 2 * N - 4 if m_from is None else m_from
    m_to = 4 if m_to is None else m_to
    table, m0, k0 = _theorem4_table(N, A, B, Q, m_from, m0 + N)
    out = _Table()
    for m in range(m_from, m_to + 1):
        if m <= m0 + N:
            out.put(m, table.entries[m], table.provenance[m])
        else:
            out.put(m, _ai_value(m, Q), "Ai-tail")
    params = {"A": A, "B": B, "m0": m0, "k0": k0}
    return PiecewiseSolution(N, Q, m_from, m_to, out.entries, out.provenance, params)


def theorem1_solution(N: int, m0: int, C, Q, m_from: Optional[int] = None, m_to: Optional[int] = None) -> PiecewiseSolution:
    """Profile parametrised by ``(m0, C)``: asymptotic tails around a three-term cycle."""
    C, Q = as_fraction(C), _neg_rational(Q)
    if N < 0:
        raise DomainError("only N >= 0 is supported")
    _check_m0(N, m0, "Thm4")
    lo, hi = -(m0 + N * (N + 1)) * Q, (m0 + 1) * Q
    if not lo < C < hi:
        raise DomainError(f"C window -(m0+N(N+1))Q < C < (m0+1)Q violated: need {lo} < C < {hi}, got C = {C}")
    m_from = m0 - 2 * N - 4 if m_from is None else m_from
    m_to = 4 if m_to is None else m_to
    table = _Table()
    for m in range(m_from, m_to + 1):
        if m <= m0 - 2 * N - 1:
            table.put(m, UdValue(1, (-m - 2 * N - 1) * Q), "Thm1-I")
        elif m >= m0 + N + 1:
            table.put(m, _ai_value(m, Q), "Thm1-I")
        else:
            j, r = divmod(m - (m0 - 2 * N), 3)
            if r == 0:
                value = UdValue(_sgn(j), -C - j * j * Q)
            elif r == 1:
                value = UdValue(1, (m0 + j + 1) * Q)
            else:
                value = UdValue(_sgn(j), C + (j + 1) ** 2 * Q)
            table.put(m, value, f"Thm1-II j={j}")
    params = {"m0": m0, "C": C}
    return PiecewiseSolution(N, Q, m_from, m_to, table.entries, table.provenance, params)


def ai_type(N: int, Q, m_from: int = -20, m_to: int = 10) -> PiecewiseSolution:
    Q = _neg_rational(Q)
    entries = {m: _ai_value(m, Q) for m in range(m_from, m_to + 1)}
    return PiecewiseSolution(N, Q, m_from, m_to, entries, {m: "Ai-type" for m in entries})


def bi_type(N: int, Q, m_from: int = -20, m_to: int = 10) -> PiecewiseSolution:
    Q = _neg_rational(Q)
    entries = {
        m: UdValue(_sgn(m + 1), Fraction(0)) if m >= -2 * N else UdValue(1, (-m - 2 * N - 1) * Q)
        for m in range(m_from, m_to + 1)
    }
    return PiecewiseSolution(N, Q, m_from, m_to, entries, {m: "Bi-type" for m in entries})


def ud_airy_table(A, B, Q, m_from: int, m_to: int, alpha: int = 1, beta: int = 1) -> Dict[int, UdValue]:
    """``m -> (omega_m, W_m)`` for the general seed over ``[m_from, m_to]``."""
    return {m: ud_airy_closed_form(m, A, B, Q, alpha, beta) for m in range(m_from, m_to + 1)}


def params_for_theorem1(N: int, m0: int, C, Q, A=0) -> tuple:
    """``(A, B)`` realising a Theorem-1 profile as the k0 = 0 Theorem-5 profile."""
    C, Q, A = as_fraction(C), as_fraction(Q), as_fraction(A)
    return A, A + C + (m0 * m0 + m0) * Q


def windows_tile(endpoints: Iterable) -> bool:
    """True when the lower bounds are strictly increasing (no gaps, no overlaps)."""
    pts = [p for p in endpoints if p is not None]
    return all(x < y for x, y in zip(pts, pts[1:]))
