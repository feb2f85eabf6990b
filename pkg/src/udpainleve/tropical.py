"""Max-plus arithmetic with parity variables, evaluated exactly.

Amplitudes live in Q u {-inf}: :class:`fractions.Fraction` plus the
:data:`NEG_INF` singleton.  No floating point is used on this path.

Both ultradiscrete equations (the parity-variable Painleve II and Airy
equations) are stored as term tables, one :class:`Term` per max-plus
monomial, and evaluated by one generic routine.  ``term_table_json`` dumps
the tables for audit.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Iterable, Mapping, Optional, Sequence, Union

from .errors import DomainError
from .reports import CheckRecord, ResidualReport

if TYPE_CHECKING:
    from .logsign import SignedLog


@functools.total_ordering
class NegInf:
    """The bottom element of the max-plus carrier."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __gt__(self, other):
        return False

    def __hash__(self):
        return hash("-inf")

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"


NEG_INF = NegInf()

ExtRational = Union[Fraction, NegInf]


def ext(x) -> ExtRational:
    """Coerce ints, Fractions, strings ("p/q", "-inf") to an ExtRational."""
    if x is NEG_INF:
        return x
    if isinstance(x, str):
        s = x.strip()
        if s in ("-inf", "-oo", "-Infinity"):
            return NEG_INF
        return Fraction(s)
    if isinstance(x, float):
        if x == -math.inf:
            return NEG_INF
        raise DomainError("floats are not admitted into the exact layer")
    return Fraction(x)


@dataclass(frozen=True)
class UdValue:
    """Parity/amplitude pair; ``amp`` is -inf for the zero value.

    Exact values use Fraction amplitudes.  Values extracted from the numeric
    side carry float amplitudes and are only used for comparisons.
    """

    parity: int
    amp: Union[Fraction, NegInf, float]

    def __post_init__(self):
        if self.parity not in (1, -1):
            raise DomainError(f"parity must be +1 or -1, got {self.parity!r}")
        amp = self.amp
        if isinstance(amp, int):
            object.__setattr__(self, "amp", Fraction(amp))
        elif isinstance(amp, float) and amp == -math.inf:
            object.__setattr__(self, "amp", NEG_INF)
        if self.amp is NEG_INF and self.parity != 1:
            # zero carries parity +1 by convention
            object.__setattr__(self, "parity", 1)

    @property
    def is_bottom(self) -> bool:
        return self.amp is NEG_INF

    def __iter__(self):
        yield self.parity
        yield self.amp

    def __str__(self):
        return f"({self.parity:+d}, {self.amp})"


def s_gate(omega: int) -> int:
    if omega == 1:
        return 1
    if omega == -1:
        return 0
    raise DomainError(f"s is defined on {{+1, -1}}, got {omega!r}")


def S_gate(omega: int) -> ExtRational:
    if omega == 1:
        return Fraction(0)
    if omega == -1:
        return NEG_INF
    raise DomainError(f"S is defined on {{+1, -1}}, got {omega!r}")


def tmax(values: Iterable[ExtRational]) -> ExtRational:
    best: ExtRational = NEG_INF
    for v in values:
        if best is NEG_INF or (v is not NEG_INF and v > best):
            best = v
    return best


@dataclass(frozen=True)
class Term:
    """One max-plus monomial.

    Its value is ``z_next*Z[m+1] + z_cur*Z[m] + z_prev*Z[m-1]
    + (mQ*m + NQ*N + Q)*Q + S(gate_sign * prod)`` where ``prod`` multiplies the
    parities flagged in ``gate``.  ``gate is None`` means no S-gate.
    """

    z_next: int = 0
    z_cur: int = 0
    z_prev: int = 0
    mQ: int = 0
    NQ: int = 0
    Q: int = 0
    gate: Optional[tuple] = None
    gate_sign: int = 1

    def evaluate(self, triple: Sequence[UdValue], m: int, N: int, Q: Fraction) -> ExtRational:
        prev, cur, nxt = triple
        if self.gate is not None:
            parity = self.gate_sign
            for flag, v in zip(self.gate, (nxt, cur, prev)):
                if flag:
                    parity *= v.parity
            if parity == -1:
                return NEG_INF
        total: ExtRational = (self.mQ * m + self.NQ * N + self.Q) * Fraction(Q)
        for coeff, v in ((self.z_next, nxt), (self.z_cur, cur), (self.z_prev, prev)):
            if coeff:
                total = total + coeff * v.amp if v.amp is not NEG_INF else NEG_INF
        return total


# gate triples are flags for (zeta[m+1], zeta[m], zeta[m-1])
UDP2_LHS = (
    Term(z_next=1, z_cur=3, z_prev=1, gate=(1, 1, 1)),
    Term(z_next=1, z_cur=2, gate=(1, 0, 0)),
    Term(z_cur=2, z_prev=1, gate=(0, 0, 1)),
    Term(z_cur=1, gate=(0, 1, 0)),
    Term(z_cur=1, NQ=2, Q=1, mQ=2, gate=(0, 1, 0)),
    Term(z_next=1, z_cur=2, z_prev=1, mQ=1, gate=(1, 0, 1), gate_sign=-1),
    Term(z_next=1, z_cur=1, mQ=1, gate=(1, 1, 0), gate_sign=-1),
    Term(z_cur=1, z_prev=1, mQ=1, gate=(0, 1, 1), gate_sign=-1),
)

UDP2_RHS = tuple(
    Term(t.z_next, t.z_cur, t.z_prev, t.mQ, t.NQ, t.Q, t.gate, -t.gate_sign) for t in UDP2_LHS
) + (Term(mQ=1),)

UDAIRY_LHS = (
    Term(z_next=1, gate=(1, 0, 0)),
    Term(z_cur=1, mQ=1, gate=(0, 1, 0), gate_sign=-1),
    Term(z_prev=1, gate=(0, 0, 1)),
)

UDAIRY_RHS = tuple(
    Term(t.z_next, t.z_cur, t.z_prev, t.mQ, t.NQ, t.Q, t.gate, -t.gate_sign) for t in UDAIRY_LHS
)


def term_table_json(indent: int = 2) -> str:
    """JSON dump of both equations' term tables."""
    tables = {
        "udP2": {"lhs": [asdict(t) for t in UDP2_LHS], "rhs": [asdict(t) for t in UDP2_RHS]},
        "udAiry": {"lhs": [asdict(t) for t in UDAIRY_LHS], "rhs": [asdict(t) for t in UDAIRY_RHS]},
    }
    return json.dumps(tables, indent=indent)


def _sides(lhs_terms, rhs_terms, triple, m, N, Q):
    triple = tuple(triple)
    if len(triple) != 3:
        raise DomainError("expected values at (m-1, m, m+1)")
    lhs = tmax(t.evaluate(triple, m, N, Q) for t in lhs_terms)
    rhs = tmax(t.evaluate(triple, m, N, Q) for t in rhs_terms)
    return lhs, rhs


def udp2_sides(triple: Sequence[UdValue], m: int, N: int, Q) -> tuple:
    """Both sides of the parity-variable ultradiscrete PII at ``m``.

    ``triple`` holds the values at ``(m-1, m, m+1)`` in that order.
    """
    Q = Fraction(Q)
    if Q >= 0:
        raise DomainError("Q must be negative")
    return _sides(UDP2_LHS, UDP2_RHS, triple, m, N, Q)


def ud_airy_sides(triple: Sequence[UdValue], m: int, Q) -> tuple:
    """Both sides of the parity-variable ultradiscrete Airy equation."""
    Q = Fraction(Q)
    if Q >= 0:
        raise DomainError("Q must be negative")
    return _sides(UDAIRY_LHS, UDAIRY_RHS, triple, m, 0, Q)


def _check_solution(entries: Mapping[int, UdValue], m_values, side_fn, equation: str) -> ResidualReport:
    records = []
    for m in m_values:
        try:
            triple = (entries[m - 1], entries[m], entries[m + 1])
        except KeyError as exc:
            raise DomainError(f"{equation}: solution undefined at m={exc.args[0]}") from None
        lhs, rhs = side_fn(triple, m)
        records.append(CheckRecord(m=m, passed=lhs == rhs, lhs=lhs, rhs=rhs))
    return ResidualReport(equation=equation, records=records)


def udp2_satisfied(solution, m_range=None) -> ResidualReport:
    """Check the ultradiscrete PII exactly at each m of ``m_range``.

    ``m_range`` defaults to the interior of the solution's domain.  The
    solution needs ``entries`` (m -> UdValue) and ``N``/``Q`` attributes.
    """
    if m_range is None:
        m_range = solution.interior()
    N, Q = solution.N, solution.Q
    return _check_solution(
        solution.entries, m_range, lambda tr, m: udp2_sides(tr, m, N, Q), f"udP2[N={N}]"
    )


def ud_airy_satisfied(values: Mapping[int, UdValue], Q, m_range) -> ResidualReport:
    return _check_solution(values, m_range, lambda tr, m: ud_airy_sides(tr, m, Q), "udAiry")


@dataclass
class LimitRow:
    m: int
    parity_ok: bool
    errors: dict  # eps -> |eps*log|x| - Z|
    within_tol: bool
    monotone: bool
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.parity_ok and self.within_tol and self.monotone


@dataclass
class LimitReport:
    rows: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self):
        return [r for r in self.rows if not r.passed]


#: absolute slack allowed when checking that the error shrinks with eps
MONOTONE_SLACK = 1e-9


def limit_consistency(
    numeric: Callable[[int, float], "SignedLog"],
    claimed: Mapping[int, UdValue],
    eps_list: Sequence[float],
    tol_fn: Callable[[float], float],
    m_values: Optional[Iterable[int]] = None,
) -> LimitReport:
    """Compare ``eps*log|numeric(m, eps)|`` against exact amplitudes.

    Parity is compared at the smallest eps.  Errors must sit within
    ``tol_fn(eps)`` and be non-increasing as eps decreases (up to
    ``MONOTONE_SLACK``).  Failures are reported per m, never raised.
    """
    eps_list = list(eps_list)
    if any(e2 >= e1 for e1, e2 in zip(eps_list, eps_list[1:])):
        raise DomainError("eps_list must be strictly decreasing")
    if m_values is None:
        m_values = sorted(claimed)
    rows = []
    for m in m_values:
        target = claimed[m]
        errors = {}
        parity_ok = True
        note = ""
        for eps in eps_list:
            x = numeric(m, eps)
            if x.sign == 0:
                errors[eps] = math.inf
                note = "numeric value vanished"
                continue
            errors[eps] = abs(eps * x.logmag - float(target.amp))
            if eps == eps_list[-1]:
                parity_ok = x.sign == target.parity
        within = all(errors[e] <= tol_fn(e) for e in eps_list)
        errs = [errors[e] for e in eps_list]
        monotone = all(b <= a + MONOTONE_SLACK for a, b in zip(errs, errs[1:]))
        rows.append(LimitRow(m, parity_ok, errors, within, monotone, note))
    return LimitReport(rows)
