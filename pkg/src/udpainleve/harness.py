"""Verification sweeps, the Figure-1 style comparison, and the command line.

Every sweep returns a :class:`~udpainleve.reports.ResidualReport`; records
of randomized suites carry the parameter draw in ``note`` so a failure can
be replayed verbatim.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import solutions as sol
from .errors import DomainError, SingularPointError, UdPainleveError
from .logsign import SignedLog
from .qairy import (
    DEFAULT_CONTROL,
    FIGURE1_PARAMS,
    QPIIParams,
    SeriesControl,
    as_fraction,
    evaluator,
    qairy_residual,
    ud_airy_closed_form,
)
from .qpii import bilinear_residual, casorati_g, dominance_oracle, qpii_residual, z_of_g
from .reports import CheckRecord, ResidualReport
from .tropical import UdValue, limit_consistency, ud_airy_satisfied, udp2_satisfied

# tolerances for the finite-eps comparison (eps = 0.1); see README
TOL_ASYMPTOTIC = 0.5
TOL_MIDDLE = 1.5
QAIRY_TOL = 1e-10
BILINEAR_TOL = 1e-8
QPII_TOL = 1e-6
PROP3_EPS = 0.02

REGIONS = ("left-asymptotic", "middle", "right-asymptotic")


@dataclass
class CompareRow:
    m: int
    zt_plus: Optional[float]
    zt_minus: Optional[float]
    Z_closed: Fraction
    zeta_closed: int
    abs_err: float
    region: str
    note: str = ""

    @property
    def sign_ok(self) -> bool:
        if self.zt_plus is not None:
            return self.zeta_closed == 1
        if self.zt_minus is not None:
            return self.zeta_closed == -1
        return False

    @property
    def tolerance(self) -> float:
        return TOL_MIDDLE if self.region == "middle" else TOL_ASYMPTOTIC

    @property
    def passed(self) -> bool:
        return self.sign_ok and self.abs_err <= self.tolerance


def region_of(m: int, m0: int, N: int) -> str:
    if m <= m0 - 2 * N - 1:
        return REGIONS[0]
    if m >= m0 + N + 1:
        return REGIONS[2]
    return REGIONS[1]


def _require_positive_seeds(params: QPIIParams) -> None:
    if params.alpha != 1 or params.beta != 1:
        raise DomainError("closed-form profiles assume alpha = beta = +1")


def run_figure1(
    params: QPIIParams = FIGURE1_PARAMS,
    m_from: int = -25,
    m_to: int = 10,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> List[CompareRow]:
    """Numeric ``eps*log|z^(N)(m)|`` next to the closed-form profile."""
    _require_positive_seeds(params)
    N = params.N
    closed = sol.theorem5_solution(N, params.A, params.B, params.Q, m_from, m_to)
    m0 = closed.params["m0"]
    eps = float(params.eps)
    rows = []
    for m in range(m_from, m_to + 1):
        target = closed[m]
        region = region_of(m, m0, N)
        try:
            z = z_of_g(N, m, params, ctl)
        except SingularPointError as exc:
            rows.append(CompareRow(m, None, None, target.amp, target.parity, math.inf, region, str(exc)))
            continue
        amp = eps * z.logmag
        err = abs(amp - float(target.amp))
        rows.append(
            CompareRow(
                m,
                amp if z.sign > 0 else None,
                amp if z.sign < 0 else None,
                target.amp,
                target.parity,
                err,
                region,
                "cancellation flag" if z.cancel_flag else "",
            )
        )
    return rows


def figure1_limit(
    params: QPIIParams = FIGURE1_PARAMS,
    eps_list=(0.2, 0.1, 0.05),
    m_from: int = -25,
    m_to: int = 10,
    regions=("left-asymptotic", "right-asymptotic"),
    ctl: SeriesControl = DEFAULT_CONTROL,
):
    """Error of the numeric profile against the closed form as eps shrinks."""
    _require_positive_seeds(params)
    closed = sol.theorem5_solution(params.N, params.A, params.B, params.Q, m_from, m_to)
    m0 = closed.params["m0"]
    ms = [m for m in range(m_from, m_to + 1) if region_of(m, m0, params.N) in regions]

    def numeric(m, eps):
        return z_of_g(params.N, m, params.replace(eps=eps), ctl)

    return limit_consistency(numeric, closed.entries, eps_list, lambda e: TOL_ASYMPTOTIC, ms)


# random admissible draws ------------------------------------------------------------


@dataclass(frozen=True)
class Draw:
    N: int
    A: Fraction
    B: Fraction
    Q: Fraction

    def __str__(self):
        return f"N={self.N} A={self.A} B={self.B} Q={self.Q}"


def _rational(rng: random.Random, lo: int, hi: int, den: int = 6) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def draw_Q(rng: random.Random) -> Fraction:
    return -Fraction(rng.randint(1, 24), rng.randint(1, 4))


def draw_theorem4(rng: random.Random, N: Optional[int] = None) -> Draw:
    """Admissible (N, A, B, Q), with B - A sometimes exactly on a P rung."""
    N = rng.randint(0, 4) if N is None else N
    m0 = sol.m0_bound(N, "Thm4") - rng.randint(0, 4)
    Q = draw_Q(rng)
    ladder = sol.P_ladder(N, m0, Q, "Thm4")
    k = rng.randint(0, N)
    lo, hi = ladder[k + 1], ladder[k]
    if rng.random() < 0.15:
        D = lo
    else:
        D = lo + Fraction(rng.randint(0, 999), 1000) * (hi - lo)
    A = _rational(rng, -60, 60)
    return Draw(N, A, A + D, Q)


def draw_theorem1(rng: random.Random, N: Optional[int] = None) -> tuple:
    N = rng.randint(0, 4) if N is None else N
    m0 = sol.m0_bound(N, "Thm4") - rng.randint(0, 4)
    Q = draw_Q(rng)
    lo, hi = -(m0 + N * (N + 1)) * Q, (m0 + 1) * Q
    C = lo + Fraction(rng.randint(1, 999), 1000) * (hi - lo)
    return N, m0, C, Q


def draw_prop3(rng: random.Random, N: Optional[int] = None, margin_frac=Fraction(1, 10)) -> tuple:
    """(N, m, A, B, Q) with B - A inside an f-window, |Q|/10 clear of its ends."""
    N = rng.randint(1, 3) if N is None else N
    Q = -Fraction(rng.randint(20, 60), 10)
    m = rng.randint(-2 * N - 12, -2 * N + 1)
    margin = abs(Q) * margin_frac
    f = [sol.f_threshold(N, k, m, Q) for k in range(1, N + 1)]
    k = rng.randint(0, N)
    lo = f[k - 1] + margin if k >= 1 else f[0] - 6 * abs(Q)
    hi = f[k] - margin if k < N else f[N - 1] + 6 * abs(Q)
    D = lo + Fraction(rng.randint(0, 100), 100) * (hi - lo)
    A = _rational(rng, -20, 20, den=2)
    return N, m, A, A + D, Q


# suites ----------------------------------------------------------------------------------


def _tag(report: ResidualReport, note: str) -> ResidualReport:
    for r in report.records:
        r.note = note if not r.note else f"{note}; {r.note}"
    return report


def _suite_udp2_thm5(rng, draws):
    out = ResidualReport("udP2 / theorem-5 profiles")
    for _ in range(draws):
        d = draw_theorem4(rng)
        out.extend(_tag(udp2_satisfied(sol.theorem5_solution(d.N, d.A, d.B, d.Q)), str(d)))
    return out


def _suite_udp2_thm4(rng, draws):
    out = ResidualReport("udP2 / theorem-4 profiles")
    for _ in range(draws):
        d = draw_theorem4(rng)
        out.extend(_tag(udp2_satisfied(sol.theorem4_solution(d.N, d.A, d.B, d.Q)), str(d)))
    return out


def _suite_udp2_thm1(rng, draws):
    out = ResidualReport("udP2 / theorem-1 profiles")
    for _ in range(draws):
        N, m0, C, Q = draw_theorem1(rng)
        note = f"N={N} m0={m0} C={C} Q={Q}"
        out.extend(_tag(udp2_satisfied(sol.theorem1_solution(N, m0, C, Q)), note))
    return out


def _suite_udp2_ai(rng, draws):
    out = ResidualReport("udP2 / Ai-type")
    for N in range(0, 5):
        for _ in range(max(1, draws // 5)):
            Q = draw_Q(rng)
            out.extend(_tag(udp2_satisfied(sol.ai_type(N, Q)), f"N={N} Q={Q}"))
    return out


def _suite_udp2_bi(rng, draws):
    out = ResidualReport("udP2 / Bi-type")
    for N in range(0, 5):
        for _ in range(max(1, draws // 5)):
            Q = draw_Q(rng)
            out.extend(_tag(udp2_satisfied(sol.bi_type(N, Q)), f"N={N} Q={Q}"))
    return out


def _suite_udairy(rng, draws):
    out = ResidualReport("udAiry / general seed")
    for _ in range(draws):
        Q = draw_Q(rng)
        A = _rational(rng, -60, 60)
        B = A + Q - _rational(rng, 0, 400)
        if not B - A < Q:
            continue
        alpha, beta = rng.choice((1, -1)), rng.choice((1, -1))
        table = sol.ud_airy_table(A, B, Q, -40, 12, alpha, beta)
        rep = ud_airy_satisfied(table, Q, range(-39, 12))
        out.extend(_tag(rep, f"A={A} B={B} Q={Q} alpha={alpha} beta={beta}"))
    return out


def _record(ok: bool, note: str, m: int = 0) -> CheckRecord:
    return CheckRecord(m=m, passed=bool(ok), note=note)


def structural_checks(d: Draw, m_span: int = 12) -> List[CheckRecord]:
    """Exact identities and orderings for one parameter draw."""
    N, A, B, Q = d.N, d.A, d.B, d.Q
    D = B - A
    recs = []
    m0 = sol.m0_of(A, B, Q)
    for scheme in ("Thm4", "Thm2"):
        if N == 0 and scheme == "Thm2":
            continue
        P = sol.P_ladder(N, m0, Q, scheme)
        recs.append(_record(all(x > y for x, y in zip(P, P[1:])), f"{d}: {scheme} ladder decreasing"))
    for n in range(0, 7):
        for m in range(-2 * n - m_span, -2 * n + 2):
            for k in range(1, n + 1):
                lhs = sol.G_amp(n, k - 1, m, A, B, Q) - sol.G_amp(n, k, m, A, B, Q) - A + B
                recs.append(_record(lhs == sol.f_threshold(n, k, m, Q), f"{d}: f identity n={n} k={k}", m))
    for n in range(0, 6):
        for m in range(-2 * n - m_span, -2 * n + 4):
            G = [sol.G_amp(n, k, m, A, B, Q) for k in range(n + 1)]
            for k in range(n + 1):
                local = all(G[k] > G[j] for j in (k - 1, k + 1) if 0 <= j <= n)
                glob = all(G[k] > G[j] for j in range(n + 1) if j != k)
                recs.append(_record(local == glob, f"{d}: local/global maximum n={n} k={k}", m))
    for m in range(-2 * N - m_span, -2 * N + 2):
        f = [sol.f_threshold(N, k, m, Q) for k in range(1, N + 1)]
        recs.append(_record(sol.windows_tile(f), f"{d}: f windows tile", m))
        recs.append(
            _record(sol.select_G(N, m, A, B, Q) == _brute_leading(N, m, A, B, Q), f"{d}: selection is max", m)
        )
        if N >= 1 and m0 <= sol.m0_bound(N, "Thm2"):
            same = sol.theorem2_G(N, m, A, B, Q) == sol.select_G(N, m, A, B, Q)
            recs.append(_record(same, f"{d}: m0/k0 table equals f-window selection", m))
    for m in range(-2 * N - m_span, -2 * N):
        try:
            windows = sol.prop4_windows(N, m, Q)
            recs.append(_record(sol.windows_tile(w[0] for w in windows), f"{d}: h windows tile", m))
        except UdPainleveError as exc:
            recs.append(_record(False, f"{d}: h chain: {exc}", m))
        if m <= -2 * N - 2:
            gz = sol.g_to_z(
                sol.select_G(N, m, A, B, Q),
                sol.select_G(N, m + 1, A, B, Q),
                sol.select_G(N + 1, m, A, B, Q),
                sol.select_G(N + 1, m + 1, A, B, Q),
                N,
                Q,
            )
            recs.append(_record(gz == sol.prop4_zZ(N, m, A, B, Q), f"{d}: case table equals g->z transform", m))
    s4 = sol.theorem4_solution(N, A, B, Q)
    for m, v, _ in s4.rows():
        recs.append(_record(v == sol.prop4_zZ(N, m, A, B, Q), f"{d}: theorem-4 table equals h-window table", m))
    k0 = s4.params["k0"]
    if k0 == 0 and D > (m0 * m0 - N * (N + 1)) * Q:
        C = D - (m0 * m0 + m0) * Q
        same = sol.theorem1_solution(N, m0, C, Q).entries == sol.theorem5_solution(N, A, B, Q).entries
        recs.append(_record(same, f"{d}: theorem-1 profile equals theorem-5 profile"))
    return recs


def _brute_leading(N, m, A, B, Q) -> UdValue:
    """Largest G_k, ties to the larger k."""
    if N == 0:
        return UdValue(1, Fraction(0))
    best = max(range(N + 1), key=lambda k: (sol.G_amp(N, k, m, A, B, Q), k))
    return sol.gamma_G(N, best, m, A, B, Q)


def _suite_structural(rng, draws):
    out = ResidualReport("structural identities")
    for _ in range(draws):
        out.records.extend(structural_checks(draw_theorem4(rng), m_span=8))
    return out


def _suite_prop4_gtoz(rng, draws):
    out = ResidualReport("case table vs g->z transform")
    for _ in range(draws):
        d = draw_theorem4(rng)
        m0 = sol.m0_of(d.A, d.B, d.Q)
        for m in range(m0 - 2 * d.N - 3, -2 * d.N - 1):
            gz = sol.g_to_z(
                *(sol.select_G(n, k, d.A, d.B, d.Q) for n, k in ((d.N, m), (d.N, m + 1), (d.N + 1, m), (d.N + 1, m + 1))),
                d.N,
                d.Q,
            )
            out.records.append(_record(gz == sol.prop4_zZ(d.N, m, d.A, d.B, d.Q), str(d), m))
    return out


def _suite_dominance(rng, draws):
    out = ResidualReport("dominance of the a..ab..b pattern")
    for N in range(0, 5):
        for k in range(0, N + 1):
            for m in (-2 * N + 1, -2 * N - 3, -2 * N - 7):
                rep = dominance_oracle(N, k, m)
                out.records.append(
                    CheckRecord(m=m, passed=rep.holds, residual=None, note=f"N={N} k={k} gap={rep.gap:.3f}")
                )
    return out


def desk_params(rng: Optional[random.Random] = None, N: int = 0) -> List[QPIIParams]:
    """q = e^-2 seeds (several c1, c2) plus the Figure-1 parameters."""
    base = [QPIIParams(Q=-2, eps=1, N=N, A=3, B=1), QPIIParams(Q=-2, eps=1, N=N, A=0, B=0, beta=-1)]
    if rng is not None:
        for _ in range(2):
            base.append(
                QPIIParams(
                    Q=-2,
                    eps=1,
                    N=N,
                    A=_rational(rng, -5, 5, 2),
                    B=_rational(rng, -5, 5, 2),
                    alpha=rng.choice((1, -1)),
                    beta=rng.choice((1, -1)),
                )
            )
    return base + [FIGURE1_PARAMS.replace(N=N)]


def _suite_qairy(rng, draws):
    out = ResidualReport("q-Airy recurrence", threshold=QAIRY_TOL)
    for p in desk_params(rng):
        for seed in ("a", "b", "w"):
            for m in range(-20, 11):
                r = qairy_residual(m, p, seed=seed)
                out.records.append(CheckRecord(m=m, passed=r <= QAIRY_TOL, residual=r, note=f"{seed}: {p}"))
    return out


def _suite_bilinear(rng, draws):
    out = ResidualReport("bilinear", threshold=BILINEAR_TOL)
    for N in range(0, 4):
        for p in desk_params(rng, N):
            for m in range(-15, 11):
                r = max(bilinear_residual(N, m, p))
                out.records.append(CheckRecord(m=m, passed=r <= BILINEAR_TOL, residual=r, note=f"N={N}: {p}"))
    return out


def _suite_qpii(rng, draws):
    out = ResidualReport("q-PII", threshold=QPII_TOL)
    for N in range(0, 4):
        for p in desk_params(rng, N):
            for m in range(-25, 11):
                try:
                    r = qpii_residual(N, m, p)
                except SingularPointError as exc:
                    out.records.append(CheckRecord(m=m, passed=True, note=f"N={N}: {p}; skipped: {exc}"))
                    continue
                out.records.append(CheckRecord(m=m, passed=r <= QPII_TOL, residual=r, note=f"N={N}: {p}"))
    return out


def prop3_check(N: int, m: int, A, B, Q, eps=PROP3_EPS) -> CheckRecord:
    """Numeric leading term of g^(N)(m) against the exact selection."""
    params = QPIIParams(Q=Q, eps=eps, N=N, A=A, B=B)
    g = casorati_g(N, m, params)
    target = sol.select_G(N, m, A, B, Q)
    err = abs(float(params.eps) * g.logmag - float(target.amp))
    tol = float(params.eps) * N * math.log(2) + 1e-6
    ok = g.sign == target.parity and err <= tol and not g.cancel_flag
    return CheckRecord(m=m, passed=ok, residual=err, note=f"N={N} A={A} B={B} Q={Q} tol={tol:.3g}")


def _suite_prop3(rng, draws):
    out = ResidualReport("numeric leading term of g")
    for _ in range(draws):
        out.records.append(prop3_check(*draw_prop3(rng)))
    return out


def _suite_figure1(rng, draws):
    out = ResidualReport("figure-1 comparison")
    for row in run_figure1():
        out.records.append(CheckRecord(m=row.m, passed=row.passed, residual=row.abs_err, note=row.region))
    return out


SUITES: Dict[str, Callable] = {
    "udp2-thm5": _suite_udp2_thm5,
    "udp2-thm4": _suite_udp2_thm4,
    "udp2-thm1": _suite_udp2_thm1,
    "udp2-ai": _suite_udp2_ai,
    "udp2-bi": _suite_udp2_bi,
    "udairy": _suite_udairy,
    "structural": _suite_structural,
    "prop4-gtoz": _suite_prop4_gtoz,
    "dominance": _suite_dominance,
    "qairy-recurrence": _suite_qairy,
    "bilinear": _suite_bilinear,
    "qpii": _suite_qpii,
    "prop3-numeric": _suite_prop3,
    "figure1": _suite_figure1,
}

DEFAULT_DRAWS = {"structural": 40, "prop4-gtoz": 300, "prop3-numeric": 50}


def run_sweep(suite: str, seed: int = 0, draws: Optional[int] = None) -> ResidualReport:
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if draws is None:
        draws = DEFAULT_DRAWS.get(suite, 500)
    if draws < 0:
        raise DomainError("draw count must be >= 0")
    return SUITES[suite](random.Random(seed), draws)


# command line ----------------------------------------------------------------------------


def _emit(rows: List[dict], fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2, default=str) + "\n"
    else:
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        text = buf.getvalue()
    _write(text, out)


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _params(args, N: Optional[int] = None) -> QPIIParams:
    return QPIIParams(
        Q=args.Q,
        eps=args.epsilon,
        N=args.N if N is None else N,
        A=args.A,
        B=args.B,
        alpha=args.alpha,
        beta=args.beta,
    )


def _sl_cols(prefix: str, x: SignedLog) -> dict:
    return {f"{prefix}_sign": x.sign, f"{prefix}_logmag": _fmt(x.logmag if x.sign else None)}


def _cmd_qairy(args) -> int:
    p = _params(args)
    ev = evaluator(p)
    m_from, m_to = _range(args, -20, 10)
    rows, failed = [], False
    for m in range(m_from, m_to + 1):
        row = {"m": m}
        for kind in ("a", "b", "w"):
            row.update(_sl_cols(kind, ev.seed(kind, m)))
        res = qairy_residual(m, p)
        failed |= res > QAIRY_TOL
        row["residual"] = _fmt(res)
        if p.B - p.A < p.Q and p.alpha and p.beta:
            ud = ud_airy_closed_form(m, p.A, p.B, p.Q, p.alpha, p.beta)
            row.update({"omega": ud.parity, "W": str(ud.amp)})
        rows.append(row)
    _emit(rows, args.format, args.out)
    return 1 if failed else 0


def _cmd_qp2(args) -> int:
    p = _params(args)
    m_from, m_to = _range(args, -25, 10)
    rows, failed = [], False
    for m in range(m_from, m_to + 1):
        row = dict.fromkeys(("z_sign", "z_logmag", "eps_log_abs_z", "qpii_residual", "bilinear1", "bilinear2"), "")
        row = {"m": m, **row, "note": ""}
        try:
            z = z_of_g(p.N, m, p)
            r = qpii_residual(p.N, m, p)
        except SingularPointError as exc:
            row["note"] = str(exc)
            rows.append(row)
            continue
        b1, b2 = bilinear_residual(p.N, m, p)
        failed |= r > QPII_TOL or max(b1, b2) > BILINEAR_TOL
        row.update(
            z_sign=z.sign,
            z_logmag=_fmt(z.logmag),
            eps_log_abs_z=_fmt(float(p.eps) * z.logmag),
            qpii_residual=_fmt(r),
            bilinear1=_fmt(b1),
            bilinear2=_fmt(b2),
        )
        rows.append(row)
    _emit(rows, args.format, args.out)
    return 1 if failed else 0


def _range(args, lo: int, hi: int) -> tuple:
    m_from = lo if args.m_from is None else args.m_from
    m_to = hi if args.m_to is None else args.m_to
    if m_from > m_to:
        raise DomainError(f"--m-from {m_from} exceeds --m-to {m_to}")
    return m_from, m_to


def _solution(args) -> sol.PiecewiseSolution:
    Q = as_fraction(args.Q)
    kind = args.kind
    if kind == "thm1":
        if args.m0 is None or args.C is None:
            raise DomainError("--kind thm1 needs --m0 and --C")
        return sol.theorem1_solution(args.N, args.m0, as_fraction(args.C), Q, args.m_from, args.m_to)
    if kind in ("ai", "bi"):
        make = sol.ai_type if kind == "ai" else sol.bi_type
        m_from, m_to = _range(args, -20, 10)
        return make(args.N, Q, m_from, m_to)
    make = sol.theorem5_solution if kind == "thm5" else sol.theorem4_solution
    return make(args.N, as_fraction(args.A), as_fraction(args.B), Q, args.m_from, args.m_to)


def _cmd_solve(args) -> int:
    s = _solution(args)
    _write(s.to_json() + "\n" if args.format == "json" else s.to_csv(), args.out)
    return 0


def _cmd_ud_check(args) -> int:
    if args.solution:
        with open(args.solution, encoding="utf-8") as fh:
            text = fh.read()
        s = sol.PiecewiseSolution.from_json(text) if text.lstrip().startswith("{") else sol.PiecewiseSolution.from_csv(text)
    else:
        s = _solution(args)
    rep = udp2_satisfied(s)
    rows = [
        {"m": r.m, "lhs": str(r.lhs), "rhs": str(r.rhs), "pass": r.passed, "provenance": s.provenance.get(r.m, "")}
        for r in rep.records
    ]
    _emit(rows, args.format, args.out)
    print(rep.summary(), file=sys.stderr)
    return 0 if rep.passed else 1


def _cmd_compare(args) -> int:
    p = _params(args)
    m_from, m_to = _range(args, -25, 10)
    rows = run_figure1(p, m_from, m_to)
    out = [
        {
            "m": r.m,
            "zt_plus": _fmt(r.zt_plus),
            "zt_minus": _fmt(r.zt_minus),
            "Z_closed": str(r.Z_closed),
            "zeta_closed": r.zeta_closed,
            "abs_err": _fmt(r.abs_err),
            "region": r.region,
        }
        for r in rows
    ]
    _emit(out, args.format, args.out)
    return 0 if all(r.passed for r in rows) else 1


def _cmd_selftest(args) -> int:
    lines, ok = [], True
    for name in SUITES:
        draws = args.draws if args.draws is not None else None
        rep = run_sweep(name, seed=args.seed, draws=draws)
        ok &= rep.passed
        lines.append(f"{'PASS' if rep.passed else 'FAIL'} {name}: {rep.summary()}")
        for r in rep.failures()[:5]:
            lines.append(f"    m={r.m} {r.note}")
    _write("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fig = FIGURE1_PARAMS
    common.add_argument("--Q", default=str(fig.Q), help="log q scale (negative rational)")
    common.add_argument("--epsilon", default=str(fig.eps), help="eps in q = exp(Q/eps)")
    common.add_argument("--N", type=int, default=fig.N)
    common.add_argument("--A", default=str(fig.A))
    common.add_argument("--B", default=str(fig.B))
    common.add_argument("--alpha", type=int, choices=(-1, 0, 1), default=1)
    common.add_argument("--beta", type=int, choices=(-1, 0, 1), default=1)
    common.add_argument("--m-from", dest="m_from", type=int)
    common.add_argument("--m-to", dest="m_to", type=int)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--draws", type=int)

    parser = argparse.ArgumentParser(prog="udpainleve", description="q-PII / ultradiscrete PII checks")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("qairy", parents=[common], help="q-Airy seeds and recurrence residuals")
    sub.add_parser("qp2", parents=[common], help="determinant solution z^(N)(m) and q-PII residuals")
    for name, helptext in (("solve", "closed-form ultradiscrete table"), ("ud-check", "check a table against udP2")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--kind", choices=("thm5", "thm4", "thm1", "ai", "bi"), default="thm5")
        p.add_argument("--m0", type=int)
        p.add_argument("--C")
        if name == "ud-check":
            p.add_argument("--solution", metavar="PATH", help="CSV or JSON table written by solve")
    sub.add_parser("compare", parents=[common], help="numeric vs closed form (Figure-1 defaults)")
    sub.add_parser("selftest", parents=[common], help="run every sweep")
    return parser


COMMANDS = {
    "qairy": _cmd_qairy,
    "qp2": _cmd_qp2,
    "solve": _cmd_solve,
    "ud-check": _cmd_ud_check,
    "compare": _cmd_compare,
    "selftest": _cmd_selftest,
}


def cli(argv: Optional[List[str]] = None) -> int:
    """Run the command line; returns 0 (all pass), 1 (check failed) or 2 (usage/domain error)."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli())
