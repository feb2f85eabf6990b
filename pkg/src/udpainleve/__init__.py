"""Numeric and exact verification of q-PII determinant solutions and their
parity-variable ultradiscrete limits."""

from .errors import (
    ConsistencyError,
    DomainError,
    InvalidInputError,
    SingularPointError,
    TruncationError,
    UdPainleveError,
    UnsupportedSizeError,
)
from .logsign import SignedLog, relative_residual, sl_sum, sl_ud_extract
from .qairy import FIGURE1_PARAMS, QPIIParams, SeriesControl, q_ai, q_bi, qairy_residual, seed_w
from .qpii import (
    CasoratiSpec,
    bilinear_residual,
    casorati_g,
    casorati_g_pattern,
    dominance_oracle,
    qpii_residual,
    z_of_g,
)
from .reports import CheckRecord, ResidualReport
from .solutions import (
    PiecewiseSolution,
    ai_type,
    bi_type,
    f_threshold,
    g_to_z,
    gamma_G,
    h_thresholds,
    k0_of,
    m0_of,
    prop4_zZ,
    select_G,
    theorem1_solution,
    theorem2_G,
    theorem4_solution,
    theorem5_solution,
)
from .tropical import NEG_INF, UdValue, S_gate, s_gate, ud_airy_satisfied, udp2_satisfied
from .harness import CompareRow, cli, run_figure1, run_sweep

__version__ = "0.1.0"
