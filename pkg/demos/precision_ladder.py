"""Why some determinants need arbitrary precision.

For m <= -2N+1 one permutation term dominates g^(N)(m) and float64 log
arithmetic is plenty.  Closer to m = 0 the leading terms cancel by many
orders of magnitude and the value is only recoverable in mpmath.  The
library measures the loss and climbs a precision ladder automatically.

Run:  python3 demos/precision_ladder.py
"""

import math

from udpainleve import FIGURE1_PARAMS
from udpainleve.qairy import FLOAT_LOSS_BUDGET, PREC_LADDER, evaluator
from udpainleve.qpii import CasoratiSpec, _leibniz

params = FIGURE1_PARAMS
print(f"float budget {FLOAT_LOSS_BUDGET:.2f} nats; ladder {PREC_LADDER}")
print(f"{'m':>4} {'loss (digits)':>14} {'bits used':>10}")
for m in range(-14, 9, 2):
    for prec in PREC_LADDER:
        ev = evaluator(params, prec=prec)
        _, loss = _leibniz(ev, ("w",) * params.N, m)
        budget = FLOAT_LOSS_BUDGET if prec is None else (prec - 64) * math.log(2)
        if loss <= budget:
            break
    print(f"{m:>4} {loss / math.log(10):>14.1f} {prec or 53:>10}")
