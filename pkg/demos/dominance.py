"""Which row pattern of a's and b's dominates a Casorati determinant?

With N-k rows taken from q-Ai and k from q-Bi there are C(N, k) ways to
place them.  Putting all a-rows first wins, by a margin that grows as m
decreases.

Run:  python3 demos/dominance.py
"""

from udpainleve.qpii import dominance_oracle

for N in range(1, 5):
    for k in range(N + 1):
        for m in (-2 * N + 1, -2 * N - 7):
            rep = dominance_oracle(N, k, m)
            runner = rep.ranking[1][0] if len(rep.ranking) > 1 else "-"
            gap = f"{rep.gap:.1f}" if len(rep.ranking) > 1 else "inf"
            print(f"N={N} k={k} m={m:>3}: winner {rep.ranking[0][0]:<4} runner-up {runner:<4} log-gap {gap:>7} ok={rep.holds}")
