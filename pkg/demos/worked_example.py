"""Build the N=3 ultradiscrete profile for A=450, B=25, Q=-3 and check it.

Run:  python3 demos/worked_example.py
"""

from udpainleve import k0_of, m0_of, theorem5_solution, udp2_satisfied

N, A, B, Q = 3, 450, 25, -3

# Where B - A sits on the quadratic ladder fixes m0; the P ladder then fixes k0.
m0 = m0_of(A, B, Q)
k0 = k0_of(A, B, Q, N)
print(f"B - A = {B - A}: m0 = {m0}, k0 = {k0}")

s = theorem5_solution(N, A, B, Q, m_from=-22, m_to=4)
print(f"{'m':>4} {'zeta':>5} {'Z':>6}  origin")
for m, v, origin in s.rows():
    print(f"{m:>4} {v.parity:>5} {str(v.amp):>6}  {origin}")

# Every interior m must satisfy the max-plus equation exactly.
report = udp2_satisfied(s)
print(report.summary())
