"""Walk through the arithmetic inputs: tau(n), twisted characters, Gauss sums.

Run:  python demos/01_arithmetic_inputs.py
"""

from quadtwist import (
    build_factor_tables,
    gauss_closed,
    gauss_direct,
    kronecker,
    lambda_table,
    poisson_check,
)
from quadtwist.modform import hecke_check
from quadtwist.windows import SmoothWindow

coeffs = lambda_table(10_000)
tables = build_factor_tables(10_000)

print("Ramanujan tau, n = 1..8:", coeffs.tau[1:9])
print("normalized lambda(2) =", coeffs.lam[2], " (|lambda(p)| <= 2 by Deligne)")
rep = hecke_check(coeffs, tables)
print(f"Hecke relations and Deligne bound up to {rep.limit}: {'hold' if rep.passed else 'FAIL'}")

d = 15
print(f"\nchi_8d(n) for d={d}, n=1..20:", [kronecker(8 * d, n) for n in range(1, 21)])

print("\nGauss sums G_k(m): closed form vs direct sum")
for k, m in [(0, 9), (3, 9), (1, 25), (2, 3), (5, 105)]:
    print(f"  k={k:>2} m={m:>3}  closed {gauss_closed(k, m, tables):+.6f}   direct {gauss_direct(k, m).real:+.6f}")

print("\nPoisson summation twisted by (d/n), window on [1/2, 1]")
for n in (1, 3, 15, 105):
    chk = poisson_check(SmoothWindow(), n, 100.0, tables)
    print(f"  n={n:>3}  d-sum {chk.lhs:+.12e}  k-sum {chk.rhs:+.12e}  (|k| <= {chk.k_max})")
