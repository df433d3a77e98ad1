"""Compute the leading constant C0 from square-product pairs and from the contour.

The diagonal value C0_diag(Y) oscillates around the limit with relative size
about Y^(-1/2); the contour integral of symmetric-square L-values gives the
limit directly. Expect roughly a minute for the contour.

Run:  python demos/02_constant_two_ways.py
"""

import time

from quadtwist.mainterm import diagonal_scan
from quadtwist.pipeline import Workspace

ws = Workspace()
Ys = [2.0**e for e in range(10, 17)]

diag = diagonal_scan(Ys, ws.Phi, ws.Psi, ws.coeffs, ws.tables)
print("C0_diag(Y):")
for Y, v in zip(diag.Ys, diag.values):
    print(f"  Y = 2^{int(Y).bit_length() - 1:<2}  {v:.6e}")
print(f"weighted mean {diag.weighted:.6e}, C + c/sqrt(Y) fit {diag.fit:.6e}")

t0 = time.perf_counter()
res = ws.contour(0.08)
print(f"\ncontour (Re u = 0.58, |Im u| <= {res.T:.0f}, {res.nodes} nodes, {time.perf_counter() - t0:.0f} s)")
print(f"  C0 = {res.value:.12e}  (imaginary part {res.imag:.1e}, error estimate {res.error_estimate:.1e})")
print(f"  L(1, sym^2 Delta) = {res.details['L1']:.12f}")
for Y, v in zip(diag.Ys, diag.values):
    print(f"  Y = 2^{int(Y).bit_length() - 1:<2}  (C0_diag - C0)/C0 * sqrt(Y) = {(v / res.value - 1) * Y**0.5:+.3f}")
