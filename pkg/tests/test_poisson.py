import math

import pytest

from quadtwist.arith import kronecker
from quadtwist.poisson import poisson_check, poisson_lhs
from quadtwist.windows import SmoothWindow


def test_lhs_by_hand():
    F = SmoothWindow()
    X = 25.0
    total = math.fsum(kronecker(d, 3) * float(F(d / X)) for d in range(1, 26, 2))
    assert poisson_lhs(F, 3, X)[0] == pytest.approx(total, rel=1e-15)


@pytest.mark.parametrize("n", [1, 3, 15, 105])
def test_identity_at_x100(n, small_tables):
    chk = poisson_check(SmoothWindow(), n, 100.0, small_tables)
    assert chk.relative_residual <= 1e-6
    assert chk.tail_estimate <= 1e-8 * chk.lhs_abs


def test_identity_other_window(small_tables):
    chk = poisson_check(SmoothWindow(1.0, 2.0), 21, 40.0, small_tables)
    assert chk.relative_residual <= 1e-6


def test_even_n_rejected(small_tables):
    with pytest.raises(ValueError):
        poisson_check(SmoothWindow(), 4, 25.0, small_tables)
