import math
from fractions import Fraction as F

import pytest

from poswalk import oracle as oc
from poswalk.edgeworth import (ghat, h_even_at_zero, hermite, lclt_coefficients,
                               lclt_evaluate, partitions, q_poly)
from poswalk.laurent import Poly

ROOT2PI = math.sqrt(2 * math.pi)


def test_hermite_low_orders():
    assert hermite(0) == Poly([1])
    assert hermite(1) == Poly([0, 1])
    assert hermite(3) == Poly([0, -3, 0, 1])
    assert hermite(4) == Poly([3, 0, -6, 0, 1])
    assert hermite(6) == Poly([-15, 0, 45, 0, -15, 0, 1])


def test_hermite_parity_and_degree():
    for m in range(10):
        h = hermite(m)
        assert h.degree() == m
        assert h.parity_powers() <= {m % 2}


def test_h_even_at_zero():
    assert h_even_at_zero(0) == 1
    assert h_even_at_zero(1) == -1
    assert h_even_at_zero(2) == 3
    assert h_even_at_zero(3) == -15
    # matches the constant terms of the even Hermite polynomials
    for mu in range(5):
        assert h_even_at_zero(mu) == hermite(2 * mu).coeff(0)


def test_partition_enumeration():
    assert partitions(1) == [(1,)]
    assert sorted(partitions(2)) == [(0, 1), (2, 0)]
    assert len(partitions(3)) == 3
    assert all(sum((m + 1) * k for m, k in enumerate(ks)) == 5 for ks in partitions(5))


def test_ghat1_closed_form():
    lam1 = F(7, 100)
    g = ghat([lam1], 1)
    assert g == Poly([0, -3 * lam1, 0, lam1])


def test_q_poly_first_correction(asym):
    # q_1 = m3 / (6 sqrt(2 pi) sigma^3) * (t^3 - 3 t)
    sigma = asym.sigma()
    m3 = float(asym.raw_moment(3))
    lead = m3 / (6 * ROOT2PI * sigma**3)
    q1 = q_poly(asym, 1)
    assert q1.coeff(3) == pytest.approx(lead)
    assert q1.coeff(1) == pytest.approx(-3 * lead)


def test_q_poly_symmetric_walk_vanishes(tri):
    assert not q_poly(tri, 1)


def test_q_poly_degree_and_parity(asym):
    for nu in range(1, 5):
        q = q_poly(asym, nu)
        assert q.degree() == 3 * nu
        assert q.parity_powers() <= {nu % 2}


def test_lclt_pinned_coefficients(asym):
    # a_{0,0} is the Gaussian weight; the two third-moment entries follow
    # from the free-walk expansion (validated against the oracle below)
    ex = lclt_coefficients(asym, 2)
    sigma = asym.sigma()
    m3 = float(asym.raw_moment(3))
    assert ex.a_coef(0, 0) == pytest.approx(1 / (sigma * ROOT2PI))
    assert ex.a_coef(1, 1) == pytest.approx(-m3 / (2 * ROOT2PI * sigma**4))
    assert ex.a_coef(3, 2) == pytest.approx(m3 / (6 * ROOT2PI * sigma**4))


def test_lclt_degree_bound(asym):
    ex = lclt_coefficients(asym, 2)
    for j, p in enumerate(ex.p0_polys):
        if p:
            assert p.degree() <= (3 * j) // 2
    assert ex.p0_polys[0] == Poly([1.0 / (asym.sigma() * ROOT2PI)])


def test_first_correction_measured_from_oracle(asym):
    # independent check of the n^{-3/2} coefficient polynomial: peel the
    # leading Gaussian term off the exact pmf and extrapolate in n
    ex = lclt_coefficients(asym, 2)
    sigma = asym.sigma()
    p0 = ex.p0_polys[0](0.0)

    def peeled(n, x):
        z = x / sigma
        val = oc.free_pmf(asym, n)[x]
        return (val * math.exp(z * z / (2 * n)) - p0 / math.sqrt(n)) * n**1.5

    for x in (0, 3, 6):
        d1, d2 = peeled(1024, x), peeled(4096, x)
        measured = (4 * d2 - d1) / 3  # eliminate the 1/n correction
        assert measured == pytest.approx(ex.p0_polys[1](x / sigma), abs=2e-4)


def test_symmetric_walk_first_correction_is_even(tri):
    # odd cumulants vanish, so the j = 1 polynomial keeps only its constant
    ex = lclt_coefficients(tri, 2)
    p1 = ex.p0_polys[1]
    assert p1.parity_powers() <= {0}


@pytest.mark.parametrize("dist_name", ["tri", "asym"])
def test_weighted_envelope_does_not_grow(dist_name, request):
    dist = request.getfixturevalue(dist_name)
    ex = lclt_coefficients(dist, 1)

    def envelope(n):
        pmf = oc.free_pmf(dist, n)
        lo, hi = n * dist.min_step, n * dist.max_step
        return max(abs(pmf.get(x, 0.0) - lclt_evaluate(ex, n, x)) * (1 + abs(x)) ** 3
                   for x in range(lo, hi + 1))

    assert envelope(400) <= 2.0 * envelope(100)


def test_evaluate_far_outside_support(tri):
    ex = lclt_coefficients(tri, 1)
    val = lclt_evaluate(ex, 50, 2000)
    assert math.isfinite(val)
    assert abs(val) < 1e-30
