import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjbsos.poly import (
    CHEBYSHEV_MAX_DEGREE,
    Box,
    Polynomial,
    c1_norm_grid,
    chebyshev_table,
    integrate_uniform,
    monomials,
    moments_uniform_box,
    multinomial,
    sup_norm_grid,
)

X1, X2 = Polynomial.variable(0, 2), Polynomial.variable(1, 2)


def random_poly(rng, n, d):
    basis = monomials(n, d)
    return Polynomial(n, dict(zip(basis, rng.uniform(-1, 1, len(basis)))))


def naive_eval(p, point):
    total = 0.0
    for alpha, c in p.items():
        term = c
        for xi, k in zip(point, alpha):
            term *= xi**k
        total += term
    return total


coef = st.floats(-10, 10, allow_nan=False).filter(lambda v: abs(v) > 1e-6)


@st.composite
def polys(draw, n=2, max_deg=4):
    basis = monomials(n, max_deg)
    picks = draw(st.lists(st.sampled_from(basis), max_size=6, unique=True))
    return Polynomial(n, {a: draw(coef) for a in picks})


def test_monomials_grlex_and_count():
    basis = monomials(2, 2)
    assert basis == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    for n in range(1, 4):
        for d in range(6):
            assert len(monomials(n, d)) == math.comb(n + d, d)


def test_multinomial_exact():
    assert multinomial((1, 1)) == 2
    assert multinomial((2, 1, 1)) == 12
    assert multinomial((30, 30)) == math.comb(60, 30)


def test_canonical_form_drops_zeros():
    p = Polynomial(2, {(1, 0): 0.0, (0, 1): 2.0})
    assert p.terms == {(0, 1): 2.0}
    assert Polynomial.zero(2).degree() == 0
    assert (X1 - X1).is_zero()


def test_eval_examples():
    p = X1 * X1 + 2 * X1 * X2
    assert p.eval([1.0, 1.0]) == pytest.approx(3.0)
    assert Polynomial.zero(3).eval([0.3, -2.0, 5.0]) == 0.0
    with pytest.raises(ValueError):
        p.eval([1.0, 2.0, 3.0])


def test_eval_matches_naive_summation():
    rng = np.random.default_rng(1)
    for _ in range(20):
        p = random_poly(rng, 3, 6)
        z = rng.uniform(-1, 1, 3)
        ref = naive_eval(p, z)
        assert abs(p.eval(z) - ref) <= 1e-12 * max(1.0, sum(abs(c) for c in p.terms.values()))


def test_ring_examples():
    x = Polynomial.variable(0, 1)
    assert (x + 1) * (x - 1) == x * x - 1
    p = X1 * X2 + 3
    assert (p + Polynomial.zero(2)).terms == p.terms
    assert (X1 + X2) ** 2 == X1 * X1 + 2 * X1 * X2 + X2 * X2
    with pytest.raises(ValueError):
        X1 + x


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws(p, q, r):
    z = np.array([0.7, -0.3])
    assert (p + q).allclose(q + p, 1e-12)
    assert (p * q).allclose(q * p, 1e-9)
    lhs, rhs = p * (q + r), p * q + p * r
    assert abs(lhs.eval(z) - rhs.eval(z)) <= 1e-9 * (1 + abs(lhs.eval(z)))
    assert ((p + q) - q).max_coef_diff(p) <= 1e-12 * (1 + max((abs(c) for c in q.terms.values()), default=0))


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_product_degree_adds(p, q):
    if not p.is_zero() and not q.is_zero():
        assert (p * q).degree() == p.degree() + q.degree()


def test_gradient_examples():
    g = (X1 * X1 * X2).gradient()
    assert g[0] == 2 * X1 * X2
    assert g[1] == X1 * X1
    assert all(c.is_zero() for c in Polynomial.constant(4.0, 2).gradient())


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(2)
    h = 1e-6
    for _ in range(10):
        p = random_poly(rng, 3, 5)
        grad = p.gradient()
        for z in rng.uniform(-0.9, 0.9, (20, 3)):
            for i in range(3):
                e = np.zeros(3)
                e[i] = h
                fd = (p.eval(z + e) - p.eval(z - e)) / (2 * h)
                exact = grad[i].eval(z)
                assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


def test_compose_examples():
    x, u = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    V = Polynomial.variable(0, 1) ** 2
    got = V.compose([0.5 * x + 0.25 * u])
    assert got.allclose(0.25 * x * x + 0.25 * x * u + 0.0625 * u * u, 1e-15)
    f1 = x * u + 2
    assert Polynomial.variable(0, 1).compose([f1]) == f1
    with pytest.raises(ValueError):
        V.compose([x, u])


def test_compose_matches_evaluation():
    rng = np.random.default_rng(3)
    for _ in range(10):
        V = random_poly(rng, 2, 3)
        fs = [random_poly(rng, 3, 2) for _ in range(2)]
        comp = V.compose(fs)
        assert comp.degree() <= V.degree() * 2
        for z in rng.uniform(-1, 1, (5, 3)):
            inner = [f.eval(z) for f in fs]
            assert abs(comp.eval(z) - V.eval(inner)) <= 1e-10


def test_coefficient_norm_examples():
    assert (X1 * X2).coefficient_norm() == 0.5
    assert Polynomial.constant(5.0, 2).coefficient_norm() == 5.0
    assert (X1 * X1 + X1 * X2).coefficient_norm() == 1.0


def test_term_list_round_trip():
    p = 1.5 * X1 * X1 - X2 + 0.25
    assert Polynomial.from_terms(p.to_terms(), 2) == p
    with pytest.raises(ValueError):
        Polynomial.from_terms([{"exponents": [1, 0], "coef": 1.0, "x": 1}], 2)


def test_sup_norm_grid_examples():
    x = Polynomial.variable(0, 1)
    box = Box.cube(1)
    assert sup_norm_grid(x, box, 3) == 1.0
    bump = 1 - x * x
    assert sup_norm_grid(bump, box, 4) < 1.0
    assert sup_norm_grid(bump, box, 5) == 1.0
    with pytest.raises(ValueError):
        sup_norm_grid(x, box, 1)


def test_sup_norm_grid_refinement_lower_bound():
    rng = np.random.default_rng(4)
    box = Box.cube(2)
    for _ in range(10):
        p = random_poly(rng, 2, 5)
        # 10x finer grid sharing all nodes
        assert sup_norm_grid(p, box, 11) <= sup_norm_grid(p, box, 101) + 1e-15


def test_c1_norm_grid_examples():
    x = Polynomial.variable(0, 1)
    box = Box.cube(1)
    assert c1_norm_grid(x, box, 11) == pytest.approx(2.0)
    assert c1_norm_grid(Polynomial.constant(-3.0, 1), box, 11) == 3.0
    assert c1_norm_grid(x * x, box, 11) == pytest.approx(3.0)


def test_chebyshev_examples():
    t = chebyshev_table(5)
    assert t.coeffs[0] == (1,)
    assert t.coeffs[2] == (-1, 0, 2)
    assert t.maxabs[5] == 20
    with pytest.raises(OverflowError):
        chebyshev_table(CHEBYSHEV_MAX_DEGREE + 1)


def test_chebyshev_bound_exact_to_60():
    t = chebyshev_table(60)
    for d in range(1, 61):
        assert isinstance(t.maxabs[d], int)
        assert t.maxabs[d] <= 3**d
    for d in range(1, 60):
        prev, cur, nxt = t.coeffs[d - 1], t.coeffs[d], t.coeffs[d + 1]
        for k in range(d + 2):
            shifted = cur[k - 1] if k >= 1 else 0
            older = prev[k] if k < len(prev) else 0
            assert nxt[k] == 2 * shifted - older


def test_chebyshev_matches_cosine():
    t = chebyshev_table(30)
    rng = np.random.default_rng(5)
    for theta in rng.uniform(0, math.pi, 100):
        for d in range(31):
            assert abs(t.evaluate(d, math.cos(theta)) - math.cos(d * theta)) <= 1e-9


def test_moments_examples():
    box = Box.cube(1)
    assert moments_uniform_box(box, (2,)) == pytest.approx(1 / 3)
    assert moments_uniform_box(box, (1,)) == 0.0
    assert moments_uniform_box(box, (0,)) == 1.0
    skew = Box((0.0, -2.0), (3.0, 1.0))
    assert moments_uniform_box(skew, (0, 0)) == 1.0
    assert moments_uniform_box(skew, (1, 2)) == pytest.approx(1.5 * 1.0)


def test_integrate_uniform_matches_quadrature():
    rng = np.random.default_rng(6)
    box = Box((-0.5, 0.0), (1.0, 2.0))
    p = random_poly(rng, 2, 4)
    nodes = box.midpoints(400)
    assert integrate_uniform(p, box) == pytest.approx(float(np.mean(p.eval(nodes))), abs=1e-5)


def test_box_validation_and_membership():
    with pytest.raises(ValueError):
        Box((1.0,), (1.0,))
    box = Box((-1.0, 0.0), (1.0, 2.0))
    assert list(box.contains(np.array([[0.0, 1.0], [0.0, 3.0]]))) == [True, False]
    assert box.grid(3).shape == (9, 2)
