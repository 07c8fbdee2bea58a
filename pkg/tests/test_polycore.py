"""Exact polynomial layer: arithmetic laws, single-divisor division, quadratic
forms, and the fraction-free linear algebra underneath.

Expansion results are cross-checked against the plain-dict oracle from
conftest, ranks against numpy on random integer matrices."""

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import as_dict, dict_add, dict_inner, dict_mul
from rounding_forge import _linalg
from rounding_forge.polycore import (
    MAX_DEGREE,
    Poly,
    PolyMap,
    QuadForm,
    as_rational,
    divide_exact,
    form_signature,
    inner_poly,
    poly_divmod,
    rank_linear,
)

F = Fraction


# ---------------------------------------------------------------------------
# scalars and construction


def test_as_rational_accepts_exact_inputs():
    assert as_rational(3) == F(3)
    assert as_rational("3/4") == F(3, 4)
    assert as_rational(F(-2, 6)) == F(-1, 3)


def test_as_rational_rejects_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_zero_terms_are_pruned():
    p = Poly(2, {(1, 0): 1, (0, 1): 0})
    assert p == Poly.variable(2, 0)
    assert (p - p).is_zero()
    assert Poly.zero(3).degree() == -1


def test_degree_cap_enforced():
    with pytest.raises(ValueError):
        Poly(1, {(MAX_DEGREE + 1,): 1})
    p = Poly(1, {(3,): 1})
    with pytest.raises(ValueError):
        p ** 3


def test_linear_and_variable_constructors():
    assert Poly.linear([2, 0, -1]) == 2 * Poly.variable(3, 0) - Poly.variable(3, 2)
    assert Poly.linear([0, 0]).is_zero()


# ---------------------------------------------------------------------------
# arithmetic laws, via hypothesis on small polynomials

coeffs = st.fractions(min_value=-4, max_value=4, max_denominator=6)


def polys(num_vars: int, max_deg: int):
    exps = st.tuples(*(st.integers(0, max_deg) for _ in range(num_vars))).filter(
        lambda e: sum(e) <= max_deg
    )
    return st.dictionaries(exps, coeffs, max_size=4).map(lambda d: Poly(num_vars, d))


@settings(max_examples=60, derandomize=True)
@given(polys(2, 2), polys(2, 2), polys(2, 2))
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@settings(max_examples=60, derandomize=True)
@given(polys(3, 1), polys(3, 1), polys(3, 1))
def test_multiplication_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, derandomize=True)
@given(polys(2, 2), polys(2, 2))
def test_product_matches_dict_oracle(a, b):
    assert as_dict(a * b) == dict_mul(as_dict(a), as_dict(b))
    assert as_dict(a + b) == dict_add(as_dict(a), as_dict(b))


@settings(max_examples=60, derandomize=True)
@given(polys(2, 2), polys(2, 2))
def test_evaluation_is_a_homomorphism(a, b):
    pt = [F(1, 2), F(-3)]
    assert (a * b)(pt) == a(pt) * b(pt)
    assert (a - b)(pt) == a(pt) - b(pt)


def test_eval_float_tracks_exact_eval():
    p = Poly(2, {(2, 0): F(1, 3), (1, 1): -2, (0, 0): F(7, 5)})
    pt = [F(3, 7), F(-2, 9)]
    exact = p(pt)
    approx = p.eval_float([float(x) for x in pt])
    assert abs(approx - float(exact)) < 1e-14


def test_grlex_leading_term():
    # total degree first, then later variables dominate
    p = Poly(2, {(1, 1): 5, (2, 0): 1, (0, 2): 7})
    assert p.leading() == ((0, 2), F(7))
    with pytest.raises(ValueError):
        Poly.zero(2).leading()


def test_homogeneous_parts_partition():
    p = Poly(2, {(0, 0): 1, (1, 0): 2, (1, 1): 3, (0, 2): -1})
    parts = [p.homogeneous_part(d) for d in range(p.degree() + 1)]
    total = Poly.zero(2)
    for part in parts:
        total = total + part
    assert total == p
    assert p.homogeneous_part(2) == Poly(2, {(1, 1): 3, (0, 2): -1})


def test_substitute_and_compose_linear_agree():
    p = Poly(2, {(2, 0): 1, (1, 1): -3, (0, 1): 2})
    rows = [[F(1), F(2), F(0)], [F(0), F(-1), F(1, 2)]]
    args = [Poly.linear(r) for r in rows]
    assert p.compose_linear(rows) == p.substitute(args)
    pt = [F(1), F(-2), F(4)]
    assert p.compose_linear(rows)(pt) == p([args[0](pt), args[1](pt)])


def test_homogenize_appends_trailing_variable():
    p = Poly(2, {(0, 0): 1, (1, 0): -2, (0, 2): 3})
    h = p.homogenize(2)
    assert h.num_vars == 3
    assert h.is_homogeneous(2)
    pt = [F(5, 3), F(-1, 2)]
    assert h(list(pt) + [F(1)]) == p(pt)


# ---------------------------------------------------------------------------
# division


def test_divide_exact_multiply_back():
    rng = random.Random(11)
    for _ in range(50):
        g = Poly(2, {(rng.randint(0, 1), rng.randint(0, 1)): F(rng.randint(1, 4))
                     for _ in range(3)})
        h = Poly(2, {(rng.randint(0, 1), rng.randint(0, 1)): F(rng.randint(-3, 3))
                     for _ in range(3)})
        if g.is_zero():
            continue
        f = g * h
        got = divide_exact(f, g)
        assert got == h
        assert as_dict(f) == dict_mul(as_dict(g), as_dict(got))


def test_divide_exact_detects_nondivisible():
    g = Poly(2, {(2, 0): 1, (0, 2): 1})  # x1^2 + x2^2
    f = Poly(2, {(3, 0): 1})             # x1^3
    assert divide_exact(f, g) is None
    q, r = poly_divmod(f, g)
    assert f == q * g + r
    assert not r.is_zero()


def test_poly_divmod_invariant_randomized():
    rng = random.Random(23)
    for _ in range(60):
        f = Poly(3, {tuple(rng.randint(0, 1) for _ in range(3)): F(rng.randint(-4, 4), rng.randint(1, 3))
                     for _ in range(4)})
        g = Poly(3, {tuple(rng.randint(0, 1) for _ in range(3)): F(rng.randint(-3, 3))
                     for _ in range(2)})
        if g.is_zero():
            continue
        q, r = poly_divmod(f, g)
        assert f == q * g + r
        # no term of the remainder is reducible by the leading term of g
        ge, _ = g.leading()
        for e in r.terms:
            assert not all(a >= b for a, b in zip(e, ge))


def test_divide_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        poly_divmod(Poly.variable(1, 0), Poly.zero(1))


# ---------------------------------------------------------------------------
# quadratic forms


def test_quadform_roundtrip_and_call():
    p = Poly(3, {(2, 0, 0): 2, (1, 1, 0): -3, (0, 0, 2): F(1, 2)})
    q = QuadForm.from_poly(p)
    assert q.to_poly() == p
    pt = [F(1), F(-2), F(3)]
    assert q(pt) == p(pt)


def test_quadform_rejects_non_quadratic():
    with pytest.raises(ValueError):
        QuadForm.from_poly(Poly.variable(2, 0))


def test_quadform_restricted_matches_substitution():
    q = QuadForm.from_poly(Poly(3, {(2, 0, 0): 1, (1, 0, 1): 4, (0, 2, 0): -2}))
    basis = [[F(1), F(0), F(2)], [F(0), F(1), F(-1)]]
    r = q.restricted(basis)
    for s, t in [(F(1), F(0)), (F(2), F(-3)), (F(1, 2), F(5))]:
        point = [s * basis[0][i] + t * basis[1][i] for i in range(3)]
        assert r([s, t]) == q(point)


def test_inner_poly_frozen_example_and_bilinearity():
    u = PolyMap.identity(2)
    v = PolyMap(2, [Poly(2, {(2, 0): 1, (0, 2): -1}), Poly(2, {(1, 1): 2})])
    # oracle expansion: x1(x1^2 - x2^2) + x2(2 x1 x2) = x1^3 + x1 x2^2
    got = inner_poly(u, v)
    assert as_dict(got) == dict_inner([as_dict(c) for c in u.coords],
                                      [as_dict(c) for c in v.coords])
    assert got == Poly(2, {(3, 0): 1, (1, 2): 1})
    w = PolyMap(2, [Poly.variable(2, 1), Poly.variable(2, 0)])
    assert inner_poly(u + w, v) == inner_poly(u, v) + inner_poly(w, v)


def test_polymap_degree_cap_and_linear_matrix():
    with pytest.raises(ValueError):
        PolyMap(1, [Poly(1, {(3,): 1})])
    a = PolyMap.from_linear_matrix([[1, 2], [3, 4], [0, 0]])
    assert a.is_linear()
    assert a.linear_matrix() == [[1, 2], [3, 4], [0, 0]]
    assert rank_linear(a) == 2


# ---------------------------------------------------------------------------
# fraction-free linear algebra


def test_exact_rank_against_numpy():
    rng = random.Random(5)
    for _ in range(60):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = [[F(rng.randint(-3, 3), rng.choice([1, 2, 3])) for _ in range(cols)]
             for _ in range(rows)]
        expected = np.linalg.matrix_rank(np.array([[float(x) for x in r] for r in m]))
        assert _linalg.exact_rank(m) == expected


def test_exact_rank_known_cases():
    assert _linalg.exact_rank([[1, 2], [2, 4]]) == 1
    assert _linalg.exact_rank([[0, 0], [0, 0]]) == 0
    assert _linalg.exact_rank(_linalg.identity(4)) == 4


def test_nullspace_annihilates_and_rank_nullity():
    rng = random.Random(9)
    for _ in range(40):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 5)
        m = [[F(rng.randint(-2, 2)) for _ in range(cols)] for _ in range(rows)]
        basis = _linalg.nullspace(m, cols)
        assert len(basis) == cols - _linalg.exact_rank(m)
        for v in basis:
            assert all(x == 0 for x in _linalg.matvec(m, list(v)))


def test_solve_consistent_and_inconsistent():
    a = [[F(1), F(2)], [F(3), F(4)]]
    x = _linalg.solve(a, [F(5), F(6)])
    assert _linalg.matvec(a, x) == [F(5), F(6)]
    singular = [[F(1), F(2)], [F(2), F(4)]]
    assert _linalg.solve(singular, [F(1), F(0)]) is None


def test_congruent_diagonalize_identity():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randint(1, 5)
        m = [[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        s = [[m[i][j] + m[j][i] for j in range(n)] for i in range(n)]
        p, diag = _linalg.congruent_diagonalize(s)
        pt_s_p = _linalg.matmul(_linalg.matmul(_linalg.transpose(p), s), p)
        for i in range(n):
            for j in range(n):
                assert pt_s_p[i][j] == (diag[i] if i == j else 0)


def test_signature_hyperbolic_plane():
    # off-diagonal form needs the hyperbolic fallback step
    assert _linalg.signature_of([[F(0), F(1)], [F(1), F(0)]]) == (1, 1, 0)
    assert _linalg.signature_of([[F(2)]]) == (1, 0, 0)
    assert _linalg.signature_of([[F(0)]]) == (0, 0, 1)


def test_signature_invariant_under_congruence():
    rng = random.Random(29)
    for _ in range(30):
        n = rng.randint(1, 4)
        m = [[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        s = [[m[i][j] + m[j][i] for j in range(n)] for i in range(n)]
        # random unimodular change of basis from elementary operations
        p = _linalg.identity(n)
        for _ in range(6):
            i, j = rng.randrange(n), rng.randrange(n)
            if i != j:
                c = F(rng.randint(-2, 2))
                for k in range(n):
                    p[k][j] += c * p[k][i]
        s2 = _linalg.matmul(_linalg.matmul(_linalg.transpose(p), s), p)
        assert _linalg.signature_of(s2) == _linalg.signature_of(s)


def test_form_signature_wrapper():
    q = QuadForm.from_poly(Poly(3, {(2, 0, 0): 1, (0, 2, 0): -1}))
    assert form_signature(q) == (1, 1, 1)


def test_ldl_reconstructs_positive_definite():
    s = [[F(4), F(2), F(0)], [F(2), F(3), F(1)], [F(0), F(1), F(5)]]
    lower, diag = _linalg.ldl(s)
    n = 3
    d = [[diag[i] if i == j else F(0) for j in range(n)] for i in range(n)]
    back = _linalg.matmul(_linalg.matmul(lower, d), _linalg.transpose(lower))
    assert back == [[F(x) for x in row] for row in s]
    assert all(v > 0 for v in diag)


def test_ldl_rejects_indefinite():
    with pytest.raises(ValueError):
        _linalg.ldl([[F(1), F(2)], [F(2), F(1)]])
