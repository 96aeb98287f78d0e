"""The nonnegativity cone: exact certificates, Gram factorizations, dim+."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lacuna import (
    CoefVector,
    certify_nonneg_exact,
    fejer_vector,
    find_plus_in_slice,
    is_plus,
    min_on_circle,
    plus_dimension,
)
from lacuna.plus_cone import gram_diag_sums, proportional

V1_BASIS = np.array([[0.0, 1.0, 0.0]])
V2_BASIS = np.array(
    [[1.0, 0.0, -1.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0, 0.0]]
)


def _vec(*entries):
    return CoefVector.from_array(np.array(entries, dtype=float))


def _exact_vec(*entries):
    return CoefVector.from_array([Fraction(e) for e in entries])


# -- exact certification ---------------------------------------------------------


@pytest.mark.parametrize(
    "entries,nonneg,touches",
    [
        ((1, -1, 0), True, True),  # 2 - 2cos t
        ((0, 1, 0), False, None),  # 2cos t
        ((1, 0, 0), True, False),  # constant 2
        ((Fraction(5, 8), Fraction(-1, 2), 0), True, False),  # 5/4 - cos t
        ((0, 0, 0), True, True),  # identically zero
        ((1, 0, 0, -1, 0), True, True),  # |z^2-1|^2 = 2 - 2cos 2t
        ((-1, 0, 0), False, None),  # constant -2
        ((1, Fraction(-3, 5), Fraction(-4, 5)), True, True),  # touch off-axis
    ],
)
def test_certify_nonneg_exact_table(entries, nonneg, touches):
    got_nonneg, got_touches = certify_nonneg_exact(_exact_vec(*entries))
    assert got_nonneg is nonneg
    if nonneg:
        assert got_touches is touches


def test_certify_off_axis_touch_location():
    # tau = 2 - sqrt2 cos t + sqrt2 sin t has min 2 - 2 = 0 at t = -pi/4;
    # rational surrogate: 2 - 2cos(t + pi/4) is irrational, so instead use
    # alpha=(1,-1/2), beta=(1/2): tau = 2 - cos t + sin t, min = 2 - sqrt2 > 0
    got_nonneg, got_touches = certify_nonneg_exact(
        _exact_vec(1, Fraction(-1, 2), Fraction(-1, 2))
    )
    assert got_nonneg is True and got_touches is False


@given(
    st.lists(
        st.fractions(min_value=-2, max_value=2, max_denominator=8),
        min_size=3,
        max_size=7,
    ).filter(lambda xs: len(xs) % 2 == 1)
)
def test_certify_agrees_with_grid_minimum(entries):
    v = CoefVector.from_array([Fraction(e) for e in entries])
    nonneg, _ = certify_nonneg_exact(v)
    _, val = min_on_circle(v)
    band = 1e-7 * max(1.0, v.scale())
    if val > band:
        assert nonneg
    elif val < -band:
        assert not nonneg


# -- numeric minimum -------------------------------------------------------------


@pytest.mark.parametrize(
    "entries,want_val",
    [
        ((5 / 8, -1 / 2, 0), 1 / 4),
        ((1, -1, 0), 0.0),
        ((0, 1, 0), -2.0),
        ((1, 1, -1, 0, 0), -2.0),  # v1 + v2 from the reference subspace
    ],
)
def test_min_on_circle_values(entries, want_val):
    _, val = min_on_circle(_vec(*entries))
    assert abs(val - want_val) <= 1e-9


def test_min_on_circle_location():
    t, val = min_on_circle(_vec(0, 1, 0))  # 2cos t, min at pi
    assert abs(val + 2.0) <= 1e-12
    assert abs((t % (2 * np.pi)) - np.pi) <= 1e-7


def test_min_on_circle_constant():
    t, val = min_on_circle(_vec(3.5))
    assert val == 7.0  # gamma_0 = 2 alpha_0


# -- float certificates ----------------------------------------------------------


def test_is_plus_positive_definite():
    cert = is_plus(_vec(5 / 8, -1 / 2, 0))
    assert cert.is_plus and not cert.boundary
    assert cert.gram is not None and cert.gram_residual <= 1e-8
    w = np.linalg.eigvalsh(cert.gram)
    assert w.min() >= -1e-8


def test_is_plus_negative_has_witness_point():
    v = _vec(0, 1, 0)
    cert = is_plus(v)
    assert not cert.is_plus
    assert cert.negative_point is not None
    assert v.tau(cert.negative_point) < 0


def test_is_plus_boundary_gram():
    cert = is_plus(_vec(1, -1, 0))  # touches zero at t=0
    assert cert.is_plus and cert.boundary
    assert cert.gram is not None and cert.gram_residual <= 1e-8


def test_is_plus_exact_path():
    cert = is_plus(_exact_vec(1, -1, 0))
    assert cert.exact and cert.is_plus and cert.boundary
    cert2 = is_plus(_exact_vec(0, 1, 0))
    assert cert2.exact and not cert2.is_plus


def test_gram_reproduces_autocorrelation(rng):
    # gamma of |q|^2 for random q: always plus, Gram must reproduce gamma
    for _ in range(25):
        d = int(rng.integers(1, 6))
        q = rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)
        gamma = np.array(
            [np.vdot(q[: d + 1 - k], q[k:]) for k in range(d + 1)]
        )
        v = CoefVector.from_array(
            np.concatenate(
                [[gamma[0].real / 2.0], gamma[1:].real, gamma[1:].imag]
            )
        )
        cert = is_plus(v)
        assert cert.is_plus
        assert cert.gram_residual <= 1e-8
        back = gram_diag_sums(cert.gram)[: d + 1]
        assert np.max(np.abs(back - v.gamma())) <= 1e-8 * max(1.0, v.scale())


def test_gram_diag_sums_inverse_of_construction(rng):
    q = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    Q = np.outer(q, q.conj())  # rank-one Gram of |q|^2
    sums = gram_diag_sums(Q)
    want = np.array([np.vdot(q[: 4 - k], q[k:]) for k in range(4)])
    assert np.max(np.abs(sums - want)) <= 1e-12


# -- Fejer kernels ----------------------------------------------------------------


def test_fejer_vector_exact_and_nonneg():
    v = fejer_vector(3)
    assert v.is_exact
    assert v.alpha[0] == Fraction(1, 2)
    assert v.alpha[1] == Fraction(3, 4)
    nonneg, touches = certify_nonneg_exact(v)
    assert nonneg
    _, val = min_on_circle(v)
    assert val >= -1e-12


def test_fejer_shift_is_rotation():
    d, theta = 3, 1.1
    base, shifted = fejer_vector(d), fejer_vector(d, shift=theta)
    t = np.linspace(0, 2 * np.pi, 17)
    assert np.allclose(shifted.tau(t), base.tau(t - theta), atol=1e-12)


def test_fejer_shift_coefficient_formula():
    d, theta = 4, 0.7
    g = fejer_vector(d, shift=theta).gamma()
    for k in range(d + 1):
        want = (1 - k / (d + 1)) * np.exp(-1j * k * theta)
        assert abs(complex(g[k]) - want) <= 1e-12


# -- slices and dimension -----------------------------------------------------------


def test_find_plus_in_full_space_slice():
    basis = np.eye(3)
    w = np.array([1.0, 0.0, 0.0])
    got = find_plus_in_slice(basis, (w, 1.0))
    assert got is not None
    assert abs(float(np.dot(got.as_array(), w)) - 1.0) <= 1e-7
    assert is_plus(got, tol=1e-7).is_plus


def test_find_plus_in_slice_infeasible():
    got = find_plus_in_slice(V1_BASIS, (np.array([0.0, 1.0, 0.0]), 1.0))
    assert got is None


def test_plus_dimension_v1_is_zero():
    dim, found = plus_dimension(V1_BASIS)
    assert dim == 0 and found == []


def test_plus_dimension_v2_is_one():
    dim, found = plus_dimension(V2_BASIS)
    assert dim == 1 and len(found) == 1
    assert proportional(found[0].as_array(), np.array([1.0, 0.0, -1.0, 0.0, 0.0]), tol=1e-6)


@pytest.mark.parametrize("d", [0, 1, 2, 3, 4])
def test_plus_dimension_full_space(d):
    n = 2 * d + 1
    dim, found = plus_dimension(np.eye(n))
    assert dim == n and len(found) == n
    stack = np.array([v.as_array() for v in found], dtype=float)
    assert np.linalg.matrix_rank(stack, tol=1e-8) == n
    for v in found:
        _, val = min_on_circle(v)
        assert val >= -1e-9


def test_plus_dimension_seed_counts():
    # seed inside the cone is honored as the first found vector
    seed = fejer_vector(1)
    dim, found = plus_dimension(np.eye(3), seed=seed)
    assert dim == 3
    assert proportional(found[0].as_array(), seed.as_array(), tol=1e-9)


def test_plus_dimension_double_zero_kernel(examples):
    # the tilde kernel of the double-circle-zero example: dim 3, and all
    # three independent plus vectors are reachable
    from lacuna import (
        build_matrix,
        canonical_factorization,
        rank_and_kernel,
        tilde_factorization,
    )

    p, pat = examples["double_circle"]
    can = canonical_factorization(p, pat.N)
    til = tilde_factorization(p, pat.N, can)
    mat = build_matrix(til.coef, pat.forbidden, til.m_tilde, kind="tilde")
    kb = rank_and_kernel(mat)
    dim, found = plus_dimension([v.as_array() for v in kb.vectors])
    assert dim == 3 and len(found) == 3
    stack = np.array([v.as_array() for v in found], dtype=float)
    assert np.linalg.matrix_rank(stack, tol=1e-8) == 3
    for v in found:
        assert is_plus(v, tol=1e-7).is_plus


# -- CoefVector plumbing ---------------------------------------------------------


def test_coef_vector_roundtrip():
    v = _vec(0.5, -0.25, 0.125, 1.0, -1.0)
    assert v.d == 2
    back = CoefVector.from_array(v.as_array())
    assert np.allclose(back.as_array(), v.as_array())


def test_coef_vector_gamma_convention():
    v = _vec(0.5, 3.0, 4.0)
    g = v.gamma()
    assert g[0] == 1.0  # gamma_0 = 2 alpha_0
    assert g[1] == 3.0 + 4.0j


@given(
    st.lists(
        st.floats(min_value=-3, max_value=3, allow_nan=False),
        min_size=1,
        max_size=9,
    ).filter(lambda xs: len(xs) % 2 == 1)
)
def test_tau_matches_exponential_sum(entries):
    v = CoefVector.from_array(np.array(entries))
    g = v.gamma()
    t = np.linspace(0, 2 * np.pi, 13)
    direct = np.full_like(t, float(g[0].real))
    for k in range(1, v.d + 1):
        direct += 2 * np.real(complex(g[k]) * np.exp(1j * k * t))
    assert np.allclose(v.tau(t), direct, atol=1e-10)


def test_tau_derivative_matches_difference_quotient():
    v = _vec(0.3, 1.0, -0.5, 0.2, 0.7)
    t, h = 0.9, 1e-6
    num = (v.tau(t + h) - v.tau(t - h)) / (2 * h)
    assert abs(v.tau_derivative(t) - num) <= 1e-5
    num2 = (v.tau(t + h) - 2 * v.tau(t) + v.tau(t - h)) / h**2
    assert abs(v.tau_derivative(t, order=2) - num2) <= 1e-3
