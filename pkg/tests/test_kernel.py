import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerneldyn.constructions import conjugate_by_series, geometric_series_coeffs
from kerneldyn.errors import ConstructionError, NotHermitianError, NotPositiveDefiniteError
from kerneldyn.kernel import (
    CoefficientMatrix,
    derivative_moment,
    diagonal_coefficients,
    evaluate_kernel,
    gram,
    kernel_norm_at,
    normalized_diagonal,
    psd_check,
)
from kerneldyn import oracles
from kerneldyn.seqdsl import NamedSequence, parse_sequence_arg

HARDY = NamedSequence("hardy")
DIRICHLET = NamedSequence("dirichlet")
FAMILIES = [HARDY, NamedSequence("bergman"), DIRICHLET, NamedSequence("power", -1.0),
            NamedSequence("geometric", 0.7)]


def theta_kernel(beta, N):
    return conjugate_by_series(diagonal_coefficients(beta, N), geometric_series_coeffs(N))


def test_diagonal_examples():
    assert np.allclose(diagonal_coefficients(HARDY, 3).a, np.eye(3))
    assert np.allclose(diagonal_coefficients(DIRICHLET, 3).a, np.diag([1, 1 / 2, 1 / 3]))
    assert np.allclose(diagonal_coefficients(NamedSequence("geometric", 0.5), 2).a, np.diag([1, 0.25]))


def test_diagonal_rejects_nonpositive_weights():
    with pytest.raises(ConstructionError):
        diagonal_coefficients(parse_sequence_arg("n"), 3)
    with pytest.raises(ConstructionError):
        diagonal_coefficients(HARDY, 0)


def test_normalized_diagonal():
    assert np.allclose(normalized_diagonal(diagonal_coefficients(DIRICHLET, 3)), [1, 0.5, 1 / 3])
    d = normalized_diagonal(theta_kernel(NamedSequence("power", -1.0), 4))
    assert np.allclose(d, [1, 1.25, 1.3611111111111112, 1.4236111111111112], atol=1e-12)
    # against the brute-force series product
    beta_sq = [1 / (n + 1) ** 2 for n in range(4)]
    brute = oracles.series_conjugation([1] * 4, np.diag(beta_sq), 4)
    assert np.allclose(d, np.diagonal(brute).real, atol=1e-15)


def test_a00_is_kernel_at_origin():
    for beta in FAMILIES:
        A = theta_kernel(beta, 6)
        assert normalized_diagonal(A)[0] == evaluate_kernel(A, 0, 0).real


def test_derivative_moment():
    A = diagonal_coefficients(DIRICHLET, 5)
    assert derivative_moment(A, 1, 3) == 0
    assert derivative_moment(theta_kernel(HARDY, 4), 0, 1) == 1
    brute = oracles.series_conjugation([1] * 4, np.eye(4), 4)
    assert brute[0, 1] == 1
    with pytest.raises(IndexError):
        derivative_moment(A, 5, 0)


def test_gram_diagonal():
    beta = NamedSequence("power", -0.5)
    G = gram(diagonal_coefficients(beta, 6))
    assert np.allclose(G.G, np.diag(beta.squares(6)))
    assert np.allclose(G.U, np.diag(beta.values(6)))
    assert np.allclose(G.G, oracles.diagonal_gram(beta.squares(6)), rtol=1e-10)


def test_gram_theta_conjugated():
    beta = NamedSequence("dirichlet")
    N = 8
    L = np.tril(np.ones((N, N)))
    G = gram(theta_kernel(beta, N))
    assert np.allclose(G.G, L @ np.diag(beta.squares(N)) @ L.T, rtol=1e-12)
    assert np.allclose(G.U.conj().T @ G.U, G.G, atol=1e-13)
    assert psd_check(theta_kernel(beta, N)).is_psd


def test_gram_rejects():
    with pytest.raises(NotPositiveDefiniteError):
        gram(CoefficientMatrix(np.zeros((3, 3))))
    with pytest.raises(NotPositiveDefiniteError) as ei:
        gram(CoefficientMatrix([[1, 2], [2, 1]]))
    assert ei.value.smallest_eigenvalue == pytest.approx(-1)
    with pytest.raises(NotHermitianError):
        gram(CoefficientMatrix([[1, 1], [0, 1]]))


def test_gram_identity_all_diagonal_orders():
    for beta in FAMILIES[:4]:
        for N in (1, 2, 17, 64):
            A = diagonal_coefficients(beta, N)
            inv = np.diag(1 / beta.squares(N))
            assert np.allclose(A.a.conj().T @ inv @ A.a, gram(A).G, rtol=1e-10, atol=0)


def test_evaluate_examples():
    assert evaluate_kernel(diagonal_coefficients(HARDY, 5), 0, 0) == 1
    assert abs(evaluate_kernel(diagonal_coefficients(HARDY, 50), 0.5, 0.5) - 4 / 3) < 1e-10
    assert evaluate_kernel(diagonal_coefficients(DIRICHLET, 9), 0, 0.7j) == 1
    with pytest.raises(ValueError):
        evaluate_kernel(diagonal_coefficients(HARDY, 5), 1, 0)


def test_kernel_norm_examples():
    assert kernel_norm_at(diagonal_coefficients(HARDY, 5), 0) == 1
    assert kernel_norm_at(diagonal_coefficients(DIRICHLET, 5), 0) == 1
    assert kernel_norm_at(diagonal_coefficients(HARDY, 50), 0.5) == pytest.approx(np.sqrt(4 / 3), abs=1e-10)


def test_kernel_norm_squared_is_evaluation():
    A = theta_kernel(DIRICHLET, 20)
    for w in (0.3, 0.5j, -0.2 + 0.4j):
        assert kernel_norm_at(A, w) ** 2 == pytest.approx(evaluate_kernel(A, w, w).real, rel=1e-15)


def test_psd_examples():
    assert psd_check(diagonal_coefficients(DIRICHLET, 3)).is_psd
    r = psd_check(CoefficientMatrix([[1, 2], [2, 1]]))
    assert not r.is_psd and r.min_eigenvalue == pytest.approx(-1)
    assert psd_check(np.array([[1, 2], [2, 1]])).min_eigenvalue == pytest.approx(-1)


def test_hermitian_closure():
    for beta in FAMILIES:
        for A in (diagonal_coefficients(beta, 16), theta_kernel(beta, 16)):
            scale = np.abs(A.a).max()
            assert A.hermitian_residual() <= 1e-14 * scale


def test_coefficients_are_read_only():
    A = diagonal_coefficients(HARDY, 3)
    with pytest.raises(ValueError):
        A.a[0, 0] = 2


_disc = st.tuples(st.floats(0, 0.95), st.floats(0, 2 * np.pi)).map(lambda t: t[0] * np.exp(1j * t[1]))


@pytest.mark.parametrize("beta", FAMILIES, ids=lambda b: b.describe())
@settings(max_examples=100, deadline=None)
@given(z=_disc, w=_disc)
def test_kernel_is_hermitian_in_points(beta, z, w):
    A = theta_kernel(beta, 24)
    kzw = evaluate_kernel(A, z, w)
    kwz = evaluate_kernel(A, w, z)
    assert abs(kzw - np.conj(kwz)) <= 1e-12 * max(1.0, abs(kzw))
