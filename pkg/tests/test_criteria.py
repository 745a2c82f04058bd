import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerneldyn import oracles
from kerneldyn.constructions import (
    BlockCoefficientKernel,
    PolynomialSpec,
    TridiagonalSpec,
    block_polynomial_conjugate,
    conjugate_by_series,
    geometric_series_coeffs,
    quasi_scalar,
)
from kerneldyn.criteria import (
    INCONCLUSIVE,
    SATISFIED_ANALYTIC,
    SATISFIED_ON_WINDOW,
    VIOLATED_ON_WINDOW,
    CriteriaConfig,
    NegativeDiagonalError,
    absolute_tails,
    block_chaos_sufficient,
    block_hypercyclicity_sufficient,
    block_mixing_sufficient,
    boundedness_verdict,
    canonical_basis,
    chaos_sufficient,
    costakis_sambarino,
    grosse_erdmann_chaos,
    hypercyclicity_sufficient,
    mixing_sufficient,
    mz_boundedness_diag,
    replay_evidence,
    running_minima,
    salas_characterization,
    scalar_sufficient,
    tridiagonal_characterization,
    tridiagonal_diagonal,
)
from kerneldyn.kernel import CoefficientMatrix, diagonal_coefficients, normalized_diagonal
from kerneldyn.seqdsl import ListSequence, NamedSequence, parse_sequence_arg

NAMED = ["hardy", "bergman", "dirichlet", "power(-1)", "power(-0.5)", "power(0.5)",
         "geometric(0.5)", "geometric(1)", "geometric(1.5)"]


def seq(text):
    return parse_sequence_arg(text)


def diag_kernel(text, N=512):
    return diagonal_coefficients(seq(text), N)


def alternating(N=512):
    return np.array([1.0 if n % 2 == 0 else 0.0 for n in range(N)])


# --- sufficient conditions -------------------------------------------------

def test_hypercyclicity_examples():
    A = diag_kernel("dirichlet")
    assert hypercyclicity_sufficient(normalized_diagonal(A), limits=A.beta.limits).classification \
        == SATISFIED_ANALYTIC
    A = diag_kernel("hardy")
    v = hypercyclicity_sufficient(normalized_diagonal(A), limits=A.beta.limits)
    assert v.classification == VIOLATED_ON_WINDOW and v.basis == "analytic"
    # without metadata the window decides
    assert hypercyclicity_sufficient(np.ones(512)).classification == VIOLATED_ON_WINDOW


def test_hypercyclicity_fails_on_theta_conjugated():
    N = 512
    beta = seq("power(-1)")
    A = conjugate_by_series(diagonal_coefficients(beta, N), geometric_series_coeffs(N))
    d = normalized_diagonal(A)
    assert np.allclose(d, np.cumsum(beta.squares(N)), atol=1e-13)
    assert d[-1] < np.pi ** 2 / 6
    assert hypercyclicity_sufficient(d).classification == VIOLATED_ON_WINDOW


def test_mixing_examples():
    A = diag_kernel("dirichlet")
    assert mixing_sufficient(normalized_diagonal(A), limits=A.beta.limits).classification \
        == SATISFIED_ANALYTIC
    A = diag_kernel("bergman")
    assert mixing_sufficient(normalized_diagonal(A), limits=A.beta.limits).classification \
        == VIOLATED_ON_WINDOW


def test_alternating_splits_mixing_from_hypercyclicity():
    d = alternating()
    assert hypercyclicity_sufficient(d).classification == SATISFIED_ON_WINDOW
    assert mixing_sufficient(d).classification == VIOLATED_ON_WINDOW


def test_slow_decay_is_inconclusive():
    d = 1 / np.arange(1, 513)
    assert hypercyclicity_sufficient(d).classification == INCONCLUSIVE
    assert mixing_sufficient(d).classification == INCONCLUSIVE


def test_negative_diagonal_rejected():
    with pytest.raises(NegativeDiagonalError):
        hypercyclicity_sufficient(np.array([1.0, -0.5, 0.1, 0.0]))


def test_short_windows_are_inconclusive():
    assert hypercyclicity_sufficient([1.0]).classification == INCONCLUSIVE
    assert mixing_sufficient([1.0, 0.0, 0.0]).classification == INCONCLUSIVE
    v = chaos_sufficient(CoefficientMatrix(np.eye(2)))
    assert v.classification == INCONCLUSIVE and "too short" in v.evidence["reason"]


def test_chaos_examples():
    assert chaos_sufficient(diag_kernel("2^(-n/2)")).classification == SATISFIED_ON_WINDOW
    assert chaos_sufficient(diag_kernel("hardy")).classification == VIOLATED_ON_WINDOW
    assert chaos_sufficient(diag_kernel("1")).classification == VIOLATED_ON_WINDOW
    assert chaos_sufficient(diag_kernel("power(-1)")).classification == SATISFIED_ANALYTIC
    # the window alone cannot see 1/N' decay below 1e-6
    assert chaos_sufficient(diag_kernel("1/(n+1)")).classification == INCONCLUSIVE


def test_chaos_tail_values():
    s = absolute_tails(diag_kernel("2^(-n/2)", 40))
    for k in range(40):
        assert s[k] == pytest.approx(2.0 ** (1 - k) - 2.0 ** (1 - 40), rel=1e-12)
    tail = absolute_tails(diag_kernel("power(-1)", 200))
    for k in range(1, 200):
        assert tail[k] < 1 / k


def test_absolute_tails_match_oracle():
    rng = np.random.default_rng(2)
    M = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    A = CoefficientMatrix(M + M.conj().T)
    assert np.allclose(absolute_tails(A), oracles.absolute_tail_sums(A.a, 12), rtol=1e-13)


# --- exact characterisations on diagonal kernels ----------------------------

def test_salas_examples():
    assert salas_characterization(seq("dirichlet")).classification == SATISFIED_ANALYTIC
    assert salas_characterization(seq("power(-1)")).classification == SATISFIED_ANALYTIC
    v = salas_characterization(seq("hardy"))
    assert v.classification == VIOLATED_ON_WINDOW and v.exact
    assert salas_characterization(seq("1")).classification == VIOLATED_ON_WINDOW


def test_salas_witness_indices():
    vals = []
    for k in range(256):
        vals += [1.0, 10.0 ** -(k + 1)]
    v = salas_characterization(ListSequence(tuple(vals)))
    assert v.classification == SATISFIED_ON_WINDOW
    wit = v.evidence["witness_indices"]
    assert wit[:4] == [0, 1, 3, 5]
    assert all(i % 2 == 1 for i in wit[1:])


def test_costakis_examples():
    assert costakis_sambarino(seq("dirichlet")).classification == SATISFIED_ANALYTIC
    assert costakis_sambarino(seq("hardy")).classification == VIOLATED_ON_WINDOW
    alt = ListSequence(tuple(np.sqrt(alternating())))
    assert salas_characterization(alt).classification == SATISFIED_ON_WINDOW
    assert costakis_sambarino(alt).classification == VIOLATED_ON_WINDOW


def test_grosse_erdmann_examples():
    assert grosse_erdmann_chaos(seq("2^(-n/2)")).classification == SATISFIED_ON_WINDOW
    assert grosse_erdmann_chaos(seq("hardy")).classification == VIOLATED_ON_WINDOW
    assert grosse_erdmann_chaos(seq("dirichlet")).classification == VIOLATED_ON_WINDOW
    assert grosse_erdmann_chaos(seq("dirichlet")).basis == "analytic"
    # harmonic tail over a quarter window is log 2, far above the floor
    assert grosse_erdmann_chaos(seq("1/sqrt(n+1)")).classification == VIOLATED_ON_WINDOW


def test_boundedness_examples():
    h = mz_boundedness_diag(seq("hardy"))
    assert (h.sup_ratio, h.limsup_ratio, h.bounded, h.analytic_on_disc) == (1, 1, True, True)
    b = mz_boundedness_diag(seq("bergman"))
    assert b.bounded and b.analytic_on_disc
    assert b.sup_ratio <= 1 and b.limsup_ratio == pytest.approx(1, abs=1e-2)
    b = mz_boundedness_diag(seq("sqrt(n+1)"))
    assert b.bounded and b.analytic_on_disc and b.basis == "window"
    assert not mz_boundedness_diag(seq("2^(-n^2)")).bounded
    assert not mz_boundedness_diag(seq("2^(-n^2)"), window=16).bounded
    assert not mz_boundedness_diag(seq("geometric(2)")).analytic_on_disc
    assert boundedness_verdict(h).classification == SATISFIED_ANALYTIC
    assert boundedness_verdict(mz_boundedness_diag(seq("2^(-n^2)"))).classification == VIOLATED_ON_WINDOW


@pytest.mark.parametrize("name", NAMED)
def test_diagonal_consistency(name):
    beta = seq(name)
    A = diagonal_coefficients(beta, 512)
    hyp, mix, chaos = scalar_sufficient(A)
    assert hyp.classification == salas_characterization(beta).classification
    assert mix.classification == costakis_sambarino(beta).classification
    assert chaos.classification == grosse_erdmann_chaos(beta).classification


@pytest.mark.parametrize("text", ["1", "2^(-n/2)", "exp(-n)", "1/(n+1)", "sqrt(n+1)", "1/sqrt(n+1)"])
def test_diagonal_consistency_on_window(text):
    beta = seq(text)
    hyp, mix, chaos = scalar_sufficient(diagonal_coefficients(beta, 512))
    assert hyp.classification == salas_characterization(beta).classification
    assert mix.classification == costakis_sambarino(beta).classification
    assert chaos.classification == grosse_erdmann_chaos(beta).classification


@pytest.mark.parametrize("name", NAMED)
def test_chaos_implies_mixing(name):
    hyp, mix, chaos = scalar_sufficient(diag_kernel(name))
    if chaos.classification == SATISFIED_ANALYTIC:
        assert mix.satisfied and hyp.satisfied


def test_counterexample_pair():
    beta = seq("power(-1)")
    N = 512
    A = conjugate_by_series(diagonal_coefficients(beta, N), geometric_series_coeffs(N))
    assert salas_characterization(beta).classification == SATISFIED_ANALYTIC
    assert hypercyclicity_sufficient(normalized_diagonal(A)).classification == VIOLATED_ON_WINDOW


# --- evidence -----------------------------------------------------------------

def test_running_minima():
    assert running_minima([3, 1, 2, 1, 0.5, 0.5, 0]) == [0, 1, 4, 6]


@pytest.mark.parametrize("text", ["dirichlet", "2^(-n/2)", "1", "1/(n+1)", "exp(-n/10)"])
def test_replay_is_bit_exact(text):
    A = diag_kernel(text)
    d = normalized_diagonal(A)
    hyp, mix, _ = scalar_sufficient(A)
    assert replay_evidence(hyp, d) and replay_evidence(mix, d)
    assert replay_evidence(hyp, normalized_diagonal(diag_kernel(text)))
    assert not replay_evidence(hyp, d * (1 + 1e-15) + 1e-300)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=4, max_size=80))
def test_window_verdicts_replay(values):
    d = np.array(values)
    for v in (hypercyclicity_sufficient(d), mixing_sufficient(d)):
        assert replay_evidence(v, d)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 10, allow_nan=False), min_size=4, max_size=80))
def test_mixing_satisfied_implies_hypercyclicity_satisfied(values):
    d = np.array(values)
    if mixing_sufficient(d).classification == SATISFIED_ON_WINDOW:
        assert hypercyclicity_sufficient(d).classification == SATISFIED_ON_WINDOW


# --- tridiagonal ----------------------------------------------------------------

def test_tridiagonal_decaying():
    t = TridiagonalSpec(seq("1/(n+1)"), seq("1/(2*(n+2))"), 4096)
    d = tridiagonal_diagonal(t)
    n = np.arange(1, 4096)
    assert np.allclose(d[1:], 1.25 / (n + 1) ** 2, rtol=1e-12)
    hyp, mix = tridiagonal_characterization(t, CriteriaConfig(window=4096))
    assert hyp.classification == SATISFIED_ON_WINDOW and mix.classification == SATISFIED_ON_WINDOW
    assert hyp.exact and mix.exact and hyp.evidence["gate"]["gate_holds"]


def test_tridiagonal_named_mu_is_analytic():
    t = TridiagonalSpec(seq("power(-1)"), seq("1/(2*(n+2))"), 512)
    hyp, mix = tridiagonal_characterization(t)
    assert hyp.classification == mix.classification == SATISFIED_ANALYTIC


def test_tridiagonal_constant():
    t = TridiagonalSpec(seq("1"), seq("0.5"), 512)
    hyp, mix = tridiagonal_characterization(t)
    assert hyp.classification == mix.classification == VIOLATED_ON_WINDOW


def test_tridiagonal_gate_failure():
    t = TridiagonalSpec(seq("1"), seq("2"), 512)
    hyp, mix = tridiagonal_characterization(t)
    assert hyp.classification == mix.classification == INCONCLUSIVE
    assert not hyp.evidence["gate"]["gate_holds"]


def tent_heights(count):
    # 0,1,0,1,2,1,0,1,2,3,2,1,0,...: tents of growing depth, one step at a time
    h, k = [], 1
    while len(h) < count:
        h += list(range(k)) + list(range(k, 0, -1))
        k += 1
    return np.array(h[:count])


def test_tridiagonal_tents_split_verdicts():
    N = 512
    mu = 2.0 ** -tent_heights(N + 1)
    t = TridiagonalSpec(ListSequence(tuple(mu[:N])), ListSequence(tuple(mu[1:] / 4)), N)
    hyp, mix = tridiagonal_characterization(t)
    assert hyp.evidence["gate"]["gate_holds"]
    assert hyp.classification == SATISFIED_ON_WINDOW
    assert mix.classification == VIOLATED_ON_WINDOW


# --- block kernels ----------------------------------------------------------------

def test_block_quasi_scalar_dirichlet():
    K = quasi_scalar(diag_kernel("dirichlet"), 2)
    assert block_hypercyclicity_sufficient(K, canonical_basis(2)).satisfied
    assert block_hypercyclicity_sufficient(K).satisfied


def test_block_polynomial_decay():
    P = PolynomialSpec((np.eye(2), np.array([[0.5, 1], [0, 0.25]])))
    K = block_polynomial_conjugate(seq("power(-1)"), P, 512)
    assert block_hypercyclicity_sufficient(K).classification == SATISFIED_ANALYTIC
    K = block_polynomial_conjugate(seq("2^(-n/2)"), P, 128)
    v = block_hypercyclicity_sufficient(K)
    assert v.classification == SATISFIED_ON_WINDOW
    norms = np.array([np.linalg.norm(b, 2) for b in K.diagonal_blocks()])
    M = sum(np.linalg.norm(c, 2) ** 2 for c in P.coeffs)
    beta_sq = seq("2^(-n/2)").squares(128)
    assert np.all(norms[1:] <= M * beta_sq[:-1] + 1e-15)


def test_block_non_uniform_decay_is_violated():
    N = 64
    B = np.zeros((N, N, 2, 2), dtype=complex)
    for n in range(N):
        B[n, n] = np.diag([1, 1 / (n + 1)])
    K = BlockCoefficientKernel(B)
    assert block_hypercyclicity_sufficient(K, canonical_basis(2)).classification == VIOLATED_ON_WINDOW
    assert block_hypercyclicity_sufficient(K).classification == VIOLATED_ON_WINDOW
    assert block_mixing_sufficient(K).classification == VIOLATED_ON_WINDOW
    assert block_chaos_sufficient(K).classification == VIOLATED_ON_WINDOW


def test_block_test_vectors_validated():
    K = quasi_scalar(diag_kernel("dirichlet", 8), 2)
    with pytest.raises(ValueError):
        block_hypercyclicity_sufficient(K, [[1, 1]])
    with pytest.raises(ValueError):
        block_hypercyclicity_sufficient(K, [[1, 0, 0]])


def test_config_json():
    assert CriteriaConfig().to_json() == {"window": 512, "tol": 1e-6, "floor": 1e-3, "slack": 1e-2}
