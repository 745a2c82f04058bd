"""
Slow, loop-based reference computations.

Nothing here shares code with the vectorised constructions; the test suite
and ``verify --suite oracles`` compare the two.
"""

import numpy as np


def series_conjugation(p, a, N):
    """Coefficients of ``p(z) k(z, w) conj(p(w))`` by the triple Cauchy product.

    ``out[m][n] = sum_{i<=m} sum_{j<=n} p_i a[m-i][n-j] conj(p_j)``.
    """
    p = list(p) + [0] * N
    out = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            s = 0j
            for i in range(m + 1):
                for j in range(n + 1):
                    s += p[i] * a[m - i][n - j] * np.conj(p[j])
            out[m, n] = s
    return out


def tridiagonal_by_basis(mu, nu, N):
    """``sum_n e_n(z) conj(e_n(w))`` with ``e_n = mu_n z^n + nu_n z^(n+1)``, below order ``N``."""
    out = np.zeros((N, N), dtype=complex)
    for n in range(N):
        e = [0j] * N
        e[n] = mu[n]
        if n + 1 < N:
            e[n + 1] = nu[n]
        for i in range(N):
            for j in range(N):
                out[i, j] += e[i] * np.conj(e[j])
    return out


def znf_coefficients_by_solve(mu, nu, n, N):
    """Expand ``z^n (a + b z)`` in ``e_0 .. e_{N-1}`` by forward substitution.

    The coefficient of ``z^i`` in ``sum alpha_j e_j`` is
    ``mu_i alpha_i + nu_{i-1} alpha_{i-1}``.
    """
    a = abs(mu[0]) ** 2
    b = mu[0] * np.conj(nu[0])
    rhs = [0j] * N
    rhs[n] = a
    if n + 1 < N:
        rhs[n + 1] = b
    alpha = [0j] * N
    for i in range(N):
        prev = nu[i - 1] * alpha[i - 1] if i > 0 else 0
        alpha[i] = (rhs[i] - prev) / mu[i]
    return np.array(alpha)


def weighted_inner(f, g, beta_sq):
    """``<f, g>`` in ``H^2(beta)``: ``sum f_n conj(g_n) / beta_n^2``."""
    s = 0j
    for fn, gn, b in zip(f, g, beta_sq):
        s += fn * np.conj(gn) / b
    return s


def diagonal_gram(beta_sq):
    """Gram matrix of ``Khat_n = beta_n^2 z^n`` computed from the ``H^2(beta)`` inner product."""
    N = len(beta_sq)
    vecs = []
    for n in range(N):
        v = [0.0] * N
        v[n] = beta_sq[n]
        vecs.append(v)
    G = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            G[m, n] = weighted_inner(vecs[n], vecs[m], beta_sq)
    return G


def block_diagonal_formula(coeffs, beta_sq):
    """``C_nn = sum_j A_j A_j^H beta_{n-j}^2``."""
    N = len(beta_sq)
    d = np.asarray(coeffs[0]).shape[0]
    out = np.zeros((N, d, d), dtype=complex)
    for n in range(N):
        for j, Aj in enumerate(coeffs):
            if j <= n:
                Aj = np.asarray(Aj, dtype=complex)
                out[n] += Aj @ Aj.conj().T * beta_sq[n - j]
    return out


def absolute_tail_sums(a, W):
    """``s[k] = sum_{n, m in [k, W)} |a[n][m]|`` by direct summation."""
    out = np.zeros(W)
    for k in range(W):
        out[k] = sum(abs(a[n][m]) for n in range(k, W) for m in range(k, W))
    return out
