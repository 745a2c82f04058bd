"""
The adjoint of ``M_z`` restricted to ``span{Khat_0 .. Khat_{N-1}}``.

In ``Khat`` coordinates the adjoint is the plain backward shift
``Khat_n -> Khat_{n-1}``, ``Khat_0 -> 0``; the span is invariant, so the
restriction is exact and every orbit computed here is free of truncation
drift.  Floating point only enters through norms (``c^H G c``) and through
``on_matrix``, the same operator written in the orthonormal basis obtained
from the Gram factor ``G = U^H U``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .criteria import (
    CriteriaConfig,
    VIOLATED_ON_WINDOW,
    _tail_window,
    tails_from_shells,
)
from .errors import CapacityError, ConstructionError, NotSummableError
from .kernel import CoefficientMatrix, GramData, gram, normalized_diagonal


@dataclass(frozen=True, eq=False)
class TruncatedModel:
    coefficients: CoefficientMatrix
    gram: GramData
    on_matrix: np.ndarray   # U S U^-1

    @property
    def N(self) -> int:
        return self.gram.order

    @property
    def U(self) -> np.ndarray:
        return self.gram.U

    def norm(self, c) -> float:
        return self.gram.norm(c)

    def orthonormal(self, c) -> np.ndarray:
        """Coordinates of ``sum c_j Khat_j`` in the orthonormal basis, ``U c``."""
        return self.U @ self.coords(c)

    def coords(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=complex).ravel()
        if c.shape[0] > self.N:
            raise CapacityError(f"vector has {c.shape[0]} coordinates, window holds {self.N}")
        out = np.zeros(self.N, dtype=complex)
        out[:c.shape[0]] = c
        return out


def unit(n: int, N: int) -> np.ndarray:
    """Coordinates of ``Khat_n``."""
    if not 0 <= n < N:
        raise CapacityError(f"index {n} outside window of order {N}")
    e = np.zeros(N, dtype=complex)
    e[n] = 1
    return e


def build_model(A: CoefficientMatrix) -> TruncatedModel:
    G = gram(A)
    U = G.U
    N = G.order
    Uinv = scipy.linalg.solve_triangular(U, np.eye(N, dtype=complex), lower=False)
    SUinv = np.zeros_like(Uinv)
    SUinv[:-1] = Uinv[1:]
    on = U @ SUinv
    # U upper and S U^-1 strictly upper: clear rounding noise that cannot be there
    on = np.triu(on, k=1)
    on.setflags(write=False)
    return TruncatedModel(A, G, on)


def shift_down(c, k=1) -> np.ndarray:
    c = np.asarray(c)
    out = np.zeros_like(c)
    if k < c.shape[0]:
        out[:c.shape[0] - k] = c[k:]
    return out


def apply_adjoint(model: TruncatedModel, c) -> np.ndarray:
    """``c'_j = c_{j+1}``: a copy, no arithmetic."""
    return shift_down(model.coords(c))


class EigenCheck(NamedTuple):
    residual: float
    bound: float


def eigenvector_check(model: TruncatedModel, w: complex) -> EigenCheck:
    """Residual of ``M_z^* k(., w) = conj(w) k(., w)`` on the truncated expansion.

    ``k(., w) = sum_n conj(w)^n Khat_n``.  Coordinates are built by repeated
    multiplication so every interior term cancels exactly; what remains is the
    dropped top term, of norm ``|w|^N ||Khat_{N-1}||``, which the returned
    bound ``|w|^(N-1) ||Khat_{N-1}|| (1 + |w|)`` dominates.
    """
    w = complex(w)
    if abs(w) >= 1:
        raise ValueError("w must lie in the open unit disc")
    N = model.N
    wb = w.conjugate()
    # plain Python complex products on both sides: a vectorised multiply may
    # round differently and spoil the exact interior cancellation
    c = [1 + 0j]
    for _ in range(1, N):
        c.append(c[-1] * wb)
    r = np.array([(c[j + 1] if j + 1 < N else 0) - c[j] * wb for j in range(N)])
    top = float(np.sqrt(max(model.gram.G[N - 1, N - 1].real, 0.0)))
    bound = abs(w) ** (N - 1) * top * (1 + abs(w))
    return EigenCheck(model.norm(r), bound)


class Orbit(NamedTuple):
    norms: np.ndarray
    trace: np.ndarray | None


def orbit(model: TruncatedModel, v, steps: int, trace: bool = False) -> Orbit:
    """Norms of ``v, M_z^* v, ..., (M_z^*)^steps v``."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    c = model.coords(v)
    norms = np.empty(steps + 1)
    rows = np.zeros((steps + 1, model.N), dtype=complex) if trace else None
    for j in range(steps + 1):
        norms[j] = model.norm(c)
        if trace:
            rows[j] = c
        c = shift_down(c)
    return Orbit(norms, rows)


class Witness(NamedTuple):
    g: np.ndarray
    norm: float
    exact: bool


def _support_end(c) -> int:
    nz = np.nonzero(c)[0]
    return int(nz[-1]) + 1 if nz.size else 0


def criterion_witness(model: TruncatedModel, f, k: int) -> Witness:
    """``g_k``: ``f`` shifted up by ``k``, so that ``(M_z^*)^k g_k = f``."""
    f = np.asarray(f, dtype=complex).ravel()
    m = _support_end(f)
    if k < 0:
        raise ValueError("k must be non-negative")
    if m + k > model.N:
        raise CapacityError(f"support {m} plus shift {k} exceeds window {model.N}")
    g = np.zeros(model.N, dtype=complex)
    g[k:k + m] = f[:m]
    back = g
    for _ in range(k):
        back = apply_adjoint(model, back)
    exact = bool(np.array_equal(back, model.coords(f[:m]) if m else np.zeros(model.N, complex)))
    return Witness(g, model.norm(g), exact)


class PeriodicPoint(NamedTuple):
    x_p: np.ndarray
    residual: float
    boundary_bound: float
    distance_to_x: float


def summability_gate(model: TruncatedModel, cfg: CriteriaConfig | None = None):
    """Tail test on ``a_nn``; returns ``(classification, evidence)``."""
    cfg = (cfg or CriteriaConfig()).with_window(model.N)
    A = model.coefficients
    if A.beta is not None and A.beta.limits is not None:
        ok = A.beta.limits.square_summable
        return (VIOLATED_ON_WINDOW if not ok else None), {"basis": "analytic", "square_summable": ok}
    d = normalized_diagonal(A)
    cls, ev = _tail_window(tails_from_shells(d), cfg, "a_nn")
    return cls, ev


def periodic_point(model: TruncatedModel, x, p: int, cfg: CriteriaConfig | None = None) -> PeriodicPoint:
    """Truncation of ``x + sum_{n>=1} (M_z^*)^{np} x + sum_{n>=1} u_{np}``.

    ``u_k`` is ``x`` shifted up by ``k``, so coordinate ``i`` of the sum is
    ``sum_{j = i mod p} x_j``.  Every term with index below ``N`` is kept; the
    residual ``(M_z^*)^p x_p - x_p`` is then exactly the top ``p`` coordinates.
    """
    if p < 1:
        raise ValueError("period must be a positive integer")
    cls, ev = summability_gate(model, cfg)
    if cls == VIOLATED_ON_WINDOW:
        raise NotSummableError(f"diagonal a_nn is not summable ({ev}); periodic points not constructed")
    N = model.N
    x = model.coords(x)
    m = _support_end(x)
    if m > N - p and m > 0:
        raise CapacityError(f"support {m} leaves no room for period {p} in window {N}")
    residues = np.zeros(p, dtype=complex)
    np.add.at(residues, np.arange(m) % p, x[:m])
    xp = residues[np.arange(N) % p]
    diff = shift_down(xp, p) - xp
    d = normalized_diagonal(model.coefficients)
    top = slice(N - p, N)
    bb = float(np.sqrt(np.sum(d[top] * np.abs(xp[top]) ** 2)))
    return PeriodicPoint(xp, model.norm(diff), bb, model.norm(xp - x))


def compression_norm(model: TruncatedModel, size: int | None = None) -> float:
    """Spectral norm of the leading ``size x size`` block of ``on_matrix``.

    Equal to the norm of ``M_z`` compressed to the window, hence a lower bound
    for ``||M_z||`` that can only grow with the window.
    """
    size = model.N if size is None else size
    if not 1 <= size <= model.N:
        raise ConstructionError(f"size must lie in [1, {model.N}]")
    if size == 1:
        return 0.0
    return float(np.linalg.norm(model.on_matrix[:size, :size], 2))


def compression_growth(model: TruncatedModel, slack: float = 1e-2) -> dict:
    """Compression norm at ``N`` and ``N/2``; ``likely_unbounded`` if it keeps growing."""
    full = compression_norm(model)
    half = compression_norm(model, max(1, model.N // 2))
    growing = model.N >= 4 and full > (1 + slack) * half
    return {"norm": full, "norm_half": half, "likely_unbounded": bool(growing)}


def annihilates(model: TruncatedModel) -> bool:
    """``(M_z^*)^N`` is zero on the window, both as a shift and as ``on_matrix^N``."""
    N = model.N
    c = np.ones(N, dtype=complex)
    for _ in range(N):
        c = shift_down(c)
    return bool(not c.any() and not np.linalg.matrix_power(model.on_matrix, N).any())
