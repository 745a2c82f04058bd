"""
Dynamics criteria for the adjoint multiplication operator ``M_z^*``.

Asymptotic conditions (liminf, lim, summability) cannot be decided from
finitely many terms, so every check returns a :class:`Verdict` with one of
four stable tokens:

``SATISFIED_ANALYTIC``
    decided exactly from the limit metadata of a named sequence family
``SATISFIED_ON_WINDOW`` / ``VIOLATED_ON_WINDOW``
    the finite window gives clear evidence either way
``INCONCLUSIVE``
    neither

An analytic decision that the condition *fails* is reported as
``VIOLATED_ON_WINDOW`` with ``basis == "analytic"``.

Window rules (``W`` = window length, ``h = W // 2``):

* liminf-type: satisfied iff ``min d[h:] < tol``; violated iff
  ``min d[h:] >= floor`` and no new running minimum occurs in ``d[h:]``.
* lim-type: satisfied iff ``max d[h:] < tol``; violated iff the maximum over
  the last quarter is ``>= floor`` and not below the maximum over the third
  quarter (the upper envelope does not decay).
* summability (tails ``s[k] = sum_{j>=k} t_j`` inside the window): satisfied
  iff ``s[h] < tol``; violated iff ``s[h] >= floor`` and the block sum over
  ``[h, W)`` is at least the block sum over ``[W//4, h)``.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field, replace

import numpy as np

from .constructions import (
    DEFAULT_SLACK,
    BlockCoefficientKernel,
    TridiagonalSpec,
    stable_sup,
    tridiagonal_boundedness,
)
from .errors import KernelDynError
from .kernel import CoefficientMatrix, normalized_diagonal
from .seqdsl import Limit, Limits, SequenceSpec


class Classification(str, enum.Enum):
    SATISFIED_ANALYTIC = "SATISFIED_ANALYTIC"
    SATISFIED_ON_WINDOW = "SATISFIED_ON_WINDOW"
    VIOLATED_ON_WINDOW = "VIOLATED_ON_WINDOW"
    INCONCLUSIVE = "INCONCLUSIVE"

    @property
    def satisfied(self):
        return self in (Classification.SATISFIED_ANALYTIC, Classification.SATISFIED_ON_WINDOW)


SATISFIED_ANALYTIC = Classification.SATISFIED_ANALYTIC
SATISFIED_ON_WINDOW = Classification.SATISFIED_ON_WINDOW
VIOLATED_ON_WINDOW = Classification.VIOLATED_ON_WINDOW
INCONCLUSIVE = Classification.INCONCLUSIVE


@dataclass(frozen=True)
class CriteriaConfig:
    window: int = 512
    tol: float = 1e-6
    floor: float = 1e-3
    slack: float = DEFAULT_SLACK

    def with_window(self, window):
        return replace(self, window=int(window))

    def to_json(self):
        return {"window": self.window, "tol": self.tol, "floor": self.floor, "slack": self.slack}


@dataclass(frozen=True)
class Verdict:
    condition_id: str
    classification: Classification
    basis: str = "window"        # "window" or "analytic"
    exact: bool = False          # True for if-and-only-if characterisations
    evidence: dict = field(default_factory=dict)

    @property
    def satisfied(self):
        return self.classification.satisfied

    def to_json(self):
        return {
            "condition_id": self.condition_id,
            "classification": self.classification.value,
            "basis": self.basis,
            "exact": self.exact,
            "evidence": self.evidence,
        }


class NegativeDiagonalError(KernelDynError):
    pass


# ---------------------------------------------------------------------------
# window primitives


class WindowTooShort(ValueError):
    pass


def _window(values, cfg, minimum):
    x = np.asarray(values, dtype=float)
    W = min(cfg.window, x.shape[0])
    if W < minimum:
        raise WindowTooShort(f"window of length {W} is too short (need {minimum})")
    return x[:W], W


def _short_window_inconclusive(condition_id, exact=False):
    """Turn a too-short window into an INCONCLUSIVE verdict instead of an error."""
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except WindowTooShort as exc:
                return Verdict(condition_id, INCONCLUSIVE, "window", exact, {"reason": str(exc)})
        return inner
    return wrap


def running_minima(x) -> list[int]:
    """Indices where a new strict running minimum is attained (index 0 included)."""
    out, cur = [], np.inf
    for i, v in enumerate(x):
        if v < cur:
            out.append(i)
            cur = v
    return out


def _liminf_window(x, cfg, sequence):
    W = x.shape[0]
    if W < 2:
        raise WindowTooShort(f"window of length {W} is too short (need 2)")
    h = W // 2
    wit = running_minima(x)
    j = h + int(np.argmin(x[h:]))
    min_last = float(x[j])
    if min_last < cfg.tol:
        cls = SATISFIED_ON_WINDOW
    elif min_last >= cfg.floor and not any(i >= h for i in wit):
        cls = VIOLATED_ON_WINDOW
    else:
        cls = INCONCLUSIVE
    evidence = {
        "sequence": sequence,
        "window": W,
        "witness_indices": wit,
        "witness_values": [float(x[i]) for i in wit],
        "extremal": {"min_last_half": min_last, "argmin_last_half": j},
    }
    return cls, evidence


def _lim_window(x, cfg, sequence):
    W = x.shape[0]
    if W < 4:
        raise WindowTooShort(f"window of length {W} is too short (need 4)")
    h = W // 2
    q = h + (W - h) // 2
    i_last = h + int(np.argmax(x[h:]))
    i3 = h + int(np.argmax(x[h:q]))
    i4 = q + int(np.argmax(x[q:]))
    if x[i_last] < cfg.tol:
        cls = SATISFIED_ON_WINDOW
    elif x[i4] >= cfg.floor and x[i4] >= x[i3]:
        cls = VIOLATED_ON_WINDOW
    else:
        cls = INCONCLUSIVE
    wit = [i_last, i3, i4]
    evidence = {
        "sequence": sequence,
        "window": W,
        "witness_indices": wit,
        "witness_values": [float(x[i]) for i in wit],
        "extremal": {"max_last_half": float(x[i_last]), "max_third_quarter": float(x[i3]),
                     "max_last_quarter": float(x[i4])},
    }
    return cls, evidence


def tails_from_shells(shells) -> np.ndarray:
    """``s[k] = sum_{j >= k} shells[j]``."""
    return np.cumsum(np.asarray(shells, dtype=float)[::-1])[::-1]


def _tail_window(s, cfg, sequence):
    W = s.shape[0]
    if W < 4:
        raise WindowTooShort(f"window of length {W} is too short (need 4)")
    h, q = W // 2, W // 4
    block_last = float(s[h])
    block_prev = float(s[q] - s[h])
    below = np.nonzero(s < cfg.tol)[0]
    if s[h] < cfg.tol:
        cls = SATISFIED_ON_WINDOW
    elif s[h] >= cfg.floor and block_last >= block_prev:
        cls = VIOLATED_ON_WINDOW
    else:
        cls = INCONCLUSIVE
    wit = [q, h] + ([int(below[0])] if below.size else [])
    evidence = {
        "sequence": sequence,
        "window": W,
        "witness_indices": wit,
        "witness_values": [float(s[i]) for i in wit],
        "extremal": {"tail_at_half": block_last, "block_quarter_to_half": block_prev,
                     "first_below_tol": int(below[0]) if below.size else None},
    }
    return cls, evidence


def _decide(condition_id, window_result, analytic=None, exact=False):
    cls, evidence = window_result
    if analytic is None:
        return Verdict(condition_id, cls, "window", exact, evidence)
    cls = SATISFIED_ANALYTIC if analytic else VIOLATED_ON_WINDOW
    return Verdict(condition_id, cls, "analytic", exact, evidence)


def replay_evidence(verdict: Verdict, values) -> bool:
    """Re-read ``values`` at the witness indices; True iff they match bit-exactly."""
    ev = verdict.evidence
    vals = np.asarray(values, dtype=float)
    return all(float(vals[i]) == v for i, v in zip(ev["witness_indices"], ev["witness_values"]))


def _check_nonneg(d):
    d = np.asarray(d, dtype=float)
    if np.any(d < -1e-12):
        n = int(np.argmax(d < -1e-12))
        raise NegativeDiagonalError(f"diagonal moment d[{n}] = {d[n]} is negative")
    return d


# ---------------------------------------------------------------------------
# sufficient conditions on the normalised diagonal


@_short_window_inconclusive("hypercyclic_sufficient")
def hypercyclicity_sufficient(d, cfg: CriteriaConfig | None = None, limits: Limits | None = None) -> Verdict:
    """``liminf_n a_nn = 0`` on the normalised diagonal ``d``.

    ``limits`` is the exact limit metadata of ``d`` (if known); it turns the
    verdict analytic.
    """
    cfg = cfg or CriteriaConfig()
    x, _ = _window(_check_nonneg(d), cfg, 2)
    analytic = None if limits is None else limits.liminf is Limit.ZERO
    return _decide("hypercyclic_sufficient", _liminf_window(x, cfg, "normalized_diagonal"), analytic)


@_short_window_inconclusive("mixing_sufficient")
def mixing_sufficient(d, cfg: CriteriaConfig | None = None, limits: Limits | None = None) -> Verdict:
    """``lim_n a_nn = 0`` on the normalised diagonal ``d``."""
    cfg = cfg or CriteriaConfig()
    x, _ = _window(_check_nonneg(d), cfg, 4)
    analytic = None if limits is None else limits.lim is Limit.ZERO
    return _decide("mixing_sufficient", _lim_window(x, cfg, "normalized_diagonal"), analytic)


def absolute_shells(A: CoefficientMatrix, window: int | None = None) -> np.ndarray:
    """``shell[j] = sum of |a[n, m]|`` over pairs with ``min(n, m) = j``."""
    W = A.order if window is None else min(window, A.order)
    a = np.abs(A.a[:W, :W])
    upper = np.triu(a, k=1).sum(axis=1) + np.tril(a, k=-1).sum(axis=0)
    return np.diagonal(a) + upper


def absolute_tails(A: CoefficientMatrix, window: int | None = None) -> np.ndarray:
    """``s[k] = sum_{n, m in [k, W)} |a[n, m]|``."""
    return tails_from_shells(absolute_shells(A, window))


@_short_window_inconclusive("chaotic_sufficient")
def chaos_sufficient(A: CoefficientMatrix, cfg: CriteriaConfig | None = None) -> Verdict:
    """Absolute tail sums of the coefficient matrix tend to zero.

    Absolute summability of ``sum a_nm`` implies F-summability, so this is a
    sufficient proxy for the chaos condition (they coincide for non-negative
    diagonal kernels).
    """
    cfg = cfg or CriteriaConfig()
    W = min(cfg.window, A.order)
    if W < 4:
        raise WindowTooShort(f"window of length {W} is too short (need 4)")
    s = absolute_tails(A, W)
    limits = A.beta.limits if A.beta is not None else None
    analytic = None if limits is None else limits.square_summable
    v = _decide("chaotic_sufficient", _tail_window(s, cfg, "absolute_tail"), analytic)
    v.evidence["proxy"] = "absolute summability (sufficient for F-summability)"
    return v


# ---------------------------------------------------------------------------
# exact characterisations for diagonal kernels


@_short_window_inconclusive("salas", exact=True)
def salas_characterization(beta: SequenceSpec, cfg: CriteriaConfig | None = None) -> Verdict:
    """``liminf beta_n = 0`` (evaluated on ``beta_n^2``, same zero set)."""
    cfg = cfg or CriteriaConfig()
    x = beta.squares(cfg.window)
    analytic = None if beta.limits is None else beta.limits.liminf is Limit.ZERO
    return _decide("salas", _liminf_window(x, cfg, "beta_squared"), analytic, exact=True)


@_short_window_inconclusive("costakis_sambarino", exact=True)
def costakis_sambarino(beta: SequenceSpec, cfg: CriteriaConfig | None = None) -> Verdict:
    """``lim beta_n = 0`` (evaluated on ``beta_n^2``)."""
    cfg = cfg or CriteriaConfig()
    x = beta.squares(cfg.window)
    analytic = None if beta.limits is None else beta.limits.lim is Limit.ZERO
    return _decide("costakis_sambarino", _lim_window(x, cfg, "beta_squared"), analytic, exact=True)


@_short_window_inconclusive("grosse_erdmann", exact=True)
def grosse_erdmann_chaos(beta: SequenceSpec, cfg: CriteriaConfig | None = None) -> Verdict:
    """``sum beta_n^2 < inf``."""
    cfg = cfg or CriteriaConfig()
    s = tails_from_shells(beta.squares(cfg.window))
    analytic = None if beta.limits is None else beta.limits.square_summable
    return _decide("grosse_erdmann", _tail_window(s, cfg, "beta_squared_tail"), analytic, exact=True)


@dataclass(frozen=True)
class DiagBoundedness:
    sup_ratio: float         # sup beta_n / beta_{n+1}
    limsup_ratio: float      # max of beta_{n+1} / beta_n over the second half of the window
    bounded: bool
    analytic_on_disc: bool
    basis: str


def mz_boundedness_diag(beta: SequenceSpec, window: int = 512, slack: float = DEFAULT_SLACK) -> DiagBoundedness:
    """Boundedness of ``M_z`` (``sup beta_n/beta_{n+1} < inf``) and analyticity
    (``limsup beta_{n+1}/beta_n <= 1``) on ``H^2(beta)``."""
    b = beta.values(window + 1)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        down = b[:-1] / b[1:]
        up = b[1:] / b[:-1]
    h = window // 2
    sup_ratio = float(np.max(down))
    limsup = float(np.max(up[h:])) if window > 1 else float(up[0])
    if beta.limits is not None:
        return DiagBoundedness(sup_ratio, limsup, beta.limits.ratio_bounded,
                               beta.limits.analytic_on_disc, "analytic")
    bounded = stable_sup(down, slack)
    return DiagBoundedness(sup_ratio, limsup, bounded,
                           bool(np.isfinite(limsup) and limsup <= 1 + slack), "window")


def boundedness_verdict(rep: DiagBoundedness, condition_id="boundedness", flag="bounded") -> Verdict:
    ok = getattr(rep, flag)
    if rep.basis == "analytic":
        cls = SATISFIED_ANALYTIC if ok else VIOLATED_ON_WINDOW
    else:
        cls = SATISFIED_ON_WINDOW if ok else VIOLATED_ON_WINDOW
    evidence = {"sup_ratio": rep.sup_ratio, "limsup_ratio": rep.limsup_ratio}
    return Verdict(condition_id, cls, rep.basis, False, evidence)


# ---------------------------------------------------------------------------
# tridiagonal kernels


def tridiagonal_diagonal(t: TridiagonalSpec) -> np.ndarray:
    """``|mu_0|^2, |mu_n|^2 + |nu_{n-1}|^2 (n >= 1)``."""
    mu, nu = np.abs(t.mu_values()), np.abs(t.nu_values())
    d = mu ** 2
    d[1:] += nu[:-1] ** 2
    return d


def tridiagonal_characterization(t: TridiagonalSpec, cfg: CriteriaConfig | None = None):
    """(hypercyclic, mixing) verdicts from the diagonal of a tridiagonal kernel.

    Both are if-and-only-if once the boundedness gate holds; if the gate
    fails on the window both verdicts are INCONCLUSIVE.  Under the gate
    ``|mu_n|^2 <= d_n <= (1 + R^2) |mu_n|^2``, so when ``mu`` is a named family
    its limit metadata decides both verdicts (basis "analytic", still
    conditional on the window gate).
    """
    cfg = cfg or CriteriaConfig()
    W = min(cfg.window, t.N)
    ids = ("tridiagonal_hypercyclic", "tridiagonal_mixing")
    if W < 4:
        return tuple(Verdict(cid, INCONCLUSIVE, "window", True, {"reason": f"window of length {W} is too short"})
                     for cid in ids)
    gate = tridiagonal_boundedness(t, W - 1, cfg.slack)
    gate_ev = {"sup_mu_ratio": gate.sup_mu_ratio, "sup_nu_ratio": gate.sup_nu_ratio,
               "mu_ratio_stable": gate.mu_ratio_stable, "gate_holds": gate.holds}
    if not gate.holds:
        return tuple(Verdict(cid, INCONCLUSIVE, "window", True, {"gate": gate_ev}) for cid in ids)
    lim = t.mu.limits
    d = tridiagonal_diagonal(t)[:W]
    hyp = _decide(ids[0], _liminf_window(d, cfg, "normalized_diagonal"),
                  None if lim is None else lim.liminf is Limit.ZERO, exact=True)
    mix = _decide(ids[1], _lim_window(d, cfg, "normalized_diagonal"),
                  None if lim is None else lim.lim is Limit.ZERO, exact=True)
    hyp.evidence["gate"] = gate_ev
    mix.evidence["gate"] = gate_ev
    return hyp, mix


# ---------------------------------------------------------------------------
# block kernels


def _check_vectors(test_vectors, d):
    vs = np.atleast_2d(np.asarray(test_vectors, dtype=complex))
    if vs.shape[0] == 0 or vs.shape[1] != d:
        raise ValueError(f"test vectors must be a non-empty list of length-{d} vectors")
    norms = np.linalg.norm(vs, axis=1)
    if np.any(np.abs(norms - 1) > 1e-12):
        raise ValueError("test vectors must have unit norm")
    return vs


def canonical_basis(d):
    return np.eye(d, dtype=complex)


def _block_limits(K: BlockCoefficientKernel, dominated_by_beta=False):
    # polynomial conjugates: A_0 A_0^* beta_n^2 <= C_nn <= M max_{j<=deg} beta_{n-j}^2,
    # so the liminf of ||C_nn|| is zero iff that of beta is (bounded ratios)
    if K.scalar is not None and K.scalar.beta is not None:
        return K.scalar.beta.limits
    if dominated_by_beta and K.beta is not None and K.beta.limits is not None \
            and K.beta.limits.analytic_on_disc:
        return K.beta.limits
    return None


def block_diagonal_profile(K: BlockCoefficientKernel, test_vectors=None) -> np.ndarray:
    """``max_eta <B[n][n] eta, eta>``; the operator norm when ``test_vectors`` is None."""
    blocks = K.diagonal_blocks()
    if test_vectors is None:
        return np.array([np.linalg.eigvalsh(b)[-1] for b in blocks])
    vs = _check_vectors(test_vectors, K.dim)
    q = np.einsum("ki,nij,kj->nk", vs.conj(), blocks, vs).real
    return q.max(axis=1)


@_short_window_inconclusive("block_hypercyclic_sufficient")
def block_hypercyclicity_sufficient(K: BlockCoefficientKernel, test_vectors=None,
                                    cfg: CriteriaConfig | None = None) -> Verdict:
    """Uniform liminf of ``<B[n][n] eta, eta>`` over the test set.

    One subsequence must serve every test vector, so the sequence checked is
    the maximum over the set.  ``test_vectors=None`` means the whole unit
    ball, for which the maximum is the operator norm of the PSD block.
    """
    cfg = cfg or CriteriaConfig()
    prof = block_diagonal_profile(K, test_vectors)
    x, _ = _window(prof, cfg, 2)
    lim = _block_limits(K, dominated_by_beta=True)
    analytic = None if lim is None else lim.liminf is Limit.ZERO
    name = "block_norm" if test_vectors is None else "block_max_over_test_vectors"
    return _decide("block_hypercyclic_sufficient", _liminf_window(x, cfg, name), analytic)


def _combine(condition_id, verdicts, analytic):
    classes = [v.classification for v in verdicts]
    if analytic is not None:
        cls = SATISFIED_ANALYTIC if analytic else VIOLATED_ON_WINDOW
        basis = "analytic"
    else:
        basis = "window"
        if VIOLATED_ON_WINDOW in classes:
            cls = VIOLATED_ON_WINDOW
        elif all(c.satisfied for c in classes):
            cls = SATISFIED_ON_WINDOW
        else:
            cls = INCONCLUSIVE
    return Verdict(condition_id, cls, basis, False,
                   {"per_vector": [v.evidence for v in verdicts]})


@_short_window_inconclusive("block_mixing_sufficient")
def block_mixing_sufficient(K: BlockCoefficientKernel, test_vectors=None,
                            cfg: CriteriaConfig | None = None) -> Verdict:
    """``lim <B[n][n] eta, eta> = 0`` for each test vector (canonical basis by default)."""
    cfg = cfg or CriteriaConfig()
    vs = _check_vectors(canonical_basis(K.dim) if test_vectors is None else test_vectors, K.dim)
    blocks = K.diagonal_blocks()
    per = []
    for v in vs:
        q = np.einsum("i,nij,j->n", v.conj(), blocks, v).real
        x, _ = _window(q, cfg, 4)
        per.append(_decide("mixing", _lim_window(x, cfg, "block_quadratic_form")))
    lim = _block_limits(K)
    return _combine("block_mixing_sufficient", per, None if lim is None else lim.lim is Limit.ZERO)


@_short_window_inconclusive("block_chaotic_sufficient")
def block_chaos_sufficient(K: BlockCoefficientKernel, test_vectors=None,
                           cfg: CriteriaConfig | None = None) -> Verdict:
    """Absolute tails of ``<B[n][m] eta, eta>`` for each test vector."""
    cfg = cfg or CriteriaConfig()
    vs = _check_vectors(canonical_basis(K.dim) if test_vectors is None else test_vectors, K.dim)
    W = min(cfg.window, K.order)
    per = []
    for v in vs:
        q = np.einsum("i,nmij,j->nm", v.conj(), K.B[:W, :W], v)
        s = absolute_tails(CoefficientMatrix(q), W)
        per.append(_decide("chaos", _tail_window(s, cfg, "block_absolute_tail")))
    lim = _block_limits(K)
    return _combine("block_chaotic_sufficient", per, None if lim is None else lim.square_summable)


# ---------------------------------------------------------------------------
# report container


@dataclass
class DynamicsReport:
    hypercyclic_sufficient: Verdict
    mixing_sufficient: Verdict
    chaotic_sufficient: Verdict
    exact_characterization: dict[str, Verdict] | None = None
    boundedness: Verdict | None = None
    analyticity: Verdict | None = None

    def verdicts(self) -> list[Verdict]:
        out = [self.hypercyclic_sufficient, self.mixing_sufficient, self.chaotic_sufficient]
        if self.exact_characterization:
            out.extend(self.exact_characterization[k] for k in sorted(self.exact_characterization))
        out.extend(v for v in (self.boundedness, self.analyticity) if v is not None)
        return out


def diagonal_limits(A: CoefficientMatrix) -> Limits | None:
    """Limit metadata of ``a_nn`` when ``A`` is a named diagonal family (``a_nn = beta_n^2``)."""
    return A.beta.limits if A.beta is not None else None


def scalar_sufficient(A: CoefficientMatrix, cfg: CriteriaConfig | None = None):
    """The three sufficient-condition verdicts for a scalar kernel."""
    cfg = cfg or CriteriaConfig()
    d = normalized_diagonal(A)
    lim = diagonal_limits(A)
    return (hypercyclicity_sufficient(d, cfg, lim), mixing_sufficient(d, cfg, lim),
            chaos_sufficient(A, cfg))
