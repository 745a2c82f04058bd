"""
Kernel spec files, analysis reports, orbit simulation and the verification suites.

Reports are plain JSON (``sort_keys``, two-space indent) so that two runs on
the same spec and config differ only in ``provenance.timestamp``.
"""

from __future__ import annotations

import copy
import csv
import datetime
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources

import jsonschema
import numpy as np

from . import criteria as cr
from . import oracles
from .constructions import (
    PolynomialSpec,
    TridiagonalSpec,
    block_polynomial_conjugate,
    conjugate_by_series,
    expand_znf_in_basis,
    geometric_series_coeffs,
    quasi_scalar,
    tridiagonal_boundedness,
    tridiagonal_coefficients,
    znf_norm_bound,
)
from .errors import KernelDynError, SpecError
from .kernel import (
    CoefficientMatrix,
    diagonal_coefficients,
    gram,
    normalized_diagonal,
    psd_check,
)
from .model import (
    annihilates,
    apply_adjoint,
    build_model,
    compression_growth,
    criterion_witness,
    eigenvector_check,
    orbit,
    periodic_point,
    unit,
)
from .seqdsl import ListSequence, NamedSequence, sequence_from_json

__version__ = "0.1.0"

ANALYZE_ORDER = 256
SIMULATE_ORDER = 64
CSV_COORDS = 8

SCALAR_KINDS = ("diagonal", "tridiagonal", "theta_conjugated", "polynomial_conjugated", "explicit_matrix")
BLOCK_KINDS = ("quasi_scalar", "block_polynomial")


class RefusedError(KernelDynError):
    """An operation declined because its precondition does not hold."""


class AnalysisError(KernelDynError):
    """Construction or criteria failure during ``analyze``; ``__cause__`` holds the original."""


# ---------------------------------------------------------------------------
# spec loading


def _schema(name):
    with resources.files("kerneldyn").joinpath("schemas", name).open("r") as fh:
        return json.load(fh)


def _location(err):
    path = "/".join(str(p) for p in err.absolute_path)
    return "$" + ("/" + path if path else "")


def validate_spec_json(obj, where="$"):
    validator = jsonschema.Draft202012Validator(_schema("kernel_spec.schema.json"))
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        if e.validator == "required":
            missing = e.message.split("'")[1] if "'" in e.message else e.message
            raise SpecError(f"missing required field {missing!r}", where + _location(e)[1:])
        raise SpecError(e.message, where + _location(e)[1:])
    if obj.get("kind") == "quasi_scalar":
        base = dict(obj["base"])
        if "order" in base:
            raise SpecError("base kernel takes its order from the outer spec", where + "/base/order")
        validate_spec_json(base, where + "/base")


def _complex(x):
    return complex(x[0], x[1]) if isinstance(x, list) else complex(x)


def _cmatrix(rows, where):
    if len({len(r) for r in rows}) != 1:
        raise SpecError("matrix rows have different lengths", where)
    return np.array([[_complex(v) for v in r] for r in rows], dtype=complex)


def _seq(obj, where):
    try:
        return sequence_from_json(obj)
    except KernelDynError as exc:
        raise SpecError(str(exc), where) from exc


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    order: int | None
    params: dict = field(repr=False)
    criteria: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)

    def with_order(self, N):
        raw = dict(self.raw, order=int(N))
        return parse_spec(raw)

    def criteria_config(self) -> cr.CriteriaConfig:
        return cr.CriteriaConfig(**self.criteria)


def parse_spec(obj, where="$") -> KernelSpec:
    """Validate a decoded spec object and parse its sequences."""
    validate_spec_json(obj, where)
    kind = obj["kind"]
    p = {}
    for key in ("beta", "mu", "nu", "mu_phase", "nu_phase"):
        if key in obj:
            p[key] = _seq(obj[key], f"{where}/{key}")
    if "series" in obj:
        p["series"] = np.array([_complex(v) for v in obj["series"]])
    if "poly" in obj:
        try:
            p["poly"] = PolynomialSpec(tuple(_complex(v) for v in obj["poly"]))
        except KernelDynError as exc:
            raise SpecError(str(exc), f"{where}/poly") from exc
        if p["poly"].coeffs[0] == 0:
            raise SpecError("constant coefficient must be non-zero", f"{where}/poly/0")
    if "blocks" in obj:
        try:
            p["blocks"] = PolynomialSpec(tuple(_cmatrix(b, f"{where}/blocks/{i}")
                                               for i, b in enumerate(obj["blocks"])))
        except KernelDynError as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(str(exc), f"{where}/blocks") from exc
    if "matrix" in obj:
        m = _cmatrix(obj["matrix"], f"{where}/matrix")
        if m.shape[0] != m.shape[1]:
            raise SpecError(f"matrix must be square, got {m.shape}", f"{where}/matrix")
        if m.shape[0] < 2:
            raise SpecError("matrix order must be at least 2", f"{where}/matrix")
        if "order" in obj and obj["order"] > m.shape[0]:
            raise SpecError(f"order {obj['order']} exceeds matrix size {m.shape[0]}", f"{where}/order")
        p["matrix"] = m
    if "base" in obj:
        p["base"] = parse_spec(obj["base"], f"{where}/base")
    if "dim" in obj:
        p["dim"] = int(obj["dim"])
    return KernelSpec(kind, obj.get("order"), p, dict(obj.get("criteria", {})), copy.deepcopy(obj))


def load_spec(path) -> KernelSpec:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"cannot read spec: {exc.strerror}", str(path)) from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from exc
    return parse_spec(obj)


# ---------------------------------------------------------------------------
# building kernels


@dataclass(eq=False)
class Built:
    spec: KernelSpec
    N: int
    A: CoefficientMatrix | None = None        # scalar kernel (or quasi-scalar base)
    K: object = None                          # BlockCoefficientKernel
    base_beta: object = None                  # weights of an underlying diagonal kernel
    tridiagonal: TridiagonalSpec | None = None
    base: "Built | None" = None


def _default_order(spec, default):
    if spec.order is not None:
        return spec.order
    if spec.kind == "explicit_matrix":
        return spec.params["matrix"].shape[0]
    return default


def build(spec: KernelSpec, N: int | None = None) -> Built:
    N = _default_order(spec, ANALYZE_ORDER) if N is None else int(N)
    if N < 2:
        raise SpecError("order must be at least 2", "$/order")
    p, kind = spec.params, spec.kind
    if kind == "diagonal":
        return Built(spec, N, A=diagonal_coefficients(p["beta"], N), base_beta=p["beta"])
    if kind == "tridiagonal":
        t = TridiagonalSpec(p["mu"], p["nu"], N, p.get("mu_phase"), p.get("nu_phase"))
        return Built(spec, N, A=tridiagonal_coefficients(t), tridiagonal=t)
    if kind == "theta_conjugated":
        series = p.get("series")
        if series is None:
            series = geometric_series_coeffs(N)
        base = diagonal_coefficients(p["beta"], N)
        return Built(spec, N, A=conjugate_by_series(base, series), base_beta=p["beta"])
    if kind == "polynomial_conjugated":
        base = diagonal_coefficients(p["beta"], N)
        return Built(spec, N, A=conjugate_by_series(base, np.array(p["poly"].coeffs)), base_beta=p["beta"])
    if kind == "explicit_matrix":
        m = p["matrix"]
        if N > m.shape[0]:
            raise SpecError(f"order {N} exceeds matrix size {m.shape[0]}", "$/order")
        return Built(spec, N, A=CoefficientMatrix(m[:N, :N]))
    if kind == "quasi_scalar":
        inner = build(p["base"], N)
        return Built(spec, N, A=inner.A, K=quasi_scalar(inner.A, p["dim"]),
                     base_beta=inner.base_beta, tridiagonal=inner.tridiagonal, base=inner)
    if kind == "block_polynomial":
        return Built(spec, N, K=block_polynomial_conjugate(p["beta"], p["blocks"], N), base_beta=p["beta"])
    raise SpecError(f"unknown kind {kind!r}", "$/kind")


# ---------------------------------------------------------------------------
# analysis


def _exact_verdicts(b: Built, cfg):
    """Characterisations that hold for this kind, keyed by condition id."""
    kind = b.spec.kind if b.base is None else b.base.spec.kind
    out = {}
    if kind in ("diagonal", "theta_conjugated", "polynomial_conjugated") and b.spec.kind != "block_polynomial":
        beta = b.base_beta
        out["salas"] = cr.salas_characterization(beta, cfg)
        out["costakis_sambarino"] = cr.costakis_sambarino(beta, cfg)
        out["grosse_erdmann"] = cr.grosse_erdmann_chaos(beta, cfg)
    elif b.spec.kind == "block_polynomial":
        out["salas"] = cr.salas_characterization(b.base_beta, cfg)
    elif kind == "tridiagonal":
        hyp, mix = cr.tridiagonal_characterization(b.tridiagonal, cfg)
        out[hyp.condition_id] = hyp
        out[mix.condition_id] = mix
    return out


def _boundedness(b: Built, cfg):
    if b.base_beta is not None:
        rep = cr.mz_boundedness_diag(b.base_beta, cfg.window, cfg.slack)
        return (cr.boundedness_verdict(rep), cr.boundedness_verdict(rep, "analytic_on_disc", "analytic_on_disc"))
    if b.tridiagonal is not None:
        g = tridiagonal_boundedness(b.tridiagonal, min(cfg.window, b.N) - 1, cfg.slack)
        cls = cr.SATISFIED_ON_WINDOW if g.holds else cr.VIOLATED_ON_WINDOW
        ev = {"sup_mu_ratio": g.sup_mu_ratio, "sup_nu_ratio": g.sup_nu_ratio,
              "mu_ratio_stable": g.mu_ratio_stable, "window": g.window}
        return cr.Verdict("boundedness", cls, "window", False, ev), None
    return None, None


def dynamics(b: Built, cfg: cr.CriteriaConfig) -> cr.DynamicsReport:
    if b.K is not None:
        hyp = cr.block_hypercyclicity_sufficient(b.K, None, cfg)
        mix = cr.block_mixing_sufficient(b.K, None, cfg)
        chaos = cr.block_chaos_sufficient(b.K, None, cfg)
    else:
        hyp, mix, chaos = cr.scalar_sufficient(b.A, cfg)
    exact = _exact_verdicts(b, cfg)
    if b.tridiagonal is not None and b.K is None and exact["tridiagonal_hypercyclic"].basis == "analytic":
        # same diagonal, same limit metadata: keep the sufficient verdicts in step
        d = normalized_diagonal(b.A)
        lim = b.tridiagonal.mu.limits
        hyp, mix = cr.hypercyclicity_sufficient(d, cfg, lim), cr.mixing_sufficient(d, cfg, lim)
    bnd, ana = _boundedness(b, cfg)
    return cr.DynamicsReport(hyp, mix, chaos, exact or None, bnd, ana)


def _sufficient_not_necessary(rep: cr.DynamicsReport):
    ex = rep.exact_characterization or {}
    exact_h = ex.get("salas") or ex.get("tridiagonal_hypercyclic")
    if exact_h is None:
        return None
    return bool(exact_h.satisfied and not rep.hypercyclic_sufficient.satisfied)


def _structural(b: Built):
    out = []
    if b.K is not None and b.A is None:
        K = b.K
        N, d = K.order, K.dim
        flat = K.B.transpose(0, 2, 1, 3).reshape(N * d, N * d)
        psd = psd_check(flat)
        out.append({"check": "hermitian_residual", "value": K.hermitian_residual(),
                    "passed": K.hermitian_residual() <= 1e-12})
        out.append({"check": "gram_psd", "value": psd.min_eigenvalue, "passed": psd.is_psd})
        return out
    A = b.A
    res = A.hermitian_residual()
    out.append({"check": "hermitian_residual", "value": res, "passed": res <= 1e-12})
    psd = psd_check(A)
    out.append({"check": "gram_psd", "value": psd.min_eigenvalue, "passed": psd.is_psd})
    try:
        G = gram(A)
        out.append({"check": "gram_positive_definite", "value": G.min_eigenvalue,
                    "max_eigenvalue": G.max_eigenvalue, "passed": True})
    except KernelDynError as exc:
        out.append({"check": "gram_positive_definite", "value": getattr(exc, "smallest_eigenvalue", None),
                    "passed": False, "error": str(exc)})
    return out


def _diagnostics(b: Built, rep, W):
    diag = {"order": b.N, "effective_window": W,
            "sufficient_not_necessary": _sufficient_not_necessary(rep)}
    if b.A is None:
        diag["model"] = "not built: block polynomial kernels are analysed through their diagonal blocks"
        C = b.K.diagonal_blocks()
        diag["block_diagonal_norm_head"] = [float(np.linalg.norm(c, 2)) for c in C[:CSV_COORDS]]
        return diag
    diag["normalized_diagonal_head"] = [float(x) for x in normalized_diagonal(b.A)[:CSV_COORDS]]
    try:
        m = build_model(b.A)
    except KernelDynError as exc:
        diag["model"] = f"not built: {exc}"
        return diag
    diag["compression"] = compression_growth(m)
    diag["annihilation"] = annihilates(m)
    return diag


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, (complex, np.complexfloating)):
        return [_jsonable(x.real), _jsonable(x.imag)]
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def _verdict_rows(rep: cr.DynamicsReport, applies_to_base):
    rows = []
    for v in (rep.hypercyclic_sufficient, rep.mixing_sufficient, rep.chaotic_sufficient):
        rows.append(dict(v.to_json(), role="sufficient"))
    for key in sorted(rep.exact_characterization or {}):
        row = dict(rep.exact_characterization[key].to_json(), role="exact")
        if applies_to_base:
            row["applies_to"] = "base weights (unitarily equivalent operator)"
        rows.append(row)
    for v in (rep.boundedness, rep.analyticity):
        if v is not None:
            rows.append(dict(v.to_json(), role="boundedness"))
    return rows


def effective_config(spec: KernelSpec, config: cr.CriteriaConfig | None, N: int) -> cr.CriteriaConfig:
    cfg = config if config is not None else spec.criteria_config()
    return cfg.with_window(min(cfg.window, N))


def analyze(spec: KernelSpec, config: cr.CriteriaConfig | None = None, order: int | None = None,
            timestamp: str | None = None) -> dict:
    """Run every applicable check and return the report as a JSON-ready dict."""
    N = _default_order(spec, ANALYZE_ORDER) if order is None else int(order)
    try:
        b = build(spec, N)
        cfg = effective_config(spec, config, N)
        rep = dynamics(b, cfg)
    except SpecError:
        raise
    except KernelDynError as exc:
        raise AnalysisError(f"{spec.kind} kernel at order {N}: {exc}") from exc
    applies_to_base = spec.kind in ("theta_conjugated", "polynomial_conjugated", "block_polynomial") or (
        spec.kind == "quasi_scalar" and spec.params["base"].kind in ("theta_conjugated", "polynomial_conjugated"))
    ts = timestamp or datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    report = {
        "spec": dict(spec.raw, order=N),
        "verdicts": _verdict_rows(rep, applies_to_base),
        "structural": _structural(b),
        "diagnostics": _diagnostics(b, rep, cfg.window),
        "provenance": {"tool": "kerneldyn", "version": __version__, "config": cfg.to_json(),
                       "timestamp": ts},
    }
    return _jsonable(report)


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def validate_report(report):
    jsonschema.validate(report, _schema("report.schema.json"))


def write_atomic(path, text):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# replay of verdict evidence


def _sequence_values(b: Built, row, per_vector=None):
    seq = row["evidence"]["sequence"] if per_vector is None else per_vector["sequence"]
    W = (row["evidence"] if per_vector is None else per_vector)["window"]
    cid = row["condition_id"]
    if seq == "normalized_diagonal":
        if cid.startswith("tridiagonal_"):
            return cr.tridiagonal_diagonal(b.tridiagonal)[:W]
        return normalized_diagonal(b.A)[:W]
    if seq == "absolute_tail":
        return cr.absolute_tails(b.A, W)
    if seq == "beta_squared":
        return b.base_beta.squares(W)
    if seq == "beta_squared_tail":
        return cr.tails_from_shells(b.base_beta.squares(W))
    if seq in ("block_norm",):
        return cr.block_diagonal_profile(b.K)[:W]
    raise KeyError(seq)


def replay(spec: KernelSpec, report) -> dict:
    """Re-derive every verdict's sequence and re-read it at the witness indices.

    Returns ``{condition_id: bool}``; verdicts without witnesses are omitted.
    """
    b = build(spec, report["spec"]["order"])
    out = {}
    for row in report["verdicts"]:
        ev = row["evidence"]
        if "per_vector" in ev:
            ok = True
            blocks = b.K.diagonal_blocks()
            for k, pv in enumerate(ev["per_vector"]):
                W = pv["window"]
                if pv["sequence"] == "block_quadratic_form":
                    vals = blocks[:W, k, k].real
                elif pv["sequence"] == "block_absolute_tail":
                    q = b.K.B[:W, :W, k, k]
                    vals = cr.absolute_tails(CoefficientMatrix(q), W)
                else:
                    raise KeyError(pv["sequence"])
                ok &= _replay_one(pv, vals)
            out[row["condition_id"]] = bool(ok)
        elif "witness_indices" in ev:
            out[row["condition_id"]] = _replay_one(ev, _sequence_values(b, row))
    return out


def _replay_one(ev, vals):
    vals = np.asarray(vals, dtype=float)
    return all(_jsonable(float(vals[i])) == v for i, v in zip(ev["witness_indices"], ev["witness_values"]))


# ---------------------------------------------------------------------------
# simulation


def parse_vector(text: str, N: int) -> np.ndarray:
    """``"5"`` is ``Khat_5``; ``"1,0.5,2-1j"`` are coordinates."""
    text = text.strip()
    if "," not in text:
        try:
            return unit(int(text), N)
        except ValueError:
            pass
    try:
        c = [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise SpecError(f"cannot parse vector {text!r}", "--vector") from exc
    if len(c) > N:
        raise SpecError(f"vector has {len(c)} coordinates but order is {N}", "--vector")
    out = np.zeros(N, dtype=complex)
    out[:len(c)] = c
    return out


@dataclass
class Simulation:
    orbit_csv: str
    periodic_csv: str | None
    norms: np.ndarray
    periodic: list


def _fmt(x):
    return repr(float(x))


def simulate(spec: KernelSpec, vector, steps: int, periods=(), order: int | None = None,
             config: cr.CriteriaConfig | None = None) -> Simulation:
    N = _default_order(spec, SIMULATE_ORDER) if order is None else int(order)
    b = build(spec, N)
    if b.A is None:
        raise SpecError("simulation needs a scalar (or quasi-scalar) kernel", "$/kind")
    m = build_model(b.A)
    v = parse_vector(vector, N) if isinstance(vector, str) else m.coords(vector)
    orb = orbit(m, v, steps, trace=True)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    head = ["step", "norm"]
    for j in range(CSV_COORDS):
        head += [f"coord_{j}_re", f"coord_{j}_im"]
    w.writerow(head)
    for step in range(steps + 1):
        row = [step, _fmt(orb.norms[step])]
        for j in range(CSV_COORDS):
            c = orb.trace[step, j] if j < N else 0j
            row += [_fmt(c.real), _fmt(c.imag)]
        w.writerow(row)
    periodic, pcsv = [], None
    if periods:
        cfg = effective_config(spec, config, N)
        pbuf = io.StringIO()
        pw = csv.writer(pbuf, lineterminator="\n")
        pw.writerow(["p", "residual", "boundary_bound", "distance_to_x"])
        for p in periods:
            pp = periodic_point(m, v, int(p), cfg)
            periodic.append((int(p), pp))
            pw.writerow([int(p), _fmt(pp.residual), _fmt(pp.boundary_bound), _fmt(pp.distance_to_x)])
        pcsv = pbuf.getvalue()
    return Simulation(buf.getvalue(), pcsv, orb.norms, periodic)


# ---------------------------------------------------------------------------
# counterexample demo


def demo_counterexample(beta, N: int = ANALYZE_ORDER, config: cr.CriteriaConfig | None = None) -> dict:
    """Diagonal kernel conjugated by ``1/(1-z)``: hypercyclic, yet ``a_nn`` stays away from zero.

    Refuses unless the base weights pass the exact hypercyclicity test.
    """
    cfg = (config or cr.CriteriaConfig()).with_window(N)
    base = cr.salas_characterization(beta, cfg)
    if not base.satisfied:
        raise RefusedError(
            f"base weights {beta.describe()} do not give a hypercyclic backward shift "
            f"({base.classification.value}); the contrast needs a hypercyclic base")
    A = conjugate_by_series(diagonal_coefficients(beta, N), geometric_series_coeffs(N))
    d = normalized_diagonal(A)
    partial = np.cumsum(beta.squares(N))
    suff = cr.hypercyclicity_sufficient(d, cfg)
    monotone = bool(np.all(np.diff(d) >= -1e-12 * np.abs(d[1:])))
    bounded_below = bool(d.min() >= beta.square(0) * (1 - 1e-12))
    if not (monotone and bounded_below):
        raise RefusedError("conjugated diagonal is not non-decreasing; input weights are invalid")
    return _jsonable({
        "beta": beta.describe(),
        "order": N,
        "base_salas": base.to_json(),
        "conjugated_sufficient": suff.to_json(),
        "conjugated_diagonal": [float(x) for x in d],
        "partial_sums": [float(x) for x in partial],
        "max_deviation_from_partial_sums": float(np.max(np.abs(d - partial) / partial)),
        "monotone": monotone,
        "liminf_lower_bound": float(beta.square(0)),
    })


# ---------------------------------------------------------------------------
# verification suites

SUITES = ("structural", "oracles", "criteria-consistency", "dynamics")


def builtin_kernels(N=64):
    """The six reference kernels used by ``verify``."""
    dia = {name: {"kind": "diagonal", "beta": beta, "order": N}
           for name, beta in (("hardy", {"named": "hardy"}), ("bergman", {"named": "bergman"}),
                              ("dirichlet", {"named": "dirichlet"}),
                              ("geometric(0.5)", {"named": "geometric", "r": 0.5}))}
    dia["theta-power(-1)"] = {"kind": "theta_conjugated", "beta": {"named": "power", "s": -1}, "order": N}
    dia["tridiagonal"] = {"kind": "tridiagonal", "mu": {"expr": "1/(n+1)"},
                          "nu": {"expr": "1/(2*(n+2))"}, "order": N}
    return {k: parse_spec(v) for k, v in dia.items()}


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


def _rng():
    return np.random.default_rng(20240611)


def _structural_checks(N=64):
    out = []
    rng = _rng()
    for name, spec in builtin_kernels(N).items():
        b = build(spec, N)
        A = b.A
        res = A.hermitian_residual()
        out.append(Check("structural", f"{name}: hermitian", res <= 1e-12, f"residual {res:.2e}"))
        m = build_model(A)
        out.append(Check("structural", f"{name}: gram positive definite", True,
                         f"min eigenvalue {m.gram.min_eigenvalue:.3e}"))
        ok = all(np.array_equal(apply_adjoint(m, unit(n, N)), unit(n - 1, N) if n else np.zeros(N, complex))
                 for n in range(N))
        out.append(Check("structural", f"{name}: backward shift exact", ok and annihilates(m)))
        worst_norm = worst_conj = 0.0
        for _ in range(100):
            c = rng.standard_normal(N) + 1j * rng.standard_normal(N)
            y = m.U @ c
            n1, n2 = m.norm(c), float(np.linalg.norm(y))
            worst_norm = max(worst_norm, abs(n1 - n2) / n2)
            lhs, rhs = m.on_matrix @ y, m.U @ apply_adjoint(m, c)
            worst_conj = max(worst_conj, float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), 1e-300)))
        out.append(Check("structural", f"{name}: norm consistency", worst_norm <= 1e-10, f"{worst_norm:.2e}"))
        out.append(Check("structural", f"{name}: shift conjugation", worst_conj <= 1e-10, f"{worst_conj:.2e}"))
        bad = []
        for w in (0, 0.3, 0.5 + 0.2j, 0.9):
            e = eigenvector_check(m, w)
            if not e.residual <= e.bound * (1 + 1e-9) or (w == 0 and e.residual != 0):
                bad.append(f"w={w}: {e.residual:.3e} > {e.bound:.3e}")
        out.append(Check("structural", f"{name}: eigenvector relation", not bad, "; ".join(bad)))
    return out


def _rel(x, y):
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y))) / max(1.0, float(np.max(np.abs(y)))))


def _oracle_checks(N=32):
    out = []
    beta = NamedSequence("power", -1.0)
    D = diagonal_coefficients(beta, N)
    th = conjugate_by_series(D, geometric_series_coeffs(N))
    ref = oracles.series_conjugation(np.ones(N), D.a, N)
    e = _rel(th.a, ref)
    out.append(Check("oracles", "theta conjugation vs triple Cauchy product", e <= 1e-10, f"{e:.2e}"))
    for name in ("hardy", "bergman", "dirichlet"):
        s = NamedSequence(name)
        G = gram(diagonal_coefficients(s, N)).G
        ref = oracles.diagonal_gram(list(s.squares(N)))
        e = _rel(G, ref)
        out.append(Check("oracles", f"{name}: gram vs weighted inner products", e <= 1e-12, f"{e:.2e}"))
    spec = builtin_kernels(N)["tridiagonal"]
    b = build(spec, N)
    t = b.tridiagonal
    ref = oracles.tridiagonal_by_basis(list(t.mu_values()), list(t.nu_values()), N)
    e = _rel(b.A.a, ref)
    out.append(Check("oracles", "tridiagonal kernel vs basis expansion", e <= 1e-12, f"{e:.2e}"))
    worst = 0.0
    for n in range(N - 2):
        a1 = expand_znf_in_basis(t, n)
        a2 = oracles.znf_coefficients_by_solve(list(t.mu_values()), list(t.nu_values()), n, N)
        worst = max(worst, _rel(a1, a2))
    out.append(Check("oracles", "z^n f expansion vs triangular solve", worst <= 1e-12, f"{worst:.2e}"))
    rng = _rng()
    for d, deg in ((2, 1), (3, 2), (4, 3)):
        coeffs = [rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(deg + 1)]
        coeffs[0] = coeffs[0] + 3 * np.eye(d)
        K = block_polynomial_conjugate(NamedSequence("dirichlet"), PolynomialSpec(tuple(coeffs)), N)
        ref = oracles.block_diagonal_formula(coeffs, NamedSequence("dirichlet").squares(N))
        e = _rel(K.diagonal_blocks(), ref)
        out.append(Check("oracles", f"block diagonal formula d={d}", e <= 1e-12, f"{e:.2e}"))
    A = tridiagonal_coefficients(t)
    e = _rel(cr.absolute_tails(A, N), oracles.absolute_tail_sums(A.a, N))
    out.append(Check("oracles", "absolute tails vs direct sums", e <= 1e-12, f"{e:.2e}"))
    return out


def _consistency_checks(N=256):
    out = []
    cfg = cr.CriteriaConfig().with_window(N)
    families = [NamedSequence("hardy"), NamedSequence("bergman"), NamedSequence("dirichlet"),
                NamedSequence("geometric", 0.5), NamedSequence("power", -1.0)]
    for beta in families:
        A = diagonal_coefficients(beta, N)
        hyp, mix, chaos = cr.scalar_sufficient(A, cfg)
        pairs = ((hyp, cr.salas_characterization(beta, cfg)),
                 (mix, cr.costakis_sambarino(beta, cfg)),
                 (chaos, cr.grosse_erdmann_chaos(beta, cfg)))
        # the same comparison with limit metadata stripped, so both sides read the window
        plain = ListSequence(tuple(beta.values(N)))
        d = normalized_diagonal(A)
        windowed = ((cr.hypercyclicity_sufficient(d, cfg), cr.salas_characterization(plain, cfg)),
                    (cr.mixing_sufficient(d, cfg), cr.costakis_sambarino(plain, cfg)),
                    (cr.chaos_sufficient(CoefficientMatrix(A.a), cfg), cr.grosse_erdmann_chaos(plain, cfg)))
        for tag, group in (("", pairs), (" (window)", windowed)):
            for suff, exact in group:
                ok = suff.classification == exact.classification
                out.append(Check("criteria-consistency",
                                 f"{beta.describe()}: {suff.condition_id} vs {exact.condition_id}{tag}",
                                 ok, f"{suff.classification.value} / {exact.classification.value}"))
    return out


def _dynamics_checks(N=64):
    out = []
    kernels = builtin_kernels(N)
    hardy = build_model(build(kernels["hardy"], N).A)
    norms = orbit(hardy, unit(5, N), 10).norms
    out.append(Check("dynamics", "hardy orbit of Khat_5", np.array_equal(norms, [1] * 6 + [0] * 5)))
    dirichlet = build_model(build(kernels["dirichlet"], N).A)
    worst, exact = 0.0, True
    for k in range(N):
        w = criterion_witness(dirichlet, unit(0, 1), k)
        worst = max(worst, abs(w.norm ** 2 - 1 / (k + 1)) * (k + 1))
        exact &= w.exact
    out.append(Check("dynamics", "dirichlet witness norms", worst <= 1e-12 and exact, f"{worst:.2e}"))
    geo = build_model(diagonal_coefficients(NamedSequence("geometric", 2 ** -0.5), N))
    prev, bad = math.inf, []
    for p in (1, 2, 4, 8, 16):
        pp = periodic_point(geo, unit(0, N), p)
        if not pp.residual <= pp.boundary_bound * (1 + 1e-9):
            bad.append(f"p={p}: residual above boundary bound")
        if not pp.distance_to_x < prev:
            bad.append(f"p={p}: distance not decreasing")
        prev = pp.distance_to_x
    out.append(Check("dynamics", "periodic points (geometric)", not bad, "; ".join(bad)))
    t = build(kernels["tridiagonal"], N).tridiagonal
    ok = all(znf_norm_bound(t, n).holds for n in range(N - 2))
    out.append(Check("dynamics", "tridiagonal z^n f bound", ok))
    cfg = cr.CriteriaConfig().with_window(N)
    for name in ("hardy", "dirichlet", "geometric(0.5)"):
        b = build(kernels[name], N)
        m = build_model(b.A)
        hyp = cr.hypercyclicity_sufficient(normalized_diagonal(b.A), cfg)
        # along the recorded subsequence the witness norm^2 is the diagonal itself
        k = hyp.evidence["witness_indices"][-1]
        decays = criterion_witness(m, unit(0, 1), k).norm ** 2 < cfg.tol
        out.append(Check("dynamics", f"{name}: witness decay matches verdict",
                         decays == hyp.satisfied, f"{hyp.classification.value}"))
    return out


def verify(suite: str = "all") -> list[Check]:
    runners = {"structural": _structural_checks, "oracles": _oracle_checks,
               "criteria-consistency": _consistency_checks, "dynamics": _dynamics_checks}
    if suite == "all":
        names = SUITES
    elif suite in runners:
        names = (suite,)
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    out = []
    for n in names:
        try:
            out.extend(runners[n]())
        except Exception as exc:  # a crashing suite is a failed check, not an abort
            out.append(Check(n, "suite raised", False, f"{type(exc).__name__}: {exc}"))
    return out
