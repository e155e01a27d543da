"""Uncertainty relations evaluated as ``lhs >= rhs`` reports.

Every function takes a state (Gaussian or Fock) plus whatever quadratures the
relation needs and returns a :class:`RelationReport`. Entropies use the
analytic path for Gaussian states and the grid path for Fock states.

Entropic reports carry the matching entropy-power and variance forms in
``meta["entropy_power"]`` and ``meta["variance"]``, expressed against the same
right-hand side so that ``variance.lhs >= entropy_power.lhs >= rhs`` can be
checked directly.

Bounds that collapse to ``-inf`` (vanishing commutator determinant) do not
raise: the report has ``degenerate=True``, ``slack=+inf`` and is never
``saturated``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .entropy import (
    entropy_power,
    gaussian_entropy,
    gaussian_renyi_entropy,
    quadrature_pdf,
    relative_entropy_to_gaussian,
    renyi_entropy,
)
from .quadratures import (
    QuadratureSet,
    commutator_matrix,
    equidistributed_set,
    gamma_yz,
    observables_moments,
    p_quadratures,
    pairwise_commuting,
    rotated_quadrature,
    state_moments,
    wedge_norm,
    x_quadratures,
)
from .states import FockState, GaussianState
from .symplectic import symplectic_form, williamson

__all__ = [
    "RelationReport",
    "ANALYTIC_TOL",
    "GRID_TOL",
    "LN_PI_E",
    "quadrature_entropy",
    "heisenberg",
    "lifted_heisenberg",
    "robertson_schrodinger",
    "simon_physicality",
    "robertson_m",
    "kw_product",
    "bbm",
    "renyi_ccv",
    "tight_ccv",
    "guanlei",
    "huang",
    "vector_eur",
    "renyi_vector_eur",
    "tight_vector_eur",
    "conjecture1",
    "conjecture2",
    "conjecture3",
    "conjecture4",
    "RELATIONS",
    "PROVEN",
    "evaluate",
]

ANALYTIC_TOL = 1e-9
GRID_TOL = 1e-5
LN_PI_E = math.log(math.pi * math.e)
_ZERO_DET = 1e-12


def _encode(value):
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isfinite(value):
            return value
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return _encode(value.tolist())
    return value


def _decode(value):
    if isinstance(value, dict):
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    if value in ("inf", "-inf", "nan"):
        return float(value)
    return value


@dataclass
class RelationReport:
    """Outcome of one relation on one state.

    Non-finite numbers serialise as the strings ``"inf"``, ``"-inf"``, ``"nan"``
    so the JSON stays standard.
    """

    id: str
    lhs: float
    rhs: float
    slack: float
    saturated: bool
    degenerate: bool = False
    tolerance: float = ANALYTIC_TOL
    path: str = "analytic"
    meta: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        return not self.degenerate and self.slack < -self.tolerance

    def to_dict(self) -> dict:
        return _encode(asdict(self))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "RelationReport":
        return cls(**_decode(dict(data)))


def _path(state) -> tuple[str, float]:
    if isinstance(state, GaussianState):
        return "analytic", ANALYTIC_TOL
    if isinstance(state, FockState):
        return "grid", GRID_TOL
    raise TypeError(f"unsupported state type {type(state).__name__}")


def _report(rid, state, lhs, rhs, meta=None, degenerate=False, tolerance=None) -> RelationReport:
    path, tol = _path(state)
    tol = tol if tolerance is None else tolerance
    lhs, rhs = float(lhs), float(rhs)
    if degenerate or rhs == -math.inf:
        degenerate = True
        slack = math.inf
    else:
        slack = lhs - rhs
    saturated = (not degenerate) and abs(slack) <= tol
    return RelationReport(rid, lhs, rhs, slack, bool(saturated), bool(degenerate), tol, path, meta or {})


def _form(lhs, rhs) -> dict:
    return {"lhs": float(lhs), "rhs": float(rhs)}


def _safe_log(value: float) -> float:
    return math.log(value) if value > 0 else -math.inf


def quadrature_entropy(state, Q: QuadratureSet, alpha: float = 1.0) -> float:
    """Joint (Renyi) entropy of the commuting quadratures ``Q`` on ``state``."""
    if isinstance(state, GaussianState):
        return gaussian_renyi_entropy(Q.coeffs @ state.cov @ Q.coeffs.T, alpha)
    return renyi_entropy(quadrature_pdf(state, Q), alpha)


def _variances(state, R: QuadratureSet) -> np.ndarray:
    _, cov = state_moments(state)
    return np.einsum("ij,jk,ik->i", R.coeffs, cov, R.coeffs)


def _single_rows(R: QuadratureSet):
    return [R.row(i) for i in range(R.n_out)]


def _renyi_offset(alpha: float) -> float:
    if math.isinf(alpha):
        return 0.0
    return 0.5 if alpha == 1 else math.log(alpha) / (2 * (alpha - 1))


def _check_conjugate(alpha: float, beta: float):
    if alpha <= 0 or beta <= 0:
        raise ValueError("Renyi orders must be positive")
    if abs(1 / alpha + 1 / beta - 2) > 1e-12:
        raise ValueError(f"orders must satisfy 1/alpha + 1/beta = 2, got alpha={alpha}, beta={beta}")


# ---------------------------------------------------------------------------
# variance-based relations


def heisenberg(state) -> RelationReport:
    """``prod_k sigma_{x_k}^2 sigma_{p_k}^2 >= 1/4^n``."""
    _, cov = state_moments(state)
    n = state.n
    var = np.diag(cov)
    lhs = float(np.prod(var))
    return _report("heisenberg", state, lhs, 0.25**n, {"sigma2_x": var[:n], "sigma2_p": var[n:]})


def lifted_heisenberg(state) -> RelationReport:
    """``sigma_x^2 sigma_p^2 >= exp(2 D(x||x_G) + 2 D(p||p_G)) / 4`` (one mode).

    ``D`` is the relative entropy to the Gaussian of equal variance, zero on
    the analytic path.
    """
    if state.n != 1:
        raise ValueError("the lifted Heisenberg relation is stated for one mode")
    _, cov = state_moments(state)
    if isinstance(state, GaussianState):
        dx = dp = 0.0
    else:
        dx = relative_entropy_to_gaussian(quadrature_pdf(state, x_quadratures(1)))
        dp = relative_entropy_to_gaussian(quadrature_pdf(state, p_quadratures(1)))
    rhs = 0.25 * math.exp(2 * dx + 2 * dp)
    return _report("lifted_heisenberg", state, cov[0, 0] * cov[1, 1], rhs, {"D_x": dx, "D_p": dp})


def robertson_schrodinger(state) -> RelationReport:
    """``det gamma >= 1/4^n``."""
    _, cov = state_moments(state)
    return _report("robertson_schrodinger", state, np.linalg.det(cov), 0.25**state.n)


def simon_physicality(state) -> RelationReport:
    """Smallest symplectic eigenvalue against 1/2."""
    _, cov = state_moments(state)
    try:
        nu = williamson(cov)
    except ValueError:
        # not positive definite: fall back to the raw spectrum of i J gamma
        ev = np.abs(np.linalg.eigvals(1j * symplectic_form(state.n) @ cov))
        nu = np.sort(ev)[::-2]
    return _report("simon_physicality", state, float(np.min(nu)), 0.5, {"nu": nu})


def robertson_m(state, R: QuadratureSet) -> RelationReport:
    """``det Gamma >= det C`` for ``m`` observables, with the weak form in meta."""
    G, C = observables_moments(state, R)
    m = R.n_out
    det_c = 0.0 if m % 2 else max(float(np.linalg.det(C)), 0.0)
    prod_var = float(np.prod(np.diag(G)))
    meta = {"m": m, "det_C": det_c, "weak": _form(prod_var, det_c)}
    return _report("robertson_m", state, np.linalg.det(G), det_c, meta, degenerate=det_c <= _ZERO_DET * 4.0**-m)


def kw_product(state, R: QuadratureSet) -> RelationReport:
    """``prod sigma_i^2 >= (|a ^ b| / m)^m`` for single-mode observables."""
    if R.n_modes != 1:
        raise ValueError("the wedge-product bound applies to one-mode observables")
    m = R.n_out
    wedge = wedge_norm(R.a[:, 0], R.ap[:, 0])
    lhs = float(np.prod(_variances(state, R)))
    return _report("kw_product", state, lhs, (wedge / m) ** m, {"m": m, "wedge": wedge}, degenerate=wedge == 0)


# ---------------------------------------------------------------------------
# entropic relations for canonically conjugate vectors


def _xp_entropies(state):
    n = state.n
    return quadrature_entropy(state, x_quadratures(n)), quadrature_entropy(state, p_quadratures(n))


def bbm(state) -> RelationReport:
    """``h(x) + h(p) >= n ln(pi e)``."""
    n = state.n
    hx, hp = _xp_entropies(state)
    _, cov = state_moments(state)
    det_x, det_p = np.linalg.det(cov[:n, :n]), np.linalg.det(cov[n:, n:])
    nx, np_ = entropy_power(hx, n), entropy_power(hp, n)
    meta = {
        "h_x": hx,
        "h_p": hp,
        "N_x": nx,
        "N_p": np_,
        "entropy_power": _form(nx * np_, 0.25),
        "variance": _form((det_x * det_p) ** (1 / n), 0.25),
    }
    return _report("bbm", state, hx + hp, n * LN_PI_E, meta)


def renyi_ccv(state, alpha: float, beta: float) -> RelationReport:
    """``h_alpha(x) + h_beta(p) >= n ln pi + n ln(alpha)/(2(alpha-1)) + n ln(beta)/(2(beta-1))``."""
    _check_conjugate(alpha, beta)
    n = state.n
    ha = quadrature_entropy(state, x_quadratures(n), alpha)
    hb = quadrature_entropy(state, p_quadratures(n), beta)
    rhs = n * (math.log(math.pi) + _renyi_offset(alpha) + _renyi_offset(beta))
    return _report("renyi_ccv", state, ha + hb, rhs, {"alpha": alpha, "beta": beta, "h_alpha_x": ha, "h_beta_p": hb})


def tight_ccv(state) -> RelationReport:
    """``h(x) + h(p) - ln(det gamma_x det gamma_p / det gamma) / 2 >= n ln(pi e)``."""
    n = state.n
    hx, hp = _xp_entropies(state)
    _, cov = state_moments(state)
    det_x, det_p, det = np.linalg.det(cov[:n, :n]), np.linalg.det(cov[n:, n:]), np.linalg.det(cov)
    correction = 0.5 * math.log(det_x * det_p / det)
    nx, np_ = entropy_power(hx, n), entropy_power(hp, n)
    meta = {
        "h_x": hx,
        "h_p": hp,
        "det_gamma": det,
        "det_gamma_x": det_x,
        "det_gamma_p": det_p,
        "correlation_term": correction,
        "entropy_power": _form((nx * np_) ** n * det / (det_x * det_p), 0.25**n),
        "variance": _form(det, 0.25**n),
    }
    return _report("tight_ccv", state, hx + hp - correction, n * LN_PI_E, meta)


# ---------------------------------------------------------------------------
# arbitrary quadratures


def _pair_report(rid, state, A: QuadratureSet, B: QuadratureSet, meta=None) -> RelationReport:
    if A.n_out != 1 or B.n_out != 1:
        raise ValueError("expected single quadratures")
    k = abs(float(commutator_matrix(A, B).ktilde[0, 0]))
    ha, hb = quadrature_entropy(state, A), quadrature_entropy(state, B)
    va, vb = _variances(state, A)[0], _variances(state, B)[0]
    meta = dict(meta or {})
    meta.update(
        h_A=ha,
        h_B=hb,
        commutator=k,
        entropy_power=_form(entropy_power(ha) * entropy_power(hb), k**2 / 4),
        variance=_form(va * vb, k**2 / 4),
    )
    return _report(rid, state, ha + hb, _safe_log(math.pi * math.e * k), meta, degenerate=k == 0)


def guanlei(state, theta: float, phi: float) -> RelationReport:
    """``h(x_theta) + h(x_phi) >= ln(pi e |sin(theta - phi)|)`` (one mode)."""
    if state.n != 1:
        raise ValueError("the rotated-quadrature relation is stated for one mode")
    A, B = rotated_quadrature(theta), rotated_quadrature(phi)
    if abs(math.sin(theta - phi)) < 1e-15:
        B = QuadratureSet(A.coeffs)  # identical directions: commutator exactly zero
    return _pair_report("guanlei", state, A, B, {"theta": theta, "phi": phi})


def huang(state, A: QuadratureSet, B: QuadratureSet) -> RelationReport:
    """``h(A) + h(B) >= ln(pi e |[A, B]|)``."""
    return _pair_report("huang", state, A, B)


def _vector_setup(state, Y: QuadratureSet, Z: QuadratureSet):
    if Y.n_out != Z.n_out:
        raise ValueError(f"Y has {Y.n_out} components, Z has {Z.n_out}")
    blocks = gamma_yz(state, Y, Z)
    k = Y.n_out
    det_k = commutator_matrix(Y, Z).abs_det
    hy, hz = quadrature_entropy(state, Y), quadrature_entropy(state, Z)
    return k, blocks, det_k, hy, hz


def vector_eur(state, Y: QuadratureSet, Z: QuadratureSet) -> RelationReport:
    """``h(y) + h(z) >= ln((pi e)^n |det K|)`` for commuting vectors ``y`` and ``z``."""
    k, blocks, det_k, hy, hz = _vector_setup(state, Y, Z)
    det_y, det_z = np.linalg.det(blocks.Gamma_y), np.linalg.det(blocks.Gamma_z)
    ny, nz = entropy_power(hy, k), entropy_power(hz, k)
    bound = det_k ** (2 / k) / 4
    meta = {
        "h_y": hy,
        "h_z": hz,
        "abs_det_K": det_k,
        "det_Gamma_y": det_y,
        "det_Gamma_z": det_z,
        "covariance_relation": _form(det_y * det_z, det_k**2 / 4**k),
        "entropy_power": _form(ny * nz, bound),
        "variance": _form((det_y * det_z) ** (1 / k), bound),
    }
    rhs = k * LN_PI_E + _safe_log(det_k)
    return _report("vector_eur", state, hy + hz, rhs, meta, degenerate=det_k == 0)


def renyi_vector_eur(state, Y: QuadratureSet, Z: QuadratureSet, alpha: float, beta: float) -> RelationReport:
    _check_conjugate(alpha, beta)
    if Y.n_out != Z.n_out:
        raise ValueError(f"Y has {Y.n_out} components, Z has {Z.n_out}")
    for Q in (Y, Z):
        if not pairwise_commuting(Q):
            raise ValueError("Y and Z must each be pairwise commuting")
    k = Y.n_out
    det_k = commutator_matrix(Y, Z).abs_det
    ha, hb = quadrature_entropy(state, Y, alpha), quadrature_entropy(state, Z, beta)
    rhs = k * (math.log(math.pi) + _renyi_offset(alpha) + _renyi_offset(beta)) + _safe_log(det_k)
    meta = {"alpha": alpha, "beta": beta, "h_alpha_y": ha, "h_beta_z": hb, "abs_det_K": det_k}
    return _report("renyi_vector_eur", state, ha + hb, rhs, meta, degenerate=det_k == 0)


def tight_vector_eur(state, Y: QuadratureSet, Z: QuadratureSet) -> RelationReport:
    """Correlation-corrected vector relation, saturated by every pure Gaussian state.

    ``h(y) + h(z) - ln(det Gamma_y det Gamma_z / det Gamma) / 2 >= ln((pi e)^n |det K|)``.
    When ``y`` and ``z`` have as many components as there are modes, the
    equivalent form with ``det gamma`` in place of ``det Gamma`` and bound
    ``n ln(pi e)`` is evaluated too (``meta["alternative"]``).
    """
    k, blocks, det_k, hy, hz = _vector_setup(state, Y, Z)
    det_y, det_z = np.linalg.det(blocks.Gamma_y), np.linalg.det(blocks.Gamma_z)
    det_g = np.linalg.det(blocks.Gamma)
    degenerate = det_k == 0 or det_g <= 0
    correction = 0.5 * math.log(det_y * det_z / det_g) if det_g > 0 else math.inf
    ny, nz = entropy_power(hy, k), entropy_power(hz, k)
    bound = det_k ** (2 / k) / 4
    meta = {
        "h_y": hy,
        "h_z": hz,
        "abs_det_K": det_k,
        "det_Gamma": det_g,
        "det_Gamma_y": det_y,
        "det_Gamma_z": det_z,
        "correlation_term": correction,
        "entropy_power": _form(ny * nz * (max(det_g, 0.0) / (det_y * det_z)) ** (1 / k), bound),
        "variance": _form(max(det_g, 0.0) ** (1 / k), bound),
    }
    if k == state.n:
        _, cov = state_moments(state)
        alt_lhs = hy + hz - 0.5 * math.log(det_y * det_z / np.linalg.det(cov))
        alt_rhs = k * LN_PI_E
        meta["alternative"] = {"lhs": alt_lhs, "rhs": alt_rhs, "slack": alt_lhs - alt_rhs}
    rhs = k * LN_PI_E + _safe_log(det_k)
    return _report("tight_vector_eur", state, hy + hz - correction, rhs, meta, degenerate=degenerate)


# ---------------------------------------------------------------------------
# more than two observables


def _sum_entropies(state, R: QuadratureSet):
    hs = np.array([quadrature_entropy(state, row) for row in _single_rows(R)])
    ns = np.array([entropy_power(h) for h in hs])
    return hs, ns


def conjecture1(state, R: QuadratureSet) -> RelationReport:
    """``sum h(R_i) - ln(prod sigma_i^2 / det Gamma) / 2 >= ln((2 pi e)^m det C) / 2``."""
    m = R.n_out
    G, C = observables_moments(state, R)
    hs, ns = _sum_entropies(state, R)
    var = np.diag(G)
    det_g = float(np.linalg.det(G))
    det_c = 0.0 if m % 2 else max(float(np.linalg.det(C)), 0.0)
    degenerate = m > 2 * state.n or det_c <= _ZERO_DET * 4.0**-m or det_g <= 0
    correction = 0.5 * math.log(np.prod(var) / det_g) if det_g > 0 else math.inf
    rhs = 0.5 * (m * math.log(2 * math.pi * math.e) + _safe_log(det_c))
    meta = {
        "m": m,
        "h": hs,
        "det_Gamma": det_g,
        "det_C": det_c,
        "correlation_term": correction,
        "entropy_power": _form(np.prod(ns) * max(det_g, 0.0) / np.prod(var), det_c),
        "variance": _form(max(det_g, 0.0), det_c),
    }
    return _report("conjecture1", state, float(np.sum(hs)) - correction, rhs, meta, degenerate=degenerate)


def conjecture2(state, R: QuadratureSet) -> RelationReport:
    """``sum h(R_i) >= ln((2 pi e)^m det C) / 2``."""
    m = R.n_out
    G, C = observables_moments(state, R)
    hs, ns = _sum_entropies(state, R)
    det_c = 0.0 if m % 2 else max(float(np.linalg.det(C)), 0.0)
    rhs = 0.5 * (m * math.log(2 * math.pi * math.e) + _safe_log(det_c))
    meta = {
        "m": m,
        "h": hs,
        "det_C": det_c,
        "entropy_power": _form(np.prod(ns), det_c),
        "variance": _form(np.prod(np.diag(G)), det_c),
    }
    return _report("conjecture2", state, float(np.sum(hs)), rhs, meta, degenerate=det_c <= _ZERO_DET * 4.0**-m)


def conjecture3(state, R: QuadratureSet) -> RelationReport:
    """``sum h(R_i) >= (m/2) ln((2 pi e / m) |a ^ b|)`` for one-mode observables."""
    if state.n != 1 or R.n_modes != 1:
        raise ValueError("the wedge-product relation is stated for one-mode states")
    m = R.n_out
    wedge = wedge_norm(R.a[:, 0], R.ap[:, 0])
    hs, ns = _sum_entropies(state, R)
    bound = (wedge / m) ** m
    rhs = 0.5 * m * _safe_log(2 * math.pi * math.e * wedge / m)
    meta = {
        "m": m,
        "h": hs,
        "wedge": wedge,
        "entropy_power": _form(np.prod(ns), bound),
        "variance": _form(np.prod(_variances(state, R)), bound),
    }
    return _report("conjecture3", state, float(np.sum(hs)), rhs, meta, degenerate=wedge == 0)


def conjecture4(state, m: int = 3) -> RelationReport:
    """``sum h(R_i) >= (m/2) ln(pi e)`` for ``m >= 3`` equidistributed quadratures."""
    if state.n != 1:
        raise ValueError("the equidistributed relation is stated for one-mode states")
    if m < 3:
        raise ValueError("equidistributed quadratures need m >= 3 (m = 2 gives x and -x)")
    R = equidistributed_set(m)
    hs, ns = _sum_entropies(state, R)
    bound = 0.5**m
    meta = {
        "m": m,
        "h": hs,
        "entropy_power": _form(np.prod(ns), bound),
        "variance": _form(np.prod(_variances(state, R)), bound),
    }
    return _report("conjecture4", state, float(np.sum(hs)), 0.5 * m * LN_PI_E, meta)


RELATIONS = {
    "heisenberg": heisenberg,
    "lifted_heisenberg": lifted_heisenberg,
    "robertson_schrodinger": robertson_schrodinger,
    "simon_physicality": simon_physicality,
    "robertson_m": robertson_m,
    "kw_product": kw_product,
    "bbm": bbm,
    "renyi_ccv": renyi_ccv,
    "tight_ccv": tight_ccv,
    "guanlei": guanlei,
    "huang": huang,
    "vector_eur": vector_eur,
    "renyi_vector_eur": renyi_vector_eur,
    "tight_vector_eur": tight_vector_eur,
    "conjecture1": conjecture1,
    "conjecture2": conjecture2,
    "conjecture3": conjecture3,
    "conjecture4": conjecture4,
}

# unconditionally proven for every physical state
PROVEN = frozenset(
    {
        "heisenberg",
        "lifted_heisenberg",
        "robertson_schrodinger",
        "simon_physicality",
        "robertson_m",
        "kw_product",
        "bbm",
        "renyi_ccv",
        "guanlei",
        "huang",
        "vector_eur",
        "renyi_vector_eur",
    }
)


def evaluate(relation: str, state, **kwargs) -> RelationReport:
    try:
        fn = RELATIONS[relation]
    except KeyError:
        raise ValueError(f"unknown relation {relation!r}; choose from {sorted(RELATIONS)}") from None
    return fn(state, **kwargs)
