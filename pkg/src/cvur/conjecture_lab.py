"""Slack minimisation over parametrised state families.

The scans here collect numerical evidence about the conjectured relations: a
non-negative minimum over many states supports a conjecture but proves
nothing. For proven relations a negative minimum beyond tolerance signals a
numerics bug.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import relations
from .entropy import gaussian_entropy
from .quadratures import QuadratureSet, p_quadratures, rotated_quadrature, stack, x_quadratures
from .relations import GRID_TOL, LN_PI_E, PROVEN, RelationReport
from .states import (
    FockState,
    GaussianState,
    apply_symplectic,
    ladder,
    squeezed_vacuum_fock,
    squeezed_vacuum_gaussian,
    vacuum,
)
from .symplectic import beamsplitter, direct_sum, squeezer

__all__ = [
    "StateFamily",
    "gaussian_pure",
    "fock_superposition_family",
    "FAMILIES",
    "make_family",
    "default_options",
    "relation_report",
    "slack",
    "NelderMeadResult",
    "nelder_mead",
    "ScanResult",
    "scan",
    "Figure2Row",
    "figure2_curve",
    "write_figure2_csv",
    "eigen_residual",
    "EVIDENCE_LABEL",
    "FIGURE2_THETAS",
]

EVIDENCE_LABEL = "conjecture-support evidence"
R_MAX = 1.5
FOCK_CUTOFF = 8
REFINE_TOP_K = 5


@dataclass(frozen=True)
class StateFamily:
    """A total map from a parameter box to normalised states."""

    id: str
    bounds: np.ndarray
    builder: Callable[[np.ndarray], object] = field(repr=False, compare=False)
    n_modes: int = 1
    projector: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False, compare=False)

    @property
    def dims(self) -> int:
        return self.bounds.shape[0]

    @property
    def lo(self) -> np.ndarray:
        return self.bounds[:, 0]

    @property
    def hi(self) -> np.ndarray:
        return self.bounds[:, 1]

    def contains(self, params, tol: float = 0.0) -> bool:
        params = np.asarray(params, dtype=float)
        return params.shape == (self.dims,) and bool(np.all(params >= self.lo - tol) and np.all(params <= self.hi + tol))

    def clip(self, params) -> np.ndarray:
        return np.clip(np.asarray(params, dtype=float), self.lo, self.hi)

    def project(self, params) -> np.ndarray:
        """Map an arbitrary point into the box (used by the optimiser)."""
        params = np.asarray(params, dtype=float)
        if self.projector is not None:
            params = self.projector(params)
        return self.clip(params)

    def state(self, params):
        params = np.asarray(params, dtype=float)
        if not self.contains(params):
            raise ValueError(f"parameters {params.tolist()} outside the {self.id} box")
        return self.builder(params)


def gaussian_pure(n_modes: int = 1) -> StateFamily:
    """Pure Gaussian states: ``(r, phi)`` per mode, plus a mixing angle for two modes.

    The state is the vacuum squeezed by ``squeezer(r_k, phi_k)`` on each mode
    and, for two modes, passed through ``beamsplitter(theta)``.
    """
    if n_modes not in (1, 2):
        raise ValueError("gaussian_pure supports one or two modes")
    rows = [[0.0, R_MAX], [0.0, math.pi]] * n_modes
    if n_modes == 2:
        rows.append([0.0, math.pi / 2])

    def build(params):
        S = direct_sum(*[squeezer(params[2 * k], params[2 * k + 1]) for k in range(n_modes)])
        if n_modes == 2:
            S = beamsplitter(params[4]) @ S
        return apply_symplectic(vacuum(n_modes), S)

    return StateFamily(f"gaussian_pure{n_modes}" if n_modes > 1 else "gaussian_pure", np.array(rows), build, n_modes)


def fock_superposition_family(d: int = FOCK_CUTOFF) -> StateFamily:
    """``sum_k c_k |k>`` for ``k < d`` with ``c = re + i im`` in ``[-1, 1]^{2d}``.

    Coefficients are normalised by projection onto the unit sphere; the zero
    vector maps to the vacuum so the family is total on its box.
    """
    if d < 2:
        raise ValueError("need at least two Fock levels")

    def build(params):
        c = params[:d] + 1j * params[d:]
        norm = np.linalg.norm(c)
        amps = np.zeros(d, dtype=complex)
        if norm == 0:
            amps[0] = 1.0
        else:
            amps[:] = c / norm
        return FockState(amps)

    def rescale(params):
        # the state is invariant under positive rescaling, so shrink rather than clip
        top = np.max(np.abs(params))
        return params / top if top > 1 else params

    bounds = np.tile([-1.0, 1.0], (2 * d, 1))
    return StateFamily("fock_superposition", bounds, build, 1, rescale)


FAMILIES = {
    "gaussian_pure": lambda: gaussian_pure(1),
    "gaussian_pure2": lambda: gaussian_pure(2),
    "fock_superposition": fock_superposition_family,
}


def make_family(name: str, **kwargs) -> StateFamily:
    try:
        return FAMILIES[name](**kwargs)
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None


def _rotated_vector(n: int, theta: float) -> QuadratureSet:
    c, s = math.cos(theta), math.sin(theta)
    return QuadratureSet(np.hstack([c * np.eye(n), s * np.eye(n)]))


def default_options(relation: str, n_modes: int) -> dict:
    """Quadrature choices used when a relation is scanned or tabulated without any.

    Vector relations compare ``x`` with the ``pi/4``-rotated vector, ``m``
    observable relations use ``(x_1..x_n, p_1..p_n)`` and the one-mode wedge
    relations use the triple ``(x, p, -x-p)``.
    """
    n = n_modes
    if relation in ("vector_eur", "tight_vector_eur"):
        return {"Y": x_quadratures(n), "Z": _rotated_vector(n, math.pi / 4)}
    if relation == "renyi_vector_eur":
        return {"Y": x_quadratures(n), "Z": _rotated_vector(n, math.pi / 4), "alpha": 2.0, "beta": 2 / 3}
    if relation in ("conjecture1", "conjecture2", "robertson_m"):
        return {"R": stack(x_quadratures(n), p_quadratures(n))}
    if relation in ("conjecture3", "kw_product"):
        return {"R": stack(x_quadratures(1), p_quadratures(1), QuadratureSet([-1.0, -1.0]))}
    if relation == "conjecture4":
        return {"m": 3}
    if relation == "renyi_ccv":
        return {"alpha": 2.0, "beta": 2 / 3}
    if relation == "guanlei":
        return {"theta": math.pi / 4, "phi": 0.0}
    if relation == "huang":
        return {"A": rotated_quadrature(0.0), "B": rotated_quadrature(math.pi / 4)}
    return {}


def relation_report(relation: str, family: StateFamily, params, options: dict | None = None) -> RelationReport:
    opts = default_options(relation, family.n_modes)
    opts.update(options or {})
    return relations.evaluate(relation, family.state(params), **opts)


def slack(relation: str, family: StateFamily, params, options: dict | None = None) -> float:
    """``lhs - rhs`` at ``params``; ``+inf`` when the bound degenerates."""
    report = relation_report(relation, family, params, options)
    return math.inf if report.degenerate else report.slack


# ---------------------------------------------------------------------------
# Nelder-Mead


class NelderMeadResult(NamedTuple):
    x: np.ndarray
    fun: float
    nit: int
    converged: bool
    trace: list


def nelder_mead(f, x0, max_iter: int = 2000, simplex_init=0.1, tol: float = 1e-8) -> NelderMeadResult:
    """Derivative-free minimisation with coefficients (reflect 1, expand 2, contract 0.5, shrink 0.5).

    ``simplex_init`` is the edge length of the initial simplex along each axis
    (scalar or per-axis). Stops when every vertex lies within ``tol`` of the
    best one or after ``max_iter`` iterations. ``trace`` holds the best value
    after each iteration.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    n = x0.size
    f0 = float(f(x0))
    if not math.isfinite(f0):
        raise ValueError(f"objective is not finite at the starting point ({f0})")
    steps = np.broadcast_to(np.asarray(simplex_init, dtype=float), (n,))
    simplex = np.vstack([x0, x0 + np.diag(steps)])
    values = np.array([f0] + [float(f(v)) for v in simplex[1:]])
    trace = []
    converged = False
    nit = 0
    for nit in range(1, max_iter + 1):
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        trace.append(float(values[0]))
        if np.max(np.abs(simplex[1:] - simplex[0])) < tol:
            converged = True
            break
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + (centroid - worst)
        fr = float(f(xr))
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[0]:
            xe = centroid + 2.0 * (xr - centroid)
            fe = float(f(xe))
            simplex[-1], values[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue
        if fr < values[-1]:
            xc = centroid + 0.5 * (xr - centroid)
            fc = float(f(xc))
            accept = fc <= fr
        else:
            xc = centroid + 0.5 * (worst - centroid)
            fc = float(f(xc))
            accept = fc < values[-1]
        if accept:
            simplex[-1], values[-1] = xc, fc
            continue
        simplex[1:] = simplex[0] + 0.5 * (simplex[1:] - simplex[0])
        values[1:] = [float(f(v)) for v in simplex[1:]]
    best = int(np.argmin(values))
    return NelderMeadResult(simplex[best].copy(), float(values[best]), nit, converged, trace)


# ---------------------------------------------------------------------------
# scans

QUANTILES = (0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0)


@dataclass
class ScanResult:
    relation: str
    family: str
    iterations: int
    seed: int
    best_slack: float
    best_params: list
    quantiles: dict
    n_degenerate: int
    optimized: bool
    proven: bool
    tolerance: float
    label: str
    options: dict = field(default_factory=dict)

    @property
    def violated(self) -> bool:
        """True only for a proven relation whose minimum slack falls below tolerance."""
        return self.proven and self.best_slack < -self.tolerance

    def to_dict(self) -> dict:
        return relations._encode(asdict(self))

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _describe(options: dict) -> dict:
    out = {}
    for key, value in options.items():
        out[key] = value.coeffs.tolist() if isinstance(value, QuadratureSet) else value
    return out


def scan(
    relation: str,
    family: StateFamily,
    iters: int,
    seed: int = 0,
    optimize: bool = False,
    options: dict | None = None,
    top_k: int = REFINE_TOP_K,
    max_iter: int = 400,
) -> ScanResult:
    """Sample ``iters`` points uniformly in the family box and report the minimum slack.

    Sample ``i`` draws from its own child of ``SeedSequence(seed)`` so the
    result does not depend on evaluation order. With ``optimize`` the ``top_k``
    lowest finite samples are refined by :func:`nelder_mead` inside the box.
    """
    if iters < 1:
        raise ValueError(f"iters must be >= 1, got {iters}")
    opts = default_options(relation, family.n_modes)
    opts.update(options or {})
    children = np.random.SeedSequence(seed).spawn(iters)
    points = np.empty((iters, family.dims))
    slacks = np.empty(iters)
    for i, child in enumerate(children):
        rng = np.random.Generator(np.random.Philox(child))
        points[i] = rng.uniform(family.lo, family.hi)
        slacks[i] = slack(relation, family, points[i], opts)
    finite = np.isfinite(slacks)
    best = int(np.argmin(slacks))
    best_slack, best_params = float(slacks[best]), points[best]
    if optimize and finite.any():
        width = family.hi - family.lo
        for i in np.argsort(slacks, kind="stable")[: min(top_k, int(finite.sum()))]:
            res = nelder_mead(
                lambda p: slack(relation, family, family.project(p), opts),
                points[i],
                max_iter=max_iter,
                simplex_init=0.05 * width,
            )
            if res.fun < best_slack:
                best_slack, best_params = res.fun, family.project(res.x)
    pool = slacks[finite]
    quantiles = {f"q{int(q * 100):02d}": float(np.quantile(pool, q)) for q in QUANTILES} if pool.size else {}
    state_kind = "grid" if isinstance(family.state(points[0]), FockState) else "analytic"
    return ScanResult(
        relation=relation,
        family=family.id,
        iterations=iters,
        seed=seed,
        best_slack=best_slack,
        best_params=[float(v) for v in best_params],
        quantiles=quantiles,
        n_degenerate=int((~finite).sum()),
        optimized=optimize,
        proven=relation in PROVEN,
        tolerance=GRID_TOL if state_kind == "grid" else relations.ANALYTIC_TOL,
        label="proven-relation check" if relation in PROVEN else EVIDENCE_LABEL,
        options=_describe(opts),
    )


# ---------------------------------------------------------------------------
# rotated-quadrature curve


class Figure2Row(NamedTuple):
    theta: float
    phi: float
    lhs: float
    rhs: float
    slack: float


FIGURE2_THETAS = (math.pi / 4, math.pi / 2, 5 * math.pi / 3)


def figure2_curve(r: float = 0.2, thetas=FIGURE2_THETAS, phi_samples: int = 360) -> list[Figure2Row]:
    """``h(x) + h(x_theta)`` against ``ln(pi e |sin theta|)`` for squeezed vacua.

    The squeezing angle ``phi`` runs over ``2 pi k / phi_samples``. Entropies
    are exact Gaussian ones.
    """
    if phi_samples < 2:
        raise ValueError("phi_samples must be >= 2")
    rows = []
    for theta in thetas:
        a = np.array([1.0, 0.0])
        b = np.array([math.cos(theta), math.sin(theta)])
        sin = abs(math.sin(theta))
        rhs = LN_PI_E + math.log(sin) if sin > 0 else -math.inf
        for k in range(phi_samples):
            phi = 2 * math.pi * k / phi_samples
            cov = squeezed_vacuum_gaussian(r, phi).cov
            lhs = gaussian_entropy([[a @ cov @ a]]) + gaussian_entropy([[b @ cov @ b]])
            rows.append(Figure2Row(float(theta), phi, float(lhs), rhs, float(lhs - rhs)))
    return rows


def write_figure2_csv(rows, fh) -> None:
    """CSV with header ``theta,phi,lhs,rhs,slack``; floats in ``repr`` form for exact round-trips."""
    fh.write("theta,phi,lhs,rhs,slack\n")
    for row in rows:
        fh.write(",".join(repr(float(v)) for v in row) + "\n")


# ---------------------------------------------------------------------------
# eigen-operator check


def eigen_residual(r: float, phi: float, dim: int = 64, psi=None, gamma=None) -> float:
    """``|| H psi - psi ||`` with ``H = r^T gamma^{-1} r / 2`` built from truncated ladder operators.

    By default ``psi`` is the number-basis squeezed vacuum and ``gamma`` its
    covariance, for which ``psi`` is an eigenvector with eigenvalue 1. Both can
    be overridden (e.g. for a negative control). Truncating the state at
    ``dim`` levels leaves a residual of order ``dim |c_dim|`` from the
    missing tail.
    """
    if dim < 32:
        raise ValueError(f"dim must be >= 32, got {dim}")
    if psi is None:
        psi = squeezed_vacuum_fock(r, phi, dim).amplitudes
    elif isinstance(psi, FockState):
        psi = psi.amplitudes
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (dim,):
        raise ValueError(f"state has shape {psi.shape}, expected ({dim},)")
    if gamma is None:
        gamma = squeezed_vacuum_gaussian(r, phi).cov
    elif isinstance(gamma, GaussianState):
        gamma = gamma.cov
    g = np.linalg.inv(np.asarray(gamma, dtype=float))
    a = ladder(dim)
    x = (a + a.conj().T) / math.sqrt(2)
    p = (a - a.conj().T) / (1j * math.sqrt(2))
    H = 0.5 * (g[0, 0] * x @ x + g[0, 1] * (x @ p + p @ x) + g[1, 1] * p @ p)
    return float(np.linalg.norm(H @ psi - psi))
