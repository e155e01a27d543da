"""Gaussian states in covariance form and pure states in a truncated Fock basis."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .symplectic import Ordering, convert_ordering, squeezer, williamson

__all__ = [
    "GaussianState",
    "FockState",
    "vacuum",
    "coherent",
    "thermal",
    "squeezed_vacuum_gaussian",
    "is_physical",
    "purity",
    "apply_symplectic",
    "displace",
    "reduced_cov",
    "wigner_gaussian",
    "fock_number",
    "fock_superposition",
    "squeezed_vacuum_fock",
    "fock_covariance",
    "ladder",
    "quadrature_operators",
    "TruncationError",
    "DEFAULT_FOCK_DIM",
    "MAX_TRUNCATION_LOSS",
]

DEFAULT_FOCK_DIM = 64
MAX_TRUNCATION_LOSS = 1e-8


class TruncationError(ValueError):
    """Raised when a Fock-basis cutoff discards too much norm."""


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of an ``n``-mode Gaussian state.

    Both are stored in xxpp ordering regardless of the ordering they were
    given in; ``ordering`` records what the caller used so that serialisers
    can write it back the same way.
    """

    mean: np.ndarray
    cov: np.ndarray
    ordering: Ordering = Ordering.XXPP

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        mean = np.array(self.mean, dtype=float).reshape(-1)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be square with even dimension, got {cov.shape}")
        if mean.shape[0] != cov.shape[0]:
            raise ValueError(f"mean has length {mean.shape[0]}, covariance has dimension {cov.shape[0]}")
        if np.max(np.abs(cov - cov.T)) > 1e-12 * max(1.0, np.max(np.abs(cov))):
            raise ValueError("covariance matrix is not symmetric")
        ordering = Ordering.parse(self.ordering)
        cov = convert_ordering((cov + cov.T) / 2, ordering, Ordering.XXPP)
        mean = convert_ordering(mean, ordering, Ordering.XXPP)
        cov.setflags(write=False)
        mean.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "ordering", ordering)

    @property
    def n(self) -> int:
        return self.cov.shape[0] // 2

    def moments(self, ordering: Ordering | str = Ordering.XXPP):
        """``(mean, cov)`` in the requested ordering."""
        return (
            convert_ordering(self.mean, Ordering.XXPP, ordering),
            convert_ordering(self.cov, Ordering.XXPP, ordering),
        )


@dataclass(frozen=True)
class FockState:
    """Pure state of one or two modes, truncated at ``dim`` levels per mode.

    Two-mode amplitudes are indexed lexicographically, ``amplitudes[n1 * dim + n2]``.
    ``truncation_loss`` carries the norm discarded when the state was built.
    """

    amplitudes: np.ndarray
    n_modes: int = 1
    truncation_loss: float = field(default=0.0, compare=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if self.n_modes not in (1, 2):
            raise ValueError(f"FockState supports 1 or 2 modes, got {self.n_modes}")
        dim = round(amps.size ** (1 / self.n_modes))
        if dim**self.n_modes != amps.size:
            raise ValueError(f"{amps.size} amplitudes is not a {self.n_modes}-mode tensor")
        if dim < 2:
            raise ValueError("Fock truncation must keep at least 2 levels per mode")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"amplitudes are not normalised (norm {norm:.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return round(self.amplitudes.size ** (1 / self.n_modes))

    @property
    def n(self) -> int:
        return self.n_modes

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.dim,) * self.n_modes)


# ---------------------------------------------------------------------------
# Gaussian constructors


def vacuum(n: int = 1) -> GaussianState:
    if n < 1:
        raise ValueError(f"mode count must be >= 1, got {n}")
    return GaussianState(np.zeros(2 * n), np.eye(2 * n) / 2)


def coherent(alpha) -> GaussianState:
    """Coherent state(s); a sequence of amplitudes gives a product state."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=complex))
    mean = np.sqrt(2) * np.concatenate([alpha.real, alpha.imag])
    return GaussianState(mean, np.eye(2 * alpha.size) / 2)


def thermal(nu, n: int = 1) -> GaussianState:
    """Thermal state with symplectic eigenvalue(s) ``nu`` (scalar or per mode)."""
    nu = np.broadcast_to(np.asarray(nu, dtype=float), (n,)) if np.ndim(nu) == 0 else np.asarray(nu, float)
    if np.any(nu < 0.5):
        raise ValueError(f"thermal state needs nu >= 1/2, got {nu}")
    return GaussianState(np.zeros(2 * nu.size), np.diag(np.concatenate([nu, nu])))


def squeezed_vacuum_gaussian(r: float, phi: float = 0.0) -> GaussianState:
    S = squeezer(r, phi)
    return GaussianState(np.zeros(2), S @ S.T / 2)


# ---------------------------------------------------------------------------
# Gaussian properties and transformations


def is_physical(g: GaussianState, tol: float = 1e-10) -> bool:
    """Smallest symplectic eigenvalue is at least 1/2 (within ``tol``)."""
    try:
        nu = williamson(g.cov)
    except ValueError:
        return False
    return bool(nu[-1] >= 0.5 - tol)


def purity(g: GaussianState) -> float:
    if not is_physical(g):
        raise ValueError("purity is only defined for physical states")
    return float(1.0 / (2**g.n * np.sqrt(np.linalg.det(g.cov))))


def apply_symplectic(g: GaussianState, S, d=None) -> GaussianState:
    """Gaussian unitary ``r -> S r + d`` (S and d in xxpp ordering)."""
    S = np.asarray(S, dtype=float)
    if S.shape != g.cov.shape:
        raise ValueError(f"symplectic matrix shape {S.shape} does not match state dimension {g.cov.shape}")
    d = np.zeros(2 * g.n) if d is None else np.asarray(d, dtype=float)
    if d.shape != (2 * g.n,):
        raise ValueError(f"displacement must have length {2 * g.n}")
    return GaussianState(S @ g.mean + d, S @ g.cov @ S.T)


def displace(g: GaussianState, d) -> GaussianState:
    return apply_symplectic(g, np.eye(2 * g.n), d)


def _selector(n: int, which) -> np.ndarray:
    if isinstance(which, str):
        if which == "x":
            return np.arange(n)
        if which == "p":
            return np.arange(n, 2 * n)
        raise ValueError(f"unknown block {which!r}; use 'x', 'p' or an index list")
    idx = np.atleast_1d(np.asarray(which, dtype=int))
    if idx.size == 0:
        raise ValueError("empty quadrature selector")
    if idx.min() < 0 or idx.max() >= 2 * n:
        raise ValueError(f"selector {idx.tolist()} out of range for {n} modes")
    return idx


def reduced_cov(g: GaussianState, which="x") -> np.ndarray:
    """Principal submatrix of the covariance: ``'x'``, ``'p'`` or xxpp indices."""
    idx = _selector(g.n, which)
    return g.cov[np.ix_(idx, idx)].copy()


def wigner_gaussian(g: GaussianState, point) -> float:
    """Gaussian Wigner function at a phase-space point (xxpp).

    ``W(r) = exp(-(r - <r>)^T gamma^{-1} (r - <r>) / 2) / ((2 pi)^n sqrt(det gamma))``
    """
    point = np.asarray(point, dtype=float)
    if point.shape[-1] != 2 * g.n:
        raise ValueError(f"point must have {2 * g.n} coordinates")
    det = np.linalg.det(g.cov)
    if det <= 0:
        raise ValueError("covariance matrix is singular")
    delta = point - g.mean
    quad = np.einsum("...i,ij,...j->...", delta, np.linalg.inv(g.cov), delta)
    return np.exp(-quad / 2) / ((2 * np.pi) ** g.n * np.sqrt(det))


# ---------------------------------------------------------------------------
# Fock states


def fock_number(k: int, dim: int = DEFAULT_FOCK_DIM) -> FockState:
    if not 0 <= k < dim:
        raise ValueError(f"number state |{k}> does not fit in dimension {dim}")
    amps = np.zeros(dim, dtype=complex)
    amps[k] = 1.0
    return FockState(amps)


def fock_superposition(coeffs, dim: int | None = None, n_modes: int = 1) -> FockState:
    """Normalised superposition; ``coeffs`` are zero-padded to ``dim`` levels."""
    c = np.asarray(coeffs, dtype=complex)
    if n_modes == 1:
        c = c.reshape(-1)
        dim = max(c.size, 2) if dim is None else dim
        amps = np.zeros(dim, dtype=complex)
        amps[: c.size] = c
    else:
        c = c.reshape((c.shape[0], -1)) if c.ndim == 2 else c.reshape(round(np.sqrt(c.size)), -1)
        dim = max(c.shape + (2,)) if dim is None else dim
        amps = np.zeros((dim, dim), dtype=complex)
        amps[: c.shape[0], : c.shape[1]] = c
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ValueError("cannot normalise the zero vector")
    return FockState(amps / norm, n_modes=n_modes)


def squeezed_vacuum_fock(r: float, phi: float = 0.0, dim: int = DEFAULT_FOCK_DIM) -> FockState:
    """Squeezed vacuum in the number basis, matching :func:`squeezed_vacuum_gaussian`.

    ``c_{2m} = sqrt(sech r) (-e^{-2i phi} tanh r)^m sqrt((2m)!) / (2^m m!)``; odd
    amplitudes vanish. Raises :class:`TruncationError` if the amplitudes beyond
    ``dim`` carry more than ``MAX_TRUNCATION_LOSS`` of the norm.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    m = np.arange((dim + 1) // 2)
    t = np.tanh(abs(r))
    phase = -np.exp(-2j * phi) * np.sign(r) if r != 0 else 0.0
    amps = np.zeros(dim, dtype=complex)
    if t == 0:
        amps[0] = 1.0
        return FockState(amps)
    log_mag = 0.5 * np.log(1 / np.cosh(r)) + 0.5 * gammaln(2 * m + 1) - m * np.log(2) - gammaln(m + 1) + m * np.log(t)
    amps[2 * m] = np.exp(log_mag) * phase**m
    loss = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    if loss > MAX_TRUNCATION_LOSS:
        raise TruncationError(
            f"dim={dim} discards {loss:.3e} of the norm for r={r}; "
            f"limit is {MAX_TRUNCATION_LOSS:.0e}, increase dim"
        )
    amps /= np.linalg.norm(amps)
    return FockState(amps, truncation_loss=loss)


def ladder(dim: int) -> np.ndarray:
    """Annihilation operator truncated to ``dim`` levels."""
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)


def quadrature_operators(dim: int):
    """Truncated ``x = (a + a^dag)/sqrt 2`` and ``p = (a - a^dag)/(i sqrt 2)``."""
    a = ladder(dim)
    x = (a + a.conj().T) / np.sqrt(2)
    p = (a - a.conj().T) / (1j * np.sqrt(2))
    return x, p


def _quadrature_images(f: FockState) -> list[np.ndarray]:
    """``r_k |psi>`` for each xxpp quadrature, computed exactly in an enlarged space."""
    dim = f.dim
    big = dim + 1
    x, p = quadrature_operators(big)
    if f.n_modes == 1:
        psi = np.zeros(big, dtype=complex)
        psi[:dim] = f.amplitudes
        return [x @ psi, p @ psi]
    psi = np.zeros((big, big), dtype=complex)
    psi[:dim, :dim] = f.tensor()
    x1 = np.einsum("ij,jk->ik", x, psi)
    x2 = np.einsum("ij,kj->ki", x, psi)
    p1 = np.einsum("ij,jk->ik", p, psi)
    p2 = np.einsum("ij,kj->ki", p, psi)
    return [v.reshape(-1) for v in (x1, x2, p1, p2)]


def fock_covariance(f: FockState):
    """First and second moments ``(mean, cov)`` of a Fock state, xxpp ordering.

    ``cov_ij = Re <r_i psi | r_j psi> - <r_i><r_j>``; the images ``r_i |psi>``
    are formed in a space one level larger so the truncated state's moments
    are exact.
    """
    images = _quadrature_images(f)
    dim = f.dim
    big = dim + 1
    if f.n_modes == 1:
        psi = np.zeros(big, dtype=complex)
        psi[:dim] = f.amplitudes
    else:
        psi = np.zeros((big, big), dtype=complex)
        psi[:dim, :dim] = f.tensor()
        psi = psi.reshape(-1)
    mean = np.array([np.vdot(psi, v).real for v in images])
    gram = np.array([[np.vdot(u, v).real for v in images] for u in images])
    cov = gram - np.outer(mean, mean)
    return mean, (cov + cov.T) / 2
