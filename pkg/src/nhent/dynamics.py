"""No-jump time evolution of particle-number-conserving Gaussian states.

The conditional state |psi(t)> = exp(-i H_eff t)|psi_0> / ||...|| of a
monitored trajectory without jumps stays Gaussian, represented by the matrix
of occupied single-particle orbitals.  The density matrix is built from the
evolved wave function only, rho(t) = |psi(t)><psi(t)|, so the correlation
matrix C(t) = M(t) M(t)^dag (with orthonormalized orbital columns M) is
Hermitian and idempotent at all times: non-unitary amplification changes the
state direction, normalization removes the overall decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._linalg import balanced_eig
from .errors import CollapseError, SizeError
from .correlations import CorrelationMatrix, Partition
from .entanglement import EntanglementReport, build_report
from .models import KernelMatrix

__all__ = [
    "GaussianState",
    "kernel_exponential",
    "evolve_no_jump",
    "domain_wall_state",
    "hermitian_ground_state",
]

# orbital condition number allowed to build up between orthonormalizations
_MAX_GROWTH = 1e6


@dataclass
class GaussianState:
    """Occupied orbitals as columns of an N x M matrix, at a given time."""

    orbitals: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.orbitals = np.asarray(self.orbitals, dtype=complex)
        if self.orbitals.ndim != 2:
            raise SizeError("orbitals must be an N x M matrix")

    @property
    def n_modes(self) -> int:
        return self.orbitals.shape[0]

    @property
    def n_particles(self) -> int:
        return self.orbitals.shape[1]

    def correlation(self) -> np.ndarray:
        """C = M M^dag for orthonormal orbitals (Hermitian, idempotent)."""
        return self.orbitals @ self.orbitals.conj().T


def domain_wall_state(n_modes: int, n_filled: int | None = None) -> GaussianState:
    """Product state with the leading ``n_filled`` sites occupied."""
    if n_filled is None:
        n_filled = n_modes // 2
    M = np.zeros((n_modes, n_filled), dtype=complex)
    M[np.arange(n_filled), np.arange(n_filled)] = 1.0
    return GaussianState(M)


def staggered_state(n_modes: int) -> GaussianState:
    """Half-filled product state occupying every other site.

    The charge-density-wave start populates quasiparticle pairs uniformly,
    giving a clean linear entanglement-growth window under Hermitian
    evolution.
    """
    sites = np.arange(0, n_modes, 2)
    M = np.zeros((n_modes, len(sites)), dtype=complex)
    M[sites, np.arange(len(sites))] = 1.0
    return GaussianState(M)


def hermitian_ground_state(K: KernelMatrix, n_particles: int) -> GaussianState:
    """Ground state of the Hermitian part (K + K^dag)/2 at fixed filling."""
    h = 0.5 * (K.entries + K.entries.conj().T)
    _, V = np.linalg.eigh(h)
    return GaussianState(V[:, :n_particles])


def kernel_exponential(K: KernelMatrix, t: float):
    """Propagator exp(-i K t).

    Uses the eigendecomposition when the (rebalanced) eigenvector matrix is
    well conditioned, otherwise falls back to the dense scaling-and-squaring
    exponential.  Returns the matrix; ``_propagator`` exposes which path was
    taken.
    """
    U, _ = _propagator(K.entries, t)
    return U


def _propagator(A: np.ndarray, t: float):
    if t == 0.0:
        return np.eye(A.shape[0], dtype=complex), "identity"
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A - A.conj().T).max() <= 1e-14 * scale:
        w, V = np.linalg.eigh(A)
        return (V * np.exp(-1j * w * t)) @ V.conj().T, "hermitian"
    w, V, Vinv, cond = balanced_eig(A)
    if Vinv is not None and cond < 1e8:
        return (V * np.exp(-1j * w * t)) @ Vinv, "eig"
    return scipy.linalg.expm(-1j * t * A), "expm"


def _orthonormalize(M: np.ndarray, time: float) -> np.ndarray:
    Q, R = np.linalg.qr(M)
    diag = np.abs(np.diag(R))
    if diag.min() <= 1e-12 * max(diag.max(), 1e-300):
        raise CollapseError(
            f"orbital matrix rank-deficient at t={time:g}", time=time)
    return Q

def _imag_spread(A: np.ndarray) -> float:
    w = np.linalg.eigvals(A)
    return float(w.imag.max() - w.imag.min())


def evolve_no_jump(K_eff: KernelMatrix, psi0: GaussianState, t_grid,
                   partition: Partition, renyi_orders=(2,)):
    """Evolve orbitals under exp(-i K_eff t) with renormalization.

    Orbitals are re-orthonormalized whenever non-Hermitian amplification
    could degrade their numerical rank (substeps keep the growth factor
    below 1e6) and at every output time.  Each output record carries the
    correlation matrix on the configured partition and its entanglement
    report.

    Returns
    -------
    list of (time, CorrelationMatrix, EntanglementReport)
    """
    t_grid = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t_grid must be strictly increasing")
    if t_grid and t_grid[0] < 0:
        raise ValueError("t_grid must start at t >= 0")

    A = K_eff.entries
    spread = _imag_spread(A)
    max_step = math.log(_MAX_GROWTH) / spread if spread > 1e-12 else math.inf

    M = _orthonormalize(psi0.orbitals.copy(), psi0.time)
    now = psi0.time
    records = []
    prop_cache: dict[float, np.ndarray] = {}
    for t_out in t_grid:
        dt = t_out - now
        if dt > 0:
            n_sub = max(1, math.ceil(dt / max_step)) if math.isfinite(max_step) else 1
            h = dt / n_sub
            key = round(h, 15)
            if key not in prop_cache:
                prop_cache[key], _ = _propagator(A, h)
            U = prop_cache[key]
            for _ in range(n_sub):
                M = _orthonormalize(U @ M, t_out)
        now = t_out
        Mn = _orthonormalize(M, t_out)
        C_full = Mn @ Mn.conj().T
        trace_residual = abs(np.trace(C_full) - Mn.shape[1])
        idx = np.asarray(partition.indices)
        C = CorrelationMatrix(partition, C_full[np.ix_(idx, idx)],
                              source=("no_jump", t_out, trace_residual))
        report = build_report(C, renyi_orders=renyi_orders)
        records.append((t_out, C, report))
        M = Mn
    return records
