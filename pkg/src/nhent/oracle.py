"""Brute-force many-body verification in the full Fock space.

Everything here works on dense 2^N x 2^N matrices in the occupation basis
and is deliberately independent of the correlation-matrix machinery: states
are built by exact diagonalization of the many-body Hamiltonian, reduced
density matrices by an explicit partial trace, entropies from the spectrum
of rho_A.  Disagreement with the fast path is a bug in the fast path.

Mode ordering is fixed with the kept (A) modes first, occupying the low
bits of the basis-state integer.  Jordan-Wigner strings then act entirely
inside A for A-mode operators, so tracing out B is a plain block trace with
no residual signs; arbitrary partitions are handled by relabeling the
kernel before Fock construction (``reorder_modes``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import balanced_eig
from .errors import DefectiveError, DegeneracyError, OrderingError, SizeError
from .models import KernelMatrix

__all__ = [
    "FockOperator",
    "fock_hamiltonian",
    "manybody_biortho_ground",
    "partial_trace",
    "oracle_report",
    "OracleReport",
    "fock_correlation",
    "reorder_modes",
]

MAX_MODES = 14


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64)
    count = np.zeros_like(a)
    while np.any(a):
        count += a & 1
        a >>= 1
    return count


@dataclass
class FockOperator:
    """Dense operator on the 2^N-dimensional Fock space."""

    n_modes: int
    matrix: np.ndarray
    mode_order: list

    @property
    def dim(self) -> int:
        return 2 ** self.n_modes


def reorder_modes(K: KernelMatrix, order) -> KernelMatrix:
    """Kernel with modes permuted so that ``order`` lists the new 0, 1, ...

    Used to bring an arbitrary partition to the leading positions before
    Fock construction.
    """
    order = list(order)
    if sorted(order) != list(range(K.dim)):
        raise OrderingError("order must be a permutation of all modes")
    idx = np.asarray(order)
    return KernelMatrix(K.dim, K.entries[np.ix_(idx, idx)], K.bc,
                        [K.site_labels[i] for i in order])


def fock_hamiltonian(K: KernelMatrix) -> FockOperator:
    """Many-body matrix of sum_ij K_ij c+_i c_j in the occupation basis.

    Basis state s has mode i occupied iff bit i of s is set (mode 0 in the
    lowest bit), with the Jordan-Wigner string of mode i covering modes
    j < i.  Number conserving by construction.
    """
    N = K.dim
    if N > MAX_MODES:
        raise SizeError(f"Fock space guard: N={N} exceeds {MAX_MODES}")
    dim = 2 ** N
    states = np.arange(dim, dtype=np.int64)
    H = np.zeros((dim, dim), dtype=complex)
    for i in range(N):
        for j in range(N):
            amp = K.entries[i, j]
            if amp == 0:
                continue
            if i == j:
                nj = (states >> j) & 1
                H[states, states] += amp * nj
                continue
            mask = (((states >> j) & 1) == 1) & (((states >> i) & 1) == 0)
            src = states[mask]
            mid = src ^ (1 << j)
            dst = mid ^ (1 << i)
            sign = (-1.0) ** (_popcount(src & ((1 << j) - 1))
                              + _popcount(mid & ((1 << i) - 1)))
            H[dst, src] += amp * sign
    return FockOperator(N, H, list(range(N)))


def _number_blocks(n_modes: int):
    occ = _popcount(np.arange(2 ** n_modes, dtype=np.int64))
    return [np.nonzero(occ == n)[0] for n in range(n_modes + 1)]


def manybody_biortho_ground(Hmb: FockOperator, n_particles: int,
                            policy: str = "real_part",
                            degeneracy_tol: float = 1e-9):
    """Right and left ground vectors in the n-particle block.

    The ground eigenvalue is the policy-minimal eigenvalue of the block
    (with the same tolerance-aware tie ordering as the single-particle
    selection); vectors are normalized so <G_L|G_R> = 1.  If the ground
    eigenvalue itself is degenerate within ``degeneracy_tol`` the oracle
    declines (DegeneracyError) rather than guessing a state.
    """
    from .spectra import policy_order

    block_states = _number_blocks(Hmb.n_modes)[n_particles]
    Hb = Hmb.matrix[np.ix_(block_states, block_states)]
    w, V, Vinv, cond = balanced_eig(Hb)
    if Vinv is None:
        raise DefectiveError("many-body block numerically defective",
                             condition_estimate=cond)
    order = policy_order(w, policy)
    idx = order[0]
    if len(order) > 1 and abs(w[order[0]] - w[order[1]]) < degeneracy_tol:
        raise DegeneracyError(
            f"many-body ground eigenvalue degenerate: {w[order[0]]} vs {w[order[1]]}")
    dim = Hmb.dim
    G_R = np.zeros(dim, dtype=complex)
    G_L = np.zeros(dim, dtype=complex)
    G_R[block_states] = V[:, idx]
    G_L[block_states] = Vinv[idx, :].conj()
    return G_R, G_L, w[idx]


def partial_trace(rho: FockOperator, keep: int) -> np.ndarray:
    """Trace out the trailing modes, keeping the leading ``keep`` modes.

    With A-modes in the low bits the basis factorizes as
    s = s_A + 2^keep * s_B, so rho_A[sA, sA'] = sum_{sB} rho[(sB,sA), (sB,sA')].
    """
    N = rho.n_modes
    if not 0 < keep <= N:
        raise OrderingError(f"keep={keep} out of range for {N} modes")
    if rho.mode_order[:keep] != list(range(keep)):
        raise OrderingError("kept modes must be the leading block; "
                            "relabel with reorder_modes first")
    nb = 2 ** (N - keep)
    na = 2 ** keep
    r4 = rho.matrix.reshape(nb, na, nb, na)
    return np.einsum("aiaj->ij", r4)


@dataclass
class OracleReport:
    """Exact rho_A spectrum and entropies."""

    spectrum: np.ndarray
    entropy_vn: complex
    entropy_modified: float


def oracle_report(rho_A: np.ndarray, cond_threshold: float = 1e12,
                  clamp_tol: float = 1e-12) -> OracleReport:
    """Spectrum of rho_A, S_vn = -Tr rho ln rho, S_mod = -Tr rho ln|rho|.

    ln|rho_A| replaces each eigenvalue logarithm by ln|lambda| in the same
    eigenbasis, so both entropies reduce to eigenvalue sums.  Eigenvalues
    within ``clamp_tol`` of zero contribute nothing.
    """
    lam, _, Vinv, cond = balanced_eig(np.asarray(rho_A, dtype=complex))
    if Vinv is None or cond > cond_threshold:
        raise DefectiveError("rho_A numerically defective",
                             condition_estimate=cond)
    keep = np.abs(lam) > clamp_tol
    lk = lam[keep]
    s_vn = complex(-np.sum(lk * np.log(lk)))
    s_mod = -np.sum(lk * np.log(np.abs(lk)))
    return OracleReport(spectrum=lam, entropy_vn=s_vn,
                        entropy_modified=float(s_mod.real))


def _apply_annihilation(i: int, vec: np.ndarray, n_modes: int) -> np.ndarray:
    """c_i |vec> in the occupation basis."""
    dim = len(vec)
    states = np.arange(dim, dtype=np.int64)
    out = np.zeros_like(vec)
    mask = ((states >> i) & 1) == 1
    src = states[mask]
    dst = src ^ (1 << i)
    sign = (-1.0) ** _popcount(src & ((1 << i) - 1))
    out[dst] = sign * vec[src]
    return out


def fock_correlation(G_R: np.ndarray, G_L: np.ndarray, n_modes: int) -> np.ndarray:
    """Two-point function C_ij = <G_L| c+_j c_i |G_R> from Fock vectors."""
    ci = [_apply_annihilation(i, G_R, n_modes) for i in range(n_modes)]
    cj = [_apply_annihilation(j, G_L, n_modes) for j in range(n_modes)]
    C = np.empty((n_modes, n_modes), dtype=complex)
    for i in range(n_modes):
        for j in range(n_modes):
            C[i, j] = np.vdot(cj[j], ci[i])
    return C
