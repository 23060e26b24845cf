"""Biorthogonal eigendecomposition, occupation selection, non-orthogonality.

A non-Hermitian kernel K is diagonalized by paired right/left eigenvectors
with <L_a|R_b> = delta_ab.  Left vectors are always obtained from the inverse
of the right-eigenvector matrix, never by eigenvalue matching, so the pairing
is structural.  Skin-effect kernels produce right-eigenvector matrices whose
raw condition number is inflated by a benign diagonal grading (they are
diagonal similarity transforms of well-behaved matrices); the decomposition
therefore rebalances rows before inverting, and the reported condition
estimate refers to the rebalanced matrix, which measures genuine
(near-)defectiveness rather than grading.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._linalg import balanced_eig
from .errors import DefectiveError, DegeneracyWarning
from .models import KernelMatrix, bloch_momenta, bloch_reduce

__all__ = [
    "BiorthogonalSystem",
    "GroundStateSelection",
    "biorthogonal_eig",
    "bloch_system",
    "select_occupied",
    "petermann_factor",
    "OCCUPATION_POLICIES",
]

DEFECTIVE_COND = 1e12


@dataclass
class BiorthogonalSystem:
    """Matched right/left eigenvector sets of a kernel matrix.

    Columns of ``right`` are |R_a>, columns of ``left`` are |L_a>, normalized
    so that every |R_a> has unit 2-norm and left.conj().T @ right = identity.
    ``momenta`` is set when the system was assembled momentum block by
    momentum block and gives the Bloch momentum of each eigenstate.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    condition_estimate: float
    hermitian: bool = False
    momenta: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruction(self) -> np.ndarray:
        """sum_a eps_a |R_a><L_a| (equals the kernel up to conditioning)."""
        return (self.right * self.eigenvalues) @ self.left.conj().T


@dataclass
class GroundStateSelection:
    """Occupied single-particle indices plus the policy that produced them."""

    occupied: np.ndarray
    policy: str
    filling: Fraction
    degenerate_boundary: bool = False

    def __post_init__(self):
        self.occupied = np.asarray(sorted(self.occupied), dtype=int)

    @property
    def n_occupied(self) -> int:
        return len(self.occupied)


def _eigenvalue_clusters(eigenvalues: np.ndarray, scale: float) -> list:
    """Groups of eigenvalues closer than 1e-6 * scale (union-find)."""
    n = len(eigenvalues)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    tol = 1e-6 * max(scale, 1e-300)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigenvalues[i] - eigenvalues[j]) < tol:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(eigenvalues[i])
    return [g for g in groups.values() if len(g) > 1]


def biorthogonal_eig(K: KernelMatrix, cond_threshold: float = DEFECTIVE_COND) -> BiorthogonalSystem:
    """Diagonalize a kernel into a biorthonormal right/left system.

    Hermitian kernels take the unitary path (left = right).  Otherwise the
    right eigenvectors come from a dense general solver; the left set is the
    conjugate transpose of the inverse of the (row-rebalanced) right matrix.

    Raises
    ------
    DefectiveError
        If the rebalanced right-eigenvector matrix condition exceeds
        ``cond_threshold``; the error carries the clustered eigenvalues so
        the caller can retry with a parameter nudge.
    """
    A = K.entries
    if K.is_hermitian():
        w, V = np.linalg.eigh(A)
        return BiorthogonalSystem(w.astype(complex), V.astype(complex),
                                  V.astype(complex), 1.0, hermitian=True)

    w, V, Vinv, cond = balanced_eig(A)
    if Vinv is None or cond > cond_threshold:
        raise DefectiveError(
            f"right-eigenvector matrix condition {cond:.3e} exceeds "
            f"{cond_threshold:.1e}; kernel is (near-)defective",
            condition_estimate=cond,
            clusters=_eigenvalue_clusters(w, float(np.abs(A).max())))
    # right columns to unit norm; left rows absorb the rescaling so that
    # <L_a|R_b> = delta_ab stays exact up to inversion error
    vnorm = np.linalg.norm(V, axis=0)
    right = V / vnorm[None, :]
    left = (Vinv * vnorm[:, None]).conj().T
    return BiorthogonalSystem(w, right, left, cond, hermitian=False)


def bloch_system(K: KernelMatrix, cond_threshold: float = DEFECTIVE_COND) -> BiorthogonalSystem:
    """Momentum-resolved decomposition of a periodic, translation-invariant kernel.

    Diagonalizes the Bloch matrix on each grid momentum and assembles
    full-size eigenvectors R(x, s) = exp(i k x) u(s) / sqrt(N).  The returned
    system carries per-state momenta for Fermi-point counting.
    """
    ns = K.n_sublattices
    nc = K.n_cells
    ks = bloch_momenta(nc)
    dim = K.dim
    pos = np.empty((nc, ns), dtype=int)
    for i, (c, s) in enumerate(K.site_labels):
        pos[c, s] = i

    eigenvalues = np.empty(dim, dtype=complex)
    right = np.zeros((dim, dim), dtype=complex)
    left = np.zeros((dim, dim), dtype=complex)
    momenta = np.empty(dim, dtype=float)
    worst = 1.0
    cells = np.arange(nc)
    for m, k in enumerate(ks):
        h = bloch_reduce(K, k)
        if ns == 1:
            wb = np.array([h[0, 0]])
            ub = np.array([[1.0 + 0j]])
            lb = np.array([[1.0 + 0j]])
        else:
            blk = KernelMatrix(ns, h, "open")
            sub = biorthogonal_eig(blk, cond_threshold)
            wb, ub, lb = sub.eigenvalues, sub.right, sub.left
            worst = max(worst, sub.condition_estimate)
        phase = np.exp(1j * k * cells) / np.sqrt(nc)
        for b in range(ns):
            a = m * ns + b
            eigenvalues[a] = wb[b]
            momenta[a] = k
            vec_r = np.zeros(dim, dtype=complex)
            vec_l = np.zeros(dim, dtype=complex)
            for s in range(ns):
                vec_r[pos[:, s]] = phase * ub[s, b]
                vec_l[pos[:, s]] = phase * lb[s, b]
            right[:, a] = vec_r
            left[:, a] = vec_l
    return BiorthogonalSystem(eigenvalues, right, left, worst,
                              hermitian=K.is_hermitian(), momenta=momenta)


OCCUPATION_POLICIES = ("real_part", "imag_part", "modulus")

_POLICY_PRIMARY = {
    "real_part": lambda z: z.real,
    "imag_part": lambda z: z.imag,
    "modulus": np.abs,
}
_POLICY_SECONDARY = {
    "real_part": lambda z: z.imag,
    "imag_part": lambda z: z.real,
    "modulus": lambda z: z.real,
}


def _group_within(values: np.ndarray, tol: float) -> np.ndarray:
    """Group ids for sorted-adjacent values closer than tol (tie clusters)."""
    order = np.argsort(values, kind="stable")
    group = np.empty(len(values), dtype=int)
    gid = 0
    prev = None
    for i in order:
        if prev is not None and values[i] - prev > tol:
            gid += 1
        group[i] = gid
        prev = values[i]
    return group


def policy_order(eigenvalues: np.ndarray, policy: str,
                 tie_tol: float = 1e-12) -> np.ndarray:
    """Ascending ordering under a policy with tolerance-aware ties.

    Primary keys within ``tie_tol`` (scaled by the spectral radius) of each
    other form a tie cluster resolved by the secondary key, then by index.
    Exact float comparison would otherwise let rounding noise in degenerate
    real parts scramble which member of a conjugate pair fills first.
    """
    if policy not in _POLICY_PRIMARY:
        raise ValueError(f"unknown occupation policy {policy!r}")
    eigenvalues = np.asarray(eigenvalues)
    scale = max(1.0, float(np.abs(eigenvalues).max(initial=0.0)))
    primary = np.asarray(_POLICY_PRIMARY[policy](eigenvalues), dtype=float)
    secondary = np.asarray(_POLICY_SECONDARY[policy](eigenvalues), dtype=float)
    group = _group_within(primary, tie_tol * scale)
    return np.lexsort((np.arange(len(eigenvalues)), secondary, group))


def select_occupied(sys: BiorthogonalSystem, filling, policy: str = "real_part",
                    boundary_tol: float = 1e-12) -> GroundStateSelection:
    """Indices of the round(filling * N) lowest eigenvalues under a policy.

    Ordering is lexicographic ascending in (policy key, remaining parts,
    index), which makes sweeps reproducible.  A degenerate key at the Fermi
    boundary raises a DegeneracyWarning and marks the selection; the
    computation proceeds with the deterministic tie-break.
    """
    filling = Fraction(filling).limit_denominator(10 ** 9) if not isinstance(filling, Fraction) else filling
    if not 0 < filling <= 1:
        raise ValueError(f"filling must be in (0, 1], got {filling}")
    n = sys.dim
    n_occ = int(round(float(filling) * n))
    order = policy_order(sys.eigenvalues, policy, boundary_tol)
    occupied = order[:n_occ]
    degenerate = False
    if 0 < n_occ < n:
        lo, hi = sys.eigenvalues[order[n_occ - 1]], sys.eigenvalues[order[n_occ]]
        key = _POLICY_PRIMARY[policy]
        scale = max(1.0, float(np.abs(sys.eigenvalues).max()))
        if abs(key(lo) - key(hi)) < boundary_tol * scale:
            degenerate = True
            warnings.warn(
                f"occupation boundary degenerate under policy {policy!r}: "
                f"{lo} vs {hi}", DegeneracyWarning, stacklevel=2)
    return GroundStateSelection(occupied, policy, filling, degenerate)


def petermann_factor(sys: BiorthogonalSystem, m: int, n: int) -> float:
    """Normalized right-eigenvector overlap |<R_m|R_n>|^2 / (<R_m|R_m><R_n|R_n>).

    0 for mutually orthogonal eigenstates, 1 for coalescent ones.
    """
    if m == n:
        raise ValueError("Petermann factor is defined for distinct states")
    rm, rn = sys.right[:, m], sys.right[:, n]
    overlap = np.vdot(rm, rn)
    return float(abs(overlap) ** 2 /
                 (np.vdot(rm, rm).real * np.vdot(rn, rn).real))
