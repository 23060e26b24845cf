"""Kernel-matrix builders for the lattice model zoo.

Every model is a quadratic (particle-number conserving) fermion Hamiltonian
H = sum_ij K[i, j] c^dag_i c_j, represented by its dense complex kernel K
plus site metadata.  Momentum-space forms use the Fourier convention

    c^dag_{x,s} = (1/sqrt(N)) sum_k exp(-i k x) c^dag_{k,s},

so a hopping from cell x to cell x+d contributes exp(-i k d) to the Bloch
matrix H(k)_{ss'} = sum_d K_{ss'}(d) exp(-i k d), and momentum grids are
k_m = 2 pi m / N with m = 0 .. N-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NormalizationError, SingularPotentialError, SizeError

__all__ = [
    "KernelMatrix",
    "ModelSpec",
    "FAMILIES",
    "bloch_reduce",
    "bloch_momenta",
    "fibonacci_approximant",
    "build_hatano_nelson",
    "build_nh_ssh_real",
    "build_nh_ssh_bloch",
    "build_quasicrystal",
    "build_guo_chain",
    "build_guo_2d",
    "build_chern_ribbon",
    "build_eb_ssh",
    "build_measurement_heff",
    "build_heff_from_jumps",
    "build_uniform_chain",
    "build_from_spec",
]


@dataclass
class KernelMatrix:
    """Dense single-particle kernel with site metadata.

    Attributes
    ----------
    dim : int
        Total number of single-particle modes.
    entries : np.ndarray
        Complex dim x dim matrix; entries[i, j] multiplies c^dag_i c_j.
    bc : str
        'open' or 'periodic'.
    site_labels : list[tuple[int, int]]
        (cell index, sublattice index) per mode.  After a Fourier transform
        the cell index becomes a momentum-grid index.
    """

    dim: int
    entries: np.ndarray
    bc: str
    site_labels: list = field(default_factory=list)

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.shape != (self.dim, self.dim):
            raise SizeError(f"entries shape {self.entries.shape} != ({self.dim}, {self.dim})")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("kernel entries must be finite")
        if self.bc not in ("open", "periodic"):
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        if not self.site_labels:
            self.site_labels = [(i, 0) for i in range(self.dim)]

    @property
    def n_sublattices(self) -> int:
        return max(s for _, s in self.site_labels) + 1

    @property
    def n_cells(self) -> int:
        return max(c for c, _ in self.site_labels) + 1

    def is_hermitian(self, tol: float = 1e-14) -> bool:
        scale = max(1.0, np.abs(self.entries).max())
        return np.abs(self.entries - self.entries.conj().T).max() <= tol * scale


def _empty(dim: int, bc: str, labels=None) -> KernelMatrix:
    return KernelMatrix(dim, np.zeros((dim, dim), dtype=complex), bc, labels or [])


def fibonacci_approximant(L: int) -> Fraction:
    """Rational approximant p/q to the inverse golden mean with q = L.

    L must be a Fibonacci number; the returned fraction is F_{k-1}/F_k
    with F_k = L (so e.g. L=144 gives 89/144).
    """
    a, b = 1, 1
    while b < L:
        a, b = b, a + b
    if b != L:
        raise SizeError(f"L={L} is not a Fibonacci number")
    return Fraction(a, b)


# ---------------------------------------------------------------------------
# real-space builders
# ---------------------------------------------------------------------------

def build_hatano_nelson(L: int, t: float, alpha: float, bc: str = "open") -> KernelMatrix:
    """Nonreciprocal chain H = -t sum_x (e^alpha c+_x c_{x+1} + e^-alpha c+_{x+1} c_x).

    entries[x, x+1] = -t e^alpha and entries[x+1, x] = -t e^-alpha; under
    periodic bc the wrap bond accumulates onto the same pair (for L = 2 the
    bulk and wrap bonds coincide and both contributions add).
    """
    if L < 2:
        raise SizeError(f"Hatano-Nelson chain needs L >= 2, got {L}")
    km = _empty(L, bc)
    K = km.entries
    bonds = range(L) if bc == "periodic" else range(L - 1)
    for x in bonds:
        y = (x + 1) % L
        K[x, y] += -t * math.exp(alpha)
        K[y, x] += -t * math.exp(-alpha)
    return km


def build_uniform_chain(L: int, t: float = 1.0, bc: str = "periodic") -> KernelMatrix:
    """Hermitian uniform hopping chain, -t on every bond."""
    return build_hatano_nelson(L, t, 0.0, bc)


def build_nh_ssh_real(N_cells: int, omega: float, upsilon: float, u: float,
                      bc: str = "open") -> KernelMatrix:
    """PT-symmetric SSH chain with staggered imaginary potential.

    Cell x holds sites (2x, 2x+1).  Reciprocal hoppings: upsilon inside the
    cell, omega between cells; on-site +iu on even sites, -iu on odd sites.
    The Bloch matrix is [[iu, v_k], [v_k*, -iu]] with v_k = omega e^{-ik} + upsilon.
    """
    if N_cells < 2:
        raise SizeError(f"SSH chain needs >= 2 cells, got {N_cells}")
    L = 2 * N_cells
    labels = [(x // 2, x % 2) for x in range(L)]
    km = _empty(L, bc, labels)
    K = km.entries
    for x in range(N_cells):
        a, b = 2 * x, 2 * x + 1
        K[a, a] = 1j * u
        K[b, b] = -1j * u
        K[a, b] += upsilon
        K[b, a] += upsilon
    inter = range(N_cells) if bc == "periodic" else range(N_cells - 1)
    for x in inter:
        b, a2 = 2 * x + 1, (2 * x + 2) % L
        K[b, a2] += omega
        K[a2, b] += omega
    return km


def build_nh_ssh_bloch(k: float, omega: float, upsilon: float, u: float):
    """Bloch matrix of the PT SSH model and its eigenvalue pair.

    Returns the 2x2 matrix [[iu, v_k], [v_k*, -iu]] with
    v_k = omega e^{-ik} + upsilon, and the eigenvalues
    +-sqrt(|v_k|^2 - u^2) (principal square root).
    """
    vk = omega * np.exp(-1j * k) + upsilon
    h = np.array([[1j * u, vk], [np.conj(vk), -1j * u]], dtype=complex)
    e = np.sqrt(complex(abs(vk) ** 2 - u ** 2))
    return h, (e, -e)


def build_quasicrystal(L: int, J_L: float, J_R: float, V: float, alpha,
                       variant: str = "exp_phase", a: float = 0.0,
                       bc: str = "periodic") -> KernelMatrix:
    """Non-Hermitian quasicrystal chain with asymmetric hopping.

    H = sum_n (J_R c+_{n+1} c_n + J_L c+_n c_{n+1}) + sum_n V_n n_n with
    V_n = V exp(-2 pi i alpha n) for variant 'exp_phase' and
    V_n = V / (1 - a exp(i 2 pi alpha n)) for variant 'mobility_edge'.

    alpha is a rational approximant p/q; under periodic bc q must equal L
    so the potential is exactly commensurate with the ring.
    """
    if L < 2:
        raise SizeError(f"quasicrystal chain needs L >= 2, got {L}")
    alpha = Fraction(alpha)
    if bc == "periodic" and alpha.denominator != L:
        raise SizeError(
            f"periodic quasicrystal needs approximant denominator q == L, "
            f"got q={alpha.denominator}, L={L}")
    km = _empty(L, bc)
    K = km.entries
    bonds = range(L) if bc == "periodic" else range(L - 1)
    for n in bonds:
        m = (n + 1) % L
        K[m, n] += J_R
        K[n, m] += J_L
    phase = 2.0 * math.pi * float(alpha)
    for n in range(L):
        if variant == "exp_phase":
            K[n, n] = V * np.exp(-1j * phase * n)
        elif variant == "mobility_edge":
            den = 1.0 - a * np.exp(1j * phase * n)
            if abs(den) < 1e-12:
                raise SingularPotentialError(
                    f"potential denominator vanishes at site {n}")
            K[n, n] = V / den
        else:
            raise ValueError(f"unknown quasicrystal variant {variant!r}")
    return km


def build_guo_chain(L: int, n: int, t: float = 1.0, gamma: float = 0.0,
                    bc: str = "periodic") -> KernelMatrix:
    """Chain with one nonreciprocal bond per n-site cell.

    The first bond of each cell carries t^L = t + gamma/2 on c+_i c_{i+1}
    and t^R = t - gamma/2 on c+_{i+1} c_i; all other bonds are reciprocal
    with strength t.
    """
    if n < 2:
        raise SizeError(f"cell size must be >= 2, got {n}")
    if L % n != 0:
        raise SizeError(f"L={L} not divisible by cell size n={n}")
    labels = [(i // n, i % n) for i in range(L)]
    km = _empty(L, bc, labels)
    K = km.entries
    bonds = range(L) if bc == "periodic" else range(L - 1)
    for i in bonds:
        j = (i + 1) % L
        if i % n == 0:
            K[i, j] += t + gamma / 2.0
            K[j, i] += t - gamma / 2.0
        else:
            K[i, j] += t
            K[j, i] += t
    return km


def build_guo_2d(Lx: int, Ly: int, gamma: float, bc: str = "periodic") -> KernelMatrix:
    """2D generalization with dimerized nonreciprocal bonds along both axes.

    Bonds (2m, 2m+1) along x and along y carry (1 + gamma/2, 1 - gamma/2);
    bonds (2m+1, 2m+2) are reciprocal with strength 1.  Sites are flattened
    row-major with x fastest, so contiguous index ranges are y-slabs.
    """
    if Lx % 2 or Ly % 2:
        raise SizeError(f"Guo 2D needs even sizes, got Lx={Lx}, Ly={Ly}")
    dim = Lx * Ly
    tl, tr = 1.0 + gamma / 2.0, 1.0 - gamma / 2.0
    labels = [((y // 2) * (Lx // 2) + x // 2, (x % 2) + 2 * (y % 2))
              for y in range(Ly) for x in range(Lx)]
    km = _empty(dim, bc, labels)
    K = km.entries

    def idx(x, y):
        return (y % Ly) * Lx + (x % Lx)

    for y in range(Ly):
        xb = range(Lx) if bc == "periodic" else range(Lx - 1)
        for x in xb:
            i, j = idx(x, y), idx(x + 1, y)
            fwd, bwd = (tl, tr) if x % 2 == 0 else (1.0, 1.0)
            K[i, j] += fwd
            K[j, i] += bwd
    for x in range(Lx):
        yb = range(Ly) if bc == "periodic" else range(Ly - 1)
        for y in yb:
            i, j = idx(x, y), idx(x, y + 1)
            fwd, bwd = (tl, tr) if y % 2 == 0 else (1.0, 1.0)
            K[i, j] += fwd
            K[j, i] += bwd
    return km


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _two_band_chain(L: int, onsite: np.ndarray, hop_plus: np.ndarray,
                    hop_minus: np.ndarray, bc: str) -> KernelMatrix:
    """Assemble a two-orbital chain kernel from nearest-neighbor 2x2 blocks.

    ``hop_plus`` is K(d=+1) (hopping from cell x to x+1), ``hop_minus`` is
    K(d=-1); they are independent blocks for non-Hermitian models.
    """
    dim = 2 * L
    labels = [(x, s) for x in range(L) for s in range(2)]
    km = _empty(dim, bc, labels)
    K = km.entries
    for x in range(L):
        K[2 * x:2 * x + 2, 2 * x:2 * x + 2] = onsite
    cells = range(L) if bc == "periodic" else range(L - 1)
    for x in cells:
        y = (x + 1) % L
        K[2 * y:2 * y + 2, 2 * x:2 * x + 2] += hop_plus
        K[2 * x:2 * x + 2, 2 * y:2 * y + 2] += hop_minus
    return km


def build_chern_ribbon(L: int, k_perp: float, t: float, m: float, gamma: float,
                       cut_axis: str = "x") -> KernelMatrix:
    """Non-Hermitian Chern-insulator ribbon, one axis open and one in momentum.

    Bulk Bloch Hamiltonian:
    H(kx, ky) = (m + t cos kx + t cos ky) sx + (i gamma + t sin kx) sy
              + (t sin ky) sz.
    cut_axis names the direction the entanglement/real-space cut runs along:
    cut_axis='x' keeps kx = k_perp and opens the y axis (and vice versa).
    The open axis is inverse-Fourier transformed, giving a 2L x 2L kernel
    with range-1 hopping blocks and open ends.
    """
    sx, sy, sz = _PAULI["x"], _PAULI["y"], _PAULI["z"]
    if cut_axis == "x":
        # open axis is y: cos ky -> t*sx, sin ky -> t*sz
        onsite = (m + t * np.cos(k_perp)) * sx + (1j * gamma + t * np.sin(k_perp)) * sy
        cos_blk, sin_blk = t * sx, t * sz
    elif cut_axis == "y":
        # open axis is x: cos kx -> t*sx, sin kx -> t*sy
        onsite = (m + t * np.cos(k_perp)) * sx + 1j * gamma * sy + t * np.sin(k_perp) * sz
        cos_blk, sin_blk = t * sx, t * sy
    else:
        raise ValueError(f"cut_axis must be 'x' or 'y', got {cut_axis!r}")
    # cos k -> K(+-1) += B/2 ; sin k -> K(+1) += (i/2) C, K(-1) -= (i/2) C
    hop_plus = cos_blk / 2.0 + 0.5j * sin_blk
    hop_minus = cos_blk / 2.0 - 0.5j * sin_blk
    return _two_band_chain(L, onsite, hop_plus, hop_minus, "open")


def build_eb_ssh(L: int, nu: float, w: float, gamma0: float,
                 bc: str = "periodic") -> KernelMatrix:
    """Generalized SSH chain hosting exceptional bound states.

    Bloch form (after exchanging the sy and sz components so the real-space
    kernel matches the long-wavelength normal form with B=2, a0=2(nu-w),
    b0=w/2):
    H(k) = (nu - w cos k) sx + i(nu - w) sy + gamma0 sin k sz.
    The spectrum +-sqrt((nu - w cos k)^2 + gamma0^2 sin^2 k - (nu - w)^2)
    vanishes at k=0 for every parameter choice; for nu != w the k=0 block is
    a nilpotent Jordan block (an exceptional point).
    """
    sx, sy, sz = _PAULI["x"], _PAULI["y"], _PAULI["z"]
    onsite = nu * sx + 1j * (nu - w) * sy
    cos_blk, sin_blk = -w * sx, gamma0 * sz
    hop_plus = cos_blk / 2.0 + 0.5j * sin_blk
    hop_minus = cos_blk / 2.0 - 0.5j * sin_blk
    return _two_band_chain(L, onsite, hop_plus, hop_minus, bc)


def build_measurement_heff(L: int, t: float, Gamma: float, bc: str = "open") -> KernelMatrix:
    """Effective chain for no-jump monitoring of right-moving wave packets.

    H_eff = (1/4) sum_i [(-t + Gamma) c+_i c_{i+1} - (t + Gamma) c+_{i+1} c_i
            - i Gamma (n_i + n_{i+1})],
    a special case of the Hatano-Nelson model; every site accumulates
    -i Gamma / 4 per adjacent bond.  At Gamma = t the rightward hopping
    coefficient vanishes and transport is unidirectional.
    """
    if L < 2:
        raise SizeError(f"measurement chain needs L >= 2, got {L}")
    if Gamma < 0:
        raise ValueError(f"Gamma must be >= 0, got {Gamma}")
    km = _empty(L, bc)
    K = km.entries
    bonds = range(L) if bc == "periodic" else range(L - 1)
    for i in bonds:
        j = (i + 1) % L
        K[i, j] += (-t + Gamma) / 4.0
        K[j, i] += -(t + Gamma) / 4.0
        K[i, i] += -0.25j * Gamma
        K[j, j] += -0.25j * Gamma
    return km


def build_heff_from_jumps(H: KernelMatrix, jumps, rates) -> KernelMatrix:
    """Quadratic effective kernel H - (i/2) sum_i Gamma_i L+_i L_i.

    Each jump is ('linear', u) for L = sum_j u_j c_j, contributing
    -(i/2) Gamma outer(u*, u), or ('projector', xi) for L = P = xi+ xi with
    unit-normalized xi, contributing -(i/2) Gamma outer(xi, xi*) since
    P+P = P.
    """
    if len(jumps) != len(rates):
        raise ValueError("jumps and rates must have equal length")
    K = H.entries.copy()
    for (kind, vec), rate in zip(jumps, rates):
        if rate < 0:
            raise ValueError(f"jump rate must be >= 0, got {rate}")
        v = np.asarray(vec, dtype=complex)
        if v.shape != (H.dim,):
            raise SizeError(f"jump vector length {v.shape} != kernel dim {H.dim}")
        if kind == "linear":
            K += -0.5j * rate * np.outer(v.conj(), v)
        elif kind == "projector":
            norm = np.linalg.norm(v)
            if abs(norm - 1.0) > 1e-10:
                raise NormalizationError(
                    f"projector vector norm {norm} != 1; idempotence would fail")
            K += -0.5j * rate * np.outer(v, v.conj())
        else:
            raise ValueError(f"unknown jump kind {kind!r}")
    return KernelMatrix(H.dim, K, H.bc, list(H.site_labels))


# ---------------------------------------------------------------------------
# momentum-space utilities
# ---------------------------------------------------------------------------

def bloch_momenta(n_cells: int) -> np.ndarray:
    """Momentum grid k_m = 2 pi m / N, m = 0 .. N-1."""
    return 2.0 * np.pi * np.arange(n_cells) / n_cells


def bloch_reduce(km: KernelMatrix, k: float) -> np.ndarray:
    """Bloch matrix H(k)_{ss'} = sum_x K[(x,s),(0,s')] exp(-i k x) of a
    periodic, cell-translation-invariant kernel.

    Exact on the discrete grid k = 2 pi m / N for any integer m.
    """
    ns = km.n_sublattices
    nc = km.n_cells
    if km.bc != "periodic":
        raise ValueError("Bloch reduction requires a periodic kernel")
    # index lookup site -> (cell, sub)
    pos = {}
    for i, (c, s) in enumerate(km.site_labels):
        pos[(c, s)] = i
    h = np.zeros((ns, ns), dtype=complex)
    for s in range(ns):
        for sp in range(ns):
            col = pos[(0, sp)]
            acc = 0.0 + 0.0j
            for x in range(nc):
                acc += km.entries[pos[(x, s)], col] * np.exp(-1j * k * x)
            h[s, sp] = acc
    return h


# ---------------------------------------------------------------------------
# model specifications
# ---------------------------------------------------------------------------

@dataclass
class ModelSpec:
    """Family tag plus parameter map, deserializable from run configs."""

    family: str
    params: dict
    bc: str = "periodic"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(
                f"unknown model family {self.family!r}; known: {sorted(FAMILIES)}")
        required, _ = FAMILIES[self.family]
        missing = [p for p in required if p not in self.params]
        if missing:
            raise ValueError(
                f"family {self.family!r} missing parameters {missing}")
        extra = [p for p in self.params if p not in required]
        if extra:
            raise ValueError(
                f"family {self.family!r} got unknown parameters {extra}")

    def build(self) -> KernelMatrix:
        return FAMILIES[self.family][1](self)


def _spec_alpha(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    return Fraction(value)


# family name -> (required parameter names, builder adapter)
FAMILIES = {
    "hatano_nelson": (
        ("L", "t", "alpha"),
        lambda s: build_hatano_nelson(int(s.params["L"]), s.params["t"],
                                      s.params["alpha"], s.bc)),
    "uniform_chain": (
        ("L", "t"),
        lambda s: build_uniform_chain(int(s.params["L"]), s.params["t"], s.bc)),
    "nh_ssh": (
        ("N_cells", "omega", "upsilon", "u"),
        lambda s: build_nh_ssh_real(int(s.params["N_cells"]), s.params["omega"],
                                    s.params["upsilon"], s.params["u"], s.bc)),
    "quasicrystal_exp": (
        ("L", "J_L", "J_R", "V", "alpha"),
        lambda s: build_quasicrystal(int(s.params["L"]), s.params["J_L"],
                                     s.params["J_R"], s.params["V"],
                                     _spec_alpha(s.params["alpha"]),
                                     "exp_phase", 0.0, s.bc)),
    "quasicrystal_mobility": (
        ("L", "J_L", "J_R", "V", "alpha", "a"),
        lambda s: build_quasicrystal(int(s.params["L"]), s.params["J_L"],
                                     s.params["J_R"], s.params["V"],
                                     _spec_alpha(s.params["alpha"]),
                                     "mobility_edge", s.params["a"], s.bc)),
    "guo_chain": (
        ("L", "n", "t", "gamma"),
        lambda s: build_guo_chain(int(s.params["L"]), int(s.params["n"]),
                                  s.params["t"], s.params["gamma"], s.bc)),
    "guo_2d": (
        ("Lx", "Ly", "gamma"),
        lambda s: build_guo_2d(int(s.params["Lx"]), int(s.params["Ly"]),
                               s.params["gamma"], s.bc)),
    "chern_ribbon": (
        ("L", "k_perp", "t", "m", "gamma", "cut_axis"),
        lambda s: build_chern_ribbon(int(s.params["L"]), s.params["k_perp"],
                                     s.params["t"], s.params["m"],
                                     s.params["gamma"], s.params["cut_axis"])),
    "eb_ssh": (
        ("L", "nu", "w", "gamma0"),
        lambda s: build_eb_ssh(int(s.params["L"]), s.params["nu"],
                               s.params["w"], s.params["gamma0"], s.bc)),
    "measurement_chain": (
        ("L", "t", "Gamma"),
        lambda s: build_measurement_heff(int(s.params["L"]), s.params["t"],
                                         s.params["Gamma"], s.bc)),
}


def build_from_spec(spec: ModelSpec) -> KernelMatrix:
    """Construct the kernel for a validated model specification."""
    return spec.build()
