"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the verdict lines.

Criterion 2 (negative central charge of the staggered-iu chain at its PT
boundary, from the standard von Neumann entropy on a periodic ring) is
expected to fail: the measured effective charge at that point is positive
and non-universal.  The computation itself is verified against the exact
many-body oracle; see the companion test, which pins the attainable form of
the negative-charge physics (the modified entropy under open boundaries)
at the same parameter point.  Details in notes kept outside the package.
"""

import itertools
import time
from fractions import Fraction

import numpy as np
import pytest

from nhent import (FockOperator, Partition, ScalingSeries, biorthogonal_eig,
                   bloch_system, build_eb_ssh, build_hatano_nelson,
                   build_measurement_heff, build_nh_ssh_real,
                   build_quasicrystal, build_uniform_chain, check_duality,
                   correlation_matrix, count_fermi_points, domain_wall_state,
                   dual_momentum_partition, entropy_series, evolve_no_jump,
                   fit_central_charge, fock_hamiltonian, ground_state_system,
                   lifshitz_scan, manybody_biortho_ground, modified_entropy,
                   oracle_report, partial_trace, report_for_partition,
                   select_occupied, self_dual_scan, staggered_state,
                   vn_entropy)
from nhent.pipeline import oracle_equivalence_suite

HALF = Fraction(1, 2)


def verdict(num, name, ok, details):
    line = f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'} ({details})"
    print(line)
    assert ok, line


def entropy_profile(system, selection, sizes, length, geometry="chord"):
    return entropy_series(system, selection, sizes=sizes, geometry=geometry)


def fit_with_fallback(series, imag_tol=1e-6):
    """Spec'd imaginary filter first; fall back to the raw real parts.

    The fallback only matters for spectra polluted by exceptional-point
    noise, where it reports what the data actually shows.
    """
    from nhent.errors import InsufficientDataError
    try:
        return fit_central_charge(series, imag_tol=imag_tol), True
    except InsufficientDataError:
        return fit_central_charge(series, imag_tol=np.inf), False


def test_01_hermitian_chain_calibration():
    t0 = time.perf_counter()
    K = build_uniform_chain(128, 1.0, "periodic")
    sys_k, sel = ground_state_system(K, HALF)
    series = entropy_profile(sys_k, sel, range(4, 125), 128)
    fit = fit_central_charge(series)
    elapsed = time.perf_counter() - t0
    ok = abs(fit.c - 1.0) <= 0.05 and elapsed < 30.0
    verdict(1, "hermitian chain c=1", ok,
            f"c={fit.c:.4f}, elapsed={elapsed:.1f}s")


def test_02_nh_ssh_negative_central_charge():
    # boundary point omega - upsilon = u, recorded here as the run config
    omega, upsilon, u = 1.0, 0.3, 0.7
    results = []
    for L in (64, 128, 256):
        K = build_nh_ssh_real(L // 2, omega, upsilon, u, "periodic")
        sys_k, sel = ground_state_system(K, HALF)
        series = entropy_profile(sys_k, sel, range(4, L - 3, 4), L)
        fit, filtered = fit_with_fallback(series)
        results.append((L, fit.c, filtered))
    cs = [c for _, c, _ in results]
    slope_ok = all(abs(c / 3 + 0.666) <= 0.2 / 3 for c in cs)
    ok = all(abs(c + 2.0) <= 0.2 for c in cs) and slope_ok
    verdict(2, "nh-ssh critical charge -2", ok,
            "; ".join(f"L={L}: c={c:.3f}{'' if f else ' (unfiltered)'}"
                      for L, c, f in results))


def test_02_companion_modified_entropy_charge():
    # same boundary point, open chain: the modified entropy carries the
    # nonunitary charge -2 (one entanglement boundary, so c = 6 x slope)
    omega, upsilon, u = 1.0, 0.3, 0.7
    pts = []
    for n_cells in (32, 48, 64, 96, 128, 192):
        K = build_nh_ssh_real(n_cells, omega, upsilon, u, "open")
        sys_k, sel = ground_state_system(K, HALF)
        C = correlation_matrix(sys_k, sel, Partition.half(K.dim))
        eps = np.linalg.eigvals(C.entries)
        pts.append((n_cells, complex(modified_entropy(eps))))
    series = ScalingSeries(193, pts, "open_log")
    fit = fit_central_charge(series, window=(1, 192))
    c_open = 2.0 * fit.c
    ok = -2.35 <= c_open <= -1.6
    verdict(2, "companion: modified-entropy charge (open bc)", ok,
            f"c={c_open:.3f}")


def test_03_midgap_conjugate_pair():
    # topological PT-symmetric phase, open chain of 100 sites; the central
    # 50-site cut severs two strong inter-cell bonds
    K = build_nh_ssh_real(50, 1.0, 0.4, 0.3, "open")
    sys_k, sel = ground_state_system(K, HALF)
    part = Partition.contiguous(26, 76, 100)
    report = report_for_partition(sys_k, sel, part)
    eps = report.correlation_eigenvalues[report.midgap_modes]
    ok = report.n_midgap == 2
    pair_ok = False
    if ok:
        a, b = eps
        # the pair straddles 1/2: partners under both eps -> 1 - eps and
        # complex conjugation
        pair_ok = abs(b - (1 - a)) < 1e-6 and abs(b - np.conj(a)) < 1e-6
    im_ok = abs(report.entropy_vn.imag) < 1e-8
    verdict(3, "mid-gap conjugate pair", ok and pair_ok and im_ok,
            f"n_midgap={report.n_midgap}, eps={np.round(eps, 4)}, "
            f"|Im S|={abs(report.entropy_vn.imag):.1e}")


def test_04_type_one_alpha_independence():
    entropies = {}
    for alpha in (0.0, 0.25, 0.5, 1.0):
        K = build_hatano_nelson(100, 1.0, alpha, "open")
        sys_k, sel = ground_state_system(K, HALF)
        report = report_for_partition(sys_k, sel, Partition.half(100))
        entropies[alpha] = report.entropy_vn
    dev = max(abs(entropies[a] - entropies[0.0]) for a in entropies)
    verdict(4, "nonreciprocal alpha-independence", dev < 1e-6,
            f"max |S(alpha)-S(0)| = {dev:.2e}")


def test_05_fermi_point_counting():
    def factory(gamma):
        return bloch_system(build_guo_chain_256(gamma))

    def build_guo_chain_256(gamma):
        from nhent import build_guo_chain
        return build_guo_chain(256, 2, 1.0, gamma, "periodic")

    hit = lifshitz_scan(np.arange(3.1, 5.0, 0.2), factory, HALF)
    assert hit is not None, "no Lifshitz point detected in the scan"
    g_lo, g_hi, nf_lo, nf_hi = hit

    details = [f"gamma_c in ({g_lo:.1f}, {g_hi:.1f}), N_f {nf_lo}->{nf_hi}"]
    ok = nf_hi == 2 * nf_lo
    s_at_fixed = {}
    for gamma, nf in ((3.5, 2), (4.5, 4)):
        sys_k = factory(gamma)
        sel = select_occupied(sys_k, HALF)
        assert count_fermi_points(sys_k, sel) == nf
        series = entropy_profile(sys_k, sel, range(4, 253, 4), 256)
        # the tie-broken k=pi pair injects ~1e-2 imaginary parts; the real
        # slope is the signal
        fit = fit_central_charge(series, imag_tol=0.05)
        ok = ok and abs(fit.c - nf / 2) <= 0.1
        s_at_fixed[gamma] = dict(series.points)[128].real
        details.append(f"gamma={gamma}: c={fit.c:.3f} vs N_f/2={nf / 2}")
    jump = s_at_fixed[4.5] - s_at_fixed[3.5]
    ok = ok and jump > 0.5
    details.append(f"S(128) jump {jump:+.2f}")
    verdict(5, "fermi-point counting", ok, "; ".join(details))


def test_06_eb_crossover():
    # open-boundary half cut has a single entanglement boundary, so the
    # physical charge is 6 x slope = 2 x the chord-normalized fit
    nu, w = 1.0, 0.5
    sizes = list(range(24, 257, 16))

    def charge(gamma0, imag_tol):
        pts = []
        for n_cells in sizes:
            K = build_eb_ssh(n_cells, nu, w, gamma0, "open")
            sys_k, sel = ground_state_system(K, HALF)
            C = correlation_matrix(sys_k, sel, Partition.half(K.dim))
            pts.append((n_cells, vn_entropy(np.linalg.eigvals(C.entries))))
        series = ScalingSeries(sizes[-1] + 1, pts, "open_log")
        return 2.0 * fit_central_charge(series, window=(1, sizes[-1]),
                                        imag_tol=imag_tol).c

    # at gamma0 = 0 the real kernel's conjugate eigenvalue pairs are split
    # by half filling, leaving imaginary artifacts on S; the real part
    # carries the scaling (cross-checked at gamma0 = 1e-3 where S is real)
    c_zero = charge(0.0, np.inf)
    c_tiny = charge(1e-3, 1e-6)
    c_large = charge(4.0, 1e-6)
    ok = (abs(c_zero + 2.0) <= 0.3 and abs(c_tiny + 2.0) <= 0.3
          and abs(c_large - 1.0) <= 0.3)
    verdict(6, "eb crossover -2 -> 1", ok,
            f"c(0)={c_zero:.3f}, c(1e-3)={c_tiny:.3f}, c(4.0)={c_large:.3f}")


def test_07_oracle_equivalence_suite():
    t0 = time.perf_counter()
    results = oracle_equivalence_suite(n_cases=20, n_modes=8, subsystem=4)
    elapsed = time.perf_counter() - t0
    worst_s = max(r["entropy_residual"] for r in results)
    worst_spec = max(r["spectrum_residual"] for r in results)
    worst_pur = max(r["purity_residual"] for r in results)
    ok = all(r["passed"] for r in results) and elapsed < 120.0
    verdict(7, "oracle equivalence", ok,
            f"{len(results)} cases, |dS|<{worst_s:.1e}, "
            f"spec<{worst_spec:.1e}, purity<{worst_pur:.1e}, "
            f"elapsed={elapsed:.1f}s")


def test_08_duality_spectrum_equality():
    cases = {
        "hermitian ssh": build_nh_ssh_real(16, 1.0, 0.5, 0.0, "periodic"),
        "nh ssh pt": build_nh_ssh_real(16, 1.0, 0.4, 0.3, "periodic"),
        "hatano-nelson": build_hatano_nelson(30, 1.0, 0.3, "open"),
        "quasicrystal": build_quasicrystal(34, 0.5, 1.0, 0.5,
                                           Fraction(21, 34), "exp_phase"),
        "guo": __import__("nhent").build_guo_chain(32, 2, 1.0, 0.4),
    }
    mismatches = {}
    for name, K in cases.items():
        sys_k, sel = ground_state_system(K, HALF)
        rep = check_duality(sys_k, sel, Partition.half(K.dim))
        mismatches[name] = rep.max_mismatch
    ok = all(v < 1e-9 for v in mismatches.values())
    verdict(8, "duality RPR vs PRP", ok,
            ", ".join(f"{k}={v:.1e}" for k, v in mismatches.items()))


def test_09_quasicrystal_transition_scan():
    L, p = 144, 89
    alpha = Fraction(p, L)

    def factory(V):
        return build_quasicrystal(L, 0.0, 1.0, V, alpha, "exp_phase",
                                  bc="periodic")

    scan = self_dual_scan(np.arange(0.35, 1.76, 0.1), factory, HALF,
                          momentum_partition=dual_momentum_partition(L, p))
    ok = scan.crossing is not None
    drop = np.nan
    if ok:
        i = int(np.searchsorted(scan.values, scan.crossing))
        lo, hi = max(i - 1, 0), min(i, len(scan.values) - 1)
        drop = scan.entropy_real[hi] / scan.entropy_real[lo]
        ok = drop < 0.5
    verdict(9, "quasicrystal self-dual transition", ok,
            f"V*={scan.crossing:.4f} (recorded), "
            f"S drop ratio across V* = {drop:.3f}")


def test_10_dynamics_checks():
    # (a) Hermitian limit against an independent unitary reference
    L = 32
    part = Partition.half(L)
    psi0 = domain_wall_state(L)
    t_grid = np.linspace(0.0, 10.0, 11)
    K0 = build_measurement_heff(L, 1.0, 0.0, "open")
    records = evolve_no_jump(K0, psi0, t_grid, part)
    w, V = np.linalg.eigh(K0.entries)
    C0 = psi0.correlation()
    dev_a = 0.0
    for t, C, report in records:
        U = (V * np.exp(-1j * w * t)) @ V.conj().T
        ref = (U @ C0 @ U.conj().T)[np.ix_(part.indices, part.indices)]
        s_ref = vn_entropy(np.linalg.eigvalsh(ref))
        dev_a = max(dev_a, abs(report.entropy_vn - s_ref))
    ok_a = dev_a < 1e-8

    # (b) purity along a non-Hermitian evolution
    K1 = build_measurement_heff(L, 1.0, 0.5, "open")
    full = Partition("position", tuple(range(L)), L)
    purity = 0.0
    for t, C, _ in evolve_no_jump(K1, staggered_state(L), t_grid, full):
        sv = np.linalg.svd(C.entries @ C.entries - C.entries,
                           compute_uv=False)
        purity = max(purity, sv.sum())
    ok_b = purity < 1e-9

    # (c) monitored chain suppresses the linear entanglement growth
    L2 = 48
    part2 = Partition.half(L2)
    ts = np.arange(2.0, 25.0, 2.0)
    free = evolve_no_jump(build_measurement_heff(L2, 1.0, 0.0, "open"),
                          staggered_state(L2), ts, part2)
    damp = evolve_no_jump(build_measurement_heff(L2, 1.0, 0.5, "open"),
                          staggered_state(L2), ts, part2)
    gaps = [rf.entropy_vn.real - rd.entropy_vn.real
            for (_, _, rf), (_, _, rd) in zip(free, damp)]
    ok_c = all(g > 0 for g in gaps)

    verdict(10, "no-jump dynamics", ok_a and ok_b and ok_c,
            f"unitary dev={dev_a:.1e}, purity={purity:.1e}, "
            f"min suppression gap={min(gaps):.3f}")


def test_11_modified_entropy_consistency():
    # realness on conjugate-closed spectra
    rng = np.random.default_rng(42)
    worst_resid = 0.0
    for _ in range(50):
        n_pairs = rng.integers(1, 5)
        eps = []
        for _ in range(n_pairs):
            re, im = rng.normal(0.5, 0.8), abs(rng.normal(0, 0.5)) + 0.01
            eps.extend([complex(re, im), complex(re, -im)])
        eps.extend(rng.uniform(0.01, 0.99, size=rng.integers(0, 4)))
        raw = -np.sum([e * np.log(abs(e)) + (1 - e) * np.log(abs(1 - e))
                       for e in np.asarray(eps, dtype=complex)])
        worst_resid = max(worst_resid, abs(raw.imag))
        modified_entropy(eps)  # must not raise
    ok_real = worst_resid < 1e-9

    # Hermitian limit equals the standard entropy
    K = build_uniform_chain(12, bc="open")
    sys_k, sel = ground_state_system(K, HALF)
    C = correlation_matrix(sys_k, sel, Partition.half(12))
    eps = np.linalg.eigvalsh(C.entries)
    dev_h = abs(modified_entropy(eps) - vn_entropy(eps).real)
    ok_h = dev_h < 1e-10

    # against the many-body -Tr rho ln|rho| on 8-mode instances
    dev_o = 0.0
    for K in (build_hatano_nelson(8, 1.0, 0.5, "open"),
              build_nh_ssh_real(4, 0.4, 1.0, 0.3, "open")):
        sys_k, sel = ground_state_system(K, HALF)
        C = correlation_matrix(sys_k, sel, Partition.contiguous(0, 4, 8))
        s_fast = modified_entropy(np.linalg.eigvals(C.entries))
        G_R, G_L, _ = manybody_biortho_ground(fock_hamiltonian(K), 4)
        rho = np.outer(G_R, G_L.conj())
        rho_A = partial_trace(FockOperator(8, rho, list(range(8))), 4)
        dev_o = max(dev_o, abs(s_fast - oracle_report(rho_A).entropy_modified))
    ok_o = dev_o < 1e-8

    verdict(11, "modified entropy consistency", ok_real and ok_h and ok_o,
            f"Im residual<{worst_resid:.1e}, hermitian dev={dev_h:.1e}, "
            f"oracle dev={dev_o:.1e}")
