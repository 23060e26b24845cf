"""Early numerical probes for the acceptance parameter choices. Not shipped."""
import warnings
import numpy as np

import nhent
from nhent import (Partition, biorthogonal_eig, bloch_system, build_eb_ssh,
                   build_hatano_nelson, build_nh_ssh_real, build_guo_chain,
                   build_uniform_chain, count_fermi_points, entropy_series,
                   fit_central_charge, ground_state_system,
                   report_for_partition, select_occupied)

warnings.simplefilter("ignore")
np.set_printoptions(precision=6, suppress=False)


def probe_hermitian_chain():
    print("== E2: Hermitian chain L=128 PBC half filling, chord fit ==")
    K = build_uniform_chain(128, 1.0, "periodic")
    sys, sel = ground_state_system(K, 0.5)
    ser = entropy_series(sys, sel, sizes=range(4, 125), geometry="chord")
    fit = fit_central_charge(ser)
    print(f"  c = {fit.c:.4f}  b = {fit.intercept:.4f}  rms = {fit.rms_residual:.2e}")


def probe_nh_ssh_critical():
    print("== E1: NH SSH critical point (omega-upsilon=u), PBC ==")
    for n_cells in (32, 64, 128):
        K = build_nh_ssh_real(n_cells, 1.0, 0.3, 0.7, "periodic")
        try:
            sys = biorthogonal_eig(K)
        except nhent.DefectiveError as e:
            print(f"  N={n_cells}: DefectiveError cond={e.condition_estimate:.2e}")
            continue
        sel = select_occupied(sys, 0.5)
        L = K.dim
        ser = entropy_series(sys, sel, sizes=range(4, L - 3, 2), geometry="chord")
        ims = [abs(complex(s).imag) for _, s in ser.points]
        fit = fit_central_charge(ser, imag_tol=1e50)
        fit2 = None
        try:
            fit2 = fit_central_charge(ser)
        except nhent.InsufficientDataError:
            pass
        res = [complex(s).real for _, s in ser.points]
        print(f"  N={n_cells} cond={sys.condition_estimate:.2e} maxImS={max(ims):.2e} "
              f"c(all)={fit.c:.4f} c(imtol)={'%.4f' % fit2.c if fit2 else 'n/a'} "
              f"S[0]={res[0]:.3f} S[mid]={res[len(res)//2]:.3f}")


def probe_midgap():
    print("== E3: NH SSH topological phase, open L=100 sites, midgap count ==")
    K = build_nh_ssh_real(50, 1.0, 0.4, 0.3, "open")
    sys, sel = ground_state_system(K, 0.5)
    for name, part in [("leading half", Partition.half(100)),
                       ("central half", Partition.central_half(100))]:
        rep = report_for_partition(sys, sel, part)
        mg = rep.correlation_eigenvalues[rep.midgap_modes]
        print(f"  {name}: n_midgap={rep.n_midgap} eps={np.round(mg, 6)} "
              f"ImS={rep.entropy_vn.imag:.2e} ReS={rep.entropy_vn.real:.4f}")
        if rep.n_midgap == 2:
            a, b = mg
            print(f"    pair check |b - (1-conj(a))| = {abs(b - (1 - np.conj(a))):.2e}")


def probe_hatano_alpha():
    print("== E4: Hatano-Nelson alpha-independence, open L=100 ==")
    vals = {}
    for alpha in (0.0, 0.25, 0.5, 1.0):
        K = build_hatano_nelson(100, 1.0, alpha, "open")
        sys, sel = ground_state_system(K, 0.5)
        rep = report_for_partition(sys, sel, Partition.half(100))
        vals[alpha] = rep.entropy_vn
        print(f"  alpha={alpha}: cond={sys.condition_estimate:.2e} "
              f"S={rep.entropy_vn.real:.10f}+{rep.entropy_vn.imag:.2e}i")
    base = vals[0.0]
    for a, s in vals.items():
        print(f"    |S({a})-S(0)| = {abs(s - base):.3e}")


def probe_eb():
    print("== E5: EB generalized SSH ==")
    for nu, w, g0 in [(0.5, 0.5, 0.0), (0.5, 0.5, 1.0), (1.0, 0.5, 0.0),
                      (1.0, 0.5, 0.3), (1.0, 0.5, 1.5), (1.0, 0.5, 3.0)]:
        cs = []
        for n_cells in (64, 128):
            K = build_eb_ssh(n_cells, nu, w, g0, "periodic")
            try:
                sys = biorthogonal_eig(K)
            except nhent.DefectiveError as e:
                cs.append(f"DEFECT({e.condition_estimate:.1e})")
                continue
            sel = select_occupied(sys, 0.5)
            L = K.dim
            ser = entropy_series(sys, sel, sizes=range(4, L - 3, 2), geometry="chord")
            try:
                fit = fit_central_charge(ser)
                cs.append(f"{fit.c:.3f}(rms {fit.rms_residual:.1e})")
            except nhent.InsufficientDataError:
                fit = fit_central_charge(ser, imag_tol=1e50)
                cs.append(f"[imS!] {fit.c:.3f}")
        print(f"  nu={nu} w={w} g0={g0}: c = {cs}")


def probe_guo():
    print("== E6: Guo chain n=2 Lifshitz ==")
    for gamma in (3.0, 3.5, 3.9, 4.1, 4.5):
        K = build_guo_chain(256, 2, 1.0, gamma, "periodic")
        sys = bloch_system(K)
        sel = select_occupied(sys, 0.5)
        nf = count_fermi_points(sys, sel)
        ser = entropy_series(sys, sel, sizes=range(4, 253, 4), geometry="chord")
        try:
            fit = fit_central_charge(ser)
            c = f"{fit.c:.3f}"
        except nhent.InsufficientDataError:
            fit = fit_central_charge(ser, imag_tol=1e50)
            c = f"[imS!] {fit.c:.3f}"
        s_fixed = dict(ser.points)[128]
        print(f"  gamma={gamma}: N_f={nf} c={c} S(L_A=128)={complex(s_fixed).real:.4f}")


def probe_quasicrystal():
    print("== E7: quasicrystal exp-phase J_L=0, L=144 ==")
    from fractions import Fraction
    from nhent import build_quasicrystal, self_dual_scan
    alpha = Fraction(89, 144)

    def factory(V):
        return build_quasicrystal(144, 0.0, 1.0, V, alpha, "exp_phase", bc="periodic")

    vals = np.arange(0.35, 1.76, 0.1)
    scan = self_dual_scan(vals, factory, 0.5)
    for v, sr, sm in zip(scan.values, scan.entropy_real, scan.entropy_momentum):
        print(f"  V={v:.2f}  S_real={sr:9.4f}  S_mom={sm:9.4f}")
    print(f"  crossing V* = {scan.crossing}")


def probe_dynamics():
    print("== E8: measurement chain suppression ==")
    from nhent import build_measurement_heff, domain_wall_state, evolve_no_jump
    L = 32
    part = Partition.half(L)
    psi0 = domain_wall_state(L)
    ts = np.linspace(0.0, 40.0, 21)
    recs0 = evolve_no_jump(build_measurement_heff(L, 1.0, 0.0, "open"), psi0, ts, part)
    recs1 = evolve_no_jump(build_measurement_heff(L, 1.0, 0.5, "open"), psi0, ts, part)
    for (t, _, r0), (_, _, r1) in list(zip(recs0, recs1)):
        print(f"  t={t:5.1f}  S(G=0)={r0.entropy_vn.real:8.4f}  S(G=0.5)={r1.entropy_vn.real:8.4f}")


if __name__ == "__main__":
    probe_hermitian_chain()
    probe_nh_ssh_critical()
    probe_midgap()
    probe_hatano_alpha()
    probe_eb()
    probe_guo()
    probe_quasicrystal()
    probe_dynamics()
