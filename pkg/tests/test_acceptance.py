"""Acceptance criteria, one test each.

Every test evaluates its criterion in full, records one PASS/FAIL line
(printed in the pytest terminal summary, or directly when this file is run
as a script) and then asserts the verdict.
"""
import math
import sys

import numpy as np

from conftest import record_criterion
from intellight import fock
from intellight.analysis import (exponent_estimate, g_factor_su2, g_factor_su11, g_limits,
                                 intelligent_sensitivity, parallel_map, quasi_intelligent_stats,
                                 su2_exponent_sweep, su11_exponent_sweep)
from intellight.interferometer import (GlauberAmp, MixerParam, output_observable, phase_uncertainty,
                                       su2_coherent_sensitivity, su2_fock_sensitivity,
                                       su2_glauber_sensitivity, su2_squeezed_sensitivity,
                                       su11_coherent_sensitivity, su11_glauber_sensitivity,
                                       su11_kn_sensitivity)
from intellight.states import RepState, moments
from intellight.su2 import (Su2IntelligentSpec, Su2Irrep, su2_coherent, su2_intelligent,
                            su2_intelligent_eigen_oracle, su2_intelligent_spectrum,
                            su2_norm_factor, su2_state_moments, su2_variance_j3_closed)
from intellight.su11 import (Su11IntelligentSpec, Su11Irrep, su11_coherent, su11_intelligent,
                             su11_intelligent_eigen_oracle, su11_intelligent_spectrum,
                             su11_norm_factor, su11_state_moments, su11_variance_k3_closed)

ETA_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))
HALF_INTEGERS_TO_20 = tuple(n / 2 for n in range(1, 41))
K_GRID = (0.5, 1, 1.5)
L_GRID = tuple(range(11))
SU11_ETA_WIDE = ETA_GRID + (1.0, 2.0, 5.0)


class Tally:
    """Worst deviation per labelled part, with its location."""

    def __init__(self):
        self.parts = {}

    def add(self, part, dev, tol, where):
        worst, _, _ = self.parts.get(part, (-1.0, tol, ""))
        dev = float(dev)
        if math.isnan(dev):
            dev = math.inf
        if dev > worst:
            self.parts[part] = (dev, tol, where)

    def flag(self, part, ok, where):
        self.add(part, 0.0 if ok else math.inf, 0.0, where)

    @property
    def passed(self):
        return all(dev <= tol for dev, tol, _ in self.parts.values())

    def detail(self):
        out = []
        for part, (dev, tol, where) in self.parts.items():
            mark = "ok" if dev <= tol else "VIOLATED"
            if tol == 0.0:
                out.append(f"{part} {mark}" + ("" if dev <= tol else f" at {where}"))
            else:
                out.append(f"{part} {dev:.2g}<={tol:g} {mark}" + ("" if dev <= tol else f" at {where}"))
        return "; ".join(out)


def rel(a, b):
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(b), 1e-300)


def finish(name, tally):
    line = record_criterion(name, tally.passed, tally.detail())
    if __name__ == "__main__":
        print(line, flush=True)
    assert tally.passed, line


def basis(group, label, index, dim):
    amps = np.zeros(dim)
    amps[index] = 1
    return RepState(group, label, amps)


def test_quantization_spectra():
    t = Tally()
    for j in HALF_INTEGERS_TO_20:
        m = np.arange(-j, j + 1)
        for eta in ETA_GRID:
            got = su2_intelligent_spectrum(Su2Irrep(j), eta)
            want = 1j * m * math.sqrt(1 - eta * eta)
            t.add("SU2 j<=20", np.abs(got - want).max(), 1e-9, f"j={j} eta={eta}")
    # low eigenvalues of the truncated K-operator; n_max = 96 certifies the n_max = 64 values
    for k in K_GRID:
        want = 1j * (k + np.arange(len(L_GRID)))
        for eta in ETA_GRID:
            got = su11_intelligent_spectrum(Su11Irrep(k, 64), eta)[:len(L_GRID)]
            t.add("SU11 l<=10", np.abs(got - want * math.sqrt(eta * eta + 1)).max(), 1e-8, f"k={k} eta={eta}")
            if eta == 0.9 or (eta == 0.1 and k == 1.5):
                big = su11_intelligent_spectrum(Su11Irrep(k, 96), eta)[:len(L_GRID)]
                t.add("SU11 truncation 64 vs 96", np.abs(got - big).max(), 1e-8, f"k={k} eta={eta}")
    finish("quantization spectra", t)


def test_normalization_closed_vs_direct():
    t = Tally()
    for two_j in range(1, 61):
        j = two_j / 2
        for m0 in np.arange(-j, j + 1):
            for eta in (0.1, 0.5, 0.9):
                nf = su2_norm_factor(j, m0, eta)
                t.add("SU2 j<=30", rel(nf.closed, nf.direct), 1e-10, f"j={j} m0={m0} eta={eta}")
    for k in K_GRID:
        for l in L_GRID:
            for eta in SU11_ETA_WIDE:
                nf = su11_norm_factor(k, l, eta)
                t.add("SU11 series", rel(nf.closed, nf.direct), 1e-10, f"k={k} l={l} eta={eta}")
    finish("normalization closed vs direct", t)


def test_variance_vs_brute_force():
    t = Tally()
    for j in (0.5, 1, 2.5, 4, 7.5, 12, 20):
        for m0 in sorted({-j, -j + 1, 0 if j == int(j) else 0.5, j - 1, j}):
            if abs(m0) > j:
                continue
            for eta in (0.1, 0.5, 0.9):
                mom = su2_state_moments(su2_intelligent_eigen_oracle(j, m0, eta))
                closed = su2_variance_j3_closed(j, m0, eta)
                t.add("SU2 closed vs eigen-oracle", rel(closed, mom.variance(3)), 1e-8,
                      f"j={j} m0={m0} eta={eta}")
    # eta > 1 needs n_max ~ 128 (about 13 s per solve), so one such case is enough
    cases = [(k, l, eta) for k in K_GRID for l in (0, 1, 4, 10) for eta in (0.2, 0.9)] + [(0.5, 1, 2.0)]
    for k, l, eta in cases:
        mom = su11_state_moments(su11_intelligent_eigen_oracle(k, l, eta))
        closed = su11_variance_k3_closed(k, l, eta)
        t.add("SU11 closed vs eigen-oracle", rel(closed, mom.variance(3)), 1e-8, f"k={k} l={l} eta={eta}")
    for eta in (0.05, 0.3, 0.8, 0.99):
        t.add("Var(J3) j=1 m0=0", rel(su2_variance_j3_closed(1, 0, eta), eta ** 2 / (1 + eta ** 2)),
              1e-12, f"eta={eta}")
    for eta in (0.05, 0.3, 1.0, 4.0):
        want = (2 * eta ** 2 + 1) / (6 * eta ** 2 + 5)
        t.add("G(1/2,1)", rel(g_factor_su11(0.5, 1, eta).value, want), 1e-12, f"eta={eta}")
    finish("variance formulas vs brute force", t)


def test_intelligence_equality():
    t = Tally()
    for j in HALF_INTEGERS_TO_20:
        for m0 in np.arange(-j, j + 1):
            for eta in ETA_GRID:
                mom = su2_state_moments(su2_intelligent(Su2IntelligentSpec(j, m0, eta)))
                v2, v3 = mom.variance(2), mom.variance(3)
                where = f"j={j} m0={m0} eta={eta}"
                t.add("SU2 equality", rel(v2 * v3, mom.mean[0] ** 2 / 4), 1e-9, where)
                t.add("SU2 dJ3/dJ2=|eta|", abs(math.sqrt(v3 / v2) - eta), 1e-9, where)
    for k in K_GRID:
        for l in L_GRID:
            for eta in SU11_ETA_WIDE:
                mom = su11_state_moments(su11_intelligent(Su11IntelligentSpec(Su11Irrep(k), l, eta)))
                v2, v3 = mom.variance(2), mom.variance(3)
                where = f"k={k} l={l} eta={eta}"
                t.add("SU11 equality", rel(v2 * v3, mom.mean[0] ** 2 / 4), 1e-9, where)
                t.add("SU11 dK3/dK2=|eta|", abs(math.sqrt(v3 / v2) - eta) / max(1, eta), 1e-9, where)
    finish("intelligence equality", t)


def _propagated(mom, group, phi=0.0, beta=None):
    return phase_uncertainty(mom, output_observable(group, phi, beta))


def _same(a, b):
    if math.isinf(a) or math.isinf(b):
        return 0.0 if a == b else math.inf
    return rel(a, b)


def test_catalog_vs_propagation():
    t = Tally()
    phis = (0.1, 0.5, 1.0, math.pi / 2, 2.0, 3.0, -0.8)
    for j in (0.5, 1, 2.5, 6, 10):
        dim = int(2 * j + 1)
        for i, m in enumerate(np.arange(-j, j + 1)):
            mom = su2_state_moments(basis("SU2", j, i, dim))
            for phi in phis:
                t.add("|j,m>", _same(_propagated(mom, "SU2", phi), su2_fock_sensitivity(j, m, phi).delta_phi_squared),
                      1e-10, f"j={j} m={m} phi={phi}")
    for a, th, b, th2 in [(1, 0, 2, 0), (1.2, 0.4, 0.7, -0.1), (0.5, 1.0, 1.5, 0.2), (2, 0, 2, 0)]:
        amps = GlauberAmp(a, th, b, th2)
        st = fock.glauber_product_state(amps.alpha, amps.alpha2, tail_tol=1e-15)
        mom = moments(st.vector, fock.mode_operators(st.cutoffs).su2_set())
        t.add("SU2 Glauber", rel(_propagated(mom, "SU2"), su2_glauber_sensitivity(amps).delta_phi_squared),
              1e-10, f"amps={a},{th},{b},{th2}")
    for j in (0.5, 1, 4, 12.5):
        for zeta in (0.7, 1 + 1j, -0.3 + 2j, 3 - 0.5j):
            mom = su2_state_moments(su2_coherent(j, zeta))
            t.add("SU2 coherent", rel(_propagated(mom, "SU2"), su2_coherent_sensitivity(j, zeta).delta_phi_squared),
                  1e-10, f"j={j} zeta={zeta}")
    for beta in (0.3, 1.0, 2.0):
        mixer = MixerParam(beta)
        for k in K_GRID + (3,):
            for n in (0, 1, 3, 8):
                mom = su11_state_moments(basis("SU11", k, n, n + 20))
                for phi in phis:
                    got = _propagated(mom, "SU11", phi, beta)
                    t.add("|k,n> phi grid", rel(got, su11_kn_sensitivity(k, n, mixer, phi).delta_phi_squared),
                          1e-10, f"k={k} n={n} phi={phi} beta={beta}")
                small = _propagated(mom, "SU11", 1e-6, beta)
                t.add("|k,n> phi->0", rel(small, su11_kn_sensitivity(k, n, mixer).delta_phi_squared),
                      1e-10, f"k={k} n={n} beta={beta}")
            for zeta in (0.2, 0.5 - 0.3j, -0.6 + 0.1j):
                mom = su11_state_moments(su11_coherent(Su11Irrep(k), zeta))
                rep = su11_coherent_sensitivity(k, zeta, mixer)
                t.add("SU11 coherent", rel(_propagated(mom, "SU11", 0.0, beta), rep.delta_phi_squared),
                      1e-10, f"k={k} zeta={zeta} beta={beta}")
        for a, th, b, th2 in [(1, 0, 1, 0), (1.3, 0.2, 0.6, -0.5), (0.4, 1.0, 1.1, 0.3)]:
            amps = GlauberAmp(a, th, b, th2)
            st = fock.glauber_product_state(amps.alpha, amps.alpha2, tail_tol=1e-15)
            mom = moments(st.vector, fock.mode_operators(st.cutoffs).su11_set())
            t.add("SU11 Glauber", rel(_propagated(mom, "SU11", 0.0, beta),
                                      su11_glauber_sensitivity(amps, mixer).delta_phi_squared),
                  1e-10, f"amps={a},{th},{b},{th2} beta={beta}")
    finish("conventional-input catalog vs propagation", t)


def _squeezed_fock_case(case):
    mag, beta = case
    cut = fock.squeeze_cutoff(mag * mag, beta)
    st = fock.two_mode_squeeze(fock.pad(fock.glauber_product_state(mag, 0), (cut, cut)), beta)
    ops = fock.mode_operators(st.cutoffs)
    mom = moments(st.vector, ops.su2_set())
    return _propagated(mom, "SU2"), fock.fock_expectation(st, ops.N).real


def test_squeezed_input_duality():
    t = Tally()
    cases = [(m, b) for m in (0.25, 0.5, 1.0, 1.5) for b in (0.25, 0.5, 1.0, 1.5)]
    for (mag, beta), (dphi2, n) in zip(cases, parallel_map(_squeezed_fock_case, cases)):
        rep = su2_squeezed_sensitivity(GlauberAmp(mag), MixerParam(beta))
        t.add("closed vs Fock dphi2", rel(dphi2, rep.delta_phi_squared), 1e-6, f"|alpha|={mag} beta={beta}")
        t.add("closed vs Fock N", rel(n, rep.n_bar), 1e-6, f"|alpha|={mag} beta={beta}")
    rep = su2_squeezed_sensitivity(GlauberAmp(1.0), MixerParam(math.asinh(1.0)))
    t.add("(N+1)^2=8", rel((rep.n_bar + 1) ** 2, 8.0), 1e-14, "")
    t.add("dphi2=1 at |alpha|^2=1, sinh(beta)=1", rel(rep.curves["fixed-input"](rep.n_bar), 1.0), 1e-14, "")
    grid = np.geomspace(10, 2000, 60)
    e_fixed_beta = exponent_estimate([(n, math.sqrt(rep.curves["fixed-interferometer"](n))) for n in grid]).E
    e_fixed_alpha = exponent_estimate([(n, math.sqrt(rep.curves["fixed-input"](n))) for n in grid]).E
    t.add(f"fixed-beta E={e_fixed_beta:.4f}<=0.52", max(0.0, e_fixed_beta - 0.52), 0.0, "")
    t.add(f"fixed-alpha E={e_fixed_alpha:.4f}>=0.95", max(0.0, 0.95 - e_fixed_alpha), 0.0, "")
    finish("squeezed-input duality", t)


def _richardson_ratios(form, j, m0, eps_values):
    errs = []
    for eps in eps_values:
        g = g_factor_su2(j, m0, math.sqrt(1 - eps)).value
        errs.append(abs(g - g_limits("SU2", (j, m0), eps=eps)[form]))
    return [a / b for a, b in zip(errs, errs[1:])], errs


def test_limits():
    t = Tally()
    for j, m0 in [(1, 0), (5, 2), (15, 0), (15, 14), (20, -7)]:
        lim = g_limits("SU2", (j, m0))["eta_to_zero"]
        t.add("G eta->0 at 1e-4", rel(g_factor_su2(j, m0, 1e-4).value, lim), 1e-3, f"j={j} m0={m0}")
        hm = 1 / (2 * (j * j - m0 * m0 + j))
        got = intelligent_sensitivity("SU2", (j, m0), 1e-4).delta_phi_squared
        t.add("minimum-uncertainty value", rel(got, hm), 1e-3, f"j={j} m0={m0}")
    # error of an O(eps) expansion must fall by 4 per halving of eps
    eps_values = (0.02, 0.01, 0.005, 0.0025)
    for j, m0 in [(15, 0), (10, 3), (4, 1)]:
        ratios, errs = _richardson_ratios("near_one", j, m0, eps_values)
        worst = max(abs(r - 4) / 4 for r in ratios)
        t.add("near-one expansion O(eps^2) [Richardson ratios "
              + ",".join(f"{r:.2f}" for r in ratios) + f" at j={j},m0={m0}]", worst, 0.1, f"j={j} m0={m0}")
    for k in K_GRID:
        for l in (0, 1, 5, 10):
            lim = g_limits("SU11", (k, l))
            t.add("SU11 eta->0 at 1e-3", rel(g_factor_su11(k, l, 1e-3).value, lim["eta_to_zero"]), 1e-4,
                  f"k={k} l={l}")
            t.add("SU11 eta->inf at 1e3", rel(g_factor_su11(k, l, 1e3).value, lim["eta_to_inf"]), 1e-4,
                  f"k={k} l={l}")
    finish("limits", t)


def test_figure_trends():
    t = Tally()
    for eta in (0.05, 0.3, 0.7, 0.95):
        gs = [g_factor_su2(15, m0, eta).value for m0 in range(16)]
        t.flag("G(15,m0) rises with |m0|", all(b > a for a, b in zip(gs, gs[1:])), f"eta={eta}")
    for eta in (0.05, 0.5, 1.0, 5.0):
        gs = [g_factor_su11(0.5, l, eta).value for l in range(11)]
        t.flag("G(1/2,l) falls with l", all(b < a for a, b in zip(gs, gs[1:])), f"eta={eta}")
    e_su2 = su2_exponent_sweep((0.05, 0.95), j_max=1000)
    e_su11 = su11_exponent_sweep((0.05, 0.95), k=0.5, sinh2_beta=1.0, l_max=150)
    t.add(f"SU2 E(0.05)={e_su2[0].E:.3f}>0.9", max(0.0, 0.9 - e_su2[0].E), 0.0, "N<=2000")
    t.add(f"SU2 E(0.95)={e_su2[1].E:.3f}<0.6", max(0.0, e_su2[1].E - 0.6), 0.0, "N<=2000")
    t.add(f"SU11 E(0.05)={e_su11[0].E:.3f}>0.9", max(0.0, 0.9 - e_su11[0].E), 0.0, "l<=150")
    t.add(f"SU11 E(0.95)={e_su11[1].E:.3f}<0.6", max(0.0, e_su11[1].E - 0.6), 0.0, "l<=150")
    finish("figure trends", t)


def test_quasi_intelligent():
    t = Tally()
    for j in (1, 2, 5, 20, 100):
        r = quasi_intelligent_stats(j)
        t.add("Var(J3)=1/4", rel(r.var_j3, 0.25), 1e-14, f"j={j}")
        t.add("Var(J2)", rel(r.var_j2, j * (j + 1) / 2 - 0.25), 1e-14, f"j={j}")
        t.add("<J1>", rel(r.mean_j1, math.sqrt(j * (j + 1)) / 2), 1e-14, f"j={j}")
    quasi = quasi_intelligent_stats(100).delta_phi_squared
    best = intelligent_sensitivity("SU2", (100, 0), 1e-4).delta_phi_squared
    ratio = math.sqrt(quasi / best)
    t.add(f"ratio {ratio:.5f} vs sqrt(2) at j=100", rel(ratio, math.sqrt(2)), 0.01, "j=100")
    finish("quasi-intelligent values", t)


def test_small_eta_discontinuity():
    """The eta -> 0 intelligent sensitivity is not the |j,m0> or |k,l> one."""
    t = Tally()
    # at m0 = +-j the two values coincide (G = 1), so the gap is probed inside the multiplet
    for j, m0 in [(3, 1), (10, 4), (15, 13)]:
        catalog = su2_fock_sensitivity(j, m0, 1.0).delta_phi_squared
        hm = 1 / (2 * (j * j - m0 * m0 + j))
        for eta in (1e-3, 1e-4, 1e-5):
            spec = Su2IntelligentSpec(j, m0, eta)
            intel = intelligent_sensitivity("SU2", (j, m0), eta).delta_phi_squared
            where = f"j={j} m0={m0} eta={eta}"
            t.add("SU2 intelligent -> minimum-uncertainty value", rel(intel, hm), 2 * eta, where)
            predicted_gap = catalog - hm
            t.add("SU2 gap to |j,m0> matches prediction", abs((catalog - intel) - predicted_gap) / predicted_gap,
                  2 * eta, where)
            amp = su2_intelligent(spec).amplitudes[int(round(j + m0))]
            t.add("SU2 state -> |j,m0>", 1 - abs(amp), 10 * eta, where)
        t.flag("SU2 gap is finite and positive", catalog > hm * (1 + 1e-3), f"j={j} m0={m0}")
    mixer = MixerParam.from_sinh_squared(1.0)
    for k, l in [(0.5, 1), (1, 3), (1.5, 10)]:
        catalog = su11_kn_sensitivity(k, l, mixer).delta_phi_squared
        hm = g_limits("SU11", (k, l), beta=mixer.beta)["dphi2_eta_to_zero"]
        intel = intelligent_sensitivity("SU11", (k, l), 1e-4, mixer).delta_phi_squared
        t.add("SU11 intelligent -> minimum-uncertainty value", rel(intel, hm), 1e-3, f"k={k} l={l}")
        t.flag("SU11 gap to |k,l> is finite and positive", catalog > hm * (1 + 1e-3), f"k={k} l={l}")
    finish("eta -> 0 discontinuity", t)


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
