"""Cross-oracle checks behind ``intellight verify``.

Every check compares two independent routes (closed form vs eigen-oracle,
closed form vs truncated Fock simulation, catalog vs moment propagation)
and reports the worst relative deviation with its location. Grids are kept
small enough for the whole suite to run in well under a minute.
"""
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fock
from .analysis import (g_factor_su2, g_factor_su11, g_limits, intelligent_sensitivity,
                       parallel_map)
from .interferometer import (_chain_observable, _closed_observable, GlauberAmp, MixerParam, output_observable, phase_uncertainty,
                             su2_coherent_sensitivity, su2_fock_sensitivity,
                             su2_squeezed_sensitivity, su11_coherent_sensitivity,
                             su11_glauber_sensitivity, su11_kn_sensitivity)
from .states import RepState, moments
from .su2 import (Su2IntelligentSpec, su2_coherent, su2_intelligent,
                  su2_intelligent_eigen_oracle, su2_intelligent_spectrum, su2_norm_factor,
                  su2_state_moments, su2_variance_j3_closed)
from .su11 import (Su11IntelligentSpec, Su11Irrep, su11_coherent, su11_intelligent,
                   su11_intelligent_spectrum, su11_norm_factor, su11_state_moments,
                   su11_variance_k3_closed)

__all__ = ["Check", "CheckResult", "CHECKS", "run_checks"]


@dataclass(frozen=True)
class Check:
    name: str
    tolerance: float
    run: Callable[[], tuple]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    location: str

    def as_dict(self):
        return {"name": self.name, "passed": self.passed,
                "max_deviation": self.max_deviation, "tolerance": self.tolerance,
                "location": self.location}


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _worst(pairs):
    """(max deviation, location) over an iterable of (deviation, location)."""
    best = (0.0, "everywhere")
    for dev, where in pairs:
        if not dev <= best[0]:
            best = (float(dev), where)
    return best


SU2_GRID = [(j, m0) for j in (0.5, 1, 1.5, 3, 6) for m0 in np.arange(-j, j + 1)]
ETAS = (0.1, 0.5, 0.9)
SU11_GRID = [(k, l) for k in (0.5, 1, 1.5) for l in (0, 1, 4)]


def _su2_spectrum():
    def one(args):
        j, eta = args
        vals = su2_intelligent_spectrum(j, eta)
        target = 1j * np.arange(-j, j + 1) * math.sqrt(1 - eta * eta)
        return float(np.abs(vals - target).max()), f"j={j} eta={eta}"
    return _worst(parallel_map(one, [(j, e) for j in (0.5, 1, 2.5, 6) for e in ETAS]))


def _su11_spectrum():
    def one(args):
        k, eta = args
        vals = su11_intelligent_spectrum(Su11Irrep(k, 48), eta)[:6]
        target = 1j * (k + np.arange(6)) * math.sqrt(eta * eta + 1)
        return float(np.abs(vals - target).max()), f"k={k} eta={eta}"
    return _worst(parallel_map(one, [(k, e) for k in (0.5, 1.5) for e in (0.3, 0.9)]))


def _su2_norm():
    out = []
    for j, m0 in SU2_GRID:
        for eta in ETAS:
            nf = su2_norm_factor(j, m0, eta)
            out.append((rel(nf.closed, nf.direct), f"j={j} m0={m0} eta={eta}"))
    return _worst(out)


def _su11_norm():
    out = []
    for k, l in SU11_GRID:
        for eta in (0.3, 1.0, 3.0):
            nf = su11_norm_factor(k, l, eta)
            out.append((rel(nf.closed, nf.direct), f"k={k} l={l} eta={eta}"))
    return _worst(out)


def _su2_variance():
    out = []
    for j, m0 in SU2_GRID:
        for eta in ETAS:
            state = su2_intelligent(Su2IntelligentSpec(j, m0, eta))
            var = su2_state_moments(state).variance(3)
            out.append((rel(su2_variance_j3_closed(j, m0, eta), var),
                        f"j={j} m0={m0} eta={eta}"))
    return _worst(out)


def _su11_variance():
    out = []
    for k, l in SU11_GRID:
        for eta in (0.3, 1.0, 3.0):
            state = su11_intelligent(Su11IntelligentSpec(Su11Irrep(k), l, eta))
            var = su11_state_moments(state).variance(3)
            out.append((rel(su11_variance_k3_closed(k, l, eta), var),
                        f"k={k} l={l} eta={eta}"))
    return _worst(out)


def _eigen_oracle_states():
    out = []
    for j, m0, eta in [(1, 0, 1.0), (2.5, 0.5, 0.3), (4, -2, 0.8)]:
        a = su2_intelligent(Su2IntelligentSpec(j, m0, eta))
        b = su2_intelligent_eigen_oracle(j, m0, eta)
        out.append((float(np.abs(a.amplitudes - b.amplitudes).max()), f"j={j} m0={m0} eta={eta}"))
    return _worst(out)


def _intelligence():
    out = []
    for j, m0 in SU2_GRID:
        for eta in ETAS:
            mom = su2_state_moments(su2_intelligent(Su2IntelligentSpec(j, m0, eta)))
            d2, d3 = math.sqrt(mom.variance(2)), math.sqrt(mom.variance(3))
            out.append((rel(d2 * d3, abs(mom.mean[0]) / 2), f"SU2 j={j} m0={m0} eta={eta} product"))
            out.append((rel(d3 / d2, eta), f"SU2 j={j} m0={m0} eta={eta} ratio"))
    for k, l in SU11_GRID:
        for eta in (0.3, 1.0, 3.0):
            mom = su11_state_moments(su11_intelligent(Su11IntelligentSpec(Su11Irrep(k), l, eta)))
            d2, d3 = math.sqrt(mom.variance(2)), math.sqrt(mom.variance(3))
            out.append((rel(d2 * d3, abs(mom.mean[0]) / 2), f"SU11 k={k} l={l} eta={eta} product"))
            out.append((rel(d3 / d2, eta), f"SU11 k={k} l={l} eta={eta} ratio"))
    return _worst(out)


def _basis_state(group, label, index, dim):
    amps = np.zeros(dim)
    amps[index] = 1.0
    return RepState(group, label, amps)


def _catalog():
    out = []
    phis = (0.3, 1.1, 2.0, 2.9)
    for j in (1, 2.5, 4):
        for m in np.arange(-j, j + 1):
            if m == 0:
                continue
            mom = su2_state_moments(_basis_state("SU2", j, int(j + m), int(2 * j + 1)))
            for phi in phis:
                got = phase_uncertainty(mom, output_observable("SU2", phi))
                out.append((rel(got, su2_fock_sensitivity(j, m, phi).delta_phi_squared),
                            f"|j,m> j={j} m={m} phi={phi}"))
        for zeta in (0.7, 0.4 + 0.3j, -1.5 + 2j):
            mom = su2_state_moments(su2_coherent(j, zeta))
            got = phase_uncertainty(mom, output_observable("SU2", 0.0))
            out.append((rel(got, su2_coherent_sensitivity(j, zeta).delta_phi_squared),
                        f"SU2 coherent j={j} zeta={zeta}"))
    for beta in (0.4, 1.2):
        mixer = MixerParam(beta)
        for k in (0.5, 1.5):
            for n in (0, 1, 3):
                mom = su11_state_moments(_basis_state("SU11", k, n, 32))
                for phi in phis:
                    got = phase_uncertainty(mom, output_observable("SU11", phi, beta))
                    want = su11_kn_sensitivity(k, n, mixer, phi).delta_phi_squared
                    out.append((rel(got, want), f"|k,n> k={k} n={n} beta={beta} phi={phi}"))
            # zeta = 0 is |k,0>: insensitive exactly at phi = 0, so the
            # catalog quotes the phi -> 0 limit of the Fock-input formula
            want = su11_kn_sensitivity(k, 0, mixer).delta_phi_squared
            got = su11_coherent_sensitivity(k, 0.0, mixer).delta_phi_squared
            out.append((rel(got, want), f"SU11 coherent k={k} zeta=0 beta={beta}"))
            for zeta in (0.3, 0.2 - 0.4j):
                mom = su11_state_moments(su11_coherent(Su11Irrep(k), zeta))
                got = phase_uncertainty(mom, output_observable("SU11", 0.0, beta))
                want = su11_coherent_sensitivity(k, zeta, mixer).delta_phi_squared
                out.append((rel(got, want), f"SU11 coherent k={k} zeta={zeta} beta={beta}"))
    return _worst(out)


def _fock_squeezed():
    out = []
    for mag in (0.5, 1.0, 1.5):
        for beta in (0.5, 1.0, 1.5):
            cut = fock.squeeze_cutoff(mag * mag, beta)
            state = fock.pad(fock.glauber_product_state(mag, 0), (cut, cut))
            state = fock.two_mode_squeeze(state, beta)
            ops = fock.mode_operators(state.cutoffs)
            mom = moments(state.vector, ops.su2_set())
            got = phase_uncertainty(mom, output_observable("SU2", 0.0))
            rep = su2_squeezed_sensitivity(GlauberAmp(mag), MixerParam(beta))
            where = f"|alpha|={mag} beta={beta}"
            out.append((rel(got, rep.delta_phi_squared), where + " dphi2"))
            out.append((rel(fock.fock_expectation(state, ops.N).real, rep.n_bar), where + " N"))
    return _worst(out)


def _fock_su11_glauber():
    out = []
    for mag in (0.5, 1.0, 1.5):
        for beta in (0.5, 1.5):
            amps = GlauberAmp(mag, 0.3, mag, 0.2)
            state = fock.glauber_product_state(amps.alpha, amps.alpha2)
            ops = fock.mode_operators(state.cutoffs)
            mom = moments(state.vector, ops.su11_set())
            got = phase_uncertainty(mom, output_observable("SU11", 0.0, beta))
            rep = su11_glauber_sensitivity(amps, MixerParam(beta))
            where = f"|alpha|={mag} beta={beta}"
            out.append((rel(got, rep.delta_phi_squared), where + " dphi2"))
            cut = fock.squeeze_cutoff(2 * mag * mag, beta)
            mixed = fock.su11_mixer(fock.pad(state, (cut, cut)), beta)
            counted = fock.fock_expectation(mixed, fock.mode_operators(mixed.cutoffs).N).real
            out.append((rel(counted, rep.n_bar), where + " N"))
    return _worst(out)


def _fock_embedding():
    out = []
    for j, m0, eta in [(1, 0, 1.0), (3, 1, 0.5)]:
        state = su2_intelligent(Su2IntelligentSpec(j, m0, eta))
        ref = su2_state_moments(state)
        emb = fock.embed_irrep_state(state)
        mom = moments(emb.vector, fock.mode_operators(emb.cutoffs).su2_set())
        dev = float(np.abs(mom.covariance - ref.covariance).max()
                    + np.abs(mom.mean - ref.mean).max())
        out.append((dev, f"SU2 j={j} m0={m0} eta={eta}"))
    for k, l, eta in [(0.5, 1, 0.5), (1.5, 2, 0.3)]:
        state = su11_intelligent(Su11IntelligentSpec(Su11Irrep(k, 40), l, eta))
        ref = su11_state_moments(state)
        emb = fock.embed_irrep_state(state)
        mom = moments(emb.vector, fock.mode_operators(emb.cutoffs).su11_set())
        dev = float(np.abs(mom.covariance - ref.covariance).max()
                    + np.abs(mom.mean - ref.mean).max())
        out.append((dev, f"SU11 k={k} l={l} eta={eta}"))
    return _worst(out)


def _limits():
    out = []
    for j, m0 in [(1, 0), (15, 0), (15, 14), (6, 3)]:
        g = g_factor_su2(j, m0, 1e-4).value
        out.append((rel(g, g_limits("SU2", (j, m0))["eta_to_zero"]), f"SU2 eta->0 j={j} m0={m0}"))
        hm = 1 / (2 * (j * j - m0 * m0 + j))
        got = intelligent_sensitivity("SU2", (j, m0), 1e-4).delta_phi_squared
        out.append((rel(got, hm), f"small-eta dphi2 j={j} m0={m0}"))
    for k, l in SU11_GRID:
        lim = g_limits("SU11", (k, l))
        out.append((rel(g_factor_su11(k, l, 1e-3).value, lim["eta_to_zero"]), f"SU11 eta->0 k={k} l={l}"))
        out.append((rel(g_factor_su11(k, l, 1e3).value, lim["eta_to_inf"]), f"SU11 eta->inf k={k} l={l}"))
    return _worst(out)


def _observables():
    out = []
    for phi in np.linspace(-3, 3, 13):
        for beta in (None, 0.5, 2.0):
            group = "SU2" if beta is None else "SU11"
            c1, d1 = _closed_observable(group, float(phi), beta)
            c2, d2 = _chain_observable(group, float(phi), beta)
            dev = max(np.abs(c1 - c2).max(), np.abs(d1 - d2).max())
            out.append((dev, f"{group} phi={phi:.2f} beta={beta}"))
    return _worst(out)


CHECKS = (
    Check("su2_quantization_spectrum", 1e-9, _su2_spectrum),
    Check("su11_quantization_spectrum", 1e-8, _su11_spectrum),
    Check("su2_norm_closed_vs_direct", 1e-10, _su2_norm),
    Check("su11_norm_closed_vs_series", 1e-10, _su11_norm),
    Check("su2_variance_closed_vs_moments", 1e-8, _su2_variance),
    Check("su11_variance_closed_vs_moments", 1e-8, _su11_variance),
    Check("su2_state_vs_eigen_oracle", 1e-10, _eigen_oracle_states),
    Check("intelligence_equality", 1e-9, _intelligence),
    Check("catalog_vs_propagation", 1e-10, _catalog),
    Check("squeezed_vs_fock", 1e-6, _fock_squeezed),
    Check("su11_glauber_vs_fock", 1e-6, _fock_su11_glauber),
    Check("fock_embedding_moments", 1e-8, _fock_embedding),
    Check("g_factor_limits", 1e-3, _limits),
    Check("observable_closed_vs_chain", 1e-13, _observables),
)


def run_checks(overrides=None, default=None):
    """Run every check. ``overrides`` maps check name to tolerance;
    ``default`` replaces every tolerance not named there."""
    overrides = dict(overrides or {})
    unknown = set(overrides) - {c.name for c in CHECKS}
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(sorted(unknown))}")
    results = []
    for check in CHECKS:
        tol = overrides.get(check.name, default if default is not None else check.tolerance)
        try:
            dev, where = check.run()
        except Exception as exc:  # a crashing route is a failed check, not a crashed run
            results.append(CheckResult(check.name, False, math.inf, tol,
                                       f"{type(exc).__name__}: {exc}"))
            continue
        results.append(CheckResult(check.name, dev <= tol, dev, tol, where))
    return results
