"""G-factors, their limits, intelligent-input sensitivities and exponents."""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .interferometer import MixerParam, SensitivityReport, su11_n_bar
from .states import RepState
from .su2 import Su2Irrep, su2_j3_bracket, su2_state_moments, _check_m0
from .su11 import su11_k3_bracket

__all__ = [
    "GFactorResult",
    "ExponentEstimate",
    "QuasiIntelligentReport",
    "g_factor_su2",
    "g_factor_su11",
    "g_limits",
    "intelligent_sensitivity",
    "regime_curves_su11",
    "quasi_intelligent_stats",
    "exponent_estimate",
    "parallel_map",
    "su2_exponent_sweep",
    "su11_exponent_sweep",
    "FIG7_SINH2_BETA",
    "FIG7_K",
    "FIG7_L_MAX",
    "FIG3_J_MAX",
]

THREADS_ENV = "INTELLIGHT_THREADS"
FIG3_J_MAX = 1000
FIG7_SINH2_BETA = 1.0
FIG7_K = 0.5
FIG7_L_MAX = 150


def parallel_map(fn, items):
    """``list(map(fn, items))``, fanned out over ``$INTELLIGHT_THREADS`` workers.

    Results come back in input order whatever the completion order.
    """
    items = list(items)
    workers = int(os.environ.get(THREADS_ENV, "1") or 1)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class GFactorResult:
    value: float
    group: str
    params: tuple
    eta: float
    boundary: bool = False


def _check_eta(eta):
    if eta == 0:
        raise DomainError("eta = 0 does not define an intelligent state")


def g_factor_su2(j, m0, eta):
    """delta phi^2 of the J2-J3 intelligent state relative to 1/(2j).

    For |eta| >= 1 the value 1 is returned with ``boundary=True``.
    """
    _check_eta(eta)
    irrep = Su2Irrep(j)
    _check_m0(irrep, m0)
    if abs(eta) >= 1:
        return GFactorResult(1.0, "SU2", (j, m0), eta, boundary=True)
    return GFactorResult(1 / su2_j3_bracket(j, m0, eta), "SU2", (j, m0), eta)


def g_factor_su11(k, l, eta):
    """2k sinh^2(beta) delta phi^2 of the K2-K3 intelligent state."""
    _check_eta(eta)
    if l < 0 or l != int(l):
        raise DomainError("l must be a non-negative integer")
    if k <= 0 or 2 * k != int(2 * k):
        raise DomainError("k must be a positive multiple of 1/2")
    return GFactorResult(1 / su11_k3_bracket(k, int(l), eta), "SU11", (k, l), eta)


def g_limits(group, params, eps=None, beta=None):
    """Limiting values of the G-factor.

    SU2, ``params=(j, m0)``: ``eta_to_zero``; with ``eps = 1 - eta^2`` also
    ``near_one`` (the expansion [1 + 2 eps (j^2 - m0^2)]^-1 as commonly
    quoted) and ``near_one_leading`` ([1 + eps (j^2 - m0^2)/(2 j^2)]^-1,
    the first-order term that the exact G actually follows).

    SU11, ``params=(k, l)``: ``eta_to_zero``, ``eta_to_inf`` and, given
    ``beta``, the small-eta sensitivity ``dphi2_eta_to_zero``.
    """
    if group == "SU2":
        j, m0 = params
        spread = j * j - m0 * m0
        out = {"eta_to_zero": 1 / (1 + spread / j)}
        if eps is not None:
            out["near_one"] = 1 / (1 + 2 * eps * spread)
            out["near_one_leading"] = 1 / (1 + eps * spread / (2 * j * j))
        return out
    if group == "SU11":
        k, l = params
        out = {"eta_to_zero": 1 / (1 + l * (2 * k + l) / k),
               "eta_to_inf": 1 / (1 + l / k)}
        if beta is not None:
            out["dphi2_eta_to_zero"] = 1 / (2 * math.sinh(beta) ** 2 * (k + l * (2 * k + l)))
        return out
    raise DomainError(f"unknown group {group!r}")


def intelligent_sensitivity(group, params, eta, mixer: Optional[MixerParam] = None):
    """delta phi^2 at phi = 0 for intelligent input.

    SU2 needs no mixer and every photon (N = 2j) passes the phase shifters.
    SU11 reports the fixed-input curve (vary beta) in ``curves``.
    """
    if group == "SU2":
        j, m0 = params
        g = g_factor_su2(j, m0, eta).value
        return SensitivityReport(g / (2 * j), 2 * j, "SU(2) intelligent input",
                                 g_factor=g)
    if group != "SU11":
        raise DomainError(f"unknown group {group!r}")
    if mixer is None:
        raise DomainError("SU11 sensitivity needs a mixer")
    k, l = params
    g = g_factor_su11(k, l, eta).value
    sh2 = math.sinh(mixer.beta) ** 2
    value = g / (2 * k * sh2) if sh2 > 0 else math.inf
    mean_k3 = (k + l) * math.sqrt(eta * eta + 1)
    n_bar = su11_n_bar(0.0, mean_k3, mixer.beta)
    a2 = 4 * mean_k3 ** 2

    def fixed_input(nb):
        den = (nb + 1) ** 2 - a2
        return math.inf if den <= 0 else 2 * mean_k3 ** 2 * g / (k * den)

    return SensitivityReport(value, n_bar, "SU(1,1) intelligent input",
                             g_factor=g, curves={"fixed-input": fixed_input})


def regime_curves_su11(k, eta, beta, l_values):
    """Fixed-interferometer table over ``l_values`` at constant beta.

    Rows are (l, n_bar, delta_phi_squared, small_eta_approx); the last
    column is the small-eta closed approximation
    2 coth^2(b) / ((N+1)^2 - 4(k^2 - k) cosh^2(b)).
    """
    mixer = MixerParam(beta)
    ch2 = math.cosh(beta) ** 2
    coth2 = ch2 / math.sinh(beta) ** 2

    def row(l):
        rep = intelligent_sensitivity("SU11", (k, l), eta, mixer)
        approx = 2 * coth2 / ((rep.n_bar + 1) ** 2 - 4 * (k * k - k) * ch2)
        return (l, rep.n_bar, rep.delta_phi_squared, approx)

    return parallel_map(row, l_values)


@dataclass(frozen=True)
class QuasiIntelligentReport:
    var_j3: float
    var_j2: float
    mean_j1: float
    nu: float
    delta_phi_squared: float


def quasi_intelligent_stats(j):
    """Moments of (|j,0> + |j,1>)/sqrt(2), computed on the irrep."""
    if j < 1 or j != int(j):
        raise DomainError("j must be an integer >= 1")
    irrep = Su2Irrep(j)
    amps = np.zeros(irrep.dim)
    amps[int(j)] = amps[int(j) + 1] = 1 / math.sqrt(2)
    mom = su2_state_moments(RepState("SU2", j, amps))
    v3, v2, m1 = mom.variance(3), mom.variance(2), float(mom.mean[0])
    return QuasiIntelligentReport(var_j3=v3, var_j2=v2, mean_j1=m1,
                                  nu=v2 * v3 / (m1 * m1 / 4),
                                  delta_phi_squared=v3 / m1 ** 2)


@dataclass(frozen=True)
class ExponentEstimate:
    E: float
    fit_window: tuple
    residual: float
    n_points: int


def exponent_estimate(points, decade=10.0, min_points=5):
    """Negated ln-ln slope of delta phi versus N over the top decade of N.

    ``points`` is a sequence of (N, delta_phi). ``residual`` is the RMS of
    the fit residuals in ln(delta_phi).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DomainError("points must be (N, delta_phi) pairs")
    n_max = pts[:, 0].max()
    window = pts[pts[:, 0] >= n_max / decade]
    if len(window) < min_points:
        raise DomainError(f"need >= {min_points} points in the top decade, got {len(window)}")
    x, y = np.log(window[:, 0]), np.log(window[:, 1])
    if np.ptp(x) == 0:
        raise DomainError("degenerate abscissae")
    (slope, icpt) = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    return ExponentEstimate(E=float(-slope), fit_window=(float(window[:, 0].min()), float(n_max)),
                            residual=float(np.sqrt(np.mean(resid ** 2))),
                            n_points=len(window))


def su2_curve(eta, j_max=FIG3_J_MAX, m0=0):
    """(N, delta_phi) for integer j = 1..j_max with fixed m0."""
    return [(2 * j, math.sqrt(intelligent_sensitivity("SU2", (j, m0), eta).delta_phi_squared))
            for j in range(max(1, int(math.ceil(abs(m0)))), j_max + 1)]


def su11_curve(eta, k=FIG7_K, sinh2_beta=FIG7_SINH2_BETA, l_max=FIG7_L_MAX):
    """(N_bar, delta_phi) for l = 1..l_max at fixed beta."""
    mixer = MixerParam.from_sinh_squared(sinh2_beta)
    out = []
    for l in range(1, l_max + 1):
        rep = intelligent_sensitivity("SU11", (k, l), eta, mixer)
        out.append((rep.n_bar, math.sqrt(rep.delta_phi_squared)))
    return out


def su2_exponent_sweep(etas, j_max=FIG3_J_MAX):
    return parallel_map(lambda e: exponent_estimate(su2_curve(e, j_max)), etas)


def su11_exponent_sweep(etas, k=FIG7_K, sinh2_beta=FIG7_SINH2_BETA, l_max=FIG7_L_MAX):
    return parallel_map(lambda e: exponent_estimate(su11_curve(e, k, sinh2_beta, l_max)), etas)
