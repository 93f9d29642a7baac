"""Interferometer transformation chains and phase-sensitivity catalog.

Both interferometers act linearly on a generator triple: SU(2) beam
splitters and phase shifters as rotations of (J1, J2, J3), SU(1,1) mixers
as Lorentz boosts of (K1, K2, K3). The measured observable is the third
output component, a fixed linear combination c(phi) of the input triple,
so the phase uncertainty follows exactly from the input means and
covariances.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import ConsistencyError, DomainError

__all__ = [
    "ElementMatrix",
    "element_matrix",
    "OutputObservable",
    "output_observable",
    "SensitivityReport",
    "PhaseShift",
    "MixerParam",
    "GlauberAmp",
    "phase_uncertainty",
    "su2_fock_sensitivity",
    "su2_glauber_sensitivity",
    "su2_coherent_sensitivity",
    "su2_squeezed_sensitivity",
    "su11_kn_sensitivity",
    "su11_coherent_sensitivity",
    "su11_glauber_sensitivity",
    "su11_n_bar",
]

INF = math.inf
_KINDS = ("rotation-1", "rotation-3", "boost-2")
_ZERO_DEN = 1e-13
_ZERO_PHASE = 1e-12


@dataclass(frozen=True)
class ElementMatrix:
    kind: str
    parameter: float
    matrix: np.ndarray


def _element(kind, p):
    c, s = math.cos(p), math.sin(p)
    if kind == "rotation-1":
        return np.array([[1.0, 0, 0], [0, c, -s], [0, s, c]])
    if kind == "rotation-3":
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])
    if kind == "boost-2":
        ch, sh = math.cosh(p), math.sinh(p)
        return np.array([[1.0, 0, 0], [0, ch, sh], [0, sh, ch]])
    raise DomainError(f"kind must be one of {_KINDS}, got {kind!r}")


def element_matrix(kind, parameter):
    """3x3 action of one interferometer element on the generator triple.

    ``rotation-1`` is a beam splitter, ``rotation-3`` a phase shift and
    ``boost-2`` a four-wave mixer (negative ``parameter`` boosts along the
    negative 2nd axis).
    """
    m = _element(kind, parameter)
    m.setflags(write=False)
    return ElementMatrix(kind, float(parameter), m)


def _d_rotation3(phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[-s, -c, 0], [c, -s, 0], [0, 0, 0.0]])


@dataclass(frozen=True)
class OutputObservable:
    """Measured output generator as ``coefficients . (X1, X2, X3)``."""

    group: str
    phi: float
    beta: Optional[float]
    coefficients: np.ndarray
    derivative: np.ndarray


def _closed_observable(group, phi, beta):
    s, c = math.sin(phi), math.cos(phi)
    if group == "SU2":
        return np.array([-s, 0.0, c]), np.array([-c, 0.0, -s])
    sh, ch = math.sinh(beta), math.cosh(beta)
    coef = np.array([sh * s, sh * ch * (c - 1), ch * ch - sh * sh * c])
    deriv = np.array([sh * c, -sh * ch * s, sh * sh * s])
    return coef, deriv


def _chain_observable(group, phi, beta):
    if group == "SU2":
        left, right = _element("rotation-1", -math.pi / 2), _element("rotation-1", math.pi / 2)
    else:
        left, right = _element("boost-2", beta), _element("boost-2", -beta)
    total = left @ _element("rotation-3", phi) @ right
    d_total = left @ _d_rotation3(phi) @ right
    return total[2], d_total[2]


def output_observable(group, phi, beta=None):
    """Coefficient and phase-derivative vectors of the measured generator.

    Evaluated both in closed form and by composing element matrices; the two
    must agree to 1e-13 or :class:`ConsistencyError` is raised.
    """
    if group not in ("SU2", "SU11"):
        raise DomainError(f"unknown group {group!r}")
    if (group == "SU11") != (beta is not None):
        raise DomainError("beta is required for SU11 and only for SU11")
    coef, deriv = _closed_observable(group, phi, beta)
    chain_coef, chain_deriv = _chain_observable(group, phi, beta)
    scale = 1.0 if beta is None else math.cosh(beta) ** 2
    dev = max(np.abs(coef - chain_coef).max(), np.abs(deriv - chain_deriv).max())
    if dev > 1e-13 * scale:
        raise ConsistencyError(f"closed and composed observables differ by {dev:.3g}")
    coef.setflags(write=False)
    deriv.setflags(write=False)
    return OutputObservable(group, float(phi), beta, coef, deriv)


@dataclass(frozen=True)
class SensitivityReport:
    """delta phi^2 with bookkeeping.

    ``curves`` maps a regime label to a function of the phase-shifter photon
    number giving delta phi^2 along that regime.
    """

    delta_phi_squared: float
    n_bar: float
    formula: str
    regime: str = "single-point"
    g_factor: Optional[float] = None
    curves: Mapping[str, Callable[[float], float]] = field(default_factory=dict)
    extras: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        d = self.delta_phi_squared
        if not (d > 0 or d == INF):
            raise ConsistencyError(f"non-positive delta phi^2 {d!r}")

    @property
    def delta_phi(self):
        return math.sqrt(self.delta_phi_squared)


@dataclass(frozen=True)
class PhaseShift:
    phi1: float
    phi2: float

    def effective(self, group):
        if group == "SU2":
            return self.phi2 - self.phi1
        if group == "SU11":
            return -(self.phi1 + self.phi2)
        raise DomainError(f"unknown group {group!r}")


@dataclass(frozen=True)
class MixerParam:
    beta: float

    def __post_init__(self):
        if self.beta < 0:
            raise DomainError("beta must be non-negative")

    @classmethod
    def from_sinh_squared(cls, value):
        return cls(math.asinh(math.sqrt(value)))

    @property
    def reflectivity(self):
        return math.sinh(self.beta / 2) ** 2


@dataclass(frozen=True)
class GlauberAmp:
    """Coherent amplitudes alpha = |alpha| e^{i theta} of one or two modes."""

    magnitude: float
    phase: float = 0.0
    magnitude2: float = 0.0
    phase2: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0 or self.magnitude2 < 0:
            raise DomainError("magnitudes must be non-negative")

    @property
    def alpha(self):
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))

    @property
    def alpha2(self):
        return self.magnitude2 * complex(math.cos(self.phase2), math.sin(self.phase2))


def phase_uncertainty(moments, obs):
    """(c^T Cov c) / (dc/dphi . mean)^2, or ``math.inf`` if insensitive."""
    c, d = obs.coefficients, obs.derivative
    num = float(c @ moments.covariance @ c)
    den = float(d @ moments.mean)
    scale = np.linalg.norm(d) * (np.linalg.norm(moments.mean)
                                 + math.sqrt(max(np.trace(moments.covariance), 0.0)))
    if abs(den) <= _ZERO_DEN * scale:
        return INF
    return num / den ** 2


def _ratio(num, den):
    return INF if den == 0 else num / den


def _check_phi(phi):
    if abs(math.sin(phi)) < _ZERO_PHASE:
        raise DomainError("phi must not be a multiple of pi")


def su2_fock_sensitivity(j, m, phi):
    """Input |j,m>; the result is independent of phi away from multiples of pi."""
    _check_phi(phi)
    if abs(m) > j:
        raise DomainError("|m| must not exceed j")
    value = _ratio(j * j - m * m + j, 2 * m * m)
    return SensitivityReport(value, 2 * j, "Fock input |j,m>")


def su2_glauber_sensitivity(amps):
    """Glauber product input at phi = 0.

    <J1> = |alpha||alpha'| cos(theta' - theta): only the relative phase of
    the two beams matters for a number-conserving interferometer.
    """
    a2, b2 = amps.magnitude ** 2, amps.magnitude2 ** 2
    cos_rel = math.cos(amps.phase2 - amps.phase)
    if abs(cos_rel) < _ZERO_PHASE:
        cos_rel = 0.0
    value = _ratio(a2 + b2, 4 * a2 * b2 * cos_rel ** 2)
    return SensitivityReport(value, a2 + b2, "Glauber product input")


def su2_coherent_sensitivity(j, zeta):
    zeta = complex(zeta)
    value = _ratio(abs(zeta) ** 2, 2 * j * zeta.real ** 2)
    return SensitivityReport(value, 2 * j, "SU(2) coherent input")


def su2_squeezed_sensitivity(amps, mixer):
    """Coherent light in mode 1 and vacuum in mode 2, squeezed by a mixer.

    The phase is taken at its optimum theta = 0. ``curves`` holds the
    fixed-input (vary beta) and fixed-interferometer (vary |alpha|) regimes.
    """
    a2, beta = amps.magnitude ** 2, mixer.beta
    sh2, ch = math.sinh(beta) ** 2, math.cosh(beta)
    value = _ratio(1.0, a2 * sh2)
    n_bar = (a2 + 1) * ch - 1

    def fixed_input(nb):
        return _ratio((a2 + 1) ** 2, a2 * ((nb + 1) ** 2 - (a2 + 1) ** 2))

    def fixed_interferometer(nb):
        return _ratio(ch, sh2 * (nb + 1 - ch))

    return SensitivityReport(value, n_bar, "squeezed coherent input",
                             curves={"fixed-input": fixed_input,
                                     "fixed-interferometer": fixed_interferometer})


def su11_n_bar(mean_k2, mean_k3, beta):
    """Photons leaving the first mixer: 2 <cosh(b) K3 - sinh(b) K2> - 1."""
    return 2 * (math.cosh(beta) * mean_k3 - math.sinh(beta) * mean_k2) - 1


def su11_kn_sensitivity(k, n, mixer, phi=None):
    """Input |k,n>. ``phi=None`` gives the phi -> 0 optimum."""
    beta = mixer.beta
    sh2, ch2 = math.sinh(beta) ** 2, math.cosh(beta) ** 2
    spread = (k + n * (2 * k + n)) / (2 * (k + n) ** 2)
    limit = _ratio(spread, sh2)
    n_bar = su11_n_bar(0.0, k + n, beta)
    if phi is None:
        return SensitivityReport(limit, n_bar, "Fock input |k,n>, phi -> 0 limit")
    _check_phi(phi)
    s, c = math.sin(phi), math.cos(phi)
    value = _ratio((s * s + ch2 * (1 - c) ** 2) * spread, s * s * sh2)
    return SensitivityReport(value, n_bar, "Fock input |k,n>", extras={"limit": limit})


def su11_coherent_sensitivity(k, zeta, mixer):
    """SU(1,1) coherent input at phi = 0.

    For zeta = 0 the sensitivity does not depend on the direction of zeta
    and the optimum 1/(2k sinh^2 beta) is reported.
    """
    zeta = complex(zeta)
    r2 = abs(zeta) ** 2
    if r2 >= 1:
        raise DomainError("|zeta| must be < 1")
    beta = mixer.beta
    sh2, ch = math.sinh(beta) ** 2, math.cosh(beta)
    if zeta == 0:
        value = _ratio(1.0, 2 * k * sh2)
    else:
        value = _ratio(r2, 2 * k * sh2 * zeta.real ** 2)
    mean_k3 = k * (1 + r2) / (1 - r2)
    mean_k2 = -2 * k * zeta.imag / (1 - r2)
    n_bar = su11_n_bar(mean_k2, mean_k3, beta)
    # photons per unit cosh(beta), real zeta branch
    weight = (1 + r2) / (1 - r2)

    def fixed_input(nb):
        a = 2 * k * weight
        return _ratio(a * a, 2 * k * ((nb + 1) ** 2 - a * a))

    def fixed_interferometer(nb):
        return _ratio(weight * ch, sh2 * (nb + 1))

    return SensitivityReport(value, n_bar, "SU(1,1) coherent input",
                             curves={"fixed-input": fixed_input,
                                     "fixed-interferometer": fixed_interferometer})


def su11_glauber_sensitivity(amps, mixer):
    """Glauber product input at phi = 0, any amplitudes and phases."""
    a2, b2 = amps.magnitude ** 2, amps.magnitude2 ** 2
    total = amps.phase + amps.phase2
    cos_sum = math.cos(total)
    if abs(cos_sum) < _ZERO_PHASE:
        cos_sum = 0.0
    beta = mixer.beta
    sh2 = math.sinh(beta) ** 2
    value = _ratio(a2 + b2, 4 * sh2 * a2 * b2 * cos_sum ** 2)
    mean_k2 = -amps.magnitude * amps.magnitude2 * math.sin(total)
    n_bar = su11_n_bar(mean_k2, (a2 + b2 + 1) / 2, beta)
    return SensitivityReport(value, n_bar, "Glauber product input")
