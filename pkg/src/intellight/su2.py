"""SU(2) irreps: generators, coherent states and J2-J3 intelligent states.

Basis order is m = -j, ..., +j, so index ``i`` holds ``m = i - j``. In the
two-mode picture |j,m> = |j+m>_1 |j-m>_2.

Intelligent states solve ``(eta J2 + i J3)|psi> = lambda |psi>``. In the
coherent-state representation they are

    (1 + z/tau)^(j+m0) (1 + tau z)^(j-m0),   tau = (1 - sqrt(1-eta^2))/eta,

and the amplitude of |j,m> is the z^(j+m) Taylor coefficient divided by
sqrt(C(2j, j+m)).
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, logsumexp

from .arbeig import ladder_eig
from .errors import ConsistencyError, DomainError, SingularityError
from .specfun import jacobi_p, jacobi_ratio, log_jacobi_p
from .states import RepState, fix_phase, moments

__all__ = [
    "Su2Irrep",
    "Su2IntelligentSpec",
    "Su2Generators",
    "NormFactor",
    "su2_generators",
    "su2_coherent",
    "su2_intelligent",
    "su2_intelligent_jacobi",
    "su2_intelligent_eigen_oracle",
    "su2_intelligent_spectrum",
    "su2_norm_factor",
    "su2_j3_bracket",
    "su2_variance_j3_closed",
    "su2_state_moments",
]


def _is_half_integer(v):
    return abs(2 * v - round(2 * v)) < 1e-12


@dataclass(frozen=True)
class Su2Irrep:
    j: float

    def __post_init__(self):
        if not _is_half_integer(self.j) or self.j < 0.5:
            raise DomainError(f"j must be a half-integer >= 1/2, got {self.j}")
        object.__setattr__(self, "j", round(2 * self.j) / 2)

    @property
    def dim(self):
        return int(round(2 * self.j)) + 1

    @property
    def m_values(self):
        return np.arange(self.dim) - self.j


def _irrep(irrep):
    return irrep if isinstance(irrep, Su2Irrep) else Su2Irrep(irrep)


def _check_m0(irrep, m0):
    if not _is_half_integer(irrep.j - m0) or abs(irrep.j - m0) % 1 > 1e-12:
        raise DomainError(f"m0 must differ from j={irrep.j} by an integer, got {m0}")
    if abs(m0) > irrep.j + 1e-12:
        raise DomainError(f"|m0| must not exceed j={irrep.j}, got {m0}")
    return round(2 * m0) / 2


@dataclass(frozen=True)
class Su2IntelligentSpec:
    """Parameters of a J2-J3 intelligent state plus derived quantities."""

    irrep: Su2Irrep
    m0: float
    eta: float

    def __post_init__(self):
        object.__setattr__(self, "irrep", _irrep(self.irrep))
        object.__setattr__(self, "m0", _check_m0(self.irrep, self.m0))
        if self.eta == 0:
            raise DomainError("eta = 0 gives the J3 eigenstate |j,m0>, not an "
                              "intelligent state")
        if abs(self.eta) > 1:
            raise DomainError(f"SU(2) intelligent states need |eta| <= 1, got {self.eta}")

    @property
    def tau(self):
        return (1 - math.sqrt(1 - self.eta ** 2)) / self.eta

    @property
    def eigenvalue(self):
        return 1j * self.m0 * math.sqrt(1 - self.eta ** 2)

    @property
    def x(self):
        return 1 / math.sqrt(1 - self.eta ** 2)

    @property
    def t(self):
        return 4 * (1 - self.eta ** 2) / self.eta ** 2

    @property
    def s_plus(self):
        return 1 + (self.x + 1) ** 2 * self.t / 4

    @property
    def s_minus(self):
        return 1 + (self.x - 1) ** 2 * self.t / 4

    @property
    def norm_factor(self):
        return su2_norm_factor(self.irrep, self.m0, self.eta).direct


class Su2Generators(NamedTuple):
    J1: np.ndarray
    J2: np.ndarray
    J3: np.ndarray
    Jp: np.ndarray
    Jm: np.ndarray


def su2_generators(irrep):
    """Dense (2j+1)-dimensional generator matrices in the |j,m> basis."""
    irrep = _irrep(irrep)
    j, m = irrep.j, irrep.m_values
    ladder = np.sqrt((j - m[:-1]) * (j + m[:-1] + 1))
    jp = np.diag(ladder, -1).astype(complex)
    jm = jp.T.copy()
    return Su2Generators(
        J1=(jp + jm) / 2,
        J2=(jp - jm) / 2j,
        J3=np.diag(m).astype(complex),
        Jp=jp,
        Jm=jm,
    )


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _normalized(log_amp, phase):
    # exponentiate log-magnitudes after removing the maximum
    log_amp = np.asarray(log_amp, dtype=float)
    mag = np.exp(log_amp - log_amp.max())
    amps = mag * phase
    return amps / np.linalg.norm(amps)


def su2_coherent(irrep, zeta):
    """Generalized coherent state |j, zeta> = exp(zeta J+)|j,-j> / norm."""
    irrep = _irrep(irrep)
    two_j = irrep.dim - 1
    n = np.arange(two_j + 1)
    if zeta == 0:
        amps = np.zeros(two_j + 1)
        amps[0] = 1.0
        return RepState("SU2", irrep.j, amps)
    log_amp = 0.5 * _log_binom(two_j, n) + n * math.log(abs(zeta))
    phase = np.exp(1j * n * np.angle(zeta))
    return RepState("SU2", irrep.j, _normalized(log_amp, phase))


def _log_convolution(a_exp, b_exp, tau, two_j):
    """log|c_n| of the Taylor coefficients of (1+z/tau)^a (1+tau z)^b."""
    n = np.arange(two_j + 1)[None, :]
    s = np.arange(a_exp + 1)[:, None]
    valid = (n - s >= 0) & (n - s <= b_exp)
    with np.errstate(invalid="ignore"):
        terms = (_log_binom(a_exp, s) + _log_binom(b_exp, np.clip(n - s, 0, b_exp))
                 + (n - 2 * s) * math.log(abs(tau)))
    terms = np.where(valid, terms, -np.inf)
    return logsumexp(terms, axis=0)


def su2_intelligent(spec):
    """Normalized intelligent state from binomial convolution.

    All terms of the convolution share the sign ``sign(tau)**n``, so the
    coefficients are accumulated as log-magnitudes; j up to ~1000 is fine.
    """
    irrep = spec.irrep
    two_j = irrep.dim - 1
    a_exp = int(round(irrep.j + spec.m0))
    b_exp = int(round(irrep.j - spec.m0))
    tau = spec.tau
    n = np.arange(two_j + 1)
    log_c = _log_convolution(a_exp, b_exp, tau, two_j)
    log_amp = log_c - 0.5 * _log_binom(two_j, n)
    phase = np.where((tau < 0) & (n % 2 == 1), -1.0, 1.0)
    return RepState("SU2", irrep.j, fix_phase(_normalized(log_amp, phase)))


def su2_intelligent_jacobi(spec):
    """Same state from the Jacobi-polynomial coefficient formula.

    The (x, t) parametrization degenerates at |eta| = 1, so this route is
    restricted to |eta| <= 0.99 and serves as a cross-check.
    """
    if abs(spec.eta) > 0.99:
        raise DomainError("Jacobi route needs |eta| <= 0.99")
    irrep = spec.irrep
    j, m0 = irrep.j, spec.m0
    x, t = spec.x, spec.t
    amps = []
    for m in irrep.m_values:
        n = int(round(j + m))
        p = jacobi_p(n, m0 - m, -m0 - m, x)
        log_w = 0.5 * (gammaln(j + m + 1) + gammaln(j - m + 1) - gammaln(2 * j + 1))
        amps.append(p * math.exp(log_w) * t ** (n / 2))
    amps = np.array(amps)
    if spec.eta < 0:
        amps = amps * np.where(np.arange(len(amps)) % 2 == 1, -1.0, 1.0)
    return RepState("SU2", j, fix_phase(amps / np.linalg.norm(amps)))


def _boundary_null_vector(irrep, eta, tol):
    # At |eta| = 1 every eigenvalue is 0 and the operator is a single Jordan
    # block, so eigenvalue isolation fails; its one-dimensional kernel is
    # still well defined and the SVD finds it.
    gens = su2_generators(irrep)
    op = eta * gens.J2 + 1j * gens.J3
    _, sing, vh = np.linalg.svd(op)
    if sing[-1] > tol or (len(sing) > 1 and sing[-2] < tol):
        raise ConsistencyError(f"kernel of eta J2 + i J3 is not one-dimensional: {sing[-2:]}")
    vec = vh[-1].conj()
    return fix_phase(vec / np.linalg.norm(vec))


def su2_intelligent_eigen_oracle(irrep, m0, eta, tol=1e-6):
    """Brute-force eigenvector of eta J2 + i J3 for eigenvalue i m0 sqrt(1-eta^2).

    At |eta| = 1 the eigenvalue is degenerate and the kernel is taken instead.
    """
    spec = Su2IntelligentSpec(_irrep(irrep), m0, eta)
    irrep = spec.irrep
    m = irrep.m_values
    j = irrep.j
    ladder_sq = (j - m[:-1]) * (j + m[:-1] + 1)
    if abs(eta) >= 1:
        return RepState("SU2", j, _boundary_null_vector(irrep, eta, tol))
    values, vectors = ladder_eig(m, ladder_sq, eta, vectors=True)
    target = spec.eigenvalue
    idx = int(np.argmin(np.abs(values - target)))
    if abs(values[idx] - target) > tol:
        raise ConsistencyError(
            f"no eigenvalue within {tol} of {target}; nearest {values[idx]}")
    vec = vectors[:, idx]
    return RepState("SU2", j, fix_phase(vec / np.linalg.norm(vec)))


def su2_intelligent_spectrum(irrep, eta):
    """All eigenvalues of eta J2 + i J3, sorted by imaginary part."""
    irrep = _irrep(irrep)
    m = irrep.m_values
    j = irrep.j
    values = ladder_eig(m, (j - m[:-1]) * (j + m[:-1] + 1), eta)
    return values[np.argsort(values.imag)]


class NormFactor(NamedTuple):
    direct: float
    closed: float | None


def su2_norm_factor(irrep, m0, eta):
    """Normalization of (1+z/tau)^(j+m0)(1+tau z)^(j-m0) in the |j,m> basis.

    ``direct`` is the finite Jacobi sum over n = 0..2j; ``closed`` is the
    summed form in S+ and S-. At |eta| = 1 the (x, t) variables are singular:
    ``closed`` is then None and ``direct`` comes from the binomial
    convolution instead.
    """
    spec = Su2IntelligentSpec(_irrep(irrep), m0, eta)
    j, m0 = spec.irrep.j, spec.m0
    two_j = spec.irrep.dim - 1
    if abs(eta) >= 1:
        a_exp, b_exp = int(round(j + m0)), int(round(j - m0))
        log_c = _log_convolution(a_exp, b_exp, spec.tau, two_j)
        n = np.arange(two_j + 1)
        return NormFactor(float(np.exp(logsumexp(2 * log_c - _log_binom(two_j, n)))),
                          None)
    x, t = spec.x, spec.t
    logs = []
    for n in range(two_j + 1):
        sign, lp = log_jacobi_p(n, j + m0 - n, j - m0 - n, x)
        if sign == 0:
            continue
        logs.append(-_log_binom(two_j, n) + 2 * lp + n * math.log(t))
    direct = float(np.exp(logsumexp(logs)))

    deg = int(round(j - abs(m0)))
    sp, sm = spec.s_plus, spec.s_minus
    sign, lp = log_jacobi_p(deg, -2 * j - 1, 0, 1 - 2 * t / (sp * sm))
    if sign * (-1) ** deg <= 0:
        raise SingularityError("closed normalization is not positive")
    log_closed = ((j + m0) * math.log(sp) + (j - m0) * math.log(sm)
                  - _log_binom(two_j, j + m0) + lp)
    return NormFactor(direct, float(math.exp(log_closed)))


def su2_j3_bracket(j, m0, eta):
    """Bracket B with Var(J3) = (eta^2 j / 2) B for the intelligent state.

    B = 1 + ((j+|m0|)/j)(1-eta^2) P_{j-|m0|-1}^(1,-2j)(y) / P_{j-|m0|}^(0,-2j-1)(y)
    with y = 1 - 2 eta^2; an empty numerator polynomial counts as zero.
    """
    deg = int(round(j - abs(m0)))
    y = 1 - 2 * eta ** 2
    try:
        ratio = jacobi_ratio(deg - 1, 1, -2 * j, deg, 0, -2 * j - 1, y)
    except ZeroDivisionError:
        raise SingularityError(
            f"P_{deg}^(0,{-2 * j - 1}) vanishes at y={y}") from None
    return 1 + (j + abs(m0)) / j * (1 - eta ** 2) * ratio


def su2_variance_j3_closed(irrep, m0, eta):
    """Closed-form Var(J3) over the intelligent state (depends on eta^2 only)."""
    spec = Su2IntelligentSpec(_irrep(irrep), m0, eta)
    j = spec.irrep.j
    return eta ** 2 * j / 2 * su2_j3_bracket(j, spec.m0, eta)


def su2_state_moments(state):
    """Exact means and symmetrized covariance of (J1, J2, J3)."""
    gens = su2_generators(state.label)
    return moments(state.amplitudes, (gens.J1, gens.J2, gens.J3))
