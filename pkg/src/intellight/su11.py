"""SU(1,1) discrete series on a truncated basis |k,n>, n = 0..n_max.

Two-mode picture: |k,n> = |n+2k-1>_1 |n>_2. K2-K3 intelligent states have
the coherent-state representation

    (1 + z/tau)^l (1 - tau z)^(-2k-l),   tau = (sqrt(eta^2+1) - 1)/eta,

with |tau| < 1 for every real eta != 0, so amplitudes decay geometrically
and a finite basis captures them to any tolerance.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln, logsumexp

from .arbeig import ladder_eig
from .errors import DomainError, TruncationError
from .specfun import jacobi_ratio, log_jacobi_p
from .states import RepState, fix_phase, moments

__all__ = [
    "Su11Irrep",
    "Su11IntelligentSpec",
    "Su11Generators",
    "su11_generators",
    "su11_coherent",
    "su11_intelligent",
    "su11_intelligent_eigen_oracle",
    "su11_intelligent_spectrum",
    "su11_norm_factor",
    "su11_k3_bracket",
    "su11_variance_k3_closed",
    "su11_state_moments",
    "MIN_N_MAX",
]

MIN_N_MAX = 64
# relative size of the last kept |amplitude|^2
TAIL_RATIO = 1e-16
COHERENT_TAIL = 1e-12
MOMENT_TAIL = 1e-10


@dataclass(frozen=True)
class Su11Irrep:
    """Bargmann index ``k`` and truncation level (None = choose adaptively)."""

    k: float
    n_max: int | None = None

    def __post_init__(self):
        if abs(2 * self.k - round(2 * self.k)) > 1e-12 or self.k < 0.5:
            raise DomainError(f"k must be a half-integer >= 1/2, got {self.k}")
        object.__setattr__(self, "k", round(2 * self.k) / 2)
        if self.n_max is not None and self.n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {self.n_max}")


def _irrep(irrep):
    return irrep if isinstance(irrep, Su11Irrep) else Su11Irrep(irrep)


@dataclass(frozen=True)
class Su11IntelligentSpec:
    irrep: Su11Irrep
    l: int
    eta: float

    def __post_init__(self):
        object.__setattr__(self, "irrep", _irrep(self.irrep))
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"l must be a non-negative integer, got {self.l}")
        object.__setattr__(self, "l", int(self.l))
        if self.eta == 0:
            raise DomainError("eta = 0 gives the K3 eigenstate |k,l>, not an "
                              "intelligent state")

    @property
    def tau(self):
        return (math.sqrt(self.eta ** 2 + 1) - 1) / self.eta

    @property
    def eigenvalue(self):
        return 1j * (self.irrep.k + self.l) * math.sqrt(self.eta ** 2 + 1)

    @property
    def x(self):
        return 1 / math.sqrt(self.eta ** 2 + 1)

    @property
    def t(self):
        return 4 * (self.eta ** 2 + 1) / self.eta ** 2

    @property
    def s_plus(self):
        return 1 - (self.x + 1) ** 2 * self.t / 4

    @property
    def s_minus(self):
        return 1 - (self.x - 1) ** 2 * self.t / 4

    @property
    def norm_factor(self):
        return su11_norm_factor(self.irrep, self.l, self.eta).closed


class Su11Generators(NamedTuple):
    K1: np.ndarray
    K2: np.ndarray
    K3: np.ndarray
    Kp: np.ndarray
    Km: np.ndarray


def _ladder_sq(k, n_max):
    n = np.arange(n_max)
    return (n + 1) * (n + 2 * k)


def su11_generators(irrep):
    """Truncated generator matrices; the last row/column is not exact."""
    irrep = _irrep(irrep)
    k = irrep.k
    n_max = irrep.n_max or MIN_N_MAX
    kp = np.diag(np.sqrt(_ladder_sq(k, n_max)), -1).astype(complex)
    km = kp.T.copy()
    return Su11Generators(
        K1=(kp + km) / 2,
        K2=(kp - km) / 2j,
        K3=np.diag(k + np.arange(n_max + 1)).astype(complex),
        Kp=kp,
        Km=km,
    )


def _log_basis_weight(k, n):
    # log of Gamma(2k+n) / (n! Gamma(2k))
    return gammaln(2 * k + n) - gammaln(n + 1) - gammaln(2 * k)


def su11_coherent(irrep, zeta):
    """Perelomov coherent state |k, zeta>, |zeta| < 1, renormalized."""
    irrep = _irrep(irrep)
    k = irrep.k
    r = abs(zeta)
    if r >= 1:
        raise DomainError(f"|zeta| must be < 1, got {r}")
    if r == 0:
        n_max = irrep.n_max or MIN_N_MAX
        amps = np.zeros(n_max + 1)
        amps[0] = 1.0
        return RepState("SU11", k, amps)

    def log_prob(n):
        return (2 * k * math.log1p(-r * r) + _log_basis_weight(k, n)
                + 2 * n * math.log(r))

    n_max = irrep.n_max
    if n_max is None:
        n_max = MIN_N_MAX
        while 1 - np.exp(log_prob(np.arange(n_max + 1))).sum() > COHERENT_TAIL:
            n_max *= 2
    n = np.arange(n_max + 1)
    lp = log_prob(n)
    tail = 1 - math.fsum(np.exp(lp).tolist())
    if tail > COHERENT_TAIL:
        raise TruncationError(f"n_max={n_max} leaves tail mass {tail:.3g}")
    amps = np.exp(lp / 2) * np.exp(1j * n * np.angle(zeta))
    return RepState("SU11", k, amps / np.linalg.norm(amps))


def _log_coefficients(k, l, tau, n_max):
    """log|c_n| for (1+z/tau)^l (1-tau z)^(-2k-l), n = 0..n_max."""
    n = np.arange(n_max + 1)[None, :]
    s = np.arange(l + 1)[:, None]
    m = np.clip(n - s, 0, None)
    terms = (gammaln(l + 1) - gammaln(s + 1) - gammaln(l - s + 1)
             + gammaln(2 * k + l + m) - gammaln(m + 1) - gammaln(2 * k + l)
             + (n - 2 * s) * math.log(abs(tau)))
    terms = np.where(n - s >= 0, terms, -np.inf)
    return logsumexp(terms, axis=0)


def _intelligent_log_amps(k, l, tau, n_max):
    n = np.arange(n_max + 1)
    return _log_coefficients(k, l, tau, n_max) - 0.5 * _log_basis_weight(k, n)


def auto_n_max(k, l, eta):
    """Smallest truncation (>= MIN_N_MAX, doubling) meeting the tail policy."""
    tau = (math.sqrt(eta ** 2 + 1) - 1) / eta
    n_max = MIN_N_MAX
    while True:
        la = 2 * _intelligent_log_amps(k, l, tau, n_max)
        if la[-1] - logsumexp(la) < math.log(TAIL_RATIO):
            return n_max
        n_max *= 2
        if n_max > 1 << 16:
            raise TruncationError("amplitudes do not decay; eta too large")


def su11_intelligent(spec):
    """Normalized intelligent state; n = 0 amplitude real positive."""
    k, l, tau = spec.irrep.k, spec.l, spec.tau
    n_max = spec.irrep.n_max or auto_n_max(k, l, spec.eta)
    log_amp = _intelligent_log_amps(k, l, tau, n_max)
    n = np.arange(n_max + 1)
    phase = np.where((tau < 0) & (n % 2 == 1), -1.0, 1.0)
    amps = np.exp(log_amp - log_amp.max()) * phase
    return RepState("SU11", k, fix_phase(amps / np.linalg.norm(amps)))


def su11_intelligent_eigen_oracle(irrep, l, eta, tol=1e-4):
    """Eigenvector of the truncated eta K2 + i K3 nearest i(k+l)sqrt(eta^2+1)."""
    spec = Su11IntelligentSpec(_irrep(irrep), l, eta)
    k = spec.irrep.k
    n_max = spec.irrep.n_max or auto_n_max(k, spec.l, eta)
    diag = k + np.arange(n_max + 1)
    values, vectors = ladder_eig(diag, _ladder_sq(k, n_max), eta, vectors=True)
    target = spec.eigenvalue
    idx = int(np.argmin(np.abs(values - target)))
    if abs(values[idx] - target) > tol:
        raise TruncationError(
            f"nearest eigenvalue {values[idx]} is {abs(values[idx] - target):.3g} "
            f"from {target}; increase n_max (now {n_max})")
    vec = vectors[:, idx]
    return RepState("SU11", k, fix_phase(vec / np.linalg.norm(vec)))


def su11_intelligent_spectrum(irrep, eta):
    """Eigenvalues of eta K2 + i K3 on the truncated basis, by imaginary part.

    Only the low part of the spectrum converges; compare two truncations to
    certify a given eigenvalue.
    """
    irrep = _irrep(irrep)
    k = irrep.k
    n_max = irrep.n_max or MIN_N_MAX
    values = ladder_eig(k + np.arange(n_max + 1), _ladder_sq(k, n_max), eta)
    return values[np.argsort(values.imag)]


class NormFactor(NamedTuple):
    direct: float
    closed: float


def su11_norm_factor(irrep, l, eta, max_terms=4000):
    """Normalization as a Jacobi series (direct) and in closed form.

    The series is summed until a term falls below 1e-18 of the running sum.
    """
    spec = Su11IntelligentSpec(_irrep(irrep), l, eta)
    k, l = spec.irrep.k, spec.l
    x, t = spec.x, spec.t
    logs = []
    for n in range(max_terms):
        sign, lp = log_jacobi_p(n, l - n, -2 * k - l - n, x)
        if sign == 0:
            continue
        logs.append(-_log_basis_weight(k, n) + 2 * lp + n * math.log(t))
        if n > l + 2 and logs[-1] - logsumexp(logs) < math.log(1e-18) \
                and logs[-1] < logs[-2]:
            break
    else:
        raise TruncationError(f"normalization series not converged in {max_terms} terms")
    direct = float(np.exp(logsumexp(logs)))

    sp, sm = spec.s_plus, spec.s_minus
    sign, lp = log_jacobi_p(l, 2 * k - 1, 0, 1 + 2 * t / (sp * sm))
    # S+ < 0 and the Jacobi argument is < -1, each contributing (-1)^l
    log_closed = (l * math.log(abs(sp)) - (2 * k + l) * math.log(sm)
                  + gammaln(l + 1) + gammaln(2 * k) - gammaln(2 * k + l) + lp)
    return NormFactor(direct, float(math.exp(log_closed)))


def su11_k3_bracket(k, l, eta):
    """Bracket B with Var(K3) = (eta^2 k / 2) B; B = 1 for l = 0."""
    y = 2 * eta ** 2 + 1
    ratio = jacobi_ratio(l - 1, 1, 2 * k, l, 0, 2 * k - 1, y)
    return 1 + (2 * k + l) / k * (eta ** 2 + 1) * ratio


def su11_variance_k3_closed(irrep, l, eta):
    spec = Su11IntelligentSpec(_irrep(irrep), l, eta)
    k = spec.irrep.k
    return eta ** 2 * k / 2 * su11_k3_bracket(k, spec.l, eta)


def su11_state_moments(state):
    """Means and symmetrized covariance of (K1, K2, K3) on a truncated state.

    Raises TruncationError if the last three levels carry more than 1e-10
    of the probability.
    """
    probs = np.abs(state.amplitudes) ** 2
    tail = probs[-3:].sum() / probs.sum()
    if tail > MOMENT_TAIL:
        raise TruncationError(f"tail mass {tail:.3g} exceeds {MOMENT_TAIL}")
    gens = su11_generators(Su11Irrep(state.label, state.dim - 1))
    return moments(state.amplitudes, (gens.K1, gens.K2, gens.K3))
