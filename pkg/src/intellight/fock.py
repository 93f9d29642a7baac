"""Truncated two-mode Fock space: the brute-force substrate.

States are complex grids ``amplitudes[n1, n2]``. Operators are sparse
matrices acting on the row-major flattening of that grid. Matrix elements
that touch the last level of either mode are wrong by construction, so all
fidelity checks stay on the interior and states must keep negligible
probability near the cutoffs.
"""
import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln

from .errors import DomainError, TruncationError

__all__ = [
    "TwoModeFockState",
    "ModeOperatorSet",
    "mode_operators",
    "glauber_cutoff",
    "glauber_product_state",
    "pad",
    "two_mode_squeeze",
    "squeeze_cutoff",
    "embed_irrep_state",
    "fock_expectation",
    "fock_variance",
    "conserved_quantity_check",
    "dump_csv",
]

EDGE = 3
DEFAULT_TAIL_TOL = 1e-12


def _edge_mass(probs):
    mask = np.zeros(probs.shape, dtype=bool)
    mask[-EDGE:, :] = True
    mask[:, -EDGE:] = True
    return float(probs[mask].sum())


@dataclass(frozen=True)
class TwoModeFockState:
    amplitudes: np.ndarray
    tail_mass: float = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 2:
            raise ValueError("amplitudes must be a 2-D grid")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "tail_mass", _edge_mass(np.abs(amps) ** 2))

    @property
    def cutoffs(self):
        return self.amplitudes.shape[0] - 1, self.amplitudes.shape[1] - 1

    @property
    def vector(self):
        return self.amplitudes.ravel()

    @property
    def norm_squared(self):
        return float(np.vdot(self.vector, self.vector).real)


@dataclass(frozen=True)
class ModeOperatorSet:
    """Mode and generator operators on one truncated grid."""

    cutoffs: tuple
    a1: sp.csr_matrix
    a2: sp.csr_matrix

    def __getattr__(self, name):
        builders = {
            "N": lambda: self.a1.conj().T @ self.a1 + self.a2.conj().T @ self.a2,
            "Nd": lambda: self.a1.conj().T @ self.a1 - self.a2.conj().T @ self.a2,
            "J1": lambda: (self.a1.conj().T @ self.a2 + self.a2.conj().T @ self.a1) / 2,
            "J2": lambda: (self.a1.conj().T @ self.a2 - self.a2.conj().T @ self.a1) / 2j,
            "J3": lambda: (self.a1.conj().T @ self.a1 - self.a2.conj().T @ self.a2) / 2,
            "K1": lambda: (self.a1.conj().T @ self.a2.conj().T + self.a1 @ self.a2) / 2,
            "K2": lambda: (self.a1.conj().T @ self.a2.conj().T - self.a1 @ self.a2) / 2j,
            "K3": lambda: (self.a1.conj().T @ self.a1 + self.a2.conj().T @ self.a2
                           + sp.identity(self.a1.shape[0])) / 2,
            "Kp": lambda: self.a1.conj().T @ self.a2.conj().T,
            "Km": lambda: self.a1 @ self.a2,
        }
        if name not in builders:
            raise AttributeError(name)
        op = sp.csr_matrix(builders[name]())
        object.__setattr__(self, name, op)
        return op

    def su2_set(self):
        return self.J1, self.J2, self.J3

    def su11_set(self):
        return self.K1, self.K2, self.K3


def _annihilation(n_max):
    return sp.diags(np.sqrt(np.arange(1, n_max + 1)), 1,
                    shape=(n_max + 1, n_max + 1), format="csr")


@lru_cache(maxsize=16)
def mode_operators(cutoffs):
    """Cached operator set for ``cutoffs = (n1_max, n2_max)``."""
    n1, n2 = cutoffs
    a1 = sp.kron(_annihilation(n1), sp.identity(n2 + 1), format="csr")
    a2 = sp.kron(sp.identity(n1 + 1), _annihilation(n2), format="csr")
    return ModeOperatorSet(cutoffs=(n1, n2), a1=a1, a2=a2)


def glauber_cutoff(alpha):
    """Per-mode cutoff |a|^2 + 8|a| + 16 (Poisson tail heuristic)."""
    mean = abs(alpha) ** 2
    return int(math.ceil(mean + 8 * math.sqrt(mean) + 16))


def _coherent_column(alpha, n_max):
    n = np.arange(n_max + 1)
    if alpha == 0:
        col = np.zeros(n_max + 1, dtype=complex)
        col[0] = 1.0
        return col
    logmag = -abs(alpha) ** 2 / 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    return np.exp(logmag) * np.exp(1j * n * np.angle(alpha))


def glauber_product_state(alpha, alpha_prime, cutoffs=None, tail_tol=DEFAULT_TAIL_TOL):
    """|alpha>_1 |alpha'>_2 truncated to ``cutoffs`` and renormalized."""
    if cutoffs is None:
        cutoffs = (glauber_cutoff(alpha), glauber_cutoff(alpha_prime))
    grid = np.outer(_coherent_column(alpha, cutoffs[0]),
                    _coherent_column(alpha_prime, cutoffs[1]))
    state = TwoModeFockState(grid / np.linalg.norm(grid))
    if state.tail_mass > tail_tol:
        raise TruncationError(f"tail mass {state.tail_mass:.3g} at cutoffs {cutoffs}")
    return state


def pad(state, cutoffs):
    """Embed ``state`` into a larger grid with zero amplitudes."""
    n1, n2 = cutoffs
    old = state.amplitudes
    if n1 < old.shape[0] - 1 or n2 < old.shape[1] - 1:
        raise DomainError("pad can only enlarge the grid")
    grid = np.zeros((n1 + 1, n2 + 1), dtype=complex)
    grid[:old.shape[0], :old.shape[1]] = old
    return TwoModeFockState(grid)


def squeeze_cutoff(mean_photons, beta, margin=8):
    """Cutoff per mode for squeezing a state with ``mean_photons`` in total.

    Covers the displaced part (mean grows by cosh(beta)) plus the thermal
    tail of the squeezed vacuum, whose level occupation falls as
    tanh(beta/2)^(2n).
    """
    grown = (mean_photons + 1) * math.cosh(beta)
    cut = grown + 10 * math.sqrt(grown) + margin
    if beta > 0:
        cut += 37 / (-2 * math.log(math.tanh(beta / 2)))
    return int(math.ceil(cut))


def two_mode_squeeze(state, beta, tail_tol=DEFAULT_TAIL_TOL, norm_tol=1e-9):
    """Apply exp((beta/2)(K+ - K-)) on the truncated grid.

    The Heisenberg action is a1 -> cosh(beta/2) a1 + sinh(beta/2) a2^dagger.
    The input must already sit on a grid large enough for the output
    (see :func:`squeeze_cutoff` and :func:`pad`).
    """
    if beta == 0:
        return state
    ops = mode_operators(state.cutoffs)
    return _evolve(state, (beta / 2) * (ops.Kp - ops.Km), "squeeze", tail_tol, norm_tol)


def su11_mixer(state, beta, tail_tol=DEFAULT_TAIL_TOL, norm_tol=1e-9):
    """Apply the interferometer mixer exp(i beta K1).

    It maps K3 -> cosh(beta) K3 - sinh(beta) K2, the boost-2 convention of
    :mod:`intellight.interferometer`.  :func:`two_mode_squeeze` differs from it
    by a quarter-turn of the relative phase.
    """
    if beta == 0:
        return state
    ops = mode_operators(state.cutoffs)
    return _evolve(state, 1j * beta * ops.K1, "mixer", tail_tol, norm_tol)


def _evolve(state, generator, what, tail_tol, norm_tol):
    out = expm_multiply(generator.tocsc(), state.vector)
    norm_sq = float(np.vdot(out, out).real)
    if abs(norm_sq - state.norm_squared) > norm_tol:
        raise TruncationError(f"{what} lost norm {state.norm_squared - norm_sq:.3g}")
    result = TwoModeFockState((out / math.sqrt(norm_sq)).reshape(state.amplitudes.shape))
    if result.tail_mass > tail_tol:
        raise TruncationError(
            f"post-{what} tail mass {result.tail_mass:.3g} at cutoffs {state.cutoffs}")
    return result


def embed_irrep_state(rep_state, cutoffs=None):
    """Map |j,m> -> |j+m>|j-m> or |k,n> -> |n+2k-1>|n> onto a Fock grid."""
    amps = rep_state.amplitudes
    if rep_state.group == "SU2":
        two_j = len(amps) - 1
        rows = np.arange(two_j + 1)
        cols = two_j - rows
    elif rep_state.group == "SU11":
        shift = int(round(2 * rep_state.label)) - 1
        cols = np.arange(len(amps))
        rows = cols + shift
    else:
        raise DomainError(f"unknown group {rep_state.group!r}")
    need = (int(rows.max()), int(cols.max()))
    if cutoffs is None:
        cutoffs = (need[0] + EDGE, need[1] + EDGE)
    if cutoffs[0] < need[0] or cutoffs[1] < need[1]:
        raise TruncationError(f"irrep support needs cutoffs {need}, got {tuple(cutoffs)}")
    grid = np.zeros((cutoffs[0] + 1, cutoffs[1] + 1), dtype=complex)
    grid[rows, cols] = amps
    return TwoModeFockState(grid)


def _check(state, op):
    if op.shape[0] != state.vector.size:
        raise DomainError(
            f"operator dimension {op.shape[0]} does not match state grid {state.cutoffs}")


def fock_expectation(state, op):
    """<psi|op|psi>."""
    _check(state, op)
    psi = state.vector
    return complex(np.vdot(psi, op @ psi))


def fock_variance(state, op):
    """<op^2> - <op>^2 for Hermitian ``op``, as ||op psi||^2 - <op>^2."""
    _check(state, op)
    psi = state.vector
    v = op @ psi
    mean = np.vdot(psi, v).real
    return float(np.vdot(v, v).real - mean ** 2)


def conserved_quantity_check(state, group):
    """Var(N) for SU(2) or Var(Nd) for SU(1,1); zero inside one irrep."""
    ops = mode_operators(state.cutoffs)
    if group == "SU2":
        return fock_variance(state, ops.N)
    if group == "SU11":
        return fock_variance(state, ops.Nd)
    raise DomainError(f"unknown group {group!r}")


def dump_csv(state, path):
    """Write (n1, n2, Re amp, Im amp) rows for every nonzero amplitude."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n1", "n2", "re", "im"])
        for (n1, n2), a in np.ndenumerate(state.amplitudes):
            if a != 0:
                w.writerow([n1, n2, f"{a.real:.15g}", f"{a.imag:.15g}"])
