"""State containers shared by the SU(2) and SU(1,1) modules."""
from dataclasses import dataclass, field

import numpy as np

__all__ = ["RepState", "MomentSummary", "moments", "fix_phase"]


@dataclass(frozen=True)
class RepState:
    """Amplitudes over an orthonormal irrep basis.

    ``group`` is ``"SU2"`` (basis |j,m>, m = -j..j) or ``"SU11"`` (basis
    |k,n>, n = 0..n_max). ``label`` holds j or k.
    """

    group: str
    label: float
    amplitudes: np.ndarray
    norm_squared: float = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "norm_squared",
                           float(np.vdot(amps, amps).real))

    @property
    def dim(self):
        return len(self.amplitudes)

    def overlap(self, other):
        """<self|other> on the common leading part of the two bases."""
        n = min(self.dim, other.dim)
        return complex(np.vdot(self.amplitudes[:n], other.amplitudes[:n]))


@dataclass(frozen=True)
class MomentSummary:
    """First and symmetrized second moments of a generator triple."""

    mean: np.ndarray
    covariance: np.ndarray

    def variance(self, axis):
        """Variance of generator ``axis`` (1, 2 or 3)."""
        return float(self.covariance[axis - 1, axis - 1])


def moments(psi, ops):
    """Means and symmetrized covariances of three Hermitian operators.

    ``ops`` may be dense arrays or scipy sparse matrices.
    """
    psi = np.asarray(psi, dtype=complex)
    applied = [op @ psi for op in ops]
    mean = np.array([np.vdot(psi, v).real for v in applied])
    cov = np.empty((3, 3))
    for a in range(3):
        for b in range(a, 3):
            # <A B> = (A psi)^dagger (B psi) for Hermitian A
            sym = np.vdot(applied[a], applied[b]).real
            cov[a, b] = cov[b, a] = sym - mean[a] * mean[b]
    return MomentSummary(mean=mean, covariance=cov)


def fix_phase(amps):
    """Rotate so the first non-negligible amplitude is real positive."""
    amps = np.asarray(amps, dtype=complex)
    scale = np.abs(amps).max()
    if scale == 0:
        raise ValueError("zero vector")
    idx = np.flatnonzero(np.abs(amps) > scale * 1e-12)[0]
    return amps * (abs(amps[idx]) / amps[idx])
