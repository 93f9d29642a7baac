"""Phase sensitivity of SU(2) and SU(1,1) interferometers.

Closed forms for intelligent, coherent, Fock, Glauber and squeezed inputs,
each paired with a brute-force oracle (exact eigen-solves, irrep moments,
truncated two-mode Fock simulation).
"""
__version__ = "0.1.0"

from .errors import ConsistencyError, DomainError, SingularityError, TruncationError
from .specfun import binom_gen, jacobi_p, lagrange_g
from .states import MomentSummary, RepState
from .su2 import (Su2IntelligentSpec, Su2Irrep, su2_coherent, su2_generators,
                  su2_intelligent, su2_intelligent_eigen_oracle, su2_norm_factor,
                  su2_state_moments, su2_variance_j3_closed)
from .su11 import (Su11IntelligentSpec, Su11Irrep, su11_coherent, su11_generators,
                   su11_intelligent, su11_intelligent_eigen_oracle, su11_norm_factor,
                   su11_state_moments, su11_variance_k3_closed)
from .interferometer import (GlauberAmp, MixerParam, PhaseShift, SensitivityReport,
                             element_matrix, output_observable, phase_uncertainty)
from .analysis import (exponent_estimate, g_factor_su2, g_factor_su11, g_limits,
                       intelligent_sensitivity, quasi_intelligent_stats)
