"""Resonances of the half-line square barrier and their approximate states."""
from .barrier import (BarrierParams, CoefficientSet, beta3_continued, coefficients,
                      eigenfunction, internal_momentum, ls_outgoing, s_matrix)
from .errors import (BoundaryZero, DegenerateCoefficient, Disagreement, GridMismatch,
                     Incomplete, IndexOutOfRange, NoConvergence, PoleEvaluation,
                     ResonanceError, ToleranceNotMet, ZeroMomentum)
from .evolution import (SurvivalCurve, background, background_bound, default_tgrid,
                        survival_amplitude, survival_amplitude_for_state)
from .hardy import (BlaschkeSpec, HardyState, blaschke, cauchy_plus, hardy_norm_sq,
                    residue_identity_check, thetabar_star)
from .polefinder import (Pole, Rect, ResonanceSet, count_zeros, find_poles, lowest_poles,
                         refine_root)
from .quadrature import (FilonRule, QuadratureSpec, integrate_halfline, integrate_lorentzian,
                         integrate_oscillatory)
from .resonance import (ApproxState, GramMatrix, SampledState, approximate_state, gram_entry,
                        gram_matrix, l2_distance, spatial_state, weight)

__version__ = "0.1.0"
