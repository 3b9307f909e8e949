"""Numerics for the circular beta ensembles: finite-N and bulk-scaled
correlations, gap and spacing generating functions, structure functions, and
the 1/N^2 correction identities connecting them."""

from .numerics import (QuadratureRule, OdeProblem, Trajectory, IntegrationFailure,
                       gauss_legendre, gauss_jacobi, clenshaw_curtis,
                       sine_integral, digamma, harmonic_number, ode_integrate,
                       chebyshev_points, chebyshev_diff_matrix,
                       spectral_derivative, chebyshev_interpolate)
from .kernels import (KernelSpec, PfaffianKernelEntries, kernel_eval,
                      cue_kernel_bulk_expansion, pfaffian_entries)
from .correlations import (rho_n_cue, rho_n_pfaffian, pfaffian,
                           rho2_bulk_term, rho2_bulk_finite, verify_rho2_identity)
from .gap import (GapResult, CorrectionEstimate, AccuracyWarning, fredholm_det,
                  fredholm_trace_correction, e_bulk, e_pm, gap_probabilities,
                  e_finite_cue, extract_correction, verify_gap_identity,
                  verify_pm_identity)
from .painleve import (SigmaSolution, sigma0_series, sigma1_series,
                       solve_sigma0, sigma1_from_sigma0, e_tau)
from .spacing import (SeriesTable, E_CUE_SMALL_S, P0_BETA2, P1_BETA2, P2_BETA2,
                      P0_BETA1, P1_BETA1, eval_series, p_bulk,
                      verify_spacing_identity, spacing_series_identity_holds,
                      wigner_surmise, surmise_correction)
from .sff import (sff_exact, sff_bulk_scaled, sff_bulk_term, sff_series,
                  series_coefficient, verify_x6, X6Report, SymmetryReport,
                  check_functional_symmetry_and_zeros)
from .beta_even import (selberg, selberg_log, morris, evenness_factor,
                        v2_coefficient, rho2_even_beta, verify_421,
                        moment_integral, recurrence_sides, verify_moment_recurrence,
                        leading_xi_coefficient, leading_xi_coefficient_exact,
                        leading_xi_s_power, rho2_correction_limit)

__version__ = "0.1.0"
