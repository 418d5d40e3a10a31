"""Conditional no-jump evolution of a damped driven resonator coupled to a qubit.

The package computes survival probabilities W(t) of the next quantum jump,
their closed-form and asymptotic laws, the reduced qubit-readout model with
its characteristic eigenvalues, and Monte Carlo samples of next-jump times.
"""

from .closedform import (CoherentTrajectory, alpha_detuned, alpha_resonant,
                         beta_of, closed_form_record, coherent_trajectory,
                         figure1_curve, figure2_curve, mean_jump_time,
                         shorttime_mean_coefficient, shorttime_mean_jump_time,
                         survival_decrement, survival_dispersive_long,
                         survival_dispersive_short, survival_exact,
                         survival_shorttime, t3_fraction)
from .engine import (EvolutionSpec, Regime, StepControl, derivative_coupled,
                     derivative_detuned, derivative_resonant, evolve,
                     jump_density, survival_probability)
from .errors import (DegenerateCubic, InvalidParameter, NextJumpError,
                     NonMonotoneRecord, QuadratureFailure, RegimeMismatch,
                     StepSizeUnderflow, TailTooHeavy, TooFewSamples,
                     TruncationOverflow)
from .params import (FockTruncation, NoJumpState, QubitLevel, RecordSource,
                     SurvivalRecord, SystemParams, default_truncation,
                     initial_state, make_params)
from .readout import (EigenvalueSet, ReadoutErrorEstimate, ReducedState,
                      bright_decay, characteristic_roots, closure_constant,
                      displaced_B_state, evolve_reduced, jump_rate_asymptotic,
                      memory_kernel_cB1, readout_error, readout_time_estimate,
                      reduced_derivative, slow_rate)
from .sampling import (HistogramReport, JumpSampleSet, histogram_vs_density,
                       sample_jump_times, survival_at)

__version__ = "0.1.0"
