"""Closed-form solutions and asymptotic laws for the no-jump evolution.

These evaluators double as oracles for the ODE engine: the exact coherent
solution satisfies the amplitude equations identically, and the survival
probability obeys dW/dt = -kappa*|alpha|^2*W in every drive regime.

The asymptotic evaluators (short time, dispersive short/long time) always
return a number; their validity windows are documented, not enforced, so
regime maps can be drawn across the whole parameter plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NextJumpError, TailTooHeavy
from .params import RecordSource, SurvivalRecord, SystemParams

__all__ = [
    "CoherentTrajectory",
    "alpha_resonant",
    "alpha_detuned",
    "beta_of",
    "coherent_trajectory",
    "survival_exact",
    "survival_decrement",
    "survival_shorttime",
    "survival_dispersive_long",
    "survival_dispersive_short",
    "closed_form_record",
    "mean_jump_time",
    "shorttime_mean_coefficient",
    "shorttime_mean_jump_time",
    "t3_fraction",
    "figure1_curve",
    "figure2_curve",
]


@dataclass(frozen=True)
class CoherentTrajectory:
    """Coherent amplitude alpha(t) and log-prefactor beta(t) at one instant.

    The no-jump state is exp(beta) * alpha^n / sqrt(n!), so the norm is
    exp(beta + conj(beta) + |alpha|^2); both fields vanish at t = 0.
    """

    alpha: complex
    beta: complex

    @property
    def survival(self) -> float:
        return float(np.exp(2.0 * self.beta.real + abs(self.alpha) ** 2))


def _decay_const(params: SystemParams) -> complex:
    # kappa/2 - i*chi: the complex pole of the driven cavity response
    return params.kappa / 2.0 - 1j * params.chi


def alpha_resonant(t, params: SystemParams):
    """Coherent amplitude sqrt(nbar)*(1 - exp(-kappa*t/2)) of the resonant drive."""
    t = np.asarray(t, dtype=float)
    out = math.sqrt(params.nbar) * (1.0 - np.exp(-params.kappa * t / 2.0))
    return out if out.ndim else float(out)


def alpha_detuned(t, params: SystemParams):
    """Coherent amplitude of the detuned drive; equals the resonant one at chi=0."""
    t = np.asarray(t, dtype=float)
    d = _decay_const(params)
    out = params.gamma_drive / d * (1.0 - np.exp(-d * t))
    return out if out.ndim else complex(out)


def beta_of(t, params: SystemParams):
    """Log-prefactor beta(t), the antiderivative of -Gamma*alpha(t).

    beta(t) = -(Gamma^2/d) * [t + (exp(-d t) - 1)/d] with d = kappa/2 - i*chi,
    which reduces at chi = 0 to -(kappa/2)*nbar*[t + (2/kappa)(e^{-kappa t/2}-1)].
    """
    t = np.asarray(t, dtype=float)
    d = _decay_const(params)
    g = params.gamma_drive
    out = -(g * g) / d * (t + (np.exp(-d * t) - 1.0) / d)
    return out if out.ndim else complex(out)


def coherent_trajectory(t: float, params: SystemParams) -> CoherentTrajectory:
    """Bundle alpha and beta at time t (detuned form; exact for chi=0 too)."""
    return CoherentTrajectory(alpha=complex(alpha_detuned(t, params)),
                              beta=complex(beta_of(t, params)))


def survival_exact(t, params: SystemParams):
    """Exact no-jump survival W(t) = exp(beta + beta* + |alpha|^2)."""
    a = alpha_detuned(t, params)
    b = beta_of(t, params)
    out = np.exp(2.0 * np.real(b) + np.abs(a) ** 2)
    return out if np.ndim(out) else float(out)


def survival_decrement(t, params: SystemParams):
    """Analytic dW/dt = -kappa*|alpha|^2*W for the exact solution."""
    a = alpha_detuned(t, params)
    out = -params.kappa * np.abs(a) ** 2 * survival_exact(t, params)
    return out if np.ndim(out) else float(out)


def survival_shorttime(t, params: SystemParams):
    """Cubic-exponent short-time law exp(-nbar*(kappa*t)^3/12); valid kappa*t << 1."""
    t = np.asarray(t, dtype=float)
    out = np.exp(-params.nbar * (params.kappa * t) ** 3 / 12.0)
    return out if out.ndim else float(out)


def survival_dispersive_long(t, params: SystemParams):
    """Exponential law exp(-Gamma^2/chi^2 - Gamma^2*kappa*t/chi^2).

    Valid for kappa/chi << 1 and kappa*t >> 1.
    """
    t = np.asarray(t, dtype=float)
    g2 = params.gamma_drive ** 2
    if params.chi == 0.0:
        raise ZeroDivisionError("dispersive long-time law requires chi > 0")
    c2 = params.chi ** 2
    out = np.exp(-g2 / c2 - g2 * params.kappa * t / c2)
    return out if out.ndim else float(out)


def survival_dispersive_short(t, params: SystemParams):
    """Oscillatory dispersive law exp[-(kappa^3 nbar / 2 chi^2)(t - sin(chi t)/chi)].

    Valid for kappa/chi << 1 and kappa*t < 1; for chi*t << 1 it reduces to
    the cubic short-time law.
    """
    t = np.asarray(t, dtype=float)
    if params.chi == 0.0:
        raise ZeroDivisionError("dispersive short-time law requires chi > 0")
    pref = params.kappa ** 3 * params.nbar / (2.0 * params.chi ** 2)
    out = np.exp(-pref * (t - np.sin(params.chi * t) / params.chi))
    return out if out.ndim else float(out)


def closed_form_record(params: SystemParams, t_end: float, n_points: int = 1001,
                       t_grid=None) -> SurvivalRecord:
    """Survival record sampled from the exact solution on a uniform grid."""
    if t_grid is None:
        t = np.linspace(0.0, float(t_end), int(n_points))
    else:
        t = np.asarray(t_grid, dtype=float)
    w = survival_exact(t, params)
    dw = survival_decrement(t, params)
    return SurvivalRecord(t=t, w=np.asarray(w), dw_dt=np.asarray(dw),
                          source=RecordSource.CLOSED_FORM, params=params)


def _asymptotic_rate(record: SurvivalRecord) -> float | None:
    """Long-time exponential decay rate of W implied by the record's regime."""
    p = record.params
    if record.source is RecordSource.REDUCED_MODEL and abs(p.omega_rabi) > 0 \
            and p.gamma_drive > 0:
        beta_b = 2.0 * math.sqrt(2.0 / math.pi) * p.gamma_drive
        return 2.0 * (2.0 * abs(p.omega_rabi) ** 2 / beta_b)
    if p.nbar > 0:
        # stationary |alpha|^2 decay channel; equals kappa*nbar on resonance
        return p.kappa * p.gamma_drive ** 2 / (p.kappa ** 2 / 4.0 + p.chi ** 2)
    return None


def mean_jump_time(record: SurvivalRecord, w_cutoff: float = 1e-6) -> float:
    """Mean time to the next jump, integral of W over [0, infinity).

    Integration by parts of -t dW/dt; trapezoidal on the grid plus an
    analytic exponential tail beyond the last grid point.
    """
    record.validate()
    w_end = float(record.w[-1])
    rate = _asymptotic_rate(record)
    if rate is None or rate <= 0.0:
        raise TailTooHeavy(
            f"W(t_end) = {w_end:.3g} and no exponential tail model applies")
    if w_end > w_cutoff:
        tail_span = w_end / rate
        body = float(np.trapezoid(record.w, record.t))
        if tail_span > body:
            raise TailTooHeavy(
                f"W(t_end) = {w_end:.3g} exceeds cutoff {w_cutoff:.3g} and the "
                f"tail would dominate the grid contribution")
    return float(np.trapezoid(record.w, record.t)) + w_end / rate


def shorttime_mean_coefficient() -> float:
    """Coefficient gamma(1/3)/3 of the cubic-law mean jump time, ~0.892980."""
    return math.gamma(1.0 / 3.0) / 3.0


def shorttime_mean_jump_time(params: SystemParams) -> float:
    """Cubic-law estimate a0*(3/(kappa*Gamma^2))^(1/3) of the mean jump time."""
    g = params.gamma_drive
    if g == 0.0:
        raise ZeroDivisionError("mean jump time diverges at zero drive")
    return shorttime_mean_coefficient() * (3.0 / (params.kappa * g * g)) ** (1.0 / 3.0)


def t3_fraction(params: SystemParams) -> float:
    """Fraction of jumps falling inside the cubic-law window: kappa^3*nbar/(12*chi^3)."""
    if params.chi == 0.0:
        raise ZeroDivisionError("t3_fraction requires chi > 0")
    return params.kappa ** 3 * params.nbar / (12.0 * params.chi ** 3)


def figure1_curve(tau_grid, nbar: float) -> np.ndarray:
    """Scaled log-norm log(W)/nbar on a dimensionless grid tau = kappa*t.

    Returns -tau + 2*alpha(tau)/sqrt(nbar) + alpha(tau)^2/nbar with the
    resonant alpha at kappa = 1.  The curve crosses over from -tau^3/12 at
    small tau to the line 3 - tau at large tau.
    """
    if nbar <= 0:
        raise ZeroDivisionError("figure1_curve requires nbar > 0")
    tau = np.asarray(tau_grid, dtype=float)
    p = SystemParams(kappa=1.0, nbar=float(nbar))
    a = alpha_resonant(tau, p)
    return -tau + 2.0 * a / math.sqrt(nbar) + a ** 2 / nbar


def figure2_curve(tau_grid, chi_over_kappa: float, _check_points: int = 20) -> np.ndarray:
    """Scaled logarithmic decrement Y(tau) of the detuned survival.

    Y = (1 - e^{-tau/2})^2 + 4 e^{-tau/2} sin^2(chi*tau/(2*kappa)); each call
    cross-checks the identity Y = [1 + (2 chi/kappa)^2] * |alpha|^2 / nbar on
    a sample of the grid and raises if the two routes disagree.
    """
    if chi_over_kappa <= 0:
        raise ZeroDivisionError("figure2_curve requires chi/kappa > 0")
    tau = np.asarray(tau_grid, dtype=float)
    y = (1.0 - np.exp(-tau / 2.0)) ** 2 \
        + 4.0 * np.exp(-tau / 2.0) * np.sin(chi_over_kappa * tau / 2.0) ** 2

    # identity check against the coherent amplitude route (nbar cancels)
    sample = tau if tau.size <= _check_points else \
        tau[np.linspace(0, tau.size - 1, _check_points).astype(int)]
    p = SystemParams(kappa=1.0, nbar=4.0, chi=float(chi_over_kappa))
    a = alpha_detuned(sample, p)
    y_alpha = (1.0 + (2.0 * chi_over_kappa) ** 2) * np.abs(a) ** 2 / p.nbar
    y_direct = (1.0 - np.exp(-sample / 2.0)) ** 2 \
        + 4.0 * np.exp(-sample / 2.0) * np.sin(chi_over_kappa * sample / 2.0) ** 2
    if not np.allclose(y_alpha, y_direct, rtol=0.0, atol=1e-10):
        raise NextJumpError("scaled log-decrement identity check failed")
    return y
