"""Adaptive integration of the truncated no-jump amplitude equations.

Three regimes share one ladder structure:

* resonant   -- drive on the bare resonance, qubit locked in G;
* detuned    -- drive shifted by chi, qubit locked in G;
* coupled    -- Rabi coupling between G and B, drive on the B resonance,
                so the detuning phase acts on the G manifold only.

The drive couples neighbouring Fock levels through sqrt(n) C_{n-1} and
sqrt(n+1) C_{n+1}; damping removes norm at rate kappa*n/2 per amplitude,
which is the only non-norm-preserving term.  dW/dt is therefore recorded
analytically as -kappa * sum_n n (|C_{G,n}|^2 + |C_{B,n}|^2), never by
finite differences.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (InvalidParameter, RegimeMismatch, StepSizeUnderflow,
                     TruncationOverflow)
from .params import (FockTruncation, NoJumpState, RecordSource, SurvivalRecord,
                     SystemParams)

__all__ = [
    "Regime",
    "StepControl",
    "EvolutionSpec",
    "derivative_resonant",
    "derivative_detuned",
    "derivative_coupled",
    "survival_probability",
    "evolve",
    "jump_density",
]


class Regime(enum.Enum):
    RESONANT = "resonant"
    DETUNED = "detuned"
    COUPLED = "coupled"


@dataclass(frozen=True)
class StepControl:
    """Adaptive step tolerances; max_step defaults to 0.05/kappa at run time."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_step: float | None = None

    def __post_init__(self) -> None:
        for name in ("abs_tol", "rel_tol"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise InvalidParameter(f"{name} must be in (0, 1), got {v}")
        if self.max_step is not None and self.max_step <= 0:
            raise InvalidParameter("max_step must be positive")


@dataclass(frozen=True)
class EvolutionSpec:
    """What to integrate and how to sample the output.

    ``output_stride`` records every k-th accepted integrator step; when
    ``t_eval`` is given it overrides the stride and the solution is sampled
    on that explicit grid through the integrator's dense interpolant.
    """

    regime: Regime
    t_end: float
    step_ctrl: StepControl = field(default_factory=StepControl)
    output_stride: int = 1
    t_eval: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.t_end <= 0:
            raise InvalidParameter(f"t_end must be > 0, got {self.t_end}")
        if self.output_stride < 1:
            raise InvalidParameter("output_stride must be >= 1")


def _ladder(c: np.ndarray, gamma: float, kappa: float, n: np.ndarray,
            sq: np.ndarray, sq1: np.ndarray) -> np.ndarray:
    """Drive + damping ladder: Gamma[sqrt(n) c_{n-1} - sqrt(n+1) c_{n+1}] - (kappa n/2) c."""
    d = -(kappa * n / 2.0) * c
    d[1:] += gamma * sq[1:] * c[:-1]
    d[:-1] -= gamma * sq1[:-1] * c[1:]
    return d


def _index_arrays(n_levels: int):
    n = np.arange(n_levels, dtype=float)
    return n, np.sqrt(n), np.sqrt(n + 1.0)


def derivative_resonant(state: NoJumpState, params: SystemParams) -> np.ndarray:
    """Time derivative of the G-manifold amplitudes under the resonant drive."""
    if params.chi != 0.0 or params.omega_rabi != 0.0:
        raise RegimeMismatch("resonant regime requires chi = 0 and omega_rabi = 0")
    n, sq, sq1 = _index_arrays(len(state.amps_G))
    return _ladder(state.amps_G.astype(complex), params.gamma_drive, params.kappa,
                   n, sq, sq1)


def derivative_detuned(state: NoJumpState, params: SystemParams) -> np.ndarray:
    """Resonant derivative plus the dispersive phase term i*n*chi per level."""
    if params.omega_rabi != 0.0:
        raise RegimeMismatch("detuned regime requires omega_rabi = 0")
    n, sq, sq1 = _index_arrays(len(state.amps_G))
    c = state.amps_G.astype(complex)
    return _ladder(c, params.gamma_drive, params.kappa, n, sq, sq1) \
        + 1j * n * params.chi * c


def derivative_coupled(state: NoJumpState, params: SystemParams):
    """Derivatives (dG, dB) with Rabi exchange and the drive on the B resonance."""
    n, sq, sq1 = _index_arrays(len(state.amps_G))
    g = state.amps_G.astype(complex)
    b = state.amps_B.astype(complex)
    om = params.omega_rabi
    dg = _ladder(g, params.gamma_drive, params.kappa, n, sq, sq1) \
        + 1j * n * params.chi * g + 1j * np.conj(om) * b
    db = _ladder(b, params.gamma_drive, params.kappa, n, sq, sq1) + 1j * om * g
    return dg, db


def survival_probability(state: NoJumpState) -> float:
    """Norm-squared sum over both manifolds."""
    return state.norm()


def _check_regime(regime: Regime, params: SystemParams, initial: NoJumpState) -> None:
    if regime is Regime.RESONANT and (params.chi != 0.0 or params.omega_rabi != 0.0):
        raise RegimeMismatch("resonant regime requires chi = 0 and omega_rabi = 0")
    if regime is Regime.DETUNED and params.omega_rabi != 0.0:
        raise RegimeMismatch("detuned regime requires omega_rabi = 0")
    if regime is not Regime.COUPLED and np.any(initial.amps_B != 0):
        raise RegimeMismatch(
            "B-manifold amplitudes present; use the coupled regime")


def evolve(initial: NoJumpState, params: SystemParams, spec: EvolutionSpec,
           truncation: FockTruncation | None = None):
    """Integrate one regime; returns (SurvivalRecord, state at the last grid point).

    Raises :class:`TruncationOverflow` when the top two retained levels
    ever hold more than ``tail_tol`` of the norm (the record would be
    systematically corrupted, so no silent renormalization is attempted),
    and :class:`StepSizeUnderflow` when the integrator stalls.
    """
    _check_regime(spec.regime, params, initial)
    if truncation is None:
        truncation = FockTruncation(n_max=initial.n_max)
    if truncation.n_max != initial.n_max:
        raise InvalidParameter("truncation does not match the state length")
    if spec.t_end <= initial.time:
        raise InvalidParameter("t_end must exceed the initial time")

    n_levels = initial.n_max + 1
    n, sq, sq1 = _index_arrays(n_levels)
    gam = params.gamma_drive
    kap = params.kappa
    chi = params.chi
    om = params.omega_rabi
    coupled = spec.regime is Regime.COUPLED

    if coupled:
        y0 = np.concatenate((initial.amps_G, initial.amps_B)).astype(complex)

        def rhs(t, y):
            g = y[:n_levels]
            b = y[n_levels:]
            dg = _ladder(g, gam, kap, n, sq, sq1) + 1j * n * chi * g \
                + 1j * np.conj(om) * b
            db = _ladder(b, gam, kap, n, sq, sq1) + 1j * om * g
            return np.concatenate((dg, db))
    else:
        y0 = initial.amps_G.astype(complex)
        if spec.regime is Regime.DETUNED:
            def rhs(t, y):
                return _ladder(y, gam, kap, n, sq, sq1) + 1j * n * chi * y
        else:
            def rhs(t, y):
                return _ladder(y, gam, kap, n, sq, sq1)

    max_step = spec.step_ctrl.max_step
    if max_step is None:
        max_step = 0.05 / params.kappa

    t_eval = None if spec.t_eval is None else np.asarray(spec.t_eval, dtype=float)
    sol = solve_ivp(rhs, (initial.time, spec.t_end), y0, method="DOP853",
                    rtol=spec.step_ctrl.rel_tol, atol=spec.step_ctrl.abs_tol,
                    max_step=max_step, t_eval=t_eval)
    if sol.status == -1:
        raise StepSizeUnderflow(sol.message)
    if not sol.success:
        raise StepSizeUnderflow(f"integration failed: {sol.message}")

    if t_eval is None and spec.output_stride > 1:
        idx = np.arange(0, len(sol.t), spec.output_stride)
        if idx[-1] != len(sol.t) - 1:
            idx = np.append(idx, len(sol.t) - 1)
    else:
        idx = np.arange(len(sol.t))

    ts = sol.t[idx]
    ys = sol.y[:, idx]
    if coupled:
        occ = np.abs(ys[:n_levels]) ** 2 + np.abs(ys[n_levels:]) ** 2
    else:
        occ = np.abs(ys) ** 2
    w = occ.sum(axis=0)
    dw = -kap * (n[:, None] * occ).sum(axis=0)

    tail = occ[-2:, :].sum(axis=0)
    bad = tail > truncation.tail_tol * w
    if np.any(bad):
        i = int(np.argmax(bad))
        raise TruncationOverflow(
            f"tail mass {tail[i]:.3e} exceeds tail_tol*W = "
            f"{truncation.tail_tol * w[i]:.3e} at t = {ts[i]:.6g}; enlarge n_max")

    record = SurvivalRecord(t=ts, w=w, dw_dt=dw, source=RecordSource.NUMERIC_ODE,
                            params=params)
    record.validate()

    y_end = ys[:, -1]
    if coupled:
        final = NoJumpState(time=float(ts[-1]), amps_G=y_end[:n_levels],
                            amps_B=y_end[n_levels:])
    else:
        final = NoJumpState(time=float(ts[-1]), amps_G=y_end,
                            amps_B=np.zeros_like(y_end))
    return record, final


def jump_density(record: SurvivalRecord):
    """Next-jump probability density D(t) = -dW/dt on the record grid."""
    record.validate()
    return record.t.copy(), -record.dw_dt.copy()
