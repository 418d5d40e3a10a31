"""Physical parameters, truncated amplitude states, and survival records.

Everything here is an immutable value object: instances can be shared
freely between threads or processes without synchronization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NonMonotoneRecord

#: Relative slack allowed when checking that survival never increases.
MONOTONE_SLACK = 1e-12


class QubitLevel(enum.Enum):
    """Qubit manifold label: ground (G) or bright/excited (B)."""

    G = "G"
    B = "B"


class RecordSource(enum.Enum):
    """Provenance of a survival record."""

    NUMERIC_ODE = "numeric_ode"
    CLOSED_FORM = "closed_form"
    ASYMPTOTIC_SHORT = "asymptotic_short"
    ASYMPTOTIC_LONG = "asymptotic_long"
    REDUCED_MODEL = "reduced_model"


@dataclass(frozen=True)
class SystemParams:
    """Physical rates of the driven, damped, dispersively coupled system.

    Attributes
    ----------
    kappa : float
        Resonator energy decay rate (1/time), > 0.
    nbar : float
        Dimensionless drive strength; steady-state occupation of the
        classically treated oscillator. >= 0.
    chi : float
        Dispersive shift magnitude (rad/time); 0 means the drive sits on
        the bare resonance.
    omega_rabi : complex
        Rabi coupling between the qubit levels (rad/time); complex so the
        conjugate coupling is well defined. 0 decouples the qubit.
    """

    kappa: float
    nbar: float
    chi: float = 0.0
    omega_rabi: complex = 0.0

    def __post_init__(self) -> None:
        for name in ("kappa", "nbar", "chi"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidParameter(f"{name} must be a finite real number, got {v!r}")
        if not (math.isfinite(self.omega_rabi.real) and math.isfinite(self.omega_rabi.imag)):
            raise InvalidParameter(f"omega_rabi must be finite, got {self.omega_rabi!r}")
        if self.kappa <= 0:
            raise InvalidParameter(f"kappa must be > 0, got {self.kappa}")
        if self.nbar < 0:
            raise InvalidParameter(f"nbar must be >= 0, got {self.nbar}")
        if self.chi < 0:
            raise InvalidParameter(f"chi must be >= 0, got {self.chi}")
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "nbar", float(self.nbar))
        object.__setattr__(self, "chi", float(self.chi))
        object.__setattr__(self, "omega_rabi", complex(self.omega_rabi))

    @property
    def gamma_drive(self) -> float:
        """Drive amplitude kappa*sqrt(nbar)/2; recomputed, never stored."""
        return self.kappa * math.sqrt(self.nbar) / 2.0


def make_params(kappa: float, nbar: float, chi: float = 0.0,
                omega_rabi: complex = 0.0) -> SystemParams:
    """Validate and build a :class:`SystemParams`."""
    return SystemParams(kappa=kappa, nbar=nbar, chi=chi, omega_rabi=omega_rabi)


@dataclass(frozen=True)
class FockTruncation:
    """Highest retained Fock index and the relative tail tolerance.

    A simulation is trusted only while the population of the top two
    retained levels stays below ``tail_tol`` relative to the norm.
    """

    n_max: int
    tail_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise InvalidParameter(f"n_max must be >= 1, got {self.n_max}")
        if not 0.0 < self.tail_tol < 1.0:
            raise InvalidParameter(f"tail_tol must be in (0, 1), got {self.tail_tol}")


def default_truncation(nbar: float, tail_tol: float = 1e-10) -> FockTruncation:
    """Truncation sized for a coherent no-jump state of occupation <= nbar.

    ceil(nbar + 7*sqrt(nbar + 1)) + 6 keeps the Poissonian weight of the
    top two retained levels below ~1e-12 of the norm even once the
    coherent amplitude has fully saturated at |alpha|^2 = nbar, leaving
    two orders of margin under the default tail_tol.
    """
    return FockTruncation(n_max=math.ceil(nbar + 7.0 * math.sqrt(nbar + 1.0)) + 6,
                          tail_tol=tail_tol)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class NoJumpState:
    """Complex amplitudes over (qubit level x Fock level) at one instant.

    ``amps_G[n]`` and ``amps_B[n]`` are the amplitudes for the resonator
    in Fock level n with the qubit in G or B, conditioned on no jump
    having been detected since the last reset.
    """

    time: float
    amps_G: np.ndarray
    amps_B: np.ndarray

    def __post_init__(self) -> None:
        g = np.array(self.amps_G, dtype=complex)
        b = np.array(self.amps_B, dtype=complex)
        if g.ndim != 1 or b.ndim != 1 or g.shape != b.shape:
            raise InvalidParameter("amps_G and amps_B must be 1-d arrays of equal length")
        object.__setattr__(self, "amps_G", _readonly(g))
        object.__setattr__(self, "amps_B", _readonly(b))
        object.__setattr__(self, "time", float(self.time))

    @property
    def n_max(self) -> int:
        return len(self.amps_G) - 1

    def norm(self) -> float:
        """Squared norm over both manifolds (the survival probability)."""
        return float(np.sum(np.abs(self.amps_G) ** 2) + np.sum(np.abs(self.amps_B) ** 2))


def initial_state(qubit_level: QubitLevel | str, truncation: FockTruncation) -> NoJumpState:
    """Reset state: unit amplitude in (qubit_level, n=0), everything else 0."""
    level = QubitLevel(qubit_level) if not isinstance(qubit_level, QubitLevel) else qubit_level
    n = truncation.n_max + 1
    g = np.zeros(n, dtype=complex)
    b = np.zeros(n, dtype=complex)
    if level is QubitLevel.G:
        g[0] = 1.0
    else:
        b[0] = 1.0
    return NoJumpState(time=0.0, amps_G=g, amps_B=b)


@dataclass(frozen=True)
class SurvivalRecord:
    """Survival probability W and its analytic derivative on a time grid.

    For evolutions that start from a unit-norm state, W(t[0]) == 1; the
    grid is strictly increasing, W never increases (up to
    :data:`MONOTONE_SLACK` relative slack), and dW/dt <= 0.
    """

    t: np.ndarray
    w: np.ndarray
    dw_dt: np.ndarray
    source: RecordSource
    params: SystemParams

    def __post_init__(self) -> None:
        t = np.array(self.t, dtype=float)
        w = np.array(self.w, dtype=float)
        d = np.array(self.dw_dt, dtype=float)
        if not (t.ndim == w.ndim == d.ndim == 1 and len(t) == len(w) == len(d) >= 2):
            raise InvalidParameter("record needs 1-d t, w, dw_dt arrays of equal length >= 2")
        object.__setattr__(self, "t", _readonly(t))
        object.__setattr__(self, "w", _readonly(w))
        object.__setattr__(self, "dw_dt", _readonly(d))

    @property
    def grid(self) -> np.ndarray:
        """(n, 3) array of (t, W, dW/dt) rows."""
        return np.column_stack((self.t, self.w, self.dw_dt))

    def validate(self) -> None:
        """Raise :class:`NonMonotoneRecord` unless the grid is well formed."""
        if np.any(np.diff(self.t) <= 0):
            raise NonMonotoneRecord("time grid is not strictly increasing")
        if np.any(self.w < 0) or np.any(self.w > 1 + 1e-9):
            raise NonMonotoneRecord("survival values leave [0, 1]")
        if np.any(self.w[1:] > self.w[:-1] * (1.0 + MONOTONE_SLACK)):
            raise NonMonotoneRecord("survival increases along the grid")
        if np.any(self.dw_dt > 0):
            raise NonMonotoneRecord("dW/dt must be <= 0 everywhere")
