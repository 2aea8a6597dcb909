"""Scenario parameters, drive sweep profiles, and derived spectral quantities.

Conventions
-----------
Natural units with hbar = 1.  Every frequency is an angular frequency in
radians per time unit; the time unit itself is arbitrary because the dynamics
depends only on products and ratios of frequencies.  The detuning is

    delta(t) = omega_a - omega(t)

so that delta > 0 whenever the drive is red of the level splitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import OutOfDomainError, UnsupportedProfileError


@dataclass(frozen=True)
class ConstantSweep:
    """Drive at a fixed angular frequency ``omega``."""

    omega: float


@dataclass(frozen=True)
class LinearChirp:
    """Drive frequency swept linearly: omega(t) = omega_at_t0 + rate*(t - t0).

    ``rate`` must be positive (upward sweep through the crossing at ``t0``).
    """

    rate: float
    t0: float
    omega_at_t0: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"chirp rate must be > 0, got {self.rate}")


@dataclass(frozen=True)
class TabulatedSweep:
    """Drive frequency given by linear interpolation of (t, omega) samples.

    Samples must be strictly increasing in t; at least two are required.
    The phase integral uses the trapezoid rule, which is exact for the
    interpolant, so its error is controlled purely by sample density.
    """

    times: np.ndarray
    omegas: np.ndarray

    def __init__(self, samples):
        samples = [(float(t), float(w)) for t, w in samples]
        if len(samples) < 2:
            raise ValueError("tabulated sweep needs at least 2 samples")
        times = np.array([s[0] for s in samples])
        omegas = np.array([s[1] for s in samples])
        if not np.all(np.diff(times) > 0):
            raise ValueError("tabulated sweep times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "omegas", omegas)


SweepProfile = Union[ConstantSweep, LinearChirp, TabulatedSweep]


def sweep_frequency(sweep: SweepProfile, t: float) -> float:
    """Drive frequency omega(t).

    Constant and chirp profiles are defined on the whole real line; a
    tabulated profile raises OutOfDomainError outside its sample span.
    """
    if isinstance(sweep, ConstantSweep):
        return sweep.omega
    if isinstance(sweep, LinearChirp):
        return sweep.omega_at_t0 + sweep.rate * (t - sweep.t0)
    if isinstance(sweep, TabulatedSweep):
        if t < sweep.times[0] or t > sweep.times[-1]:
            raise OutOfDomainError(
                f"t={t} outside tabulated span [{sweep.times[0]}, {sweep.times[-1]}]"
            )
        return float(np.interp(t, sweep.times, sweep.omegas))
    raise TypeError(f"unknown sweep profile {type(sweep).__name__}")


def phase_integral(sweep: SweepProfile, t: float) -> float:
    """Accumulated drive phase: integral of omega(tau) from 0 to t.

    Exact antiderivatives for constant and chirped profiles; trapezoid rule
    on the interpolant for tabulated ones (whose span must contain both 0
    and t).
    """
    if isinstance(sweep, ConstantSweep):
        return sweep.omega * t
    if isinstance(sweep, LinearChirp):
        # antiderivative of omega0 + rate*(tau - t0)
        return sweep.omega_at_t0 * t + 0.5 * sweep.rate * t * t - sweep.rate * sweep.t0 * t
    if isinstance(sweep, TabulatedSweep):
        lo, hi = sweep.times[0], sweep.times[-1]
        if not (lo <= 0.0 <= hi) or t < lo or t > hi:
            raise OutOfDomainError(
                f"phase integral needs 0 and t={t} inside the tabulated span [{lo}, {hi}]"
            )
        return _tabulated_integral(sweep, 0.0, t)
    raise TypeError(f"unknown sweep profile {type(sweep).__name__}")


def _tabulated_integral(sweep: TabulatedSweep, a: float, b: float) -> float:
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    ts, ws = sweep.times, sweep.omegas
    inside = (ts > a) & (ts < b)
    knots = np.concatenate(([a], ts[inside], [b]))
    vals = np.interp(knots, ts, ws)
    return sign * float(np.trapezoid(vals, knots))


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs of a two-mode coupling scenario.

    omega_a      level splitting of the untrapped mode over the trapped one
    omega_r      coupling (Rabi) strength of the drive
    sweep        drive frequency profile omega(t)
    n_c_initial  mean trapped atom number; real-valued, it only enters as
                 the squared magnitude of a coherent amplitude
    """

    omega_a: float
    omega_r: float
    sweep: SweepProfile
    n_c_initial: float

    def __post_init__(self):
        if self.omega_a < 0:
            raise ValueError(f"omega_a must be >= 0, got {self.omega_a}")
        if self.omega_r < 0:
            raise ValueError(f"omega_r must be >= 0, got {self.omega_r}")
        if self.n_c_initial < 0:
            raise ValueError(f"n_c_initial must be >= 0, got {self.n_c_initial}")


def detuning(params: ModelParams, t: float) -> float:
    """Detuning omega_a - omega(t) of the drive from the splitting."""
    return params.omega_a - sweep_frequency(params.sweep, t)


@dataclass(frozen=True)
class SpectralData:
    """Derived spectral quantities of a constant-frequency drive.

    theta is the mixing angle with tan(theta) = 2*omega_r/delta, taken in
    [0, pi] so sin(theta) >= 0; big_omega is the generalized Rabi frequency
    sqrt(delta^2/4 + omega_r^2); omega_plus/minus are the two normal-mode
    frequencies delta/2 +- big_omega.
    """

    delta: float
    theta: float
    big_omega: float
    omega_plus: float
    omega_minus: float


def spectral_data(params: ModelParams) -> SpectralData:
    """Spectral quantities for a constant sweep; other profiles are rejected."""
    if not isinstance(params.sweep, ConstantSweep):
        raise UnsupportedProfileError(
            "spectral data has closed forms only for a constant sweep"
        )
    delta = params.omega_a - params.sweep.omega
    theta = math.atan2(2.0 * params.omega_r, delta)
    big_omega = math.hypot(0.5 * delta, params.omega_r)
    return SpectralData(
        delta=delta,
        theta=theta,
        big_omega=big_omega,
        omega_plus=0.5 * delta + big_omega,
        omega_minus=0.5 * delta - big_omega,
    )


@dataclass(frozen=True)
class ProductCoherentState:
    """Pair of coherent amplitudes for the trapped (1) and untrapped (2) modes."""

    alpha1: complex
    alpha2: complex

    @property
    def n1(self) -> float:
        return abs(self.alpha1) ** 2

    @property
    def n2(self) -> float:
        return abs(self.alpha2) ** 2

    @property
    def total(self) -> float:
        return self.n1 + self.n2


@dataclass(frozen=True)
class ThermoLimitSpec:
    """Thermodynamic-limit parameterization of the drive coupling.

    ``g`` is the volume-free coupling constant and ``n_c`` the condensate
    number density; the combination g*sqrt(n_c) stays finite as the atom
    number and volume grow together.  When ``volume`` is given, the finite
    system it implies has n_atoms = n_c*volume and omega_r = g/sqrt(volume).
    """

    g: float
    n_c: float
    volume: float | None = None

    def __post_init__(self):
        if self.g < 0:
            raise ValueError(f"g must be >= 0, got {self.g}")
        if self.n_c < 0:
            raise ValueError(f"n_c must be >= 0, got {self.n_c}")
        if self.volume is not None and not self.volume > 0:
            raise ValueError(f"volume must be > 0, got {self.volume}")

    @property
    def coupling(self) -> float:
        """The invariant drive strength g*sqrt(n_c) (= omega_r*sqrt(n_atoms))."""
        return self.g * math.sqrt(self.n_c)

    @property
    def n_atoms(self) -> float:
        if self.volume is None:
            raise ValueError("n_atoms requires a volume")
        return self.n_c * self.volume

    @property
    def omega_r(self) -> float:
        if self.volume is None:
            raise ValueError("omega_r requires a volume")
        return self.g / math.sqrt(self.volume)
