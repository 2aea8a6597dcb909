"""Closed-form solutions for a constant-frequency drive.

All operations here assume a ConstantSweep.  The two coherent amplitudes
(a1, a2) of an initially trapped condensate evolve under the forward
propagator W(t) returned by :func:`amplitude_propagator`:

    (a1(t), a2(t)) = W(t) @ (sqrt(N), 0)

with

    a1(t) = sqrt(N) e^{-i delta t/2} (cos(Omega t) + i cos(theta) sin(Omega t))
    a2(t) = -i sqrt(N) e^{-i delta t/2} sin(theta) sin(Omega t) e^{-i omega t}

The :func:`transfer_matrix` coefficients (m11, m12; m21, m22) use the
adjoint convention in which the same amplitudes are recovered from the
first row at reversed time,

    (a1(t), a2(t)) = sqrt(N) * (m11(-t), m12(-t)),

i.e. M(t) = W(t)^dagger.  Entry magnitudes are identical in both
conventions; the untrapped-mode amplitudes carry the drive phase factor
(e^{-i omega t} in W, its conjugate in M).  The Fock-space oracle pins
these phases: see tests for the cross checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, UnsupportedProfileError
from .params import (
    ConstantSweep,
    ModelParams,
    ProductCoherentState,
    ThermoLimitSpec,
    spectral_data,
)


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 unitary coefficient matrix (m11, m12; m21, m22).

    Row 1 carries the trapped-mode coefficients, row 2 the untrapped-mode
    ones.  M(0) is the identity and M(t) is unitary for every t.
    """

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def unitarity_defect(self) -> float:
        """Max-norm of M M^dagger - I."""
        m = self.as_array()
        return float(np.max(np.abs(m @ m.conj().T - np.eye(2))))

    @staticmethod
    def from_array(m: np.ndarray) -> "TransferMatrix":
        return TransferMatrix(complex(m[0, 0]), complex(m[0, 1]),
                              complex(m[1, 0]), complex(m[1, 1]))


def _require_constant(params: ModelParams) -> float:
    if not isinstance(params.sweep, ConstantSweep):
        raise UnsupportedProfileError(
            "closed forms hold only for a constant sweep; integrate instead"
        )
    return params.sweep.omega


def _rotating_propagator(delta: float, omega_r: float, t: float) -> np.ndarray:
    """exp(-i K t) for K = [[0, omega_r], [omega_r, delta]].

    Written with sin(Omega t)/Omega so the uncoupled limit Omega -> 0 is
    exact rather than a 0/0 branch.
    """
    big_omega = math.hypot(0.5 * delta, omega_r)
    c = math.cos(big_omega * t)
    f = t * np.sinc(big_omega * t / math.pi)  # sin(Omega t)/Omega
    ph = cmath.exp(-0.5j * delta * t)
    return np.array(
        [
            [ph * (c + 0.5j * delta * f), ph * (-1j * omega_r * f)],
            [ph * (-1j * omega_r * f), ph * (c - 0.5j * delta * f)],
        ]
    )


def amplitude_propagator(params: ModelParams, t: float) -> np.ndarray:
    """Forward map W(t) for coherent amplitudes, a(t) = W(t) @ a(0).

    Lab frame: the untrapped row additionally winds with the drive phase
    e^{-i omega t}.
    """
    omega = _require_constant(params)
    w = _rotating_propagator(params.omega_a - omega, params.omega_r, t)
    w[1, :] *= cmath.exp(-1j * omega * t)
    return w


def transfer_matrix(params: ModelParams, t: float) -> TransferMatrix:
    """Coefficient matrix in the adjoint convention, M(t) = W(t)^dagger.

    The first row at reversed time gives the product-state amplitudes:
    evolve_product_state(params, t) == sqrt(N) * (m11(-t), m12(-t)).
    Degenerate input omega_r = delta = 0 yields the identity up to the
    untrapped-mode drive phase.
    """
    return TransferMatrix.from_array(amplitude_propagator(params, t).conj().T)


def evolve_product_state(params: ModelParams, t: float) -> ProductCoherentState:
    """Coherent amplitudes at time t for the initial state (sqrt(N), 0).

    The total population |a1|^2 + |a2|^2 equals n_c_initial identically.
    """
    w = amplitude_propagator(params, t)
    root_n = math.sqrt(params.n_c_initial)
    return ProductCoherentState(alpha1=complex(w[0, 0]) * root_n,
                                alpha2=complex(w[1, 0]) * root_n)


def untrapped_population_exact(params: ModelParams, t: float) -> float:
    """Untrapped population N sin^2(theta) sin^2(Omega t) of the exact model."""
    _require_constant(params)
    sd = spectral_data(params)
    return params.n_c_initial * math.sin(sd.theta) ** 2 * math.sin(sd.big_omega * t) ** 2


def fho_amplitude(params: ModelParams, t: float) -> complex:
    """Coherent amplitude of the driven-oscillator (Bogoliubov) approximation.

    Equals -(omega_r sqrt(N)/delta) (e^{i delta t} - 1) e^{-i omega_a t},
    written in a form whose delta -> 0 limit -i omega_r sqrt(N) t e^{-i omega_a t}
    is reached continuously.  It is the weak-coupling limit of the exact
    untrapped amplitude, phases included.
    """
    omega = _require_constant(params)
    delta = params.omega_a - omega
    drive = params.omega_r * math.sqrt(params.n_c_initial)
    # -(drive/delta)(e^{i delta t} - 1) == -i drive t sinc(delta t/2) e^{i delta t/2}
    half = 0.5 * delta * t
    return (
        -1j * drive * t * np.sinc(half / math.pi)
        * cmath.exp(1j * half) * cmath.exp(-1j * params.omega_a * t)
    )


def untrapped_population_bogoliubov(params: ModelParams, t: float) -> float:
    """|fho_amplitude|^2 = 2 (omega_r/delta)^2 N (1 - cos(delta t)).

    At delta = 0 this is the parabola N omega_r^2 t^2.
    """
    omega = _require_constant(params)
    delta = params.omega_a - omega
    drive2 = params.omega_r ** 2 * params.n_c_initial
    half = 0.5 * delta * t
    return drive2 * t * t * float(np.sinc(half / math.pi)) ** 2


def lz_asymptotic_amplitude(spec: ThermoLimitSpec, rate: float) -> complex:
    """Stationary-phase estimate i g sqrt(pi n_c / (4 rate)) of the swept drive.

    This is the textbook stationary-phase value.  Its numerical counterpart
    (dynamics.lz_transfer) shares the g^2 n_c / rate scaling but a larger
    prefactor; the scenario runner reports both without reconciling them.
    """
    if not rate > 0:
        raise PreconditionError(f"sweep rate must be > 0, got {rate}")
    return 1j * spec.g * math.sqrt(math.pi * spec.n_c / (4.0 * rate))


@dataclass(frozen=True)
class FieldSample:
    """Field expectation value at one space-time point."""

    x: float
    t: float
    value: float
    k_modes: tuple


def field_expectation(params: ModelParams, density: float, k_modes, x: float,
                      t: float) -> float:
    """Mean output field: sum over k of sqrt(2 n_c/omega) sin(theta) sin(Omega t)
    sin(k x - delta t/2 - omega t).

    ``density`` is the condensate number density entering the prefactor.
    Requires a constant sweep with omega > 0 and at least one wave number.
    """
    omega = _require_constant(params)
    if not omega > 0:
        raise PreconditionError(f"field expectation needs omega > 0, got {omega}")
    k_modes = list(k_modes)
    if not k_modes:
        raise PreconditionError("at least one wave number is required")
    sd = spectral_data(params)
    envelope = math.sqrt(2.0 * density / omega) * math.sin(sd.theta) * math.sin(sd.big_omega * t)
    phase = 0.5 * sd.delta * t + omega * t
    return envelope * sum(math.sin(k * x - phase) for k in k_modes)


def field_profile_samples(params: ModelParams, density: float, k_modes,
                          xs, t: float) -> list:
    """Field expectation sampled along ``xs`` at one time, as FieldSample rows."""
    k = tuple(float(v) for v in k_modes)
    return [FieldSample(x=float(x), t=float(t),
                        value=field_expectation(params, density, k, float(x), t),
                        k_modes=k)
            for x in xs]
