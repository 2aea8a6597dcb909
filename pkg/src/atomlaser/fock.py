"""Brute-force ground truth on a truncated two-mode Fock space.

The coupling Hamiltonian conserves the total atom number, so the basis is
organized in sectors of fixed N = n1 + n2 and propagation never mixes
sectors.  For a constant-frequency drive each sector is diagonalized once
(exact up to floating point); time-dependent sweeps use midpoint-exponential
steps.  States are stored in the lab frame: the rotating-frame propagation
is followed by restoring the accumulated drive phase on the untrapped mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import (
    CutoffTooSmallError,
    NumericalFailureError,
    PreconditionError,
    UndefinedStatisticError,
)
from .params import (
    ConstantSweep,
    ModelParams,
    ProductCoherentState,
    detuning,
    phase_integral,
)


class FockBasis:
    """Two-mode number basis truncated at n1 + n2 <= n_total_max.

    States are ordered sector-major: all of N = 0, then N = 1, ...; inside a
    sector the index runs over n2 = 0..N.  Sector N therefore holds N + 1
    states and the total dimension is (M+1)(M+2)/2.
    """

    def __init__(self, n_total_max: int):
        if n_total_max < 0:
            raise ValueError("n_total_max must be >= 0")
        self.n_total_max = int(n_total_max)
        m = self.n_total_max
        self.dim = (m + 1) * (m + 2) // 2
        self.n2 = np.concatenate([np.arange(n + 1) for n in range(m + 1)])
        totals = np.concatenate([np.full(n + 1, n) for n in range(m + 1)])
        self.n1 = totals - self.n2
        offsets = np.cumsum([0] + [n + 1 for n in range(m + 1)])
        self.sector_slices = [slice(offsets[n], offsets[n + 1]) for n in range(m + 1)]

    def index(self, n1: int, n2: int) -> int:
        n = n1 + n2
        if n1 < 0 or n2 < 0 or n > self.n_total_max:
            raise ValueError(f"state ({n1}, {n2}) outside basis")
        return n * (n + 1) // 2 + n2


def suggested_cutoff(mean_total: float) -> int:
    """Total-number cutoff holding a Poissonian tail below ~1e-12."""
    return int(math.ceil(mean_total + 10.0 * math.sqrt(mean_total) + 10.0))


@dataclass
class TwoModeFockVector:
    """Complex amplitudes over a FockBasis."""

    basis: FockBasis
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def mean_occupation(self, mode: int) -> float:
        occ = self.basis.n1 if mode == 1 else self.basis.n2
        return float(np.sum(np.abs(self.amplitudes) ** 2 * occ))

    def mean_total(self) -> float:
        return self.mean_occupation(1) + self.mean_occupation(2)

    def as_grid(self) -> np.ndarray:
        """Amplitudes on an (M+1, M+1) grid indexed by (n1, n2), zero outside."""
        m = self.basis.n_total_max
        grid = np.zeros((m + 1, m + 1), dtype=complex)
        grid[self.basis.n1, self.basis.n2] = self.amplitudes
        return grid


@dataclass(frozen=True)
class OracleConfig:
    """Oracle controls: truncation budget, step for time-dependent sweeps,
    and per-mode quartic (collisional) interaction strengths."""

    epsilon_trunc: float = 1e-12
    dt: float | None = None
    kerr_kappa1: float = 0.0
    kerr_kappa2: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.epsilon_trunc < 1.0:
            raise ValueError("epsilon_trunc must lie in (0, 1)")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.kerr_kappa1 < 0 or self.kerr_kappa2 < 0:
            raise ValueError("interaction strengths must be >= 0")


def coherent_product_vector(alpha1: complex, alpha2: complex, basis: FockBasis,
                            epsilon_trunc: float = 1e-12) -> TwoModeFockVector:
    """Truncated expansion of the coherent product |alpha1> x |alpha2>.

    Raises CutoffTooSmallError when the truncated weight drops below
    1 - epsilon_trunc, reporting the suggested cutoff.
    """
    mean = abs(alpha1) ** 2 + abs(alpha2) ** 2
    m = basis.n_total_max
    c1 = _coherent_column(alpha1, m)
    c2 = _coherent_column(alpha2, m)
    amps = c1[basis.n1] * c2[basis.n2]
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if norm2 < 1.0 - epsilon_trunc:
        raise CutoffTooSmallError(
            f"cutoff {m} keeps squared weight {norm2:.3e} < 1 - {epsilon_trunc:g} "
            f"for mean total {mean:.3g}; need n_total_max >= {suggested_cutoff(mean)}",
            required_cutoff=suggested_cutoff(mean),
        )
    return TwoModeFockVector(basis=basis, amplitudes=amps)


def _coherent_column(alpha: complex, m: int) -> np.ndarray:
    # c_n = e^{-|a|^2/2} a^n / sqrt(n!), by the stable recurrence c_{n+1} = c_n a/sqrt(n+1)
    col = np.empty(m + 1, dtype=complex)
    col[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(m):
        col[n + 1] = col[n] * alpha / math.sqrt(n + 1)
    return col


def fock_state_vector(basis: FockBasis, n1: int, n2: int) -> TwoModeFockVector:
    """Unit vector on the number state |n1, n2>."""
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index(n1, n2)] = 1.0
    return TwoModeFockVector(basis=basis, amplitudes=amps)


def _sector_hamiltonian(n: int, delta: float, omega_r: float, kappa1: float,
                        kappa2: float):
    """Tridiagonal sector matrix in the n2 = 0..n basis (rotating frame)."""
    n2 = np.arange(n + 1, dtype=float)
    n1 = n - n2
    diag = delta * n2 + kappa1 * n1 * (n1 - 1.0) + kappa2 * n2 * (n2 - 1.0)
    off = omega_r * np.sqrt((n2[:-1] + 1.0) * (n - n2[:-1]))
    return diag, off


def _apply_sector_step(amps, basis, delta, omega_r, kappa1, kappa2, dt):
    out = np.empty_like(amps)
    for n, sl in enumerate(basis.sector_slices):
        if n == 0:
            out[sl] = amps[sl]
            continue
        diag, off = _sector_hamiltonian(n, delta, omega_r, kappa1, kappa2)
        w, v = eigh_tridiagonal(diag, off)
        out[sl] = v @ (np.exp(-1j * w * dt) * (v.T @ amps[sl]))
    return out


def propagate(state: TwoModeFockVector, params: ModelParams, t: float,
              cfg: OracleConfig | None = None) -> TwoModeFockVector:
    """Evolve ``state`` for time t under the coupling (plus optional quartic terms).

    Constant sweep: one exact per-sector diagonalization.  Other sweeps:
    midpoint-exponential steps of size cfg.dt (default picked so the cubic
    per-step error bound (|H| dt)^3 stays at 1e-12).  The result is in the
    lab frame; norm and total number are conserved.
    """
    cfg = cfg or OracleConfig()
    basis = state.basis
    norm_in = state.norm()

    if isinstance(params.sweep, ConstantSweep):
        delta = detuning(params, 0.0)
        amps = _apply_sector_step(state.amplitudes, basis, delta, params.omega_r,
                                  cfg.kerr_kappa1, cfg.kerr_kappa2, t)
    else:
        amps = state.amplitudes.copy()
        dt = cfg.dt if cfg.dt is not None else _auto_dt(state, params, cfg, t)
        nsteps = max(1, int(math.ceil(abs(t) / dt)))
        h = t / nsteps
        for k in range(nsteps):
            mid = (k + 0.5) * h
            amps = _apply_sector_step(amps, basis, detuning(params, mid),
                                      params.omega_r, cfg.kerr_kappa1,
                                      cfg.kerr_kappa2, h)

    # restore the drive phase accumulated by the untrapped mode
    phi = phase_integral(params.sweep, t)
    amps = amps * np.exp(-1j * phi * basis.n2)

    out = TwoModeFockVector(basis=basis, amplitudes=amps)
    if abs(out.norm() - norm_in) > 1e-8:
        raise NumericalFailureError(
            f"norm drifted by {abs(out.norm() - norm_in):.3e} during propagation",
            time=t,
        )
    return out


def _auto_dt(state, params, cfg, t):
    m = state.basis.n_total_max
    # crude spectral-norm bound over the run, constant-coupling rotating frame
    probes = np.linspace(0.0, t, 17) if t != 0 else np.array([0.0])
    dmax = max(abs(detuning(params, float(tp))) for tp in probes)
    h_norm = dmax * m + 2.0 * params.omega_r * (0.5 * m + 1.0) \
        + (cfg.kerr_kappa1 + cfg.kerr_kappa2) * m * (m - 1.0)
    if h_norm == 0.0:
        return abs(t) if t != 0 else 1.0
    return 1e-4 / h_norm  # (|H| dt)^3 <= 1e-12


def fidelity_to_product(state: TwoModeFockVector, target: ProductCoherentState,
                        epsilon_trunc: float = 1e-12) -> float:
    """Squared overlap |<alpha1, alpha2 | state>|^2."""
    ref = coherent_product_vector(target.alpha1, target.alpha2, state.basis,
                                  epsilon_trunc)
    return float(abs(np.vdot(ref.amplitudes, state.amplitudes)) ** 2)


def reduced_purity(state: TwoModeFockVector, mode: int) -> float:
    """Trace of the squared reduced density operator of one mode.

    Equals 1 for any product state and drops below 1 under entanglement.
    """
    grid = state.as_grid()
    if mode == 2:
        grid = grid.T
    rho = grid @ grid.conj().T
    return float(np.sum(np.abs(rho) ** 2))


def mandel_q(state: TwoModeFockVector, mode: int) -> float:
    """(<n^2> - <n>^2 - <n>)/<n>: zero for Poissonian (coherent) statistics,
    -1 for a number state."""
    occ = state.basis.n1 if mode == 1 else state.basis.n2
    p = np.abs(state.amplitudes) ** 2
    n_mean = float(np.sum(p * occ))
    if n_mean == 0.0:
        raise UndefinedStatisticError("Mandel Q undefined at zero occupation")
    n2_mean = float(np.sum(p * occ.astype(float) ** 2))
    return (n2_mean - n_mean ** 2 - n_mean) / n_mean


def quadrature_variance(state: TwoModeFockVector, mode: int) -> float:
    """Variance of (b + b^dagger)/sqrt(2) in the given mode (1/2 for any
    coherent state)."""
    grid = state.as_grid()
    if mode == 2:
        grid = grid.T
    m = grid.shape[0] - 1
    root = np.sqrt(np.arange(1, m + 1))
    # <b>: couples n to n+1 along the mode axis
    b_mean = complex(np.sum(grid[:-1, :].conj() * (root[:, None] * grid[1:, :])))
    root2 = np.sqrt(np.arange(1, m + 1)[:-1] * np.arange(2, m + 1))
    b2_mean = complex(np.sum(grid[:-2, :].conj() * (root2[:, None] * grid[2:, :])))
    p = np.abs(grid) ** 2
    n_mean = float(np.sum(p * np.arange(m + 1)[:, None]))
    return b2_mean.real + n_mean + 0.5 - 2.0 * (b_mean.real ** 2)


def mean_amplitude(state: TwoModeFockVector, mode: int) -> complex:
    """Expectation value of the annihilation operator of one mode."""
    grid = state.as_grid()
    if mode == 2:
        grid = grid.T
    m = grid.shape[0] - 1
    root = np.sqrt(np.arange(1, m + 1))
    return complex(np.sum(grid[:-1, :].conj() * (root[:, None] * grid[1:, :])))


def best_product_fidelity(state: TwoModeFockVector,
                          epsilon_trunc: float = 1e-9) -> tuple:
    """Largest overlap with any coherent product state, found by a seeded
    pattern search.

    Seeds at the mean amplitudes (<b1>, <b2>) and refines the four real
    coordinates by coordinate descent with step halving; the optimum near a
    quasi-coherent state is unimodal, so no global search is needed.
    Returns (fidelity, ProductCoherentState).
    """
    seed = np.array([
        mean_amplitude(state, 1).real, mean_amplitude(state, 1).imag,
        mean_amplitude(state, 2).real, mean_amplitude(state, 2).imag,
    ])

    def fid(x):
        target = ProductCoherentState(alpha1=complex(x[0], x[1]),
                                      alpha2=complex(x[2], x[3]))
        try:
            return fidelity_to_product(state, target, epsilon_trunc)
        except CutoffTooSmallError:
            return -1.0

    x = seed.copy()
    best = fid(x)
    step = max(0.5, 0.25 * math.sqrt(max(state.mean_total(), 1.0)))
    while step > 1e-7:
        improved = False
        for i in range(4):
            for s in (step, -step):
                trial = x.copy()
                trial[i] += s
                f = fid(trial)
                while f > best:
                    x, best = trial, f
                    improved = True
                    trial = trial.copy()
                    trial[i] += s
                    f = fid(trial)
        if not improved:
            step *= 0.5
    return best, ProductCoherentState(alpha1=complex(x[0], x[1]),
                                      alpha2=complex(x[2], x[3]))


def kerr_breakdown_scan(alpha: complex, params: ModelParams, kappa_grid, t: float,
                        cfg: OracleConfig | None = None,
                        basis: FockBasis | None = None) -> list:
    """Best-product fidelity of the evolved coherent input across interaction
    strengths.

    Each grid point propagates |alpha> x |0> with equal per-mode quartic
    strength kappa and reports (kappa, best_product_fidelity).  Fidelity is
    1 at kappa = 0 and degrades as the nonlinearity breaks the product
    structure.
    """
    cfg = cfg or OracleConfig()
    kappa_grid = list(kappa_grid)
    if any(k < 0 for k in kappa_grid):
        raise PreconditionError("interaction strengths must be >= 0")
    if basis is None:
        basis = FockBasis(suggested_cutoff(abs(alpha) ** 2))
    state0 = coherent_product_vector(alpha, 0.0, basis, cfg.epsilon_trunc)
    out = []
    for kappa in kappa_grid:
        cfg_k = replace(cfg, kerr_kappa1=kappa, kerr_kappa2=kappa)
        evolved = propagate(state0, params, t, cfg_k)
        fidelity, _ = best_product_fidelity(evolved)
        out.append((float(kappa), fidelity))
    return out
