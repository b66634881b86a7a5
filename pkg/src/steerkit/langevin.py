"""Stochastic-trajectory estimation of stationary covariances.

This is the validation path for the Lyapunov solver: the same linear model
is emulated as a classical stochastic differential equation
``dx = A(t) x dt + B dW`` with ``B B^T = D``, whose stationary symmetrized
moments coincide with the quantum ones.  Two schemes are used:

* time-independent drift: **exact one-step Gaussian propagation**.  Over a
  step ``dt`` the update ``x -> Phi x + w`` with ``Phi = expm(A dt)`` and
  ``w ~ N(0, Q)``, ``Q = int_0^dt expm(A s) D expm(A^T s) ds``, reproduces
  the continuous-time law with *no* discretization bias.  ``Phi`` and ``Q``
  are obtained from one block matrix exponential (Van Loan construction),
  independently of the Lyapunov solver being validated.
* periodic drift: Euler--Maruyama, which is why the step-size warning below
  matters there.

Each trajectory consumes an independent, deterministically spawned child
stream of the seed, and reductions run in fixed trajectory order, so results
are bit-for-bit reproducible for a given configuration.  Standard errors are
estimated from the scatter of per-trajectory time averages, which makes them
insensitive to correlation between consecutive samples within a trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import StabilityError, ValidationError
from .lyapunov import CovarianceMatrix
from .model import LinearModel, stability

__all__ = [
    "SimulationConfig",
    "EnsembleEstimate",
    "noise_matrix",
    "simulate",
    "zscores",
]

#: steps per noise-generation block (memory/speed trade-off only)
_BLOCK_STEPS = 1024


@dataclass(frozen=True)
class SimulationConfig:
    """Integration window and ensemble size for :func:`simulate`.

    ``burn_in`` is discarded; moments are accumulated over the following
    ``sample_duration``, both in the same time unit as the model rates.
    """

    dt: float = 1e-3
    burn_in: float = 10.0
    sample_duration: float = 100.0
    n_trajectories: int = 200
    seed: int = 12345

    def __post_init__(self):
        if not (isinstance(self.dt, (int, float)) and math.isfinite(self.dt)) or self.dt <= 0:
            raise ValidationError(f"dt must be a positive time step (got {self.dt!r})")
        if self.burn_in < 0:
            raise ValidationError(f"burn_in must be nonnegative (got {self.burn_in!r})")
        if self.sample_duration <= 0:
            raise ValidationError(f"sample_duration must be positive (got {self.sample_duration!r})")
        if int(self.n_trajectories) != self.n_trajectories or self.n_trajectories < 1:
            raise ValidationError(f"n_trajectories must be a positive integer (got {self.n_trajectories!r})")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValidationError(f"seed must be a nonnegative integer (got {self.seed!r})")
        if int(self.round_steps(self.sample_duration)) < 1:
            raise ValidationError("sample_duration must cover at least one step")

    def round_steps(self, duration: float) -> int:
        return int(round(duration / self.dt))


@dataclass(frozen=True)
class EnsembleEstimate:
    """Monte-Carlo covariance estimate with entrywise standard errors.

    ``standard_errors`` is NaN when fewer than two trajectories were run
    (no scatter to estimate from).  ``warnings`` collects configuration
    diagnostics (step size, burn-in) raised during the run.
    """

    covariance: CovarianceMatrix
    standard_errors: np.ndarray
    effective_samples: int
    n_trajectories: int
    scheme: str
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        self.standard_errors.setflags(write=False)


def _psd_sqrt(matrix: np.ndarray, what: str) -> np.ndarray:
    """Symmetric PSD square root via an eigendecomposition."""
    sym = 0.5 * (matrix + matrix.T)
    eigenvalues, vectors = np.linalg.eigh(sym)
    scale = max(float(np.max(np.abs(eigenvalues))), np.finfo(float).tiny)
    if float(np.min(eigenvalues)) < -1e-12 * scale:
        raise ValidationError(
            f"{what} is not positive semidefinite (min eigenvalue {np.min(eigenvalues):.3e})"
        )
    return (vectors * np.sqrt(np.clip(eigenvalues, 0.0, None))) @ vectors.T


def noise_matrix(model: LinearModel) -> np.ndarray:
    """Noise amplitude ``B`` with ``B B^T`` equal to the model diffusion."""
    b = _psd_sqrt(model.diffusion, "diffusion matrix")
    d_norm = np.linalg.norm(model.diffusion, "fro")
    if np.linalg.norm(b @ b.T - model.diffusion, "fro") > 1e-12 * max(d_norm, 1.0):
        raise ValidationError("diffusion factorization failed the reconstruction check")
    return b


def _exact_step(drift: np.ndarray, diffusion: np.ndarray, dt: float):
    """One-step propagator and process-noise covariance (Van Loan blocks)."""
    n = drift.shape[0]
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = drift
    block[:n, n:] = diffusion
    block[n:, n:] = -drift.T
    exp_block = scipy.linalg.expm(block * dt)
    phi = exp_block[:n, :n]
    q = exp_block[:n, n:] @ phi.T
    return phi, 0.5 * (q + q.T)


def simulate(model: LinearModel, config: SimulationConfig) -> EnsembleEstimate:
    """Estimate the stationary covariance from an ensemble of trajectories.

    Trajectories start at ``x = 0``; the time-averaged drift must be
    strictly stable.  Time-independent models use the exact one-step scheme,
    periodic models Euler--Maruyama with the drift evaluated at the start of
    each step.
    """
    averaged = LinearModel(model.mode_labels, model.drift, model.diffusion)
    result = stability(averaged)
    if not result.stable:
        raise StabilityError(
            "time-averaged drift is not strictly stable "
            f"(max real eigenvalue {result.max_real_eigenvalue:.3e})",
            max_real_eigenvalue=result.max_real_eigenvalue,
        )

    warnings: list[str] = []
    drift_scale = float(np.linalg.norm(model.drift, 2))
    if model.is_periodic:
        drift_scale += float(
            np.linalg.norm(model.periodic_drift[0], 2) + np.linalg.norm(model.periodic_drift[1], 2)
        )
    if config.dt * drift_scale > 0.1:
        warnings.append(
            f"dt = {config.dt:g} is large versus the drift norm "
            f"({drift_scale:g}); expect discretization bias"
        )
    relaxation = 1.0 / result.margin
    if config.burn_in < 5.0 * relaxation:
        warnings.append(
            f"burn_in = {config.burn_in:g} is below five relaxation times "
            f"({5.0 * relaxation:g}); the transient may bias the estimate"
        )

    dim = model.dim
    n_burn = config.round_steps(config.burn_in)
    n_sample = config.round_steps(config.sample_duration)
    n_traj = int(config.n_trajectories)

    if model.is_periodic:
        scheme = "euler-maruyama"
        step_noise = noise_matrix(model) * math.sqrt(config.dt)
    else:
        scheme = "exact-propagation"
        phi, step_cov = _exact_step(model.drift, model.diffusion, config.dt)
        phi_t = phi.T
        step_noise = _psd_sqrt(step_cov, "one-step process noise")

    generators = [np.random.default_rng(s) for s in np.random.SeedSequence(config.seed).spawn(n_traj)]
    noise_t = step_noise.T
    x = np.zeros((n_traj, dim))
    sums = np.zeros((n_traj, dim, dim))
    total = n_burn + n_sample
    done = 0
    while done < total:
        m = min(_BLOCK_STEPS, total - done)
        buffer = np.empty((n_traj, m, dim))
        for k, gen in enumerate(generators):
            buffer[k] = gen.standard_normal((m, dim))
        buffer = buffer @ noise_t
        if model.is_periodic:
            for step in range(m):
                drift_now = model.drift_at((done + step) * config.dt)
                x = x + config.dt * (x @ drift_now.T) + buffer[:, step, :]
                buffer[:, step, :] = x
        else:
            for step in range(m):
                x = x @ phi_t + buffer[:, step, :]
                buffer[:, step, :] = x
        first_sampled = max(0, n_burn - done)
        if first_sampled < m:
            states = buffer[:, first_sampled:, :]
            sums += np.einsum("tki,tkj->tij", states, states)
        done += m

    per_trajectory = sums / n_sample
    covariance = per_trajectory.mean(axis=0)
    covariance = 0.5 * (covariance + covariance.T)
    if n_traj >= 2:
        standard_errors = per_trajectory.std(axis=0, ddof=1) / math.sqrt(n_traj)
    else:
        warnings.append("single trajectory: standard errors are undefined")
        standard_errors = np.full((dim, dim), np.nan)
    return EnsembleEstimate(
        covariance=CovarianceMatrix(model.mode_labels, covariance),
        standard_errors=standard_errors,
        effective_samples=n_traj * n_sample,
        n_trajectories=n_traj,
        scheme=scheme,
        warnings=tuple(warnings),
    )


def zscores(estimate: EnsembleEstimate, reference: CovarianceMatrix | np.ndarray) -> np.ndarray:
    """Entrywise ``(estimate - reference) / SE`` discrepancy scores.

    Entries with zero standard error score 0 when they agree exactly and
    +/-inf otherwise; NaN standard errors propagate.
    """
    ref = reference.values if isinstance(reference, CovarianceMatrix) else np.asarray(reference, dtype=float)
    if ref.shape != estimate.covariance.values.shape:
        raise ValidationError(
            f"reference shape {ref.shape} does not match estimate dimension "
            f"{estimate.covariance.values.shape}"
        )
    diff = estimate.covariance.values - ref
    with np.errstate(divide="ignore", invalid="ignore"):
        z = diff / estimate.standard_errors
    z[(estimate.standard_errors == 0.0) & (diff == 0.0)] = 0.0
    return z
