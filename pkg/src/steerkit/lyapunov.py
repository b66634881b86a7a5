"""Steady-state covariance of stable linear Langevin systems.

For ``dx/dt = A x + xi`` with white noise of symmetrized strength ``D`` the
stationary covariance ``V = <x x^T>_sym`` solves the continuous Lyapunov
equation ``A V + V A^T + D = 0``.  The solve itself is delegated to
:func:`scipy.linalg.solve_continuous_lyapunov` (Bartels--Stewart); this
module adds the stability gate, a residual verification, and the symplectic
spectrum utilities used for physicality checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError, StabilityError, UnsupportedModelError, ValidationError
from .model import LinearModel, stability

__all__ = [
    "CovarianceMatrix",
    "steady_state",
    "residual",
    "symplectic_form",
    "symplectic_eigenvalues",
]

#: relative residual tolerance accepted from the Lyapunov solver
RESIDUAL_RTOL = 1e-10

#: slack below the vacuum bound 1/2 tolerated in physicality checks
PHYSICALITY_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for (X1, P1, X2, P2, ...) ordering."""
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return scipy.linalg.block_diag(*([block] * n_modes))


def symplectic_eigenvalues(values: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a symmetric covariance matrix.

    Computed as the moduli of the eigenvalues of ``i Omega V``, which come in
    +/- pairs; each pair is averaged and one representative per mode is
    returned, sorted ascending.  A physical state has every symplectic
    eigenvalue >= 1/2 in the vacuum-variance-1/2 convention.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] % 2:
        raise ValidationError(f"covariance must be square with even dimension, got {values.shape}")
    n = values.shape[0] // 2
    spectrum = np.linalg.eigvals(1j * symplectic_form(n) @ values)
    moduli = np.sort(np.abs(spectrum))
    return 0.5 * (moduli[0::2] + moduli[1::2])


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric quadrature covariance with named modes.

    ``values[2k, 2k]`` is the X variance of mode ``labels[k]`` and
    ``values[2k+1, 2k+1]`` its P variance.  Instances are read-only.
    """

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        dim = 2 * len(self.labels)
        values = np.asarray(self.values, dtype=float)
        if values.shape != (dim, dim):
            raise ValidationError(
                f"covariance for modes {self.labels} must be {dim}x{dim}, got {values.shape}"
            )
        object.__setattr__(self, "values", values)
        values.setflags(write=False)

    # -- indexing helpers --------------------------------------------------

    def index(self, mode: str, quadrature: str = "X") -> int:
        if mode not in self.labels:
            raise ValidationError(f"unknown mode {mode!r}; have {self.labels}")
        if quadrature not in ("X", "P"):
            raise ValidationError(f"quadrature must be 'X' or 'P', got {quadrature!r}")
        return 2 * self.labels.index(mode) + (0 if quadrature == "X" else 1)

    def variance(self, mode: str, quadrature: str = "X") -> float:
        k = self.index(mode, quadrature)
        return float(self.values[k, k])

    def moment(self, mode_a: str, quad_a: str, mode_b: str, quad_b: str) -> float:
        """Symmetrized second moment between two named quadratures."""
        return float(self.values[self.index(mode_a, quad_a), self.index(mode_b, quad_b)])

    def block(self, mode_a: str, mode_b: str) -> np.ndarray:
        """2x2 covariance block between two modes (copy)."""
        i = self.index(mode_a)
        j = self.index(mode_b)
        return self.values[i : i + 2, j : j + 2].copy()

    def pair(self, mode_a: str, mode_b: str) -> "CovarianceMatrix":
        """4x4 restriction to an ordered mode pair."""
        idx = [self.index(mode_a), self.index(mode_a, "P"), self.index(mode_b), self.index(mode_b, "P")]
        return CovarianceMatrix((mode_a, mode_b), self.values[np.ix_(idx, idx)])

    # -- physicality ---------------------------------------------------------

    def symplectic_eigenvalues(self) -> np.ndarray:
        return symplectic_eigenvalues(self.values)

    def is_physical(self, tol: float = PHYSICALITY_TOL) -> bool:
        """Whether every symplectic eigenvalue respects the vacuum bound."""
        return bool(np.min(self.symplectic_eigenvalues()) >= 0.5 - tol)


def residual(model: LinearModel, values: np.ndarray | CovarianceMatrix) -> float:
    """Frobenius norm of ``A V + V A^T + D`` for a candidate covariance."""
    if isinstance(values, CovarianceMatrix):
        values = values.values
    values = np.asarray(values, dtype=float)
    if values.shape != (model.dim, model.dim):
        raise ValidationError(
            f"covariance shape {values.shape} does not match model dimension {model.dim}"
        )
    a, d = model.drift, model.diffusion
    return float(np.linalg.norm(a @ values + values @ a.T + d, "fro"))


def steady_state(model: LinearModel) -> CovarianceMatrix:
    """Stationary covariance of a stable, time-independent model.

    Raises
    ------
    UnsupportedModelError
        For periodically modulated drift (no time-independent steady state).
    StabilityError
        If the drift spectrum is unstable or within 1e-8 of marginal.
    NumericalError
        If the solver's residual fails the relative tolerance check.
    """
    if model.is_periodic:
        raise UnsupportedModelError(
            "steady_state() requires a time-independent drift; "
            "average or simulate periodic models instead"
        )
    result = stability(model)
    if not result.stable:
        raise StabilityError(
            "drift matrix is not strictly stable "
            f"(max real eigenvalue {result.max_real_eigenvalue:.3e})",
            max_real_eigenvalue=result.max_real_eigenvalue,
        )
    a, d = model.drift, model.diffusion
    solution = scipy.linalg.solve_continuous_lyapunov(a, -d)
    solution = 0.5 * (solution + solution.T)
    scale = np.linalg.norm(a, "fro") * np.linalg.norm(solution, "fro") + np.linalg.norm(d, "fro")
    if residual(model, solution) > RESIDUAL_RTOL * scale:
        raise NumericalError(
            "Lyapunov solution failed the residual check; "
            "the model is likely too ill-conditioned"
        )
    return CovarianceMatrix(model.mode_labels, solution)
