"""Linearized quadrature dynamics of three damped, coupled bosonic modes.

The physical system is an optical cavity mode ``a`` (energy decay rate
``kappa``) coupled to a mechanical mode ``b`` (rate ``gamma_m``) through a
two-mode-squeezing (parametric) interaction of strength ``g_m``, and to an
auxiliary atomic mode ``c`` (rate ``gamma_a``) through a beam-splitter
interaction of strength ``g_a``.  The cavity and atomic baths hold ``n``
thermal quanta, the mechanical bath ``n0``.

Conventions
-----------
* Quadratures ``X = (u + u^dag)/sqrt(2)`` and ``P = (u - u^dag)/(sqrt(2) i)``,
  so the vacuum variance is 1/2.
* State vector ordering ``(X_a, P_a, X_b, P_b, X_c, P_c)``; reduced models
  drop the eliminated mode but keep the same per-mode ordering.
* Dynamics are linear Langevin equations ``dx/dt = A x + xi(t)`` with white
  noise of symmetrized strength ``<xi_i xi_j>_sym = D_ij delta(t - t')``.
  ``A`` is the drift matrix and ``D`` the diffusion matrix.

Three time-independent builders are provided (resonant interaction frame,
counter-rotating terms dropped) plus one with the counter-rotating terms
retained as a drift modulation at twice the mechanical frequency:

* :func:`build_full_rwa`     -- all three modes, 6x6.
* :func:`build_reduced_a`    -- atomic mode adiabatically eliminated; the
  cavity acquires the extra damping ``C_a = g_a**2 / gamma_a``.
* :func:`build_reduced_b`    -- cavity adiabatically eliminated; the mirror
  acquires anti-damping ``G = g_m**2 / kappa`` and the atom extra damping
  ``G_a = g_a**2 / kappa``, with correlated noise feeding both.
* :func:`build_full_nonrwa`  -- as :func:`build_full_rwa` plus periodic
  cosine/sine drift amplitudes oscillating at ``2 * omega_m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import UnsupportedModelError, ValidationError

__all__ = [
    "SystemParams",
    "LinearModel",
    "StabilityResult",
    "build_full_rwa",
    "build_reduced_a",
    "build_reduced_b",
    "build_full_nonrwa",
    "stability",
]

#: margin used when classifying a drift matrix as strictly stable
STABILITY_MARGIN = 1e-8


@dataclass(frozen=True)
class SystemParams:
    """Physical rates and bath occupations, all in the same rate unit.

    Parameters
    ----------
    kappa : float
        Cavity amplitude damping rate (> 0).
    gamma_m : float
        Mechanical damping rate (> 0).
    gamma_a : float
        Atomic damping rate (> 0).
    g_m : float
        Parametric cavity--mirror coupling (>= 0).
    g_a : float
        Beam-splitter cavity--atom coupling (>= 0).
    n : float
        Thermal occupation of the cavity and atomic baths (>= 0).
    n0 : float
        Thermal occupation of the mechanical bath (>= 0).
    omega_m : float, optional
        Mechanical frequency; only required by :func:`build_full_nonrwa`,
        where it sets the modulation frequency ``2 * omega_m``.
    """

    kappa: float = 1.0
    gamma_m: float = 1.0
    gamma_a: float = 1.0
    g_m: float = 0.0
    g_a: float = 0.0
    n: float = 0.0
    n0: float = 0.0
    omega_m: float | None = None

    def __post_init__(self):
        def coerce(name, value):
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ValidationError(f"{name} must be a real number (got {value!r})") from None
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite (got {value!r})")
            object.__setattr__(self, name, value)
            return value

        for name in ("kappa", "gamma_m", "gamma_a"):
            if coerce(name, getattr(self, name)) <= 0.0:
                raise ValidationError(f"{name} must be a positive rate (got {getattr(self, name)!r})")
        for name in ("g_m", "g_a", "n", "n0"):
            if coerce(name, getattr(self, name)) < 0.0:
                raise ValidationError(f"{name} must be nonnegative (got {getattr(self, name)!r})")
        if self.omega_m is not None and coerce("omega_m", self.omega_m) <= 0.0:
            raise ValidationError(f"omega_m must be a positive frequency (got {self.omega_m!r})")

    # -- derived rates -----------------------------------------------------

    @property
    def C_a(self) -> float:
        """Atom-induced extra cavity damping ``g_a**2 / gamma_a``."""
        return self.g_a ** 2 / self.gamma_a

    @property
    def G(self) -> float:
        """Cavity-mediated mirror anti-damping ``g_m**2 / kappa``."""
        return self.g_m ** 2 / self.kappa

    @property
    def G_a(self) -> float:
        """Cavity-mediated atomic extra damping ``g_a**2 / kappa``."""
        return self.g_a ** 2 / self.kappa

    @property
    def gamma_G(self) -> float:
        """Effective mirror relaxation rate ``gamma_m - (G - G_a)``.

        Meaningful for the mirror--atom reduced model, whose closed forms
        additionally assume ``gamma_a == gamma_m``.
        """
        return self.gamma_m - (self.G - self.G_a)

    def rates(self) -> dict[str, float]:
        """All scalar fields as a plain dict (omega_m omitted when unset)."""
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        if out["omega_m"] is None:
            del out["omega_m"]
        return out

    def with_updates(self, **changes) -> "SystemParams":
        """Return a copy with the given fields replaced (re-validated)."""
        return replace(self, **changes)


@dataclass(frozen=True)
class LinearModel:
    """Drift/diffusion description of a linear Langevin system.

    ``periodic_drift`` holds the cosine and sine drift amplitudes for models
    with a residual modulation, so that the full drift at time ``t`` is
    ``drift + cos(w t) * periodic_drift[0] + sin(w t) * periodic_drift[1]``
    with ``w = modulation_frequency``.
    """

    mode_labels: tuple[str, ...]
    drift: np.ndarray
    diffusion: np.ndarray
    periodic_drift: tuple[np.ndarray, np.ndarray] | None = None
    modulation_frequency: float | None = None
    params: SystemParams | None = field(default=None, compare=False)

    def __post_init__(self):
        dim = 2 * len(self.mode_labels)
        if self.drift.shape != (dim, dim) or self.diffusion.shape != (dim, dim):
            raise ValidationError(
                f"drift/diffusion must be {dim}x{dim} for modes {self.mode_labels}"
            )
        for arr in (self.drift, self.diffusion):
            arr.setflags(write=False)
        if self.periodic_drift is not None:
            if self.modulation_frequency is None:
                raise ValidationError("periodic models require modulation_frequency")
            for arr in self.periodic_drift:
                if arr.shape != (dim, dim):
                    raise ValidationError("periodic drift amplitudes have wrong shape")
                arr.setflags(write=False)

    @property
    def n_modes(self) -> int:
        return len(self.mode_labels)

    @property
    def dim(self) -> int:
        return 2 * len(self.mode_labels)

    @property
    def is_periodic(self) -> bool:
        return self.periodic_drift is not None

    def drift_at(self, t: float) -> np.ndarray:
        """Instantaneous drift matrix at time ``t``."""
        if not self.is_periodic:
            return self.drift
        cos_amp, sin_amp = self.periodic_drift
        phase = self.modulation_frequency * t
        return self.drift + math.cos(phase) * cos_amp + math.sin(phase) * sin_amp


@dataclass(frozen=True)
class StabilityResult:
    """Outcome of a spectral stability check of the drift matrix."""

    stable: bool
    max_real_eigenvalue: float

    @property
    def margin(self) -> float:
        """Distance of the spectrum from the imaginary axis (> 0 if stable)."""
        return -self.max_real_eigenvalue


def _thermal_diffusion(rate: float, occupation: float) -> float:
    """Diagonal diffusion strength ``2 * rate * (occupation + 1/2)``."""
    return 2.0 * rate * (occupation + 0.5)


def build_full_rwa(params: SystemParams) -> LinearModel:
    """Three-mode model in the rotating-wave (resonant) approximation.

    Drift structure, per quadrature pair and with the state ordering
    ``(X_a, P_a, X_b, P_b, X_c, P_c)``::

        dX_a = -kappa X_a - g_m P_b + g_a P_c
        dP_a = -kappa P_a - g_m X_b - g_a X_c
        dX_b = -gamma_m X_b - g_m P_a
        dP_b = -gamma_m P_b - g_m X_a
        dX_c = -gamma_a X_c + g_a P_a
        dP_c = -gamma_a P_c - g_a X_a

    The parametric coupling enters symmetrically with a *minus* sign on both
    cross pairs (it squeezes joint quadratures), while the beam-splitter
    coupling is antisymmetric between the ``a`` and ``c`` rows.
    """
    p = params
    a = np.zeros((6, 6))
    a[0, 0] = a[1, 1] = -p.kappa
    a[2, 2] = a[3, 3] = -p.gamma_m
    a[4, 4] = a[5, 5] = -p.gamma_a
    # cavity--mirror parametric coupling
    a[0, 3] = a[1, 2] = -p.g_m
    a[2, 1] = a[3, 0] = -p.g_m
    # cavity--atom beam-splitter coupling
    a[0, 5] = +p.g_a
    a[1, 4] = -p.g_a
    a[4, 1] = +p.g_a
    a[5, 0] = -p.g_a
    d = np.diag(
        [
            _thermal_diffusion(p.kappa, p.n),
            _thermal_diffusion(p.kappa, p.n),
            _thermal_diffusion(p.gamma_m, p.n0),
            _thermal_diffusion(p.gamma_m, p.n0),
            _thermal_diffusion(p.gamma_a, p.n),
            _thermal_diffusion(p.gamma_a, p.n),
        ]
    )
    return LinearModel(("a", "b", "c"), a, d, params=params)


def build_reduced_a(params: SystemParams) -> LinearModel:
    """Cavity--mirror model with the fast atomic mode eliminated.

    Valid when ``gamma_a`` dominates every other rate; the atom then simply
    adds ``C_a = g_a**2 / gamma_a`` to the cavity damping and feeds the
    cavity with extra thermal noise at occupation ``n``.  Regime validity is
    not enforced here (the caller decides); the returned model is exact for
    the stated drift/diffusion.

    Stable iff ``g_m**2 < (kappa + C_a) * gamma_m``.
    """
    p = params
    kappa_eff = p.kappa + p.C_a
    a = np.zeros((4, 4))
    a[0, 0] = a[1, 1] = -kappa_eff
    a[2, 2] = a[3, 3] = -p.gamma_m
    a[0, 3] = a[1, 2] = -p.g_m
    a[2, 1] = a[3, 0] = -p.g_m
    d = np.diag(
        [
            _thermal_diffusion(kappa_eff, p.n),
            _thermal_diffusion(kappa_eff, p.n),
            _thermal_diffusion(p.gamma_m, p.n0),
            _thermal_diffusion(p.gamma_m, p.n0),
        ]
    )
    return LinearModel(("a", "b"), a, d, params=params)


def build_reduced_b(params: SystemParams) -> LinearModel:
    """Mirror--atom model with the fast cavity mode eliminated.

    Valid when ``kappa`` dominates every other rate.  The cavity mediates an
    anti-damping ``G = g_m**2 / kappa`` of the mirror, an extra damping
    ``G_a = g_a**2 / kappa`` of the atom, a coherent mirror--atom coupling of
    strength ``sqrt(G * G_a)``, and -- because both terms originate from the
    *same* eliminated cavity noise -- a correlated diffusion cross-block
    between the two modes::

        D[X_b, X_c] = -2 sqrt(G G_a) (n + 1/2)
        D[P_b, P_c] = +2 sqrt(G G_a) (n + 1/2)

    With matched dampings ``gamma_m == gamma_a`` the model is stable iff
    ``gamma_G = gamma_m - (G - G_a) > 0``.
    """
    p = params
    g_mix = math.sqrt(p.G * p.G_a)
    a = np.zeros((4, 4))
    a[0, 0] = a[1, 1] = -(p.gamma_m - p.G)
    a[2, 2] = a[3, 3] = -(p.gamma_a + p.G_a)
    a[0, 2] = +g_mix
    a[1, 3] = -g_mix
    a[2, 0] = -g_mix
    a[3, 1] = +g_mix
    d = np.zeros((4, 4))
    d[0, 0] = d[1, 1] = 2.0 * (p.gamma_m * (p.n0 + 0.5) + p.G * (p.n + 0.5))
    d[2, 2] = d[3, 3] = _thermal_diffusion(p.gamma_a + p.G_a, p.n)
    d[0, 2] = d[2, 0] = -2.0 * g_mix * (p.n + 0.5)
    d[1, 3] = d[3, 1] = +2.0 * g_mix * (p.n + 0.5)
    return LinearModel(("b", "c"), a, d, params=params)


def build_full_nonrwa(params: SystemParams) -> LinearModel:
    """Three-mode model keeping the counter-rotating parametric terms.

    On top of the rotating-wave drift the parametric interaction leaves a
    residual modulation at ``2 * omega_m``, confined to the cavity--mirror
    quadrature cross-blocks::

        dX_a += g_m [ cos(2 w t) P_b - sin(2 w t) X_b ]
        dP_a += -g_m [ cos(2 w t) X_b + sin(2 w t) P_b ]
        dX_b += g_m [ cos(2 w t) P_a + sin(2 w t) X_a ]
        dP_b += -g_m [ cos(2 w t) X_a - sin(2 w t) P_a ]

    The modulation time-averages to zero, so the rotating-wave model is the
    exact time average of this one.
    """
    if params.omega_m is None:
        raise ValidationError("omega_m is required to build the non-RWA model")
    base = build_full_rwa(params)
    g = params.g_m
    cos_amp = np.zeros((6, 6))
    cos_amp[0, 3] = +g
    cos_amp[1, 2] = -g
    cos_amp[2, 1] = +g
    cos_amp[3, 0] = -g
    sin_amp = np.zeros((6, 6))
    sin_amp[0, 2] = -g
    sin_amp[1, 3] = -g
    sin_amp[2, 0] = +g
    sin_amp[3, 1] = +g
    return LinearModel(
        base.mode_labels,
        base.drift,
        base.diffusion,
        periodic_drift=(cos_amp, sin_amp),
        modulation_frequency=2.0 * params.omega_m,
        params=params,
    )


def stability(model: LinearModel) -> StabilityResult:
    """Spectral stability of a time-independent drift matrix.

    Raises
    ------
    UnsupportedModelError
        If the model carries a periodic drift component (a Floquet analysis
        would be needed; not provided here).
    """
    if model.is_periodic:
        raise UnsupportedModelError(
            "stability() handles time-independent drift only; "
            "this model has a periodic component"
        )
    eigenvalues = np.linalg.eigvals(model.drift)
    max_real = float(np.max(eigenvalues.real))
    return StabilityResult(stable=max_real < -STABILITY_MARGIN, max_real_eigenvalue=max_real)
