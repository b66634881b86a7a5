"""Closed-form steady-state moments and steering parameters.

Two exactly solvable regimes of the three-mode system admit compact
stationary moments, used throughout as an independent cross-check of the
Lyapunov solver:

* **Cavity--mirror case** (atom eliminated, ``kappa == gamma_m == gamma``):
  the only nonzero moments are the two symmetric variances and the
  cross-moments ``<X_a P_b> = <P_a X_b>``.  Writing ``C = C_a`` and
  ``den = (gamma + C/2) * (gamma*(gamma + C) - g_m**2)``::

      Var X_a = (n  + 1/2) + (n + n0 + 1) * gamma * g_m**2 / (2 * den)
      Var X_b = (n0 + 1/2) + (n + n0 + 1) * (gamma + C) * g_m**2 / (2 * den)
      <X_a P_b> = -(n + n0 + 1) * gamma * (gamma + C) * g_m / (2 * den)

* **Mirror--atom case** (cavity eliminated, ``gamma_m == gamma_a == gamma``):
  with ``gamma_G = gamma - (G - G_a)`` and ``den = gamma_G*(gamma+gamma_G)``::

      Var X_b = (n0 + 1/2) + (n + n0 + 1) * 2 G (gamma_G + G/2) / den
      Var X_c = (n  + 1/2) + (n + n0 + 1) * G * G_a / den
      <X_b X_c> = -<P_b P_c>
                = -(n + n0 + 1) * sqrt(G G_a) * (gamma_G + G) / den

The corresponding conditional-inference steering parameters have closed
forms when the two bath occupations coincide (``n == n0``); they are exposed
by :func:`steering_case1` / :func:`steering_case2`.  ``E < 1/2`` certifies
steering of the first-named mode by the second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StabilityError, UnsupportedParametersError
from .lyapunov import CovarianceMatrix
from .model import SystemParams

__all__ = [
    "Case1Moments",
    "Case2Moments",
    "Case1Steering",
    "Case2Steering",
    "CorrelationThresholds",
    "case1_moments",
    "case2_moments",
    "case1_covariance",
    "case2_covariance",
    "steering_case1",
    "steering_case2",
    "thresholds_case1",
]

#: relative tolerance for "two rates are equal" preconditions
RATE_MATCH_RTOL = 1e-9


@dataclass(frozen=True)
class Case1Moments:
    """Stationary cavity--mirror moments; both quadratures of a mode share
    the same variance and ``<X_a P_b> == <P_a X_b>``."""

    var_Xa: float
    var_Xb: float
    corr_XaPb: float


@dataclass(frozen=True)
class Case2Moments:
    """Stationary mirror--atom moments; ``<X_b X_c> == -<P_b P_c>``."""

    var_Xb: float
    var_Xc: float
    corr_XbXc: float


@dataclass(frozen=True)
class Case1Steering:
    """Inference products for the cavity--mirror pair (steered|steering)."""

    E_ab: float
    E_ba: float


@dataclass(frozen=True)
class Case2Steering:
    """Inference products for the mirror--atom pair (steered|steering)."""

    E_cb: float
    E_bc: float


@dataclass(frozen=True)
class CorrelationThresholds:
    """|<X_a P_b>| against the minimum values certifying steering of the
    cavity by the mirror, respectively entanglement of the pair."""

    corr: float
    steer_threshold: float
    ent_threshold: float


def _matched_rate(first: float, second: float, what: str) -> float:
    if abs(first - second) > RATE_MATCH_RTOL * max(abs(first), abs(second)):
        raise UnsupportedParametersError(
            f"closed forms require {what} (got {first:g} vs {second:g})"
        )
    return 0.5 * (first + second)


def _require_equal_occupations(params: SystemParams) -> float:
    scale = max(params.n, params.n0, 1.0)
    if abs(params.n - params.n0) > RATE_MATCH_RTOL * scale:
        raise UnsupportedParametersError(
            f"closed-form steering requires n == n0 (got n={params.n:g}, n0={params.n0:g})"
        )
    return params.n0


def case1_moments(params: SystemParams) -> Case1Moments:
    """Closed-form cavity--mirror moments (requires ``kappa == gamma_m``).

    Raises a :class:`StabilityError` at or beyond the stability boundary
    ``g_m**2 = gamma * (gamma + C_a)``.
    """
    gamma = _matched_rate(params.kappa, params.gamma_m, "kappa == gamma_m")
    c = params.C_a
    g = params.g_m
    gap = gamma * (gamma + c) - g ** 2
    if gap <= RATE_MATCH_RTOL * gamma * (gamma + c):
        raise StabilityError(
            f"cavity--mirror model unstable: g_m**2 = {g**2:g} >= "
            f"gamma*(gamma + C_a) = {gamma * (gamma + c):g}"
        )
    den = (gamma + 0.5 * c) * gap
    drive = params.n + params.n0 + 1.0
    return Case1Moments(
        var_Xa=(params.n + 0.5) + 0.5 * drive * gamma * g ** 2 / den,
        var_Xb=(params.n0 + 0.5) + 0.5 * drive * (gamma + c) * g ** 2 / den,
        corr_XaPb=-0.5 * drive * gamma * (gamma + c) * g / den,
    )


def case2_moments(params: SystemParams) -> Case2Moments:
    """Closed-form mirror--atom moments (requires ``gamma_m == gamma_a``).

    Raises a :class:`StabilityError` unless ``gamma_G > 0``.
    """
    gamma = _matched_rate(params.gamma_m, params.gamma_a, "gamma_m == gamma_a")
    big_g, big_ga = params.G, params.G_a
    gamma_g = gamma - (big_g - big_ga)
    if gamma_g <= RATE_MATCH_RTOL * gamma:
        raise StabilityError(
            f"mirror--atom model unstable: gamma_G = {gamma_g:g} <= 0"
        )
    den = gamma_g * (gamma + gamma_g)
    drive = params.n + params.n0 + 1.0
    return Case2Moments(
        var_Xb=(params.n0 + 0.5) + drive * 2.0 * big_g * (gamma_g + 0.5 * big_g) / den,
        var_Xc=(params.n + 0.5) + drive * big_g * big_ga / den,
        corr_XbXc=-drive * math.sqrt(big_g * big_ga) * (gamma_g + big_g) / den,
    )


def case1_covariance(params: SystemParams) -> CovarianceMatrix:
    """Cavity--mirror moments assembled into a full 4x4 covariance."""
    m = case1_moments(params)
    v = np.zeros((4, 4))
    v[0, 0] = v[1, 1] = m.var_Xa
    v[2, 2] = v[3, 3] = m.var_Xb
    v[0, 3] = v[3, 0] = m.corr_XaPb
    v[1, 2] = v[2, 1] = m.corr_XaPb
    return CovarianceMatrix(("a", "b"), v)


def case2_covariance(params: SystemParams) -> CovarianceMatrix:
    """Mirror--atom moments assembled into a full 4x4 covariance."""
    m = case2_moments(params)
    v = np.zeros((4, 4))
    v[0, 0] = v[1, 1] = m.var_Xb
    v[2, 2] = v[3, 3] = m.var_Xc
    v[0, 2] = v[2, 0] = m.corr_XbXc
    v[1, 3] = v[3, 1] = -m.corr_XbXc
    return CovarianceMatrix(("b", "c"), v)


def steering_case1(params: SystemParams) -> Case1Steering:
    """Closed-form cavity--mirror steering for matched occupations.

    With ``gamma = kappa = gamma_m``, ``C = C_a`` and ``n == n0``::

        E_a|b = (n0 + 1/2) * (1 - gamma C g**2 / ((gamma + C/2) * d_minus'))
        E_b|a = (n0 + 1/2) * (1 + C (gamma + C) g**2 / ((gamma + C/2) * d_plus'))

    where ``d_minus' = 2 gamma (gamma + C/2)(gamma + C) + C g**2`` and
    ``d_plus' = 2 gamma (gamma + C/2)(gamma + C) - C g**2``.  At ``C_a = 0``
    both reduce to ``n0 + 1/2`` exactly: without the auxiliary mode neither
    direction can steer.  ``E_b|a`` never drops below ``n0 + 1/2``.
    """
    occupation = _require_equal_occupations(params)
    gamma = _matched_rate(params.kappa, params.gamma_m, "kappa == gamma_m")
    c = params.C_a
    g2 = params.g_m ** 2
    if gamma * (gamma + c) - g2 <= RATE_MATCH_RTOL * gamma * (gamma + c):
        raise StabilityError(
            f"cavity--mirror model unstable: g_m**2 = {g2:g} >= "
            f"gamma*(gamma + C_a) = {gamma * (gamma + c):g}"
        )
    half_sum = gamma + 0.5 * c
    core = 2.0 * gamma * half_sum * (gamma + c)
    den_ba = core - c * g2
    if den_ba <= 0.0:
        # cannot occur in the stable regime, kept as an explicit guard
        raise StabilityError("steering denominator nonpositive (unstable parameters)")
    prefactor = occupation + 0.5
    e_ab = prefactor * (1.0 - gamma * c * g2 / (half_sum * (core + c * g2)))
    e_ba = prefactor * (1.0 + c * (gamma + c) * g2 / (half_sum * den_ba))
    return Case1Steering(E_ab=e_ab, E_ba=e_ba)


def steering_case2(params: SystemParams) -> Case2Steering:
    """Closed-form mirror--atom steering for matched occupations.

    With ``gamma = gamma_m = gamma_a`` and ``n == n0``::

        E_c|b = (n0 + 1/2) * (1 - 2 G G_a (G_a - G) /
                ((gamma + gamma_G) * (gamma_G (gamma + gamma_G)
                                      + 4 G (gamma_G + G/2))))
        E_b|c = (n0 + 1/2) * (1 + 2 G (4 gamma gamma_G - G (G_a - G)) /
                ((gamma + gamma_G) * (gamma_G (gamma + gamma_G) + 2 G G_a)))

    The atom can only be steered (``E_c|b < 1/2`` at ``n0 = 0``) when
    ``G_a > G``; the mirror is additionally steered -- two-way steering --
    exactly when ``4 gamma gamma_G < G (G_a - G)``.
    """
    occupation = _require_equal_occupations(params)
    gamma = _matched_rate(params.gamma_m, params.gamma_a, "gamma_m == gamma_a")
    big_g, big_ga = params.G, params.G_a
    gamma_g = gamma - (big_g - big_ga)
    if gamma_g <= RATE_MATCH_RTOL * gamma:
        raise StabilityError(f"mirror--atom model unstable: gamma_G = {gamma_g:g} <= 0")
    total = gamma + gamma_g
    den = gamma_g * total
    prefactor = occupation + 0.5
    e_cb = prefactor * (
        1.0 - 2.0 * big_g * big_ga * (big_ga - big_g) / (total * (den + 4.0 * big_g * (gamma_g + 0.5 * big_g)))
    )
    e_bc = prefactor * (
        1.0 + 2.0 * big_g * (4.0 * gamma * gamma_g - big_g * (big_ga - big_g)) / (total * (den + 2.0 * big_g * big_ga))
    )
    return Case2Steering(E_cb=e_cb, E_bc=e_bc)


def thresholds_case1(params: SystemParams) -> CorrelationThresholds:
    """Correlation strength versus steering/entanglement thresholds.

    From the cavity--mirror moments, steering of the cavity by the mirror
    requires ``|<X_a P_b>| > sqrt(Var P_b * (Var X_a - 1/2))`` and
    entanglement requires the weaker
    ``|<X_a P_b>| > sqrt((Var P_b - 1/2) * (Var X_a - 1/2))``; the
    entanglement threshold therefore never exceeds the steering one.  At
    ``C_a = 0`` (and ``n == n0``) the correlation sits exactly *on* the
    steering threshold for every stable coupling.
    """
    m = case1_moments(params)
    excess_a = max(m.var_Xa - 0.5, 0.0)
    excess_b = max(m.var_Xb - 0.5, 0.0)
    return CorrelationThresholds(
        corr=abs(m.corr_XaPb),
        steer_threshold=math.sqrt(m.var_Xb * excess_a),
        ent_threshold=math.sqrt(excess_b * excess_a),
    )
