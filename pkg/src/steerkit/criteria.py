"""Two-mode steering and entanglement criteria on quadrature covariances.

All criteria operate on a :class:`~steerkit.lyapunov.CovarianceMatrix`
restricted to an ordered mode pair ``(i, j)`` and use only second moments:

* :func:`reid_steering` -- conditional-inference product
  ``E_i|j = dXinf * dPinf`` built from the optimal linear estimates of
  ``X_i`` and ``P_i`` given one measured quadrature of mode ``j`` each.
  ``E_i|j < 1/2`` certifies steering of mode ``i`` by measurements on ``j``.
* :func:`duan_simon` -- the optimized joint-quadrature variance sum
  ``Delta_h``; ``Delta_h < 1`` certifies entanglement.
* :func:`log_negativity` -- the smallest symplectic eigenvalue ``lam`` of
  the partially transposed state via the two-mode block invariants;
  entangled iff ``lam < 1/2``, with ``E_N = max(0, -ln(2 lam))``.

Steering is strictly stronger than entanglement: any state with some
``E < 1/2`` also has ``lam < 1/2``, but not conversely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, NumericalError
from .lyapunov import CovarianceMatrix

__all__ = [
    "SteeringReport",
    "EntanglementReport",
    "reid_steering",
    "duan_simon",
    "log_negativity",
    "classify_steering",
]

#: |correlation| below which a pair is treated as uncorrelated
ZERO_CORRELATION_TOL = 1e-14

#: slack around lam = 1/2 treated as "not entangled"
ENTANGLEMENT_TOL = 1e-12


@dataclass(frozen=True)
class SteeringReport:
    """Both steering directions for an ordered mode pair.

    ``E_ij`` is the inference product for steering of ``mode_i`` by
    measurements on ``mode_j`` and vice versa for ``E_ji``.  ``gains_ij``
    holds the optimal estimation gains ``(h, h')`` for the X and P
    inferences of that direction, ``pairing_ij`` the measured quadratures of
    the steering mode (e.g. ``("P", "X")``: infer ``X_i`` from ``P_j`` and
    ``P_i`` from ``X_j``).
    """

    mode_i: str
    mode_j: str
    E_ij: float
    E_ji: float
    gains_ij: tuple[float, float]
    gains_ji: tuple[float, float]
    pairing_ij: tuple[str, str]
    pairing_ji: tuple[str, str]
    classification: str

    @property
    def steers_ij(self) -> bool:
        """Whether measurements on ``mode_j`` steer ``mode_i``."""
        return self.E_ij < 0.5

    @property
    def steers_ji(self) -> bool:
        return self.E_ji < 0.5


@dataclass(frozen=True)
class EntanglementReport:
    """Joint-variance and partial-transpose entanglement measures of a pair.

    ``duan_simon`` is reported at the optimal gain ``h_opt`` for the
    combination type named by ``pairing`` (``"XP"``: ``X_i + h P_j`` with
    ``P_i + h X_j``; ``"XX"``: ``X_i + h X_j`` with ``P_i - h P_j``).
    """

    mode_i: str
    mode_j: str
    duan_simon: float
    h_opt: float
    pairing: str
    lam: float
    log_negativity: float

    @property
    def entangled(self) -> bool:
        """Partial-transpose verdict (``lam`` below 1/2 beyond tolerance)."""
        return self.lam < 0.5 - ENTANGLEMENT_TOL

    @property
    def entangled_duan(self) -> bool:
        return self.duan_simon < 1.0 - ENTANGLEMENT_TOL


def classify_steering(e_ij: float, e_ji: float) -> str:
    """Directional classification of a pair of inference products.

    Values strictly below 1/2 count as steering; boundary equality does not.
    Returns one of ``"none"``, ``"one_way_i_by_j"``, ``"one_way_j_by_i"``,
    ``"two_way"``.
    """
    steer_ij = e_ij < 0.5
    steer_ji = e_ji < 0.5
    if steer_ij and steer_ji:
        return "two_way"
    if steer_ij:
        return "one_way_i_by_j"
    if steer_ji:
        return "one_way_j_by_i"
    return "none"


def _inference_product(cov: CovarianceMatrix, steered: str, steering: str):
    """One Reid direction: inference product, optimal gains and pairing.

    ``X`` of the steered mode is inferred from whichever quadrature of the
    steering mode correlates more strongly with it (ties resolved towards
    ``X``); ``P`` is inferred from the complementary quadrature.  For each
    inference the optimal linear gain ``h = -<A B>/Var(B)`` leaves the
    conditional variance ``Var(A) * (1 - corrcoef(A, B)**2)``.
    """
    var_x = cov.variance(steered, "X")
    var_p = cov.variance(steered, "P")
    var_jx = cov.variance(steering, "X")
    var_jp = cov.variance(steering, "P")
    for label, value in ((steered, var_x), (steered, var_p), (steering, var_jx), (steering, var_jp)):
        if value <= 0.0:
            raise DegenerateInputError(f"mode {label!r} has a nonpositive quadrature variance")

    corr_xx = cov.moment(steered, "X", steering, "X") / math.sqrt(var_x * var_jx)
    corr_xp = cov.moment(steered, "X", steering, "P") / math.sqrt(var_x * var_jp)
    first = "X" if abs(corr_xx) >= abs(corr_xp) else "P"
    second = "P" if first == "X" else "X"

    def conditional(quad_i: str, var_i: float, quad_j: str) -> tuple[float, float]:
        var_j = cov.variance(steering, quad_j)
        cross = cov.moment(steered, quad_i, steering, quad_j)
        coeff_sq = min(cross * cross / (var_i * var_j), 1.0)
        return var_i * (1.0 - coeff_sq), -cross / var_j

    reduced_x, gain_x = conditional("X", var_x, first)
    reduced_p, gain_p = conditional("P", var_p, second)
    product = math.sqrt(reduced_x) * math.sqrt(reduced_p)
    return product, (gain_x, gain_p), (first, second)


def reid_steering(cov: CovarianceMatrix, mode_i: str, mode_j: str) -> SteeringReport:
    """Reid inference products for both directions of a mode pair."""
    e_ij, gains_ij, pairing_ij = _inference_product(cov, mode_i, mode_j)
    e_ji, gains_ji, pairing_ji = _inference_product(cov, mode_j, mode_i)
    return SteeringReport(
        mode_i=mode_i,
        mode_j=mode_j,
        E_ij=e_ij,
        E_ji=e_ji,
        gains_ij=gains_ij,
        gains_ji=gains_ji,
        pairing_ij=pairing_ij,
        pairing_ji=pairing_ji,
        classification=classify_steering(e_ij, e_ji),
    )


def _duan_simon_terms(cov: CovarianceMatrix, mode_i: str, mode_j: str):
    """Pick the combination type and its quadratic coefficients.

    Whatever the type, the normalized variance sum is
    ``(alpha + beta h**2 + 2 chi h) / (1 + h**2)`` with ``alpha``/``beta``
    the single-mode variance sums and ``chi`` the signed correlation the
    combination can cancel.  The type with the larger exploitable
    correlation magnitude wins (ties resolved towards ``"XP"``).
    """
    var_ix = cov.variance(mode_i, "X")
    var_ip = cov.variance(mode_i, "P")
    var_jx = cov.variance(mode_j, "X")
    var_jp = cov.variance(mode_j, "P")
    cross_xp = cov.moment(mode_i, "X", mode_j, "P")
    cross_px = cov.moment(mode_i, "P", mode_j, "X")
    cross_xx = cov.moment(mode_i, "X", mode_j, "X")
    cross_pp = cov.moment(mode_i, "P", mode_j, "P")
    alpha = var_ix + var_ip
    beta = var_jx + var_jp
    if abs(cross_xx) + abs(cross_pp) > abs(cross_xp) + abs(cross_px):
        return "XX", alpha, beta, cross_xx - cross_pp
    return "XP", alpha, beta, cross_xp + cross_px


def _optimal_gain(alpha: float, beta: float, chi: float) -> float:
    """Minimizer of ``(alpha + beta h**2 + 2 chi h) / (1 + h**2)``.

    Critical points solve ``chi + (beta - alpha) h - chi h**2 = 0``; the
    root below always takes the minimizing branch (its sign opposes
    ``chi``, so the cross term is subtracted).
    """
    if abs(chi) < ZERO_CORRELATION_TOL:
        return 0.0
    gap = beta - alpha
    return (gap - math.sqrt(gap * gap + 4.0 * chi * chi)) / (2.0 * chi)


def _partial_transpose_invariant(cov: CovarianceMatrix, mode_i: str, mode_j: str):
    """Smallest symplectic eigenvalue of the partially transposed pair."""
    pair = cov.pair(mode_i, mode_j)
    block_i = pair.values[0:2, 0:2]
    block_j = pair.values[2:4, 2:4]
    block_c = pair.values[0:2, 2:4]
    sigma = np.linalg.det(block_i) + np.linalg.det(block_j) - 2.0 * np.linalg.det(block_c)
    det_v = np.linalg.det(pair.values)
    disc = sigma * sigma - 4.0 * det_v
    if disc < -1e-12:
        raise NumericalError(
            f"partial-transpose invariant discriminant is negative ({disc:.3e}); "
            "input covariance is not physical"
        )
    lam_sq = 0.5 * (sigma - math.sqrt(max(disc, 0.0)))
    if lam_sq <= 0.0:
        if lam_sq < -1e-12:
            raise NumericalError(
                "partial-transpose symplectic eigenvalue is imaginary; "
                "input covariance is not physical"
            )
        lam_sq = 0.0
    return math.sqrt(lam_sq)


def _entanglement_report(cov: CovarianceMatrix, mode_i: str, mode_j: str) -> EntanglementReport:
    pairing, alpha, beta, chi = _duan_simon_terms(cov, mode_i, mode_j)
    h_opt = _optimal_gain(alpha, beta, chi)
    value = (alpha + beta * h_opt * h_opt + 2.0 * chi * h_opt) / (1.0 + h_opt * h_opt)
    lam = _partial_transpose_invariant(cov, mode_i, mode_j)
    if lam <= 0.0:
        raise NumericalError("degenerate pair state: partial-transpose eigenvalue is zero")
    return EntanglementReport(
        mode_i=mode_i,
        mode_j=mode_j,
        duan_simon=value,
        h_opt=h_opt,
        pairing=pairing,
        lam=lam,
        log_negativity=max(0.0, -math.log(2.0 * lam)),
    )


def duan_simon(cov: CovarianceMatrix, mode_i: str, mode_j: str) -> EntanglementReport:
    """Optimized joint-variance entanglement test (``duan_simon < 1``).

    The combination type is chosen from the correlation structure: states
    correlated in ``X_i``--``P_j`` / ``P_i``--``X_j`` use
    ``X_i + h P_j, P_i + h X_j``; states correlated in ``X``--``X`` and
    ``P``--``P`` with opposite signs use ``X_i + h X_j, P_i - h P_j``.  With
    no exploitable correlation the report carries ``h_opt = 0`` and the bare
    variance sum.  The partial-transpose fields are filled as well.
    """
    return _entanglement_report(cov, mode_i, mode_j)


def log_negativity(cov: CovarianceMatrix, mode_i: str, mode_j: str) -> EntanglementReport:
    """Partial-transpose entanglement of a pair (``lam < 1/2`` certifies).

    ``lam`` is computed from the two-mode block invariant
    ``sigma = det V_i + det V_j - 2 det V_c`` as
    ``lam = sqrt((sigma - sqrt(sigma**2 - 4 det V)) / 2)``, and
    ``E_N = max(0, -ln(2 lam))``.  The joint-variance fields are filled as
    well.
    """
    return _entanglement_report(cov, mode_i, mode_j)
