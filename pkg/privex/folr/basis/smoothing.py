"""
Penalised least squares smoothing of raw curves into basis coefficients.

The coefficients minimise ``sum_k (y_k - X(t_k))^2 + lambda * int X''(s)^2 ds``, solved from the normal equations
``(Phi' Phi + lambda P) a = Phi' y`` with a Cholesky factorization.
"""
import logging
from typing import List, Optional, Sequence

import numpy as np
from numpy.linalg import LinAlgError
from scipy.linalg import cho_factor, cho_solve

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.decorators import retry_with_jitter
from privex.folr.base.exceptions import EstimationError, ValidationError
from privex.folr.base.objects import FunctionalSample, RawCurve, SmoothingResult
from privex.folr.basis.quadrature import penalty_matrix

log = logging.getLogger(__name__)


@retry_with_jitter(max_retries=6, jitter=1e-10)
def solve_spd(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``matrix @ x = rhs`` for a symmetric positive definite ``matrix``. Returns ``(x, jitter_used)``."""
    return cho_solve(cho_factor(matrix, lower=True), rhs)


def _check_design(curve: RawCurve, spec: BaseBasis, phi: np.ndarray):
    n, m = phi.shape
    if n < m:
        raise EstimationError(
            f'Curve {curve.curve_id}: singular normal matrix, {n} observations for {m} basis functions '
            f'and no roughness penalty'
        )
    rank = int(np.linalg.matrix_rank(phi))
    if rank < m:
        empty_cols = [int(j) for j in np.flatnonzero(np.all(phi == 0, axis=0))]
        detail = f'; basis functions with no observation in their support: {empty_cols}' if empty_cols else ''
        raise EstimationError(
            f'Curve {curve.curve_id}: singular normal matrix, design rank {rank} < basis size {m}{detail}'
        )


def smooth_curve(curve: RawCurve, spec: BaseBasis, roughness_lambda: float = 0.0,
                 penalty: Optional[np.ndarray] = None) -> SmoothingResult:
    """
    Smooth ``curve`` into ``spec`` and report the residual RMS and any ridge jitter that was needed.

    :param RawCurve curve:          The observed curve
    :param BaseBasis spec:          Basis to expand the curve in
    :param float roughness_lambda:  Weight of the integrated squared second derivative (>= 0)
    :param np.ndarray penalty:      Pre-computed :py:func:`.penalty_matrix` of ``spec`` (optional)
    :raises DomainError:            When an observation time lies outside of the basis domain
    :raises EstimationError:        When ``roughness_lambda == 0`` and the design is rank deficient, or the normal
                                    matrix cannot be factorized even after adding ridge jitter
    """
    lam = float(roughness_lambda)
    if not lam >= 0 or not np.isfinite(lam):
        raise ValidationError(f'roughness_lambda must be finite and >= 0, got {roughness_lambda!r}')
    phi = spec.evaluate(curve.times)
    y = curve.values
    normal = phi.T @ phi
    if lam > 0:
        normal = normal + lam * (penalty_matrix(spec) if penalty is None else penalty)
    else:
        _check_design(curve, spec, phi)

    try:
        coef, jitter = solve_spd(normal, phi.T @ y)
    except LinAlgError as e:
        raise EstimationError(
            f'Curve {curve.curve_id}: normal matrix is not positive definite even with ridge jitter ({e})'
        ) from e
    if jitter > 0:
        log.warning('Curve %s: normal matrix was not numerically positive definite, added ridge jitter %.3g',
                    curve.curve_id, jitter)
    resid = y - phi @ coef
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return SmoothingResult(
        sample=FunctionalSample(coefficients=coef, basis=spec, curve_id=curve.curve_id),
        residual_rms=rms, jitter=jitter,
    )


def smooth(curve: RawCurve, spec: BaseBasis, roughness_lambda: float = 0.0) -> FunctionalSample:
    """Smooth ``curve`` into the basis ``spec``, returning only the coefficients. See :py:func:`.smooth_curve`."""
    return smooth_curve(curve, spec, roughness_lambda).sample


def smooth_many(curves: Sequence[RawCurve], spec: BaseBasis, roughness_lambda: float = 0.0) -> List[SmoothingResult]:
    """Smooth every curve in ``curves``, computing the roughness penalty matrix only once"""
    pen = penalty_matrix(spec) if roughness_lambda > 0 else None
    return [smooth_curve(c, spec, roughness_lambda, penalty=pen) for c in curves]


def evaluate_sample(sample: FunctionalSample, t) -> np.ndarray:
    """Reconstruct ``X(t) = sum_r a_r psi_r(t)`` on the points ``t``"""
    return sample.basis.evaluate(t) @ sample.coefficients
