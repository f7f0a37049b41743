"""
Cumulative logit model: probabilities, negative log-likelihood and its analytic gradient.

The model is ``P(Y <= j | x) = F(tau_j - g)`` with ``g = <x, b>`` and ``F`` the standard logistic CDF, so that
``pi_j = F(tau_j - g) - F(tau_{j-1} - g)`` with ``F(tau_0 - g) = 0`` and ``F(tau_K - g) = 1``.
"""
import logging
from typing import Tuple

import numpy as np
from scipy.special import expit

from privex.folr.base.exceptions import DimensionError, DomainError, RangeError
from privex.folr.base.objects import ClassDistribution, OrdinalModel

log = logging.getLogger(__name__)

PROB_FLOOR = 1e-300
"""Interval probabilities below this count as underflow: the NLL becomes ``+inf``"""


def logistic_density(z):
    """``f(z) = F(z) (1 - F(z))``, zero at ``+-inf``"""
    return expit(z) * expit(-z)


def linear_predictor(model: OrdinalModel, x) -> float:
    """
    ``g = <x, b>`` for one covariate vector.

    :raises DimensionError: ``len(x) != len(b)``
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if len(x) != model.n_covariates:
        raise DimensionError(f'Covariate vector has length {len(x)}, model has {model.n_covariates} coefficients')
    return float(x @ model.coefficients) if len(x) else 0.0


def _design(xs, n_covariates: int) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 1 and n_covariates == 0:
        xs = xs.reshape(-1, 0)
    if xs.ndim != 2 or xs.shape[1] != n_covariates:
        raise DimensionError(f'Design has shape {xs.shape}, model has {n_covariates} coefficients')
    return xs


def linear_predictors(model: OrdinalModel, xs) -> np.ndarray:
    """``g_i = <x_i, b>`` for every row of the ``N x M`` design ``xs``"""
    xs = _design(xs, model.n_covariates)
    return xs @ model.coefficients if model.n_covariates else np.zeros(xs.shape[0])


def _check_g(g) -> float:
    g = float(g)
    if not np.isfinite(g):
        raise DomainError(f'The linear predictor must be finite, got {g!r}')
    return g


def cumulative_probs(model: OrdinalModel, g: float) -> np.ndarray:
    """``(F(tau_1 - g), ..., F(tau_{K-1} - g))``, the cumulative class probabilities ``P(Y <= j)``"""
    return expit(model.tau - _check_g(g))


def class_probs(model: OrdinalModel, g: float) -> ClassDistribution:
    """
    Class distribution ``pi_j = F(tau_j - g) - F(tau_{j-1} - g)`` at the linear predictor ``g``.

        >>> class_probs(OrdinalModel.build([-1, 1]), 0.0).probs
        array([0.26894142, 0.46211716, 0.26894142])

    :raises DomainError: ``g`` is not finite
    """
    cum = np.concatenate([[0.0], cumulative_probs(model, g), [1.0]])
    return ClassDistribution(np.clip(np.diff(cum), 0.0, 1.0))


def check_labels(ys, n_classes: int, n_rows: int = None) -> np.ndarray:
    """
    Return ``ys`` as an int array after checking every label lies in ``1..n_classes``.

    :raises RangeError:     A label is out of range
    :raises DimensionError: ``len(ys) != n_rows``
    """
    ys = np.asarray(ys)
    if ys.size and not np.all(np.equal(np.mod(ys, 1), 0)):
        raise RangeError('Class labels must be integers')
    ys = ys.astype(int).reshape(-1)
    if n_rows is not None and len(ys) != n_rows:
        raise DimensionError(f'{len(ys)} labels for {n_rows} design rows')
    bad = (ys < 1) | (ys > n_classes)
    if np.any(bad):
        raise RangeError(f'label {int(ys[bad][0])} out of range 1..{n_classes}')
    return ys


def interval_bounds(tau: np.ndarray, g: np.ndarray, ys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """``(u, l) = (tau_y - g, tau_{y-1} - g)`` with the implied infinite outer thresholds"""
    padded = np.concatenate([[-np.inf], tau, [np.inf]])
    return padded[ys] - g, padded[ys - 1] - g


def interval_probs(u: np.ndarray, l: np.ndarray) -> np.ndarray:
    """
    ``F(u) - F(l)`` evaluated on whichever tail keeps precision: ``F(-l) - F(-u)`` when both points sit in the upper
    tail, so probabilities of the top class far above every threshold do not round to zero.
    """
    upper_tail = l > 0
    return np.where(upper_tail, expit(-l) - expit(-u), expit(u) - expit(l))


def nll_terms(tau: np.ndarray, b: np.ndarray, xs: np.ndarray, ys: np.ndarray):
    """Shared kernel of the NLL and its gradient, operating on raw arrays. Returns ``(p, u, l)``."""
    g = xs @ b if len(b) else np.zeros(xs.shape[0])
    u, l = interval_bounds(tau, g, ys)
    return interval_probs(u, l), u, l


def nll_value(tau: np.ndarray, b: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> float:
    p, _, _ = nll_terms(tau, b, xs, ys)
    if np.any(p < PROB_FLOOR):
        return float('inf')
    return float(-np.sum(np.log(p)))


def nll_grad(tau: np.ndarray, b: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p, u, l = nll_terms(tau, b, xs, ys)
    p = np.maximum(p, PROB_FLOOR)
    fu, fl = logistic_density(u) / p, logistic_density(l) / p
    n_tau = len(tau)
    # Observation i pulls on tau_{y_i} (upper bound) and tau_{y_i - 1} (lower bound); bins 0 and K are the
    # infinite thresholds and are dropped.
    up = np.bincount(ys, weights=fu, minlength=n_tau + 2)
    down = np.bincount(ys - 1, weights=fl, minlength=n_tau + 2)
    grad_tau = -up[1:n_tau + 1] + down[1:n_tau + 1]
    grad_b = xs.T @ (fu - fl) if len(b) else np.zeros(0)
    return grad_tau, grad_b


def neg_log_likelihood(model: OrdinalModel, xs, ys) -> float:
    """
    ``-sum_i log pi_{y_i}(g(x_i))``.

    Returns ``+inf`` rather than ``nan`` when an observed class probability underflows.

    :param OrdinalModel model: Thresholds and coefficients
    :param xs:                 ``N x M`` design
    :param ys:                 Labels in ``1..K``
    :raises DimensionError:    Shapes disagree
    :raises RangeError:        A label is out of range
    """
    xs = _design(xs, model.n_covariates)
    ys = check_labels(ys, model.n_classes, xs.shape[0])
    return nll_value(model.tau, model.coefficients, xs, ys)


def nll_gradient(model: OrdinalModel, xs, ys) -> Tuple[np.ndarray, np.ndarray]:
    """
    Analytic gradient of :py:func:`.neg_log_likelihood`.

    With ``f = F (1 - F)``, ``u_i = tau_{y_i} - g_i`` and ``l_i = tau_{y_i - 1} - g_i``::

        d/dtau_j = sum_i [ -f(u_i) 1{y_i = j} + f(l_i) 1{y_i = j + 1} ] / pi_i
        d/db     = sum_i x_i (f(u_i) - f(l_i)) / pi_i

    :return tuple: ``(grad_tau, grad_b)`` of lengths ``K - 1`` and ``M``
    """
    xs = _design(xs, model.n_covariates)
    ys = check_labels(ys, model.n_classes, xs.shape[0])
    return nll_grad(model.tau, model.coefficients, xs, ys)
