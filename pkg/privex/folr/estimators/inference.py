"""
Asymptotic standard errors of an unpenalised fit from the observed information matrix.
"""
import logging

import numpy as np
from numpy.linalg import LinAlgError
from scipy.linalg import cho_factor, cho_solve

from privex.folr.base.exceptions import DimensionError, EstimationError, UsageError
from privex.folr.base.objects import FittedFolr, ReducedDesign, StandardErrors
from privex.folr.ordinal.model import check_labels, nll_grad

log = logging.getLogger(__name__)


def observed_information(tau: np.ndarray, b: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                         rel_step: float = 1e-5) -> np.ndarray:
    """Hessian of the NLL in ``(tau, b)``, by central differences of the analytic gradient, symmetrised"""
    theta = np.concatenate([tau, b])
    n_tau, p = len(tau), len(theta)

    def grad(th):
        gt, gb = nll_grad(th[:n_tau], th[n_tau:], xs, ys)
        return np.concatenate([gt, gb])

    h = np.empty((p, p))
    for i in range(p):
        step = rel_step * max(1.0, abs(theta[i]))
        e = np.zeros(p)
        e[i] = step
        h[:, i] = (grad(theta + e) - grad(theta - e)) / (2 * step)
    return (h + h.T) / 2.0


def standard_errors(fit: FittedFolr, design: ReducedDesign, ys) -> StandardErrors:
    """
    Standard errors of ``(tau, b)`` as the square roots of the diagonal of the inverse observed information.

    :raises UsageError:      The fit is penalised (the LASSO estimate has no such asymptotics)
    :raises DimensionError:  ``design`` does not match the fit
    :raises EstimationError: The information matrix is not positive definite
    """
    if fit.lasso_lambda > 0:
        raise UsageError('Standard errors are only available for unpenalised fits')
    xs = np.asarray(design.xt, dtype=float)
    if xs.shape[1] != fit.model.n_covariates:
        raise DimensionError(f'Design has {xs.shape[1]} columns, model has {fit.model.n_covariates} coefficients')
    ys = check_labels(ys, fit.model.n_classes, xs.shape[0])
    info = observed_information(np.array(fit.model.tau), np.array(fit.model.coefficients), xs, ys)
    try:
        cov = cho_solve(cho_factor(info, lower=True), np.eye(info.shape[0]))
    except LinAlgError:
        raise EstimationError('The observed information matrix is not positive definite, no standard errors exist')
    se = np.sqrt(np.diag(cov))
    n_tau = len(fit.model.tau)
    return StandardErrors(tau=se[:n_tau], coefficients=se[n_tau:], covariance=cov)
