"""
LASSO estimation of the cumulative logit model: proximal gradient on ``NLL(tau, b) + lambda * N * ||b||_1``.

The thresholds are never penalised. Soft thresholding sets coefficients exactly to zero, so the active set of a fit
is simply the nonzero entries of ``b``.

**Copyright**::

    +===================================================+
    |                 © 2019 Privex Inc.                |
    |               https://www.privex.io               |
    +===================================================+
    |                                                   |
    |        Python Functional Ordinal Regression       |
    |        License: X11/MIT                           |
    |                                                   |
    +===================================================+

"""
import logging
from typing import List, Sequence, Union

import attr
import numpy as np

from privex.folr.base.BaseEstimator import BaseEstimator, Scaler
from privex.folr.base.exceptions import ValidationError
from privex.folr.base.objects import FitConfig, FittedFolr, ReducedDesign
from privex.folr.ordinal.model import nll_grad

log = logging.getLogger(__name__)


class LassoEstimator(BaseEstimator):
    fit_kind = 'lasso'

    def penalty_weight(self, cfg: FitConfig) -> float:
        return cfg.lasso_lambda

    def lambda_max(self, design: Union[ReducedDesign, np.ndarray], ys, n_classes: int = None,
                   standardize: bool = None) -> float:
        """
        Smallest ``lambda`` whose LASSO solution is ``b = 0``: ``max |d NLL / d b| / N`` at the thresholds-only MLE.

        :param bool standardize: Compute on the standardised design, defaults to the ``standardize`` setting
        """
        xs = np.asarray(getattr(design, 'xt', design), dtype=float)
        n, m = xs.shape
        if m == 0:
            return 0.0
        ys, counts, k = self.class_counts(ys, n_classes, n)
        if standardize is None:
            standardize = self.make_config().standardize
        xs = Scaler(xs, standardize).transform(xs)
        tau, b = self.initial_params(counts, m, FitConfig())
        _, g_b = nll_grad(tau, b, xs, ys)
        return float(np.max(np.abs(g_b))) / n

    def lambda_grid(self, design: ReducedDesign, ys, size: int = 20, ratio: float = 1e-3, **kwargs) -> np.ndarray:
        """``size`` log-spaced values from ``lambda_max`` down to ``lambda_max * ratio``"""
        lmax = self.lambda_max(design, ys, **kwargs)
        if lmax <= 0:
            return np.zeros(1)
        return np.geomspace(lmax, lmax * ratio, int(size))

    def path(self, design: ReducedDesign, ys, lambdas: Sequence[float], cfg: FitConfig = None,
             n_classes: int = None) -> List[FittedFolr]:
        """
        Fit every ``lambda`` from largest to smallest, warm starting each fit from the previous solution.

        :return list fits: One :class:`.FittedFolr` per lambda, in decreasing lambda order
        """
        cfg = self.make_config() if cfg is None else cfg
        lambdas = sorted((float(v) for v in lambdas), reverse=True)
        if not lambdas or lambdas[-1] < 0:
            raise ValidationError(f'The LASSO path needs a nonempty list of lambdas >= 0, got {lambdas}')
        fits, prev = [], None
        for lam in lambdas:
            fit = self.fit(design, ys, attr.evolve(cfg, lasso_lambda=lam), n_classes=n_classes,
                           warm_start=None if prev is None else prev.model)
            log.debug('lambda=%.4g: objective=%.6f active=%s', lam, fit.diagnostics.objective, fit.active_set)
            fits.append(fit)
            prev = fit
        return fits
