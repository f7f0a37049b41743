"""
LASSO penalised functional ordinal regression, with the penalty chosen by an inner cross-validation.

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
from typing import Optional

import numpy as np

from privex.folr.base.exceptions import UsageError
from privex.folr.base.objects import Dataset, FitConfig, ReducedDesign
from privex.folr.estimators.LassoEstimator import LassoEstimator
from privex.folr.estimators.prediction import RULE_LAD, labels_from_scores
from privex.folr.evaluation.FolrArm import FolrArm
from privex.folr.evaluation.crossval import fold_metrics, stratified_folds

log = logging.getLogger(__name__)

RULE_MIN = 'min'
RULE_1SE = '1se'
LAMBDA_RULES = (RULE_MIN, RULE_1SE)


class LassoFolrArm(FolrArm):
    """
    For every training split:

    1. Build a grid of ``lambda_grid_size`` log-spaced penalties from ``lambda_max`` down to
       ``lambda_max * lambda_ratio``
    2. Score every penalty by the LAD mean absolute error of an ``inner_folds``-fold cross-validation (warm started
       LASSO paths on each inner training split)
    3. Pick a penalty by ``lambda_rule``: ``min`` takes the lowest mean error (ties go to the larger penalty), ``1se``
       (the default) takes the largest penalty whose mean error is within one standard error of that minimum
    4. Refit on the whole split with the chosen penalty

    After fitting, :attr:`.selected_lambda` and :attr:`.lambda_scores` hold the choice and the inner CV curve.
    """
    name = 'folr-lasso'

    selected_lambda: Optional[float]
    lambda_scores: Optional[np.ndarray]

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.selected_lambda = None
        self.lambda_grid = None
        self.lambda_scores = None

    @staticmethod
    def pick(scores: np.ndarray, rule: str = RULE_1SE) -> int:
        """
        Index of the chosen penalty given the ``(folds, penalties)`` error matrix, penalties in decreasing order.

            >>> LassoFolrArm.pick(np.array([[1.0, 0.5, 0.4], [1.0, 0.6, 0.4]]), 'min')
            2

        :raises UsageError: Unknown rule
        """
        if rule not in LAMBDA_RULES:
            raise UsageError(f"Unknown lambda_rule '{rule}', expected one of {list(LAMBDA_RULES)}")
        mean = scores.mean(axis=0)
        best = int(np.argmin(mean))
        if rule == RULE_MIN or scores.shape[0] < 2:
            return best
        se = float(scores[:, best].std(ddof=1)) / np.sqrt(scores.shape[0])
        return int(np.flatnonzero(mean <= mean[best] + se + 1e-12)[0])

    def select_lambda(self, est: LassoEstimator, design: ReducedDesign, ys: np.ndarray, n_classes: int,
                      cfg: FitConfig) -> int:
        s = self.settings
        grid = est.lambda_grid(design, ys, size=s['lambda_grid_size'], ratio=s['lambda_ratio'], n_classes=n_classes,
                               standardize=cfg.standardize)
        folds = stratified_folds(ys, s['inner_folds'], n_classes, seed=s['cv_seed'])
        scores = np.zeros((len(folds), len(grid)))
        for i, (train, test) in enumerate(folds):
            path = est.path(design.subset(train), ys[train], grid, cfg, n_classes=n_classes)
            x_test = design.xt[test]
            for j, fit in enumerate(path):
                preds = labels_from_scores(fit.model, x_test @ fit.model.coefficients, RULE_LAD)
                scores[i, j] = fold_metrics(ys[test], preds)[0]
        self.lambda_grid, self.lambda_scores = grid, scores.mean(axis=0)
        best = self.pick(scores, s['lambda_rule'])
        log.debug('%s: inner CV picked lambda=%.4g (MAE %.4f)', self.name, grid[best], self.lambda_scores[best])
        return best

    def _fit(self, train: Dataset):
        design = self._design(train)
        ys = np.asarray(train.labels)
        est = LassoEstimator(settings=self.allsettings, overrides=self.overrides)
        cfg = est.make_config()
        if design.xt.shape[1] == 0:
            self.selected_lambda = 0.0
            self.fit_ = est.fit(design, ys, cfg, n_classes=train.n_classes)
            return
        best = self.select_lambda(est, design, ys, train.n_classes, cfg)
        self.selected_lambda = float(self.lambda_grid[best])
        # Follow the path down to the chosen penalty so the final fit is warm started like the inner ones.
        self.fit_ = est.path(design, ys, self.lambda_grid[:best + 1], cfg, n_classes=train.n_classes)[-1]
