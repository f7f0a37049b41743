import logging

import numpy as np

from privex.folr.base.BaseArm import BaseArm
from privex.folr.base.exceptions import ValidationError
from privex.folr.base.objects import Dataset
from privex.folr.estimators.MLEstimator import MLEstimator
from privex.folr.estimators.prediction import labels_from_scores
from privex.folr.evaluation.features import last_value_baseline

log = logging.getLogger(__name__)


class LastValueArm(BaseArm):
    """Baseline: the ordinal model with the last observed value of the raw curve as its only covariate"""
    name = 'last-value'

    def _features(self, data: Dataset) -> np.ndarray:
        if data.curves is None:
            raise ValidationError(f"The arm '{self.name}' needs the raw curves of the dataset")
        return last_value_baseline(data.curves)

    def _fit(self, train: Dataset):
        est = MLEstimator(settings=self.allsettings, overrides=self.overrides)
        self.model, self.diagnostics = est.fit_params(self._features(train), train.labels, n_classes=train.n_classes)

    def predict(self, test: Dataset, rule: str = 'lad') -> np.ndarray:
        self._require_fitted()
        scores = self._features(test) @ self.model.coefficients
        return labels_from_scores(self.model, scores, rule)
