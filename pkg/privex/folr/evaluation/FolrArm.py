import logging
from typing import Optional

import numpy as np

from privex.folr.base.BaseArm import BaseArm
from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.exceptions import ValidationError
from privex.folr.base.objects import Dataset, FittedFolr, ReducedDesign
from privex.folr.estimators.MLEstimator import MLEstimator
from privex.folr.estimators.prediction import predict_labels
from privex.folr.estimators.reduction import reduce

log = logging.getLogger(__name__)


class FolrArm(BaseArm):
    """
    Functional ordinal logistic regression on the smoothed curves, unpenalised.

    :param BaseBasis beta_basis: Basis of the coefficient function, ``None`` for a thresholds-only model
    """
    name = 'folr'

    fit_: Optional[FittedFolr]

    def __init__(self, beta_basis: BaseBasis = None, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.beta_basis = beta_basis
        self.fit_ = None

    def _design(self, data: Dataset) -> ReducedDesign:
        if data.samples is None:
            raise ValidationError(f"The arm '{self.name}' needs smoothed samples in the dataset")
        return reduce(data.samples, self.beta_basis)

    def _fit(self, train: Dataset):
        design = self._design(train)
        est = MLEstimator(settings=self.allsettings, overrides=self.overrides)
        self.fit_ = est.fit(design, train.labels, n_classes=train.n_classes)

    def predict(self, test: Dataset, rule: str = 'lad') -> np.ndarray:
        self._require_fitted()
        if test.samples is None:
            raise ValidationError(f"The arm '{self.name}' needs smoothed samples in the dataset")
        return predict_labels(self.fit_, test.samples, rule)
