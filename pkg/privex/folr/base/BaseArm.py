"""
**Copyright**::

    +===================================================+
    |                 © 2019 Privex Inc.                |
    |               https://www.privex.io               |
    +===================================================+
    |                                                   |
    |        Python Functional Ordinal Regression       |
    |                                                   |
    +===================================================+

"""
import copy
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

import numpy as np

from privex.folr import settings as folr_settings
from privex.folr.base.SettingsMixin import SettingsMixin
from privex.folr.base.exceptions import UsageError
from privex.folr.base.objects import Dataset

log = logging.getLogger(__name__)


class BaseArm(SettingsMixin, ABC):
    """
    BaseArm - Base class for the fit + predict pipelines compared by cross-validation

    An arm is configured once, then :meth:`.fit` returns a *new* fitted arm for every training split, so one
    configured arm can be shared by concurrently running folds::

        >>> arm = get_arm('last-value')
        >>> fitted = arm.fit(train)
        >>> fitted.predict(test, 'lad')
        array([2, 1, 3])

    Sub-classes implement :meth:`._fit` (store the fitted state on ``self``) and :meth:`.predict`.
    """

    name = ''
    """Registry name of the arm, used in reports, e.g. ``folr-lasso``"""

    setting_defaults = dict(
        SettingsMixin.setting_defaults, cv_seed=0, lambda_grid_size=20, lambda_ratio=1e-3, inner_folds=5, jobs=1,
        lambda_rule='1se',
    )

    def __init__(self, *args, settings: Optional[Dict[str, Any]] = None, **kwargs):
        super().__init__(*args, settings=folr_settings.FOLR_SETTINGS if settings is None else settings, **kwargs)
        self.is_fitted = False

    def fit(self, train: Dataset) -> 'BaseArm':
        """Return a fitted copy of this arm, leaving ``self`` untouched"""
        fitted = copy.copy(self)
        fitted._fit(train)
        fitted.is_fitted = True
        return fitted

    @abstractmethod
    def _fit(self, train: Dataset):
        raise NotImplementedError(f"{type(self).__name__}._fit must be implemented!")

    @abstractmethod
    def predict(self, test: Dataset, rule: str = 'lad') -> np.ndarray:
        """Predicted classes (1-based) for every row of ``test``"""
        raise NotImplementedError(f"{type(self).__name__}.predict must be implemented!")

    def _require_fitted(self):
        if not self.is_fitted:
            raise UsageError(f"The arm '{self.name}' must be fitted before predicting")

    def __repr__(self):
        return f'<{type(self).__name__} name={self.name!r} fitted={self.is_fitted}>'
