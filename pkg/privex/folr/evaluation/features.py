import logging
from typing import Dict, Sequence

import numpy as np

from privex.folr.base.exceptions import ValidationError
from privex.folr.base.objects import FunctionalSample, RawCurve
from privex.folr.estimators.reduction import coefficient_matrix

log = logging.getLogger(__name__)


def last_value_baseline(curves: Sequence[RawCurve]) -> np.ndarray:
    """
    ``N x 1`` design holding the last observed value of every curve, the covariate of the last-value baseline.

        >>> last_value_baseline([RawCurve('a', [0, 1, 2], [1.0, 3.0, 7.5])])
        array([[7.5]])

    """
    if not curves:
        raise ValidationError('The last-value baseline needs at least one curve')
    return np.array([[c.values[-1]] for c in curves], dtype=float)


def class_mean_curves(samples: Sequence[FunctionalSample], labels,
                     n_classes: int = None) -> Dict[int, FunctionalSample]:
    """
    Mean curve of every observed class. Expansion is linear, so the mean curve has the mean coefficient vector.

    :return dict means: ``{class: FunctionalSample}`` for each class with at least one curve
    """
    a = coefficient_matrix(samples)
    labels = np.asarray(labels, dtype=int).reshape(-1)
    if len(labels) != a.shape[0]:
        raise ValidationError(f'{len(labels)} labels for {a.shape[0]} samples')
    k = int(n_classes) if n_classes else int(labels.max())
    basis = samples[0].basis
    return {
        j: FunctionalSample(a[labels == j].mean(axis=0), basis, curve_id=f'class_{j}')
        for j in range(1, k + 1) if np.any(labels == j)
    }
