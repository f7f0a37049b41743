"""
Decision rules turning a fitted cumulative model into a predicted class.

- :py:func:`.predict_mode` - the most probable class, optimal for the 0-1 cost
- :py:func:`.predict_lad` - the class whose threshold interval contains ``g``, optimal for the absolute difference
  cost ("Least Absolute Difference"). It needs no probability evaluation at all.
- :py:func:`.expected_cost_oracle` - brute force minimiser of the expected cost for any cost function

All argmin / argmax ties resolve to the smallest class. Classes are 1-based.
"""
import logging
from typing import Tuple

import numpy as np

from privex.folr.base.exceptions import DimensionError
from privex.folr.base.objects import ClassDistribution, CostFunction, OrdinalModel

log = logging.getLogger(__name__)


def predict_mode(dist: ClassDistribution) -> int:
    """Smallest class attaining the maximal probability"""
    return int(np.argmax(dist.probs)) + 1


def lad_labels(tau: np.ndarray, g) -> np.ndarray:
    """
    Vectorised LAD rule: class ``j`` such that ``tau_{j-1} < g <= tau_j``. ``g`` exactly on ``tau_j`` maps to ``j``.
    """
    return np.searchsorted(np.asarray(tau), np.asarray(g, dtype=float), side='left') + 1


def predict_lad(model: OrdinalModel, g: float) -> int:
    """
    LAD prediction for the linear predictor ``g``, found by locating ``g`` among the thresholds.

        >>> predict_lad(OrdinalModel.build([-1, 0, 1]), 0.5)
        3
    """
    return int(lad_labels(model.tau, float(g)))


def cost_matrix(cost: CostFunction, n_classes: int) -> np.ndarray:
    """``C[y_hat - 1, y - 1]`` for every pair of classes"""
    return cost.matrix(n_classes)


def expected_cost_oracle(dist: ClassDistribution, cost: CostFunction) -> Tuple[int, np.ndarray]:
    """
    Expected cost ``E C(y_hat, Y) = sum_y C(y_hat, y) pi_y`` of every possible prediction.

        >>> cls, costs = expected_cost_oracle(ClassDistribution([.25] * 4), CostFunction.absolute_difference())
        >>> cls, costs
        (2, array([1.5, 1. , 1. , 1.5]))

    :return tuple: ``(best_class, expected_costs)`` - the smallest minimiser and the full cost vector
    """
    c = cost_matrix(cost, dist.n_classes)
    if c.shape[0] != dist.n_classes:
        raise DimensionError(f'Cost matrix is {c.shape[0]}x{c.shape[0]} for K={dist.n_classes}')
    expected = c @ dist.probs
    return int(np.argmin(expected)) + 1, expected
