"""
Using a fitted model: the coefficient function beta(t), linear scores ``<X, beta>`` and class predictions.
"""
import logging
from typing import List, Sequence

import numpy as np

from privex.folr.base.exceptions import DimensionError, UsageError
from privex.folr.base.objects import FittedFolr, FunctionalSample, OrdinalModel, Prediction
from privex.folr.basis.quadrature import gram
from privex.folr.estimators.reduction import coefficient_matrix
from privex.folr.ordinal.decision import lad_labels, predict_mode
from privex.folr.ordinal.model import class_probs

log = logging.getLogger(__name__)

RULE_LAD = 'lad'
RULE_MODE = 'mode'
RULES = (RULE_LAD, RULE_MODE)


def check_rule(rule: str) -> str:
    rule = str(rule).lower()
    if rule not in RULES:
        raise UsageError(f"Unknown decision rule '{rule}', expected one of {list(RULES)}")
    return rule


def reconstruct_beta(fit: FittedFolr, t_grid) -> np.ndarray:
    """
    ``beta(t_k) = sum_m b_m phi_m(t_k)`` on every grid point. A thresholds-only fit has ``beta = 0``.

    :raises DomainError: A grid point lies outside of ``[0, T]``
    """
    if fit.beta_basis is None:
        return np.zeros(len(fit.curve_basis.check_points(t_grid)))
    return fit.beta_basis.evaluate(t_grid) @ fit.model.coefficients


def curve_weights(fit: FittedFolr) -> np.ndarray:
    """``w = R b``, so that ``<X, beta> = <a, w>`` for any curve with coefficients ``a`` in the curve basis"""
    if fit.beta_basis is None:
        return np.zeros(fit.curve_basis.size)
    return gram(fit.curve_basis, fit.beta_basis).entries @ fit.model.coefficients


def linear_scores(fit: FittedFolr, samples: Sequence[FunctionalSample]) -> np.ndarray:
    """
    ``g_i = <X_i, beta>`` for every sample.

    :raises DimensionError: A sample is not expanded in the fit's curve basis
    """
    return coefficient_matrix(samples, fit.curve_basis) @ curve_weights(fit)


def labels_from_scores(model: OrdinalModel, scores, rule: str = RULE_LAD) -> np.ndarray:
    """Classes for a vector of linear scores ``g`` under ``rule``"""
    rule = check_rule(rule)
    scores = np.asarray(scores, dtype=float).reshape(-1)
    if rule == RULE_LAD:
        return lad_labels(model.tau, scores)
    return np.array([predict_mode(class_probs(model, g)) for g in scores], dtype=int)


def _predict_scores(fit: FittedFolr, scores: np.ndarray, rule: str) -> List[Prediction]:
    rule = check_rule(rule)
    model = fit.model
    if rule == RULE_LAD:
        # Threshold lookup only, the distribution stays lazy.
        labels = lad_labels(model.tau, scores)
        return [Prediction(label=int(y), score=g, model=model) for y, g in zip(labels, scores)]
    out = []
    for g in scores:
        dist = class_probs(model, g)
        out.append(Prediction(label=predict_mode(dist), score=g, model=model, dist=dist))
    return out


def predict(fit: FittedFolr, sample: FunctionalSample, rule: str = RULE_LAD) -> Prediction:
    """
    Predict the class of one curve.

    - ``lad``: the class whose threshold interval contains ``g = <X, beta>``; no probability is computed until
      :attr:`.Prediction.distribution` is read
    - ``mode``: the most probable class

    :raises DimensionError: ``sample`` is not expanded in the fit's curve basis
    :raises UsageError:     Unknown ``rule``
    """
    if not sample.basis.same_as(fit.curve_basis):
        raise DimensionError(f'Sample basis {sample.basis!r} does not match the model curve basis {fit.curve_basis!r}')
    return predict_many(fit, [sample], rule)[0]


def predict_many(fit: FittedFolr, samples: Sequence[FunctionalSample], rule: str = RULE_LAD) -> List[Prediction]:
    """:py:func:`.predict` for many samples, computing the Gram matrix once"""
    return _predict_scores(fit, linear_scores(fit, samples), rule)


def predict_labels(fit: FittedFolr, samples: Sequence[FunctionalSample], rule: str = RULE_LAD) -> np.ndarray:
    return np.array([p.label for p in predict_many(fit, samples, rule)], dtype=int)
