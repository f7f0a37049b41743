"""
Functional ordinal logistic regression: reduction of the curves to ordinary covariates, and the estimators.

Estimators are looked up by name through :py:attr:`.ESTIMATORS`. The module level functions use the package
settings (:py:attr:`privex.folr.FOLR_SETTINGS` and ``FOLR_*`` environment variables):

    >>> from privex.folr.estimators import reduce, fit_mle, predict
    >>> design = reduce(samples, beta_basis)
    >>> fit = fit_mle(design, labels)
    >>> predict(fit, samples[0], 'lad').label
    2

"""
import logging
from typing import Dict, List, Sequence, Type

from privex.folr.base.BaseEstimator import BaseEstimator, LogitObjective, Scaler, soft_threshold
from privex.folr.base.exceptions import ComponentNotFound
from privex.folr.base.objects import FitConfig, FittedFolr, ReducedDesign
from privex.folr.estimators.LassoEstimator import LassoEstimator
from privex.folr.estimators.MLEstimator import MLEstimator
from privex.folr.estimators.inference import observed_information, standard_errors
from privex.folr.estimators.prediction import (
    RULE_LAD, RULE_MODE, RULES, check_rule, curve_weights, labels_from_scores, linear_scores, predict, predict_labels,
    predict_many, reconstruct_beta,
)
from privex.folr.estimators.reduction import coefficient_matrix, reduce

log = logging.getLogger(__name__)

ESTIMATORS = {
    MLEstimator.fit_kind: MLEstimator,
    LassoEstimator.fit_kind: LassoEstimator,
}   # type: Dict[str, Type[BaseEstimator]]
"""Maps a fit kind to its estimator class"""


def get_estimator(kind: str, **kwargs) -> BaseEstimator:
    """
    Construct the estimator registered as ``kind`` (``mle`` or ``lasso``). ``kwargs`` go to the constructor, e.g.
    ``settings=...``.

    :raises ComponentNotFound: Unknown ``kind``
    """
    kind = str(kind).lower()
    if kind not in ESTIMATORS:
        raise ComponentNotFound(f"The estimator '{kind}' does not exist. Known estimators: {sorted(ESTIMATORS)}")
    return ESTIMATORS[kind](**kwargs)


def fit_mle(design: ReducedDesign, ys, cfg: FitConfig = None, n_classes: int = None) -> FittedFolr:
    """Unpenalised maximum likelihood fit, see :meth:`.BaseEstimator.fit`"""
    return MLEstimator().fit(design, ys, cfg, n_classes=n_classes)


def fit_lasso(design: ReducedDesign, ys, cfg: FitConfig = None, n_classes: int = None, **overrides) -> FittedFolr:
    """
    LASSO fit. The penalty comes from ``cfg.lasso_lambda``, or from ``overrides`` / settings when ``cfg`` is omitted:

        >>> fit_lasso(design, labels, lasso_lambda=0.01).active_set
        [7, 8, 9]

    """
    est = LassoEstimator()
    return est.fit(design, ys, est.make_config(**overrides) if cfg is None else cfg, n_classes=n_classes)


def lambda_max(design: ReducedDesign, ys, n_classes: int = None, standardize: bool = None) -> float:
    return LassoEstimator().lambda_max(design, ys, n_classes=n_classes, standardize=standardize)


def lasso_path(design: ReducedDesign, ys, lambdas: Sequence[float], cfg: FitConfig = None,
               n_classes: int = None) -> List[FittedFolr]:
    """Warm started LASSO fits for every lambda, in decreasing lambda order. See :meth:`.LassoEstimator.path`"""
    return LassoEstimator().path(design, ys, lambdas, cfg, n_classes=n_classes)
