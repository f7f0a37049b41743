"""
Stratified k-fold cross-validation of an evaluation arm, scored by the mean absolute class error and the
misclassification rate (``1 - accuracy``).

    >>> from privex.folr.evaluation import get_arm, kfold
    >>> report = kfold(dataset, 10, get_arm('folr', beta_basis=beta_basis), rule='lad', seed=0)
    >>> report.mean_mae, report.mean_accuracy_error
    (0.48, 0.44)

"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence, Tuple

import numpy as np
from sklearn.metrics import accuracy_score, mean_absolute_error
from sklearn.model_selection import StratifiedKFold

from privex.folr.base.BaseArm import BaseArm
from privex.folr.base.exceptions import ConfigurationError, UsageError
from privex.folr.base.objects import CvReport, Dataset, FoldResult
from privex.folr.estimators.prediction import check_rule

log = logging.getLogger(__name__)

MAX_RESEEDS = 10

Folds = List[Tuple[np.ndarray, np.ndarray]]


def fold_metrics(y_true, y_pred) -> Tuple[float, float]:
    """``(mean |y_hat - y|, fraction of y_hat != y)``"""
    return float(mean_absolute_error(y_true, y_pred)), float(1.0 - accuracy_score(y_true, y_pred))


def stratified_folds(labels, k: int, n_classes: int = None, seed: int = 0) -> Folds:
    """
    Seeded stratified partition into ``k`` folds, every training split holding all ``n_classes`` classes.

    If a training split misses a class, the partition is redrawn with the next seed, up to ``MAX_RESEEDS`` times.

    :raises UsageError:         ``k < 2``
    :raises ConfigurationError: A class has no member at all, there are fewer rows than folds, or no seed gives
                                complete training splits
    """
    k = int(k)
    if k < 2:
        raise UsageError(f'k-fold cross-validation needs k >= 2, got k={k}')
    labels = np.asarray(labels, dtype=int).reshape(-1)
    n_classes = int(labels.max()) if n_classes is None else int(n_classes)
    counts = np.bincount(labels, minlength=n_classes + 1)[1:n_classes + 1]
    absent = [j + 1 for j in np.flatnonzero(counts == 0)]
    if absent:
        raise ConfigurationError(f'Classes {absent} have no observation, so no training fold can contain them')
    if len(labels) < k:
        raise ConfigurationError(f'Cannot split {len(labels)} observations into {k} folds')
    if counts.max() < k:
        raise ConfigurationError(f'Every class has fewer than k={k} members, stratification is impossible')

    for attempt in range(MAX_RESEEDS):
        skf = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed + attempt)
        folds = list(skf.split(np.zeros(len(labels)), labels))
        if all(len(np.unique(labels[train])) == n_classes for train, _ in folds):
            if attempt:
                log.info('Redrew the folds %d times to keep every class in every training split', attempt)
            return folds
    raise ConfigurationError(
        f'A class is missing from a training split for {MAX_RESEEDS} seeds; smallest class count is '
        f'{int(counts.min())}. Reduce k.'
    )


def _run_fold(arm: BaseArm, dataset: Dataset, fold: int, train: np.ndarray, test: np.ndarray, rule: str) -> FoldResult:
    test_set = dataset.subset(test)
    fitted = arm.fit(dataset.subset(train))
    preds = fitted.predict(test_set, rule)
    mae, err = fold_metrics(test_set.labels, preds)
    log.debug('%s fold %d: mae=%.4f error=%.4f', arm.name, fold, mae, err)
    return FoldResult(fold=fold, mae=mae, accuracy_error=err, n_test=len(test))


def kfold(dataset: Dataset, k: int, arm: BaseArm, rule: str = 'lad', seed: int = 0, jobs: int = 1,
          folds: Folds = None) -> CvReport:
    """
    Cross-validate ``arm`` on ``dataset``. Folds are independent, ``jobs > 1`` runs them on a thread pool; the report
    is assembled in fold order either way.

    :param Dataset dataset: Labelled curves and/or samples, as needed by ``arm``
    :param int k:           Number of folds (>= 2)
    :param BaseArm arm:     The fit + predict pipeline
    :param str rule:        ``lad`` or ``mode``
    :param int seed:        Seed of the stratified partition
    :param int jobs:        Worker threads
    :param folds:           Pre-computed folds (e.g. shared by several arms), overrides ``k`` and ``seed``
    """
    rule = check_rule(rule)
    folds = stratified_folds(dataset.labels, k, dataset.n_classes, seed) if folds is None else folds
    jobs = max(1, int(jobs))
    if jobs == 1:
        results = [_run_fold(arm, dataset, i, tr, te, rule) for i, (tr, te) in enumerate(folds)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_fold, arm, dataset, i, tr, te, rule) for i, (tr, te) in enumerate(folds)]
            results = [f.result() for f in futures]
    report = CvReport(per_fold=results, arm=arm.name, rule=rule)
    log.info('%s (%s): mean MAE %.4f, mean error rate %.4f over %d folds', arm.name, rule, report.mean_mae,
             report.mean_accuracy_error, report.n_folds)
    return report


def compare(dataset: Dataset, arms: Sequence[BaseArm], k: int = 10, rule: str = 'lad', seed: int = 0,
            jobs: int = 1) -> List[CvReport]:
    """Cross-validate several arms on the very same folds"""
    folds = stratified_folds(dataset.labels, k, dataset.n_classes, seed)
    return [kfold(dataset, k, arm, rule=rule, seed=seed, jobs=jobs, folds=folds) for arm in arms]
