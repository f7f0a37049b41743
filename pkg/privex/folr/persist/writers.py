"""
CSV / JSON writers. Every writer goes through :py:func:`.atomic_write`, so a failing writer never leaves a partial
file behind, and :py:func:`.atomic_writes` extends that to a group of files. Every render is deterministic: floats use
Python's shortest round-trip repr, lines end in ``\\n``.
"""
import json
import logging
import os
import tempfile
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Dict, Iterable, Sequence

import numpy as np
import pandas as pd

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.exceptions import DimensionError
from privex.folr.base.objects import CvReport, FunctionalSample, Prediction, RawCurve

log = logging.getLogger(__name__)

SIDECAR_SUFFIX = '.basis.json'
"""Appended to a coefficient file name to name the file describing its basis"""


_staged = ContextVar('folr_staged_writes', default=None)


@contextmanager
def atomic_write(path, mode: str = 'w'):
    """
    Write to a temporary file next to ``path`` and rename it over ``path`` when the block exits cleanly.

        >>> with atomic_write('out.csv') as fh:
        ...     fh.write('curve_id,label\\n')

    Inside :py:func:`.atomic_writes` the rename is held back until the whole group succeeds.
    """
    path = str(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix='.' + os.path.basename(path) + '.', suffix='.tmp', dir=folder)
    try:
        with os.fdopen(fd, mode, encoding='utf-8', newline='') as fh:
            yield fh
        os.chmod(tmp, 0o644)
        staged = _staged.get()
        if staged is None:
            os.replace(tmp, path)
        else:
            staged.append((tmp, path))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@contextmanager
def atomic_writes():
    """
    Group several writers so that either every file lands or none does. Each writer still goes to its own temporary
    file, the renames only happen once the block exits cleanly:

        >>> with atomic_writes():
        ...     save_model(fit, 'model.json')
        ...     save_beta(grid, beta, 'beta.csv')

    Groups don't nest, an inner group joins the outer one.
    """
    if _staged.get() is not None:
        yield
        return
    staged = []
    token = _staged.set(staged)
    try:
        yield
    except BaseException:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise
    finally:
        _staged.reset(token)
    for tmp, path in staged:
        os.replace(tmp, path)
    log.debug('Committed %d files', len(staged))


def render_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator='\n')


def write_csv(frame: pd.DataFrame, path):
    with atomic_write(path) as fh:
        fh.write(render_csv(frame))
    log.debug('Wrote %d rows to %s', len(frame), path)


def render_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + '\n'


def save_basis(basis: BaseBasis, path):
    with atomic_write(path) as fh:
        fh.write(render_json(basis.to_dict()))


def save_curves(curves: Sequence[RawCurve], path):
    """Long format ``curve_id,t,value``"""
    frame = pd.DataFrame({
        'curve_id': [c.curve_id for c in curves for _ in c.times],
        't': np.concatenate([c.times for c in curves]) if curves else [],
        'value': np.concatenate([c.values for c in curves]) if curves else [],
    }, columns=['curve_id', 't', 'value'])
    write_csv(frame, path)


def save_labels(ids: Sequence[str], labels, path):
    write_csv(pd.DataFrame({'curve_id': list(ids), 'label': np.asarray(labels, dtype=int)}), path)


def save_coefficients(samples: Sequence[FunctionalSample], path):
    """
    ``curve_id,c1..cM`` plus the ``<path>.basis.json`` sidecar. All samples must share one basis.

    :raises DimensionError: Mixed bases
    """
    if not samples:
        raise DimensionError('No samples to save')
    basis = samples[0].basis
    if any(not s.basis.same_as(basis) for s in samples):
        raise DimensionError('Samples expanded in different bases cannot share one coefficient file')
    a = np.vstack([s.coefficients for s in samples])
    frame = pd.DataFrame(a, columns=[f'c{i}' for i in range(1, basis.size + 1)])
    frame.insert(0, 'curve_id', [s.curve_id if s.curve_id is not None else str(i) for i, s in enumerate(samples)])
    write_csv(frame, path)
    save_basis(basis, str(path) + SIDECAR_SUFFIX)


def save_predictions(ids: Sequence[str], predictions: Sequence[Prediction], path, with_probs: bool = False):
    """``curve_id,predicted_class`` and, with ``with_probs``, the class probabilities ``p1..pK``"""
    frame = pd.DataFrame({'curve_id': list(ids), 'predicted_class': [p.label for p in predictions]})
    if with_probs and predictions:
        probs = np.vstack([p.distribution.probs for p in predictions])
        for j in range(probs.shape[1]):
            frame[f'p{j + 1}'] = probs[:, j]
    write_csv(frame, path)


def save_scores(ids: Sequence[str], scores, path):
    write_csv(pd.DataFrame({'curve_id': list(ids), 'score': np.asarray(scores, dtype=float)}), path)


def save_beta(t_grid, beta, path):
    write_csv(pd.DataFrame({'t': np.asarray(t_grid, dtype=float), 'beta': np.asarray(beta, dtype=float)}), path)


def save_report(report: CvReport, path):
    """``fold,mae,accuracy_error``, folds numbered from 1"""
    write_csv(pd.DataFrame({
        'fold': [f.fold + 1 for f in report.per_fold],
        'mae': [f.mae for f in report.per_fold],
        'accuracy_error': [f.accuracy_error for f in report.per_fold],
    }), path)


def summary_frame(reports: Iterable[CvReport]) -> pd.DataFrame:
    reports = list(reports)
    return pd.DataFrame({
        'arm': [r.arm for r in reports],
        'mean_mae': [r.mean_mae for r in reports],
        'mean_error_rate': [r.mean_accuracy_error for r in reports],
    }, columns=['arm', 'mean_mae', 'mean_error_rate'])


def save_summary(reports: Iterable[CvReport], path):
    """One row per arm: ``arm,mean_mae,mean_error_rate``"""
    write_csv(summary_frame(reports), path)


def save_class_means(means: Dict[int, FunctionalSample], t_grid, path):
    """Class mean curves on ``t_grid`` as ``t,class_1..class_K``"""
    t_grid = np.asarray(t_grid, dtype=float)
    frame = pd.DataFrame({'t': t_grid})
    for j in sorted(means):
        s = means[j]
        frame[f'class_{j}'] = s.basis.evaluate(t_grid) @ s.coefficients
    write_csv(frame, path)
