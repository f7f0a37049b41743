"""
Readers for the CSV inputs: raw curves (``curve_id,t,value``), labels (``curve_id,label``) and smoothed
coefficients (``curve_id,c1..cM`` plus a ``<file>.basis.json`` sidecar describing the basis).
"""
import json
import logging
from collections import OrderedDict
from typing import Dict, Generator, List, Sequence, Tuple

import numpy as np
import pandas as pd

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.BaseLoader import BaseLoader
from privex.folr.base.exceptions import FormatError, JoinError, ParseError
from privex.folr.base.objects import FunctionalSample, RawCurve
from privex.folr.basis import basis_from_dict
from privex.folr.ordinal.model import check_labels
from privex.folr.persist.writers import SIDECAR_SUFFIX

log = logging.getLogger(__name__)


class CurveLoader(BaseLoader):
    """Long format curves, one row per observation. Rows of a curve may come in any order."""
    columns = ['curve_id', 't', 'value']

    def clean_rows(self) -> Generator[RawCurve, None, None]:
        if self.frame is None:
            self.load()
        df = pd.DataFrame({
            'curve_id': self.column('curve_id', str), 't': self.column('t'), 'value': self.column('value'),
        })
        dup = df.duplicated(['curve_id', 't'], keep='first')
        if dup.any():
            i = int(np.flatnonzero(dup.values)[0])
            raise FormatError(
                f'{self.path}: duplicate observation of curve {df.curve_id.iat[i]!r} at t={df.t.iat[i]!r}',
                line=i + 2,
            )
        for cid, rows in df.groupby('curve_id', sort=False):
            rows = rows.sort_values('t', kind='mergesort')
            yield RawCurve(curve_id=cid, times=rows.t.values, values=rows.value.values)


class LabelLoader(BaseLoader):
    """``curve_id,label`` with 1-based labels"""
    columns = ['curve_id', 'label']

    def clean_rows(self) -> Generator[Tuple[str, int], None, None]:
        if self.frame is None:
            self.load()
        seen = set()
        for i, (cid, label) in enumerate(zip(self.column('curve_id', str), self.column('label', int))):
            if cid in seen:
                raise FormatError(f'{self.path}: curve {cid!r} is labelled twice', line=i + 2, field='curve_id')
            seen.add(cid)
            yield cid, label


class CoefficientLoader(BaseLoader):
    """``curve_id,c1..cM``, the basis being read from the sidecar file unless given"""

    def __init__(self, path, basis: BaseBasis = None, *args, **kwargs):
        super().__init__(path, *args, **kwargs)
        self.basis = basis

    def check_header(self, header: List[str]):
        expected = ['curve_id'] + [f'c{i}' for i in range(1, len(header))]
        if len(header) < 2 or header != expected:
            raise FormatError(f'{self.path}: expected header curve_id,c1..cM, got {",".join(header)}', line=1)
        self.columns = header

    def clean_rows(self) -> Generator[FunctionalSample, None, None]:
        if self.frame is None:
            self.load()
        basis = load_basis(self.path + SIDECAR_SUFFIX) if self.basis is None else self.basis
        ids = self.column('curve_id', str)
        coefs = np.column_stack([self.column(c) for c in self.columns[1:]])
        for cid, a in zip(ids, coefs):
            yield FunctionalSample(coefficients=a, basis=basis, curve_id=cid)


def load_basis(path) -> BaseBasis:
    """
    Read a basis description written by :py:func:`privex.folr.persist.save_basis`.

    :raises ParseError: Missing file, invalid JSON or an incomplete description
    """
    try:
        with open(str(path), 'r', encoding='utf-8') as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ParseError(f'Basis description {path} does not exist')
    except json.JSONDecodeError as e:
        raise ParseError(f'{path}: invalid JSON ({e.msg})', line=e.lineno)
    return basis_from_dict(data)


def load_curves(path) -> List[RawCurve]:
    """
    Read raw curves, grouped by ``curve_id`` in order of first appearance, each sorted by time.

    :raises FormatError: Bad header, or a duplicated ``(curve_id, t)`` row
    :raises ParseError:  A non numeric time or value
    """
    with CurveLoader(path) as loader:
        return list(loader.clean_rows())


def load_labels(path, n_classes: int = None) -> Dict[str, int]:
    """
    Read labels as an ordered ``{curve_id: label}`` dict.

    :param int n_classes: Declared K; labels must lie in ``1..K``. Defaults to the largest label (still >= 1).
    :raises RangeError:   A label outside of ``1..K``
    """
    with LabelLoader(path) as loader:
        labels = OrderedDict(loader.clean_rows())
    values = list(labels.values())
    if values:
        k = int(n_classes) if n_classes else max(max(values), 1)
        check_labels(values, k)
    return labels


def load_coefficients(path, basis: BaseBasis = None) -> List[FunctionalSample]:
    """Read smoothed samples, see :class:`.CoefficientLoader`"""
    with CoefficientLoader(path, basis=basis) as loader:
        return list(loader.clean_rows())


def join(items: Sequence, labels: Dict[str, int]) -> Tuple[list, np.ndarray]:
    """
    Pair every curve (or sample) with its label, in the order of ``items``.

    :raises JoinError: Some curves have no label or some labels have no curve; all offenders are listed
    """
    ids = [c.curve_id for c in items]
    unlabelled = [i for i in ids if i not in labels]
    known = set(ids)
    orphans = [i for i in labels if i not in known]
    if unlabelled or orphans:
        raise JoinError(
            f'{len(unlabelled)} curves without a label, {len(orphans)} labels without a curve',
            offenders=[f'unlabelled:{i}' for i in unlabelled] + [f'no curve:{i}' for i in orphans],
        )
    return list(items), np.array([labels[i] for i in ids], dtype=int)
