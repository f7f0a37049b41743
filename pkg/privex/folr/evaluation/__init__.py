"""
Synthetic data, evaluation arms and cross-validation.

Arms are looked up by name through :py:attr:`.ARMS`:

    >>> from privex.folr.evaluation import get_arm, compare
    >>> arms = [get_arm('last-value'), get_arm('folr', beta_basis=b10), get_arm('folr-lasso', beta_basis=b10)]
    >>> reports = compare(dataset, arms, k=10, rule='lad', seed=0)

"""
import logging
from typing import Dict, Type

from privex.folr.base.BaseArm import BaseArm
from privex.folr.base.exceptions import ComponentNotFound
from privex.folr.evaluation.FolrArm import FolrArm
from privex.folr.evaluation.LassoFolrArm import LassoFolrArm
from privex.folr.evaluation.LastValueArm import LastValueArm
from privex.folr.evaluation.crossval import compare, fold_metrics, kfold, stratified_folds
from privex.folr.evaluation.features import class_mean_curves, last_value_baseline
from privex.folr.evaluation.simulation import PRESETS, greville, preset, simulate, simulate_design

log = logging.getLogger(__name__)

ARMS = {
    LastValueArm.name: LastValueArm,
    FolrArm.name: FolrArm,
    LassoFolrArm.name: LassoFolrArm,
}   # type: Dict[str, Type[BaseArm]]
"""Maps an arm name to its class, in the order they are reported"""


def get_arm(name: str, **kwargs) -> BaseArm:
    """
    Construct the arm registered as ``name``. The FOLR arms take ``beta_basis=...``, every arm takes ``settings=...``
    and ``overrides=...``.

    :raises ComponentNotFound: Unknown arm
    """
    name = str(name).lower()
    if name not in ARMS:
        raise ComponentNotFound(f"The evaluation arm '{name}' does not exist. Known arms: {list(ARMS)}")
    if name == LastValueArm.name:
        kwargs.pop('beta_basis', None)
    return ARMS[name](**kwargs)
