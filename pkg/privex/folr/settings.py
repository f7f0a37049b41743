"""
Package level settings, consulted by every :class:`.SettingsMixin` after the ``FOLR_*`` environment variables.

It's recommended to use :py:func:`privex.folr.configure` instead of manipulating this by hand:

    >>> import privex.folr as folr
    >>> folr.configure(max_iters=2000, grad_tol=1e-8)

"""
from typing import Any, Dict

FOLR_SETTINGS = {
    'max_iters': None,
    'grad_tol': None,
}   # type: Dict[str, Any]
"""
Settings passed to estimators and evaluation arms. ``None`` means "use the class default".

Known keys: ``lasso_lambda``, ``max_iters``, ``grad_tol``, ``step_init``, ``threshold_init_spread``, ``seed``,
``standardize``, ``init``, ``cv_seed``, ``lambda_grid_size``, ``lambda_ratio``, ``lambda_rule``, ``inner_folds``,
``jobs``.
"""


def configure(**config_opts) -> Dict[str, Any]:
    """
    Set package-wide settings - only overwrites the specific keys passed, so can be called multiple times.

        >>> configure(max_iters=500)
        >>> configure(standardize=True)

    :return dict settings: The current settings
    """
    FOLR_SETTINGS.update(config_opts)
    return FOLR_SETTINGS


def reset_settings():
    """Reset every setting back to its class default"""
    for k in list(FOLR_SETTINGS.keys()):
        FOLR_SETTINGS[k] = None
