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
import logging
from os import getenv as env
from typing import Any, Dict, Optional

from privex.helpers import empty, is_true

from privex.folr.base.exceptions import UsageError

log = logging.getLogger(__name__)


class SettingsMixin:
    """
    SettingsMixin - A mixin used by estimators and evaluation arms for easy access to environment / package settings,
    with handling of default settings.

    A setting ``key`` is resolved in this order:

    1. The ``overrides`` dict passed to the constructor (explicit choices, e.g. command line flags)
    2. An environment variable ``FOLR_<KEY>`` (e.g. ``FOLR_MAX_ITERS=500``)
    3. The ``settings`` dict passed to the constructor (normally :py:attr:`privex.folr.FOLR_SETTINGS`)
    4. :py:attr:`.setting_defaults` on the class

    Values are then cast to their proper python types by :meth:`._cast_settings`.
    """

    env_prefix = 'FOLR_'

    setting_defaults = dict(
        lasso_lambda=0.0, max_iters=10000, grad_tol=1e-6, step_init=1.0, threshold_init_spread=1.0,
        seed=0, standardize=False, init='empirical',
    )   # type: Dict[str, Any]
    """If a setting isn't specified anywhere else, use this dict for defaults"""

    setting_casts = dict(
        lasso_lambda=float, max_iters=int, grad_tol=float, step_init=float, threshold_init_spread=float,
        seed=int, standardize=is_true, init=str,
        cv_seed=int, lambda_grid_size=int, lambda_ratio=float, inner_folds=int, jobs=int, lambda_rule=str,
    )

    allsettings: Dict[str, Any]
    overrides: Dict[str, Any]

    def __init__(self, *args, settings: Optional[Dict[str, Any]] = None, overrides: Optional[Dict[str, Any]] = None,
                 **kwargs):
        self.allsettings = {} if not settings else settings
        self.overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        super().__init__(*args, **kwargs)

    def get_setting(self, key: str, default=None):
        if key in self.overrides:
            return self.overrides[key]

        # Then, environment variable settings take precedence if they exist.
        _env = env(f'{self.env_prefix}{key.upper()}')
        if not empty(_env):
            return _env

        # Next, check the settings dictionary that was passed to the constructor
        if key in self.allsettings and self.allsettings[key] is not None:
            return self.allsettings[key]

        # Otherwise, fall back to the class defaults, then the ``default``.
        return self.setting_defaults.get(key, default)

    @property
    def settings(self) -> Dict[str, Any]:
        """All known settings, resolved and cast"""
        keys = set(self.setting_defaults.keys()) | set(self.allsettings.keys()) | set(self.overrides.keys())
        return self._cast_settings({k: self.get_setting(k) for k in keys})

    def _cast_settings(self, s: Dict[str, Any]) -> Dict[str, Any]:
        """
        Cast settings loaded from strings (environment variables) to the appropriate python types.

        The passed dict ``s`` is altered in place and also returned.

        :raises UsageError: When a setting cannot be cast, e.g. ``FOLR_MAX_ITERS=lots``
        """
        for k, cast in self.setting_casts.items():
            if k not in s or s[k] is None:
                continue
            try:
                s[k] = cast(s[k])
            except (TypeError, ValueError):
                raise UsageError(f"Setting '{k}' has invalid value {s[k]!r}")
        return s
