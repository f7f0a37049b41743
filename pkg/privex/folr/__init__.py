"""
Initialisation module for Privex's Functional Ordinal Regression.

Curves are smoothed into a basis, reduced to ordinary covariates through the Gram matrix between the curve basis and
the basis of the coefficient function beta(t), and fed to a cumulative logit model:

    >>> from privex.folr import get_basis, smooth, reduce, fit_mle, predict
    >>> curve_basis = get_basis('bspline', size=16, order=4, domain_end=480.0)
    >>> beta_basis = get_basis('monomial', size=2, domain_end=480.0)
    >>> samples = [smooth(c, curve_basis) for c in curves]
    >>> fit = fit_mle(reduce(samples, beta_basis), labels)
    >>> predict(fit, samples[0], 'lad').label
    2

Fitting knobs can be set package-wide, they're also read from ``FOLR_<KEY>`` environment variables:

    >>> import privex.folr as folr
    >>> folr.configure(max_iters=2000, standardize=True)


**Copyright**::

    +===================================================+
    |                 © 2019 Privex Inc.                |
    |               https://www.privex.io               |
    +===================================================+
    |                                                   |
    |        Python Functional Ordinal Regression       |
    |        License: X11/MIT                           |
    |                                                   |
    +===================================================+

"""
import logging
import sys

from privex.folr.version import VERSION
from privex.folr.settings import FOLR_SETTINGS, configure, reset_settings
from privex.folr.base import *
from privex.folr.basis import (
    BASIS_HANDLERS, eval_basis, evaluate_sample, get_basis, gram, penalty_matrix, smooth, smooth_curve, smooth_many,
)
from privex.folr.ordinal import (
    class_probs, cost_matrix, cumulative_probs, expected_cost_oracle, linear_predictor, linear_predictors,
    neg_log_likelihood, nll_gradient, predict_lad, predict_mode,
)
from privex.folr.estimators import (
    ESTIMATORS, fit_lasso, fit_mle, get_estimator, lambda_max, lasso_path, linear_scores, predict, predict_many,
    reconstruct_beta, reduce, standard_errors,
)
from privex.folr.evaluation import (
    ARMS, class_mean_curves, compare, get_arm, kfold, last_value_baseline, preset, simulate, simulate_design,
)
from privex.folr.persist import (
    load_coefficients, load_curves, load_labels, load_model, load_synthetic_spec, save_coefficients, save_model,
)

name = 'folr'

# If the privex.folr logger has no handlers, assume it hasn't been configured and set up a console logger
# for any logs >=WARNING
log = _l = logging.getLogger(__name__)
if len(_l.handlers) == 0:
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter('%(asctime)s %(name)-12s %(levelname)-8s %(message)s'))
    _handler.setLevel(logging.WARNING)
    _l.setLevel(logging.WARNING)
    _l.addHandler(_handler)
