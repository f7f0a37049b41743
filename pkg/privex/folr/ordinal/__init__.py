"""
The cumulative logit ordinal model: class probabilities, likelihood, gradient and decision rules.
"""
from privex.folr.ordinal.model import (
    PROB_FLOOR, check_labels, class_probs, cumulative_probs, linear_predictor, linear_predictors,
    logistic_density, neg_log_likelihood, nll_gradient, nll_value,
)
from privex.folr.ordinal.decision import cost_matrix, expected_cost_oracle, lad_labels, predict_lad, predict_mode
