from privex.folr.base.BaseEstimator import BaseEstimator
from privex.folr.base.exceptions import ValidationError
from privex.folr.base.objects import FitConfig


class MLEstimator(BaseEstimator):
    """
    Unpenalised maximum likelihood: gradient descent with Armijo backtracking on the reparameterised NLL.

    The ``lasso_lambda`` setting is ignored by :meth:`.make_config`, an explicit config with a penalty is rejected.
    """
    fit_kind = 'mle'

    def make_config(self, **overrides) -> FitConfig:
        overrides['lasso_lambda'] = 0.0
        return super().make_config(**overrides)

    def penalty_weight(self, cfg: FitConfig) -> float:
        return 0.0

    def check_config(self, cfg: FitConfig):
        if cfg.lasso_lambda != 0:
            raise ValidationError(f'The maximum likelihood fit takes no penalty, got lasso_lambda={cfg.lasso_lambda}')
