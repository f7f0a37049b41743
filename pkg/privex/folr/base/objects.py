"""
Plain data objects shared by every FOLR module.

All objects are ``attrs`` classes. Numerical fields are converted to read-only numpy arrays on construction, and the
class invariants are checked by ``attrs`` validators, so an object which exists is an object which is valid.

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
from typing import List, Optional, Sequence

import attr
import numpy as np

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.exceptions import DimensionError, ValidationError

log = logging.getLogger(__name__)


def frozen_vector(v) -> np.ndarray:
    """Convert ``v`` into a read-only 1-D float array"""
    a = np.array(v, dtype=float).reshape(-1)
    a.setflags(write=False)
    return a


def frozen_matrix(v) -> np.ndarray:
    """Convert ``v`` into a read-only 2-D float array"""
    a = np.array(v, dtype=float)
    if a.ndim != 2:
        raise DimensionError(f'Expected a 2-D matrix, got an array with shape {a.shape}')
    a.setflags(write=False)
    return a


def frozen_labels(v) -> np.ndarray:
    a = np.array(v, dtype=int).reshape(-1)
    a.setflags(write=False)
    return a


def _finite(instance, attribute, value):
    if not np.all(np.isfinite(value)):
        raise ValidationError(f'{type(instance).__name__}.{attribute.name} must only contain finite values')


@attr.s
class AttribDictable:
    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    def __iter__(self):
        """Handle casting via ``dict(myclass)``"""
        for k, v in attr.asdict(self, recurse=False).items():
            yield k, v

    def __getitem__(self, key):
        """
        When the instance is accessed like a dict, try returning the matching attribute.
        """
        if hasattr(self, key):
            return getattr(self, key)
        raise KeyError(key)


@attr.s(frozen=True, eq=False)
class RawCurve(AttribDictable):
    """
    A discretely observed curve.

    :ivar str curve_id:      Identifier used to join the curve with its label
    :ivar np.ndarray times:  Strictly increasing observation times
    :ivar np.ndarray values: Observed values, same length as ``times``
    """
    curve_id = attr.ib(type=str, converter=str)
    times = attr.ib(type=np.ndarray, converter=frozen_vector, validator=_finite)
    values = attr.ib(type=np.ndarray, converter=frozen_vector, validator=_finite)

    @times.validator
    def _check_times(self, attribute, value):
        if len(value) < 2:
            raise ValidationError(f'Curve {self.curve_id} needs at least 2 observations, got {len(value)}')
        if np.any(np.diff(value) <= 0):
            raise ValidationError(f'Curve {self.curve_id}: times must be strictly increasing')

    @values.validator
    def _check_values(self, attribute, value):
        if len(value) != len(self.times):
            raise DimensionError(
                f'Curve {self.curve_id}: {len(self.times)} times but {len(value)} values'
            )

    def __len__(self):
        return len(self.times)


@attr.s(frozen=True, eq=False)
class FunctionalSample(AttribDictable):
    """
    The coefficient vector ``a`` of a curve ``X(t) = sum_r a_r psi_r(t)`` in a given basis.

    :ivar np.ndarray coefficients: Coefficient vector, one entry per basis function
    :ivar BaseBasis basis:         The basis the coefficients refer to
    :ivar str curve_id:            Optional identifier of the curve the sample was smoothed from
    """
    coefficients = attr.ib(type=np.ndarray, converter=frozen_vector, validator=_finite)
    basis = attr.ib(type=BaseBasis, validator=attr.validators.instance_of(BaseBasis))
    curve_id = attr.ib(default=None, type=Optional[str])

    @basis.validator
    def _check_size(self, attribute, value):
        if len(self.coefficients) != value.size:
            raise DimensionError(
                f'{len(self.coefficients)} coefficients given for a basis of size {value.size}'
            )


@attr.s(frozen=True, eq=False)
class GramMatrix(AttribDictable):
    """``entries[i, j]`` holds the L2 inner product of ``row_basis[i]`` and ``col_basis[j]``"""
    entries = attr.ib(type=np.ndarray, converter=frozen_matrix)
    row_basis = attr.ib(type=BaseBasis)
    col_basis = attr.ib(type=BaseBasis)

    @entries.validator
    def _check_shape(self, attribute, value):
        if value.shape != (self.row_basis.size, self.col_basis.size):
            raise DimensionError(
                f'Gram matrix shape {value.shape} does not match bases '
                f'({self.row_basis.size}, {self.col_basis.size})'
            )


@attr.s(frozen=True, eq=False)
class Thresholds(AttribDictable):
    """
    Ordered cut points ``tau_1 < ... < tau_{K-1}`` of the latent variable. ``tau_0 = -inf`` and ``tau_K = +inf`` are
    implied and never stored.
    """
    tau = attr.ib(type=np.ndarray, converter=frozen_vector, validator=_finite)

    @tau.validator
    def _check_order(self, attribute, value):
        if len(value) < 1:
            raise ValidationError('At least one threshold is required (K >= 2)')
        if np.any(np.diff(value) <= 0):
            raise ValidationError(f'thresholds not increasing: {list(value)}')

    @property
    def n_classes(self) -> int:
        """K, the number of ordered classes"""
        return len(self.tau) + 1


@attr.s(frozen=True, eq=False)
class OrdinalModel(AttribDictable):
    """
    Cumulative logit model ``logit P(Y <= j) = tau_j - <x, b>``.

    ``coefficients`` may be empty, giving a thresholds-only model.
    """
    thresholds = attr.ib(type=Thresholds, validator=attr.validators.instance_of(Thresholds))
    coefficients = attr.ib(type=np.ndarray, factory=lambda: frozen_vector([]), converter=frozen_vector,
                           validator=_finite)

    @classmethod
    def build(cls, tau: Sequence[float], b: Sequence[float] = ()) -> 'OrdinalModel':
        return cls(thresholds=Thresholds(tau), coefficients=b)

    @property
    def tau(self) -> np.ndarray:
        return self.thresholds.tau

    @property
    def n_classes(self) -> int:
        return self.thresholds.n_classes

    @property
    def n_covariates(self) -> int:
        return len(self.coefficients)


@attr.s(frozen=True, eq=False)
class ClassDistribution(AttribDictable):
    """Probabilities ``pi_1..pi_K`` of the K ordered classes"""
    probs = attr.ib(type=np.ndarray, converter=frozen_vector, validator=_finite)

    @probs.validator
    def _check_probs(self, attribute, value):
        if len(value) < 2:
            raise ValidationError('A class distribution needs at least 2 classes')
        if np.any(value < 0) or np.any(value > 1):
            raise ValidationError(f'class probabilities must lie in [0, 1]: {list(value)}')
        if abs(float(np.sum(value)) - 1.0) > 1e-10:
            raise ValidationError(f'class probabilities must sum to 1, got {float(np.sum(value))!r}')

    @property
    def n_classes(self) -> int:
        return len(self.probs)


ZERO_ONE = 'zero_one'
ABSOLUTE_DIFFERENCE = 'absolute_difference'
CUSTOM = 'custom'


@attr.s(frozen=True, eq=False)
class CostFunction(AttribDictable):
    """
    Cost ``C(y_hat, y)`` of predicting ``y_hat`` when the truth is ``y``.

        >>> CostFunction.zero_one().matrix(3)
        array([[0., 1., 1.],
               [1., 0., 1.],
               [1., 1., 0.]])

    :ivar str kind:            One of ``zero_one``, ``absolute_difference``, ``custom``
    :ivar np.ndarray custom:   The K x K cost matrix when ``kind`` is ``custom``
    """
    kind = attr.ib(type=str, validator=attr.validators.in_([ZERO_ONE, ABSOLUTE_DIFFERENCE, CUSTOM]))
    custom = attr.ib(default=None, type=Optional[np.ndarray])

    @custom.validator
    def _check_custom(self, attribute, value):
        if self.kind != CUSTOM:
            return
        if value is None:
            raise ValidationError('A custom cost function needs a cost matrix')
        m = np.asarray(value, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f'Cost matrix must be square, got shape {m.shape}')
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise ValidationError('Cost matrix entries must be finite and nonnegative')
        if np.any(np.diag(m) != 0):
            raise ValidationError('Cost matrix must have a zero diagonal')

    @classmethod
    def zero_one(cls) -> 'CostFunction':
        return cls(kind=ZERO_ONE)

    @classmethod
    def absolute_difference(cls) -> 'CostFunction':
        return cls(kind=ABSOLUTE_DIFFERENCE)

    @classmethod
    def from_matrix(cls, matrix) -> 'CostFunction':
        return cls(kind=CUSTOM, custom=frozen_matrix(matrix))

    def matrix(self, n_classes: int) -> np.ndarray:
        """Return the ``n_classes x n_classes`` cost matrix, rows indexed by the prediction"""
        if self.kind == ZERO_ONE:
            return 1.0 - np.eye(n_classes)
        if self.kind == ABSOLUTE_DIFFERENCE:
            k = np.arange(n_classes)
            return np.abs(k[:, None] - k[None, :]).astype(float)
        if self.custom.shape[0] != n_classes:
            raise DimensionError(f'Cost matrix is {self.custom.shape[0]}x{self.custom.shape[0]}, need K={n_classes}')
        return np.array(self.custom, dtype=float)


def _positive(instance, attribute, value):
    if value <= 0:
        raise ValidationError(f'FitConfig.{attribute.name} must be > 0, got {value!r}')


def _nonnegative(instance, attribute, value):
    if not value >= 0:
        raise ValidationError(f'FitConfig.{attribute.name} must be >= 0, got {value!r}')


@attr.s(frozen=True)
class FitConfig(AttribDictable):
    """
    Optimizer, penalty and tolerance settings for a single fit.

    Usually built through :meth:`.BaseEstimator.make_config` so that environment / package settings are honoured.

    :ivar float lasso_lambda:          LASSO weight; the penalty is ``lasso_lambda * N * ||b||_1``
    :ivar int max_iters:               Iteration cap. Hitting it flags the fit as not converged.
    :ivar float grad_tol:              Stop when the (sub)gradient infinity norm falls below this
    :ivar float step_init:             First trial step of the line search
    :ivar float threshold_init_spread: Spacing of the thresholds for ``init='spread'``
    :ivar int seed:                    Seed recorded with the fit (and used by randomised callers)
    :ivar bool standardize:            Fit on standardised reduced covariates, report ``b`` on the original scale
    :ivar str init:                    ``empirical`` (thresholds-only MLE) or ``spread``
    """
    lasso_lambda = attr.ib(default=0.0, type=float, converter=float, validator=_nonnegative)
    max_iters = attr.ib(default=10000, type=int, converter=int, validator=_positive)
    grad_tol = attr.ib(default=1e-6, type=float, converter=float, validator=_positive)
    step_init = attr.ib(default=1.0, type=float, converter=float, validator=_positive)
    threshold_init_spread = attr.ib(default=1.0, type=float, converter=float, validator=_positive)
    seed = attr.ib(default=0, type=int, converter=int)
    standardize = attr.ib(default=False, type=bool, converter=bool)
    init = attr.ib(default='empirical', type=str, validator=attr.validators.in_(['empirical', 'spread']))


@attr.s(frozen=True, eq=False)
class FitDiagnostics(AttribDictable):
    """
    :ivar float final_nll:      Unpenalised negative log-likelihood at the returned parameters
    :ivar float objective:      Penalised objective (equals ``final_nll`` when lambda = 0)
    :ivar int iterations:       Accepted optimizer iterations
    :ivar bool converged:       True when the stationarity measure fell below ``grad_tol``
    :ivar float gradient_norm:  Final (sub)gradient infinity norm
    :ivar list active_set:      0-based indices of the nonzero coefficients of ``b``
    :ivar list warnings:        Human readable warnings raised during the fit
    """
    final_nll = attr.ib(type=float, converter=float)
    iterations = attr.ib(type=int, converter=int)
    converged = attr.ib(type=bool, converter=bool)
    objective = attr.ib(default=None, type=float)
    gradient_norm = attr.ib(default=0.0, type=float, converter=float)
    active_set = attr.ib(factory=list, type=List[int], converter=lambda v: [int(i) for i in v])
    warnings = attr.ib(factory=list, type=List[str], converter=lambda v: [str(w) for w in v])

    def __attrs_post_init__(self):
        if self.objective is None:
            object.__setattr__(self, 'objective', self.final_nll)


@attr.s(frozen=True, eq=False)
class FittedFolr(AttribDictable):
    """
    A fitted functional ordinal model. ``beta(t) = sum_m b_m phi_m(t)`` with ``b = model.coefficients``.

    :ivar OrdinalModel model:        Thresholds and beta-basis coefficients
    :ivar BaseBasis beta_basis:      Basis of the coefficient function beta
    :ivar BaseBasis curve_basis:     Basis the covariate curves are expanded in
    :ivar FitDiagnostics diagnostics: Optimizer report
    :ivar str fit_kind:              ``mle`` or ``lasso``
    :ivar float lasso_lambda:        Penalty weight used (0 for ``mle``)
    :ivar int seed:                  Seed recorded in the configuration
    """
    model = attr.ib(type=OrdinalModel, validator=attr.validators.instance_of(OrdinalModel))
    beta_basis = attr.ib(type=Optional[BaseBasis], validator=attr.validators.optional(
        attr.validators.instance_of(BaseBasis)
    ))
    curve_basis = attr.ib(type=BaseBasis, validator=attr.validators.instance_of(BaseBasis))
    diagnostics = attr.ib(type=FitDiagnostics)
    fit_kind = attr.ib(default='mle', type=str)
    lasso_lambda = attr.ib(default=0.0, type=float, converter=float)
    seed = attr.ib(default=0, type=int, converter=int)

    @beta_basis.validator
    def _check_dims(self, attribute, value):
        # A thresholds-only model has no beta basis at all.
        size = 0 if value is None else value.size
        if size != self.model.n_covariates:
            raise DimensionError(
                f'Model has {self.model.n_covariates} coefficients but the beta basis has {size} functions'
            )

    @property
    def active_set(self) -> List[int]:
        return [int(i) for i in np.flatnonzero(self.model.coefficients)]


@attr.s(frozen=True, eq=False)
class ReducedDesign(AttribDictable):
    """
    The functional design reduced to M ordinary covariates: row ``i`` of ``xt`` is ``a_i' R``.

    ``beta_basis`` and ``gram`` are ``None`` for a thresholds-only design (M = 0).
    """
    xt = attr.ib(type=np.ndarray, converter=frozen_matrix)
    curve_basis = attr.ib(type=BaseBasis)
    beta_basis = attr.ib(default=None, type=Optional[BaseBasis])
    gram = attr.ib(default=None, type=Optional[GramMatrix])

    @xt.validator
    def _check_cols(self, attribute, value):
        size = 0 if self.beta_basis is None else self.beta_basis.size
        if value.shape[1] != size:
            raise DimensionError(f'Reduced design has {value.shape[1]} columns, beta basis has {size}')

    @property
    def n_samples(self) -> int:
        return self.xt.shape[0]

    def subset(self, rows) -> 'ReducedDesign':
        return attr.evolve(self, xt=self.xt[np.asarray(rows)])


@attr.s(frozen=True, eq=False)
class SmoothingResult(AttribDictable):
    """Output of penalised least squares smoothing of one :class:`.RawCurve`"""
    sample = attr.ib(type=FunctionalSample)
    residual_rms = attr.ib(type=float, converter=float)
    jitter = attr.ib(default=0.0, type=float, converter=float)


@attr.s(frozen=True, eq=False)
class Prediction(AttribDictable):
    """
    A predicted class with its linear score ``g = <X, beta>``.

    The class distribution is only computed when :attr:`.distribution` is first accessed, which keeps the LAD rule
    free of any probability evaluation.
    """
    label = attr.ib(type=int, converter=int)
    score = attr.ib(type=float, converter=float)
    model = attr.ib(type=OrdinalModel, repr=False)
    _dist = attr.ib(default=None, repr=False)

    @property
    def distribution(self) -> ClassDistribution:
        if self._dist is None:
            from privex.folr.ordinal.model import class_probs
            object.__setattr__(self, '_dist', class_probs(self.model, self.score))
        return self._dist


@attr.s(frozen=True, eq=False)
class Dataset(AttribDictable):
    """
    Labelled observations for model evaluation. ``samples`` (smoothed coefficients) and ``curves`` (raw curves) are
    both optional, different evaluation arms consume different representations.
    """
    ids = attr.ib(type=list, converter=lambda v: [str(i) for i in v])
    labels = attr.ib(type=np.ndarray, converter=frozen_labels)
    samples = attr.ib(default=None, type=Optional[List[FunctionalSample]])
    curves = attr.ib(default=None, type=Optional[List[RawCurve]])
    n_classes = attr.ib(default=None, type=Optional[int])

    def __attrs_post_init__(self):
        n = len(self.ids)
        if len(self.labels) != n:
            raise DimensionError(f'{n} ids but {len(self.labels)} labels')
        for name in ('samples', 'curves'):
            v = getattr(self, name)
            if v is not None and len(v) != n:
                raise DimensionError(f'{n} ids but {len(v)} {name}')
        if self.n_classes is None:
            object.__setattr__(self, 'n_classes', int(self.labels.max()) if n else 0)

    def __len__(self):
        return len(self.ids)

    def subset(self, rows) -> 'Dataset':
        rows = [int(r) for r in rows]
        return Dataset(
            ids=[self.ids[r] for r in rows],
            labels=self.labels[rows],
            samples=None if self.samples is None else [self.samples[r] for r in rows],
            curves=None if self.curves is None else [self.curves[r] for r in rows],
            n_classes=self.n_classes,
        )


@attr.s(frozen=True, eq=False)
class SyntheticSpec(AttribDictable):
    """
    Recipe for a synthetic functional ordinal dataset.

    :ivar int n_curves:              Number of curves to draw
    :ivar FunctionalSample true_beta: beta in its own basis
    :ivar Thresholds true_tau:       True thresholds; K = len(tau) + 1
    :ivar BaseBasis curve_basis:     Basis the curve coefficients are drawn in
    :ivar np.ndarray sampling_times: Observation grid of the raw curves
    :ivar str generator:             ``random`` (iid normal coefficients) or ``class_means``
    :ivar np.ndarray coef_mean:      Mean coefficient vector (``random``), defaults to zero
    :ivar float coef_sd:             Coefficient standard deviation
    :ivar np.ndarray coef_scale:     Per coefficient multiplier of ``coef_sd`` (optional), e.g. curves that spread out
                                     over time
    :ivar np.ndarray class_means:    One mean coefficient row per nominal class (``class_means``)
    :ivar float noise_sd:            Observation noise added to the sampled curves
    :ivar int seed:                  Seed of the generator
    """
    n_curves = attr.ib(type=int, converter=int)
    true_beta = attr.ib(type=FunctionalSample)
    true_tau = attr.ib(type=Thresholds)
    curve_basis = attr.ib(type=BaseBasis)
    sampling_times = attr.ib(type=np.ndarray, converter=frozen_vector)
    generator = attr.ib(default='random', type=str, validator=attr.validators.in_(['random', 'class_means']))
    coef_mean = attr.ib(default=None, type=Optional[np.ndarray])
    coef_sd = attr.ib(default=1.0, type=float, converter=float)
    coef_scale = attr.ib(default=None, type=Optional[np.ndarray])
    class_means = attr.ib(default=None, type=Optional[np.ndarray])
    noise_sd = attr.ib(default=0.0, type=float, converter=float, validator=_nonnegative)
    seed = attr.ib(default=0, type=int, converter=int)

    def __attrs_post_init__(self):
        if self.n_curves < 1:
            raise ValidationError('n_curves must be >= 1')
        if self.generator == 'class_means':
            if self.class_means is None:
                raise ValidationError("generator 'class_means' needs class_means")
            cm = frozen_matrix(self.class_means)
            if cm.shape[1] != self.curve_basis.size:
                raise DimensionError(f'class_means has {cm.shape[1]} columns, curve basis has {self.curve_basis.size}')
            object.__setattr__(self, 'class_means', cm)
        if self.coef_mean is not None:
            cm = frozen_vector(self.coef_mean)
            if len(cm) != self.curve_basis.size:
                raise DimensionError(f'coef_mean has {len(cm)} entries, curve basis has {self.curve_basis.size}')
            object.__setattr__(self, 'coef_mean', cm)
        if self.coef_scale is not None:
            cs = frozen_vector(self.coef_scale)
            if len(cs) != self.curve_basis.size:
                raise DimensionError(f'coef_scale has {len(cs)} entries, curve basis has {self.curve_basis.size}')
            if np.any(cs < 0):
                raise ValidationError('coef_scale entries must be >= 0')
            object.__setattr__(self, 'coef_scale', cs)
        lo, hi = self.curve_basis.domain
        if np.any(self.sampling_times < lo) or np.any(self.sampling_times > hi):
            raise ValidationError('sampling_times must lie inside the curve basis domain')
        if self.curve_basis.domain != self.true_beta.basis.domain:
            raise ValidationError('curve basis and beta basis must share one domain')

    @property
    def n_classes(self) -> int:
        return self.true_tau.n_classes


@attr.s(frozen=True, eq=False)
class FoldResult(AttribDictable):
    fold = attr.ib(type=int, converter=int)
    mae = attr.ib(type=float, converter=float)
    accuracy_error = attr.ib(type=float, converter=float)
    n_test = attr.ib(default=0, type=int, converter=int)


@attr.s(frozen=True, eq=False)
class CvReport(AttribDictable):
    """
    Cross-validation result for one arm. ``mean_mae`` and ``mean_accuracy_error`` are the arithmetic means over folds.
    """
    per_fold = attr.ib(type=list)
    arm = attr.ib(default='', type=str)
    rule = attr.ib(default='lad', type=str)

    @property
    def n_folds(self) -> int:
        return len(self.per_fold)

    @property
    def mean_mae(self) -> float:
        return float(np.mean([f.mae for f in self.per_fold]))

    @property
    def mean_accuracy_error(self) -> float:
        return float(np.mean([f.accuracy_error for f in self.per_fold]))


@attr.s(frozen=True, eq=False)
class StandardErrors(AttribDictable):
    """Asymptotic standard errors of the thresholds and the beta-basis coefficients, with their covariance"""
    tau = attr.ib(type=np.ndarray, converter=frozen_vector)
    coefficients = attr.ib(type=np.ndarray, converter=frozen_vector)
    covariance = attr.ib(type=np.ndarray, converter=frozen_matrix, repr=False)
