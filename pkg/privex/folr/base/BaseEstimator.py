"""
Abstract base for the cumulative logit estimators, holding everything the unpenalised and the LASSO fits share:
configuration, label checks, the threshold reparameterisation, initialisation, the (proximal) gradient loop with
backtracking, and assembly of :class:`.FittedFolr`.

Sub-classes only decide the penalty weight and validate their configuration.

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
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Tuple

import attr
import numpy as np
from scipy.special import logit

from privex.folr import settings as folr_settings
from privex.folr.base.SettingsMixin import SettingsMixin
from privex.folr.base.exceptions import DimensionError, ValidationError
from privex.folr.base.objects import FitConfig, FitDiagnostics, FittedFolr, OrdinalModel, ReducedDesign
from privex.folr.ordinal.model import check_labels, nll_grad, nll_value

log = logging.getLogger(__name__)

ARMIJO_C = 1e-4
BACKTRACK = 0.5
MAX_BACKTRACKS = 60
SEPARATION_NORM = 1e4


def soft_threshold(v, thresh: float) -> np.ndarray:
    """
    Proximal operator of ``thresh * ||.||_1``, i.e. ``sign(v) * max(|v| - thresh, 0)`` componentwise.

        >>> soft_threshold([3.0, -0.5, -2.0], 1.0)
        array([ 2., -0., -1.])
    """
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)


class Scaler:
    """
    Optional column standardisation of the reduced design. Constant columns are left untouched, and a disabled
    scaler is the identity.
    """
    def __init__(self, xs: np.ndarray, enabled: bool = False):
        m = xs.shape[1]
        self.mean, self.sd = np.zeros(m), np.ones(m)
        if enabled and xs.shape[0] > 0 and m > 0:
            sd = xs.std(axis=0)
            varying = sd > 0
            self.mean[varying] = xs.mean(axis=0)[varying]
            self.sd[varying] = sd[varying]

    def transform(self, xs: np.ndarray) -> np.ndarray:
        return (xs - self.mean) / self.sd

    def restore(self, tau: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Parameters fitted on the standardised design, expressed on the original scale"""
        scaled = b / self.sd
        return tau + float(scaled @ self.mean), scaled

    def to_fit(self, tau: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Inverse of :meth:`.restore`"""
        b = np.asarray(b, dtype=float)
        return np.asarray(tau, dtype=float) - float(b @ self.mean), b * self.sd


class LogitObjective:
    """
    The (penalised) cumulative logit objective in the unconstrained parameterisation
    ``theta = (tau_1, log(tau_2 - tau_1), ..., log(tau_{K-1} - tau_{K-2}), b)``, so any ``theta`` maps to strictly
    ordered thresholds.

    ``penalty`` is the absolute weight on ``||b||_1`` (already multiplied by N).
    """
    def __init__(self, xs: np.ndarray, ys: np.ndarray, n_classes: int, penalty: float = 0.0):
        self.xs, self.ys = xs, ys
        self.n_tau = n_classes - 1
        self.n_obs, self.n_cov = xs.shape
        self.penalty = float(penalty)

    def pack(self, tau, b) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        return np.concatenate([tau[:1], np.log(np.diff(tau)), np.asarray(b, dtype=float)])

    def unpack(self, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        with np.errstate(over='ignore'):
            gaps = np.exp(theta[1:self.n_tau])
        tau = theta[0] + np.concatenate([[0.0], np.cumsum(gaps)])
        return tau, theta[self.n_tau:]

    def nll(self, theta: np.ndarray) -> float:
        tau, b = self.unpack(theta)
        # Gaps that overflow to inf or underflow to 0 leave the feasible set.
        if not np.all(np.isfinite(tau)) or np.any(np.diff(tau) <= 0):
            return float('inf')
        return nll_value(tau, b, self.xs, self.ys)

    def penalty_of(self, theta: np.ndarray) -> float:
        return self.penalty * float(np.sum(np.abs(theta[self.n_tau:]))) if self.penalty else 0.0

    def objective(self, theta: np.ndarray) -> float:
        return self.nll(theta) + self.penalty_of(theta)

    def gradient(self, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Gradient of the smooth part w.r.t. ``theta``, plus the natural ``(grad_tau, grad_b)``"""
        tau, b = self.unpack(theta)
        g_tau, g_b = nll_grad(tau, b, self.xs, self.ys)
        # tau_j = tau_1 + sum_{i<j} exp(delta_i), so d/d delta_i collects every threshold above the gap.
        tail = np.cumsum(g_tau[::-1])[::-1]
        with np.errstate(over='ignore'):
            d_delta = np.exp(theta[1:self.n_tau]) * tail[1:]
        return np.concatenate([tail[:1], d_delta, g_b]), g_tau, g_b

    def step(self, theta: np.ndarray, grad: np.ndarray, t: float) -> np.ndarray:
        """Gradient step of length ``t``, followed by the proximal map of the penalty on ``b``"""
        cand = theta - t * grad
        if self.penalty:
            cand[self.n_tau:] = soft_threshold(cand[self.n_tau:], t * self.penalty)
        return cand

    def stationarity(self, g_tau: np.ndarray, g_b: np.ndarray, b: np.ndarray) -> float:
        """Infinity norm of the minimum norm (sub)gradient in the natural parameters"""
        if self.penalty:
            g_b = np.where(b != 0, g_b + self.penalty * np.sign(b), np.maximum(np.abs(g_b) - self.penalty, 0.0))
        parts = [np.abs(g_tau), np.abs(g_b)]
        return float(max((p.max() for p in parts if len(p)), default=0.0))


@attr.s(frozen=True)
class OptimOutcome:
    theta = attr.ib(type=np.ndarray)
    iterations = attr.ib(type=int)
    converged = attr.ib(type=bool)
    gradient_norm = attr.ib(type=float)
    history = attr.ib(factory=list, type=List[float])
    warnings = attr.ib(factory=list, type=List[str])


class BaseEstimator(SettingsMixin, ABC):
    """
    Base class for estimators of the reduced cumulative logit model. To use an estimator::

        >>> est = MLEstimator()
        >>> fit = est.fit(design, labels)
        >>> fit.diagnostics.converged
        True

    Settings are resolved through :class:`.SettingsMixin`, defaulting to :py:attr:`privex.folr.FOLR_SETTINGS`.
    """

    fit_kind = None  # type: str
    """Recorded on every :class:`.FittedFolr` produced, e.g. ``mle``"""

    def __init__(self, *args, settings: Optional[Dict[str, Any]] = None, **kwargs):
        super().__init__(*args, settings=folr_settings.FOLR_SETTINGS if settings is None else settings, **kwargs)

    def make_config(self, **overrides) -> FitConfig:
        """
        Build a :class:`.FitConfig` from the resolved settings, with ``overrides`` (ignoring ``None`` values) taking
        precedence over everything else.
        """
        s = self.settings
        s.update({k: v for k, v in overrides.items() if v is not None})
        s = self._cast_settings(s)
        fields = attr.fields_dict(FitConfig)
        return FitConfig(**{k: v for k, v in s.items() if k in fields})

    @abstractmethod
    def penalty_weight(self, cfg: FitConfig) -> float:
        """The per-observation l1 weight; the objective adds ``weight * N * ||b||_1``"""
        raise NotImplementedError(f"{type(self).__name__}.penalty_weight must be implemented!")

    def check_config(self, cfg: FitConfig):
        """Raise :class:`.ValidationError` if ``cfg`` is not usable by this estimator"""
        pass

    @staticmethod
    def class_counts(ys, n_classes: Optional[int], n_rows: int) -> Tuple[np.ndarray, np.ndarray, int]:
        """
        Validate the labels and count them per class.

        :raises ValidationError: ``K < 2`` or a class in ``1..K`` is never observed
        :raises RangeError:      A label is out of range
        """
        ys_arr = np.asarray(ys)
        k = int(n_classes) if n_classes else (int(ys_arr.max()) if ys_arr.size else 0)
        if k < 2:
            raise ValidationError(f'At least 2 ordered classes are required, got K={k}')
        ys_arr = check_labels(ys_arr, k, n_rows)
        counts = np.bincount(ys_arr, minlength=k + 1)[1:]
        missing = [int(j) + 1 for j in np.flatnonzero(counts == 0)]
        if missing:
            raise ValidationError(
                f'Classes {missing} are never observed (K={k}): the thresholds have no finite maximum likelihood'
            )
        return ys_arr, counts, k

    def initial_params(self, counts: np.ndarray, n_cov: int, cfg: FitConfig) -> Tuple[np.ndarray, np.ndarray]:
        k = len(counts)
        if cfg.init == 'spread':
            tau = cfg.threshold_init_spread * (np.arange(1, k) - k / 2.0)
        else:
            # Thresholds-only MLE: F(tau_j) equals the cumulative class frequency.
            tau = logit(np.cumsum(counts)[:-1] / float(np.sum(counts)))
        return tau, np.zeros(n_cov)

    def fit(self, design: ReducedDesign, ys, cfg: FitConfig = None, n_classes: int = None,
            warm_start: OrdinalModel = None) -> FittedFolr:
        """
        Fit the cumulative logit model on the reduced design.

        :param ReducedDesign design:    Output of :py:func:`privex.folr.estimators.reduce`
        :param ys:                      Labels in ``1..K``
        :param FitConfig cfg:           Configuration, defaults to :meth:`.make_config`
        :param int n_classes:           K, defaults to the largest label
        :param OrdinalModel warm_start: Starting parameters (e.g. the previous point of a LASSO path)
        :raises ValidationError:        A class is never observed, or ``cfg`` is unsuitable
        :raises DimensionError:         Label count or warm start does not match the design
        """
        cfg = self.make_config() if cfg is None else cfg
        model, diag = self.fit_params(design.xt, ys, cfg, n_classes=n_classes, warm_start=warm_start)
        return FittedFolr(
            model=model, beta_basis=design.beta_basis, curve_basis=design.curve_basis,
            diagnostics=diag, fit_kind=self.fit_kind, lasso_lambda=cfg.lasso_lambda, seed=cfg.seed,
        )

    def fit_params(self, xs, ys, cfg: FitConfig = None, n_classes: int = None,
                   warm_start: OrdinalModel = None) -> Tuple[OrdinalModel, FitDiagnostics]:
        """Fit on a plain ``N x M`` covariate matrix, see :meth:`.fit`"""
        cfg = self.make_config() if cfg is None else cfg
        self.check_config(cfg)
        xs = np.asarray(xs, dtype=float)
        if xs.ndim != 2:
            raise DimensionError(f'The design must be an N x M matrix, got shape {xs.shape}')
        n, m = xs.shape
        ys, counts, k = self.class_counts(ys, n_classes, n)
        warnings = []
        if n <= m + k - 1:
            warnings.append(f'Only {n} observations for {m + k - 1} parameters: the fit is under-determined')

        scaler = Scaler(xs, cfg.standardize)
        obj = LogitObjective(scaler.transform(xs), ys, k, penalty=self.penalty_weight(cfg) * n)
        if warm_start is not None:
            if warm_start.n_covariates != m or warm_start.n_classes != k:
                raise DimensionError(
                    f'Warm start has K={warm_start.n_classes}, M={warm_start.n_covariates}; design needs K={k}, M={m}'
                )
            tau0, b0 = scaler.to_fit(warm_start.tau, warm_start.coefficients)
        else:
            tau0, b0 = self.initial_params(counts, m, cfg)

        out = self.minimise(obj, obj.pack(tau0, b0), cfg)
        tau_fit, b_fit = obj.unpack(out.theta)
        tau, b = scaler.restore(tau_fit, b_fit)
        warnings += out.warnings
        if not out.converged:
            warnings.append(
                f'Did not converge in {out.iterations} iterations (gradient norm {out.gradient_norm:.3g} > '
                f'{cfg.grad_tol:.3g})'
            )
        if len(b) and np.linalg.norm(b) > SEPARATION_NORM:
            warnings.append(
                f'Coefficient norm {np.linalg.norm(b):.3g} exceeds {SEPARATION_NORM:g}: the classes look perfectly '
                f'separated and the estimates diverge'
            )
        for w in warnings:
            log.warning('%s fit: %s', self.fit_kind, w)

        final_nll = obj.nll(out.theta)
        diag = FitDiagnostics(
            final_nll=final_nll, iterations=out.iterations, converged=out.converged,
            objective=final_nll + obj.penalty_of(out.theta), gradient_norm=out.gradient_norm,
            active_set=np.flatnonzero(b), warnings=warnings,
        )
        log.info('%s fit finished after %d iterations: NLL=%.6f converged=%s', self.fit_kind, diag.iterations,
                 diag.final_nll, diag.converged)
        return OrdinalModel.build(tau, b), diag

    @staticmethod
    def _noise(f: float) -> float:
        return 64 * np.finfo(float).eps * max(1.0, abs(f))

    def minimise(self, obj: LogitObjective, theta: np.ndarray, cfg: FitConfig) -> OptimOutcome:
        """
        (Proximal) gradient descent. Trial steps follow the Barzilai-Borwein rule and are halved until the
        sufficient decrease test ``F(new) <= F(old) + c * (<g, d> + P(new) - P(old))`` holds, so the objective
        never increases across accepted steps.

        The first trial step is ``step_init / N``, keeping the iterates independent of the sample size scaling.
        """
        f = obj.objective(theta)
        grad, g_tau, g_b = obj.gradient(theta)
        gnorm = obj.stationarity(g_tau, g_b, theta[obj.n_tau:])
        step = cfg.step_init / max(obj.n_obs, 1)
        history, warnings = [f], []
        it = 0
        while gnorm > cfg.grad_tol and it < cfg.max_iters:
            t, cand, fc = step, None, None
            for _ in range(MAX_BACKTRACKS):
                trial = obj.step(theta, grad, t)
                d = trial - theta
                predicted = float(grad @ d) + obj.penalty_of(trial) - obj.penalty_of(theta)
                ft = obj.objective(trial)
                if ft <= f + ARMIJO_C * predicted:
                    cand, fc = trial, ft
                    break
                # Near the optimum the decrease drops below the rounding error of F itself.
                if abs(predicted) <= self._noise(f) and ft <= f + self._noise(f):
                    cand, fc = trial, ft
                    break
                t *= BACKTRACK
            if cand is None or not np.any(cand != theta):
                warnings.append(f'Line search stalled at iteration {it} (gradient norm {gnorm:.3g})')
                break

            new_grad, g_tau, g_b = obj.gradient(cand)
            s, y = cand - theta, new_grad - grad
            sy = float(s @ y)
            step = float(s @ s) / sy if sy > 0 else 2.0 * t
            theta, f, grad = cand, fc, new_grad
            gnorm = obj.stationarity(g_tau, g_b, theta[obj.n_tau:])
            history.append(f)
            it += 1
            log.debug('iteration %d: objective=%.12g step=%.3g gradient=%.3g', it, f, t, gnorm)

        return OptimOutcome(
            theta=theta, iterations=it, converged=gnorm <= cfg.grad_tol, gradient_norm=gnorm,
            history=history, warnings=warnings,
        )
