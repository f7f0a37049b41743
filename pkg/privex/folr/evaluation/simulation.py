"""
Synthetic functional ordinal data: curve coefficients are drawn, ``Y* = <X, beta> + eps`` with standard logistic
``eps``, and ``Y`` is the threshold interval containing ``Y*``. Everything is reproducible from ``spec.seed``.

Two presets mirror typical applications, see :py:func:`.preset`.
"""
import logging
from typing import List, Tuple

import numpy as np

from privex.folr.base.exceptions import ComponentNotFound
from privex.folr.base.objects import FunctionalSample, RawCurve, SyntheticSpec, Thresholds
from privex.folr.basis.BSplineBasis import BSplineBasis
from privex.folr.basis.MonomialBasis import MonomialBasis
from privex.folr.basis.quadrature import gram
from privex.folr.ordinal.decision import lad_labels

log = logging.getLogger(__name__)


def _curve_ids(n: int) -> List[str]:
    width = len(str(n))
    return [f'curve_{i + 1:0{width}d}' for i in range(n)]


def _draw(spec: SyntheticSpec):
    rng = np.random.default_rng(spec.seed)
    n, r = spec.n_curves, spec.curve_basis.size
    sd = spec.coef_sd if spec.coef_scale is None else spec.coef_sd * np.asarray(spec.coef_scale)
    noise = sd * rng.standard_normal((n, r))
    if spec.generator == 'class_means':
        nominal = rng.integers(0, spec.class_means.shape[0], size=n)
        coefs = np.asarray(spec.class_means)[nominal] + noise
    else:
        mean = np.zeros(r) if spec.coef_mean is None else np.asarray(spec.coef_mean)
        coefs = mean + noise
    weights = gram(spec.curve_basis, spec.true_beta.basis).entries @ spec.true_beta.coefficients
    latent = coefs @ weights + rng.logistic(size=n)
    labels = lad_labels(spec.true_tau.tau, latent)
    return rng, coefs, labels


def simulate_design(spec: SyntheticSpec) -> Tuple[List[FunctionalSample], np.ndarray]:
    """
    The noiseless coefficient level draw behind :py:func:`.simulate`: the true curve coefficients and their labels.
    """
    _, coefs, labels = _draw(spec)
    samples = [
        FunctionalSample(coefficients=a, basis=spec.curve_basis, curve_id=cid)
        for a, cid in zip(coefs, _curve_ids(spec.n_curves))
    ]
    return samples, labels


def simulate(spec: SyntheticSpec) -> Tuple[List[RawCurve], np.ndarray]:
    """
    Draw ``spec.n_curves`` labelled curves observed on ``spec.sampling_times`` with Gaussian observation noise of
    standard deviation ``spec.noise_sd``. Same spec, same output, bit for bit.

    :return tuple: ``(curves, labels)`` with labels in ``1..K``
    """
    rng, coefs, labels = _draw(spec)
    times = np.asarray(spec.sampling_times)
    values = coefs @ spec.curve_basis.evaluate(times).T
    if spec.noise_sd > 0:
        values = values + spec.noise_sd * rng.standard_normal(values.shape)
    curves = [RawCurve(curve_id=cid, times=times, values=v) for cid, v in zip(_curve_ids(spec.n_curves), values)]
    log.debug('Simulated %d curves, class counts %s', len(curves),
              np.bincount(labels, minlength=spec.n_classes + 1)[1:].tolist())
    return curves, labels


def greville(basis: BSplineBasis) -> np.ndarray:
    """Greville abscissae: spline coefficients equal to ``f(greville)`` approximate ``f``"""
    k = basis.full_knots
    return np.array([k[i + 1:i + basis.order].mean() for i in range(basis.size)])


def _kneading(seed: int) -> SyntheticSpec:
    # Dough resistance over 480 s, three ordered quality grades.
    t_end = 480.0
    curves = BSplineBasis.uniform(16, order=4, domain_end=t_end)
    beta_basis = MonomialBasis([1, 2], domain_end=t_end)
    s = greville(curves) / t_end
    shape = np.sin(np.pi * s)
    means = np.vstack([shape * (1.0 + 0.75 * c) for c in (-1, 0, 1)])
    strength = 0.05
    beta = FunctionalSample([strength / t_end, -strength / t_end ** 2], beta_basis)
    return SyntheticSpec(
        n_curves=115, true_beta=beta, true_tau=Thresholds([1.9, 4.3]), curve_basis=curves,
        sampling_times=np.arange(0.0, t_end + 1, 2.0), generator='class_means', class_means=means,
        coef_sd=0.25, noise_sd=0.05, seed=seed,
    )


def _tint(seed: int) -> SyntheticSpec:
    # A 2 minute transition. beta lives on the last spline only, i.e. inside the final quarter of the window. The curves
    # start from a common state and spread out as the transition goes on.
    t_end = 120.0
    curves = BSplineBasis.uniform(60, order=4, domain_end=t_end)
    beta_basis = BSplineBasis.uniform(10, order=4, domain_end=t_end)
    b = np.zeros(10)
    b[-1] = 1.5
    return SyntheticSpec(
        n_curves=233, true_beta=FunctionalSample(b, beta_basis), true_tau=Thresholds([-2.5, 0.0, 2.5]),
        curve_basis=curves, sampling_times=np.arange(0.0, t_end + 1, 1.0), generator='random', coef_sd=1.0,
        coef_scale=0.1 + 0.9 * greville(curves) / t_end, noise_sd=0.1, seed=seed,
    )


PRESETS = {
    'kneading': _kneading,
    'tint': _tint,
}


def preset(name: str, seed: int = 0) -> SyntheticSpec:
    """
    Ready made synthetic designs:

    - ``kneading``: 115 curves, K=3, a reading every 2 s for 480 s, 16 cubic splines for X, ``beta(t) = b1 t + b2 t^2``
    - ``tint``: 233 curves, K=4, a reading every second for 120 s, 60 splines for X, 10 splines for beta with the
      signal late in the window

    :raises ComponentNotFound: Unknown preset
    """
    name = str(name).lower()
    if name not in PRESETS:
        raise ComponentNotFound(f"Unknown synthetic preset '{name}'. Known presets: {sorted(PRESETS)}")
    return PRESETS[name](seed)
