"""
JSON descriptions of synthetic designs, read by ``folr simulate --spec``.

Either a full description::

    {
      "n_curves": 200, "seed": 7, "noise_sd": 0.05,
      "curve_basis": {"kind": "bspline", "order": 4, "knots": [0, 30, 60, 90, 120], "domain_end": 120},
      "beta_basis": {"kind": "monomial", "degrees": [1, 2], "domain_end": 120},
      "true_beta": [0.01, -0.0001],
      "true_tau": [-1.0, 1.0],
      "sampling_times": {"start": 0, "stop": 120, "step": 1},
      "generator": "random", "coef_sd": 1.0
    }

or a preset with optional overrides: ``{"preset": "tint", "seed": 3, "n_curves": 500}``.
"""
import json
import logging
from typing import Any, Dict

import attr
import numpy as np

from privex.folr.base.exceptions import FolrException, ParseError
from privex.folr.base.objects import FunctionalSample, SyntheticSpec, Thresholds
from privex.folr.basis import basis_from_dict

log = logging.getLogger(__name__)

PRESET_OVERRIDES = ('n_curves', 'seed', 'noise_sd', 'coef_sd')


def _times(raw) -> np.ndarray:
    if isinstance(raw, dict):
        try:
            start, stop, step = float(raw['start']), float(raw['stop']), float(raw['step'])
        except (KeyError, TypeError, ValueError):
            raise ParseError('sampling_times needs numeric start, stop and step', field='sampling_times')
        if step <= 0:
            raise ParseError('sampling_times.step must be > 0', field='sampling_times')
        # Inclusive of stop when it falls on the grid.
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return start + step * np.arange(n)
    return np.asarray(raw, dtype=float)


def synthetic_spec_from_dict(data: Dict[str, Any]) -> SyntheticSpec:
    """
    :raises ParseError:        Missing or mistyped fields
    :raises ComponentNotFound: Unknown preset
    :raises ValidationError:   Inconsistent dimensions
    """
    if not isinstance(data, dict):
        raise ParseError('A synthetic spec must be a JSON object')
    if 'preset' in data:
        from privex.folr.evaluation.simulation import preset
        spec = preset(data['preset'], seed=int(data.get('seed', 0)))
        return attr.evolve(spec, **{k: data[k] for k in PRESET_OVERRIDES if k in data and k != 'seed'})
    try:
        curve_basis = basis_from_dict(data['curve_basis'])
        beta_basis = basis_from_dict(data['beta_basis'])
        return SyntheticSpec(
            n_curves=int(data['n_curves']),
            true_beta=FunctionalSample(data['true_beta'], beta_basis),
            true_tau=Thresholds(data['true_tau']),
            curve_basis=curve_basis,
            sampling_times=_times(data['sampling_times']),
            generator=data.get('generator', 'random'),
            coef_mean=data.get('coef_mean'),
            coef_sd=float(data.get('coef_sd', 1.0)),
            coef_scale=data.get('coef_scale'),
            class_means=data.get('class_means'),
            noise_sd=float(data.get('noise_sd', 0.0)),
            seed=int(data.get('seed', 0)),
        )
    except KeyError as e:
        raise ParseError('Synthetic spec is incomplete', field=str(e.args[0]))
    except (TypeError, ValueError) as e:
        if isinstance(e, FolrException):
            raise
        raise ParseError(f'Synthetic spec holds a value of the wrong type ({e})')


def load_synthetic_spec(path) -> SyntheticSpec:
    try:
        with open(str(path), 'r', encoding='utf-8') as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f'{path}: invalid JSON ({e.msg})', line=e.lineno)
    return synthetic_spec_from_dict(data)
