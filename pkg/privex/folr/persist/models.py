"""
The fitted model file: UTF-8 JSON with sorted keys, two space indentation and floats in shortest round-trip form.

Layout::

    {
      "b": [...],
      "beta_basis": {"kind": "bspline", ...} | null,
      "curve_basis": {"kind": "bspline", ...},
      "format_version": 1,
      "metadata": {"diagnostics": {...}, "fit_kind": "mle", "lambda": 0.0, "seed": 0},
      "tau": [...]
    }

Loading re-validates every invariant (threshold order, dimensions) before a :class:`.FittedFolr` is returned.
"""
import json
import logging
from typing import Any, Dict

from privex.folr.base.exceptions import ParseError, UnsupportedVersion
from privex.folr.base.objects import FitDiagnostics, FittedFolr, OrdinalModel, Thresholds
from privex.folr.basis import basis_from_dict
from privex.folr.persist.writers import atomic_write, render_json

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
SUPPORTED_VERSIONS = (1,)


def model_to_dict(fit: FittedFolr) -> Dict[str, Any]:
    d = fit.diagnostics
    return {
        'format_version': FORMAT_VERSION,
        'curve_basis': fit.curve_basis.to_dict(),
        'beta_basis': None if fit.beta_basis is None else fit.beta_basis.to_dict(),
        'tau': [float(v) for v in fit.model.tau],
        'b': [float(v) for v in fit.model.coefficients],
        'metadata': {
            'fit_kind': fit.fit_kind,
            'lambda': float(fit.lasso_lambda),
            'seed': int(fit.seed),
            'diagnostics': {
                'final_nll': float(d.final_nll),
                'objective': float(d.objective),
                'iterations': int(d.iterations),
                'converged': bool(d.converged),
                'gradient_norm': float(d.gradient_norm),
                'active_set': [int(i) for i in d.active_set],
                'warnings': list(d.warnings),
            },
        },
    }


def render_model(fit: FittedFolr) -> str:
    """The exact text :py:func:`.save_model` writes"""
    return render_json(model_to_dict(fit))


def _field(data: dict, key: str, ctx: str = ''):
    try:
        return data[key]
    except (KeyError, TypeError):
        raise ParseError(f'Model file is missing {ctx}{key}', field=f'{ctx}{key}')


def model_from_dict(data: Dict[str, Any]) -> FittedFolr:
    """
    :raises UnsupportedVersion: Unknown ``format_version``
    :raises ParseError:         Missing or mistyped fields
    :raises ValidationError:    Broken invariant, e.g. ``thresholds not increasing``
    :raises DimensionError:     ``b`` does not match the beta basis
    """
    if not isinstance(data, dict):
        raise ParseError('Model file must hold a JSON object')
    version = _field(data, 'format_version')
    if version not in SUPPORTED_VERSIONS:
        raise UnsupportedVersion(f'Model format_version {version!r} is not supported (supported: {SUPPORTED_VERSIONS})')
    curve_basis = basis_from_dict(_field(data, 'curve_basis'))
    beta_raw = _field(data, 'beta_basis')
    beta_basis = None if beta_raw is None else basis_from_dict(beta_raw)
    meta = _field(data, 'metadata')
    diag = _field(meta, 'diagnostics', 'metadata.')
    try:
        tau = [float(v) for v in _field(data, 'tau')]
        b = [float(v) for v in _field(data, 'b')]
        diagnostics = FitDiagnostics(
            final_nll=_field(diag, 'final_nll', 'metadata.diagnostics.'),
            objective=float(diag.get('objective', diag['final_nll'])),
            iterations=_field(diag, 'iterations', 'metadata.diagnostics.'),
            converged=_field(diag, 'converged', 'metadata.diagnostics.'),
            gradient_norm=diag.get('gradient_norm', 0.0),
            active_set=diag.get('active_set', []),
            warnings=diag.get('warnings', []),
        )
        lam = float(_field(meta, 'lambda', 'metadata.'))
        seed = int(_field(meta, 'seed', 'metadata.'))
    except (TypeError, ValueError) as e:
        raise ParseError(f'Model file holds a value of the wrong type ({e})')
    model = OrdinalModel(thresholds=Thresholds(tau), coefficients=b)
    return FittedFolr(
        model=model, beta_basis=beta_basis, curve_basis=curve_basis, diagnostics=diagnostics,
        fit_kind=str(_field(meta, 'fit_kind', 'metadata.')), lasso_lambda=lam, seed=seed,
    )


def parse_model(text: str) -> FittedFolr:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f'Model file is not valid JSON: {e.msg} at column {e.colno}', line=e.lineno)
    return model_from_dict(data)


def save_model(fit: FittedFolr, path):
    with atomic_write(path) as fh:
        fh.write(render_model(fit))
    log.info('Saved %s model (K=%d, M=%d) to %s', fit.fit_kind, fit.model.n_classes, fit.model.n_covariates, path)


def load_model(path) -> FittedFolr:
    with open(str(path), 'r', encoding='utf-8') as fh:
        return parse_model(fh.read())
