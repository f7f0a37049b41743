"""
Command line front end: ``folr {smooth,fit,predict,crossval,simulate}``.

    folr smooth   --curves curves.csv --basis bspline --size 16 --order 4 --lambda 0 --out coeffs.csv
    folr fit      --coeffs coeffs.csv --labels labels.csv --beta-basis monomial --beta-size 2 --out model.json
    folr predict  --model model.json --coeffs coeffs.csv --rule lad --out predictions.csv
    folr crossval --curves curves.csv --labels labels.csv --k 10 --arms last-value,folr,folr-lasso --out summary.csv
    folr simulate --preset kneading --out-curves curves.csv --out-labels labels.csv

Exit codes: 0 success, 1 usage error, 2 data error (including unreadable files), 3 numerical failure.
Nothing is written unless the whole command succeeds.

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
import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

import attr
import numpy as np
from numpy.linalg import LinAlgError
from privex.loghelper import LogHelper

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.exceptions import FolrException, NumericalError, UsageError
from privex.folr.base.objects import Dataset
from privex.folr.basis import BASIS_HANDLERS, get_basis, smooth_many
from privex.folr.estimators import (
    RULES, get_estimator, lambda_max, predict_many, reconstruct_beta, reduce, standard_errors,
)
from privex.folr.evaluation import ARMS, class_mean_curves, compare, get_arm, preset, simulate
from privex.folr.evaluation.LassoFolrArm import LAMBDA_RULES
from privex.folr.evaluation.simulation import PRESETS
from privex.folr.persist import (
    atomic_writes, join, load_coefficients, load_curves, load_labels, load_model, load_synthetic_spec, save_beta,
    save_class_means, save_coefficients, save_curves, save_labels, save_model, save_predictions, save_report,
    save_scores, save_summary, summary_frame,
)
from privex.folr.version import VERSION

log = logging.getLogger(__name__)

BETA_GRID_POINTS = 201
MEANS_GRID_POINTS = 201


class FolrArgumentParser(argparse.ArgumentParser):
    """Raises :class:`.UsageError` instead of exiting, so bad flags share the exit code path of every other error"""

    def error(self, message):
        raise UsageError(f'{self.prog}: {message}')


def positive_int(value: str) -> int:
    try:
        v = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected an integer, got {value!r}')
    if v < 1:
        raise argparse.ArgumentTypeError(f'must be >= 1, got {v}')
    return v


def nonneg_int(value: str) -> int:
    try:
        v = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected an integer, got {value!r}')
    if v < 0:
        raise argparse.ArgumentTypeError(f'must be >= 0, got {v}')
    return v


def fold_count(value: str) -> int:
    v = positive_int(value)
    if v < 2:
        raise argparse.ArgumentTypeError(f'k-fold cross-validation needs k >= 2, got {v}')
    return v


def nonneg_float(value: str) -> float:
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a number, got {value!r}')
    if not np.isfinite(v) or v < 0:
        raise argparse.ArgumentTypeError(f'must be finite and >= 0, got {value}')
    return v


def positive_float(value: str) -> float:
    v = nonneg_float(value)
    if v == 0:
        raise argparse.ArgumentTypeError('must be > 0')
    return v


def arm_list(value: str) -> List[str]:
    names = [n.strip().lower() for n in value.split(',') if n.strip()]
    unknown = [n for n in names if n not in ARMS]
    if not names or unknown:
        raise argparse.ArgumentTypeError(f'unknown arm(s) {unknown or value!r}, known arms: {",".join(ARMS)}')
    return list(dict.fromkeys(names))


def _add_curve_basis_args(p: argparse.ArgumentParser, size_required: bool = True):
    p.add_argument('--basis', choices=sorted(BASIS_HANDLERS), default='bspline',
                   help='Basis the curves are expanded in')
    p.add_argument('--size', type=positive_int, required=size_required, default=16, help='Number of basis functions')
    p.add_argument('--order', type=positive_int, default=4, help='B-spline order (4 = cubic)')
    p.add_argument('--lambda', dest='roughness', type=nonneg_float, default=0.0, help='Roughness penalty weight')
    p.add_argument('--domain-end', type=positive_float, default=None,
                   help='End T of the domain [0, T], defaults to the last observation time')


def _add_beta_basis_args(p: argparse.ArgumentParser, default_size: int = 10):
    p.add_argument('--beta-basis', choices=sorted(BASIS_HANDLERS), default='bspline', help='Basis of beta(t)')
    p.add_argument('--beta-size', type=nonneg_int, default=default_size,
                   help='Number of beta basis functions, 0 for a thresholds-only model')
    p.add_argument('--beta-order', type=positive_int, default=4, help='B-spline order of the beta basis')


def _add_optimizer_args(p: argparse.ArgumentParser):
    p.add_argument('--max-iters', type=positive_int, default=None, help='Optimizer iteration cap')
    p.add_argument('--grad-tol', type=positive_float, default=None, help='Stationarity tolerance')
    p.add_argument('--standardize', action='store_true', default=None, help='Fit on standardised covariates')


def build_parser() -> argparse.ArgumentParser:
    parser = FolrArgumentParser(prog='folr', description='Functional ordinal logistic regression')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG logging')
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('smooth', help='Smooth raw curves into basis coefficients')
    p.add_argument('--curves', required=True, help='CSV of curve_id,t,value')
    _add_curve_basis_args(p)
    p.add_argument('--out', required=True, help='Coefficient CSV to write (plus its .basis.json sidecar)')
    p.add_argument('--labels', default=None, help='CSV of curve_id,label, needed by --means-out')
    p.add_argument('--means-out', default=None, help='Write the class mean curves as t,class_1..class_K')
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser('fit', help='Fit a functional ordinal model')
    p.add_argument('--coeffs', required=True, help='Coefficient CSV written by "folr smooth"')
    p.add_argument('--labels', required=True, help='CSV of curve_id,label')
    p.add_argument('--classes', type=positive_int, default=None, help='Number of classes K, defaults to the top label')
    _add_beta_basis_args(p)
    pen = p.add_mutually_exclusive_group()
    pen.add_argument('--lasso', type=nonneg_float, default=None, metavar='LAMBDA', help='LASSO penalty weight')
    pen.add_argument('--no-penalty', action='store_true', help='Unpenalised maximum likelihood (default)')
    _add_optimizer_args(p)
    p.add_argument('--seed', type=int, default=None, help='Seed recorded with the model')
    p.add_argument('--out', required=True, help='Model JSON to write')
    p.add_argument('--beta-out', default=None, help=f'Write beta(t) on {BETA_GRID_POINTS} points as t,beta')
    p.add_argument('--standard-errors', action='store_true', help='Print standard errors (unpenalised fits only)')
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser('predict', help='Predict classes with a fitted model')
    p.add_argument('--model', required=True, help='Model JSON written by "folr fit"')
    p.add_argument('--coeffs', required=True, help='Coefficient CSV in the model\'s curve basis')
    p.add_argument('--rule', choices=RULES, default='lad', help='lad (least absolute deviation) or mode')
    p.add_argument('--out', required=True, help='CSV of curve_id,predicted_class[,p1..pK]')
    p.add_argument('--scores-out', default=None, help='Write the linear scores <X, beta> as curve_id,score')
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser('crossval', help='Compare evaluation arms by stratified k-fold cross-validation')
    p.add_argument('--curves', required=True, help='CSV of curve_id,t,value')
    p.add_argument('--labels', required=True, help='CSV of curve_id,label')
    p.add_argument('--k', type=fold_count, default=10, help='Number of folds')
    p.add_argument('--arms', type=arm_list, default=list(ARMS), help=f'Comma separated, from {",".join(ARMS)}')
    p.add_argument('--rule', choices=RULES, default='lad')
    p.add_argument('--seed', type=int, default=0, help='Seed of the fold partition')
    p.add_argument('--jobs', type=positive_int, default=1, help='Folds run in parallel')
    p.add_argument('--lambda-rule', choices=LAMBDA_RULES, default=None,
                   help='How folr-lasso picks its penalty from the inner CV curve (default 1se)')
    _add_curve_basis_args(p, size_required=False)
    _add_beta_basis_args(p)
    _add_optimizer_args(p)
    p.add_argument('--out', default=None, help='Summary CSV: arm,mean_mae,mean_error_rate')
    p.add_argument('--report-dir', default=None, help='Directory for one fold,mae,accuracy_error CSV per arm')
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser('simulate', help='Generate a synthetic labelled curve dataset')
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument('--spec', default=None, help='JSON description of the design')
    src.add_argument('--preset', choices=sorted(PRESETS), default=None, help='Ready made design')
    p.add_argument('--seed', type=int, default=None, help='Override the seed of the design')
    p.add_argument('--n-curves', type=positive_int, default=None, help='Override the number of curves')
    p.add_argument('--out-curves', required=True, help='CSV of curve_id,t,value to write')
    p.add_argument('--out-labels', required=True, help='CSV of curve_id,label to write')
    p.set_defaults(func=cmd_simulate)
    return parser


def _curve_basis(args, curves) -> BaseBasis:
    end = args.domain_end
    if end is None:
        end = max(float(c.times[-1]) for c in curves) if curves else 0.0
    return get_basis(args.basis, size=args.size, order=args.order, domain_end=end)


def _beta_basis(args, curve_basis: BaseBasis) -> Optional[BaseBasis]:
    if args.beta_size == 0:
        return None
    return get_basis(args.beta_basis, size=args.beta_size, order=args.beta_order, domain_end=curve_basis.domain_end)


def _overrides(args) -> Dict:
    keys = ('max_iters', 'grad_tol', 'standardize', 'seed')
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _check_dir(path: Optional[str]):
    if path is not None and not os.path.isdir(path):
        raise UsageError(f'Output directory {path} does not exist')


def _fmt(values: Sequence[float]) -> str:
    return ' '.join(repr(float(v)) for v in values)


def cmd_smooth(args) -> int:
    if args.means_out and not args.labels:
        raise UsageError('--means-out needs --labels')
    curves = load_curves(args.curves)
    if not curves:
        raise UsageError(f'{args.curves} holds no curves')
    basis = _curve_basis(args, curves)
    labels = None
    if args.labels:
        curves, labels = join(curves, load_labels(args.labels))
    results = smooth_many(curves, basis, args.roughness)
    samples = [r.sample for r in results]
    for r in results:
        print(f'{r.sample.curve_id} residual_rms={r.residual_rms!r}')
    with atomic_writes():
        save_coefficients(samples, args.out)
        if args.means_out:
            grid = np.linspace(0.0, basis.domain_end, MEANS_GRID_POINTS)
            save_class_means(class_mean_curves(samples, labels), grid, args.means_out)
    log.info('Smoothed %d curves into %r', len(samples), basis)
    return 0


def cmd_fit(args) -> int:
    kind = 'lasso' if args.lasso is not None else 'mle'
    if args.standard_errors and args.lasso:
        raise UsageError('--standard-errors is only available for unpenalised fits')
    samples, ys = join(load_coefficients(args.coeffs), load_labels(args.labels, args.classes))
    if not samples:
        raise UsageError(f'{args.coeffs} holds no curves')
    curve_basis = samples[0].basis
    beta_basis = _beta_basis(args, curve_basis)
    design = reduce(samples, beta_basis)

    overrides = _overrides(args)
    if kind == 'lasso':
        overrides['lasso_lambda'] = args.lasso
    est = get_estimator(kind, overrides=overrides)
    fit = est.fit(design, ys, est.make_config(), n_classes=args.classes)
    se = standard_errors(fit, design, ys) if args.standard_errors else None

    d = fit.diagnostics
    print(f'fit_kind: {fit.fit_kind}')
    if kind == 'lasso':
        print(f'lambda: {fit.lasso_lambda!r}')
        print(f'lambda_max: {lambda_max(design, ys, n_classes=args.classes)!r}')
    print(f'nll: {d.final_nll!r}')
    print(f'objective: {d.objective!r}')
    print(f'iterations: {d.iterations}')
    print(f'converged: {d.converged}')
    print(f'active_set: {" ".join(str(i + 1) for i in d.active_set)}')
    print(f'tau: {_fmt(fit.model.tau)}')
    print(f'b: {_fmt(fit.model.coefficients)}')
    if se is not None:
        print(f'se_tau: {_fmt(se.tau)}')
        print(f'se_b: {_fmt(se.coefficients)}')
    for w in d.warnings:
        print(f'warning: {w}', file=sys.stderr)

    with atomic_writes():
        save_model(fit, args.out)
        if args.beta_out:
            grid = np.linspace(0.0, curve_basis.domain_end, BETA_GRID_POINTS)
            save_beta(grid, reconstruct_beta(fit, grid), args.beta_out)
    return 0


def cmd_predict(args) -> int:
    fit = load_model(args.model)
    samples = load_coefficients(args.coeffs)
    preds = predict_many(fit, samples, args.rule)
    ids = [s.curve_id for s in samples]
    # Probabilities are only ever computed for the mode rule.
    with atomic_writes():
        save_predictions(ids, preds, args.out, with_probs=args.rule == 'mode')
        if args.scores_out:
            save_scores(ids, [p.score for p in preds], args.scores_out)
    counts = np.bincount([p.label for p in preds], minlength=fit.model.n_classes + 1)[1:]
    print(f'predicted: {len(preds)} curves, class counts {" ".join(str(int(c)) for c in counts)}')
    return 0


def cmd_crossval(args) -> int:
    _check_dir(args.report_dir)
    curves, ys = join(load_curves(args.curves), load_labels(args.labels))
    if not curves:
        raise UsageError(f'{args.curves} holds no curves')
    curve_basis = _curve_basis(args, curves)
    beta_basis = _beta_basis(args, curve_basis)
    samples = [r.sample for r in smooth_many(curves, curve_basis, args.roughness)]
    dataset = Dataset(ids=[c.curve_id for c in curves], labels=ys, samples=samples, curves=curves)

    flags = dict(_overrides(args), jobs=args.jobs, lambda_rule=args.lambda_rule)
    arms = [get_arm(name, beta_basis=beta_basis, overrides=flags) for name in args.arms]
    reports = compare(dataset, arms, k=args.k, rule=args.rule, seed=args.seed, jobs=args.jobs)

    print(summary_frame(reports).to_string(index=False))
    with atomic_writes():
        if args.out:
            save_summary(reports, args.out)
        if args.report_dir:
            for r in reports:
                save_report(r, os.path.join(args.report_dir, f'{r.arm}.csv'))
    return 0


def cmd_simulate(args) -> int:
    spec = load_synthetic_spec(args.spec) if args.spec else preset(args.preset)
    changes = {k: v for k, v in (('seed', args.seed), ('n_curves', args.n_curves)) if v is not None}
    if changes:
        spec = attr.evolve(spec, **changes)
    curves, labels = simulate(spec)
    with atomic_writes():
        save_curves(curves, args.out_curves)
        save_labels([c.curve_id for c in curves], labels, args.out_labels)
    counts = np.bincount(labels, minlength=spec.n_classes + 1)[1:]
    print(f'simulated: {len(curves)} curves, class counts {" ".join(str(int(c)) for c in counts)}')
    return 0


def _setup_logging(verbosity: int):
    if verbosity <= 0:
        return
    level = logging.INFO if verbosity == 1 else logging.DEBUG
    LogHelper('privex.folr', level=level).add_console_handler(level)


def main(argv: Sequence[str] = None) -> int:
    """
    Run one ``folr`` command and return its exit code. Errors are reported on stderr as ``folr: error: ...``.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _setup_logging(args.verbose)
        return args.func(args)
    except FolrException as e:
        print(f'folr: error: {e}', file=sys.stderr)
        return getattr(e, 'exit_code', 1)
    except OSError as e:
        print(f'folr: error: {e}', file=sys.stderr)
        return 2
    except LinAlgError as e:
        print(f'folr: error: {e}', file=sys.stderr)
        return NumericalError.exit_code


if __name__ == '__main__':
    sys.exit(main())
