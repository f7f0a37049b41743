import io
import json
import os
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

import numpy as np
import pandas as pd
from numpy.linalg import LinAlgError
from numpy.testing import assert_allclose
from scipy.special import logit

from privex.folr.cli import main
from privex.folr.evaluation import simulate
from privex.folr.persist import load_model, save_coefficients, save_curves, save_labels, save_model
from tests.base import TempDirMixin, early_signal_spec, fitted, mono, random_samples, splines

# The same design as ``early_signal_spec(300, seed=5)``, as read by ``folr simulate --spec``.
EARLY_SIGNAL_JSON = {
    'n_curves': 300, 'seed': 5,
    'curve_basis': {'kind': 'bspline', 'order': 4, 'knots': [0, 2, 4, 6, 8, 10], 'domain_end': 10},
    'beta_basis': {'kind': 'bspline', 'order': 4, 'knots': [0, 5, 10], 'domain_end': 10},
    'true_beta': [8.0, 0.0, 0.0, 0.0, 0.0],
    'true_tau': [-2.0, 0.0, 2.0],
    'sampling_times': {'start': 0, 'stop': 10, 'step': 0.25},
}

SMALL_GRID = {'FOLR_LAMBDA_GRID_SIZE': '5', 'FOLR_INNER_FOLDS': '3'}


class CliTestCase(TempDirMixin, unittest.TestCase):
    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main([str(a) for a in argv])
        return code, out.getvalue(), err.getvalue()

    def ok(self, *argv) -> str:
        code, out, err = self.run_cli(*argv)
        self.assertEqual(code, 0, msg=err)
        return out

    def write_dataset(self, n: int = 120, seed: int = 0):
        curves, labels = simulate(early_signal_spec(n, seed=seed))
        save_curves(curves, self.path('curves.csv'))
        save_labels([c.curve_id for c in curves], labels, self.path('labels.csv'))
        return curves, labels

    def smooth_dataset(self, n: int = 120, seed: int = 0):
        _, labels = self.write_dataset(n, seed)
        self.ok('smooth', '--curves', self.path('curves.csv'), '--size', 8, '--out', self.path('coeffs.csv'))
        return labels


def printed(out: str, key: str) -> str:
    for line in out.splitlines():
        if line.startswith(f'{key}:'):
            return line[len(key) + 1:].strip()
    raise AssertionError(f'{key} not printed in {out!r}')


class TestSmoothCommand(CliTestCase):
    def test_in_space_curves(self):
        """Test smooth writes coefficients, the basis sidecar and per-curve residuals"""
        curves, _ = self.write_dataset(20)
        out = self.ok('smooth', '--curves', self.path('curves.csv'), '--basis', 'bspline', '--size', 8, '--order', 4,
                      '--lambda', 0, '--out', self.path('coeffs.csv'))
        lines = out.splitlines()
        self.assertEqual(len(lines), 20)
        for line in lines:
            cid, rms = line.split(' residual_rms=')
            self.assertLess(float(rms), 1e-8)
        self.assertTrue(os.path.exists(self.path('coeffs.csv.basis.json')))
        header = 'curve_id,' + ','.join(f'c{i}' for i in range(1, 9))
        self.assertEqual(self.read('coeffs.csv').splitlines()[0], header)

    def test_zero_size(self):
        """Test smooth rejects --size 0 with exit code 1 and writes nothing"""
        self.write_dataset(20)
        code, _, err = self.run_cli('smooth', '--curves', self.path('curves.csv'), '--size', 0,
                                    '--out', self.path('coeffs.csv'))
        self.assertEqual(code, 1)
        self.assertIn('error', err)
        self.assertFalse(os.path.exists(self.path('coeffs.csv')))

    def test_penalised_wide_basis(self):
        """Test smooth with more basis functions than readings works once penalised"""
        self.write_dataset(20)
        self.ok('smooth', '--curves', self.path('curves.csv'), '--size', 60, '--lambda', 0.3162,
                '--out', self.path('coeffs.csv'))
        self.assertEqual(len(self.read('coeffs.csv').splitlines()), 21)

    def test_class_means(self):
        """Test smooth --means-out writes the class mean curves"""
        self.write_dataset(40)
        self.ok('smooth', '--curves', self.path('curves.csv'), '--size', 8, '--out', self.path('coeffs.csv'),
                '--labels', self.path('labels.csv'), '--means-out', self.path('means.csv'))
        means = pd.read_csv(self.path('means.csv'))
        self.assertEqual(list(means.columns)[0], 't')
        self.assertEqual(len(means), 201)

    def test_means_need_labels(self):
        """Test smooth --means-out without --labels is a usage error"""
        self.write_dataset(20)
        code, _, _ = self.run_cli('smooth', '--curves', self.path('curves.csv'), '--size', 8,
                                  '--out', self.path('coeffs.csv'), '--means-out', self.path('means.csv'))
        self.assertEqual(code, 1)

    def test_unfactorizable_curve_exits_numerical(self):
        """Test smooth exits 3 naming the curve and writes nothing when a normal matrix cannot be factorized"""
        self.write_dataset(20)
        with mock.patch('privex.folr.basis.smoothing.cho_factor', side_effect=LinAlgError('not positive definite')):
            code, _, err = self.run_cli('smooth', '--curves', self.path('curves.csv'), '--size', 8,
                                        '--out', self.path('coeffs.csv'))
        self.assertEqual(code, 3)
        self.assertIn('curve_', err)
        self.assertFalse(os.path.exists(self.path('coeffs.csv')))

    def test_missing_means_dir_writes_nothing(self):
        """Test smooth leaves no coefficient file behind when the class means cannot be written"""
        self.write_dataset(20)
        code, _, _ = self.run_cli('smooth', '--curves', self.path('curves.csv'), '--size', 8,
                                  '--out', self.path('coeffs.csv'), '--labels', self.path('labels.csv'),
                                  '--means-out', self.path('nodir/means.csv'))
        self.assertEqual(code, 2)
        self.assertEqual(sorted(os.listdir(self.tmp)), ['curves.csv', 'labels.csv'])
        self.assertEqual(code, 1)


class TestFitCommand(CliTestCase):
    def test_thresholds_only(self):
        """Test fit with --beta-size 0 gives the empirical logit thresholds"""
        labels = self.smooth_dataset()
        out = self.ok('fit', '--coeffs', self.path('coeffs.csv'), '--labels', self.path('labels.csv'),
                      '--beta-size', 0, '--no-penalty', '--out', self.path('model.json'))
        tau = [float(v) for v in printed(out, 'tau').split()]
        freq = np.cumsum(np.bincount(labels, minlength=5)[1:])[:-1] / len(labels)
        assert_allclose(tau, logit(freq), atol=1e-6)
        self.assertEqual(printed(out, 'fit_kind'), 'mle')
        self.assertEqual(printed(out, 'b'), '')
        self.assertIsNone(load_model(self.path('model.json')).beta_basis)

    def test_lasso_above_lambda_max(self):
        """Test fit --lasso above lambda_max leaves every coefficient at zero"""
        self.smooth_dataset()
        base = ['fit', '--coeffs', self.path('coeffs.csv'), '--labels', self.path('labels.csv'), '--beta-size', 5]
        out = self.ok(*base, '--lasso', 0, '--out', self.path('m0.json'))
        lmax = float(printed(out, 'lambda_max'))
        self.assertGreater(lmax, 0)
        out = self.ok(*base, '--lasso', repr(2 * lmax), '--out', self.path('m1.json'))
        self.assertEqual(printed(out, 'active_set'), '')
        self.assertEqual(printed(out, 'fit_kind'), 'lasso')
        assert_allclose([float(v) for v in printed(out, 'b').split()], np.zeros(5))

    def test_monomial_beta(self):
        """Test fit with a monomial beta basis writes the model, beta curve and standard errors"""
        self.smooth_dataset()
        out = self.ok('fit', '--coeffs', self.path('coeffs.csv'), '--labels', self.path('labels.csv'),
                      '--beta-basis', 'monomial', '--beta-size', 2, '--out', self.path('model.json'),
                      '--beta-out', self.path('beta.csv'), '--standard-errors', '--seed', 4)
        self.assertEqual(len(printed(out, 'b').split()), 2)
        self.assertEqual(len(printed(out, 'se_b').split()), 2)
        fit = load_model(self.path('model.json'))
        self.assertEqual(fit.beta_basis.degrees, (1, 2))
        self.assertEqual(fit.seed, 4)
        beta = pd.read_csv(self.path('beta.csv'))
        self.assertEqual(list(beta.columns), ['t', 'beta'])
        self.assertEqual(len(beta), 201)

    def test_standard_errors_need_mle(self):
        """Test fit refuses --standard-errors for a LASSO fit"""
        self.smooth_dataset()
        code, _, _ = self.run_cli('fit', '--coeffs', self.path('coeffs.csv'), '--labels', self.path('labels.csv'),
                                  '--beta-size', 5, '--lasso', 0.01, '--standard-errors', '--out', self.path('m.json'))
        self.assertEqual(code, 1)
        self.assertFalse(os.path.exists(self.path('m.json')))

    def test_penalty_flags_exclusive(self):
        """Test fit rejects --lasso together with --no-penalty"""
        self.smooth_dataset(40)
        code, _, _ = self.run_cli('fit', '--coeffs', self.path('coeffs.csv'), '--labels', self.path('labels.csv'),
                                  '--lasso', 0.01, '--no-penalty', '--out', self.path('m.json'))
        self.assertEqual(code, 1)

    def test_max_iters_from_environment(self):
        """Test fit honours FOLR_MAX_ITERS and warns when not converged"""
        self.smooth_dataset(60)
        with mock.patch.dict(os.environ, {'FOLR_MAX_ITERS': '2'}):
            code, out, err = self.run_cli('fit', '--coeffs', self.path('coeffs.csv'), '--labels',
                                          self.path('labels.csv'), '--beta-size', 5, '--out', self.path('m.json'))
        self.assertEqual(code, 0)
        self.assertEqual(printed(out, 'iterations'), '2')
        self.assertEqual(printed(out, 'converged'), 'False')
        self.assertIn('warning:', err)

    def test_missing_file(self):
        """Test fit exits 2 when an input file is missing"""
        code, _, err = self.run_cli('fit', '--coeffs', self.path('nope.csv'), '--labels', self.path('labels.csv'),
                                    '--out', self.path('m.json'))
        self.assertEqual(code, 2)
        self.assertIn('folr: error:', err)

    def test_unjoinable_ids(self):
        """Test fit exits 2 naming curves without a label"""
        self.smooth_dataset(40)
        self.write('labels.csv', 'curve_id,label\nsomething_else,1\n')
        code, _, err = self.run_cli('fit', '--coeffs', self.path('coeffs.csv'), '--labels', self.path('labels.csv'),
                                    '--out', self.path('m.json'))
        self.assertEqual(code, 2)
        self.assertIn('no curve:something_else', err)

    def test_beta_out_into_missing_dir(self):
        """Test fit writes no model when the beta curve cannot be written"""
        self.smooth_dataset(40)
        code, _, err = self.run_cli('fit', '--coeffs', self.path('coeffs.csv'), '--labels', self.path('labels.csv'),
                                    '--beta-basis', 'monomial', '--beta-size', 2, '--out', self.path('model.json'),
                                    '--beta-out', self.path('nodir/beta.csv'))
        self.assertEqual(code, 2)
        self.assertIn('folr: error:', err)
        self.assertFalse(os.path.exists(self.path('model.json')))

    def test_flags_beat_environment(self):
        """Test fit --max-iters wins over FOLR_MAX_ITERS"""
        self.smooth_dataset(60)
        with mock.patch.dict(os.environ, {'FOLR_MAX_ITERS': 'lots'}):
            out = self.ok('fit', '--coeffs', self.path('coeffs.csv'), '--labels', self.path('labels.csv'),
                          '--beta-size', 5, '--max-iters', 2, '--out', self.path('m.json'))
        self.assertEqual(printed(out, 'iterations'), '2')


class TestPredictCommand(CliTestCase):
    def setUp(self) -> None:
        super().setUp()
        curve_basis = splines(8, domain_end=10.0)
        fit = fitted([-1.0, 0.0, 1.0], [0.0, 0.0], beta_basis=mono(domain_end=10.0), curve_basis=curve_basis)
        save_model(fit, self.path('model.json'))
        save_coefficients(random_samples(curve_basis, 15), self.path('coeffs.csv'))

    def test_lad(self):
        """Test predict with the lad rule writes predictions and scores"""
        out = self.ok('predict', '--model', self.path('model.json'), '--coeffs', self.path('coeffs.csv'),
                      '--rule', 'lad', '--out', self.path('pred.csv'), '--scores-out', self.path('scores.csv'))
        pred = pd.read_csv(self.path('pred.csv'))
        self.assertEqual(list(pred.columns), ['curve_id', 'predicted_class'])
        self.assertTrue((pred.predicted_class == 2).all())
        self.assertIn('0 15 0 0', out)
        scores = pd.read_csv(self.path('scores.csv'))
        assert_allclose(scores.score, 0.0)

    def test_mode_writes_probabilities(self):
        """Test predict with the mode rule writes class probabilities summing to one"""
        self.ok('predict', '--model', self.path('model.json'), '--coeffs', self.path('coeffs.csv'), '--rule', 'mode',
                '--out', self.path('pred.csv'))
        pred = pd.read_csv(self.path('pred.csv'))
        self.assertEqual(list(pred.columns), ['curve_id', 'predicted_class', 'p1', 'p2', 'p3', 'p4'])
        assert_allclose(pred[['p1', 'p2', 'p3', 'p4']].sum(axis=1), 1.0, atol=1e-12)

    def test_wrong_basis(self):
        """Test predict exits 2 for coefficients in a different basis than the model"""
        save_coefficients(random_samples(splines(9, domain_end=10.0), 3), self.path('other.csv'))
        code, _, _ = self.run_cli('predict', '--model', self.path('model.json'), '--coeffs', self.path('other.csv'),
                                  '--out', self.path('pred.csv'))
        self.assertEqual(code, 2)

    def test_bad_model(self):
        """Test predict exits 2 for an unsupported model format version"""
        self.write('broken.json', '{"format_version": 999}')
        code, _, err = self.run_cli('predict', '--model', self.path('broken.json'), '--coeffs',
                                    self.path('coeffs.csv'), '--out', self.path('pred.csv'))
        self.assertEqual(code, 2)
        self.assertIn('999', err)

    def test_scores_out_into_missing_dir(self):
        """Test predict writes no predictions when the scores cannot be written"""
        code, _, _ = self.run_cli('predict', '--model', self.path('model.json'), '--coeffs', self.path('coeffs.csv'),
                                  '--out', self.path('pred.csv'), '--scores-out', self.path('nodir/scores.csv'))
        self.assertEqual(code, 2)
        self.assertFalse(os.path.exists(self.path('pred.csv')))


class TestCrossvalCommand(CliTestCase):
    def crossval(self, *extra):
        return self.run_cli('crossval', '--curves', self.path('curves.csv'), '--labels', self.path('labels.csv'),
                            '--size', 8, '--beta-size', 5, *extra)

    def test_single_fold(self):
        """Test crossval rejects --k 1"""
        self.write_dataset(40)
        code, _, _ = self.crossval('--k', 1)
        self.assertEqual(code, 1)

    def test_unknown_arm(self):
        """Test crossval rejects an unknown arm name"""
        self.write_dataset(40)
        code, _, _ = self.crossval('--arms', 'folr,knn')
        self.assertEqual(code, 1)

    def test_missing_report_dir(self):
        """Test crossval rejects a report directory that does not exist"""
        self.write_dataset(40)
        code, _, _ = self.crossval('--arms', 'folr', '--report-dir', self.path('nowhere'))
        self.assertEqual(code, 1)

    def test_reproducible(self):
        """Test crossval gives the same files for the same seed, serial or threaded"""
        self.write_dataset(100)
        os.mkdir(self.path('r1'))
        os.mkdir(self.path('r2'))
        args = ('--k', 5, '--seed', 3, '--arms', 'last-value,folr')
        self.assertEqual(self.crossval(*args, '--out', self.path('s1.csv'), '--report-dir', self.path('r1'))[0], 0)
        self.assertEqual(self.crossval(*args, '--out', self.path('s2.csv'), '--report-dir', self.path('r2'),
                                       '--jobs', 2)[0], 0)
        self.assertEqual(self.read('s1.csv'), self.read('s2.csv'))
        self.assertEqual(sorted(os.listdir(self.path('r1'))), ['folr.csv', 'last-value.csv'])
        self.assertEqual(self.read('r1/folr.csv'), self.read('r2/folr.csv'))
        self.assertEqual(self.read('r1/folr.csv').splitlines()[0], 'fold,mae,accuracy_error')
        self.assertEqual(len(self.read('r1/folr.csv').splitlines()), 6)

    def test_flags_beat_environment(self):
        """Test crossval --max-iters wins over FOLR_MAX_ITERS"""
        self.write_dataset(60)
        with mock.patch.dict(os.environ, {'FOLR_MAX_ITERS': 'lots'}):
            code, _, err = self.crossval('--k', 3, '--arms', 'folr')
            self.assertEqual(code, 1)
            self.assertIn('lots', err)
            code, _, err = self.crossval('--k', 3, '--arms', 'folr', '--max-iters', 200)
            self.assertEqual(code, 0, msg=err)


class TestSimulateCommand(CliTestCase):
    def test_preset(self):
        """Test simulate writes curves and labels for a preset"""
        out = self.ok('simulate', '--preset', 'kneading', '--seed', 1, '--n-curves', 30,
                      '--out-curves', self.path('curves.csv'), '--out-labels', self.path('labels.csv'))
        self.assertTrue(out.startswith('simulated: 30 curves'))
        self.assertEqual(len(printed(out, 'simulated').split('class counts')[1].split()), 3)
        curves = pd.read_csv(self.path('curves.csv'))
        self.assertEqual(len(curves), 30 * 241)
        self.assertEqual(len(pd.read_csv(self.path('labels.csv'))), 30)

    def test_missing_labels_dir_writes_nothing(self):
        """Test simulate writes no curves when the labels cannot be written"""
        code, _, err = self.run_cli('simulate', '--preset', 'kneading', '--n-curves', 10,
                                    '--out-curves', self.path('curves.csv'),
                                    '--out-labels', self.path('missing/labels.csv'))
        self.assertEqual(code, 2)
        self.assertIn('folr: error:', err)
        self.assertEqual(os.listdir(self.tmp), [])

    def test_same_seed_same_bytes(self):
        """Test simulate is byte for byte reproducible for one seed"""
        for name in ('a', 'b'):
            self.ok('-v', 'simulate', '--preset', 'tint', '--seed', 2, '--n-curves', 10,
                    '--out-curves', self.path(f'{name}.csv'), '--out-labels', self.path(f'{name}_labels.csv'))
        self.assertEqual(self.read('a.csv'), self.read('b.csv'))
        self.assertEqual(self.read('a_labels.csv'), self.read('b_labels.csv'))

    def test_spec_or_preset(self):
        """Test simulate needs exactly one of --spec and --preset"""
        self.write('spec.json', json.dumps({'preset': 'tint'}))
        code, _, _ = self.run_cli('simulate', '--spec', self.path('spec.json'), '--preset', 'tint',
                                  '--out-curves', self.path('c.csv'), '--out-labels', self.path('l.csv'))
        self.assertEqual(code, 1)
        code, _, _ = self.run_cli('simulate', '--out-curves', self.path('c.csv'), '--out-labels', self.path('l.csv'))
        self.assertEqual(code, 1)

    def test_end_to_end(self):
        """Test simulate then crossval, the curve model beats the last value baseline"""
        self.write('spec.json', json.dumps(EARLY_SIGNAL_JSON))
        self.ok('simulate', '--spec', self.path('spec.json'), '--out-curves', self.path('curves.csv'),
                '--out-labels', self.path('labels.csv'))
        os.mkdir(self.path('reports'))
        with mock.patch.dict(os.environ, SMALL_GRID):
            out = self.ok('crossval', '--curves', self.path('curves.csv'), '--labels', self.path('labels.csv'),
                          '--k', 5, '--size', 8, '--beta-size', 5, '--arms', 'last-value,folr,folr-lasso',
                          '--out', self.path('summary.csv'), '--report-dir', self.path('reports'))
        summary = pd.read_csv(self.path('summary.csv'))
        self.assertEqual(list(summary.columns), ['arm', 'mean_mae', 'mean_error_rate'])
        self.assertEqual(list(summary.arm), ['last-value', 'folr', 'folr-lasso'])
        self.assertIn('folr-lasso', out)
        mae = dict(zip(summary.arm, summary.mean_mae))
        self.assertLessEqual(mae['folr'], 0.8 * mae['last-value'])
        self.assertEqual(sorted(os.listdir(self.path('reports'))), ['folr-lasso.csv', 'folr.csv', 'last-value.csv'])


class TestGlobalOptions(CliTestCase):
    def test_no_command(self):
        """Test running without a command is a usage error"""
        code, _, err = self.run_cli()
        self.assertEqual(code, 1)
        self.assertIn('folr: error:', err)

    def test_version(self):
        """Test --version exits cleanly"""
        with self.assertRaises(SystemExit) as ctx:
            self.run_cli('--version')
        self.assertEqual(ctx.exception.code, 0)
