import json
import os
import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from privex.folr.base.exceptions import (
    ComponentNotFound, DimensionError, FormatError, JoinError, ParseError, RangeError, UnsupportedVersion,
    ValidationError,
)
from privex.folr.base.objects import CvReport, FoldResult, RawCurve
from privex.folr.estimators import predict_many
from privex.folr.persist import (
    SIDECAR_SUFFIX, atomic_write, atomic_writes, join, load_coefficients, load_curves, load_labels, load_model,
    load_synthetic_spec, model_to_dict, parse_model, render_model, save_coefficients, save_curves, save_labels,
    save_model, save_predictions, save_report, save_summary, synthetic_spec_from_dict,
)
from tests.base import TempDirMixin, fitted, mono, random_samples, splines


class TestCurveLoader(TempDirMixin, unittest.TestCase):
    def test_two_rows(self):
        """Test load_curves groups two readings into one curve"""
        curves = load_curves(self.write('c.csv', 'curve_id,t,value\nA,0,1.0\nA,1,2.0\n'))
        self.assertEqual(len(curves), 1)
        self.assertEqual(curves[0].curve_id, 'A')
        assert_allclose(curves[0].times, [0.0, 1.0])
        assert_allclose(curves[0].values, [1.0, 2.0])

    def test_rows_in_any_order(self):
        """Test load_curves keeps first appearance order and sorts readings by time"""
        text = 'curve_id,t,value\nB,2,5\nA,1,2\nB,0,3\nA,0,1\nB,1,4\n'
        curves = load_curves(self.write('c.csv', text))
        self.assertEqual([c.curve_id for c in curves], ['B', 'A'])
        assert_allclose(curves[0].times, [0, 1, 2])
        assert_allclose(curves[0].values, [3, 4, 5])

    def test_duplicate_observation(self):
        """Test a repeated (curve_id, t) raises FormatError on its line"""
        with self.assertRaises(FormatError) as ctx:
            load_curves(self.write('c.csv', 'curve_id,t,value\nA,0,1\nA,0,2\n'))
        self.assertEqual(ctx.exception.line, 3)

    def test_non_numeric_value(self):
        """Test a non numeric value raises ParseError on its line"""
        with self.assertRaises(ParseError) as ctx:
            load_curves(self.write('c.csv', 'curve_id,t,value\nA,0,1\nA,1,abc\n'))
        self.assertEqual(ctx.exception.line, 3)
        self.assertEqual(ctx.exception.field, 'value')

    def test_bad_header(self):
        """Test a wrong header raises FormatError on line 1"""
        with self.assertRaises(FormatError) as ctx:
            load_curves(self.write('c.csv', 'id,time,value\nA,0,1\n'))
        self.assertEqual(ctx.exception.line, 1)

    def test_round_trip(self):
        """Test saved curves load back unchanged"""
        curves = [RawCurve('x1', [0.0, 0.5, 1.0], [0.1, -2.5, 1e-7]), RawCurve('x2', [0.25, 0.75], [3.0, 4.0])]
        save_curves(curves, self.path('c.csv'))
        again = load_curves(self.path('c.csv'))
        for a, b in zip(curves, again):
            self.assertEqual(a.curve_id, b.curve_id)
            assert_array_equal(a.times, b.times)
            assert_array_equal(a.values, b.values)


class TestLabelLoader(TempDirMixin, unittest.TestCase):
    def test_labels(self):
        """Test load_labels keeps file order"""
        labels = load_labels(self.write('l.csv', 'curve_id,label\nb,2\na,1\nc,3\n'))
        self.assertEqual(list(labels.items()), [('b', 2), ('a', 1), ('c', 3)])

    def test_zero_label(self):
        """Test a zero label raises RangeError"""
        with self.assertRaises(RangeError):
            load_labels(self.write('l.csv', 'curve_id,label\na,0\nb,2\n'), n_classes=4)

    def test_label_above_k(self):
        """Test a label above K raises RangeError"""
        with self.assertRaises(RangeError):
            load_labels(self.write('l.csv', 'curve_id,label\na,5\nb,2\n'), n_classes=4)

    def test_twice_labelled(self):
        """Test a curve labelled twice raises FormatError on the second line"""
        with self.assertRaises(FormatError) as ctx:
            load_labels(self.write('l.csv', 'curve_id,label\na,1\na,2\n'))
        self.assertEqual(ctx.exception.line, 3)

    def test_fractional_label(self):
        """Test a fractional label raises ParseError"""
        with self.assertRaises(ParseError):
            load_labels(self.write('l.csv', 'curve_id,label\na,1.5\n'))

    def test_save(self):
        """Test save_labels writes curve_id,label rows"""
        save_labels(['a', 'b'], [1, 3], self.path('l.csv'))
        self.assertEqual(self.read('l.csv'), 'curve_id,label\na,1\nb,3\n')


class TestJoin(unittest.TestCase):
    def test_join_order(self):
        """Test join keeps the curve order"""
        curves = [RawCurve(i, [0, 1], [0, 0]) for i in ('b', 'a')]
        items, ys = join(curves, {'a': 1, 'b': 2})
        self.assertEqual([c.curve_id for c in items], ['b', 'a'])
        assert_array_equal(ys, [2, 1])

    def test_offenders(self):
        """Test join names curves without labels and labels without curves"""
        curves = [RawCurve(i, [0, 1], [0, 0]) for i in ('a', 'b', 'c')]
        with self.assertRaises(JoinError) as ctx:
            join(curves, {'a': 1, 'c': 2, 'z': 1})
        self.assertEqual(ctx.exception.offenders, ['unlabelled:b', 'no curve:z'])
        self.assertIn('no curve:z', str(ctx.exception))


class TestCoefficientFile(TempDirMixin, unittest.TestCase):
    def test_round_trip(self):
        """Test coefficients and their basis sidecar load back unchanged"""
        for basis in (splines(12, domain_end=480.0), mono((1, 2, 4), domain_end=3.0)):
            samples = random_samples(basis, 6, seed=basis.size)
            save_coefficients(samples, self.path('coef.csv'))
            self.assertTrue(os.path.exists(self.path('coef.csv' + SIDECAR_SUFFIX)))
            again = load_coefficients(self.path('coef.csv'))
            self.assertTrue(again[0].basis.same_as(basis))
            for a, b in zip(samples, again):
                self.assertEqual(a.curve_id, b.curve_id)
                assert_array_equal(a.coefficients, b.coefficients)

    def test_header(self):
        """Test coefficient columns must read c1..cM in order"""
        text = 'curve_id,c1,c2\nA,1.5,2.5\n'
        self.assertEqual(load_coefficients(self.write('coef.csv', text), basis=mono())[0].coefficients.tolist(),
                         [1.5, 2.5])
        with self.assertRaises(FormatError):
            load_coefficients(self.write('bad.csv', 'curve_id,c2,c1\nA,1,2\n'), basis=mono())

    def test_size_mismatch(self):
        """Test a column count that doesn't match the basis raises DimensionError"""
        with self.assertRaises(DimensionError):
            load_coefficients(self.write('coef.csv', 'curve_id,c1,c2,c3\nA,1,2,3\n'), basis=mono())

    def test_missing_sidecar(self):
        """Test a missing basis sidecar raises ParseError"""
        with self.assertRaises(ParseError):
            load_coefficients(self.write('coef.csv', 'curve_id,c1,c2\nA,1,2\n'))

    def test_mixed_bases(self):
        """Test samples in different bases can't share one file"""
        with self.assertRaises(DimensionError):
            save_coefficients(random_samples(mono(), 1) + random_samples(splines(8), 1), self.path('coef.csv'))


class TestModelFile(TempDirMixin, unittest.TestCase):
    def random_fits(self, n: int = 50):
        rng = np.random.default_rng(30)
        curve_basis = splines(10, domain_end=120.0)
        betas = [None, mono((1, 2), domain_end=120.0), splines(6, domain_end=120.0)]
        for i in range(n):
            beta_basis = betas[i % 3]
            m = 0 if beta_basis is None else beta_basis.size
            k = int(rng.integers(2, 6))
            tau = np.cumsum(np.concatenate([[rng.normal()], rng.uniform(0.1, 2, k - 2)]))
            b = rng.normal(0, 0.05, m) * (rng.random(m) > 0.3)
            yield fitted(tau, b, beta_basis=beta_basis, curve_basis=curve_basis, fit_kind='lasso',
                         lasso_lambda=float(rng.uniform(0, 0.1)))

    def test_round_trip_is_exact(self):
        """Test a saved model predicts exactly like the original"""
        samples = random_samples(splines(10, domain_end=120.0), 20, seed=31)
        for fit in self.random_fits():
            text = render_model(fit)
            again = parse_model(text)
            self.assertEqual(render_model(again), text)
            assert_array_equal(again.model.tau, fit.model.tau)
            assert_array_equal(again.model.coefficients, fit.model.coefficients)
            self.assertEqual(again.fit_kind, 'lasso')
            self.assertEqual(again.lasso_lambda, fit.lasso_lambda)
            for rule in ('lad', 'mode'):
                p1, p2 = predict_many(fit, samples, rule), predict_many(again, samples, rule)
                self.assertEqual([p.label for p in p1], [p.label for p in p2])

    def test_file(self):
        """Test save_model writes JSON that renders back to the same text"""
        fit = fitted([-0.5, 0.5], [1.0, -1.0])
        save_model(fit, self.path('model.json'))
        text = self.read('model.json')
        self.assertTrue(text.endswith('}\n'))
        self.assertEqual(json.loads(text)['format_version'], 1)
        self.assertEqual(render_model(load_model(self.path('model.json'))), text)

    def test_unordered_thresholds(self):
        """Test a model with unordered thresholds raises ValidationError"""
        data = model_to_dict(fitted([0.0, 1.0]))
        data['tau'] = [1.0, 0.0]
        with self.assertRaisesRegex(ValidationError, 'thresholds not increasing'):
            parse_model(json.dumps(data))

    def test_unsupported_version(self):
        """Test an unknown format_version raises UnsupportedVersion"""
        data = model_to_dict(fitted([0.0]))
        data['format_version'] = 999
        with self.assertRaises(UnsupportedVersion):
            parse_model(json.dumps(data))

    def test_missing_field(self):
        """Test a missing field raises ParseError naming it"""
        data = model_to_dict(fitted([0.0]))
        del data['curve_basis']
        with self.assertRaises(ParseError) as ctx:
            parse_model(json.dumps(data))
        self.assertEqual(ctx.exception.field, 'curve_basis')

    def test_coefficient_count(self):
        """Test a coefficient count that doesn't match the beta basis raises DimensionError"""
        data = model_to_dict(fitted([0.0], [1.0, 2.0]))
        data['b'] = [1.0]
        with self.assertRaises(DimensionError):
            parse_model(json.dumps(data))

    def test_invalid_json(self):
        """Test truncated JSON raises ParseError"""
        with self.assertRaises(ParseError):
            parse_model('{"format_version": 1,')


class TestWriters(TempDirMixin, unittest.TestCase):
    def test_atomic_write_on_failure(self):
        """Test a failing atomic_write leaves no file behind"""
        with self.assertRaises(RuntimeError):
            with atomic_write(self.path('out.csv')) as fh:
                fh.write('half')
                raise RuntimeError('boom')
        self.assertEqual(os.listdir(self.tmp), [])

    def test_atomic_write_keeps_old_file(self):
        """Test a failing atomic_write leaves the previous file intact"""
        self.write('out.csv', 'old\n')
        with self.assertRaises(RuntimeError):
            with atomic_write(self.path('out.csv')) as fh:
                fh.write('new')
                raise RuntimeError('boom')
        self.assertEqual(self.read('out.csv'), 'old\n')
        self.assertEqual(os.listdir(self.tmp), ['out.csv'])

    def test_grouped_writes_all_or_nothing(self):
        """Test a failing write inside :func:`.atomic_writes` discards the files written before it"""
        with self.assertRaises(FileNotFoundError):
            with atomic_writes():
                save_labels(['a'], [1], self.path('labels.csv'))
                save_labels(['a'], [1], self.path('missing_dir/labels.csv'))
        self.assertEqual(os.listdir(self.tmp), [])

    def test_grouped_writes_land_together(self):
        """Test every file of a successful group is in place, and nothing before the group ends"""
        with atomic_writes():
            save_labels(['a'], [1], self.path('one.csv'))
            with atomic_writes():
                save_labels(['b'], [2], self.path('two.csv'))
            self.assertFalse(os.path.exists(self.path('one.csv')))
            self.assertFalse(os.path.exists(self.path('two.csv')))
        self.assertEqual(sorted(os.listdir(self.tmp)), ['one.csv', 'two.csv'])
        self.assertEqual(self.read('two.csv'), 'curve_id,label\nb,2\n')

    def test_report(self):
        """Test save_report writes one 1-based row per fold"""
        report = CvReport(per_fold=[FoldResult(0, 0.5, 0.25), FoldResult(1, 0.0, 0.0)], arm='folr')
        save_report(report, self.path('folr.csv'))
        self.assertEqual(self.read('folr.csv'), 'fold,mae,accuracy_error\n1,0.5,0.25\n2,0.0,0.0\n')
        save_summary([report, CvReport(per_fold=[FoldResult(0, 1.0, 0.5)], arm='last-value')], self.path('sum.csv'))
        self.assertEqual(self.read('sum.csv'), 'arm,mean_mae,mean_error_rate\nfolr,0.25,0.125\nlast-value,1.0,0.5\n')

    def test_predictions(self):
        """Test prediction files carry class probabilities only when asked to"""
        fit = fitted([-1.0, 1.0], [0.3, 0.1])
        samples = random_samples(mono(), 4)
        ids = [s.curve_id for s in samples]
        save_predictions(ids, predict_many(fit, samples, 'lad'), self.path('lad.csv'))
        self.assertEqual(self.read('lad.csv').splitlines()[0], 'curve_id,predicted_class')
        save_predictions(ids, predict_many(fit, samples, 'mode'), self.path('mode.csv'), with_probs=True)
        rows = self.read('mode.csv').splitlines()
        self.assertEqual(rows[0], 'curve_id,predicted_class,p1,p2,p3')
        self.assertEqual(len(rows), 5)
        for row in rows[1:]:
            self.assertAlmostEqual(sum(float(v) for v in row.split(',')[2:]), 1.0, delta=1e-12)


class TestSyntheticSpecFile(TempDirMixin, unittest.TestCase):
    def test_preset_with_overrides(self):
        """Test a preset description with seed and n_curves overrides"""
        spec = synthetic_spec_from_dict({'preset': 'tint', 'seed': 3, 'n_curves': 50})
        self.assertEqual((spec.n_curves, spec.seed, spec.n_classes), (50, 3, 4))

    def test_full_description(self):
        """Test a complete synthetic design description"""
        data = {
            'n_curves': 20, 'seed': 7, 'noise_sd': 0.05,
            'curve_basis': {'kind': 'bspline', 'order': 4, 'knots': [0, 30, 60, 90, 120], 'domain_end': 120},
            'beta_basis': {'kind': 'monomial', 'degrees': [1, 2], 'domain_end': 120},
            'true_beta': [0.01, -0.0001],
            'true_tau': [-1.0, 1.0],
            'sampling_times': {'start': 0, 'stop': 120, 'step': 1},
            'coef_scale': [1, 1, 1, 1, 1, 1, 0.5],
        }
        spec = load_synthetic_spec(self.write('spec.json', json.dumps(data)))
        self.assertEqual(len(spec.sampling_times), 121)
        self.assertEqual(spec.sampling_times[-1], 120.0)
        self.assertEqual(spec.curve_basis.size, 7)
        self.assertEqual(spec.n_classes, 3)
        self.assertEqual(spec.coef_scale[-1], 0.5)

    def test_missing_field(self):
        """Test a description missing a field raises ParseError"""
        with self.assertRaises(ParseError) as ctx:
            synthetic_spec_from_dict({
                'n_curves': 5, 'true_beta': [1.0],
                'curve_basis': {'kind': 'monomial', 'degrees': [1], 'domain_end': 1},
                'beta_basis': {'kind': 'monomial', 'degrees': [1], 'domain_end': 1},
            })
        self.assertEqual(ctx.exception.field, 'true_tau')

    def test_unknown_preset(self):
        """Test an unknown preset raises ComponentNotFound"""
        with self.assertRaises(ComponentNotFound):
            synthetic_spec_from_dict({'preset': 'sourdough'})

    def test_invalid_json(self):
        """Test truncated JSON raises ParseError"""
        with self.assertRaises(ParseError):
            load_synthetic_spec(self.write('spec.json', '{"preset": '))
