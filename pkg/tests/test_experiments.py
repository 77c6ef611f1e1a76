import logging
import math
import os
import tempfile
import unittest

import yaml
from click.testing import CliRunner

from main import cli
from src import __version__
from src.channel import load_channel_set
from src.experiments import read_csv, write_csv
from src.utils import Config

TINY_CONFIG = {
    'scenario': {
        'user_array': {'count': 1},
        'bs_array': {'count': 2, 'center': [0.0, 20.0, 0.0]},
        'multi_layer': {'layers': 2, 'cols': 2, 'rows': 2, 'depths_m': [0.02, 0.02]},
        'single_layer': {'cols': 2, 'rows': 2, 'depth_m': 0.02},
    },
    'optimizer': {'restarts': 2, 'seed': 11, 'max_iters': 50},
    'experiments': {
        'snr_sweep': {'start_dbw': 0.0, 'stop_dbw': 2.0, 'step_db': 2.0},
        'pattern': {'start_deg': -90.0, 'stop_deg': 90.0, 'step_deg': 5.0},
        'amplitude_bound': {'b': 2, 'a_m': 0.02, 'd1_m': 0.1, 'd2_m': 0.1,
                            'target_index': 0, 'trials': 50},
    },
}


class TestExperimentCli(unittest.TestCase):
    """
    End-to-end runs of every CLI subcommand on a tiny configuration.
    """

    def setUp(self):
        """
        Write the tiny configuration into a scratch directory.
        """
        logging.basicConfig(level=logging.INFO)
        self.tmp = tempfile.TemporaryDirectory()
        self.config_path = os.path.join(self.tmp.name, 'tiny.yaml')
        with open(self.config_path, 'w') as f:
            yaml.safe_dump(TINY_CONFIG, f)
        self.runner = CliRunner()

    def tearDown(self):
        """
        Remove the scratch directory.
        """
        self.tmp.cleanup()

    def _run(self, *args, out: str = 'out', config_path=None):
        out_dir = os.path.join(self.tmp.name, out)
        result = self.runner.invoke(cli, ['--config', config_path or self.config_path,
                                          '--out', out_dir, '--no-progress', *args])
        return result, out_dir

    def _ok(self, *args, out: str = 'out'):
        result, out_dir = self._run(*args, out=out)
        self.assertEqual(result.exit_code, 0, result.output)
        return out_dir

    def test_version(self):
        """
        The version command prints the package version.
        """
        result = self.runner.invoke(cli, ['version'])
        self.assertEqual(result.exit_code, 0)
        self.assertIn(f"v{__version__}", result.output)

    def test_snr_sweep(self):
        """
        Every variant gets a row per power; the reflective surface leads by 1/kappa^2.
        """
        out = self._ok('--seed', '7', 'snr-sweep')
        meta, columns, rows = read_csv(os.path.join(out, 'snr_sweep.csv'))
        self.assertEqual(columns, ['variant', 'p_max_dbw', 'snr_db'])
        self.assertEqual(meta['seed'], '7')
        self.assertEqual(meta['config'], Config(self.config_path).fingerprint())
        self.assertEqual(len(rows), 8)
        snr = {(v, float(p)): float(s) for v, p, s in rows}
        for p in (0.0, 2.0):
            gap = snr[('single-layer-bss', p)] - snr[('single-layer-us', p)]
            self.assertAlmostEqual(gap, 10 * math.log10(1 / 0.64), places=6)
        self.assertAlmostEqual(snr[('none', 2.0)] - snr[('none', 0.0)], 2.0, places=9)
        self.assertTrue(os.path.exists(os.path.join(out, 'run_summary.md')))
        with open(os.path.join(out, 'run_summary.md')) as f:
            self.assertIn('# Run Summary: snr-sweep', f.read())

    def test_single_point(self):
        """
        Explicit --point values replace the configured sweep.
        """
        out = self._ok('snr-sweep', '--point', '5')
        _, _, rows = read_csv(os.path.join(out, 'snr_sweep.csv'))
        self.assertEqual({float(r[1]) for r in rows}, {5.0})

    def test_sweep_rows_ignore_worker_count(self):
        """
        Sweep points run on a thread pool but rows come out in the same sorted order.
        """
        threaded = dict(TINY_CONFIG, optimizer=dict(TINY_CONFIG['optimizer'], workers=3))
        threaded_path = os.path.join(self.tmp.name, 'threaded.yaml')
        with open(threaded_path, 'w') as f:
            yaml.safe_dump(threaded, f)
        serial = self._ok('snr-sweep', out='serial')
        result, pooled = self._run('snr-sweep', out='pooled', config_path=threaded_path)
        self.assertEqual(result.exit_code, 0, result.output)
        _, _, serial_rows = read_csv(os.path.join(serial, 'snr_sweep.csv'))
        _, _, pooled_rows = read_csv(os.path.join(pooled, 'snr_sweep.csv'))
        self.assertEqual(serial_rows, pooled_rows)
        self.assertEqual([r[0] for r in pooled_rows], sorted(r[0] for r in pooled_rows))

    def test_reruns_are_byte_identical(self):
        """
        Same config and seed produce the same bytes.
        """
        first = self._ok('converge', out='a')
        second = self._ok('converge', out='b')
        with open(os.path.join(first, 'convergence.csv'), 'rb') as fa, \
                open(os.path.join(second, 'convergence.csv'), 'rb') as fb:
            self.assertEqual(fa.read(), fb.read())

    def test_convergence_is_monotone(self):
        """
        Every surface variant's trace is non-decreasing; the direct link is left out.
        """
        out = self._ok('converge')
        _, _, rows = read_csv(os.path.join(out, 'convergence.csv'))
        traces = {}
        for variant, it, value in rows:
            traces.setdefault(variant, []).append((int(it), float(value)))
        self.assertEqual(set(traces), {'multi-layer', 'single-layer-us', 'single-layer-bss'})
        for values in traces.values():
            snrs = [v for _, v in sorted(values)]
            for a, b in zip(snrs, snrs[1:]):
                self.assertGreaterEqual(b, a - 1e-9)

    def test_power_dist(self):
        """
        One power file per layer and an EAR summary with an overall multi-layer row.
        """
        out = self._ok('power-dist', '--epsilon', '0.5')
        for name in ('power_multi-layer_layer1.csv', 'power_multi-layer_layer2.csv',
                     'power_single-layer-us_layer1.csv', 'power_single-layer-bss_layer1.csv'):
            _, columns, rows = read_csv(os.path.join(out, name))
            self.assertEqual(columns, ['row', 'col', 'power_dbw'])
            self.assertEqual(len(rows), 4)
        _, _, rows = read_csv(os.path.join(out, 'ear_summary.csv'))
        overall = [r for r in rows if r[1] == 'overall']
        self.assertEqual(len(overall), 1)
        self.assertEqual(overall[0][0], 'multi-layer')
        for r in rows:
            self.assertEqual(float(r[2]), 0.5)
            self.assertTrue(0.0 < float(r[5]) <= 1.0)

    def test_pattern(self):
        """
        Patterns for both multi-layer layers and each single layer share one scale.
        """
        out = self._ok('pattern')
        _, _, rows = read_csv(os.path.join(out, 'pattern.csv'))
        labels = sorted({r[0] for r in rows})
        self.assertEqual(labels, ['multi-layer', 'multi-layer:layer1',
                                  'single-layer-bss', 'single-layer-us'])
        self.assertEqual(len(rows), 4 * 37)
        self.assertEqual(max(float(r[2]) for r in rows), 0.0)
        _, columns, summary = read_csv(os.path.join(out, 'pattern_summary.csv'))
        self.assertEqual(columns[-1], 'mainlobe_to_sidelobe_db')
        self.assertEqual(len(summary), 4)

    def test_lemma1(self):
        """
        The sampled amplitudes respect the bound and the construction cancels the target.
        """
        out = self._ok('lemma1')
        _, _, elements = read_csv(os.path.join(out, 'lemma1_elements.csv'))
        self.assertEqual(len(elements), 4)
        meta, _, rows = read_csv(os.path.join(out, 'lemma1_summary.csv'))
        summary = dict(rows)
        self.assertEqual(meta['seed'], '11')
        self.assertEqual(summary['violations'], '0')
        self.assertEqual(summary['trials'], '50')
        self.assertLessEqual(float(summary['ratio']), 1.0)
        self.assertLess(float(summary['zero_residual_over_zeta']), 1e-8)

    def test_sinr_eval(self):
        """
        Two users and a sum-rate row.
        """
        out = self._ok('sinr-eval', '--combiner', 'shared')
        meta, _, rows = read_csv(os.path.join(out, 'sinr.csv'))
        self.assertEqual(meta['combiner'], 'shared')
        self.assertEqual([r[0] for r in rows], ['1', '2', 'sum'])
        self.assertAlmostEqual(float(rows[2][2]), float(rows[0][2]) + float(rows[1][2]), places=12)

    def test_dof_example(self):
        """
        One layer-1 map and one layer-2 map per phase profile.
        """
        out = self._ok('dof-example')
        for name in ('dof_layer1.csv', 'dof_layer2_none.csv', 'dof_layer2_random.csv',
                     'dof_layer2_gradual.csv', 'dof_ear.csv'):
            self.assertTrue(os.path.exists(os.path.join(out, name)), name)
        _, _, rows = read_csv(os.path.join(out, 'dof_ear.csv'))
        self.assertEqual([r[0] for r in rows], ['any', 'none', 'random', 'gradual'])

    def test_export_channels(self):
        """
        Exported channels reload with the configured shapes.
        """
        out = self._ok('export-channels', '--variant', 'multi-layer')
        ch = load_channel_set(os.path.join(out, 'channels', 'multi-layer'))
        self.assertEqual(ch.num_layers, 2)
        self.assertEqual(ch.f[0].shape, (4, 1))
        self.assertEqual(ch.f[1].shape, (4, 4))
        self.assertEqual(ch.g.shape, (4, 2))
        self.assertTrue(os.path.exists(os.path.join(out, 'channels', 'multi-layer', 'direct.csv')))

    def test_invalid_config_is_reported(self):
        """
        A bad kappa aborts with exit code 1 and an error log.
        """
        bad = os.path.join(self.tmp.name, 'bad.yaml')
        with open(bad, 'w') as f:
            yaml.safe_dump({'scenario': {'kappa': 1.5}}, f)
        result, out_dir = self._run('snr-sweep', config_path=bad)
        self.assertEqual(result.exit_code, 1)
        self.assertIn('❌ Error', result.output)
        self.assertTrue(os.path.exists(os.path.join(out_dir, 'errors', 'error_log.csv')))


class TestCsvIo(unittest.TestCase):
    """
    Test cases for the experiment CSV emitter.
    """

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_header_and_special_values(self):
        """
        Provenance lines come first; floats keep full precision and non-finite values stay readable.
        """
        path = write_csv(os.path.join(self.tmp.name, 'x.csv'), {'seed': 3, 'config': 'abc'},
                         ['name', 'value'], [('third', 1 / 3), ('nan', float('nan')),
                                             ('floor', float('-inf'))])
        with open(path) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[:3], ['# seed=3', '# config=abc', 'name,value'])
        meta, columns, rows = read_csv(path)
        self.assertEqual(meta, {'seed': '3', 'config': 'abc'})
        self.assertEqual(float(rows[0][1]), 1 / 3)
        self.assertEqual(rows[1][1], 'nan')
        self.assertEqual(rows[2][1], '-inf')


if __name__ == '__main__':
    unittest.main()
