import logging
import os
import tempfile
import unittest
from unittest.mock import patch

import yaml

from src.errors import ConfigError
from src.utils import CONFIG_ENV_VAR, Config


class TestConfig(unittest.TestCase):
    """
    Test cases for the YAML configuration layer.
    """

    def setUp(self):
        """
        Give every test a scratch directory for its YAML files.
        """
        logging.basicConfig(level=logging.DEBUG)
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, 'config.yaml')

    def tearDown(self):
        """
        Remove the scratch directory.
        """
        self.tmp.cleanup()

    def _write(self, data) -> str:
        with open(self.path, 'w') as f:
            yaml.safe_dump(data, f)
        return self.path

    def test_missing_file_gives_defaults(self):
        """
        A missing file falls back to the built-in defaults.
        """
        config = Config(os.path.join(self.tmp.name, 'absent.yaml'))
        self.assertEqual(config.get('scenario.kappa'), 0.8)
        self.assertEqual(config.get('optimizer.seed'), 2024)
        self.assertEqual(config.get('scenario.nothing.here', 'fallback'), 'fallback')

    def test_defaults_are_not_shared(self):
        """
        Editing one instance leaves the class defaults untouched.
        """
        config = Config(os.path.join(self.tmp.name, 'absent.yaml'))
        config.set('scenario.kappa', 0.5)
        self.assertEqual(Config.DEFAULT_CONFIG['scenario']['kappa'], 0.8)

    def test_file_merges_over_defaults(self):
        """
        Values from the file win; missing keys keep their defaults.
        """
        config = Config(self._write({'scenario': {'kappa': 0.6}, 'optimizer': {'restarts': 2}}))
        self.assertEqual(config.get('scenario.kappa'), 0.6)
        self.assertEqual(config.get('scenario.frequency_hz'), 2.5e9)
        self.assertEqual(config.optimizer_settings().restarts, 2)

    def test_set_and_save(self):
        """
        In-memory edits survive a save and reload.
        """
        config = Config(self._write({}))
        config.set('experiments.pattern.step_deg', 5.0)
        config.save()
        self.assertEqual(Config(self.path).get('experiments.pattern.step_deg'), 5.0)

    def test_fingerprint(self):
        """
        The fingerprint tracks content, not the file it came from.
        """
        a = Config(self._write({'scenario': {'kappa': 0.7}}))
        b = Config(os.path.join(self.tmp.name, 'absent.yaml'))
        b.set('scenario.kappa', 0.7)
        self.assertEqual(a.fingerprint(), b.fingerprint())
        self.assertEqual(len(a.fingerprint()), 16)
        b.set('scenario.kappa', 0.71)
        self.assertNotEqual(a.fingerprint(), b.fingerprint())

    def test_env_var_selects_file(self):
        """
        The environment variable names the file when no path is given.
        """
        self._write({'optimizer': {'seed': 99}})
        with patch.dict(os.environ, {CONFIG_ENV_VAR: self.path}):
            self.assertEqual(Config().get('optimizer.seed'), 99)

    def test_validated_sections(self):
        """
        The default configuration passes validation.
        """
        config = Config(os.path.join(self.tmp.name, 'absent.yaml'))
        self.assertEqual(config.scenario_config().multi_layer.cols, 8)
        self.assertAlmostEqual(config.experiment_settings().power_distribution.epsilon, 1 / 6)
        self.assertEqual(len(config.experiment_settings().snr_sweep.points()), 16)

    def test_invalid_values(self):
        """
        Out-of-range values and unknown keys raise ConfigError.
        """
        with self.assertRaises(ConfigError):
            Config(self._write({'scenario': {'kappa': 1.5}})).scenario_config()
        with self.assertRaises(ConfigError):
            Config(self._write({'scenario': {'multi_layer': {'depths_m': [0.02]}}})).scenario_config()
        with self.assertRaises(ConfigError):
            Config(self._write({'optimizer': {'tolerence': 1e-3}})).optimizer_settings()

    def test_unparseable_file(self):
        """
        Broken YAML and non-mapping documents are rejected at load time.
        """
        with open(self.path, 'w') as f:
            f.write('scenario: [unclosed\n')
        with self.assertRaises(ConfigError):
            Config(self.path)
        with open(self.path, 'w') as f:
            f.write('- just\n- a list\n')
        with self.assertRaises(ConfigError):
            Config(self.path)


if __name__ == '__main__':
    unittest.main()
