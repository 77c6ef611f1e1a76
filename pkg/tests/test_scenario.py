import logging
import unittest

from src.errors import ConfigError
from src.scenario import (
    ScenarioConfig,
    SPEED_OF_LIGHT,
    Variant,
    build_scenario,
    db,
    dbw_to_watts,
    wavelength_for,
)


class TestScenario(unittest.TestCase):
    """
    Test cases for building scenario variants from configuration.
    """

    def setUp(self):
        logging.basicConfig(level=logging.DEBUG)
        self.cfg = ScenarioConfig()

    def test_multi_layer(self):
        """
        Two 8 x 12 layers stacked 2 cm apart in front of the user.
        """
        scn = build_scenario(self.cfg, Variant.MULTI_LAYER)
        self.assertEqual(scn.num_layers, 2)
        self.assertEqual(scn.elements_per_layer, 96)
        self.assertAlmostEqual(scn.layers[0].plane_y, 0.02)
        self.assertAlmostEqual(scn.layers[1].plane_y, 0.04)
        self.assertAlmostEqual(scn.layers[0].element_size, SPEED_OF_LIGHT / 2.5e9 / 2)
        self.assertEqual((scn.user_antennas, scn.bs_antennas), (2, 8))
        self.assertAlmostEqual(scn.kappa, 0.8)

    def test_single_layer_variants(self):
        """
        The single-layer surfaces have 192 elements; only the reflective one is loss-free.
        """
        us = build_scenario(self.cfg, 'single-layer-us')
        bss = build_scenario(self.cfg, Variant.SINGLE_LAYER_BSS)
        self.assertEqual(us.elements_per_layer, 192)
        self.assertEqual(bss.elements_per_layer, 192)
        self.assertAlmostEqual(us.kappa, 0.8)
        self.assertEqual(bss.kappa, 1.0)
        self.assertFalse(us.reflective)
        self.assertTrue(bss.reflective)

    def test_no_surface(self):
        """
        The direct-link variant has no layers.
        """
        scn = build_scenario(self.cfg, Variant.NONE)
        self.assertEqual(scn.num_layers, 0)
        self.assertEqual(scn.grids(), [])

    def test_power_override(self):
        """
        An explicit dBW budget replaces the configured one.
        """
        scn = build_scenario(self.cfg, Variant.MULTI_LAYER, p_max_dbw=10.0)
        self.assertAlmostEqual(scn.p_max, 10.0)
        self.assertAlmostEqual(scn.with_power(2.0).p_max, 2.0)

    def test_translation(self):
        """
        Moving the user carries its surfaces along and leaves the BS in place.
        """
        scn = build_scenario(self.cfg, Variant.MULTI_LAYER)
        moved = scn.translated(1.0, 0.5, -0.2)
        self.assertAlmostEqual(moved.user_array.center.x, 1.0)
        self.assertAlmostEqual(moved.layers[1].plane_y, 0.54)
        self.assertEqual(moved.layers[0].center_xz, (1.0, -0.2))
        self.assertEqual(moved.bs_array, scn.bs_array)

    def test_invalid_geometry(self):
        """
        A BS inside the surface stack is rejected.
        """
        cfg = ScenarioConfig.model_validate({'bs_array': {'count': 2, 'center': (0.0, 0.03, 0.0)}})
        with self.assertRaises(ConfigError):
            build_scenario(cfg, Variant.MULTI_LAYER)

    def test_unit_helpers(self):
        """
        dB and wavelength conversions.
        """
        self.assertAlmostEqual(dbw_to_watts(10.0), 10.0)
        self.assertAlmostEqual(db(100.0), 20.0)
        self.assertEqual(db(0.0), float('-inf'))
        self.assertAlmostEqual(wavelength_for(2.5e9), 0.1199169832, places=9)


if __name__ == '__main__':
    unittest.main()
