"""Far-field (Type I) free-space channel from Friis' formula."""

import math

import numpy as np


def friis_coefficient(distance, wavelength: float):
    """Complex coefficient lambda/(4 pi d) * exp(-j 2 pi d / lambda)."""
    distance = np.asarray(distance, dtype=float)
    if np.any(distance <= 0):
        raise ValueError("Friis distance must be positive")
    return wavelength / (4.0 * math.pi * distance) * np.exp(-2j * math.pi * distance / wavelength)


def friis_matrix(sources: np.ndarray, targets: np.ndarray, wavelength: float) -> np.ndarray:
    """
    Coefficients between every source (rows) and target (columns).

    ``sources`` is (S, 3), ``targets`` is (T, 3); the result is (S, T) with
    exact pairwise distances for both magnitude and phase.
    """
    diff = np.asarray(sources, dtype=float)[:, None, :] - np.asarray(targets, dtype=float)[None, :, :]
    return friis_coefficient(np.linalg.norm(diff, axis=-1), wavelength)
