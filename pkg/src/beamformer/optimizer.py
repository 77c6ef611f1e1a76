"""
Alternating maximization of the detection SNR.

One sweep updates the combiner, then every phase layer from the user side
outward, then the transmit vector. Each update is the exact maximizer of its
block, so the SNR never decreases from sweep to sweep.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Dict, Optional, Tuple, Union
import logging

import numpy as np

from .cascade import snr
from .state import BeamformerState, OptimizerConfig, RunTrace
from .updates import update_theta, update_v, update_w
from ..channel import ChannelSet
from ..scenario import db

logger = logging.getLogger(__name__)

IterationCallback = Callable[[int, BeamformerState, float], None]
Result = Tuple[BeamformerState, RunTrace]


def initial_state(ch: ChannelSet, p_max: float, rng: np.random.Generator) -> BeamformerState:
    """
    Uniform random phases on every layer, all-ones combiner and an all-ones
    transmit vector scaled to the power budget.
    """
    theta = tuple(np.exp(1j * rng.uniform(-np.pi, np.pi, ch.elements))
                  for _ in range(ch.num_layers))
    k = ch.user_antennas
    w = np.full(k, np.sqrt(p_max / k), dtype=complex)
    v = np.ones(ch.bs_antennas, dtype=complex)
    return BeamformerState(w=w, theta=theta, v=v)


def sweep(state: BeamformerState, ch: ChannelSet, kappa: float, p_max: float) -> BeamformerState:
    """One pass of v, theta_1..theta_L, w updates."""
    state = state.with_v(update_v(state, ch, kappa))
    for l in range(1, ch.num_layers + 1):
        state = state.with_theta(l, update_theta(state, ch, kappa, l))
    return state.with_w(update_w(state, ch, kappa, p_max))


def optimize(ch: ChannelSet, kappa: float, noise_power: float, p_max: float,
             config: Optional[OptimizerConfig] = None,
             on_iteration: Optional[IterationCallback] = None,
             seed: Union[int, np.random.SeedSequence, None] = None,
             initial: Optional[BeamformerState] = None) -> Result:
    """
    Run sweeps until the relative SNR change drops below ``config.tolerance``
    or ``config.max_iters`` sweeps are done.

    Hitting the iteration cap is not an error; the trace records
    ``converged=False``.

    Args:
        seed: overrides ``config.seed`` for the phase initialization.
        initial: start from this state instead of the random one.
    """
    config = config or OptimizerConfig()
    rng = np.random.default_rng(config.seed if seed is None else seed)
    state = initial if initial is not None else initial_state(ch, p_max, rng)

    previous = snr(state, ch, kappa, noise_power)
    trace = RunTrace(initial_snr=previous, tolerance=config.tolerance)
    for iteration in range(1, config.max_iters + 1):
        state = sweep(state, ch, kappa, p_max)
        current = snr(state, ch, kappa, noise_power)
        trace.snr_per_iteration.append(current)
        logger.debug(f"iteration {iteration}: SNR {current:.6e}")
        if on_iteration is not None:
            on_iteration(iteration, state, current)
        change = abs(current - previous) / previous if previous > 0 else np.inf
        previous = current
        if change < config.tolerance:
            trace.converged = True
            break

    if not trace.converged:
        logger.warning(f"Optimizer stopped after {config.max_iters} iterations without "
                       f"reaching relative tolerance {config.tolerance:g}")
    return state, trace


def optimize_best(ch: ChannelSet, kappa: float, noise_power: float, p_max: float,
                  config: Optional[OptimizerConfig] = None) -> Result:
    """
    Best of ``config.restarts`` independently seeded runs.

    Restart seeds are spawned from ``config.seed``; runs execute on
    ``config.workers`` threads. The winner is the highest final SNR, with
    ties going to the lowest restart index, so the result does not depend on
    scheduling.
    """
    config = config or OptimizerConfig()
    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)

    def run(index: int) -> Result:
        state, trace = optimize(ch, kappa, noise_power, p_max, config, seed=seeds[index])
        trace.restart = index
        return state, trace

    results: Dict[int, Result] = {}
    if config.workers > 1 and config.restarts > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as ex:
            futures = {ex.submit(run, i): i for i in range(config.restarts)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()
    else:
        for i in range(config.restarts):
            results[i] = run(i)

    best = 0
    for i in range(1, config.restarts):
        if results[i][1].final_snr > results[best][1].final_snr:
            best = i
    logger.info(f"Best of {config.restarts} restarts: #{best} with SNR "
                f"{db(results[best][1].final_snr):.3f} dB")
    return results[best]
