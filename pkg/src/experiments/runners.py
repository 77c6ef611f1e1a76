"""
Experiment runners behind the CLI subcommands.

Each runner reads its settings from the :class:`ExperimentContext`, writes
CSV files under ``ctx.out_dir`` and returns their paths. Rows are emitted in
a fixed sorted order, so outputs depend only on the config and the seed.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence
import logging
import math

import numpy as np
from tqdm import tqdm

from .csv_io import write_csv
from .tracker import ExperimentTracker
from .. import __version__
from ..amplitude_bound import (
    AmplitudeBoundScenario,
    construct_zero,
    element_integrals,
    verify_bound,
    zeta_n_partitioned,
)
from ..beamformer import (
    BeamformerState,
    OptimizerConfig,
    no_ris_baseline,
    optimize_best,
)
from ..channel import ChannelSet, assemble_channels, direct_channel, save_channel_set, save_complex_matrix
from ..errors import PolygonInfeasible
from ..metrics import (
    UserLink,
    angle_grid,
    ear,
    layer_power,
    mainlobe_to_sidelobe_db,
    normalize_patterns,
    phase_profile,
    radiation_pattern,
    sinr_eval,
)
from ..scenario import Scenario, Variant, build_scenario, db, dbw_to_watts
from ..utils.config import Config

logger = logging.getLogger(__name__)


@dataclass
class ExperimentContext:
    """Resolved configuration, overrides and shared caches of one CLI run."""
    config: Config
    out_dir: Path
    seed: Optional[int] = None
    restarts: Optional[int] = None
    progress: bool = True
    tracker: ExperimentTracker = field(default_factory=ExperimentTracker)
    _channels: Dict[Variant, ChannelSet] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        self.scenario_cfg = self.config.scenario_config()
        self.settings = self.config.experiment_settings()
        opt = self.config.optimizer_settings()
        self.optimizer = OptimizerConfig(
            tolerance=opt.tolerance,
            max_iters=opt.max_iters,
            seed=opt.seed if self.seed is None else self.seed,
            restarts=opt.restarts if self.restarts is None else self.restarts,
            workers=opt.workers,
        )

    def meta(self, experiment: str) -> Dict[str, object]:
        return {
            'experiment': experiment,
            'config': self.config.fingerprint(),
            'seed': self.optimizer.seed,
            'restarts': self.optimizer.restarts,
            'version': __version__,
        }

    def variants(self) -> List[Variant]:
        return [Variant(v) for v in self.settings.variants]

    def scenario(self, variant: Variant, p_max_dbw: Optional[float] = None) -> Scenario:
        return build_scenario(self.scenario_cfg, variant, p_max_dbw)

    def channels(self, variant: Variant) -> ChannelSet:
        # the reflective surface shares the single-layer geometry
        key = Variant.SINGLE_LAYER_US if variant is Variant.SINGLE_LAYER_BSS else variant
        if key not in self._channels:
            self._channels[key] = assemble_channels(self.scenario(key))
        return self._channels[key]

    def iterate(self, items, desc: str, total: Optional[int] = None):
        return tqdm(items, desc=desc, total=total, disable=not self.progress, leave=False)


def _optimized(ctx: ExperimentContext, variant: Variant, p_max: float):
    scenario = ctx.scenario(variant)
    return optimize_best(ctx.channels(variant), scenario.kappa, scenario.noise_power, p_max,
                         ctx.optimizer)


def _snr_db(ctx: ExperimentContext, variant: Variant, p_max_dbw: float) -> float:
    scenario = ctx.scenario(variant, p_max_dbw)
    if variant is Variant.NONE:
        return db(no_ris_baseline(direct_channel(scenario), scenario.noise_power, scenario.p_max))
    _, trace = _optimized(ctx, variant, scenario.p_max)
    return db(trace.final_snr)


def run_snr_sweep(ctx: ExperimentContext, points: Optional[Sequence[float]] = None) -> List[Path]:
    """Best-of-restarts detection SNR for every variant and transmit power."""
    points = list(points) if points is not None else ctx.settings.snr_sweep.points()
    ctx.tracker.begin_stage("SNR sweep")
    results: Dict[tuple, float] = {}
    jobs = [(v, p) for v in ctx.variants() for p in points]
    # fill the channel cache before worker threads read it
    for variant in ctx.variants():
        if variant is not Variant.NONE:
            ctx.channels(variant)
    with ThreadPoolExecutor(max_workers=ctx.optimizer.workers) as ex:
        futures = {ex.submit(_snr_db, ctx, v, p): (v.value, p) for v, p in jobs}
        for future in ctx.iterate(as_completed(futures), "snr-sweep", total=len(futures)):
            name, p = futures[future]
            results[(name, p)] = future.result()
            logger.info(f"{name} @ {p:g} dBW: {results[(name, p)]:.3f} dB")
    rows = [(v, p, results[(v, p)]) for v, p in sorted(results)]
    path = write_csv(ctx.out_dir / 'snr_sweep.csv', ctx.meta('snr-sweep'),
                     ['variant', 'p_max_dbw', 'snr_db'], rows)

    for label, a, b in (("BSS minus US gap (dB)", Variant.SINGLE_LAYER_BSS, Variant.SINGLE_LAYER_US),
                        ("multi-layer minus single-layer US gap (dB)", Variant.MULTI_LAYER,
                         Variant.SINGLE_LAYER_US)):
        gaps = [results[(a.value, p)] - results[(b.value, p)] for p in points
                if (a.value, p) in results and (b.value, p) in results]
        if gaps:
            ctx.tracker.log_result(label, f"{np.mean(gaps):.4f}")
    ctx.tracker.end_stage(f"{len(rows)} points")
    ctx.tracker.log_output(str(path))
    return [path]


def run_convergence(ctx: ExperimentContext) -> List[Path]:
    """SNR after every sweep of the best restart, per surface variant."""
    p_dbw = ctx.settings.convergence.p_max_dbw
    ctx.tracker.begin_stage("Convergence")
    ctx.tracker.log_decision("No-RIS variant omitted",
                             "its optimum is closed-form and has no iterations")
    rows = []
    for variant in ctx.iterate([v for v in ctx.variants() if v is not Variant.NONE], "converge"):
        _, trace = _optimized(ctx, variant, dbw_to_watts(p_dbw))
        values = [trace.initial_snr, *trace.snr_per_iteration]
        rows.extend((variant.value, it, db(s)) for it, s in enumerate(values))
        ctx.tracker.log_result(f"{variant.value} iterations", trace.iterations)
        if not trace.converged:
            ctx.tracker.log_error(f"{variant.value} did not converge in {trace.iterations} iterations")
    rows.sort(key=lambda r: (r[0], r[1]))
    path = write_csv(ctx.out_dir / 'convergence.csv', ctx.meta('converge'),
                     ['variant', 'iteration', 'snr_db'], rows)
    ctx.tracker.end_stage(f"P_max = {p_dbw:g} dBW")
    ctx.tracker.log_output(str(path))
    return [path]


def _power_rows(dist, grid):
    for n, p in enumerate(dist.per_element_power):
        row, col = divmod(n, grid.cols)
        yield row, col, db(float(p))


def run_power_dist(ctx: ExperimentContext, epsilon: Optional[float] = None) -> List[Path]:
    """Per-layer incident power of the optimized surfaces and their EAR."""
    epsilon = ctx.settings.power_distribution.epsilon if epsilon is None else epsilon
    p_max = dbw_to_watts(ctx.scenario_cfg.p_max_dbw)
    ctx.tracker.begin_stage("Power distribution")
    paths, summary = [], []
    for variant in ctx.iterate([v for v in ctx.variants() if v is not Variant.NONE], "power-dist"):
        scenario = ctx.scenario(variant)
        ch = ctx.channels(variant)
        state, _ = _optimized(ctx, variant, p_max)
        grids = scenario.grids()
        ratios = []
        for l in range(1, ch.num_layers + 1):
            dist = layer_power(state, ch, scenario.kappa, l)
            paths.append(write_csv(ctx.out_dir / f"power_{variant.value}_layer{l}.csv",
                                   ctx.meta('power-dist'), ['row', 'col', 'power_dbw'],
                                   _power_rows(dist, grids[l - 1])))
            result = ear(dist, epsilon)
            ratios.append(result.ratio)
            summary.append((variant.value, str(l), epsilon, result.activated_count,
                            result.total_count, result.ratio))
        if len(ratios) > 1:
            summary.append((variant.value, 'overall', epsilon, '', '', float(np.mean(ratios))))
        ctx.tracker.log_result(f"{variant.value} EAR", ", ".join(f"{r:.1%}" for r in ratios))
    paths.append(write_csv(ctx.out_dir / 'ear_summary.csv', ctx.meta('power-dist'),
                           ['variant', 'layer', 'epsilon', 'activated', 'elements', 'ratio'],
                           summary))
    ctx.tracker.end_stage(f"epsilon = {epsilon:.6g}")
    for p in paths:
        ctx.tracker.log_output(str(p))
    return paths


def run_pattern(ctx: ExperimentContext, angles: Optional[np.ndarray] = None) -> List[Path]:
    """Azimuth patterns of the last layer (and layer 1 of stacked surfaces)."""
    cfg = ctx.settings.pattern
    angles = angle_grid(cfg.start_deg, cfg.stop_deg, cfg.step_deg) if angles is None else angles
    p_max = dbw_to_watts(ctx.scenario_cfg.p_max_dbw)
    ctx.tracker.begin_stage("Radiation pattern")
    labels, patterns = [], []
    for variant in ctx.iterate([v for v in ctx.variants() if v is not Variant.NONE], "pattern"):
        scenario = ctx.scenario(variant)
        ch = ctx.channels(variant)
        state, _ = _optimized(ctx, variant, p_max)
        layers = range(1, ch.num_layers + 1) if ch.num_layers > 1 else [1]
        for l in layers:
            labels.append(variant.value if l == ch.num_layers else f"{variant.value}:layer{l}")
            patterns.append(radiation_pattern(state, ch, scenario.kappa, scenario, angles,
                                              layer=l, normalize=False))
    patterns = normalize_patterns(patterns)
    order = sorted(range(len(labels)), key=lambda i: labels[i])
    rows = [(labels[i], float(deg), float(g))
            for i in order for deg, g in zip(patterns[i].angles_deg, patterns[i].gain_db)]
    paths = [write_csv(ctx.out_dir / 'pattern.csv', ctx.meta('pattern'),
                       ['variant', 'angle_deg', 'gain_db'], rows)]
    summary = []
    for i in order:
        mlsl = mainlobe_to_sidelobe_db(patterns[i])
        summary.append((labels[i], math.degrees(patterns[i].peak_angle), patterns[i].peak_db, mlsl))
        ctx.tracker.log_result(f"{labels[i]} mainlobe-to-sidelobe (dB)", f"{mlsl:.2f}")
    paths.append(write_csv(ctx.out_dir / 'pattern_summary.csv', ctx.meta('pattern'),
                           ['variant', 'peak_angle_deg', 'peak_db', 'mainlobe_to_sidelobe_db'],
                           summary))
    ctx.tracker.end_stage(f"{len(angles)} angles")
    for p in paths:
        ctx.tracker.log_output(str(p))
    return paths


def amplitude_bound_scenario(ctx: ExperimentContext) -> AmplitudeBoundScenario:
    s = ctx.settings.amplitude_bound
    wavelength = s.wavelength_m or ctx.scenario(Variant.NONE).wavelength
    return AmplitudeBoundScenario(b=s.b, a=s.a_m, d1=s.d1_m, d2=s.d2_m,
                                  wavelength=wavelength, target_index=s.target_index)


def run_lemma1(ctx: ExperimentContext) -> List[Path]:
    """Element integrals, the sampled amplitude bound and the zero construction."""
    scn = amplitude_bound_scenario(ctx)
    trials = ctx.settings.amplitude_bound.trials
    meta = ctx.meta('lemma1')
    ctx.tracker.begin_stage("Amplitude bound")
    integrals = element_integrals(scn)
    paths = [write_csv(ctx.out_dir / 'lemma1_elements.csv', meta,
                       ['index', 'magnitude', 'phase_rad'],
                       [(c.index, c.magnitude, c.phase) for c in integrals])]
    report = verify_bound(scn, trials, ctx.optimizer.seed)
    try:
        _, residual = construct_zero(scn)
        infeasible = ''
    except PolygonInfeasible as exc:
        logger.warning(f"Zero construction infeasible: {exc}")
        ctx.tracker.log_error(str(exc))
        residual, infeasible = float('nan'), ' '.join(str(i) for i in exc.indices)
    summary = [
        ('zeta', report.zeta),
        ('zeta_partitioned', zeta_n_partitioned(scn)),
        ('sum_abs_c', report.aligned_max),
        ('ratio', report.ratio),
        ('max_sampled', report.max_sampled),
        ('trials', report.trials),
        ('violations', report.violations),
        ('zero_residual', residual),
        ('zero_residual_over_zeta', residual / report.zeta),
        ('infeasible_quaternion', infeasible),
    ]
    paths.append(write_csv(ctx.out_dir / 'lemma1_summary.csv', meta, ['quantity', 'value'], summary))
    for name, value in summary[:5]:
        ctx.tracker.log_result(name, f"{value:.6e}")
    ctx.tracker.end_stage(f"b={scn.b}, a={scn.a:g} m, d1={scn.d1:g} m, d2={scn.d2:g} m, "
                          f"target {scn.target_index}")
    for p in paths:
        ctx.tracker.log_output(str(p))
    return paths


def run_sinr_eval(ctx: ExperimentContext, combiner: Optional[str] = None) -> List[Path]:
    """
    Per-user SINR and sum rate for users that each carry a multi-layer surface.

    Each user's beamformer is optimized as if it were alone; users are then
    evaluated together at the BS.
    """
    s = ctx.settings.sinr
    combiner = combiner or s.combiner
    base = ctx.scenario(Variant.MULTI_LAYER)
    ctx.tracker.begin_stage("SINR evaluation")
    links, combiners = [], []
    for offset in ctx.iterate(s.user_offsets_m, "sinr-eval"):
        scenario = base.translated(*offset)
        ch = assemble_channels(scenario)
        state, _ = optimize_best(ch, scenario.kappa, scenario.noise_power, scenario.p_max,
                                 ctx.optimizer)
        links.append(UserLink(w=state.w, theta=state.theta, channels=ch))
        combiners.append(state.v)
    v = combiners if combiner == 'per-user' else combiners[0]
    result = sinr_eval(links, v, base.kappa, base.noise_power)
    rows = [(str(u + 1), sinr_db, rate)
            for u, (sinr_db, rate) in enumerate(zip(result.sinr_db, result.rates))]
    rows.append(('sum', '', result.sum_rate))
    path = write_csv(ctx.out_dir / 'sinr.csv', {**ctx.meta('sinr-eval'), 'combiner': combiner},
                     ['user', 'sinr_db', 'rate_bps_hz'], rows)
    ctx.tracker.log_result("sum rate (bps/Hz)", f"{result.sum_rate:.4f}")
    ctx.tracker.end_stage(f"{len(links)} users, {combiner} combiner")
    ctx.tracker.log_output(str(path))
    return [path]


def run_dof_example(ctx: ExperimentContext) -> List[Path]:
    """
    Layer-2 incident power under fixed layer-1 phase profiles.

    Layer 1's own power does not depend on its phases; layer 2's does.
    """
    scenario = ctx.scenario(Variant.MULTI_LAYER)
    ch = ctx.channels(Variant.MULTI_LAYER)
    grids = scenario.grids()
    epsilon = ctx.settings.power_distribution.epsilon
    meta = ctx.meta('dof-example')
    k = ch.user_antennas
    w = np.full(k, math.sqrt(scenario.p_max / k), dtype=complex)
    v = np.ones(ch.bs_antennas, dtype=complex)
    ctx.tracker.begin_stage("Layer-1 phase profiles")

    paths, summary = [], []
    for kind in ctx.iterate(ctx.settings.dof_example.profiles, "dof-example"):
        theta1 = phase_profile(kind, grids[0], ctx.optimizer.seed)
        rest = tuple(np.ones(ch.elements, dtype=complex) for _ in range(ch.num_layers - 1))
        state = BeamformerState(w=w, theta=(theta1, *rest), v=v)
        if not paths:
            first = layer_power(state, ch, scenario.kappa, 1)
            paths.append(write_csv(ctx.out_dir / 'dof_layer1.csv', meta,
                                   ['row', 'col', 'power_dbw'], _power_rows(first, grids[0])))
            summary.append(('any', '1', ear(first, epsilon).ratio))
        second = layer_power(state, ch, scenario.kappa, 2)
        paths.append(write_csv(ctx.out_dir / f"dof_layer2_{kind}.csv", meta,
                               ['row', 'col', 'power_dbw'], _power_rows(second, grids[1])))
        ratio = ear(second, epsilon).ratio
        summary.append((kind, '2', ratio))
        ctx.tracker.log_result(f"layer-2 EAR with {kind} layer-1 phases", f"{ratio:.1%}")
    paths.append(write_csv(ctx.out_dir / 'dof_ear.csv', meta, ['profile', 'layer', 'ear'], summary))
    ctx.tracker.end_stage(", ".join(ctx.settings.dof_example.profiles))
    for p in paths:
        ctx.tracker.log_output(str(p))
    return paths


def export_channels(ctx: ExperimentContext, variant: Variant) -> List[Path]:
    """Write the synthesized channels of ``variant`` for later replay."""
    variant = Variant(variant)
    target = ctx.out_dir / 'channels' / variant.value
    ctx.tracker.begin_stage(f"Export {variant.value} channels")
    scenario = ctx.scenario(variant)
    paths = [save_complex_matrix(target / 'direct.csv', direct_channel(scenario),
                                 extra_header=[f"config={ctx.config.fingerprint()}"])]
    if variant is not Variant.NONE:
        paths.append(save_channel_set(target, ctx.channels(variant)))
    ctx.tracker.end_stage(str(target))
    ctx.tracker.log_output(str(target))
    return paths
