import cmath
import logging
from dataclasses import dataclass, field
from typing import Any, Dict

from .. import __version__
from ..core.models import DensityOperator, StateVector
from ..dynamics import (
    ObservableSeries,
    detect_steady_state,
    integrate_master_equation,
    mc_ensemble,
    pcs_target,
    quench_carrier,
    resolve_hamiltonian,
    trajectory_seeds,
)
from ..hamiltonian import build_full_hamiltonian, reduction_check
from ..io import AsyncResultWriter, ResultWriter
from ..observables import charge_stats, fluorescence_rate, inversion
from ..states import (
    MotionalDistribution,
    PcsLabel,
    fidelity_density,
    mode_populations,
    motional_marginal,
    pcs_tail,
    purity,
)
from .config import RunConfig

logger = logging.getLogger(__name__)

REDUCTION_TOLERANCE = 1e-12
SEED_SCHEME = "Philox(SeedSequence(master_seed, spawn_key=(index,)))"


@dataclass
class ScenarioOutput:
    """
    Всё, что сценарий отдаёт на запись.

    Attributes:
        summary (Dict[str, Any]): Содержимое ``summary.json``
        series (ObservableSeries | None): Основной ряд ``series.csv``
        extra (Dict[str, ObservableSeries]): Дополнительные ряды по именам файлов
        snapshots (Dict[str, MotionalDistribution]): Снимки ``pnm_<label>.csv``
    """

    summary: Dict[str, Any]
    series: ObservableSeries | None = None
    extra: Dict[str, ObservableSeries] = field(default_factory=dict)
    snapshots: Dict[str, MotionalDistribution] = field(default_factory=dict)


def _final_stats(x: DensityOperator | StateVector, cfg: RunConfig, target: StateVector | None) -> Dict[str, Any]:
    rho = DensityOperator.from_state(x) if isinstance(x, StateVector) else x
    q_mean, q_variance = charge_stats(rho)
    stats = {
        "purity": purity(rho),
        "inversion": inversion(rho),
        "fluorescence_rate": fluorescence_rate(rho, cfg.params.gamma),
        "q_mean": q_mean,
        "q_variance": q_variance,
        "mode_populations": list(mode_populations(rho)),
        "off_support": motional_marginal(rho).off_support(cfg.initial.charge),
        "fidelity_pcs": None if target is None else fidelity_density(rho, target),
    }
    return stats


def _target_label(cfg: RunConfig) -> Dict[str, Any] | None:
    if cfg.initial.charge < 0:
        return None
    # ξ как в конфигурации: [модуль, фаза]
    xi = cfg.params.xi
    return {"xi": [abs(xi), cmath.phase(xi)], "q": cfg.initial.charge}


def _relax_me(cfg: RunConfig, out: ScenarioOutput):
    psi0 = cfg.initial.build(cfg.space)
    target = pcs_target(cfg.space, cfg.params.xi, cfg.initial.charge)
    rho, series = integrate_master_equation(
        DensityOperator.from_state(psi0), cfg.params, snapshots=cfg.snapshots, target=target
    )
    H = resolve_hamiltonian(cfg.space, cfg.params)
    out.summary["steady_state"] = detect_steady_state(rho, H, cfg.params.gamma, cfg.params.steady_tol)
    out.summary["final"] = _final_stats(rho, cfg, target)
    out.summary["final"]["leak"] = series.final("leak")
    out.series = series


def _relax_mc(cfg: RunConfig, out: ScenarioOutput):
    psi0 = cfg.initial.build(cfg.space)
    target = pcs_target(cfg.space, cfg.params.xi, cfg.initial.charge)
    result = mc_ensemble(psi0, cfg.params, snapshots=cfg.snapshots)
    H = resolve_hamiltonian(cfg.space, cfg.params)
    out.summary["steady_state"] = detect_steady_state(result.density, H, cfg.params.gamma, cfg.params.steady_tol)
    out.summary["final"] = _final_stats(result.density, cfg, target)
    out.summary["final"]["leak"] = result.mean.final("leak")
    out.summary["jumps"] = result.jump_stats()
    out.summary["n_traj"] = result.n_traj
    out.summary["seeds"]["trajectories"] = trajectory_seeds(cfg.params.master_seed, result.n_traj)
    out.series = result.mean
    out.extra["series_stderr.csv"] = result.stderr


def _quench(cfg: RunConfig, out: ScenarioOutput):
    psi0 = cfg.initial.build(cfg.space)
    if cfg.initial.kind == "pcs":
        steady = psi0
    else:
        logger.info("Релаксация до выключения несущей")
        steady, relax = integrate_master_equation(DensityOperator.from_state(psi0), cfg.params)
        out.extra["relax_series.csv"] = relax
    series = quench_carrier(steady, cfg.params, snapshots=cfg.snapshots)
    rho_steady = DensityOperator.from_state(steady) if isinstance(steady, StateVector) else steady
    out.summary["pre_quench"] = {"purity": purity(rho_steady), "inversion": inversion(rho_steady)}
    out.summary["final"] = {
        "inversion": series.final("sz"),
        "q_mean": series.final("q_mean"),
        "leak": series.final("leak"),
    }
    out.series = series


def _pcs_build(cfg: RunConfig, out: ScenarioOutput):
    psi = cfg.initial.build(cfg.space)
    label = PcsLabel(cfg.initial.xi, cfg.initial.q) if cfg.initial.kind == "pcs" else None
    q_mean, q_variance = charge_stats(psi)
    out.summary["final"] = {
        "q_mean": q_mean,
        "q_variance": q_variance,
        "mode_populations": list(mode_populations(psi)),
        "tail": None if label is None else pcs_tail(label, cfg.space.cutoff_n),
    }
    out.snapshots["pcs"] = motional_marginal(psi)


def _reduction_check(cfg: RunConfig, out: ScenarioOutput):
    difference = reduction_check(cfg.space, cfg.drive)
    scale = build_full_hamiltonian(cfg.space, cfg.drive).max_abs()
    out.summary["reduction"] = {
        "max_abs_difference": difference,
        "h_max": scale,
        "passed": difference < REDUCTION_TOLERANCE * scale,
    }


SCENARIO_RUNNERS = {
    "relax_me": _relax_me,
    "relax_mc": _relax_mc,
    "quench": _quench,
    "pcs_build": _pcs_build,
    "reduction_check": _reduction_check,
}


def compute_scenario(cfg: RunConfig) -> ScenarioOutput:
    """
    Выполняет расчёт сценария без записи файлов.

    Raises:
        PcsSimError: Ошибки расчёта со своей категорией
    """
    out = ScenarioOutput(
        summary={
            "scenario": cfg.scenario,
            "version": __version__,
            "config": cfg.document,
            "seeds": {"master_seed": cfg.params.master_seed, "scheme": SEED_SCHEME},
            "target": _target_label(cfg),
        }
    )
    logger.info("Сценарий %s: %s", cfg.scenario, cfg.space)
    SCENARIO_RUNNERS[cfg.scenario](cfg, out)
    if out.series is not None:
        out.snapshots.update(out.series.snapshots)
    return out


def run_scenario(cfg: RunConfig) -> int:
    """
    Выполняет сценарий и записывает результаты в ``cfg.output_dir``.

    Файлы: ``series.csv`` (ряд наблюдаемых), ``pnm_<label>.csv`` (снимки
    ``P(n, m)``) и ``summary.json`` (итоги и полная разрешённая
    конфигурация). Содержимое файлов зависит только от конфигурации.

    Args:
        cfg (RunConfig): Проверенная конфигурация

    Returns:
        int: Код завершения, ``0`` при успехе

    Raises:
        PcsSimError: Ошибки расчёта со своей категорией
        OSError: Ошибки записи

    Example:
        >>> run_scenario(parse_config(Path("relax.toml").read_text(), scenario="relax_me"))
        0
    """
    out = compute_scenario(cfg)
    writer = ResultWriter(cfg.output_dir)
    if "csv" in cfg.formats:
        for name, series in out.extra.items():
            writer.write_series(series, name)
        if out.series is not None:
            writer.write_series(out.series)
        writer.write_snapshots(out.snapshots)
    if "json" in cfg.formats:
        writer.write_summary(out.summary)
    logger.info("Результаты записаны в %s", writer.out_dir)
    return 0


async def arun_scenario(cfg: RunConfig) -> int:
    """
    То же, что ``run_scenario``, с асинхронной записью через ``aiofiles``.

    Файлы побайтно совпадают с результатом ``run_scenario``.

    Example:
        >>> asyncio.run(arun_scenario(cfg))
        0
    """
    out = compute_scenario(cfg)
    writer = AsyncResultWriter(cfg.output_dir)
    if "csv" in cfg.formats:
        for name, series in out.extra.items():
            await writer.write_series(series, name)
        if out.series is not None:
            await writer.write_series(out.series)
        await writer.write_snapshots(out.snapshots)
    if "json" in cfg.formats:
        await writer.write_summary(out.summary)
    logger.info("Результаты записаны в %s", writer.out_dir)
    return 0
