import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List

from ..exceptions import IO_CATEGORY, IO_EXIT_CODE, PcsSimError
from .config import SCENARIOS, parse_config
from .runner import arun_scenario, run_scenario

logger = logging.getLogger("pcsim")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcs-sim",
        description="Симулятор иона в ловушке: тёмное парное когерентное состояние",
    )
    parser.add_argument("scenario", choices=SCENARIOS, help="Сценарий прогона")
    parser.add_argument("--config", type=Path, help="Файл конфигурации (TOML, JSON или summary.json)")
    parser.add_argument("--seed", type=int, help="Главное зерно ГСЧ")
    parser.add_argument("--out", help="Каталог результатов")
    parser.add_argument("--traj", type=int, help="Число траекторий")
    parser.add_argument("--cutoff", type=int, help="Отсечка числа квантов в каждой моде")
    parser.add_argument("--async-io", action="store_true", help="Асинхронная запись результатов (aiofiles)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Подробный журнал (DEBUG)")
    return parser


def _fail(category: str, code: int, message: str) -> int:
    logger.error("%s", message)
    print(f"error: category={category} exit={code}: {message}", file=sys.stderr)
    return code


def main(argv: List[str] | None = None) -> int:
    """
    Точка входа ``pcs-sim``.

    Returns:
        int: ``0`` при успехе, иначе код категории ошибки
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(
            text, scenario=args.scenario, seed=args.seed, traj=args.traj, cutoff=args.cutoff, out=args.out
        )
        if args.async_io:
            return asyncio.run(arun_scenario(cfg))
        return run_scenario(cfg)
    except PcsSimError as exc:
        return _fail(exc.category, exc.exit_code, str(exc))
    except OSError as exc:
        return _fail(IO_CATEGORY, IO_EXIT_CODE, str(exc))
