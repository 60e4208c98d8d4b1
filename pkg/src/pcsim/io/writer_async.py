from pathlib import Path
from typing import Any, Dict, List

import aiofiles

from ..core.abstract import BaseResultWriter


class AsyncResultWriter(BaseResultWriter):
    """
    Асинхронная запись результатов прогона на ``aiofiles``.

    Формирует те же байты, что и ``ResultWriter``.

    Example:
        >>> writer = AsyncResultWriter("out")
        >>> await writer.write_summary(summary)
    """

    async def _save(self, name: str, text: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        async with aiofiles.open(path, "w", encoding="utf-8", newline="") as f:
            await f.write(text)
        return path

    async def write_series(self, series, name: str = "series.csv") -> Path:
        return await self._save(name, self.series_text(series))

    async def write_snapshots(self, snapshots) -> List[Path]:
        return [
            await self._save(f"pnm_{label}.csv", self.snapshot_text(dist.rows()))
            for label, dist in snapshots.items()
        ]

    async def write_summary(self, summary: Dict[str, Any]) -> Path:
        return await self._save("summary.json", self.summary_text(summary))
