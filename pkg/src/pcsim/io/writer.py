from pathlib import Path
from typing import Any, Dict, List

from ..core.abstract import BaseResultWriter


class ResultWriter(BaseResultWriter):
    """
    Синхронная запись результатов прогона в каталог.

    Example:
        >>> writer = ResultWriter("out")
        >>> writer.write_series(series)
        PosixPath('out/series.csv')
    """

    def _save(self, name: str, text: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / name
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        return path

    def write_series(self, series, name: str = "series.csv") -> Path:
        return self._save(name, self.series_text(series))

    def write_snapshots(self, snapshots) -> List[Path]:
        """Файл ``pnm_<label>.csv`` на каждый снимок, в порядке подписей."""
        return [self._save(f"pnm_{label}.csv", self.snapshot_text(dist.rows())) for label, dist in snapshots.items()]

    def write_summary(self, summary: Dict[str, Any]) -> Path:
        return self._save("summary.json", self.summary_text(summary))
