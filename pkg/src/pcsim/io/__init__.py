"""
IO Package

Запись результатов: ряд наблюдаемых ``series.csv``, снимки
``pnm_<label>.csv`` и сводка ``summary.json``. Есть синхронный и
асинхронный варианты с одинаковым форматом.

Пример использования:
    >>> from pcsim.io import ResultWriter
    >>> writer = ResultWriter("out")
    >>> writer.write_series(series)
"""

__all__ = ["ResultWriter", "AsyncResultWriter"]

from .writer import ResultWriter
from .writer_async import AsyncResultWriter
