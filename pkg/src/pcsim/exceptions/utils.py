from typing import Iterable

from ..exceptions import IndexBoundsError, DimensionError, ConfigError


def out_of_range(name: str, value, low, high) -> IndexBoundsError:
    return IndexBoundsError(
        f"Значение '{name}'={value!r} вне допустимого диапазона [{low}, {high}]"
    )


def space_mismatch(left, right) -> DimensionError:
    return DimensionError(f"Пространства не совпадают: {left} и {right}")


def unknown_keys(keys: Iterable[str]) -> ConfigError:
    return ConfigError(
        "Неизвестные ключи конфигурации: " + ", ".join(sorted(keys))
    )


def invalid_field(path: str, reason: str) -> ConfigError:
    return ConfigError(f"Некорректное поле '{path}': {reason}")
