class PcsSimError(Exception):
    """Базовая ошибка симулятора.

    Attributes:
        category (str): Машиночитаемая категория ошибки (попадает в вывод CLI)
        exit_code (int): Код завершения процесса для этой категории
    """

    category: str = "internal"
    exit_code: int = 1


class IndexBoundsError(PcsSimError, IndexError):
    """Указывает на выход индекса базиса за пределы отсечки"""

    category = "bounds"
    exit_code = 2


class DimensionError(PcsSimError, ValueError):
    """Указывает на несовпадение пространств или размерностей"""

    category = "dimension"
    exit_code = 2


class DomainError(PcsSimError, ValueError):
    """Указывает на аргумент вне области определения функции"""

    category = "domain"
    exit_code = 2


class ParameterError(PcsSimError, ValueError):
    """Указывает на некорректные физические или численные параметры"""

    category = "parameter"
    exit_code = 3


class ConfigError(PcsSimError, ValueError):
    """Указывает на некорректный конфигурационный документ"""

    category = "config"
    exit_code = 4


class TruncationError(PcsSimError):
    """Указывает на то, что отсечка базиса Фока недостаточна"""

    category = "truncation"
    exit_code = 5


class IntegrationError(PcsSimError):
    """Указывает на сбой интегрирования по времени"""

    category = "integration"
    exit_code = 6


class NumericalError(PcsSimError):
    """Указывает на появление нечисловых амплитуд (nan, inf)"""

    category = "numerical"
    exit_code = 7


class TrajectoryError(PcsSimError):
    """Ошибка отдельной траектории Монте-Карло внутри ансамбля.

    Категория и код завершения берутся у причины, если она сама
    ``PcsSimError``: утечка за отсечку внутри ансамбля остаётся утечкой.

    Attributes:
        index (int): Номер упавшей траектории
        cause (BaseException): Исходное исключение
    """

    category = "trajectory"
    exit_code = 8

    def __init__(self, index: int, cause: BaseException):
        super().__init__(f"Траектория {index} завершилась ошибкой: {cause}")
        self.index = index
        self.cause = cause
        if isinstance(cause, PcsSimError):
            self.category = cause.category
            self.exit_code = cause.exit_code

    def __reduce__(self):
        return self.__class__, (self.index, self.cause)


IO_CATEGORY = "io"
IO_EXIT_CODE = 9

from .utils import (  # noqa: E402
    out_of_range as out_of_range,
    space_mismatch as space_mismatch,
    unknown_keys as unknown_keys,
    invalid_field as invalid_field,
)
