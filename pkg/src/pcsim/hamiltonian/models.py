import math
from dataclasses import dataclass

from ..exceptions import ParameterError


@dataclass(frozen=True)
class DriveParams:
    """
    Параметры трёх лазерных полей в картине взаимодействия (ħ = 1).

    Attributes:
        omega0 (float): Частота Раби несущей
        omega1 (float): Частота Раби первого бокового поля (ось X′)
        omega2 (float): Частота Раби второго бокового поля (ось Y′)
        phi0 (float): Фаза несущей, рад
        phi1 (float): Фаза первого бокового поля, рад
        phi2 (float): Фаза второго бокового поля, рад
        eta (float): Параметр Лэмба-Дике, ``0 < eta < 1``
        j_max (int): Порядок усечения ряда по ``η``

    Example:
        >>> DriveParams(omega0=0.005, omega1=1.0, omega2=1.0, phi2=math.pi, eta=0.05)
    """

    omega0: float = 0.0
    omega1: float = 1.0
    omega2: float = 1.0
    phi0: float = 0.0
    phi1: float = 0.0
    phi2: float = math.pi
    eta: float = 0.05
    j_max: int = 3

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ParameterError(f"eta должен лежать в (0, 1), получено {self.eta}")
        if isinstance(self.j_max, bool) or not isinstance(self.j_max, int) or self.j_max < 0:
            raise ParameterError(f"j_max должен быть целым >= 0, получено {self.j_max!r}")
        for name in ("omega0", "omega1", "omega2"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} не может быть отрицательной: {getattr(self, name)}")

    def dropped_term(self) -> float:
        """Величина первого отброшенного члена ряда, ``j = j_max + 1``."""
        j = self.j_max + 1
        return self.eta ** (2 * j + 2) / (math.factorial(j) * math.factorial(j + 2))


@dataclass(frozen=True)
class EffectiveParams:
    """
    Параметры эффективного гамильтониана ``α[âb̂ − ξ]σ̂₊ + h.c.``.

    Attributes:
        alpha (float): Константа связи, ``alpha > 0``
        xi (complex): Амплитуда несущей в единицах бокового поля
    """

    alpha: float = 0.2
    xi: complex = 2.0

    def __post_init__(self):
        object.__setattr__(self, "xi", complex(self.xi))
        if not self.alpha > 0:
            raise ParameterError(f"alpha должна быть > 0, получено {self.alpha}")

    @classmethod
    def from_drive(cls, drive: DriveParams) -> "EffectiveParams":
        """``α = Ω₁η²e^{−η²/2}``, ``ξ = Ω₀Ω₁⁻¹η⁻²e^{−iφ₀}``."""
        if drive.omega1 <= 0:
            raise ParameterError("Для эффективной модели нужна omega1 > 0")
        eta2 = drive.eta**2
        alpha = drive.omega1 * eta2 * math.exp(-eta2 / 2)
        xi = drive.omega0 / (drive.omega1 * eta2) * complex(math.cos(drive.phi0), -math.sin(drive.phi0))
        return cls(alpha, xi)

    def quenched(self) -> "EffectiveParams":
        """Те же параметры с выключенной несущей (``ξ = 0``)."""
        return EffectiveParams(self.alpha, 0.0)
