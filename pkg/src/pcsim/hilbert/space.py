from typing import Tuple

from ..core.models import AtomLevel, SpaceConfig
from ..exceptions import out_of_range


def flat_index(space: SpaceConfig, s: "AtomLevel | str | int", n: int, m: int) -> int:
    """
    Плоский индекс базисного состояния ``|s, n, m⟩``.

    Порядок базиса: уровень атома, затем ``n_a``, затем ``n_b``.

    Args:
        space (SpaceConfig): Усечённое пространство
        s: Уровень атома (``'g'``, ``'e'``, 0, 1 или ``AtomLevel``)
        n (int): Число квантов моды ``a``
        m (int): Число квантов моды ``b``

    Returns:
        int: Индекс в диапазоне ``0 .. dim-1``

    Raises:
        IndexBoundsError: Если ``s``, ``n`` или ``m`` вне отсечки

    Example:
        >>> flat_index(SpaceConfig(20), "e", 0, 0)
        441
    """
    level = AtomLevel.parse(s)
    for name, value in (("n", n), ("m", m)):
        if not 0 <= value <= space.cutoff_n:
            raise out_of_range(name, value, 0, space.cutoff_n)
    return space.index(level, n, m)


def unflat_index(space: SpaceConfig, index: int) -> Tuple[AtomLevel, int, int]:
    """Обратное отображение к ``flat_index``."""
    if not 0 <= index < space.dim:
        raise out_of_range("index", index, 0, space.dim - 1)
    return space.unindex(index)
