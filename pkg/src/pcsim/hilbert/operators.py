from typing import Callable, Literal

import numpy as np
from scipy import sparse

from ..core.models import AtomLevel, SpaceConfig, SparseOperator
from ..exceptions import ParameterError

Mode = Literal["a", "b"]
Direction = Literal["lower", "raise"]
AtomOp = Literal["sigma_plus", "sigma_minus", "sigma_z"]


def _diagonal(space: SpaceConfig, values: np.ndarray) -> SparseOperator:
    return SparseOperator(sparse.diags(values.astype(np.complex128), format="csr"), space, True)


def _raw_ladder(space: SpaceConfig, mode: Mode, direction: Direction) -> sparse.csr_matrix:
    """Лестничный оператор на ``space`` без учёта утечки."""
    s, n, m = space.grid
    occupation = n if mode == "a" else m
    step = space.mode_dim if mode == "a" else 1
    cols = np.arange(space.dim)
    if direction == "lower":
        keep = occupation >= 1
        rows, values = cols[keep] - step, np.sqrt(occupation[keep])
    else:
        keep = occupation < space.cutoff_n
        rows, values = cols[keep] + step, np.sqrt(occupation[keep] + 1.0)
    return sparse.csr_matrix(
        (values.astype(np.complex128), (rows, cols[keep])), shape=(space.dim, space.dim)
    )


def truncate(big: SparseOperator, space: SpaceConfig, margin: int) -> SparseOperator:
    """
    Сужает оператор, построенный на ``space.padded(margin)``, до ``space``.

    Строки, ушедшие за отсечку, сохраняются в блоке ``overflow``; так утечка
    составных операторов считается точно, а не только для последнего
    множителя.

    Args:
        big (SparseOperator): Оператор на расширенном пространстве
        space (SpaceConfig): Целевое пространство
        margin (int): Запас отсечки, ``big.space == space.padded(margin)``

    Returns:
        SparseOperator: Усечённый оператор с блоком переполнения
    """
    keep = space.inner_indices(big.space)
    columns = big.matrix.tocsc()[:, keep].tocsr()
    outside = np.ones(big.space.dim, dtype=bool)
    outside[keep] = False
    overflow = sparse.diags(outside.astype(np.complex128), format="csr") @ columns
    return SparseOperator(columns[keep, :], space, big.hermitian, overflow, margin)


def build_padded(
    space: SpaceConfig, margin: int, build: Callable[[SpaceConfig], SparseOperator]
) -> SparseOperator:
    """Строит оператор ``build`` на пространстве с запасом и усекает его."""
    if margin < 0:
        raise ParameterError(f"margin должен быть >= 0, получено {margin}")
    if margin == 0:
        return build(space)
    return truncate(build(space.padded(margin)), space, margin)


def _check_mode(mode: str):
    if mode not in ("a", "b"):
        raise ParameterError(f"Неизвестная мода: {mode!r} (ожидается 'a' или 'b')")


def ladder_op(space: SpaceConfig, mode: Mode, direction: Direction) -> SparseOperator:
    """
    Оператор уничтожения или рождения выбранной моды.

    ``lower`` отображает ``|n⟩ → √n |n−1⟩``, ``raise`` отображает
    ``|n⟩ → √(n+1) |n+1⟩`` при ``n < N``; строка для ``n = N`` отсутствует,
    а ушедшая амплитуда учитывается в ``leak`` при ``apply_to_state``.

    Args:
        space (SpaceConfig): Усечённое пространство
        mode (str): ``'a'`` или ``'b'``
        direction (str): ``'lower'`` или ``'raise'``

    Returns:
        SparseOperator: Лестничный оператор, тождественный на атоме

    Raises:
        ParameterError: При неизвестной моде или направлении
    """
    _check_mode(mode)
    if direction not in ("lower", "raise"):
        raise ParameterError(f"Неизвестное направление: {direction!r}")
    return build_padded(
        space, 1, lambda big: SparseOperator(_raw_ladder(big, mode, direction), big)
    )


def atom_op(space: SpaceConfig, which: AtomOp) -> SparseOperator:
    """
    Операторы двухуровневого иона ``σ₊``, ``σ₋``, ``σ_z``.

    ``σ₋|e⟩ = |g⟩``; элемент ``σ₋`` стоит в строке ``g`` и столбце ``e``.
    Этот выбор фиксирует знак поляризации ``i⟨σ₋ − σ₊⟩``.
    """
    s, _, _ = space.grid
    if which == "sigma_z":
        return _diagonal(space, np.where(s == AtomLevel.E, 1.0, -1.0))
    if which not in ("sigma_plus", "sigma_minus"):
        raise ParameterError(f"Неизвестный оператор атома: {which!r}")
    ground = np.arange(space.block)
    excited = ground + space.block
    rows, cols = (ground, excited) if which == "sigma_minus" else (excited, ground)
    matrix = sparse.csr_matrix(
        (np.ones(space.block, dtype=np.complex128), (rows, cols)), shape=(space.dim, space.dim)
    )
    return SparseOperator(matrix, space)


def pair_annihilation(space: SpaceConfig) -> SparseOperator:
    """Парный оператор уничтожения ``âb̂``: ``|n,m⟩ → √(nm)|n−1,m−1⟩``."""
    return ladder_op(space, "a", "lower") @ ladder_op(space, "b", "lower")


def charge_op(space: SpaceConfig) -> SparseOperator:
    """Оператор разности чисел квантов ``Q̂ = â†â − b̂†b̂`` (диагональный)."""
    _, n, m = space.grid
    return _diagonal(space, (n - m).astype(float))


def number_op(space: SpaceConfig, mode: Mode) -> SparseOperator:
    _check_mode(mode)
    _, n, m = space.grid
    return _diagonal(space, (n if mode == "a" else m).astype(float))


def identity_op(space: SpaceConfig) -> SparseOperator:
    return _diagonal(space, np.ones(space.dim))
