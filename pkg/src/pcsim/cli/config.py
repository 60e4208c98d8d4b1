import cmath
import copy
import json
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

from ..core.models import SpaceConfig, StateVector
from ..dynamics import SimParams
from ..exceptions import (
    ConfigError,
    IndexBoundsError,
    ParameterError,
    TruncationError,
    invalid_field,
    unknown_keys,
)
from ..hamiltonian import DriveParams, EffectiveParams
from ..observables import SnapshotRequest
from ..states import PcsLabel, fock_state, pcs_state

SCENARIOS = ("relax_me", "relax_mc", "quench", "pcs_build", "reduction_check")
FORMATS = ("csv", "json")
DEFAULT_GAMMA_T = (0.0, 125.0, 500.0, 2000.0)

DEFAULTS: Dict[str, Any] = {
    "scenario": "relax_me",
    "space": {"cutoff_n": 20},
    "params": {
        "model": "effective",
        "alpha": 0.2,
        "xi": 2.0,
        "gamma": 10.0,
        "dt": 0.005,
        "t_final": 400.0,
        "n_traj": 1000,
        "master_seed": 0,
        "output_every": 100,
        "leak_tol": 1e-6,
        "steady_tol": 1e-4,
        "omega1": 1.0,
        "omega2": 1.0,
        "phi1": 0.0,
        "phi2": math.pi,
        "eta": 0.05,
        "j_max": 3,
    },
    "initial": {"kind": "fock"},
    "snapshots": {},
    "output": {"dir": "out", "formats": list(FORMATS)},
}

# ключи, у которых нет значения по умолчанию, но которые допустимы
OPTIONAL_KEYS = {
    "params": {"omega0", "phi0"},
    "initial": {"atom", "n", "m", "xi", "q"},
    "snapshots": {"gamma_t", "times", "labels"},
}
INITIAL_DEFAULTS = {
    "fock": {"atom": "e", "n": 7, "m": 6},
    "pcs": {"atom": "g", "q": 1},
}


@dataclass(frozen=True)
class InitialState:
    """
    Описание начального состояния.

    Attributes:
        kind (str): ``"fock"`` или ``"pcs"``
        atom (str): Уровень атома ``"g"`` или ``"e"``
        n (int): Квантов в моде ``a`` (для фоковского)
        m (int): Квантов в моде ``b`` (для фоковского)
        xi (complex): ``ξ`` (для PCS)
        q (int): Заряд (для PCS)
    """

    kind: str = "fock"
    atom: str = "e"
    n: int = 7
    m: int = 6
    xi: complex = 2.0
    q: int = 1

    def build(self, space: SpaceConfig) -> StateVector:
        if self.kind == "fock":
            return fock_state(space, self.atom, self.n, self.m)
        return pcs_state(space, PcsLabel(self.xi, self.q), self.atom)

    @property
    def charge(self) -> int:
        return self.n - self.m if self.kind == "fock" else self.q


@dataclass(frozen=True)
class RunConfig:
    """
    Проверенная конфигурация прогона.

    Attributes:
        scenario (str): Один из ``SCENARIOS``
        space (SpaceConfig): Пространство
        params (SimParams): Параметры эволюции
        drive (DriveParams): Параметры полей (для полной модели и reduction_check)
        initial (InitialState): Начальное состояние
        snapshots (SnapshotRequest): Снимки ``P(n, m)``
        output_dir (str): Каталог результатов
        formats (Tuple[str, ...]): Подмножество ``("csv", "json")``
        document (Dict[str, Any]): Разрешённый документ с подставленными значениями
    """

    scenario: str
    space: SpaceConfig
    params: SimParams
    drive: DriveParams
    initial: InitialState
    snapshots: SnapshotRequest
    output_dir: str = "out"
    formats: Tuple[str, ...] = FORMATS
    document: Dict[str, Any] = field(default_factory=dict, compare=False, repr=False)


def load_document(text: str) -> Dict[str, Any]:
    """
    Читает TOML или JSON. ``summary.json`` принимается целиком: берётся его ключ ``config``.

    Raises:
        ConfigError: Если документ не разбирается
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Некорректный JSON: {exc}") from exc
        if isinstance(doc, dict) and isinstance(doc.get("config"), dict):
            doc = doc["config"]
    else:
        try:
            doc = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"Некорректный TOML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("Конфигурация должна быть таблицей секций")
    return doc


def resolve_document(doc: Dict[str, Any]) -> Dict[str, Any]:
    """
    Подставляет значения по умолчанию и проверяет имена ключей.

    Raises:
        ConfigError: Список всех неизвестных секций и ключей
    """
    resolved = copy.deepcopy(DEFAULTS)
    unknown = []
    for section, value in doc.items():
        if section == "scenario":
            resolved["scenario"] = value
            continue
        if section not in DEFAULTS:
            unknown.append(section)
            continue
        if not isinstance(value, dict):
            raise invalid_field(section, "ожидается таблица")
        allowed = set(DEFAULTS[section]) | OPTIONAL_KEYS.get(section, set())
        for key, item in value.items():
            if key in allowed:
                resolved[section][key] = item
            else:
                unknown.append(f"{section}.{key}")
    if unknown:
        raise unknown_keys(unknown)
    initial = resolved["initial"]
    kind = initial["kind"] if isinstance(initial["kind"], str) else None
    for key, value in INITIAL_DEFAULTS.get(kind, {}).items():
        initial.setdefault(key, value)
    if kind == "pcs":
        initial.setdefault("xi", copy.deepcopy(resolved["params"]["xi"]))
    return resolved


def apply_overrides(doc: Dict[str, Any], **overrides) -> Dict[str, Any]:
    """Флаги командной строки поверх документа (``None`` не меняет значение)."""
    doc = copy.deepcopy(doc)
    targets = {
        "scenario": ("scenario", None),
        "seed": ("params", "master_seed"),
        "traj": ("params", "n_traj"),
        "cutoff": ("space", "cutoff_n"),
        "out": ("output", "dir"),
    }
    for name, value in overrides.items():
        if value is None:
            continue
        section, key = targets[name]
        if key is None:
            doc[section] = value
        else:
            doc.setdefault(section, {})[key] = value
    return doc


def _number(path: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise invalid_field(path, f"ожидается число, получено {value!r}")
    return float(value)


def _integer(path: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise invalid_field(path, f"ожидается целое, получено {value!r}")
    return value


def _complex(path: str, value) -> complex:
    """Число или пара ``[модуль, фаза]``."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise invalid_field(path, "пара [модуль, фаза] должна иметь два элемента")
        modulus = _number(f"{path}[0]", value[0])
        if modulus < 0:
            raise invalid_field(path, "модуль не может быть отрицательным")
        return cmath.rect(modulus, _number(f"{path}[1]", value[1]))
    return complex(_number(path, value))


def _choice(path: str, value, options) -> str:
    if value not in options:
        raise invalid_field(path, f"допустимо одно из {tuple(options)}, получено {value!r}")
    return value


def _guard(path: str, build):
    try:
        return build()
    except (ParameterError, IndexBoundsError, TruncationError) as exc:
        raise invalid_field(path, str(exc)) from exc


def _drive(params: Dict[str, Any], xi: complex) -> DriveParams:
    omega1 = _number("params.omega1", params["omega1"])
    eta = _number("params.eta", params["eta"])
    # без явной несущей берётся та, что даёт заданное ξ
    omega0 = params.get("omega0", abs(xi) * omega1 * eta**2)
    phi0 = params.get("phi0", -cmath.phase(xi) if xi else 0.0)
    return _guard(
        "params",
        lambda: DriveParams(
            omega0=_number("params.omega0", omega0),
            omega1=omega1,
            omega2=_number("params.omega2", params["omega2"]),
            phi0=_number("params.phi0", phi0),
            phi1=_number("params.phi1", params["phi1"]),
            phi2=_number("params.phi2", params["phi2"]),
            eta=eta,
            j_max=_integer("params.j_max", params["j_max"]),
        ),
    )


def _snapshots(section: Dict[str, Any], p: SimParams) -> SnapshotRequest:
    if "gamma_t" in section and "times" in section:
        raise invalid_field("snapshots", "укажите либо gamma_t, либо times")
    labels = tuple(section.get("labels", ()))
    if "times" in section:
        times = [_number("snapshots.times", t) for t in section["times"]]
        request = _guard("snapshots.times", lambda: SnapshotRequest(tuple(times), labels))
        _guard("snapshots.times", lambda: request.validate(p.t_final))
        return request
    if "gamma_t" in section or p.gamma > 0:
        explicit = "gamma_t" in section
        values = [_number("snapshots.gamma_t", v) for v in section.get("gamma_t", DEFAULT_GAMMA_T)]
        if not explicit:
            # значения по умолчанию обрезаются по длительности прогона
            values = [v for v in values if v <= p.gamma * p.t_final * (1 + 1e-12)]
        request = _guard("snapshots.gamma_t", lambda: SnapshotRequest.from_gamma_t(values, p.gamma))
        if labels:
            request = _guard("snapshots.labels", lambda: SnapshotRequest(request.times, labels))
        _guard("snapshots.gamma_t", lambda: request.validate(p.t_final))
        return request
    return SnapshotRequest()


def build_config(doc: Dict[str, Any]) -> RunConfig:
    """
    Проверяет разрешённый документ и собирает ``RunConfig``.

    Raises:
        ConfigError: С путём к полю, нарушающему ограничения
    """
    scenario = _choice("scenario", doc["scenario"], SCENARIOS)
    space = _guard("space.cutoff_n", lambda: SpaceConfig(_integer("space.cutoff_n", doc["space"]["cutoff_n"])))

    params = doc["params"]
    model = _choice("params.model", params["model"], ("effective", "full"))
    xi = _complex("params.xi", params["xi"])
    drive = _drive(params, xi)
    if model == "effective":
        hamiltonian = _guard("params.alpha", lambda: EffectiveParams(_number("params.alpha", params["alpha"]), xi))
    else:
        hamiltonian = drive
    sim = _guard(
        "params",
        lambda: SimParams(
            effective=hamiltonian,
            gamma=_number("params.gamma", params["gamma"]),
            dt=_number("params.dt", params["dt"]),
            t_final=_number("params.t_final", params["t_final"]),
            n_traj=_integer("params.n_traj", params["n_traj"]),
            master_seed=_integer("params.master_seed", params["master_seed"]),
            output_every=_integer("params.output_every", params["output_every"]),
            model=model,
            leak_tol=_number("params.leak_tol", params["leak_tol"]),
            steady_tol=_number("params.steady_tol", params["steady_tol"]),
        ),
    )

    section = doc["initial"]
    kind = _choice("initial.kind", section["kind"], ("fock", "pcs"))
    atom = _choice("initial.atom", section["atom"], ("g", "e"))
    if kind == "fock":
        initial = InitialState(
            kind, atom, _integer("initial.n", section["n"]), _integer("initial.m", section["m"])
        )
        for name in ("n", "m"):
            value = getattr(initial, name)
            if not 0 <= value <= space.cutoff_n:
                raise invalid_field(f"initial.{name}", f"{value} вне [0, {space.cutoff_n}]")
    else:
        initial = InitialState(
            kind,
            atom,
            xi=_complex("initial.xi", section["xi"]),
            q=_integer("initial.q", section["q"]),
        )
        _guard("initial.q", lambda: initial.build(space))

    output = doc["output"]
    formats = tuple(output["formats"]) if isinstance(output["formats"], (list, tuple)) else ()
    if not formats or any(f not in FORMATS for f in formats):
        raise invalid_field("output.formats", f"ожидается непустое подмножество {FORMATS}")
    if not isinstance(output["dir"], str) or not output["dir"]:
        raise invalid_field("output.dir", "ожидается непустая строка")

    return RunConfig(
        scenario=scenario,
        space=space,
        params=sim,
        drive=drive,
        initial=initial,
        snapshots=_snapshots(doc["snapshots"], sim),
        output_dir=output["dir"],
        formats=formats,
        document=doc,
    )


def parse_config(text: str, **overrides) -> RunConfig:
    """
    Разбирает документ конфигурации.

    Args:
        text (str): TOML, JSON или содержимое ``summary.json``
        **overrides: ``scenario``, ``seed``, ``traj``, ``cutoff``, ``out``

    Returns:
        RunConfig: Конфигурация со значениями по умолчанию

    Raises:
        ConfigError: Неизвестные ключи или нарушенные ограничения

    Example:
        >>> cfg = parse_config("")
        >>> cfg.params.gamma, cfg.space.cutoff_n
        (10.0, 20)
    """
    doc = load_document(text) if text.strip() else {}
    return build_config(resolve_document(apply_overrides(doc, **overrides)))
