"""
Run configuration.

Plain key=value text with dotted section names ('lanczos.k = 25'), '#'
comments and comma-separated lists. Values are validated by pydantic models
that reject unknown sections and keys.
"""
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Mapping, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError

from modules.column_probe.probe import DEFAULT_THRESHOLDS
from modules.sharded.precision import Precision


class ConfigError(ValueError):
    """Configuration text or values are invalid"""
    pass


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(',') if item.strip()]
    if isinstance(value, (int, float)):
        return [value]
    return value


FloatList = Annotated[List[float], BeforeValidator(_split_list)]
IntList = Annotated[List[int], BeforeValidator(_split_list)]


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OperatorSection(Section):
    kind: Literal["dense", "wigner", "spiked", "identity", "diagonal", "autodiff"] = "wigner"
    n: int = Field(256, ge=2)
    sigma: float = Field(1.0, gt=0)
    seed: int = 0
    spikes: FloatList = Field(default_factory=list)
    values: FloatList = Field(default_factory=list)
    path: Optional[str] = None
    cap: int = Field(2048, ge=2)


class ModelSection(Section):
    architecture: Literal["mlp", "attention_block"] = "mlp"
    loss: Literal["mse", "cross_entropy"] = "mse"
    layer_widths: IntList = Field(default_factory=lambda: [4, 8, 1])
    d_model: int = Field(8, ge=1)
    n_heads: int = Field(2, ge=1)
    seq_len: int = Field(4, ge=1)
    n_classes: int = Field(3, ge=2)
    seed: int = 0


class DataSection(Section):
    path: Optional[str] = None
    samples: int = Field(64, ge=1)
    batch_size: int = Field(16, ge=1)
    seed: int = 0


class LanczosSection(Section):
    k: int = Field(10, ge=1)
    reorthogonalize: Literal["none", "full"] = "none"
    breakdown_tol: Optional[float] = Field(None, gt=0)
    store_basis: bool = False


class ProbeSection(Section):
    seeds: IntList = Field(default_factory=lambda: [42], min_length=1)
    distribution: Literal["gaussian", "rademacher"] = "gaussian"


class RuntimeSection(Section):
    workers: int = Field(1, ge=1)
    precision: Precision = Precision.F64
    reply_jitter: float = Field(0.0, ge=0)
    reply_timeout: float = Field(120.0, gt=0)


class DensitySection(Section):
    sigma: Optional[float] = Field(None, gt=0)
    grid_points: int = Field(512, ge=2)


class DiagnosticsSection(Section):
    cluster_tol: float = Field(1e-6, gt=0)
    ghost_weight_threshold: float = Field(1e-8, gt=0)
    near_zero_eps: float = Field(2.0 ** -23, gt=0)


class ColumnSection(Section):
    seeds: IntList = Field(default_factory=lambda: [0], min_length=1)
    index: Optional[int] = Field(None, ge=0)
    thresholds: FloatList = Field(default_factory=lambda: list(DEFAULT_THRESHOLDS), min_length=1)
    bins: int = Field(50, ge=1)


class OutputSection(Section):
    dir: str = "slq_out"
    log_file: Optional[str] = None


class RunConfig(Section):
    operator: OperatorSection = Field(default_factory=OperatorSection)
    model: ModelSection = Field(default_factory=ModelSection)
    data: DataSection = Field(default_factory=DataSection)
    lanczos: LanczosSection = Field(default_factory=LanczosSection)
    probe: ProbeSection = Field(default_factory=ProbeSection)
    runtime: RuntimeSection = Field(default_factory=RuntimeSection)
    density: DensitySection = Field(default_factory=DensitySection)
    diagnostics: DiagnosticsSection = Field(default_factory=DiagnosticsSection)
    column: ColumnSection = Field(default_factory=ColumnSection)
    output: OutputSection = Field(default_factory=OutputSection)


def parse_config_text(content: str) -> Dict[str, Dict[str, str]]:
    """
    Parse key=value lines into {section: {key: raw value}}

    Raises:
        ConfigError: On a line without '=', an undotted key, or a repeated key
    """
    parsed: Dict[str, Dict[str, str]] = {}
    for number, line in enumerate(content.split('\n'), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise ConfigError(f"line {number}: expected 'key = value', got '{line}'")
        key, value = line.split('=', 1)
        key, value = key.strip(), value.strip()
        section, _, name = key.partition('.')
        if not section or not name:
            raise ConfigError(f"line {number}: key '{key}' must be 'section.name'")
        entries = parsed.setdefault(section, {})
        if name in entries:
            raise ConfigError(f"line {number}: duplicate key '{key}'")
        entries[name] = value
    return parsed


def build_config(raw: Mapping[str, Mapping[str, Any]],
                 overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    Validate raw sections, after applying dotted-key overrides (CLI flags)

    Raises:
        ConfigError: If any section or key is unknown or a value fails validation
    """
    merged: Dict[str, Dict[str, Any]] = {section: dict(values) for section, values in raw.items()}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        section, _, name = key.partition('.')
        merged.setdefault(section, {})[name] = value
    try:
        return RunConfig.model_validate(merged)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"invalid configuration: {problems}") from e


def load_config(path: Optional[Union[str, Path]] = None,
                overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Read a configuration file (or start from defaults) and apply overrides"""
    raw: Dict[str, Dict[str, str]] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        raw = parse_config_text(path.read_text(encoding='utf-8'))
    return build_config(raw, overrides)


def config_echo(cfg: RunConfig) -> Dict[str, Any]:
    return cfg.model_dump(mode='json')
