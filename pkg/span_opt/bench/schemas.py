"""
Bench Schemas
Experiment, dataset, method and result records of the benchmark runner
"""

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..baselines import BASELINE_METHODS, BaselineConfig
from ..core import SpanConfig
from ..errors import ConfigError
from ..objectives import LOSS_KINDS

METHODS = ("span",) + BASELINE_METHODS
DATASET_KINDS = ("libsvm", "synthetic_quadratic", "synthetic_logistic")
PLOT_MODES = ("loss_vs_time", "loss_vs_iter", "hessian_err")

MethodConfig = Union[SpanConfig, BaselineConfig]


@dataclass
class DatasetSpec:
    """Where the data comes from and how it is preprocessed"""

    kind: str
    path: Optional[str] = None
    positive_label: float = 1.0
    negative_label: float = -1.0
    normalize: bool = True
    dense: bool = True
    max_samples: Optional[int] = None
    n_features: Optional[int] = None
    spectrum: Optional[Tuple[float, ...]] = None
    n_samples: int = 2000
    dim: int = 100
    decay: float = 0.95
    seed: int = 0

    def validate(self) -> bool:
        if self.kind not in DATASET_KINDS:
            raise ConfigError(f"dataset.kind must be one of {DATASET_KINDS}, got {self.kind!r}")
        if self.kind == "libsvm" and not self.path:
            raise ConfigError("dataset.path is required for LIBSVM data")
        if self.kind == "synthetic_quadratic" and not self.spectrum:
            raise ConfigError("dataset.spectrum (or dataset.dim with dataset.ratio) is required for a synthetic quadratic")
        if self.positive_label == self.negative_label:
            raise ConfigError("dataset.positive_label and dataset.negative_label must differ")
        for name in ("max_samples", "n_features"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"dataset.{name} must be positive, got {value}")
        return True

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class MethodSpec:
    """A named method section, e.g. ``span_b64.method = span``"""

    name: str
    method: str
    config: MethodConfig

    def validate(self) -> bool:
        if self.method not in METHODS:
            raise ConfigError(f"{self.name}.method must be one of {METHODS}, got {self.method!r}")
        expected = SpanConfig if self.method == "span" else BaselineConfig
        if not isinstance(self.config, expected):
            raise ConfigError(f"{self.name}: {self.method} needs a {expected.__name__}")
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "method": self.method, **self.config.to_dict()}


@dataclass
class ExperimentConfig:
    """One benchmark experiment: a dataset, an objective and the methods to compare"""

    name: str
    dataset: DatasetSpec
    loss_kind: str
    reg_a: float
    methods: List[MethodSpec]
    output_dir: str
    seed: int = 0
    preiterate_svrg_epochs: int = 2
    preiterate_eta: float = 0.25
    preiterate_b: int = 1
    probe_hessian_error: bool = False

    def validate(self) -> bool:
        if not self.methods:
            raise ConfigError("an experiment needs at least one method section")
        names = [spec.name for spec in self.methods]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate method sections: {names}")
        if self.loss_kind not in LOSS_KINDS:
            raise ConfigError(f"objective.loss must be one of {LOSS_KINDS}, got {self.loss_kind!r}")
        if (self.loss_kind == "quadratic") != (self.dataset.kind == "synthetic_quadratic"):
            raise ConfigError("objective.loss = quadratic goes with, and only with, dataset.kind = synthetic_quadratic")
        if self.reg_a < 0:
            raise ConfigError(f"objective.reg_a must be non-negative, got {self.reg_a}")
        if self.preiterate_svrg_epochs < 0:
            raise ConfigError("experiment.preiterate_svrg_epochs must be non-negative")
        if self.preiterate_svrg_epochs and not (self.preiterate_eta > 0 and self.preiterate_b >= 1):
            raise ConfigError("pre-iteration needs a positive step size and batch size")
        if not self.output_dir:
            raise ConfigError("experiment.output_dir must be set")

        self.dataset.validate()
        for spec in self.methods:
            spec.validate()
        return True

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["methods"] = [spec.to_dict() for spec in self.methods]
        return data


@dataclass
class ScalingConfig:
    """Per-iteration timing sweep over problem dimensions"""

    dims: Sequence[int]
    l: int
    m: int
    q: int = 1
    steps: int = 20
    warmup: int = 2
    newsamp_max_dim: int = 400
    seed: int = 0

    def validate(self) -> bool:
        if not self.dims or min(self.dims) < 1:
            raise ConfigError(f"scaling dims must be positive, got {list(self.dims)}")
        if not 0 <= self.m < self.l <= min(self.dims):
            raise ConfigError(f"scaling needs 0 <= m < l <= min(dims), got l={self.l}, m={self.m}")
        if self.q < 0 or self.steps < 1 or self.warmup < 0:
            raise ConfigError("scaling needs q >= 0, steps >= 1 and warmup >= 0")
        return True

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class MethodResult:
    """Outcome of one method inside an experiment"""

    name: str
    method: str
    status: str = "pending"
    iterations: int = 0
    final_loss: Optional[float] = None
    final_grad_norm: Optional[float] = None
    total_seconds: Optional[float] = None
    trace_path: Optional[str] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == "success"

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class ExperimentResult:
    name: str
    output_dir: str
    results: List[MethodResult] = field(default_factory=list)
    summary_path: Optional[str] = None

    @property
    def ok(self) -> bool:
        return all(result.ok for result in self.results)
