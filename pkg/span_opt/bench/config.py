"""
Experiment files.

Flat ``section.key = value`` text read with python-dotenv (no variable
interpolation). The ``experiment``, ``dataset`` and ``objective`` sections are
fixed; every other section is a named method and must set ``<name>.method``.
Unknown keys are errors.

    experiment.name = mnist49
    experiment.output_dir = results/mnist49
    dataset.kind = libsvm
    dataset.path = data/mnist.scale.gz
    dataset.positive_label = 4
    dataset.negative_label = 9
    objective.loss = logistic
    objective.reg_a = 1e-4
    span.method = span
    span.T = 50
    span.l = 16
    span.m = 10
"""

import os
from collections import defaultdict
from typing import Callable, Dict, List, Optional, Tuple, Union

from dotenv import dotenv_values

from ..baselines import BaselineConfig
from ..core import AUTO_STEPS, SpanConfig
from ..datasets import geometric_spectrum
from ..errors import ConfigError
from ..hvp import HvpMode
from ..utils.logger import setup_logger
from .schemas import METHODS, DatasetSpec, ExperimentConfig, MethodSpec, ScalingConfig

logger = setup_logger(__name__)

FIXED_SECTIONS = ("experiment", "dataset", "objective", "scaling")

SHARED_METHOD_KEYS = {"method", "T", "eta", "b", "seed", "grad_tol"}
METHOD_KEYS = {
    "span": SHARED_METHOD_KEYS | {"l", "m", "q", "hvp", "fd_scale", "lambda_rule", "reorthonormalize"},
    "gd": SHARED_METHOD_KEYS - {"b"},
    "svrg": SHARED_METHOD_KEYS | {"inner_epochs"},
    "newsamp": SHARED_METHOD_KEYS | {"m"},
    "lissa": SHARED_METHOD_KEYS | {"inner_steps", "s1", "scale"},
}
HVP_CHOICES = {
    "finite_difference": HvpMode("finite_difference"),
    "forward_difference": HvpMode("finite_difference", central=False),
    "analytic": HvpMode("analytic"),
}


def _as_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"{key} must be an integer, got {value!r}") from exc


def _as_float(value: str, key: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {value!r}") from exc


def _as_bool(value: str, key: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key} must be a boolean, got {value!r}")


def _as_floats(value: str, key: str) -> Tuple[float, ...]:
    return tuple(_as_float(item, key) for item in value.split(",") if item.strip())


def _as_ints(value: str, key: str) -> Tuple[int, ...]:
    return tuple(_as_int(item, key) for item in value.split(",") if item.strip())


def _as_step(value: str, key: str) -> Union[float, str, Tuple[float, ...]]:
    if value in AUTO_STEPS:
        return value
    steps = _as_floats(value, key)
    if not steps:
        raise ConfigError(f"{key} is empty")
    return steps[0] if len(steps) == 1 else steps


def read_sections(source) -> Dict[str, Dict[str, str]]:
    """Group ``section.key`` entries by section; raises ConfigError on a missing file or a key without a section"""
    if isinstance(source, (str, os.PathLike)):
        if not os.path.isfile(source):
            raise ConfigError(f"experiment file not found: {source}")
        raw = dotenv_values(source, interpolate=False)
    else:
        raw = dotenv_values(stream=source, interpolate=False)

    sections: Dict[str, Dict[str, str]] = defaultdict(dict)
    for dotted, value in raw.items():
        section, sep, key = dotted.partition(".")
        if not sep or not section or not key:
            raise ConfigError(f"key {dotted!r} is not of the form section.key")
        if value is None:
            raise ConfigError(f"{dotted} has no value")
        sections[section][key] = value.strip()
    return dict(sections)


class _Section:
    """Typed, consuming view of one section so leftover keys can be reported"""

    def __init__(self, name: str, entries: Dict[str, str]):
        self.name = name
        self.entries = dict(entries)

    def take(self, key: str, convert: Callable[[str, str], object], default=None, required: bool = False):
        if key not in self.entries:
            if required:
                raise ConfigError(f"{self.name}.{key} is required")
            return default
        return convert(self.entries.pop(key), f"{self.name}.{key}")

    def text(self, key: str, default: Optional[str] = None, required: bool = False) -> Optional[str]:
        return self.take(key, lambda value, _: value, default, required)

    def finish(self) -> None:
        if self.entries:
            unknown = ", ".join(f"{self.name}.{key}" for key in sorted(self.entries))
            raise ConfigError(f"unknown keys: {unknown}")


def _dataset_spec(section: _Section) -> DatasetSpec:
    spec = DatasetSpec(kind=section.text("kind", required=True))
    spec.path = section.text("path")
    spec.positive_label = section.take("positive_label", _as_float, spec.positive_label)
    spec.negative_label = section.take("negative_label", _as_float, spec.negative_label)
    spec.normalize = section.take("normalize", _as_bool, spec.normalize)
    spec.dense = section.take("dense", _as_bool, spec.dense)
    spec.max_samples = section.take("max_samples", _as_int)
    spec.n_features = section.take("n_features", _as_int)
    spec.n_samples = section.take("n_samples", _as_int, spec.n_samples)
    spec.dim = section.take("dim", _as_int, spec.dim)
    spec.decay = section.take("decay", _as_float, spec.decay)
    spec.seed = section.take("seed", _as_int, spec.seed)

    spectrum = section.take("spectrum", _as_floats)
    ratio = section.take("ratio", _as_float)
    top = section.take("top", _as_float, 1.0)
    if spectrum is not None and ratio is not None:
        raise ConfigError("set either dataset.spectrum or dataset.ratio, not both")
    if ratio is not None:
        try:
            spectrum = tuple(geometric_spectrum(spec.dim, ratio, top))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    spec.spectrum = spectrum
    section.finish()
    return spec


def _method_spec(section: _Section, seed: int, probe: bool) -> MethodSpec:
    method = section.text("method", required=True)
    if method not in METHODS:
        raise ConfigError(f"{section.name}.method must be one of {METHODS}, got {method!r}")
    unknown = set(section.entries) - METHOD_KEYS[method]
    if unknown:
        raise ConfigError(f"keys not used by {method}: " + ", ".join(f"{section.name}.{k}" for k in sorted(unknown)))

    common = {
        "T": section.take("T", _as_int, required=True),
        "seed": section.take("seed", _as_int, seed),
        "grad_tol": section.take("grad_tol", _as_float, 0.0),
    }
    if method == "span":
        hvp_name = section.text("hvp", "finite_difference")
        if hvp_name not in HVP_CHOICES:
            raise ConfigError(f"{section.name}.hvp must be one of {tuple(HVP_CHOICES)}, got {hvp_name!r}")
        hvp_mode = HVP_CHOICES[hvp_name]
        fd_scale = section.take("fd_scale", _as_float)
        if fd_scale is not None:
            try:
                hvp_mode = HvpMode(hvp_mode.kind, fd_scale, hvp_mode.central)
            except ValueError as exc:
                raise ConfigError(f"{section.name}.fd_scale: {exc}") from exc
        config = SpanConfig(
            l=section.take("l", _as_int, required=True),
            m=section.take("m", _as_int, required=True),
            q=section.take("q", _as_int, 1),
            b=section.take("b", _as_int, 1),
            eta=section.take("eta", _as_step, 1.0),
            hvp_mode=hvp_mode,
            lambda_rule=section.text("lambda_rule", "safeguard"),
            reorthonormalize=section.take("reorthonormalize", _as_bool),
            probe=probe,
            **common,
        )
    else:
        config = BaselineConfig(
            method=method,
            eta=section.take("eta", _as_float, 1.0),
            b=section.take("b", _as_int, 1),
            m=section.take("m", _as_int, 1),
            inner_epochs=section.take("inner_epochs", _as_int, 1),
            inner_steps=section.take("inner_steps", _as_int, 10),
            s1=section.take("s1", _as_int, 1),
            scale=section.take("scale", _as_float),
            probe=probe and method in ("newsamp", "lissa"),
            **common,
        )
    section.finish()
    return MethodSpec(name=section.name, method=method, config=config)


def experiment_from_sections(sections: Dict[str, Dict[str, str]]) -> ExperimentConfig:
    experiment = _Section("experiment", sections.get("experiment", {}))
    objective = _Section("objective", sections.get("objective", {}))
    name = experiment.text("name", required=True)
    seed = experiment.take("seed", _as_int, 0)
    probe = experiment.take("probe_hessian_error", _as_bool, False)

    methods: List[MethodSpec] = [
        _method_spec(_Section(section, entries), seed, probe)
        for section, entries in sections.items()
        if section not in FIXED_SECTIONS
    ]
    cfg = ExperimentConfig(
        name=name,
        dataset=_dataset_spec(_Section("dataset", sections.get("dataset", {}))),
        loss_kind=objective.text("loss", required=True),
        reg_a=objective.take("reg_a", _as_float, 0.0),
        methods=methods,
        output_dir=experiment.text("output_dir", os.path.join("results", name)),
        seed=seed,
        preiterate_svrg_epochs=experiment.take("preiterate_svrg_epochs", _as_int, 2),
        preiterate_eta=experiment.take("preiterate_eta", _as_float, 0.25),
        preiterate_b=experiment.take("preiterate_b", _as_int, 1),
        probe_hessian_error=probe,
    )
    experiment.finish()
    objective.finish()
    cfg.validate()
    return cfg


def load_experiment(source) -> ExperimentConfig:
    """Read and validate an experiment file (path or text stream)"""
    cfg = experiment_from_sections(read_sections(source))
    logger.info(f"Loaded experiment '{cfg.name}' with methods {[spec.name for spec in cfg.methods]}")
    return cfg


def load_scaling(source, dims: Optional[Tuple[int, ...]] = None) -> ScalingConfig:
    """Read the ``scaling`` section; ``dims`` from the command line overrides scaling.dims"""
    section = _Section("scaling", read_sections(source).get("scaling", {}))
    file_dims = section.take("dims", _as_ints, (100, 400, 1600))
    cfg = ScalingConfig(
        dims=tuple(dims) if dims else file_dims,
        l=section.take("l", _as_int, required=True),
        m=section.take("m", _as_int, required=True),
        q=section.take("q", _as_int, 1),
        steps=section.take("steps", _as_int, 20),
        warmup=section.take("warmup", _as_int, 2),
        newsamp_max_dim=section.take("newsamp_max_dim", _as_int, 400),
        seed=section.take("seed", _as_int, 0),
    )
    section.finish()
    cfg.validate()
    return cfg


def parse_dims(text: str) -> Tuple[int, ...]:
    return _as_ints(text, "--dims")
