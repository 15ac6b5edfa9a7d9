"""Pipeline configuration.

Precedence (lowest first):
  built-in defaults < preset (--preset) < config file (--config)
  < environment SWEKIT_<KEY> (a local .env is loaded) < command-line flags

Unknown keys are rejected; every value is coerced to its field type and
range-checked.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping, Optional, Sequence

from dotenv import load_dotenv

from swekit.common.errors import UsageError
from swekit.data.io.kvfile import coerce_value, load_kv_file
from swekit.domain.embed_core.vocab import CASE_INSENSITIVE, CASE_MODES
from swekit.domain.encode.encoder import EncodeOptions
from swekit.domain.pca.transform import MODES as PCA_MODES
from swekit.domain.pca.transform import SENTENCE_LEVEL
from swekit.domain.train.loop import TrainConfig
from swekit.presets.load import get_preset

ENV_PREFIX = "SWEKIT_"


@dataclass(frozen=True)
class PipelineConfig:
    # vocab / extract
    vocab_cap: int = 150_000
    case_mode: str = CASE_INSENSITIVE
    max_occurrences: int = 100
    # pca
    pca_samples: int = 100_000
    dim: int = 256
    abtt: bool = True
    pca_mode: str = SENTENCE_LEVEL
    # distill / xl-train
    lr: float = 0.001
    steps: int = 30_000
    batch_size: int = 128
    tau: float = 0.05
    seed: int = 0
    patience: int = 5
    val_every: int = 500
    val_fraction: float = 0.02
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    # encode / eval
    sif_alpha: float = 0.001
    threshold: Optional[float] = None
    normalize: bool = True
    threads: int = 1
    src_lang: Optional[str] = None
    tgt_lang: Optional[str] = None
    # ensemble
    weights: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        positive_int = ("vocab_cap", "max_occurrences", "pca_samples", "dim", "batch_size", "patience", "val_every", "threads")
        for name in positive_int:
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.steps < 0:
            raise UsageError(f"steps must be >= 0, got {self.steps}")
        for name in ("lr", "tau", "eps", "sif_alpha"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("beta1", "beta2", "val_fraction"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise UsageError(f"{name} must be in [0, 1), got {getattr(self, name)}")
        if self.case_mode not in CASE_MODES:
            raise UsageError(f"case_mode must be one of {CASE_MODES}, got {self.case_mode!r}")
        if self.pca_mode not in PCA_MODES:
            raise UsageError(f"pca_mode must be one of {PCA_MODES}, got {self.pca_mode!r}")
        if any(not w > 0 for w in self.weights):
            raise UsageError(f"ensemble weights must be > 0, got {self.weights}")

    @property
    def lowercase(self) -> bool:
        return self.case_mode == CASE_INSENSITIVE

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            lr=self.lr,
            steps=self.steps,
            batch_size=self.batch_size,
            tau=self.tau,
            seed=self.seed,
            patience=self.patience,
            val_every=self.val_every,
            val_fraction=self.val_fraction,
            beta1=self.beta1,
            beta2=self.beta2,
            eps=self.eps,
        )

    def encode_options(self, language: Optional[str] = None, sif: bool = False, opaque: bool = False) -> EncodeOptions:
        return EncodeOptions(
            normalize=self.normalize,
            sif_alpha=self.sif_alpha if sif else None,
            lowercase=self.lowercase,
            opaque=opaque,
            language=language,
        )

    def as_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["weights"] = list(self.weights)
        return d

    def config_hash(self) -> str:
        """SHA-256 over the sorted items; identical settings give identical hashes."""
        payload = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _to_bool(v: Any) -> bool:
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _to_int(v: Any) -> int:
    if isinstance(v, bool):
        raise ValueError(f"not an integer: {v!r}")
    if isinstance(v, float):
        if not v.is_integer():
            raise ValueError(f"not an integer: {v!r}")
        return int(v)
    return int(str(v).strip())


def _to_weights(v: Any) -> tuple[float, ...]:
    if v is None or v == "":
        return ()
    if isinstance(v, (list, tuple)):
        return tuple(float(x) for x in v)
    if isinstance(v, (int, float)):
        return (float(v),)
    return tuple(float(x) for x in str(v).split(",") if x.strip())


def _optional(conv: Callable[[Any], Any]) -> Callable[[Any], Any]:
    def inner(v: Any) -> Any:
        return None if v is None or (isinstance(v, str) and v.strip().lower() in ("", "none", "null")) else conv(v)

    return inner


_CONVERTERS: dict[str, Callable[[Any], Any]] = {
    "vocab_cap": _to_int,
    "case_mode": str,
    "max_occurrences": _to_int,
    "pca_samples": _to_int,
    "dim": _to_int,
    "abtt": _to_bool,
    "pca_mode": str,
    "lr": float,
    "steps": _to_int,
    "batch_size": _to_int,
    "tau": float,
    "seed": _to_int,
    "patience": _to_int,
    "val_every": _to_int,
    "val_fraction": float,
    "beta1": float,
    "beta2": float,
    "eps": float,
    "sif_alpha": float,
    "threshold": _optional(float),
    "normalize": _to_bool,
    "threads": _to_int,
    "src_lang": _optional(str),
    "tgt_lang": _optional(str),
    "weights": _to_weights,
}

CONFIG_KEYS = tuple(f.name for f in dataclasses.fields(PipelineConfig))


def coerce_settings(raw: Mapping[str, Any], source: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in raw.items():
        if key not in _CONVERTERS:
            raise UsageError(f"{source}: unknown config key {key!r}")
        try:
            out[key] = _CONVERTERS[key](value)
        except (TypeError, ValueError) as e:
            raise UsageError(f"{source}: invalid value for {key}: {value!r} ({e})") from e
    return out


def env_settings(environ: Mapping[str, str] | None = None) -> dict[str, Any]:
    env = os.environ if environ is None else environ
    raw = {}
    for key in CONFIG_KEYS:
        v = env.get(ENV_PREFIX + key.upper())
        if v is not None:
            raw[key] = coerce_value(v)
    return coerce_settings(raw, "environment")


def load_pipeline_config(
    preset: str | None = None,
    paths: Sequence[str | Path] = (),
    overrides: Mapping[str, Any] | None = None,
    environ: Mapping[str, str] | None = None,
    dotenv: bool = True,
) -> PipelineConfig:
    if dotenv and environ is None:
        load_dotenv()
    settings: dict[str, Any] = {}
    if preset:
        settings.update(coerce_settings(get_preset(preset), f"preset {preset}"))
    for path in paths:
        if path:
            settings.update(coerce_settings(load_kv_file(path), str(path)))
    settings.update(env_settings(environ))
    if overrides:
        settings.update(coerce_settings({k: v for k, v in overrides.items() if v is not None}, "command line"))
    return PipelineConfig(**settings)
