import os
import json
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .augment import AugmentConfig
from .classifier import ModelConfig, TrainConfig
from .errors import ConfigError, MissingFile
from .segment import SegmentConfig
from .translate import TranslateConfig
from .utils import parse_duration

DEFAULT_OUTPUT_DIR = "newsflow-out"

# Claves aceptadas por seccion del archivo de configuracion.
SECTIONS = {
    "paths": {"corpus", "lexicon", "vocab", "model", "stopwords", "checkpoint", "output"},
    "augment": {"threshold", "mode", "seed"},
    "translate": {"backend", "src", "tgt", "max_chars", "delay", "per_sentence"},
    "segment": {"window_size", "overlap", "max_seq_len"},
    "model": {"embed_dim", "dense_dims", "dropout_rate", "learning_rate", "seed"},
    "train": {"epochs", "patience", "batch_size", "val_fraction", "vocab_size", "baseline"},
}
INPUT_PATHS = ("corpus", "lexicon", "vocab", "stopwords")


@dataclass
class PipelineConfig:
    corpus: str = None
    lexicon: str = None
    vocab: str = None
    model: str = None
    stopwords: str = None
    checkpoint: str = None
    output_dir: str = DEFAULT_OUTPUT_DIR
    backend: str = None
    val_fraction: float = 0.1
    vocab_size: int = 30000
    baseline: bool = False
    augment: AugmentConfig = field(default_factory=AugmentConfig)
    translate: TranslateConfig = field(default_factory=TranslateConfig)
    segment: SegmentConfig = field(default_factory=SegmentConfig)
    model_config: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)

    @property
    def model_path(self):
        return self.model or os.path.join(self.output_dir, "model.taug")

    def output(self, name):
        return os.path.join(self.output_dir, name)


def _read_config_file(path):
    if not os.path.exists(path):
        raise MissingFile(path)
    try:
        if path.endswith(".toml"):
            with open(path, 'rb') as f:
                return tomllib.load(f)
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"no se pudo leer '{path}': {e}")


def _validate_keys(raw):
    for section, values in raw.items():
        if section not in SECTIONS:
            raise ConfigError(f"seccion desconocida [{section}]")
        unknown = set(values) - SECTIONS[section]
        if unknown:
            raise ConfigError(f"claves desconocidas en [{section}]: {', '.join(sorted(unknown))}")


def _resolve(base_dir, value):
    if value is None or os.path.isabs(value):
        return value
    return os.path.normpath(os.path.join(base_dir, value))


def _resolve_backend(base_dir, spec):
    if spec and spec.startswith("mock:"):
        return "mock:" + _resolve(base_dir, spec[len("mock:"):])
    return spec


def _build(raw, base_dir):
    paths, aug, tr = raw.get("paths", {}), raw.get("augment", {}), raw.get("translate", {})
    train = dict(raw.get("train", {}))
    try:
        val_fraction = float(train.pop("val_fraction", 0.1))
        if not 0 < val_fraction < 1:
            raise ConfigError(f"val_fraction debe estar en (0, 1), se recibio {val_fraction}")
        translate_cfg = TranslateConfig(
            source_lang=tr.get("src", "en"), target_lang=tr.get("tgt", "pt"),
            max_chars=int(tr.get("max_chars", 5000)), delay=parse_duration(tr.get("delay", 1.0)),
            per_sentence=bool(tr.get("per_sentence", False)),
        )
        return PipelineConfig(
            corpus=_resolve(base_dir, paths.get("corpus")),
            lexicon=_resolve(base_dir, paths.get("lexicon")),
            vocab=_resolve(base_dir, paths.get("vocab")),
            model=paths.get("model"),
            stopwords=_resolve(base_dir, paths.get("stopwords")),
            checkpoint=paths.get("checkpoint"),
            output_dir=paths.get("output") or DEFAULT_OUTPUT_DIR,
            backend=_resolve_backend(base_dir, tr.get("backend")),
            val_fraction=val_fraction,
            vocab_size=int(train.pop("vocab_size", 30000)),
            baseline=bool(train.pop("baseline", False)),
            augment=AugmentConfig(**aug),
            translate=translate_cfg,
            segment=SegmentConfig(**raw.get("segment", {})),
            model_config=ModelConfig(**raw.get("model", {})),
            train=TrainConfig(**train),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e))


def load_pipeline_config(path=None, overrides=None):
    """Carga la configuracion (TOML o JSON) y aplica los overrides de la linea de comandos.

    `overrides` usa claves 'seccion.clave'; los valores None se ignoran. Las rutas de
    entrada relativas se resuelven contra el directorio del archivo; `paths.output`
    contra el directorio actual.
    """
    raw = _read_config_file(path) if path else {}
    base_dir = os.path.dirname(os.path.abspath(path)) if path else os.getcwd()
    _validate_keys(raw)
    raw = {section: dict(values) for section, values in raw.items()}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        section, _, name = key.partition(".")
        if name not in SECTIONS.get(section, ()):
            raise ConfigError(f"override desconocido '{key}'")
        if section == "paths" and name in INPUT_PATHS:
            value = os.path.abspath(value)
        if section == "translate" and name == "backend" and value.startswith("mock:"):
            value = "mock:" + os.path.abspath(value[len("mock:"):])
        raw.setdefault(section, {})[name] = value
    return _build(raw, base_dir)


def check_inputs(cfg, required=("corpus", "lexicon")):
    """Falla rapido si algun archivo referenciado no existe, antes de empezar el trabajo largo."""
    for name in required:
        if getattr(cfg, name) is None:
            raise ConfigError(f"falta la ruta '{name}' en la configuracion")
    for name in INPUT_PATHS:
        path = getattr(cfg, name)
        if path is not None and not os.path.exists(path):
            raise MissingFile(path)
    if cfg.backend and cfg.backend.startswith("mock:"):
        mock_path = cfg.backend[len("mock:"):]
        if not os.path.exists(mock_path):
            raise MissingFile(mock_path)


