from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .ml.classifiers import KINDS

DEFAULT_WINDOW_SIZES = (500, 700, 900, 1100, 1300)

# keys that only affect where/how fast a run happens, not what it computes
_EXECUTION_ONLY = ("outputDir", "workers")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    corpusRoot: str = "corpus/desk"
    stopwordFile: str | None = None      # None: bundled English list
    lemmaFile: str | None = None         # None: bundled English lemma table
    windowSizes: list[int] = field(default_factory=lambda: list(DEFAULT_WINDOW_SIZES))
    functionWordCount: int = 100
    classifierKinds: list[str] = field(default_factory=lambda: list(KINDS))
    cvFolds: int = 10
    seed: int = 1
    outputDir: str = "out"
    workers: int = 1
    intermittencyFlags: bool = False
    knnK: int = 1
    perceptronEta: float = 0.01
    perceptronEpochs: int = 500

    @classmethod
    def load(cls, path: str | Path | None = None, require_corpus: bool = True, **overrides) -> "RunConfig":
        data = {}
        if path is not None:
            try:
                data = json.loads(Path(path).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
            if not isinstance(data, dict):
                raise ConfigError(f"config {path} must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        try:
            cfg.validate(require_corpus)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        return cfg

    def validate(self, require_corpus: bool = True) -> None:
        if require_corpus and not Path(self.corpusRoot).is_dir():
            raise ConfigError(f"corpusRoot {self.corpusRoot!r} is not a directory")
        for key in ("stopwordFile", "lemmaFile"):
            value = getattr(self, key)
            if value is not None and not Path(value).is_file():
                raise ConfigError(f"{key} {value!r} does not exist")
        if not self.windowSizes or any(int(w) < 2 for w in self.windowSizes):
            raise ConfigError("windowSizes must be a non-empty list of integers >= 2")
        self.windowSizes = [int(w) for w in self.windowSizes]
        bad = [k for k in self.classifierKinds if k not in KINDS]
        if bad or not self.classifierKinds:
            raise ConfigError(f"classifierKinds must be drawn from {KINDS}, got {self.classifierKinds}")
        if self.cvFolds < 2:
            raise ConfigError("cvFolds must be >= 2")
        if self.functionWordCount < 0:
            raise ConfigError("functionWordCount must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def content_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if k not in _EXECUTION_ONLY}

    def config_hash(self) -> str:
        blob = json.dumps(self.content_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def stamp(self, **extra) -> dict:
        """Provenance fields written into every output artifact."""
        return {"config": self.config_hash(), "seed": self.seed, **extra}
