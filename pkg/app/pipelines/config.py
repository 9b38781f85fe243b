import os
from dataclasses import dataclass, field, replace
from typing import Optional

from dotenv import find_dotenv, load_dotenv

from app.services.recognize import RecognitionSettings

ENV_PREFIX = "LIEPROBE_"


@dataclass
class OutputConfig:
    """How files are written"""

    report_indent: int = 2


@dataclass
class EngineConfig:
    """Size guards and worker settings for the recognition engine"""

    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    seed: int = 0
    iso_limit: int = 2500
    exhaustive_limit: int = 500  # above this, local graphs are sampled
    samples: int = 5
    local_iso_limit: int = 500
    clique_limit: int = 5000
    max_points: int = 5000
    all_perps: bool = False
    log_level: str = "WARNING"
    output: OutputConfig = field(default_factory=OutputConfig)

    def recognition_settings(self) -> RecognitionSettings:
        return RecognitionSettings(
            iso_limit=self.iso_limit,
            exhaustive_limit=self.exhaustive_limit,
            samples=self.samples,
            local_iso_limit=self.local_iso_limit,
            clique_limit=self.clique_limit,
            max_points=self.max_points,
            all_perps=self.all_perps,
        )


# variable suffix -> EngineConfig field
ENV_FIELDS = {
    "THREADS": "threads",
    "SEED": "seed",
    "ISO_LIMIT": "iso_limit",
    "EXHAUSTIVE_LIMIT": "exhaustive_limit",
    "SAMPLES": "samples",
    "MAX_POINTS": "max_points",
}


def load_engine_config(
    threads: Optional[int] = None, seed: Optional[int] = None, dotenv: bool = True
) -> EngineConfig:
    """Defaults, then LIEPROBE_* variables (a .env file included), then explicit arguments."""
    if dotenv:
        load_dotenv(find_dotenv(usecwd=True))
    overrides: dict[str, object] = {}
    for suffix, name in ENV_FIELDS.items():
        value = os.environ.get(ENV_PREFIX + suffix)
        if value:
            try:
                overrides[name] = int(value)
            except ValueError:
                raise ValueError(f"{ENV_PREFIX + suffix} must be an integer, got {value!r}")
    if os.environ.get(ENV_PREFIX + "ALL_PERPS"):
        flag = os.environ[ENV_PREFIX + "ALL_PERPS"].lower()
        overrides["all_perps"] = flag in ("1", "true", "yes")
    if os.environ.get(ENV_PREFIX + "LOG_LEVEL"):
        overrides["log_level"] = os.environ[ENV_PREFIX + "LOG_LEVEL"].upper()
    if threads is not None:
        overrides["threads"] = threads
    if seed is not None:
        overrides["seed"] = seed
    config = replace(EngineConfig(), **overrides)
    if config.threads < 1:
        raise ValueError(f"threads must be at least 1, got {config.threads}")
    return config
