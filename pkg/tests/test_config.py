from pathlib import Path

import pytest
from pydantic import ValidationError

from app.pipelines.config import EngineConfig, load_engine_config
from app.pydantic_models.command import CommandConfig


@pytest.fixture
def clean_env(monkeypatch):
    for name in ("THREADS", "SEED", "ISO_LIMIT", "EXHAUSTIVE_LIMIT", "SAMPLES", "MAX_POINTS", "ALL_PERPS"):
        monkeypatch.delenv(f"LIEPROBE_{name}", raising=False)
    return monkeypatch


def test_defaults(clean_env):
    config = load_engine_config(dotenv=False)
    assert config.seed == 0
    assert config.threads >= 1
    assert config.log_level == "WARNING"
    assert config.recognition_settings().iso_limit == 2500


def test_environment_overrides(clean_env):
    clean_env.setenv("LIEPROBE_THREADS", "3")
    clean_env.setenv("LIEPROBE_SEED", "11")
    clean_env.setenv("LIEPROBE_EXHAUSTIVE_LIMIT", "40")
    clean_env.setenv("LIEPROBE_LOG_LEVEL", "debug")
    clean_env.setenv("LIEPROBE_ALL_PERPS", "true")
    config = load_engine_config(dotenv=False)
    assert (config.threads, config.seed, config.log_level) == (3, 11, "DEBUG")
    assert config.recognition_settings().exhaustive_limit == 40
    assert config.recognition_settings().all_perps


def test_arguments_win_over_the_environment(clean_env):
    clean_env.setenv("LIEPROBE_THREADS", "3")
    assert load_engine_config(threads=1, seed=5, dotenv=False).threads == 1


def test_dotenv_file(clean_env, tmp_path):
    # registered with monkeypatch so the value loaded from .env is removed afterwards
    clean_env.setenv("LIEPROBE_SAMPLES", "")
    clean_env.delenv("LIEPROBE_SAMPLES")
    (tmp_path / ".env").write_text("LIEPROBE_SAMPLES=9\n")
    clean_env.chdir(tmp_path)
    assert load_engine_config().samples == 9


def test_bad_values(clean_env):
    clean_env.setenv("LIEPROBE_ISO_LIMIT", "many")
    with pytest.raises(ValueError):
        load_engine_config(dotenv=False)
    clean_env.delenv("LIEPROBE_ISO_LIMIT")
    with pytest.raises(ValueError):
        load_engine_config(threads=0, dotenv=False)


def test_settings_carry_the_limits():
    settings = EngineConfig(max_points=100, samples=2).recognition_settings()
    assert (settings.max_points, settings.samples) == (100, 2)


def test_command_config_accepts_a_generator_call():
    command = CommandConfig(command="gen", family="w", n=3, q=2)
    assert command.inputs == []


@pytest.mark.parametrize(
    "values",
    [
        {"command": "gen", "family": "w", "n": 3},
        {"command": "gen", "family": "w", "n": 3, "dim": 5, "q": 2},
        {"command": "gen", "family": "grassmann", "dim": 4, "q": 2},
        {"command": "gen", "family": "e8", "n": 8, "q": 2},
        {"command": "localgraph", "inputs": [Path("g.g6")]},
        {"command": "cliqueext", "inputs": [Path("g.g6")]},
        {"command": "verify", "inputs": [Path("g.g6")]},
        {"command": "verify", "inputs": [Path("g.g6")], "axioms": ["parapolar:x"]},
        {"command": "verify", "inputs": [Path("g.g6")], "axioms": ["thick"]},
        {"command": "iso", "inputs": [Path("g.g6")]},
        {"command": "batch", "inputs": [Path("graphs")]},
        {"command": "recognize", "inputs": [Path("g.g6")], "threads": 0},
    ],
)
def test_command_config_rejects(values):
    with pytest.raises(ValidationError):
        CommandConfig(**values)


def test_parapolar_takes_a_rank():
    command = CommandConfig(command="verify", inputs=[Path("g.g6")], axioms=["gamma", "parapolar:3"])
    assert command.axioms == ["gamma", "parapolar:3"]
