"""Configuration: INI file plus environment-variable overrides.

Every option lives in a section below; an environment variable named
``REVQUAL_<SECTION>_<KEY>`` (dots in section names become underscores,
all upper-case) overrides the file value, and the file overrides the
built-in defaults. Unknown sections or keys are errors so typos do not
silently fall back to defaults.
"""

import configparser
import os
from dataclasses import dataclass, field
from pathlib import Path

from .engine import AnalysisEngine
from .errors import ConfigError
from .features import SCHEMA_VERSION
from .judge import HttpJudgeBackend, MockJudgeBackend, load_rubric
from .lexicons import load_lexicons
from .models import load_model
from .openalex import HttpConfig, MockOpenAlexClient, OpenAlexClient

_MODES = ("none", "mock", "http")

# section -> key -> (type tag, default). Type tags: str (empty -> None),
# int, float, mode (one of _MODES).
_SCHEMA = {
    "backends.judge": {
        "mode": ("mode", "none"),
        "endpoint": ("str", ""),
        "model": ("str", ""),
        "api_key_env": ("str", "REVQUAL_JUDGE_API_KEY"),
        "timeout": ("float", "120"),
        "concurrency": ("int", "2"),
    },
    "backends.openalex": {
        "mode": ("mode", "none"),
        "base_url": ("str", "https://api.openalex.org"),
        "mailto": ("str", ""),
        "works_cap": ("int", "100"),
        "timeout": ("float", "30"),
        "concurrency": ("int", "4"),
        "cache_ttl": ("float", "3600"),
    },
    "limits": {
        "max_batch": ("int", "500"),
    },
    "model": {
        "path": ("str", ""),
    },
    "lexicons": {
        "directory": ("str", ""),
    },
    "rubric": {
        "path": ("str", ""),
    },
    "server": {
        "host": ("str", "127.0.0.1"),
        "port": ("int", "8000"),
    },
}


@dataclass
class AppConfig:
    """Typed configuration for the engine, backends, and server."""

    values: dict = field(default_factory=dict)

    def get(self, section: str, key: str):
        return self.values[section][key]


def _coerce(section: str, key: str, tag: str, raw: str):
    pointer = f"[{section}] {key}"
    if tag == "int":
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(pointer, f"expected an integer, got {raw!r}")
    if tag == "float":
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(pointer, f"expected a number, got {raw!r}")
    if tag == "mode":
        if raw not in _MODES:
            raise ConfigError(pointer, f"expected one of {', '.join(_MODES)}, got {raw!r}")
        return raw
    return raw.strip() or None


def _env_name(section: str, key: str) -> str:
    return "REVQUAL_" + section.replace(".", "_").upper() + "_" + key.upper()


def load_config(path: str | Path | None = None, env=None) -> AppConfig:
    """Merge defaults, the INI file (if any), and environment overrides."""
    env = os.environ if env is None else env
    raw: dict[str, dict[str, str]] = {
        section: {key: default for key, (_, default) in keys.items()}
        for section, keys in _SCHEMA.items()
    }

    if path is not None:
        parser = configparser.ConfigParser()
        try:
            with open(path, "r", encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(str(path), f"cannot read config file: {exc}")
        except configparser.Error as exc:
            raise ConfigError(str(path), f"cannot parse config file: {exc}")
        for section in parser.sections():
            if section not in _SCHEMA:
                raise ConfigError(f"[{section}]", "unknown config section")
            for key, value in parser.items(section):
                if key not in _SCHEMA[section]:
                    raise ConfigError(f"[{section}] {key}", "unknown config key")
                raw[section][key] = value

    for section, keys in _SCHEMA.items():
        for key in keys:
            override = env.get(_env_name(section, key))
            if override is not None:
                raw[section][key] = override

    values = {
        section: {
            key: _coerce(section, key, _SCHEMA[section][key][0], raw[section][key])
            for key in keys
        }
        for section, keys in _SCHEMA.items()
    }
    port = values["server"]["port"]
    if not 0 < port < 65536:
        raise ConfigError("[server] port", f"port {port} out of range")
    return AppConfig(values=values)


def build_judge_backend(config: AppConfig, env=None):
    env = os.environ if env is None else env
    mode = config.get("backends.judge", "mode")
    if mode == "none":
        return None
    if mode == "mock":
        return MockJudgeBackend()
    endpoint = config.get("backends.judge", "endpoint")
    model = config.get("backends.judge", "model")
    if not endpoint or not model:
        raise ConfigError(
            "[backends.judge] endpoint", "http mode requires endpoint and model"
        )
    key_env = config.get("backends.judge", "api_key_env")
    return HttpJudgeBackend(
        endpoint=endpoint,
        model=model,
        api_key=env.get(key_env) if key_env else None,
        timeout=config.get("backends.judge", "timeout"),
    )


def build_openalex_client(config: AppConfig):
    mode = config.get("backends.openalex", "mode")
    if mode == "none":
        return None
    if mode == "mock":
        return MockOpenAlexClient()
    return OpenAlexClient(
        HttpConfig(
            base_url=config.get("backends.openalex", "base_url"),
            mailto=config.get("backends.openalex", "mailto"),
            timeout=config.get("backends.openalex", "timeout"),
            works_cap=config.get("backends.openalex", "works_cap"),
            concurrency=config.get("backends.openalex", "concurrency"),
            cache_ttl=config.get("backends.openalex", "cache_ttl"),
        )
    )


def build_engine(config: AppConfig, env=None) -> AnalysisEngine:
    """Construct a fully wired engine from configuration."""
    model = None
    model_path = config.get("model", "path")
    if model_path:
        model = load_model(model_path, expected_schema_version=SCHEMA_VERSION)
    lexicon_dir = config.get("lexicons", "directory")
    rubric_path = config.get("rubric", "path")
    return AnalysisEngine(
        judge_backend=build_judge_backend(config, env=env),
        openalex_client=build_openalex_client(config),
        rubric=load_rubric(rubric_path) if rubric_path else None,
        model=model,
        lexicons=load_lexicons(lexicon_dir) if lexicon_dir else None,
    )
