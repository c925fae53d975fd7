from pathlib import Path
from typing import Any

from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from degenwave.core.errors import ConfigError
from degenwave.models.schemas import Scenario


class Settings(BaseSettings):
    LOG_LEVEL: str = "INFO"
    ALLOWED_ORIGINS: str = "*"
    DEGENWAVE_SEED: int | None = None
    DEGENWAVE_JOBS: int = 1

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")


settings = Settings()


def parse_config_text(text: str) -> dict[str, Any]:
    """Parse flat `key = value` lines with dotted section prefixes into nested dicts."""
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"config line {lineno}: empty key")
        *sections, leaf = key.lower().split(".")
        target = values
        for section in sections:
            node = target.setdefault(section, {})
            if not isinstance(node, dict):
                raise ConfigError(f"config line {lineno}: {section!r} is both a value and a section")
            target = node
        if leaf in target:
            raise ConfigError(f"config line {lineno}: duplicate key {key!r}")
        target[leaf] = value
    return values


def build_scenario(values: dict[str, Any]) -> Scenario:
    """Validate raw scenario values, applying the DEGENWAVE_SEED override."""
    env = Settings()
    values = dict(values)
    if env.DEGENWAVE_SEED is not None:
        values["seed"] = env.DEGENWAVE_SEED
    try:
        return Scenario.model_validate(values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"config: {problems}") from e


def load_scenario(path: str | Path | None, overrides: dict[str, Any] | None = None) -> Scenario:
    """Read a scenario config file (or defaults when path is None)."""
    values: dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config: file not found: {path}")
        values = parse_config_text(path.read_text(encoding="utf-8"))
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return build_scenario(values)
