import os
from pathlib import Path
from typing import Literal, Optional

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class AppSettings(BaseSettings):
    name: str = "foldmatch"
    version: str = "0.1.0"


class LoggingSettings(BaseSettings):
    format: Literal["console", "json"] = "console"
    level: str = "WARNING"


class SweepSettings(BaseSettings):
    """
    Exhaustive verification sweeps.
    FOLDMATCH_THREADS sets the number of worker processes for per-triangulation checks.
    """
    threads: int = Field(default_factory=lambda: int(os.environ.get("FOLDMATCH_THREADS", "1")), ge=1)
    max_rank: int = Field(default=3, ge=2)
    kinds: list[Literal["A", "B", "C"]] = ["B", "C"]


class OracleSettings(BaseSettings):
    closure_budget: int = Field(default=5000, ge=1)  # seeds per exploration


class RenderSettings(BaseSettings):
    format: Literal["dot", "tikz"] = "dot"
    scale: float = Field(default=1.0, gt=0)  # tikz cm per tile side
    matching_color: str = "red"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_nested_delimiter="__", env_file=".env", extra="ignore")
    app: AppSettings = AppSettings()
    logging: LoggingSettings = LoggingSettings()
    sweep: SweepSettings = SweepSettings()
    oracle: OracleSettings = OracleSettings()
    render: RenderSettings = RenderSettings()

    @classmethod
    def settings_customise_sources(cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings):
        # environment beats the yaml file, which arrives as init kwargs
        return env_settings, init_settings, dotenv_settings, file_secret_settings

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> "Settings":
        default_path = Path("config/settings.yaml")
        path = config_path or (default_path if default_path.exists() else None)

        if not path:
            return cls()

        with open(path, "r") as f:
            config_data = yaml.safe_load(f) or {}

        return cls(**config_data)


settings = Settings.load()
