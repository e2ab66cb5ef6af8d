"""Runtime configuration using Pydantic Settings."""

from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Defaults loaded from ``SPECTRAL_*`` environment variables or ``.env``."""

    model_config = SettingsConfigDict(
        env_prefix="SPECTRAL_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Operator defaults
    truncation: int = 4096
    n_cells: int = 256
    norm_p: Literal[1, 2] = 2
    tolerance: float = 1e-9

    # Enumeration
    rational_order: Literal["farey", "calkin_wilf"] = "farey"
    sample_extent: float = 10.0
    witness_budget: int = 1_000_000

    # Volterra norm estimation
    power_max_iterations: int = 5000
    power_tolerance: float = 1e-8
    max_matrix_cells: int = 4096

    # Sweeps
    sweep_workers: int = 1

    # Logging
    log_level: str = "WARNING"
    log_json: bool = False


settings = Settings()
