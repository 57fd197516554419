"""Configuration management for the hyperswitch experiment harness."""
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="HYPERSWITCH_",
        case_sensitive=False,
        extra="ignore",
    )

    # Randomness
    # Master seed for randomized subcommands (HYPERSWITCH_SEED); no wall-clock fallback.
    seed: Optional[int] = None

    # Switching
    max_rejects: int = 1_000_000
    # Below this many candidate tuples, admissible switchings are enumerated exactly.
    switch_enumeration_ceiling: int = 50_000

    # Oracle guards
    enumeration_node_ceiling: int = 100_000_000
    sequence_space_ceiling: int = 2_000_000
    preimage_ceiling: int = 10_000_000
    fb_audit_ceiling: int = 10_000_000

    # Statistics
    significance: float = 0.01
    sigma_tolerance: float = 3.0
    uniformity_min_samples: int = 20_000

    # Trials
    jobs: int = 1

    # Monitoring
    metrics_path: Optional[str] = None

    # Logging
    log_level: str = "INFO"
    log_format: str = "text"


settings = Settings()
