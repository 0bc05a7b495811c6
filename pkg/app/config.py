"""Application configuration using pydantic-settings."""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Linear algebra budget
    max_dimension: int = 20000  # monomials per degree

    # Degree caps
    exceptional_degree_cap: int = 40
    default_max_degree: int = 24
    free_rank_degree_cap: int = 6  # Koszul cross-check of integral free ranks

    # Smith normal form self-checks
    verify_transforms: bool = True

    # Output
    output_format: str = "json"
    schema_version: str = "1"

    # Logging
    log_level: str = "INFO"

    # App info
    app_name: str = "Lie Cohomology"
    app_version: str = "1.0.0"

    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8")


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
