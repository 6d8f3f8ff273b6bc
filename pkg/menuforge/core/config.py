"""
Application Configuration

Centralized configuration using Pydantic Settings
"""

from pydantic_settings import BaseSettings, SettingsConfigDict

from menuforge import __version__


class Settings(BaseSettings):
    """
    Settings loaded from MENUFORGE_* environment variables (or .env)
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="MENUFORGE_",
        case_sensitive=True,
        extra="ignore",
    )

    # Application
    APP_NAME: str = "menuforge"
    VERSION: str = __version__
    ENVIRONMENT: str = "development"

    # Logging
    LOG_LEVEL: str = "INFO"

    # Workers for independent LPs / samples (--jobs mirrors this)
    JOBS: int = 1

    # Geometry
    MAX_VERTEX_DIM: int = 16
    HAUSDORFF_TOLERANCE: float = 1e-9
    HAUSDORFF_MAX_ITERATIONS: int = 20000

    # Corpus
    GAMES_DIR: str = "games"

    # Simulation
    POWER_ITERATION_TOLERANCE: float = 1e-12
    FLOAT_RATIONAL_DENOMINATOR: int = 10**9
    DEFAULT_SEED: int = 0

    # Pareto search
    SWEEP_BUDGET: int = 512
    AUDIT_SAMPLES: int = 500


# Global settings instance
settings = Settings()
