"""
Configuration management for the AC census toolkit.

This module provides Pydantic Settings models for type-safe configuration
management with environment variable support and validation.
"""

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings

from .census import StageConfig
from .gasearch import GAConfig


class CensusSettings(BaseSettings):
    """Settings for census runs (stages 1-5)."""

    max_total_length: int = Field(
        default=12,
        ge=2,
        description="Largest total relator length |r| + |s|"
    )
    relators_cyclically_reduced: bool = Field(
        default=True,
        description="Generate only cyclically reduced relators"
    )
    ordered_pairs: bool = Field(
        default=True,
        description="Generate ordered pairs (r, s) rather than r <= s"
    )
    min_relator_length: int = Field(
        default=1,
        ge=1,
        description="Shortest relator generated"
    )
    coset_budget: int = Field(
        default=50_000,
        ge=1,
        description="Live-coset budget of the order computation"
    )
    shard_count: int = Field(
        default=1,
        ge=1,
        description="Parallel shards for stages 1-3"
    )
    output_path: Path = Field(
        default=Path("census_out"),
        description="Census output directory"
    )

    class Config:
        env_prefix = "CENSUS__"


class SearchSettings(BaseSettings):
    """Settings for the genetic search."""

    population_size: int = Field(default=200, ge=1, description="Individuals per generation")
    max_generations: int = Field(default=100_000, ge=1, description="Generation cap")
    tournament_size: int = Field(default=4, ge=1, description="Entrants per tournament")
    mul_weight: float = Field(default=0.5, ge=0.0)
    inv_weight: float = Field(default=0.2, ge=0.0)
    conj_weight: float = Field(default=0.3, ge=0.0)
    conjugator_bound: int = Field(default=2, ge=1, description="Longest sampled conjugator")
    max_relator_length: int = Field(default=20, ge=1, description="Relator length cap for offspring")
    elitism: int = Field(default=4, ge=1)
    stagnation_restart_after: int = Field(default=300, ge=1)
    rng_seed: int = Field(default=0, description="Default seed, overridden by AC_SEED on the command line")
    wall_clock_budget: Optional[float] = Field(
        default=30.0,
        gt=0,
        description="Seconds per presentation in census mode"
    )
    islands: int = Field(default=1, ge=1, description="Independent populations run in parallel")
    extended_budget_seconds: float = Field(
        default=3600.0,
        gt=0,
        description="Budget for AK(2) and the power variants"
    )
    use_library: bool = Field(default=True, description="Use the bundled certificates in the census sweep")

    class Config:
        env_prefix = "SEARCH__"


class LoggingSettings(BaseSettings):
    """Settings for application logging."""

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="INFO",
        description="Logging level"
    )
    log_file: Optional[Path] = Field(
        default=None,
        description="Optional log file; the console is always used"
    )

    class Config:
        env_prefix = "LOGGING__"


class AppSettings(BaseSettings):
    """Main application settings container."""

    census: CensusSettings = Field(default_factory=CensusSettings)
    search: SearchSettings = Field(default_factory=SearchSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    class Config:
        env_file = ".env"
        env_nested_delimiter = "__"
        case_sensitive = False

    def to_stage_config(self, **overrides) -> StageConfig:
        """StageConfig from the census settings; ``None`` overrides are ignored."""
        values = self.census.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return StageConfig(**values)

    def to_ga_config(self, **overrides) -> GAConfig:
        values = self.search.model_dump(exclude={"islands", "extended_budget_seconds", "use_library"})
        values.update(overrides)
        return GAConfig(**values)

    @classmethod
    def load_config(cls, env_file: Optional[str] = None) -> "AppSettings":
        """Load configuration from environment variables and .env file."""
        if env_file:
            return cls(_env_file=env_file)
        return cls()


def load_settings(env_file: Optional[str] = None) -> AppSettings:
    """Load application settings."""
    return AppSettings.load_config(env_file)
