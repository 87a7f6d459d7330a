"""
Configuration loading utilities for the AC census toolkit.

This module provides configuration loading with validation, error handling,
and environment file management.
"""

import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import psutil
from loguru import logger
from pydantic import ValidationError

from .config import AppSettings
from .error_handling import ConfigurationError

ENV_PREFIXES = ("CENSUS__", "SEARCH__", "LOGGING__", "AC_SEED")


class ConfigLoader:
    """Configuration loader with validation and error handling."""

    DEFAULT_ENV_FILES = [".env", ".env.local"]

    def __init__(self):
        self.loaded_files: List[Path] = []
        self.missing_files: List[Path] = []
        self.validation_errors: List[str] = []

    def find_env_files(self, search_paths: Optional[List[Path]] = None) -> List[Path]:
        """Find available .env files in search paths."""
        if search_paths is None:
            search_paths = [Path.cwd()]

        found_files = []
        for search_path in search_paths:
            for env_file in self.DEFAULT_ENV_FILES:
                env_path = search_path / env_file
                if env_path.is_file():
                    found_files.append(env_path)
                    self.loaded_files.append(env_path)
                else:
                    self.missing_files.append(env_path)
        return found_files

    def check_settings(self, settings: AppSettings) -> List[str]:
        """Soft checks; problems here are warnings, not errors."""
        warnings = []
        cpus = psutil.cpu_count() or 1
        if settings.census.shard_count > cpus:
            warnings.append(
                f"CENSUS__SHARD_COUNT={settings.census.shard_count} exceeds the {cpus} available CPUs"
            )
        if settings.search.islands > cpus:
            warnings.append(f"SEARCH__ISLANDS={settings.search.islands} exceeds the {cpus} available CPUs")
        if settings.census.max_total_length > 12:
            warnings.append("census counts above total length 12 are unverified")
        return warnings

    def load_with_validation(self, env_file: Optional[str] = None) -> Tuple[AppSettings, List[str]]:
        """
        Load configuration with validation.

        Returns:
            Tuple of (settings, warnings)
        """
        warnings: List[str] = []
        try:
            if env_file:
                if not Path(env_file).exists():
                    raise ConfigurationError(f"Specified env file does not exist: {env_file}",
                                             config_key="env_file")
                settings = AppSettings(_env_file=env_file)
                self.loaded_files.append(Path(env_file))
                logger.info(f"Loaded configuration from: {env_file}")
            else:
                found_files = self.find_env_files()
                if found_files:
                    settings = AppSettings(_env_file=str(found_files[0]))
                    logger.info(f"Loaded configuration from: {found_files[0]}")
                else:
                    settings = AppSettings()
                    logger.debug("No .env file found, using environment variables and defaults")
        except ValidationError as e:
            error_details = []
            for error in e.errors():
                field = " -> ".join(str(loc) for loc in error["loc"])
                error_details.append(f"{field}: {error['msg']}")
            self.validation_errors.extend(error_details)
            raise ConfigurationError("Configuration validation failed:\n" + "\n".join(error_details)) from e

        warnings.extend(self.check_settings(settings))
        return settings, warnings

    def get_config_status(self) -> Dict[str, Any]:
        """Get detailed status of configuration loading."""
        return {
            "loaded_files": [str(f) for f in self.loaded_files],
            "missing_files": [str(f) for f in self.missing_files],
            "validation_errors": self.validation_errors,
            "environment_variables": {
                key: value for key, value in os.environ.items() if key.upper().startswith(ENV_PREFIXES)
            },
        }


def load_config(env_file: Optional[str] = None, validate: bool = True) -> AppSettings:
    """
    Load application configuration with optional validation.

    Raises:
        ConfigurationError: If loading or validation fails
    """
    if not validate:
        return AppSettings.load_config(env_file)
    loader = ConfigLoader()
    settings, warnings = loader.load_with_validation(env_file)
    for warning in warnings:
        logger.warning(warning)
    return settings


def create_default_env_file(output_path: str = ".env") -> None:
    """Create a default .env file listing every setting with its default."""
    env_content = """# AC census toolkit - environment configuration

# =============================================================================
# Census (stages 1-5)
# =============================================================================
CENSUS__MAX_TOTAL_LENGTH=12
CENSUS__RELATORS_CYCLICALLY_REDUCED=true
CENSUS__ORDERED_PAIRS=true
CENSUS__MIN_RELATOR_LENGTH=1
CENSUS__COSET_BUDGET=50000
CENSUS__SHARD_COUNT=1
CENSUS__OUTPUT_PATH=./census_out

# =============================================================================
# Genetic search (stage 6 and the search command)
# =============================================================================
SEARCH__POPULATION_SIZE=200
SEARCH__TOURNAMENT_SIZE=4
SEARCH__ELITISM=4
SEARCH__CONJUGATOR_BOUND=2
SEARCH__MAX_RELATOR_LENGTH=20
SEARCH__STAGNATION_RESTART_AFTER=300
SEARCH__WALL_CLOCK_BUDGET=30
SEARCH__ISLANDS=1
SEARCH__EXTENDED_BUDGET_SECONDS=3600
SEARCH__USE_LIBRARY=true

# =============================================================================
# Logging
# =============================================================================
LOGGING__LOG_LEVEL=INFO
"""
    output_file = Path(output_path)
    if output_file.exists():
        raise FileExistsError(f"File already exists: {output_path}")
    output_file.write_text(env_content)
    logger.info(f"Created default .env file: {output_path}")


def validate_config_file(env_file: str) -> Dict[str, Any]:
    """Validate a configuration file and return detailed results."""
    loader = ConfigLoader()
    try:
        settings, warnings = loader.load_with_validation(env_file)
        return {
            "valid": True,
            "settings": settings.model_dump(mode="json"),
            "warnings": warnings,
            "status": loader.get_config_status(),
        }
    except ConfigurationError as e:
        return {
            "valid": False,
            "error": str(e),
            "status": loader.get_config_status(),
        }
