#!/usr/bin/env python3
"""Configuration loader for orf-spectral.

Loads settings from:
1. Default values
2. ~/.orfspectral/settings.json (orfSpectral namespace)
3. {project}/.orfspectral/settings.json (orfSpectral namespace)
4. Environment variables (highest precedence)

The numerical modules read DEFAULT_CONFIG once, at import, for their keyword
defaults and never call load_config; the CLI passes the loaded values down
as keyword arguments.
"""

import json
import os
import sys
from pathlib import Path
from typing import Any


SETTINGS_NAMESPACE = "orfSpectral"

DEFAULT_CONFIG = {
    # Pole sequences
    "compactnessMargin": 1e-8,  # Required distance of circle poles from T (line: min Im)
    "poleProximity": 1e-12,  # Scalar maps return infinity this close to their pole
    "poleEvaluationTolerance": 1e-10,  # ORF evaluation refuses points this close to a pole
    # Linear algebra
    "conditionLimit": 1e12,  # LU solves above this condition estimate fail
    "eigensolverMaxOrder": 512,  # Largest matrix accepted by the eigensolver
    "unitEigenvalueTolerance": 1e-9,  # "Eigenvalue equals 1" test for mass at infinity
    # Measures and quadrature
    "nodeCollisionTolerance": 1e-10,  # PORF nodes closer than this are an error
    "gramBreakdownRatio": 1e-13,  # Gram-Schmidt pivot ratio that signals breakdown
    # Diagnostics
    "clusterTolerance": 1e-3,  # Radius used to group trailing limit points
    "clusterTailFraction": 0.2,  # Share of the sequence treated as its tail
    # Output
    "outputFormat": "csv",  # "csv" or "json"
    "outputPrecision": 17,  # Significant digits written for floats
}


def load_config(project_path: str | None = None) -> dict[str, Any]:
    """Load configuration with cascading precedence.

    Args:
        project_path: Optional project directory for project-level overrides.

    Returns:
        Merged configuration dictionary.
    """
    config = DEFAULT_CONFIG.copy()

    # Load global settings from ~/.orfspectral/settings.json
    global_settings_path = get_settings_dir() / "settings.json"
    _merge_settings_file(config, global_settings_path, "global")

    # Load project-level overrides if project_path provided
    if project_path:
        project_settings_path = Path(project_path) / ".orfspectral" / "settings.json"
        _merge_settings_file(config, project_settings_path, "project")

    # Environment variable overrides
    env_mappings = {
        "ORF_SPECTRAL_MARGIN": ("compactnessMargin", float),
        "ORF_SPECTRAL_POLE_PROXIMITY": ("poleProximity", float),
        "ORF_SPECTRAL_POLE_TOLERANCE": ("poleEvaluationTolerance", float),
        "ORF_SPECTRAL_CONDITION_LIMIT": ("conditionLimit", float),
        "ORF_SPECTRAL_MAX_ORDER": ("eigensolverMaxOrder", int),
        "ORF_SPECTRAL_UNIT_TOLERANCE": ("unitEigenvalueTolerance", float),
        "ORF_SPECTRAL_NODE_COLLISION": ("nodeCollisionTolerance", float),
        "ORF_SPECTRAL_BREAKDOWN_RATIO": ("gramBreakdownRatio", float),
        "ORF_SPECTRAL_CLUSTER_TOLERANCE": ("clusterTolerance", float),
        "ORF_SPECTRAL_CLUSTER_TAIL": ("clusterTailFraction", float),
        "ORF_SPECTRAL_FORMAT": ("outputFormat", str),
        "ORF_SPECTRAL_PRECISION": ("outputPrecision", int),
    }

    for env_var, (config_key, converter) in env_mappings.items():
        if env_var in os.environ:
            try:
                config[config_key] = converter(os.environ[env_var])
            except (ValueError, TypeError) as e:
                debug_log("config", f"Warning: Invalid value for {env_var}: {e}")

    return config


def _merge_settings_file(config: dict[str, Any], path: Path, label: str) -> None:
    if not path.exists():
        return
    try:
        with open(path) as f:
            settings = json.load(f)
            if isinstance(settings, dict) and SETTINGS_NAMESPACE in settings:
                config.update(settings[SETTINGS_NAMESPACE])
    except (json.JSONDecodeError, OSError) as e:
        debug_log("config", f"Warning: Failed to load {label} settings: {e}")


def get_settings_dir() -> Path:
    """Get the user settings directory path.

    Returns:
        Path to ~/.orfspectral directory.
    """
    return Path.home() / ".orfspectral"


def is_debug_enabled() -> bool:
    """Check if debug mode is enabled.

    Returns:
        True if ORF_SPECTRAL_DEBUG is set to a truthy value.
    """
    debug = os.environ.get("ORF_SPECTRAL_DEBUG", "").lower()
    return debug in ("1", "true", "yes", "on")


def debug_log(tag: str, message: str) -> None:
    """Print a tagged debug line to stderr when debug mode is on.

    stdout carries CSV/JSON results, so traces never go there.
    """
    if is_debug_enabled():
        print(f"[{tag}] {message}", file=sys.stderr)


if __name__ == "__main__":
    config = load_config()
    print("Current configuration:")
    for key, value in config.items():
        print(f"  {key}: {value}")

    print(f"\nSettings dir: {get_settings_dir()}")
    print(f"Debug enabled: {is_debug_enabled()}")
