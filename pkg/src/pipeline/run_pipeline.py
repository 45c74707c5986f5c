"""
run_pipeline.py

Config and I/O helpers shared by the CLI, the check agents and the report builders.
Config is always loaded inside runtime functions, never at import time.
"""

import json
import pathlib
from typing import Any, Dict, Optional

import yaml

from src.optics.gates import NsConfig, PlateConventions

BASE_DIR = pathlib.Path(__file__).resolve().parents[2]  # repo root
CONFIG_DIR = BASE_DIR / "config"
DEFAULT_CONFIG = "simulation_config.yaml"


def load_config(filename: str = DEFAULT_CONFIG) -> Dict[str, Any]:
    """
    Load a simulation config from the config directory.

    Args:
        filename: name of the file in the config/ directory, or a path to a YAML file
    """
    config_path = pathlib.Path(filename)
    if not config_path.is_file():
        config_path = CONFIG_DIR / filename
    with open(config_path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


def plate_conventions_from_config(config: Dict[str, Any]) -> PlateConventions:
    names = config.get("plate_conventions")
    if not names:
        return PlateConventions()
    return PlateConventions.from_names(names)


def default_ns_config(config: Dict[str, Any]) -> NsConfig:
    refl = config.get("reflectivities", {})
    return NsConfig(float(refl.get("r_v", 0.5)), float(refl.get("r_h", 0.5)))


def resolve_output_dir(config: Dict[str, Any], key: str) -> pathlib.Path:
    rel = config.get("outputs", {}).get(key, key)
    path = pathlib.Path(rel)
    return path if path.is_absolute() else BASE_DIR / path


def write_payload(text: str, out_path: Optional[str]) -> Optional[pathlib.Path]:
    """Write a serialized report to a file; returns the path, or None for stdout."""
    if out_path is None:
        return None
    path = pathlib.Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2) + "\n"
