"""Shifted Waring Lab: command-line front end."""

from src.cli.config import Config, apply_overrides, parse_config
from src.cli.main import exit_code_for, main, run

__all__ = ["Config", "apply_overrides", "exit_code_for", "main", "parse_config", "run"]
