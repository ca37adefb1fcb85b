"""Shared fixtures: the instances used across the suite."""

from __future__ import annotations

from collections.abc import Iterator

import pytest

from src.export.registry import reset_export_registry
from src.problem.model import Instance, validate_instance


@pytest.fixture
def inst22() -> Instance:
    return validate_instance({"s": 2, "k": 2, "theta": ["0.3", "0.7"]})


@pytest.fixture
def inst32() -> Instance:
    return validate_instance({"s": 3, "k": 2, "theta": ["0.25", "0.5", "0.75"]})


@pytest.fixture
def inst23() -> Instance:
    return validate_instance({"s": 2, "k": 3, "theta": ["0.3", "0.7"]})


@pytest.fixture
def inst33() -> Instance:
    return validate_instance({"s": 3, "k": 3, "theta": ["0.25", "0.5", "0.75"]})


@pytest.fixture(autouse=True)
def _fresh_export_registry() -> Iterator[None]:
    reset_export_registry()
    yield
    reset_export_registry()
