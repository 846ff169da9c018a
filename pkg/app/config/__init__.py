"""
Configuration module for the periodic orbit solver.

This module provides application settings, environment variable management,
logging setup and the built-in demonstration systems.

Exports:
    - get_settings: Function to get cached settings instance
    - Settings: Settings class for configuration
    - configure_logging: Install stderr/file log handlers
    - DemoId: Identifiers of the built-in systems
    - DEMO_SPECS: Spec-file text of the built-in systems
    - PUBLISHED_INITIAL_VALUES: Published x(0), y(0) per built-in system
    - PUBLISHED_DEFECT_BOUNDS: Published periodicity defect bounds
"""

from .demos import DEMO_SPECS, PUBLISHED_DEFECT_BOUNDS, PUBLISHED_INITIAL_VALUES, DemoId
from .logging import configure_logging
from .settings import Settings, get_settings

__all__ = [
    "DEMO_SPECS",
    "PUBLISHED_DEFECT_BOUNDS",
    "PUBLISHED_INITIAL_VALUES",
    "DemoId",
    "Settings",
    "configure_logging",
    "get_settings",
]
