"""
This module contains the configuration classes for hiddenflows.
"""
from hiddenflows.config.config import Config
from hiddenflows.config.singleton import Singleton

__all__ = [
    "Config",
    "Singleton",
]
