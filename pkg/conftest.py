import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

from src.utils.config_loader import ConfigLoader
from src.utils.precision import configure_precision


@pytest.fixture(autouse=True)
def lab_defaults():
    """Pins 128-bit precision and drops config overrides left by a previous test."""
    ConfigLoader().clear_overrides()
    configure_precision(128)
    yield
    ConfigLoader().clear_overrides()
    configure_precision(128)


@pytest.fixture(scope='session')
def preset():
    from src.norms.spec_parser import load_params
    return load_params(os.path.join(os.path.dirname(__file__), 'config', 'presets', 'preset.json'))
