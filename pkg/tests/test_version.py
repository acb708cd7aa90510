# -*- coding: utf-8 -*-
"""Test the version number."""

from importlib import reload
from importlib.metadata import PackageNotFoundError
from unittest.mock import patch

import pytest

import lanneal


@pytest.fixture(autouse=True)
def reload_lanneal():
    """Make sure lanneal is reloaded after these tests"""
    original_version = lanneal.__version__
    yield
    reload(lanneal)
    assert lanneal.__version__ == original_version


def test_lanneal_version():
    """Assert the correct version is set"""
    with patch("importlib.metadata.version", return_value="1.2.3"):
        reload(lanneal)
    assert lanneal.__version__ == "1.2.3"


def test_lanneal_version_package_not_found():
    """Assert the version is unknown if the package is not installed."""
    with patch("importlib.metadata.version", side_effect=PackageNotFoundError):
        reload(lanneal)
    assert lanneal.__version__ == "unknown"
