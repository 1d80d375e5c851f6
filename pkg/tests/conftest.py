import pytest

from helpers import load_entries


@pytest.fixture(scope="session")
def golden():
    """identity_id -> golden entry, merged across all groups."""
    return load_entries()


@pytest.fixture(scope="session")
def stress():
    """The 60-digit large-order summation, computed once for the whole run."""
    from whitadd.cli import _stress_summary

    return _stress_summary()
