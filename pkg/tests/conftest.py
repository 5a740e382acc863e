"""Shared fixtures: the worked-example setups, built once per session."""

import pytest

import wreduce as w


@pytest.fixture(scope="session")
def kdv():
    return w.kdv_setup()


@pytest.fixture(scope="session")
def fkdv():
    return w.fkdv_setup()


@pytest.fixture(scope="session")
def fkdv_family():
    return w.fkdv_variants()
