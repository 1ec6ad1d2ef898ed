from __future__ import annotations

import functools

import pytest

from vsalgebroid.examples import section4_inputs
from vsalgebroid.kahler import build_section4_algebroid, build_section4_L1
from vsalgebroid.verma import build_vb

# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE: dict[int, str] = {}

INPUTS = section4_inputs()
NAMES = sorted(INPUTS)


@functools.lru_cache(maxsize=None)
def algebroid(name: str):
    return build_section4_algebroid(INPUTS[name])


@functools.lru_cache(maxsize=None)
def b_module(name: str):
    return build_section4_L1(INPUTS[name], algebroid(name))


@functools.lru_cache(maxsize=None)
def vb(name: str, degree: int = 4):
    return build_vb(algebroid(name), degree)


@pytest.fixture(params=NAMES)
def fixture_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
