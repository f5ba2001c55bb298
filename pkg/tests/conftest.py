import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from inqshell import eqetic, parse  # noqa: E402

TINY_KB = """
kb "tiny" version "1"

var climate: univalued (warm, cold)
var advice: univalued (go-outside, stay-in)

rule R1: if climate is warm then advice is go-outside cf 0.9
rule R2: if climate is cold then advice is stay-in cf 0.8

prompt climate: choice "What is the climate like?" cf-input

goal advice
"""


@pytest.fixture(scope="session")
def tiny_kb():
    result = parse(TINY_KB)
    assert result.ok, result.diagnostics
    return result.kb


@pytest.fixture(scope="session")
def eqetic_kb():
    return eqetic.build()


@pytest.fixture(scope="session")
def repo_root():
    return Path(__file__).resolve().parents[1]
