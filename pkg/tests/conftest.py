import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

from mixsynth import sources  # noqa: E402

FIRST_GOAL = "Int -> <succ : Int, compare : <get : Int> -> Bool, succTwice : Int>"
SECOND_GOAL = "Int -> <succ : Int -> Int, succTwice : Int>"
PARITY_GOAL = "Int & Even -> rec(succ(Int & Even))"
SIGNED_GOAL = "String -> rec(get(String & Enc(Plain & Time & Sign(Plain & Time))))"
TRIPLE_GOAL = "String -> rec(get(String & Enc(Enc(Enc(Plain)))))"


@pytest.fixture(scope="session")
def running():
    return sources.load("running")


@pytest.fixture(scope="session")
def extended():
    return sources.load("extended")


@pytest.fixture(scope="session")
def full():
    return sources.load("full")


@pytest.fixture(scope="session")
def crypto():
    return sources.load("crypto")


@pytest.fixture(scope="session")
def semantic():
    return sources.load("semantic")
