"""
Shared fixtures for pathram tests
"""

import pytest
from hypothesis import settings

from pathram.walks import make_walk, parse_walk

settings.register_profile("pathram", max_examples=40, derandomize=True, deadline=None)
settings.load_profile("pathram")

# Maximizing walks of W(28, 28) published alongside k*(P_28, P_28) = 791.
OPTIMAL_28 = "1^6,2^2,1^7,2,1^14,2^24"
OPTIMAL_28_ALT = "1,1,2,1,2,2,1^24,2^24"


@pytest.fixture
def worked_walk():
    """Prefix of the worked example walk (1,1,2,2,1,1,1,2,...)"""
    return make_walk(2, [1, 1, 2, 2, 1, 1, 1, 2])


@pytest.fixture
def optimal_walks():
    return [parse_walk(OPTIMAL_28), parse_walk(OPTIMAL_28_ALT)]


@pytest.fixture
def greedy_5_3():
    return make_walk(2, [2, 2, 1, 1, 1, 1])
