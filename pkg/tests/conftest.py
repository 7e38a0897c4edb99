import random

import pytest
from hypothesis import strategies as st

from rslcheck import GameTree, centipede
from rslcheck.generators import random_tree


@pytest.fixture
def cent():
    return centipede()


@pytest.fixture
def line():
    # r -x-> t, owner 1 at r, p everywhere
    return GameTree.build("r", [("r", "x", "t")], turn={"r": 1}, props={"r": {"p"}, "t": {"p"}})


@st.composite
def trees(draw, max_states=14, payoffs=False):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_tree(random.Random(seed), max_states=max_states, payoffs=payoffs)


@st.composite
def seeds(draw):
    return draw(st.integers(min_value=0, max_value=2**32 - 1))
