import random

import pytest

from nomre.corpus import ALPHABET, all_expr_texts, default_pool, handbuilt_automata
from nomre.expr import parse


@pytest.fixture(scope="session")
def pool3():
    return default_pool(3)


@pytest.fixture(scope="session")
def corpus_exprs():
    return {k: parse(v, ALPHABET) for k, v in all_expr_texts().items()}


@pytest.fixture(scope="session")
def hand_automata():
    return handbuilt_automata()


@pytest.fixture
def rng():
    return random.Random(20240901)
