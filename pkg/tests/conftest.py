import numpy as np
import pytest

from mudilate.gallery import (build_exam1, build_exam2, build_exam3,
                              build_exam3_dilation, build_exam5)
from mudilate.spaces import window


TRUNC = 8
MARGIN = 4


@pytest.fixture(scope="session")
def exam1():
    space, tup, expected_f = build_exam1(TRUNC)
    return space, tup, expected_f, window(space, MARGIN)


@pytest.fixture(scope="session")
def exam2():
    space, tup7, tup5, displayed, expected_g = build_exam2(TRUNC)
    return space, tup7, tup5, displayed, expected_g, window(space, MARGIN)


@pytest.fixture(scope="session")
def exam3():
    space, tup, f_emb = build_exam3(0.5, TRUNC)
    return space, tup, f_emb, window(space, MARGIN)


@pytest.fixture(scope="session")
def exam5():
    space, tup, x_emb = build_exam5(0.5, TRUNC)
    return space, tup, x_emb, window(space, MARGIN)


def random_contraction(rng, dim, top=0.95):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return m * (top * rng.uniform(0.2, 1.0) / np.linalg.norm(m, 2))
