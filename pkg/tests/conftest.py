from fractions import Fraction

import pytest
from hypothesis import strategies as st

from rhonorm.norms.schedules import parse_schedule
from rhonorm.ordinals import ZERO, Ordinal, from_int, parse
from rhonorm.vectors import Vec00


@pytest.fixture(scope="session")
def sched_23():
    """The one-slot toy schedule used by most frozen values."""
    return parse_schedule("m=2;n=3")


@pytest.fixture(scope="session")
def sched_245():
    return parse_schedule("m=2,4;n=3,5")


@pytest.fixture(scope="session")
def sched_demo():
    """The 14-slot hand schedule the special-sequence machinery runs on."""
    return parse_schedule("m=2,3,4,6,7,8,9,10,11,12,13,14,15,16;"
                          "n=2,3,5,6,7,8,9,10,11,12,13,14,15,16")


def vec(*pairs) -> Vec00:
    return Vec00.make([(from_int(i), Fraction(c)) for i, c in pairs])


def ordinals(max_exp: int = 3, max_terms: int = 4):
    """Strategy for CNF ordinals with natural exponents up to w^max_exp."""
    term = st.tuples(st.integers(0, max_exp), st.integers(1, 5))

    def build(ts) -> Ordinal:
        x = ZERO
        for e, c in sorted(ts, reverse=True):
            x = x + parse(f"w^{e}*{c}")
        return x

    return st.builds(build, st.lists(term, max_size=max_terms))
