"""Shared strategies and helpers for the test suite."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from kcurv.symform import Form


def small_fractions(max_num=4, max_den=3):
    return st.builds(
        Fraction,
        st.integers(min_value=-max_num, max_value=max_num),
        st.integers(min_value=1, max_value=max_den),
    )


def exponent_tuples(degree, dim):
    """All exponent tuples of the given total degree."""
    if dim == 1:
        return [(degree,)]
    out = []
    for lead in range(degree + 1):
        out.extend((lead,) + rest for rest in exponent_tuples(degree - lead, dim - 1))
    return out


def random_form_strategy(degree, dim, max_num=3):
    exps = exponent_tuples(degree, dim)
    return st.lists(
        st.integers(min_value=-max_num, max_value=max_num),
        min_size=len(exps), max_size=len(exps),
    ).map(lambda cs: Form(degree, dim,
                          {e: c for e, c in zip(exps, cs) if c}))


def rational_vectors(dim, max_num=4, max_den=3):
    return st.lists(small_fractions(max_num, max_den),
                    min_size=dim, max_size=dim)


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)
