"""Shared helpers: seeded random vectors and common algebra fixtures."""

import random
from fractions import Fraction

import pytest

from postlie import liealg, products, rmatrix, scalars

BUILTIN_RMATRICES = ("sl2-borel", "split2", "sl2-id")


def seeded(seed):
    return random.Random(seed)


def random_vector(L, rng, span=3):
    """Random exact coordinate vector with small integer entries."""
    coords = [Fraction(rng.randint(-span, span)) for _ in range(L.dim)]
    if all(c == 0 for c in coords):
        coords[rng.randrange(L.dim)] = Fraction(1)
    if L.mode == scalars.FLOAT:
        return tuple(float(c) for c in coords)
    return tuple(coords)


def random_word(L, rng, max_len=3):
    """Random PBW-basis word (tuple of basis indices, sorted not required)."""
    n = rng.randint(1, max_len)
    return tuple(rng.randrange(L.dim) for _ in range(n))


@pytest.fixture
def sl2():
    return liealg.builtin("sl(2)")


@pytest.fixture
def so3():
    return liealg.builtin("so(3)")


@pytest.fixture
def borel_ctx():
    return rmatrix.builtin_rmatrix("sl2-borel")


@pytest.fixture
def split2_ctx():
    return rmatrix.builtin_rmatrix("split2")


@pytest.fixture
def borel_product(borel_ctx):
    return products.from_rmatrix(borel_ctx, "-")


@pytest.fixture
def split2_product(split2_ctx):
    return products.from_rmatrix(split2_ctx, "-")
