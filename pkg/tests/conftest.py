"""Shared brute-force oracles, deliberately independent of the library paths."""

import itertools
import random
from fractions import Fraction

import pytest

from convmax.gridfn import GridFn


def brute_convolve(f: GridFn, g: GridFn) -> dict:
    """Direct double sum over all point pairs; returns {point: value}."""
    out = {}
    for pf in itertools.product(range(f.m + 1), repeat=f.d):
        for pg in itertools.product(range(g.m + 1), repeat=g.d):
            key = tuple(a + b for a, b in zip(pf, pg))
            out[key] = out.get(key, 0) + f[pf] * g[pg]
    return out


def brute_pb_pmf(p):
    """Pmf by enumerating all 2^k success patterns."""
    k = len(p)
    pmf = [0] * (k + 1)
    for pattern in itertools.product((0, 1), repeat=k):
        prob = 1
        for b, q in zip(pattern, p):
            prob *= q if b else (1 - q)
        pmf[sum(pattern)] += prob
    return pmf


def random_exact_gridfn(rng: random.Random, d: int, m: int = 1,
                        allow_zero: bool = False) -> GridFn:
    size = (m + 1) ** d
    while True:
        vals = [Fraction(rng.randint(0, 12), rng.randint(1, 6)) for _ in range(size)]
        if allow_zero or any(vals):
            return GridFn(d, m, vals)


@pytest.fixture
def rng():
    return random.Random(20240817)
