"""Closed-form optimal constants on {0,1}^d and the diagonal envelope.

The one-dimensional constant is

    binom(k, floor(k/2)) / 2^k                       for odd k,
    binom(k, floor(k/2)) / 2^k * (1 - 1/(k+1)^2)^(k/2)  for even k,

and the d-dimensional reference value is its d-th power.  The tensor power
is attained with equality by the product extremal function, and for odd k it
is a valid lower bound in every dimension.  For even k and d >= 2 it is NOT a
lower bound for all inputs: exact rational counterexamples exist (two distinct
factors at k=2, d=2; five-point Sidon sets at k=2, d=3), so consumers must
treat optimal_constant_d as the conjectured/attained value rather than a
guaranteed floor outside the odd-k and d=1 cases.  Everything here is exact
rational arithmetic; the even-k exponent k/2 is an integer so no real powers
are ever taken.

Note: the source remark bounding the continuous constant reads
``C_k <= k(m+1) Cbar_{2,m}``; the subscript 2 is a typo for k (the remark is
stated for general k and the m=1 corollary uses C_{k,1}).  This module
implements the k-version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List

from .gridfn import GridFn, ratio

#: Largest k accepted by the exact verification helpers.
K_BUDGET = 64


def optimal_constant(k: int) -> Fraction:
    """Best constant for k factors on {0,1} (exact rational)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    c = Fraction(math.comb(k, k // 2), 2**k)
    if k % 2 == 0:
        c *= (1 - Fraction(1, (k + 1) ** 2)) ** (k // 2)
    return c


def optimal_constant_d(k: int, d: int) -> Fraction:
    """Tensor power of the 1-d constant: the reference value on {0,1}^d.

    Attained exactly by the product extremal function; a proven lower bound
    when d = 1 or k is odd, and falsifiable for even k when d >= 2 (see the
    module docstring).
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return optimal_constant(k) ** d


def extremal_function(k: int, d: int) -> GridFn:
    """A function attaining equality for k factors on {0,1}^d.

    f(x) = (k - floor(k/2))^(sum x) * (floor(k/2) + 1)^(d - sum x); constant
    ((k+1)/2)^d when k is odd.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    hi = k - k // 2
    lo = k // 2 + 1
    f = GridFn(d, 1, [1] * (2**d))
    vals = [hi ** sum(p) * lo ** (d - sum(p)) for p in f.points()]
    return GridFn(d, 1, vals)


@dataclass(frozen=True)
class SharpnessCertificate:
    k: int
    d: int
    lhs: Fraction  # ratio of k copies of the extremal function
    rhs: Fraction  # closed-form constant
    passed: bool


def verify_sharpness(k: int, d: int) -> SharpnessCertificate:
    """Exact check that the extremal function attains the closed form."""
    if k > K_BUDGET:
        raise ValueError(f"k={k} exceeds the exact-arithmetic budget {K_BUDGET}")
    f = extremal_function(k, d)
    lhs = ratio([f] * k)
    rhs = optimal_constant_d(k, d)
    return SharpnessCertificate(k, d, lhs, rhs, lhs == rhs)


def envelope_value(k: int, x: Fraction) -> Fraction:
    """max_{0<=i<=k} binom(k,i) x^(k-i) (1-x)^i at a point of [0,1]."""
    return max(math.comb(k, i) * x ** (k - i) * (1 - x) ** i for i in range(k + 1))


@dataclass(frozen=True)
class DiagonalProfile:
    """Piecewise description of the diagonal envelope and its minimum.

    On [(k-i)/(k+1), (k+1-i)/(k+1)] the envelope equals the i-th term, so the
    per-interval argmax index drops by one from k down to 0 as x sweeps [0,1].
    """

    k: int
    breakpoints: List[Fraction]      # (k-i)/(k+1), i = k..0, ascending
    piece_index: List[int]           # argmax index on each of the k+1 intervals
    envelope_min_value: Fraction
    envelope_min_locations: List[Fraction]


def diagonal_profile(k: int) -> DiagonalProfile:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    breakpoints = [Fraction(j, k + 1) for j in range(k + 1)]
    piece_index = list(range(k, -1, -1))
    # Interval-endpoint values; the minimum over the left endpoints of the
    # lower half is the optimal constant.
    min_value = min(
        math.comb(k, i) * Fraction(k - i, k + 1) ** (k - i) * Fraction(i + 1, k + 1) ** i
        for i in range(k // 2 + 1)
    )
    left = Fraction(k - k // 2, k + 1)
    if k % 2 == 0:
        locations = [left, 1 - left]
    else:
        locations = [left]  # = 1/2
    return DiagonalProfile(k, breakpoints, piece_index, min_value, locations)


def continuous_upper_bound_m1(k: int) -> Fraction:
    """Exact m=1 upper bound 2k * optimal_constant(k) for the continuous constant."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return 2 * k * optimal_constant(k)
