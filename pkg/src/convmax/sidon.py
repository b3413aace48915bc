"""Representation counts of k-fold sums over subsets of {0,1}^d.

A subset A is stored as a set of d-bit masks; its indicator is a GridFn on
{0,1}^d, and the ordered representation counts of kA are exactly the entries
of the k-fold convolution of that indicator.

The claimed bound is max representation count >= C_{k,d} |A|^k with C_{k,d}
the tensor power of the exact one-dimensional constant.  That bound is proven
for d = 1 (any k) and holds for odd k in every dimension, but for even k it
fails in dimension >= 3: five-point Sidon sets in {0,1}^3 have max count 2
below the k=2 value (4/9)^3 * 25.  verify_bound therefore reports pass/fail
faithfully instead of asserting; exhaustive sweeps surface the genuine
counterexamples.

Size caps for g-Sidon sets use only bounds that are actually valid: the
explicit g 2^{kd} / binom(k, k//2)^d form for odd k, g / C_{k,1} at d = 1,
and the average-bound cap (g (k+1)^d)^(1/k) for even k with d >= 2.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .constants import optimal_constant_d
from .gridfn import GridFn, convolve_many

Point = Tuple[int, ...]

#: Largest dimension swept exhaustively (2^(2^d) subsets).
EXHAUSTIVE_D_MAX = 4


def _mask_to_point(mask: int, d: int) -> Point:
    # most-significant bit is the first coordinate
    return tuple((mask >> (d - 1 - t)) & 1 for t in range(d))


def _point_to_mask(point: Sequence[int], d: int) -> int:
    mask = 0
    for x in point:
        if x not in (0, 1):
            raise ValueError(f"coordinate {x} outside {{0,1}}")
        mask = (mask << 1) | x
    return mask


@dataclass(frozen=True)
class CubeSet:
    """A subset of {0,1}^d encoded as d-bit masks."""

    d: int
    members: frozenset

    def __init__(self, d: int, members: Iterable[int]):
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        ms = frozenset(members)
        for mask in ms:
            if not 0 <= mask < 2**d:
                raise ValueError(f"mask {mask} outside {{0,...,{2 ** d - 1}}}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "members", ms)

    def __len__(self) -> int:
        return len(self.members)

    @classmethod
    def from_points(cls, d: int, points: Iterable[Sequence[int]]) -> "CubeSet":
        return cls(d, (_point_to_mask(p, d) for p in points))

    def points(self) -> List[Point]:
        return sorted(_mask_to_point(mask, self.d) for mask in self.members)

    def indicator(self) -> GridFn:
        vals = [0] * (2**self.d)
        for mask in self.members:
            vals[mask] = 1  # flat row-major index on {0,1}^d equals the mask
        return GridFn(self.d, 1, vals)

    def serialize(self) -> str:
        """One point per line, d characters of '0'/'1', first coordinate first."""
        lines = ["".join(str(x) for x in p) for p in self.points()]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str, d: Optional[int] = None) -> "CubeSet":
        points = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if any(c not in "01" for c in line):
                raise ValueError(f"bad point line {line!r}")
            points.append(tuple(int(c) for c in line))
        if not points:
            raise ValueError("empty set file")
        dd = d if d is not None else len(points[0])
        if any(len(p) != dd for p in points):
            raise ValueError("inconsistent point dimensions")
        return cls.from_points(dd, points)


@dataclass(frozen=True)
class SidonReport:
    set: CubeSet
    k: int
    max_count: int
    argmax_points: List[Point]
    bound: Fraction            # C_{k,d} |A|^k
    g_class: int               # smallest g with A a g-Sidon set of order k
    slack: Fraction            # max_count - bound
    passed: bool

    def to_dict(self) -> dict:
        return {
            "d": self.set.d,
            "set": ["".join(map(str, p)) for p in self.set.points()],
            "k": self.k,
            "max_count": self.max_count,
            "argmax_points": [list(p) for p in self.argmax_points],
            "bound": str(self.bound),
            "bound_decimal": float(self.bound),
            "g_class": self.g_class,
            "slack": str(self.slack),
            "passed": self.passed,
        }


def representation_counts(A: CubeSet, k: int) -> Dict[Point, int]:
    """Ordered k-tuple representation counts of each point of kA."""
    if len(A) == 0:
        raise ValueError("representation counts need a nonempty set")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    conv = convolve_many([A.indicator()] * k)
    counts = {}
    for point, v in zip(conv.points(), conv.values):
        if v:
            counts[point] = v
    return counts


def verify_bound(A: CubeSet, k: int) -> SidonReport:
    """Check max representation count against the exact tensor-power bound.

    ``passed`` is genuinely informative: for even k and d >= 3 some subsets
    fail, which is a property of the bound rather than a bug.
    """
    counts = representation_counts(A, k)
    max_count = max(counts.values())
    argmax = sorted(p for p, c in counts.items() if c == max_count)
    bound = optimal_constant_d(k, A.d) * len(A) ** k
    slack = max_count - bound
    return SidonReport(A, k, max_count, argmax, bound, max_count, slack, max_count >= bound)


@dataclass(frozen=True)
class SampleConfig:
    samples: int = 1000
    seed: int = 0


@dataclass(frozen=True)
class EnumerationSummary:
    d: int
    k: int
    subsets_checked: int
    failures: int
    min_slack: Fraction
    min_slack_sets: List[List[str]]   # serialized point lists, capped
    equality_sets: List[List[str]]
    exhaustive: bool

    def to_dict(self) -> dict:
        return {
            "d": self.d, "k": self.k,
            "subsets_checked": self.subsets_checked,
            "failures": self.failures,
            "min_slack": str(self.min_slack),
            "min_slack_sets": self.min_slack_sets,
            "equality_sets": self.equality_sets,
            "exhaustive": self.exhaustive,
        }


def _set_points_str(A: CubeSet) -> List[str]:
    return ["".join(map(str, p)) for p in A.points()]


def enumerate_verify(d: int, k: int, sample_cfg: Optional[SampleConfig] = None,
                     keep: int = 8) -> EnumerationSummary:
    """Verify the corollary bound over all nonempty subsets of {0,1}^d.

    Exhaustive for d <= 4; for larger d a seeded sample of subsets is drawn
    (each point included independently with probability 1/2), which is a
    heuristic sweep only.
    """
    n_points = 2**d
    exhaustive = d <= EXHAUSTIVE_D_MAX
    if exhaustive:
        masks = range(1, 2**n_points)
    else:
        if sample_cfg is None:
            raise ValueError(f"d={d} needs a SampleConfig (exhaustive cap is d={EXHAUSTIVE_D_MAX})")
        rng = random.Random(sample_cfg.seed)
        masks = []
        while len(masks) < sample_cfg.samples:
            s = rng.getrandbits(n_points)
            if s:
                masks.append(s)

    failures = 0
    min_slack = None
    min_sets: List[List[str]] = []
    eq_sets: List[List[str]] = []
    checked = 0
    for subset_mask in masks:
        members = [p for p in range(n_points) if (subset_mask >> p) & 1]
        A = CubeSet(d, members)
        rep = verify_bound(A, k)
        checked += 1
        if not rep.passed:
            failures += 1
        if rep.slack == 0 and len(eq_sets) < keep:
            eq_sets.append(_set_points_str(A))
        if min_slack is None or rep.slack < min_slack:
            min_slack = rep.slack
            min_sets = [_set_points_str(A)]
        elif rep.slack == min_slack and len(min_sets) < keep:
            min_sets.append(_set_points_str(A))
    return EnumerationSummary(d, k, checked, failures, min_slack, min_sets, eq_sets, exhaustive)


@dataclass(frozen=True)
class SearchResult:
    d: int
    k: int
    g: int
    best_set: CubeSet
    best_size: int
    size_cap: int
    cap_form: str    # 'paper-odd-k' or 'general'
    exhaustive: bool

    def to_dict(self) -> dict:
        return {
            "d": self.d, "k": self.k, "g": self.g,
            "best_set": _set_points_str(self.best_set),
            "best_size": self.best_size,
            "size_cap": self.size_cap,
            "cap_form": self.cap_form,
            "exhaustive": self.exhaustive,
        }


def _int_kth_root(n: int, k: int) -> int:
    """Largest s with s^k <= n."""
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0
    s = int(round(n ** (1.0 / k)))
    while s**k > n:
        s -= 1
    while (s + 1) ** k <= n:
        s += 1
    return s


def g_sidon_size_cap(d: int, k: int, g: int) -> Tuple[int, str]:
    """Largest possible |A| for a g-Sidon set of order k on {0,1}^d.

    Uses |A|^k <= g / C_{k,d} where that is a theorem (odd k in any d, the
    explicit g 2^{kd} / binom(k, k//2)^d form; even k at d = 1).  For even k
    with d >= 2 the tensor-power bound fails, so the cap falls back to the
    always-valid average bound |A|^k <= g (k+1)^d.
    """
    if k % 2 == 1:
        bound = Fraction(g) / optimal_constant_d(k, d)
        form = "paper-odd-k"
    elif d == 1:
        bound = Fraction(g) / optimal_constant_d(k, d)
        form = "general"
    else:
        bound = Fraction(g * (k + 1) ** d)
        form = "trivial-average"
    cap = _int_kth_root(math.floor(bound), k)
    return cap, form


def max_size_g_sidon(d: int, k: int, g: int,
                     search_cfg: Optional[SampleConfig] = None) -> SearchResult:
    """Largest g-Sidon set of order k found (exhaustive for d <= 4)."""
    if g < 1:
        raise ValueError(f"g must be >= 1, got {g}")
    cap, cap_form = g_sidon_size_cap(d, k, g)
    n_points = 2**d
    exhaustive = d <= EXHAUSTIVE_D_MAX
    best = None
    if exhaustive:
        for size in range(min(n_points, cap), 0, -1):
            for members in itertools.combinations(range(n_points), size):
                A = CubeSet(d, members)
                counts = representation_counts(A, k)
                if max(counts.values()) <= g:
                    best = A
                    break
            if best is not None:
                break
    else:
        if search_cfg is None:
            raise ValueError(f"d={d} needs a SampleConfig for stochastic search")
        rng = random.Random(search_cfg.seed)
        best = CubeSet(d, [0])
        for _ in range(search_cfg.samples):
            s = rng.getrandbits(n_points)
            if not s:
                continue
            members = [p for p in range(n_points) if (s >> p) & 1]
            A = CubeSet(d, members)
            if len(A) <= len(best):
                continue
            if max(representation_counts(A, k).values()) <= g:
                best = A
    if best is None:
        best = CubeSet(d, [0])  # singletons always qualify (count 1 <= g)
    if len(best) > cap:  # pragma: no cover - would contradict the bound
        raise AssertionError(f"found set of size {len(best)} above cap {cap}")
    return SearchResult(d, k, g, best, len(best), cap, cap_form, exhaustive)
