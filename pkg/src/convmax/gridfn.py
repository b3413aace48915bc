"""Nonnegative functions on discrete cubes {0,...,m}^d with exact convolution.

Values are either exact (int / Fraction) or binary64 floats.  Exact -> float
conversion is allowed anywhere; float -> exact is refused so no precision is
laundered into "exact" results.  Storage is a dense row-major table with the
first coordinate slowest, so serialized tables are portable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimensionMismatch, MemoryCapExceeded, ZeroMassInput

Scalar = Union[int, Fraction, float]

#: Hard cap on dense table size (entries).
MEMORY_CAP_ENTRIES = 1 << 26


def is_exact(x: Scalar) -> bool:
    """True for exact rationals (int or Fraction), False for floats."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def as_exact(x) -> Fraction:
    """Exact rational from an int, Fraction or 'p/q' string.

    Floats are refused: converting binary64 noise into an "exact" rational
    would silently corrupt every downstream equality check.
    """
    if isinstance(x, float):
        raise TypeError(
            "refusing float -> exact conversion; pass an int, Fraction or 'p/q' string"
        )
    return Fraction(x)


def _check_value(v: Scalar) -> Scalar:
    if isinstance(v, bool) or not isinstance(v, (int, Fraction, float)):
        raise TypeError(f"grid values must be int, Fraction or float, got {type(v).__name__}")
    if isinstance(v, float) and math.isnan(v):
        raise ValueError("NaN is not a grid value")
    if v < 0:
        raise ValueError(f"grid values must be nonnegative, got {v}")
    return v


@dataclass(frozen=True)
class GridFn:
    """A nonnegative function on {0,...,m}^d, stored densely.

    ``values`` is row-major with the first coordinate slowest.  ``m`` may be 0
    (a single point, e.g. the delta at the origin).
    """

    d: int
    m: int
    values: tuple

    def __init__(self, d: int, m: int, values: Iterable[Scalar]):
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        if m < 0:
            raise ValueError(f"side degree must be >= 0, got {m}")
        size = (m + 1) ** d
        if size > MEMORY_CAP_ENTRIES:
            raise MemoryCapExceeded(f"(m+1)^d = {size} exceeds cap {MEMORY_CAP_ENTRIES}")
        vals = tuple(_check_value(v) for v in values)
        if len(vals) != size:
            raise ValueError(f"expected {size} values for d={d}, m={m}, got {len(vals)}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "values", vals)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self.values)

    def points(self):
        """Coordinate tuples in storage order (first coordinate slowest)."""
        return itertools.product(range(self.m + 1), repeat=self.d)

    def index(self, point: Sequence[int]) -> int:
        idx = 0
        for x in point:
            if not 0 <= x <= self.m:
                raise IndexError(f"coordinate {x} outside {{0,...,{self.m}}}")
            idx = idx * (self.m + 1) + x
        return idx

    def __getitem__(self, point) -> Scalar:
        if isinstance(point, int):
            point = (point,)
        return self.values[self.index(point)]

    def to_float(self) -> "GridFn":
        return GridFn(self.d, self.m, tuple(float(v) for v in self.values))

    @staticmethod
    def delta(d: int) -> "GridFn":
        """Indicator of the origin (all mass at 0, m = 0)."""
        return GridFn(d, 0, (1,))


def convolve(f: GridFn, g: GridFn) -> GridFn:
    """Convolution (f*g)(x) = sum_{y+z=x} f(y) g(z); exact in, exact out."""
    if f.d != g.d:
        raise DimensionMismatch(f"d mismatch: {f.d} != {g.d}")
    d = f.d
    m = f.m + g.m
    size = (m + 1) ** d
    if size > MEMORY_CAP_ENTRIES:
        raise MemoryCapExceeded(f"(m+1)^d = {size} exceeds cap {MEMORY_CAP_ENTRIES}")
    base = m + 1
    out = [0] * size
    gpts = list(zip(g.points(), g.values))
    for pf, vf in zip(f.points(), f.values):
        if vf == 0:
            continue
        for pg, vg in gpts:
            if vg == 0:
                continue
            idx = 0
            for a, b in zip(pf, pg):
                idx = idx * base + (a + b)
            out[idx] += vf * vg
    return GridFn(d, m, out)


def convolve_many(fs: Sequence[GridFn]) -> GridFn:
    """Left fold of ``convolve``; result is independent of fold order."""
    if not fs:
        raise ValueError("convolve_many needs at least one factor")
    acc = fs[0]
    for f in fs[1:]:
        acc = convolve(acc, f)
    return acc


def l1_norm(f: GridFn) -> Scalar:
    return sum(f.values)


def sup_norm(f: GridFn) -> Scalar:
    return max(f.values)


def ratio(fs: Sequence[GridFn]) -> Scalar:
    """sup |f_1*...*f_k| / prod ||f_i||_1; scale-invariant in every factor."""
    masses = [l1_norm(f) for f in fs]
    for i, mass in enumerate(masses):
        if mass == 0:
            raise ZeroMassInput(f"factor {i} has zero total mass")
    top = sup_norm(convolve_many(fs))
    denom = math.prod(masses)
    if is_exact(top) and all(is_exact(mass) for mass in masses):
        return Fraction(top, denom)
    return top / denom


def product_function(axes: Sequence[GridFn]) -> GridFn:
    """Tensor product F(x_1,...,x_d) = prod_t h_t(x_t) of 1-d factors."""
    if not axes:
        raise ValueError("product_function needs at least one axis")
    m = axes[0].m
    for t, h in enumerate(axes):
        if h.d != 1:
            raise DimensionMismatch(f"axis {t} has d={h.d}, expected 1")
        if h.m != m:
            raise ValueError(f"axis {t} has m={h.m}, expected {m}")
    d = len(axes)
    vals = []
    for point in itertools.product(range(m + 1), repeat=d):
        vals.append(math.prod(h.values[x] for h, x in zip(axes, point)))
    return GridFn(d, m, vals)


# ---------------------------------------------------------------------------
# Text format: header line "d m", then (m+1)^d lines of rational literals in
# row-major order; '#' begins a comment line.
# ---------------------------------------------------------------------------

def format_gridfn(f: GridFn) -> str:
    if not f.is_exact:
        raise TypeError("the text format stores exact rationals only")
    lines = [f"{f.d} {f.m}"]
    lines.extend(str(Fraction(v)) for v in f.values)
    return "\n".join(lines) + "\n"


def parse_gridfn(text: str) -> GridFn:
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line)
    if not rows:
        raise ValueError("empty grid file")
    head = rows[0].split()
    if len(head) != 2:
        raise ValueError(f"bad header {rows[0]!r}, expected 'd m'")
    d, m = int(head[0]), int(head[1])
    vals = [Fraction(tok) for tok in rows[1:]]
    return GridFn(d, m, vals)
