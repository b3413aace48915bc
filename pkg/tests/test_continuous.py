import csv
import io
import json
from fractions import Fraction

import pytest

from convmax.continuous import (
    KNOWN_LOWER_K2,
    step_function_export,
    upper_bound_sequence,
)
from convmax.minimax import SolverConfig

FAST = SolverConfig(multistarts=8, subgradient_iters=150)


class TestUpperBoundSequence:
    def test_k2_m1_exact(self):
        table = upper_bound_sequence(2, 1)
        assert table.rows[0].upper_bound == Fraction(16, 9)
        assert table.rows[0].cbar == Fraction(4, 9)
        assert table.rows[0].method == "closed-form"
        assert table.known_lower == KNOWN_LOWER_K2

    def test_k3_m1(self):
        table = upper_bound_sequence(3, 1)
        assert table.rows[0].upper_bound == Fraction(9, 4)
        assert table.known_lower is None

    def test_k2_bounds_valid_and_improving(self):
        table = upper_bound_sequence(2, 4, FAST)
        bounds = [float(r.upper_bound) for r in table.rows]
        assert all(KNOWN_LOWER_K2 <= b <= 16 / 9 + 1e-9 for b in bounds)
        # finer grids refine: each level can embed the previous one
        assert all(a >= b - 1e-9 for a, b in zip(bounds, bounds[1:]))
        assert table.best_bound == pytest.approx(min(bounds))

    def test_rows_labelled_by_m(self):
        table = upper_bound_sequence(2, 3, FAST)
        assert [r.m for r in table.rows] == [1, 2, 3]

    def test_bad_args(self):
        with pytest.raises(ValueError):
            upper_bound_sequence(1, 2)
        with pytest.raises(ValueError):
            upper_bound_sequence(2, 0)


class TestSerialization:
    def test_json(self):
        table = upper_bound_sequence(2, 2, FAST)
        data = json.loads(table.to_json())
        assert data["k"] == 2
        assert data["rows"][0]["upper_bound"] == "16/9"
        assert data["rows"][1]["converged"] is True

    def test_csv(self):
        table = upper_bound_sequence(2, 2, FAST)
        rows = list(csv.reader(io.StringIO(table.to_csv())))
        assert rows[0] == ["m", "cbar", "bound", "converged"]
        assert len(rows) == 3
        assert float(rows[1][2]) == pytest.approx(16 / 9)


class TestStepFunction:
    def test_m1_k2_geometry(self):
        sf = step_function_export([Fraction(2, 3), Fraction(1, 3)], 2)
        assert sf.breakpoints == [Fraction(-1, 4), 0, Fraction(1, 4)]
        assert sf.heights == [Fraction(2, 3), Fraction(1, 3)]

    def test_cells_tile_support(self):
        for k in (2, 3):
            for m in (1, 2, 5):
                sf = step_function_export([1.0] * (m + 1), k)
                assert sf.breakpoints[0] == Fraction(-1, 2 * k)
                assert sf.breakpoints[-1] == Fraction(1, 2 * k)
                widths = {b - a for a, b in zip(sf.breakpoints, sf.breakpoints[1:])}
                assert widths == {Fraction(1, k * (m + 1))}

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            step_function_export([0.5, -0.1], 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            step_function_export([], 2)

    def test_to_dict(self):
        d = step_function_export([0.5, 0.5], 2).to_dict()
        assert d["k"] == 2
        assert d["breakpoints"] == [-0.25, 0.0, 0.25]
