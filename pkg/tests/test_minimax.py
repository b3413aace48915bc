from fractions import Fraction

import pytest

from convmax.constants import optimal_constant
from convmax.errors import BudgetExceeded
from convmax.minimax import (
    SolverConfig,
    diagonal_constant,
    general_constant,
    grid_oracle,
    intersection_restricted_solve,
)

FAST = SolverConfig(multistarts=8, subgradient_iters=150)


class TestConfig:
    def test_json_roundtrip(self):
        cfg = SolverConfig(multistarts=5, seed=7)
        assert SolverConfig.from_json(cfg.to_json()) == cfg

    def test_defaults(self):
        cfg = SolverConfig()
        assert cfg.seed == 0 and cfg.threads == 1


class TestDiagonalM1:
    @pytest.mark.parametrize("k", range(2, 9))
    def test_exact_closed_form(self, k):
        res = diagonal_constant(k, 1)
        assert res.value_exact == optimal_constant(k)
        assert res.method == "diagonal-envelope-exact"
        assert res.converged

    def test_k2_argument(self):
        res = diagonal_constant(2, 1)
        # optimum at p = 1/3 (or the mirror); modes 0 and 1 tied
        assert sorted(res.argument[0]) == pytest.approx([1 / 3, 2 / 3])
        assert len(res.shared_modes) >= 2

    @pytest.mark.parametrize("k", range(2, 9))
    def test_certificate_has_tied_pair(self, k):
        res = diagonal_constant(k, 1)
        assert len(res.shared_modes) >= 2


class TestGeneralM1:
    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_matches_closed_form(self, k):
        res = general_constant(k, 1, FAST)
        assert res.value == pytest.approx(float(optimal_constant(k)), abs=1e-9)
        assert res.converged
        assert len(res.shared_modes) >= 2

    def test_weights_are_distributions(self):
        res = general_constant(3, 1, FAST)
        for w in res.argument:
            assert sum(w) == pytest.approx(1.0, abs=1e-12)
            assert all(x >= 0 for x in w)

    def test_determinism(self):
        a = general_constant(2, 1, FAST).to_dict()
        b = general_constant(2, 1, FAST).to_dict()
        assert a == b

    def test_bad_args(self):
        with pytest.raises(ValueError):
            general_constant(1, 1)
        with pytest.raises(ValueError):
            general_constant(2, 0)


class TestDiagonalM2Plus:
    def test_k2_m2_value(self):
        res = diagonal_constant(2, 2, FAST)
        assert res.converged
        # strictly better than the zero-padded m = 1 optimum, and 6x the value
        # stays above the known continuous lower bound
        assert res.value < float(optimal_constant(2)) - 1e-3
        assert 6 * res.value >= 1.28

    def test_general_not_above_diagonal(self):
        # general mode optimizes over a superset of the diagonal feasible set
        diag = diagonal_constant(2, 2, FAST)
        gen = general_constant(2, 2, FAST)
        assert gen.value <= diag.value + 1e-7

    def test_matches_grid_oracle_upper(self):
        res = diagonal_constant(2, 2, FAST)
        oracle = grid_oracle(2, 2, 12, diagonal=True)
        # the solver is unrestricted, so it must do at least as well as the grid
        assert res.value <= float(oracle.grid_min) + 1e-9

    def test_determinism(self):
        a = diagonal_constant(2, 3, FAST).to_dict()
        b = diagonal_constant(2, 3, FAST).to_dict()
        assert a == b

    def test_extra_seed_accepted(self):
        res = diagonal_constant(2, 2, FAST, extra_seeds=[[0.4, 0.3, 0.3]])
        assert res.converged


class TestGridOracle:
    def test_k2_m1_n3_hits_optimum(self):
        res = grid_oracle(2, 1, 3)
        assert res.grid_min == Fraction(4, 9)
        assert res.upper_bound == res.grid_min

    def test_k3_m1_n2(self):
        assert grid_oracle(3, 1, 2).grid_min == Fraction(3, 8)

    def test_k4_m1_n5(self):
        assert grid_oracle(4, 1, 5).grid_min == Fraction(216, 625)

    def test_k5_m1_n2(self):
        assert grid_oracle(5, 1, 2).grid_min == Fraction(5, 16)

    def test_diagonal_restriction_not_below_general(self):
        g = grid_oracle(2, 2, 4)
        d = grid_oracle(2, 2, 4, diagonal=True)
        assert g.grid_min <= d.grid_min

    def test_point_counts(self):
        res = grid_oracle(2, 1, 3)
        assert res.points_evaluated == 4**2
        assert grid_oracle(2, 1, 3, diagonal=True).points_evaluated == 4

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            grid_oracle(4, 3, 40, budget=1000)

    def test_refining_grid_decreases(self):
        vals = [grid_oracle(2, 2, n, diagonal=True).grid_min for n in (2, 4, 8)]
        assert vals[0] >= vals[1] >= vals[2]


class TestIntersectionRestricted:
    @pytest.mark.parametrize("k", range(2, 9))
    def test_matches_closed_form(self, k):
        res = intersection_restricted_solve(k)
        assert res.value_exact == optimal_constant(k)
        assert len(res.shared_modes) >= 2

    def test_k2_argument(self):
        res = intersection_restricted_solve(2)
        assert sorted(res.argument[0]) == pytest.approx([1 / 3, 2 / 3])


class TestResultSerialization:
    def test_to_dict_fields(self):
        d = diagonal_constant(2, 1).to_dict()
        for key in ("k", "m", "value", "value_exact", "argument",
                    "shared_modes", "method", "seed", "converged"):
            assert key in d
        assert d["value_exact"] == "4/9"
