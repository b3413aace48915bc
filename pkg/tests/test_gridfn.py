import math
from fractions import Fraction

import pytest

from convmax.errors import DimensionMismatch, MemoryCapExceeded, ZeroMassInput
from convmax.gridfn import (
    GridFn,
    as_exact,
    convolve,
    convolve_many,
    format_gridfn,
    l1_norm,
    parse_gridfn,
    product_function,
    ratio,
    sup_norm,
)

from conftest import brute_convolve, random_exact_gridfn


def g1(*vals):
    m = len(vals) - 1
    return GridFn(1, m, vals)


class TestConstruction:
    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="nonnegative"):
            g1(1, -1)

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="expected"):
            GridFn(2, 1, (1, 2, 3))

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            GridFn(0, 1, (1, 2))

    def test_rejects_nan(self):
        with pytest.raises(ValueError, match="NaN"):
            g1(1.0, float("nan"))

    def test_memory_cap(self):
        with pytest.raises(MemoryCapExceeded):
            GridFn(30, 9, ())

    def test_indexing_row_major_first_coordinate_slowest(self):
        f = GridFn(2, 1, (10, 11, 12, 13))
        assert f[(0, 0)] == 10
        assert f[(0, 1)] == 11
        assert f[(1, 0)] == 12
        assert f[(1, 1)] == 13
        assert list(f.points()) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_exact_flag(self):
        assert g1(Fraction(1, 2), 1).is_exact
        assert not g1(0.5, 1).is_exact

    def test_no_precision_laundering(self):
        with pytest.raises(TypeError, match="float"):
            as_exact(0.5)
        assert as_exact("2/3") == Fraction(2, 3)


class TestConvolve:
    def test_delta_is_identity(self):
        g = g1(Fraction(1, 3), 2, 0)
        conv = convolve(GridFn.delta(1), g)
        assert conv.values == g.values
        h = GridFn(2, 1, (1, 2, 3, 4))
        assert convolve(GridFn.delta(2), h).values == h.values

    def test_square_of_21(self):
        assert convolve(g1(2, 1), g1(2, 1)).values == (4, 4, 1)

    def test_square_of_11(self):
        assert convolve(g1(1, 1), g1(1, 1)).values == (1, 2, 1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            convolve(g1(1, 1), GridFn(2, 1, (1, 1, 1, 1)))

    def test_exact_in_exact_out(self):
        out = convolve(g1(Fraction(1, 3), Fraction(2, 3)), g1(Fraction(1, 2), Fraction(1, 2)))
        assert out.is_exact
        assert out.values == (Fraction(1, 6), Fraction(1, 2), Fraction(1, 3))

    def test_matches_brute_force(self, rng):
        for _ in range(30):
            d = rng.randint(1, 3)
            f = random_exact_gridfn(rng, d, rng.randint(1, 2))
            g = random_exact_gridfn(rng, d, rng.randint(1, 2))
            conv = convolve(f, g)
            expected = brute_convolve(f, g)
            for p in conv.points():
                assert conv[p] == expected.get(p, 0)

    def test_commutative(self, rng):
        for _ in range(20):
            d = rng.randint(1, 2)
            f = random_exact_gridfn(rng, d)
            g = random_exact_gridfn(rng, d)
            assert convolve(f, g).values == convolve(g, f).values

    def test_l1_multiplicative(self, rng):
        for _ in range(20):
            f = random_exact_gridfn(rng, 2)
            g = random_exact_gridfn(rng, 2)
            assert l1_norm(convolve(f, g)) == l1_norm(f) * l1_norm(g)


class TestConvolveMany:
    def test_triple_11(self):
        assert convolve_many([g1(1, 1)] * 3).values == (1, 3, 3, 1)

    def test_single_factor(self):
        f = g1(5, 7)
        assert convolve_many([f]).values == f.values

    def test_pair_matches_convolve(self):
        assert convolve_many([g1(2, 1), g1(2, 1)]).values == (4, 4, 1)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            convolve_many([])

    def test_fold_order_independent(self, rng):
        for _ in range(10):
            fs = [random_exact_gridfn(rng, 2) for _ in range(4)]
            ref = convolve_many(fs).values
            order = list(range(4))
            rng.shuffle(order)
            assert convolve_many([fs[i] for i in order]).values == ref


class TestNorms:
    def test_simple(self):
        assert l1_norm(g1(2, 1)) == 3
        assert sup_norm(g1(2, 1)) == 2

    def test_conv_output(self):
        assert l1_norm(g1(4, 4, 1)) == 9
        assert sup_norm(g1(4, 4, 1)) == 4

    def test_all_zero(self):
        z = g1(0, 0)
        assert l1_norm(z) == 0
        assert sup_norm(z) == 0


class TestRatio:
    def test_21_squared(self):
        assert ratio([g1(2, 1), g1(2, 1)]) == Fraction(4, 9)

    def test_triple_11(self):
        assert ratio([g1(1, 1)] * 3) == Fraction(3, 8)

    def test_deltas(self):
        assert ratio([g1(1, 0), g1(0, 1)]) == 1

    def test_zero_mass_rejected(self):
        with pytest.raises(ZeroMassInput):
            ratio([g1(0, 0), g1(1, 1)])

    def test_scale_invariance_exact(self, rng):
        for _ in range(10):
            fs = [random_exact_gridfn(rng, 2) for _ in range(3)]
            before = ratio(fs)
            c = Fraction(rng.randint(1, 20), rng.randint(1, 20))
            scaled = GridFn(fs[0].d, fs[0].m, [c * v for v in fs[0].values])
            assert ratio([scaled] + fs[1:]) == before

    def test_trivial_average_bound(self, rng):
        # max >= average: ratio >= 1/(k+1)^d on {0,1}^d
        for _ in range(50):
            d = rng.randint(1, 3)
            k = rng.randint(2, 4)
            fs = [random_exact_gridfn(rng, d) for _ in range(k)]
            assert ratio(fs) >= Fraction(1, (k + 1) ** d)


class TestProductFunction:
    def test_two_axes(self):
        F = product_function([g1(2, 1), g1(2, 1)])
        assert F.d == 2
        assert F.values == (4, 2, 2, 1)

    def test_single_axis(self):
        assert product_function([g1(1, 1)]).values == (1, 1)

    def test_delta_product(self):
        F = product_function([g1(1, 0), g1(0, 1)])
        assert F[(0, 1)] == 1
        assert sum(F.values) == 1

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            product_function([])

    def test_mismatched_m_rejected(self):
        with pytest.raises(ValueError):
            product_function([g1(1, 1), GridFn(1, 2, (1, 1, 1))])

    def test_tensor_factorization(self, rng):
        # conv of products == product of per-axis convs, so the ratio splits
        for _ in range(10):
            d, k = 2, rng.randint(2, 3)
            axes = [[random_exact_gridfn(rng, 1) for _ in range(d)] for _ in range(k)]
            fs = [product_function(a) for a in axes]
            per_axis = [convolve_many([axes[i][t] for i in range(k)]) for t in range(d)]
            assert convolve_many(fs).values == product_function(per_axis).values
            assert ratio(fs) == math.prod(
                ratio([axes[i][t] for i in range(k)]) for t in range(d)
            )


class TestTextFormat:
    def test_roundtrip(self, rng):
        for _ in range(10):
            f = random_exact_gridfn(rng, rng.randint(1, 2), rng.randint(1, 3))
            assert parse_gridfn(format_gridfn(f)).values == f.values

    def test_comments_and_integers(self):
        text = "# a grid\n1 2\n1\n# middle\n2/3\n0\n"
        f = parse_gridfn(text)
        assert (f.d, f.m) == (1, 2)
        assert f.values == (1, Fraction(2, 3), 0)

    def test_float_grid_not_serializable(self):
        with pytest.raises(TypeError):
            format_gridfn(g1(0.5, 0.5))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            parse_gridfn("# nothing\n")
