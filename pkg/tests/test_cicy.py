"""Tests for intersection forms of complete intersections in P^{n_1} x ... x P^{n_m}."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kcurv.cicy import CicyConfig, intersection_form, validate
from kcurv.errors import DimensionMismatch, NonpositiveDimension
from kcurv.fixtures import cicy1_config, cicy1_form, cicy2_config, cicy2_form
from kcurv.symform import Form


class TestValidate:
    def test_cicy1_is_a_threefold_cy(self):
        info = validate(cicy1_config())
        assert info["dim"] == 3
        assert info["cy"] is True
        assert info["row_sums"] == [4, 3, 3]

    def test_cicy2_is_a_threefold_cy(self):
        info = validate(cicy2_config())
        assert info["dim"] == 3
        assert info["cy"] is True
        assert info["row_sums"] == [3, 3, 2]

    def test_quintic_is_cy(self):
        info = validate(CicyConfig(ambient=(4,), columns=((5,),)))
        assert info == {"dim": 3, "cy": True, "row_sums": [5]}

    def test_non_cy_flagged(self):
        info = validate(CicyConfig(ambient=(4,), columns=((4,),)))
        assert info["cy"] is False

    def test_nonpositive_dimension(self):
        cfg = CicyConfig(ambient=(1, 1), columns=((1, 1), (1, 1)))
        with pytest.raises(NonpositiveDimension):
            validate(cfg)

    def test_column_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            CicyConfig(ambient=(2, 2), columns=((1, 1, 1),))

    def test_bad_entries(self):
        with pytest.raises(ValueError):
            CicyConfig(ambient=(2, 0), columns=((1, 1),))
        with pytest.raises(ValueError):
            CicyConfig(ambient=(2, 2), columns=((1, -1),))
        with pytest.raises(ValueError):
            CicyConfig(ambient=(2, 2), columns=((0, 0),))


class TestKnownForms:
    def test_cicy1_exact_terms(self):
        F = cicy1_form()
        assert F.degree == 3 and F.dim == 3
        assert dict(F.terms) == {
            (3, 0, 0): 2,
            (2, 1, 0): 12,
            (2, 0, 1): 24,
            (1, 2, 0): 6,
            (1, 1, 1): 60,
            (0, 2, 1): 12,
        }

    def test_cicy2_exact_terms(self):
        # 12 x^2 y + 6 x y^2 + 6 x^2 z + 6 y^2 z + 30 x y z
        F = cicy2_form()
        assert dict(F.terms) == {
            (2, 1, 0): 12,
            (1, 2, 0): 6,
            (2, 0, 1): 6,
            (0, 2, 1): 6,
            (1, 1, 1): 30,
        }

    def test_quintic_form(self):
        # One ambient factor: the form collapses to deg(X) * x^dim.
        F = intersection_form(CicyConfig(ambient=(4,), columns=((5,),)))
        assert F == Form(3, 1, {(3,): 5})

    def test_bicubic(self):
        # P^2 x P^2 cut by one (3, 3) hypersurface: classic bicubic threefold
        # with form 9 x^2 y + 9 x y^2 (triple products of the two classes,
        # J_i^3 = 0 kills the pure cubes).
        F = intersection_form(CicyConfig(ambient=(2, 2), columns=((3, 3),)))
        assert dict(F.terms) == {(2, 1): 9, (1, 2): 9}

    def test_product_of_lines(self):
        # P^1 x P^1 x P^1 x P^1 cut by one (1,1,1,1) divisor: every square
        # vanishes, leaving 6 x_i x_j x_k sums weighted by the column.
        F = intersection_form(
            CicyConfig(ambient=(1, 1, 1, 1), columns=((1, 1, 1, 1),))
        )
        assert F.degree == 3 and F.dim == 4
        for exps, c in F.terms.items():
            assert max(exps) <= 1
            assert c == 6


def small_configs():
    """Random small configurations with dim >= 1 guaranteed by construction."""

    @st.composite
    def build(draw):
        m = draw(st.integers(1, 3))
        ambient = tuple(draw(st.integers(1, 3)) for _ in range(m))
        if sum(ambient) < 2:
            ambient = (2,) + ambient[1:]
        k = draw(st.integers(1, min(2, sum(ambient) - 1)))
        cols = []
        for _ in range(k):
            col = tuple(draw(st.integers(0, 2)) for _ in range(m))
            if not any(col):
                col = (1,) + col[1:]
            cols.append(col)
        return CicyConfig(ambient=ambient, columns=tuple(cols))

    return build()


class TestStructuralProperties:
    @given(cfg=small_configs())
    @settings(max_examples=40, deadline=None)
    def test_coefficients_nonnegative_integers(self, cfg):
        F = intersection_form(cfg)
        for c in F.terms.values():
            assert c.denominator == 1
            assert c >= 0

    @given(cfg=small_configs())
    @settings(max_examples=40, deadline=None)
    def test_exponent_caps(self, cfg):
        # x_i can never appear to a power above the ambient dimension n_i:
        # J_i^{n_i + 1} = 0 in the cohomology of P^{n_i}.
        F = intersection_form(cfg)
        for exps in F.terms:
            for e, n in zip(exps, cfg.ambient):
                assert e <= n

    def test_factor_permutation_equivariance(self):
        # Permuting ambient factors (and columns rows alike) permutes the
        # variables of the form.
        cfg = cicy2_config()
        perm = (2, 0, 1)  # new position i takes old factor perm[i]
        cfg_p = CicyConfig(
            ambient=tuple(cfg.ambient[p] for p in perm),
            columns=tuple(tuple(col[p] for p in perm) for col in cfg.columns),
        )
        F = intersection_form(cfg)
        F_p = intersection_form(cfg_p)
        expected = {
            tuple(exps[p] for p in perm): c for exps, c in F.terms.items()
        }
        assert dict(F_p.terms) == expected

    def test_duplicate_column_symmetry(self):
        # cicy1 has two identical (1,1,0) columns; swapping them is a no-op,
        # and the builder must not double-count.
        cfg = cicy1_config()
        cols = list(cfg.columns)
        cols[0], cols[1] = cols[1], cols[0]
        assert intersection_form(CicyConfig(cfg.ambient, tuple(cols))) == cicy1_form()

    def test_coefficients_are_fractions_internally(self):
        F = cicy1_form()
        assert all(isinstance(c, Fraction) for c in F.terms.values())
