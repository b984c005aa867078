import itertools
import math

import numpy as np
import pytest

from sphdesign.core import Configuration, Mode, normalize_trace, potential
from sphdesign.families import (
    MercedesAngles,
    equally_spaced_lines,
    equiisoclinic_planes_r4,
    kempner_24pt,
    kempner_24pt_raw,
    mercedes_benz,
    new_11pt_d5,
    reznick_11pt,
    stroud_coefficients,
    stroud_design,
    three_mubs_r4,
    twelve_point_design,
    z3_generator,
    z3_orbit,
)
from sphdesign.verify import is_design


class TestEquallySpacedLines:
    def test_t2_is_mercedes_benz_projectively(self):
        config = equally_spaced_lines(2)
        G = np.abs(config.entries.T @ config.entries)
        off = G[np.triu_indices(3, 1)]
        assert np.allclose(off, 0.5, atol=1e-15)
        assert abs(potential(config, 2).f) < 1e-13 * 9

    def test_t1_is_orthonormal_basis(self):
        config = equally_spaced_lines(1)
        assert np.allclose(config.entries.T @ config.entries, np.eye(2), atol=1e-15)

    def test_t5_gives_six_lines(self):
        config = equally_spaced_lines(5)
        assert config.n == 6
        assert abs(potential(config, 5).f) < 1e-13 * 36

    @pytest.mark.parametrize("t", range(1, 11))
    def test_design_at_advertised_strength(self, t):
        config = equally_spaced_lines(t)
        assert abs(potential(config, t).f) < 1e-13 * (t + 1) ** 2


class TestMercedesBenz:
    def test_theta_zero(self):
        M = mercedes_benz(0.0)
        assert np.allclose(M[:, 0], [1.0, 0.0], atol=1e-15)
        G = M.T @ M
        off = G[np.triu_indices(3, 1)]
        assert np.allclose(off, -0.5, atol=1e-15)

    def test_squared_angles_quarter(self):
        M = mercedes_benz(1.234)
        G = M.T @ M
        for j, k in itertools.combinations(range(3), 2):
            assert G[j, k] ** 2 == pytest.approx(0.25, abs=1e-14)

    def test_rotation_by_120_permutes_columns(self):
        A = mercedes_benz(0.7)
        B = mercedes_benz(0.7 + 2 * np.pi / 3)
        # same column set up to reordering
        found = [min(np.linalg.norm(B - np.roll(A, r, axis=1)) for r in range(3))]
        assert min(found) < 1e-13


class TestEquiisoclinicPlanes:
    def test_orthonormal_blocks(self):
        for basis in equiisoclinic_planes_r4():
            assert np.max(np.abs(basis.columns.T @ basis.columns - np.eye(2))) < 1e-15

    def test_common_isoclinic_angle_one_third(self):
        planes = equiisoclinic_planes_r4()
        P = [b.projection() for b in planes]
        for j, k in itertools.combinations(range(4), 2):
            R = P[j] @ P[k] @ P[j] - (1.0 / 3.0) * P[j]
            assert np.linalg.norm(R, 2) < 1e-13


class TestTwelvePointDesign:
    def test_double_power_sum_is_18(self, rng):
        for _ in range(5):
            config = twelve_point_design(rng.uniform(0, 2 * np.pi, 4))
            G = config.entries.T @ config.entries
            assert np.sum(G**4) == pytest.approx(18.0, abs=1e-10)
            assert abs(potential(config, 2).f) < 1e-12 * 144

    def test_off_diagonal_blocks_circulant_with_quartic_sum(self, rng):
        config = twelve_point_design(rng.uniform(0, 2 * np.pi, 4))
        G = config.entries.T @ config.entries
        for j, k in itertools.combinations(range(4), 2):
            B = G[3 * j : 3 * j + 3, 3 * k : 3 * k + 3]
            # circulant: entry depends only on (col - row) mod 3
            for r in range(3):
                for c in range(3):
                    assert B[r, c] == pytest.approx(B[0, (c - r) % 3], abs=1e-12)
            a, b, c = B[0]
            assert a**4 + b**4 + c**4 == pytest.approx(1.0 / 8.0, abs=1e-12)

    def test_each_vector_meets_two_at_half(self, rng):
        config = twelve_point_design(rng.uniform(0, 2 * np.pi, 4))
        G = np.abs(config.entries.T @ config.entries)
        np.fill_diagonal(G, 0.0)
        counts = np.sum(np.abs(G - 0.5) < 1e-9, axis=0)
        assert list(counts) == [2] * 12

    def test_angle_range_capped_at_isoclinic_angle(self):
        rng = np.random.default_rng(99)
        bound = 1.0 / math.sqrt(3.0) + 1e-12
        for _ in range(1000):
            config = twelve_point_design(rng.uniform(0, 2 * np.pi, 4))
            G = np.abs(config.entries.T @ config.entries)
            np.fill_diagonal(G, 0.0)
            assert G.max() <= bound

    def test_accepts_mercedes_angles_type(self):
        angles = MercedesAngles((0.0, 0.5, 1.0, 1.5))
        config = twelve_point_design(angles)
        assert config.n == 12

    def test_constructors_are_reproducible(self):
        a = twelve_point_design([0.1, 0.2, 0.3, 0.4]).entries
        b = twelve_point_design([0.1, 0.2, 0.3, 0.4]).entries
        assert np.array_equal(a, b)
        assert np.array_equal(reznick_11pt().entries, reznick_11pt().entries)
        assert np.array_equal(stroud_design(5).entries, stroud_design(5).entries)


class TestThreeMubs:
    def test_cross_basis_angle_half(self):
        config = three_mubs_r4()
        G = config.entries.T @ config.entries
        for basis_a in range(3):
            for basis_b in range(3):
                block = G[4 * basis_a : 4 * basis_a + 4, 4 * basis_b : 4 * basis_b + 4]
                if basis_a == basis_b:
                    assert np.allclose(block, np.eye(4), atol=1e-15)
                else:
                    assert np.allclose(np.abs(block), 0.5, atol=1e-15)

    def test_variational_sum(self):
        config = three_mubs_r4()
        G = config.entries.T @ config.entries
        assert np.sum(G**4) == pytest.approx(18.0, abs=1e-12)
        sq = (G**2)[~np.eye(12, dtype=bool)]
        assert sorted(np.round(sq, 12).tolist()).count(0.25) == 96
        assert sorted(np.round(sq, 12).tolist()).count(0.0) == 36


class TestReznick11pt:
    def test_sixth_power_identity_540(self, rng):
        config = reznick_11pt()
        V = config.entries
        for _ in range(100):
            x = rng.standard_normal(3)
            lhs = np.sum((x @ V) ** 6)
            assert lhs == pytest.approx(540.0 * np.linalg.norm(x) ** 6, rel=1e-12)

    def test_norm_power_sum_3780(self):
        config = reznick_11pt()
        assert np.sum(config.norms() ** 6) == pytest.approx(3780.0, rel=1e-13)

    def test_norm_multiplicities_1_2_8(self):
        norms = np.round(reznick_11pt().norms(), 10)
        _, counts = np.unique(norms, return_counts=True)
        assert sorted(counts.tolist()) == [1, 2, 8]

    def test_design_after_normalization(self):
        f = potential(normalize_trace(reznick_11pt()), 3).f
        assert abs(f) < 1e-12 * 121


class TestNew11ptD5:
    def test_sixth_power_identity_40500(self, rng):
        V = new_11pt_d5().entries
        for _ in range(50):
            x = rng.standard_normal(3)
            lhs = np.sum((x @ V) ** 6)
            assert lhs == pytest.approx(40500.0 * np.linalg.norm(x) ** 6, rel=1e-11)

    def test_side_condition(self):
        s105 = math.sqrt(105.0)
        a16, a26 = 12960.0 + 864.0 * s105, 12960.0 - 864.0 * s105
        b16, b26, b36 = 1425.0 - 139.0 * s105, 1425.0 + 139.0 * s105, 26250.0
        assert 5 * b16 + 5 * b26 + b36 == pytest.approx(25.0 / 16.0 * (a16 + a26), rel=1e-10)

    def test_norm_clusters_5_5_1(self):
        norms = np.round(new_11pt_d5().norms(), 10)
        _, counts = np.unique(norms, return_counts=True)
        assert sorted(counts.tolist()) == [1, 5, 5]

    def test_design_after_normalization(self):
        f = potential(normalize_trace(new_11pt_d5()), 3).f
        assert abs(f) < 1e-12 * 121


class TestStroudDesigns:
    @pytest.mark.parametrize("d,n", [(4, 11), (5, 16), (6, 22)])
    def test_sizes_and_designhood(self, d, n):
        for sign in (1, -1):
            config = stroud_design(d, sign)
            assert (config.d, config.n) == (d, n)
            ok, f = is_design(config, 2)
            assert ok, f

    @pytest.mark.parametrize("d", [4, 5, 6])
    def test_bessel_constant_3_a5_fourth(self, d, rng):
        for sign in (1, -1):
            *_, a5, C = stroud_coefficients(d, sign)
            assert C == 3.0 * a5**4
            V = stroud_design(d, sign).entries
            for _ in range(20):
                x = rng.standard_normal(d)
                lhs = np.sum((x @ V) ** 4)
                assert lhs == pytest.approx(C * np.linalg.norm(x) ** 4, rel=1e-10)

    def test_rejects_other_dimensions(self):
        with pytest.raises(ValueError):
            stroud_design(7)
        with pytest.raises(ValueError):
            stroud_design(4, sign=0)

    def test_classical_quartic_presentation_d4(self):
        # Independent cross-check: the explicit 4x11 matrix with entries
        # 6^(1/4), 3, -1 and 1 +- sqrt(2) is also an 11-point weighted
        # (2,2)-design (192 ||x||^4 identity).
        a, b = 1.0 + math.sqrt(2.0), 1.0 - math.sqrt(2.0)
        q = 6.0**0.25
        V = np.array(
            [
                [q, 3, -1, -1, -1, a, a, a, b, b, b],
                [q, -1, 3, -1, -1, a, b, b, a, a, b],
                [q, -1, -1, 3, -1, b, a, b, a, b, a],
                [q, -1, -1, -1, 3, b, b, a, b, a, a],
            ]
        )
        x = np.random.default_rng(17).standard_normal(4)
        assert np.sum((x @ V) ** 4) == pytest.approx(
            192.0 * np.linalg.norm(x) ** 4, rel=1e-12
        )
        ok, _ = is_design(Configuration(V, Mode.WEIGHTED), 2)
        assert ok


class TestKempner24pt:
    def test_raw_norms_all_two(self):
        norms = np.linalg.norm(kempner_24pt_raw(), axis=0)
        assert np.allclose(norms, 2.0, atol=1e-14)

    def test_sixth_power_identity_120(self, rng):
        V = kempner_24pt_raw()
        for _ in range(50):
            x = rng.standard_normal(4)
            assert np.sum((x @ V) ** 6) == pytest.approx(
                120.0 * np.linalg.norm(x) ** 6, rel=1e-10
            )

    def test_squared_angle_multiset(self):
        config = kempner_24pt()
        G = config.entries.T @ config.entries
        sq = np.round((G**2)[np.triu_indices(24, 1)], 12)
        values, counts = np.unique(sq, return_counts=True)
        assert dict(zip(values.tolist(), counts.tolist())) == {0.0: 108, 0.25: 96, 0.5: 72}

    def test_design_at_t3(self):
        f = potential(kempner_24pt(), 3).f
        assert abs(f) < 1e-12 * 576


class TestZ3Orbit:
    def seeds(self, rng, count=8):
        S = rng.standard_normal((3, count))
        return S / np.linalg.norm(S, axis=0)

    def test_diagonal_blocks_isogonal(self, rng):
        S = self.seeds(rng)
        config = z3_orbit(S)
        G = config.entries.T @ config.entries
        for j in range(8):
            B = G[3 * j : 3 * j + 3, 3 * j : 3 * j + 3]
            a = 1.5 * (S[0, j] ** 2 - 1.0 / 3.0)
            expected = np.full((3, 3), a)
            np.fill_diagonal(expected, 1.0)
            assert np.allclose(B, expected, atol=1e-12)

    def test_blocks_circulant(self, rng):
        config = z3_orbit(self.seeds(rng))
        G = config.entries.T @ config.entries
        for j, k in itertools.product(range(8), repeat=2):
            B = G[3 * j : 3 * j + 3, 3 * k : 3 * k + 3]
            for r in range(3):
                for c in range(3):
                    assert B[r, c] == pytest.approx(B[0, (c - r) % 3], abs=1e-13)

    def test_axis_seed_repeats_line(self):
        S = np.zeros((3, 8))
        S[0, :] = 1.0
        S[0, 4:] = -1.0
        config = z3_orbit(S)
        for j in range(8):
            block = config.entries[:, 3 * j : 3 * j + 3]
            assert np.allclose(block - block[:, :1], 0.0, atol=1e-15)

    def test_rejects_non_unit_seed(self):
        S = np.ones((3, 8))
        with pytest.raises(ValueError, match="unit"):
            z3_orbit(S)

    def test_generator_has_order_three(self):
        g = z3_generator()
        assert np.allclose(g @ g @ g, np.eye(3), atol=1e-15)
