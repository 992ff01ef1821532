"""Tests for decodability classification and R-matrix structure.

Oracle values: the Alamouti delta matrix follows by hand from the
anticommutators of its four unitary weights; the family, grouping, and
complexity order of each shipped code were derived from the conjugation
pattern of the underlying construction and cross-checked numerically
before being frozen here.
"""

import numpy as np
import pytest

from stlattice import codebook
from stlattice.decodability import (
    DecodabilityProfile,
    bounds_check,
    classify,
    draw_channel,
    hurwitz_radon,
    r_matrix,
    sample_r_matrix,
)
from stlattice.lattice import WeightBasis

I2 = np.eye(2, dtype=complex)

_CACHE = {}


def zoo(name):
    """Build and classify a shipped family once per test session."""
    if name not in _CACHE:
        basis = codebook.build(name)
        _CACHE[name] = (basis, classify(basis))
    return _CACHE[name]


# family, k_prime, groups, conditioned, reduction_pct, fast_decodable, bo_params
FROZEN = {
    "alamouti": (
        "multi_group", 1, ((0,), (1,), (2,), (3,)), (), 75.0, True, None,
    ),
    "golden": (
        "block_orthogonal", 6, ((4, 6), (5, 7), (0, 2), (1, 3)), (),
        25.0, False, (2, 2, 2),
    ),
    "silver": (
        "conditional_multi_group", 5, ((4,), (5,), (6,), (7,)), (0, 1, 2, 3),
        37.5, True, None,
    ),
    "srinath_rajan": (
        "conditional_multi_group", 10,
        ((8, 10), (9, 11), (12, 14), (13, 15)), (0, 1, 2, 3, 4, 5, 6, 7),
        37.5, True, None,
    ),
    "mido_a4": (
        "block_orthogonal", 12,
        ((4, 5, 6, 7), (12, 13, 14, 15), (0, 1, 2, 3), (8, 9, 10, 11)), (),
        25.0, True, (2, 2, 4),
    ),
    "simo_relay": (
        "conditional_multi_group", 10,
        ((2, 3), (6, 7), (10, 11), (14, 15)), (0, 1, 4, 5, 8, 9, 12, 13),
        37.5, True, None,
    ),
    "mimo_relay": (
        "multi_group", 6,
        ((0, 1, 2, 18, 19, 20), (3, 4, 5, 21, 22, 23),
         (6, 7, 8, 12, 13, 14), (9, 10, 11, 15, 16, 17)), (),
        75.0, True, None,
    ),
    "iterated": (
        "multi_group", 16,
        ((0, 1, 4, 5, 8, 9, 12, 13, 16, 17, 20, 21, 24, 25, 28, 29),
         (2, 3, 6, 7, 10, 11, 14, 15, 18, 19, 22, 23, 26, 27, 30, 31)), (),
        50.0, True, None,
    ),
}


class TestHurwitzRadon:
    def test_alamouti_mutually_orthogonal(self):
        basis, _ = zoo("alamouti")
        hr = hurwitz_radon(basis)
        # unitary 2x2 weights: delta_ii = ||2 B B^H||_F^2 = ||2 I||_F^2 = 8
        assert np.allclose(np.diag(hr.delta), 8.0, atol=1e-12)
        off = hr.delta - np.diag(np.diag(hr.delta))
        assert np.max(np.abs(off)) == 0.0
        assert not hr.adjacency.any()

    def test_scaled_identity_pair_orthogonal(self):
        hr = hurwitz_radon(WeightBasis("pair", [I2, 1j * I2]))
        assert hr.delta[0, 1] == 0.0
        assert not hr.adjacency[0, 1]

    def test_golden_graph_has_edges(self):
        basis, _ = zoo("golden")
        hr = hurwitz_radon(basis)
        assert hr.adjacency.any()
        assert np.array_equal(hr.adjacency, hr.adjacency.T)
        assert not hr.adjacency.diagonal().any()

    def test_delta_symmetric_nonnegative(self):
        basis, _ = zoo("silver")
        hr = hurwitz_radon(basis)
        assert np.array_equal(hr.delta, hr.delta.T)
        assert (hr.delta >= 0).all()

    def test_arrays_are_frozen(self):
        basis, _ = zoo("alamouti")
        hr = hurwitz_radon(basis)
        with pytest.raises(ValueError):
            hr.delta[0, 0] = 5.0


class TestClassifyZoo:
    @pytest.mark.parametrize("name", sorted(FROZEN))
    def test_frozen_profile(self, name):
        basis, prof = zoo(name)
        family, k_prime, groups, conditioned, reduction, fast, bo = FROZEN[name]
        assert prof.family == family
        assert prof.k_prime == k_prime
        assert prof.groups == groups
        assert prof.conditioned == conditioned
        assert prof.reduction_pct == pytest.approx(reduction, abs=1e-9)
        assert prof.fast_decodable is fast
        assert prof.bo_params == bo

    @pytest.mark.parametrize("name", sorted(FROZEN))
    def test_groups_and_conditioned_partition_coefficients(self, name):
        basis, prof = zoo(name)
        members = [i for g in prof.groups for i in g] + list(prof.conditioned)
        assert sorted(members) == list(range(basis.k))

    @pytest.mark.parametrize("name", sorted(FROZEN))
    def test_complexity_order_at_most_k(self, name):
        basis, prof = zoo(name)
        assert 1 <= prof.k_prime <= basis.k

    def test_unstructured_basis_reports_none(self):
        # a chain of three plus a triangle closure: fully connected graph
        mats = [I2, np.array([[1, 1], [0, 1]], dtype=complex),
                np.array([[1, 0], [1, 1]], dtype=complex)]
        prof = classify(WeightBasis("dense", mats))
        # k = 3 still admits a one-symbol separator, so check a 2x2 clique
        assert prof.family in ("conditional_multi_group", "none")
        assert prof.k_prime <= 3


class TestRMatrix:
    def test_alamouti_diagonal_every_channel(self):
        basis, _ = zoo("alamouti")
        rng = np.random.default_rng(0)
        for _ in range(100):
            H = draw_channel(1, 2, rng)
            prof = r_matrix(basis, H)
            R = prof.R
            off = R - np.diag(np.diag(R))
            assert np.max(np.abs(off)) <= 1e-9 * max(1.0, np.abs(R).max())
            # unitary weights make every diagonal entry equal to ||H||_F
            d = np.diag(R)
            assert np.ptp(d) <= 1e-6 * d.mean()
            assert d[0] == pytest.approx(np.linalg.norm(H), rel=1e-12)
            assert not prof.rank_deficient

    def test_unit_weight_pair_identity_r(self):
        mats = [np.array([[1, 0], [0, 0]], dtype=complex),
                np.array([[0, 1], [0, 0]], dtype=complex)]
        prof = r_matrix(WeightBasis("units", mats), np.eye(2))
        assert np.allclose(prof.R, np.eye(2), atol=1e-12)
        assert not prof.zero_mask[0, 0] and prof.zero_mask[0, 1]
        assert not prof.rank_deficient
        assert prof.ordering == (0, 1)

    def test_ordering_is_applied(self):
        mats = [np.array([[2, 0], [0, 0]], dtype=complex),
                np.array([[0, 1], [0, 0]], dtype=complex)]
        prof = r_matrix(WeightBasis("units", mats), np.eye(2), ordering=(1, 0))
        assert prof.ordering == (1, 0)
        assert prof.R[0, 0] == pytest.approx(1.0)
        assert prof.R[1, 1] == pytest.approx(2.0)

    def test_rejects_bad_ordering(self):
        basis, _ = zoo("alamouti")
        with pytest.raises(ValueError, match="permutation"):
            r_matrix(basis, I2, ordering=(0, 0, 1, 2))
        with pytest.raises(ValueError, match="permutation"):
            r_matrix(basis, I2, ordering=(0, 1))

    def test_rejects_mismatched_channel(self):
        basis, _ = zoo("alamouti")
        with pytest.raises(ValueError, match="columns"):
            r_matrix(basis, np.eye(3))

    def test_deficient_span_is_flagged(self):
        basis, _ = zoo("iterated")
        rng = np.random.default_rng(1)
        H = draw_channel(4, basis.n_t, rng)
        assert r_matrix(basis, H).rank_deficient

    def test_srinath_rajan_block_pattern(self):
        basis, prof = zoo("srinath_rajan")
        ordering = [i for g in prof.groups for i in g] + list(prof.conditioned)
        sampled = sample_r_matrix(basis, ordering, trials=20, seed=3)
        mask = sampled.zero_mask
        group_of = {}
        for g_idx, g in enumerate(prof.groups):
            for sym in g:
                group_of[sym] = g_idx
        # leading 8x8: 2x2 diagonal blocks, zeros across groups
        for a in range(8):
            for b in range(a + 1, 8):
                same = group_of[ordering[a]] == group_of[ordering[b]]
                assert mask[a, b] == (not same)
        # trailing 8x8 on the conditioned symbols keeps a nonzero diagonal
        # and genuine interactions (it is unconstrained, not block-diagonal)
        tail = mask[8:16, 8:16]
        assert not tail.diagonal().any()
        assert not tail[np.triu_indices(8, k=1)].all()
        # the coupling block ties the groups to the conditioned symbols
        assert not mask[:8, 8:].all()
        # exact zeros below the diagonal
        assert mask[np.tril_indices(16, k=-1)].all()


class TestSampleRMatrix:
    def test_deterministic(self):
        basis, _ = zoo("golden")
        a = sample_r_matrix(basis, trials=5, seed=11)
        b = sample_r_matrix(basis, trials=5, seed=11)
        assert np.array_equal(a.R, b.R)
        assert np.array_equal(a.zero_mask, b.zero_mask)

    def test_alamouti_sampled_mask_is_diagonal(self):
        basis, _ = zoo("alamouti")
        prof = sample_r_matrix(basis, trials=10, seed=2)
        assert not prof.zero_mask.diagonal().any()
        off = prof.zero_mask.copy()
        np.fill_diagonal(off, True)
        assert off.all()
        assert not prof.rank_deficient

    def test_rejects_zero_trials(self):
        basis, _ = zoo("alamouti")
        with pytest.raises(ValueError, match="trial"):
            sample_r_matrix(basis, trials=0)


class TestOrthogonalityImpliesZeroEntry:
    """A vanishing anticommutator forces a vanishing R entry whenever the
    coefficients are ordered group-by-group with the conditioned block last."""

    @pytest.mark.parametrize(
        "name", ["alamouti", "golden", "silver", "srinath_rajan", "simo_relay"]
    )
    def test_profile_aligned_ordering(self, name):
        basis, prof = zoo(name)
        hr = hurwitz_radon(basis)
        ordering = [i for g in prof.groups for i in g] + list(prof.conditioned)
        pos = {sym: idx for idx, sym in enumerate(ordering)}
        k = basis.k
        n_r = max(1, -(-k // (2 * basis.T)))
        rng = np.random.default_rng(17)
        for _ in range(100):
            H = draw_channel(n_r, basis.n_t, rng)
            R = r_matrix(basis, H, ordering).R
            norm = np.linalg.norm(R)
            for i in range(k):
                for j in range(i + 1, k):
                    if hr.adjacency[i, j]:
                        continue
                    a, b = sorted((pos[i], pos[j]))
                    assert abs(R[a, b]) <= 1e-6 * norm


class TestInvariances:
    def test_basis_permutation(self):
        basis, prof = zoo("silver")
        perm = (3, 0, 6, 1, 7, 2, 5, 4)
        permuted = WeightBasis("silver-perm", [basis.mats[i] for i in perm])
        other = classify(permuted)
        assert other.family == prof.family
        assert other.k_prime == prof.k_prime
        assert sorted(len(g) for g in other.groups) == sorted(
            len(g) for g in prof.groups
        )
        assert len(other.conditioned) == len(prof.conditioned)

    def test_global_unitary(self):
        basis, prof = zoo("golden")
        U = np.linalg.qr(
            np.array([[1 + 2j, 0.5 - 1j], [-0.3 + 0.7j, 2 - 0.1j]])
        )[0]
        rotated = WeightBasis("golden-rot", [U @ m for m in basis.mats])
        hr0 = hurwitz_radon(basis)
        hr1 = hurwitz_radon(rotated)
        assert np.allclose(hr0.delta, hr1.delta, atol=1e-9 * hr0.delta.max())
        other = classify(rotated)
        assert other.family == prof.family
        assert other.k_prime == prof.k_prime
        assert other.bo_params == prof.bo_params


def synthetic_star_basis():
    """Two components: a star on {0, 1, 2} with center 2, and isolated 3."""
    mats = [
        I2,
        np.diag([1j, -1j]),
        np.array([[1, 1], [0, 1]], dtype=complex),
        np.array([[0, 1j], [1j, 0]]),
    ]
    return WeightBasis("star", mats)


class TestFastGroupRefinement:
    def test_off_by_default(self):
        prof = classify(synthetic_star_basis())
        assert prof.family == "multi_group"
        assert prof.k_prime == 3
        assert prof.groups == ((0, 1, 2), (3,))
        assert prof.levels is None

    def test_prefix_levels_lower_the_order(self):
        prof = classify(synthetic_star_basis(), refine_fast_group=True)
        assert prof.family == "fast_group"
        assert prof.k_prime == 1
        assert prof.levels == (2, 1)
        assert prof.reduction_pct == pytest.approx(75.0)
        assert prof.fast_decodable

    def test_no_upgrade_without_parallel_levels(self):
        basis, prof = zoo("alamouti")
        refined = classify(basis, refine_fast_group=True)
        assert refined.family == "multi_group"
        assert refined.k_prime == prof.k_prime


class TestBoundsCheck:
    def test_shipped_codes_within_group_bound(self):
        for name in ("alamouti", "golden", "silver"):
            basis, prof = zoo(name)
            assert bounds_check(prof, 2) == []

    def test_full_rate_floor_respected_by_golden(self):
        _, prof = zoo("golden")
        assert bounds_check(prof, 2, full_rate=True) == []

    def test_violations_are_named(self):
        prof = DecodabilityProfile(
            family="multi_group",
            groups=tuple((i,) for i in range(8)),
            conditioned=(),
            k_prime=4,
            reduction_pct=50.0,
            fast_decodable=True,
        )
        assert bounds_check(prof, 2, full_rate=True) == [
            "group bound", "full-rate floor",
        ]

    def test_block_orthogonal_counts_parts_not_blocks(self):
        _, prof = zoo("golden")
        # four stored blocks, but the bound sees the two R parts
        assert len(prof.groups) == 4
        assert bounds_check(prof, 2) == []


class TestJsonView:
    def test_block_orthogonal_fields(self):
        _, prof = zoo("golden")
        data = prof.to_json_dict()
        assert data["family"] == "block_orthogonal"
        assert data["bo_params"] == [2, 2, 2]
        assert data["groups"] == [list(g) for g in prof.groups]
        assert "levels" not in data

    def test_conditional_fields(self):
        _, prof = zoo("silver")
        data = prof.to_json_dict()
        assert data["conditioned"] == [0, 1, 2, 3]
        assert "bo_params" not in data
        assert data["k_prime"] == 5
