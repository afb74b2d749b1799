"""The affine-hash mosaic: parameters, security function, randomized
inverse."""

import itertools

import numpy as np
import pytest

from mosaic_wiretap import designs
from mosaic_wiretap.field_mosaic import build_field_mosaic

GRID = [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1)]


@pytest.mark.parametrize("q,t,ell", GRID)
def test_parameter_formulas_and_member_verification(q, t, ell):
    fm = build_field_mosaic(q, t, ell)
    p = fm.params
    assert (p.v, p.b, p.r, p.k, p.lam) == (
        q ** t, q ** (t - ell) * (q ** t - 1), q ** t - 1,
        q ** ell, q ** ell - 1)
    report = designs.verify_mosaic(fm.to_mosaic())
    assert report.is_mosaic
    for member in report.member_params.values():
        assert member.kind == "bibd"
        assert (member.v, member.b, member.r, member.k, member.lam) == (
            p.v, p.b, p.r, p.k, p.lam)


def test_identity_seed_projects_coordinates():
    fm = build_field_mosaic(2, 2, 1)
    ctx = fm.ctx
    seed = next(s for s in fm.seeds
                if s.s1.index == 1 and s.s2.index == 0)
    for x in ctx.elements():
        alpha = fm.color_of(seed, x)
        assert alpha.coeffs == x.coeffs[:1] + (0,)


def test_preimage_point_hits_its_color():
    fm = build_field_mosaic(2, 3, 1)
    for seed in fm.seeds[:6]:
        for alpha in fm.colors:
            x = seed.s1.inv() * (alpha - seed.s2)
            assert fm.color_of(seed, x) == alpha


@pytest.mark.parametrize("q,t,ell", GRID)
def test_fixed_seed_covers_all_colors_k_times(q, t, ell):
    fm = build_field_mosaic(q, t, ell)
    k = fm.params.k
    for seed in fm.seeds[:: max(1, len(fm.seeds) // 5)]:
        counts = {}
        for x in fm.points:
            counts[fm.color_of(seed, x)] = counts.get(fm.color_of(seed, x), 0) + 1
        assert set(counts) == set(fm.colors)
        assert set(counts.values()) == {k}


def test_preimage_block_matches_function():
    fm = build_field_mosaic(2, 3, 2)
    for seed in fm.seeds[:4]:
        for alpha in fm.colors:
            block = fm.preimage_block(seed, alpha)
            assert len(block) == fm.params.k
            assert len({x.index for x in block}) == fm.params.k
            # an independent membership check through the raw arithmetic
            v_sub = fm.v_space
            for x in block:
                assert v_sub.contains(seed.s1 * x + seed.s2 - alpha)


@pytest.mark.parametrize("q,t,ell", [(2, 2, 1), (2, 3, 1)])
def test_pair_count_identity_exhaustive(q, t, ell):
    fm = build_field_mosaic(q, t, ell)
    expected = q ** ell - 1
    for x, y in itertools.combinations(fm.points, 2):
        for alpha in fm.colors:
            hits = sum(1 for s in fm.seeds
                       if fm.color_of(s, x) == alpha == fm.color_of(s, y))
            assert hits == expected


def test_sampled_inverse_roundtrip_and_determinism():
    fm = build_field_mosaic(2, 3, 1)
    seed = fm.seeds[7]
    alpha = fm.colors[2]
    rng = np.random.default_rng(99)
    draws = [fm.sample_preimage(seed, alpha, rng) for _ in range(64)]
    assert all(fm.color_of(seed, x) == alpha for x in draws)
    rng2 = np.random.default_rng(99)
    again = [fm.sample_preimage(seed, alpha, rng2) for _ in range(64)]
    assert [x.index for x in draws] == [x.index for x in again]
    rng3 = np.random.default_rng(100)
    other = [fm.sample_preimage(seed, alpha, rng3) for _ in range(64)]
    assert [x.index for x in draws] != [x.index for x in other]


def test_sampled_inverse_two_point_frequencies():
    # block size 2: both preimages should appear about half the time
    fm = build_field_mosaic(2, 2, 1)
    seed, alpha = fm.seeds[3], fm.colors[1]
    block = {x.index for x in fm.preimage_block(seed, alpha)}
    rng = np.random.default_rng(5)
    counts = {i: 0 for i in block}
    n = 10_000
    for _ in range(n):
        counts[fm.sample_preimage(seed, alpha, rng).index] += 1
    stat = sum((c - n / 2) ** 2 / (n / 2) for c in counts.values())
    assert stat < 10.83  # chi-square df=1 at significance 1e-3


def test_seed_metrics_values():
    fm = build_field_mosaic(2, 2, 1)
    m = fm.seed_metrics()
    assert m["seed_count"] == 6
    assert m["point_bits"] == 2.0
    assert m["message_fraction"] == 0.5
    assert abs(m["seed_bits"] - np.log2(6)) < 1e-12
    assert abs(m["approx_gap"] - abs(np.log2(6) - 1.5 * 2)) < 1e-12

    fm42 = build_field_mosaic(2, 4, 2)
    assert fm42.seed_metrics()["seed_count"] == 60
    assert fm42.seed_metrics()["message_fraction"] == 0.5

    fm43 = build_field_mosaic(2, 4, 3)
    assert fm43.seed_metrics()["message_fraction"] == (4 - 3) / 4


def test_functional_form_matches_enumerated_mosaic():
    fm = build_field_mosaic(2, 2, 1)
    direct = fm.to_mosaic()
    rebuilt = designs.mosaic_from_function(
        fm.color_of, fm.points, fm.seeds, fm.colors)
    for color in fm.colors:
        assert (rebuilt.members[color].matrix
                == direct.members[color].matrix).all()


def test_parameter_range_errors():
    for q, t, ell in [(2, 2, 0), (2, 2, 2), (2, 1, 1), (4, 2, 1)]:
        with pytest.raises(ValueError):
            build_field_mosaic(q, t, ell)
