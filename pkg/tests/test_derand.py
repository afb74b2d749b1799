"""Seed-reuse composition and rate accounting."""

import math

import numpy as np
import pytest

from mosaic_wiretap import derand, quantum as qm, wiretap as wt
from mosaic_wiretap.field_mosaic import build_field_mosaic


def tiny_family():
    """(2,2,1) mosaic with an orthogonal legitimate channel: 6 seeds,
    2 colors, exact public decoding."""
    fm = build_field_mosaic(2, 2, 1)
    w = wt.orthogonal_channel(4)
    family = wt.modular_family(wt.pgm_public_code(w), fm)
    seed_channel = wt.orthogonal_channel(len(family.seeds))
    seed_code = wt.Code(messages=family.seeds, alphabet=seed_channel.labels,
                        encoder=np.eye(len(family.seeds)),
                        decoder=wt.pgm_decoder(seed_channel))
    return fm, w, family, seed_channel, seed_code


class TestCompose:
    def test_noiseless_single_slot_error_zero(self):
        fm, w, family, ws, seed_code = tiny_family()
        comp = derand.compose(seed_code, family, 1)
        prod = derand.product_channel(ws, w, 1)
        assert wt.avg_error(comp.code, prod) <= 1e-12

    def test_composite_code_is_valid(self):
        fm, w, family, ws, seed_code = tiny_family()
        comp = derand.compose(seed_code, family, 2)
        # Code validation already enforced PSD elements, closure <= id,
        # and encoder rows summing to one; spot-check the row sums here
        assert np.abs(comp.code.encoder.sum(axis=1) - 1.0).max() <= 1e-12
        assert len(comp.code.messages) == len(family.messages) ** 2

    def test_union_bound_on_noisy_channel(self):
        # 2 seeds, noisy qubit W: composite error <= seed error + N*worst
        fm = build_field_mosaic(2, 2, 1)
        rng = np.random.default_rng(0)
        w = wt.random_channel(rng, 4, 2)
        public = wt.pgm_public_code(w)
        family_all = wt.modular_family(public, fm)
        two = family_all.seeds[:2]
        family = wt.CommonRandomnessCode(
            seeds=two, codes={s: family_all.codes[s] for s in two})
        ws = wt.orthogonal_channel(2)
        seed_code = wt.Code(messages=two, alphabet=ws.labels,
                            encoder=np.eye(2), decoder=wt.pgm_decoder(ws))
        n_slots = 2
        comp = derand.compose(seed_code, family, n_slots)
        prod = derand.product_channel(ws, w, n_slots)
        total = wt.avg_error(comp.code, prod)
        seed_err = wt.avg_error(seed_code, ws)
        worst_mod = max(wt.avg_error(family.codes[s], w) for s in two)
        assert total <= seed_err + n_slots * worst_mod + 1e-9

    def test_seed_set_mismatch_rejected(self):
        fm, w, family, ws, seed_code = tiny_family()
        bad = wt.Code(messages=("a", "b", "c", "d", "e", "f"),
                      alphabet=ws.labels, encoder=np.eye(6),
                      decoder=wt.pgm_decoder(ws))
        with pytest.raises(ValueError):
            derand.compose(bad, family, 1)

    def test_dimension_cap(self):
        fm, w, family, ws, seed_code = tiny_family()
        with pytest.raises(ValueError):
            derand.compose(seed_code, family, 6)  # 6*4^6 > caps


class TestPerSlotLeakage:
    def test_bounded_by_design_bound(self):
        fm = build_field_mosaic(2, 2, 1)
        rng = np.random.default_rng(1)
        for _ in range(10):
            v = wt.random_channel(rng, 4, int(rng.integers(2, 4)))
            ens = wt.SeedBlockStates.build(fm, v)
            bound = wt.leakage_bound(v, fm.params)
            for _ in range(5):
                p = rng.dirichlet(np.ones(2))
                slot = derand.per_slot_leakage(ens, p)
                assert slot <= math.log2(bound) + 1e-7
                # seed marginalization can only lose information
                assert slot <= ens.avg_holevo(p) + 1e-9

    def test_perfectly_masked_when_blocks_cover_pairs(self):
        fm = build_field_mosaic(2, 2, 1)
        ens = wt.SeedBlockStates.build(fm, wt.orthogonal_channel(4))
        assert derand.per_slot_leakage(ens, [0.5, 0.5]) == 0.0


class TestRates:
    def test_example_rate_loss_one_bit(self):
        fm = build_field_mosaic(2, 2, 1)
        rep = derand.rate_report(fm, n_slots=1, n=1)
        assert rep.j_n == 4 and rep.message_count == 2
        assert rep.rate_loss == 1.0
        assert rep.message_fraction == 0.5
        assert rep.seed_bits == pytest.approx(math.log2(6))

    def test_message_count_is_points_over_block_size(self):
        fm = build_field_mosaic(2, 3, 1)  # k = 2
        rep = derand.rate_report(fm, n_slots=1)
        assert rep.message_count == rep.j_n // fm.params.k

    def test_message_rate_monotone_in_slots(self):
        fm = build_field_mosaic(2, 3, 2)
        rates = [derand.rate_report(fm, n_slots=n).message_rate
                 for n in (1, 2, 4, 8, 64)]
        assert all(a < b for a, b in zip(rates, rates[1:]))
        # approaches log2|A| per use as the seed cost amortizes
        assert rates[-1] <= math.log2(2) + 1e-12

    def test_argument_validation(self):
        fm = build_field_mosaic(2, 2, 1)
        with pytest.raises(ValueError):
            derand.rate_report(fm, n_slots=0)


class TestBlockCount:
    def test_examples(self):
        assert derand.choose_block_count(1e-4, 1e-4) == 100
        assert derand.choose_block_count(0.25, 0.25) == 2

    def test_monotone(self):
        assert derand.choose_block_count(1e-6, 1e-2) >= \
            derand.choose_block_count(1e-2, 1e-2)
        assert derand.choose_block_count(1e-2, 1e-6) >= \
            derand.choose_block_count(1e-2, 1e-2)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValueError):
                derand.choose_block_count(bad, 0.5)
            with pytest.raises(ValueError):
                derand.choose_block_count(0.5, bad)


class TestBlockSizeSuggestion:
    def test_constant_channel(self):
        # every divergence term is 1, so the target is v + slack
        ch = wt.constant_channel(4, qm.classical_embed([0.5, 0.5]))
        ell, total = derand.suggest_block_size(ch, q=2, slack=1.0)
        assert total == pytest.approx(4.0, abs=1e-9)
        assert 2 ** ell >= 5.0 and 2 ** (ell - 1) < 5.0

    def test_revealing_channel_needs_larger_blocks(self):
        flat = derand.suggest_block_size(
            wt.constant_channel(4, qm.classical_embed([0.5, 0.5])), q=2)[0]
        sharp = derand.suggest_block_size(wt.orthogonal_channel(4), q=2)[0]
        assert sharp >= flat

    def test_slack_validation(self):
        with pytest.raises(ValueError):
            derand.suggest_block_size(wt.orthogonal_channel(2), q=2, slack=0.0)
