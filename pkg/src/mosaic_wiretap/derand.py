"""Seed-reuse composition: one seed-carrying public codeword prefixed to
N modular codewords that share the seed, plus rate accounting.

The composite code for messages (a_1, ..., a_N) has

    encoder  E(x_seed, x_1..x_N | a_vec)
             = (1/|S|) sum_s E_seed(x_seed|s) prod_j E^s(x_j|a_j)
    decoder  G_{a_vec} = sum_s G_seed_s (x) G^s_{a_1} (x) ... (x) G^s_{a_N}

and is evaluated against the product channel W_seed (x) W^N.  Sizes grow
exponentially in N, so composition is capped at desk scale; the rate
accounting functions work at any size.

Block count: the asymptotics require N far above 1 but far below both
1/P_e and 1/eps_leak; the concrete default used here is the geometric
midpoint N = max(2, floor(min(pe, eps_leak)^(-1/2))), overridable by the
caller.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import quantum as qm
from . import wiretap as wt
from .wiretap import Code, CommonRandomnessCode, CqChannel

COMPOSITE_DIM_CAP = 4096
COMPOSITE_ALPHABET_CAP = 4096
COMPOSITE_MESSAGE_CAP = 4096


@dataclass(eq=False)
class CompositeCode:
    """A seed code and N modular codewords assembled into one code."""

    code: Code
    n_slots: int
    seed_count: int
    slot_messages: tuple


def product_channel(seed_channel: CqChannel, channel: CqChannel, n_slots: int) -> CqChannel:
    """Block channel for (x_seed, x_1..x_N): tensor of the per-part outputs."""
    labels = []
    states = []
    dim = seed_channel.dim * channel.dim ** n_slots
    if dim > COMPOSITE_DIM_CAP:
        raise ValueError(f"composite dimension {dim} exceeds cap {COMPOSITE_DIM_CAP}")
    count = seed_channel.n * channel.n ** n_slots
    if count > COMPOSITE_ALPHABET_CAP:
        raise ValueError(f"composite alphabet {count} exceeds cap {COMPOSITE_ALPHABET_CAP}")
    for combo in itertools.product(range(seed_channel.n),
                                   *[range(channel.n)] * n_slots):
        labels.append("|".join([seed_channel.labels[combo[0]]]
                               + [channel.labels[i] for i in combo[1:]]))
        m = seed_channel.states[combo[0]]
        for i in combo[1:]:
            m = np.kron(m, channel.states[i])
        states.append(m)
    return CqChannel(tuple(labels), np.stack(states))


def compose(seed_code: Code, family: CommonRandomnessCode, n_slots: int) -> CompositeCode:
    """Assemble the composite encoder and decoder.  The seed code's
    message set must equal the family's seed set."""
    if n_slots < 1:
        raise ValueError("need at least one message slot")
    if seed_code.messages != family.seeds:
        raise ValueError("seed code messages must equal the family's seed set")
    seeds = family.seeds
    slot_msgs = family.messages
    j_slot = len(slot_msgs)
    first = family.codes[seeds[0]]

    dim = seed_code.dim * first.dim ** n_slots
    if dim > COMPOSITE_DIM_CAP:
        raise ValueError(f"composite dimension {dim} exceeds cap {COMPOSITE_DIM_CAP}")
    n_alpha = len(seed_code.alphabet) * len(first.alphabet) ** n_slots
    if n_alpha > COMPOSITE_ALPHABET_CAP:
        raise ValueError(f"composite alphabet {n_alpha} exceeds cap "
                         f"{COMPOSITE_ALPHABET_CAP}")
    if j_slot ** n_slots > COMPOSITE_MESSAGE_CAP:
        raise ValueError("composite message set exceeds cap")

    messages = tuple(itertools.product(slot_msgs, repeat=n_slots))
    alphabet = tuple(itertools.product(seed_code.alphabet,
                                       *[first.alphabet] * n_slots))
    enc = np.zeros((len(messages), n_alpha))
    dec = np.zeros((len(messages), dim, dim), dtype=complex)
    for mi, msg in enumerate(itertools.product(range(j_slot), repeat=n_slots)):
        for si, s in enumerate(seeds):
            per_seed = family.codes[s]
            row = seed_code.encoder[si]
            g = seed_code.decoder[si]
            for a in msg:
                row = np.kron(row, per_seed.encoder[a])
                g = np.kron(g, per_seed.decoder[a])
            enc[mi] += row
            dec[mi] += g
        enc[mi] /= len(seeds)
    code = Code(messages=messages, alphabet=alphabet, encoder=enc, decoder=dec)
    return CompositeCode(code=code, n_slots=n_slots,
                         seed_count=len(seeds), slot_messages=slot_msgs)


def per_slot_leakage(ens: wt.SeedBlockStates, dist: Sequence[float]) -> float:
    """Holevo information of the seed-marginalized slot ensemble
    {(1/|S|) sum_s Z_s(alpha)}.  By joint convexity of the relative
    entropy this never exceeds the seed-averaged leakage, so the design
    bound applies to it as well."""
    p = np.asarray(dist, dtype=float)
    zeta = ens.seed_marginal_ensemble()
    avg = np.einsum("a,aij->ij", p, zeta)
    chi = float(qm.entropy_bits(avg)) - float(p @ qm.entropy_bits(zeta))
    return max(chi, 0.0)


@dataclass(frozen=True)
class RateReport:
    """Message-rate and seed-cost accounting for a composite scheme."""

    j_n: int
    message_count: int
    n: int
    mu: int
    n_slots: int
    seed_count: int
    message_rate: float
    rate_loss: float
    seed_bits: float
    message_fraction: float
    per_slot_leakage_bits: float | None = None

    def as_dict(self) -> dict:
        out = {
            "j_n": self.j_n,
            "message_count": self.message_count,
            "n": self.n,
            "mu": self.mu,
            "n_slots": self.n_slots,
            "seed_count": self.seed_count,
            "message_rate": self.message_rate,
            "rate_loss": self.rate_loss,
            "seed_bits": self.seed_bits,
            "message_fraction": self.message_fraction,
        }
        if self.per_slot_leakage_bits is not None:
            out["per_slot_leakage_bits"] = self.per_slot_leakage_bits
        return out


def rate_report(mosaic, n_slots: int, n: int = 1, mu: int = 1,
                per_slot_leakage_bits: float | None = None) -> RateReport:
    """Rates for a composite scheme built on a field mosaic.

    j_n is the public-code message count (the mosaic point count),
    message_count the secure-message count per slot.  rate_loss is
    (log2 j_n - log2 message_count)/n; message_fraction is the
    dimension fraction (t-ell)/t of the mosaic, reported separately
    because the two notions do not coincide in general.
    """
    if n_slots < 1 or n < 1 or mu < 1:
        raise ValueError("n_slots, n, mu must all be >= 1")
    metrics = mosaic.seed_metrics()
    j_n = metrics["point_count"]
    a_n = metrics["message_count"]
    rate_loss = (math.log2(j_n) - math.log2(a_n)) / n
    message_rate = n_slots * math.log2(a_n) / (mu + n * n_slots)
    return RateReport(
        j_n=j_n,
        message_count=a_n,
        n=n,
        mu=mu,
        n_slots=n_slots,
        seed_count=metrics["seed_count"],
        message_rate=message_rate,
        rate_loss=rate_loss,
        seed_bits=metrics["seed_bits"],
        message_fraction=metrics["message_fraction"],
        per_slot_leakage_bits=per_slot_leakage_bits,
    )


def choose_block_count(pe: float, eps_leak: float) -> int:
    """Concrete block-count rule N = max(2, floor(min(pe, eps)^(-1/2))):
    the geometric midpoint of the constraints 1 << N << min(pe, eps)^-1.
    Monotone nonincreasing in both arguments."""
    if not (0.0 < pe < 1.0) or not (0.0 < eps_leak < 1.0):
        raise ValueError("pe and eps_leak must lie in (0, 1)")
    return max(2, int(math.floor(min(pe, eps_leak) ** -0.5)))


def suggest_block_size(channel: CqChannel, q: int, slack: float = 1.0) -> tuple[int, float]:
    """Sizing guideline for the masking dimension: the smallest ell with
    q^ell >= sum_x exp2(D2(V(x)||sigma)) + slack.  Returns (ell, sum)."""
    if slack <= 0:
        raise ValueError("slack must be positive")
    sigma = channel.states.mean(axis=0)
    total = float(wt._renyi2_exp_stack(channel.states, sigma).sum())
    target = total + slack
    ell = max(1, math.ceil(math.log(target, q)))
    while q ** ell < target:  # guard against log rounding
        ell += 1
    return ell, total
