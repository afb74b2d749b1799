"""Explicit mosaic of BIBDs from affine hashing over GF(q^t).

The point set is X = GF(q^t).  Messages live in a coordinate subspace A
of dimension t-ell, masked by the complementary coordinate subspace V of
dimension ell.  A seed is a pair s = (s1, s2) with s1 a nonzero field
element and s2 in A, and the security function is

    f(s, x) = the A-component of s1*x + s2,

i.e. f(s, x) = alpha exactly when s1*x + s2 lands in the coset alpha + V.
The preimage of (s, alpha) is the block s1^{-1}(alpha - s2 + V) of size
k = q^ell, and for every color the blocks over all seeds form a BIBD
with parameters

    v = q^t,  b = q^(t-ell) (q^t - 1),  r = q^t - 1,
    k = q^ell,  lam = q^ell - 1.

Because A and V are coordinate subspaces, evaluating f is a single field
multiply-add followed by truncation, and the randomized inverse is a
multiply by a precomputed s1^{-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import designs
from .designs import DesignParams
from .gf import FieldCtx, FieldElement, complementary_subspaces, field_ctx

# Materializing all member incidence matrices costs |A| * v * b cells.
MATERIALIZE_CELL_CAP = 20_000_000


@dataclass(frozen=True)
class SeedValue:
    """Seed pair (s1, s2): s1 a nonzero field element, s2 in the message
    subspace."""

    s1: FieldElement
    s2: FieldElement

    def label(self) -> str:
        return f"{self.s1.index}:{self.s2.index}"


class FieldMosaic:
    """Mosaic of BIBDs over GF(q^t) with its security function and
    randomized inverse.  Immutable after construction."""

    def __init__(self, ctx: FieldCtx, ell: int):
        if not 1 <= ell < ctx.t:
            raise ValueError(f"need 1 <= ell < t, got ell={ell}, t={ctx.t}")
        self.ctx = ctx
        self.ell = ell
        self.a_space, self.v_space = complementary_subspaces(ctx, ell)
        self.points = ctx.elements()
        self.colors = tuple(self.a_space.elements())
        self.seeds = tuple(
            SeedValue(s1, s2)
            for s1 in self.points[1:]  # nonzero elements, canonical order
            for s2 in self.colors
        )
        q, t = ctx.q, ctx.t
        self.params = DesignParams(
            "bibd",
            v=q ** t,
            b=q ** (t - ell) * (q ** t - 1),
            k=q ** ell,
            r=q ** t - 1,
            lam=q ** ell - 1,
        )
        self._color_by_index = {c.index: ci for ci, c in enumerate(self.colors)}
        self._cim: np.ndarray | None = None

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def t(self) -> int:
        return self.ctx.t

    @property
    def blocks(self) -> tuple[SeedValue, ...]:
        """Alias: the seeds double as block indices of the mosaic."""
        return self.seeds

    def _project(self, y: FieldElement) -> FieldElement:
        """A-component of y: zero the masking coordinates."""
        cut = self.ctx.t - self.ell
        return FieldElement(self.ctx, y.coeffs[:cut] + (0,) * self.ell)

    def color_of(self, seed: SeedValue, x: FieldElement) -> FieldElement:
        """Evaluate the security function f(s, x)."""
        return self._project(seed.s1 * x + seed.s2)

    def preimage_block(self, seed: SeedValue, color: FieldElement) -> list[FieldElement]:
        """All k = q^ell points x with f(s, x) = color, in the canonical
        digit order of the masking subspace."""
        inv = seed.s1.inv()
        base = color - seed.s2
        return [inv * (base + w) for w in self.v_space.elements()]

    def sample_preimage(self, seed: SeedValue, color: FieldElement,
                        rng: np.random.Generator) -> FieldElement:
        """Uniform draw from the preimage block via index sampling: the
        masking component's digits are drawn uniformly, so no rejection
        is needed.  The caller owns the generator."""
        digits = rng.integers(0, self.q, size=self.ell)
        w = self.v_space.element([int(d) for d in digits])
        return seed.s1.inv() * ((color - seed.s2) + w)

    def color_index_matrix(self) -> np.ndarray:
        """(v, b) array: entry (i, j) is the color index of
        f(seeds[j], points[i]).  Cached; the mosaic is immutable."""
        if self._cim is None:
            v, b = len(self.points), len(self.seeds)
            out = np.empty((v, b), dtype=np.int64)
            for j, seed in enumerate(self.seeds):
                for i, x in enumerate(self.points):
                    out[i, j] = self._color_by_index[self.color_of(seed, x).index]
            self._cim = out
        return self._cim

    def to_mosaic(self) -> designs.Mosaic:
        """Materialize the member incidence structures."""
        v, b = len(self.points), len(self.seeds)
        cells = len(self.colors) * v * b
        if cells > MATERIALIZE_CELL_CAP:
            raise ValueError(
                f"materializing {cells} incidence cells exceeds the cap "
                f"{MATERIALIZE_CELL_CAP}; use the functional form instead")
        cim = self.color_index_matrix()
        block_labels = tuple(s.label() for s in self.seeds)
        members = {}
        for ci, color in enumerate(self.colors):
            members[color] = designs.IncidenceStructure(
                self.points, block_labels, (cim == ci).astype(np.int64))
        return designs.Mosaic(colors=self.colors, members=members,
                              functional_form=self.color_of)

    def seed_metrics(self) -> dict:
        """Seed- and message-size accounting in bits."""
        q, t, ell = self.q, self.t, self.ell
        seed_bits = math.log2((q ** t - 1) * q ** (t - ell))
        point_bits = t * math.log2(q)
        fraction = (t - ell) / t
        return {
            "seed_count": len(self.seeds),
            "point_count": len(self.points),
            "message_count": len(self.colors),
            "block_size": q ** ell,
            "seed_bits": seed_bits,
            "point_bits": point_bits,
            "message_fraction": fraction,
            "approx_gap": abs(seed_bits - (1 + fraction) * point_bits),
        }


def build_field_mosaic(q: int, t: int, ell: int) -> FieldMosaic:
    """Construct the GF(q^t) mosaic with masking dimension ell."""
    return FieldMosaic(field_ctx(q, t), ell)
