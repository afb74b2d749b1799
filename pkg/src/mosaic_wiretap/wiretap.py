"""Classical-quantum wiretap channels, design-based leakage bounds, and
modular codes.

The central quantity is the eavesdropper's block-average output state

    Z_s(alpha) = (1/k) sum over the preimage {x : f(s, x) = alpha} of V(x),

where f is the functional form of a mosaic whose members are tactical
configurations of block size k on the channel alphabet.  For mosaics of
(u, m, k, lam1, lam2) GDDs the averaged Holevo leakage obeys

    exp2( (1/|S|) sum_s chi(A; Z_s) )  <=  C(V; u, m, k, v, r, lam1, lam2)

for every message distribution A, with

    C = (r-lam1)/(krv) * sum_x exp2(D2(V(x) || sigma))
      + u(lam1-lam2)/(kr) * (1/m) sum_i exp2(D2(class-average_i || sigma))
      + v*lam2/(kr),

sigma being the uniform average output.  The three coefficients sum to
kr/(kr) = 1 by the replication identity, so a constant channel gives
C = 1 exactly, and lam1 = lam2 collapses the middle term, leaving the
BIBD closed form.  exp2(D2) is evaluated directly as tr(rho^2 sigma^+)
to avoid a log/exp round trip.

Modular codes (per-seed): the encoder sends a uniformly chosen preimage
of (s, alpha) through the public encoder, the decoder groups the public
decoder elements by color.  Decoding error therefore never exceeds the
worst per-codeword error of the public code.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import quantum as qm
from .designs import ClassMatrix, DesignParams
from .quantum import DensityOperator, StateEnsemble

TAU_POVM = 1e-9
JOINT_DIM_CAP = 4096


# ----------------------------------------------------------------------
# Channels
# ----------------------------------------------------------------------

@dataclass(eq=False)
class CqChannel:
    """Finite input alphabet mapped to density operators of one
    dimension.  States are stored stacked as an (n, d, d) array."""

    labels: tuple
    states: np.ndarray

    def __post_init__(self):
        self.labels = tuple(str(x) for x in self.labels)
        st = np.asarray(self.states, dtype=complex)
        if st.ndim != 3 or st.shape[0] != len(self.labels):
            raise ValueError("states must be a (n, d, d) stack matching labels")
        for mat in st:
            DensityOperator(mat)  # validates hermiticity / PSD / trace
        self.states = st

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def state(self, i: int) -> DensityOperator:
        return DensityOperator(self.states[i])


@dataclass(eq=False)
class WiretapPair:
    """Legitimate channel W and eavesdropper channel V on one alphabet."""

    w: CqChannel
    v: CqChannel

    def __post_init__(self):
        if self.w.labels != self.v.labels:
            raise ValueError("wiretap pair must share the input alphabet")


def constant_channel(n: int, rho: DensityOperator) -> CqChannel:
    return CqChannel(tuple(str(i) for i in range(n)),
                     np.repeat(rho.matrix[None], n, axis=0))


def orthogonal_channel(n: int, dim: int | None = None) -> CqChannel:
    """Input i mapped to the basis projector |i><i| (dim defaults to n)."""
    d = n if dim is None else dim
    if d < n:
        raise ValueError("dimension too small for orthogonal outputs")
    states = np.zeros((n, d, d), dtype=complex)
    for i in range(n):
        states[i, i, i] = 1.0
    return CqChannel(tuple(str(i) for i in range(n)), states)


def random_channel(rng: np.random.Generator, n: int, dim: int) -> CqChannel:
    states = np.stack([qm.random_density(rng, dim).matrix for _ in range(n)])
    return CqChannel(tuple(str(i) for i in range(n)), states)


def average_output_state(channel: CqChannel) -> DensityOperator:
    """Uniform average of the channel outputs (the reference state of
    every divergence bound)."""
    return DensityOperator(channel.states.mean(axis=0))


# ----------------------------------------------------------------------
# Eavesdropper block states
# ----------------------------------------------------------------------

class SeedBlockStates:
    """Z_s(alpha) for every seed and color of a mosaic, stacked for
    sweep-friendly batched evaluation.

    Accepts anything exposing .colors, .points, .blocks and
    .color_index_matrix() (a designs.Mosaic or a FieldMosaic).
    """

    def __init__(self, colors, seeds, z: np.ndarray, block_size: int):
        self.colors = tuple(colors)
        self.seeds = tuple(seeds)
        self.z = z  # (S, A, d, d)
        self.block_size = block_size
        self.entropies = qm.entropy_bits(z)  # (S, A)

    @classmethod
    def build(cls, mosaic, channel: CqChannel) -> "SeedBlockStates":
        cim = mosaic.color_index_matrix()  # (v, b)
        v, b = cim.shape
        if v != channel.n:
            raise ValueError("mosaic point count does not match the channel alphabet")
        n_colors = len(mosaic.colors)
        counts = np.zeros((b, n_colors), dtype=np.int64)
        for a in range(n_colors):
            counts[:, a] = (cim == a).sum(axis=0)
        if counts.min() == 0:
            raise ValueError("some (seed, color) block is empty")
        if counts.min() != counts.max():
            raise ValueError("non-constant block size: members are not "
                             "tactical with a common k")
        k = int(counts[0, 0])
        d = channel.dim
        z = np.zeros((b, n_colors, d, d), dtype=complex)
        for j in range(b):
            for a in range(n_colors):
                idx = np.nonzero(cim[:, j] == a)[0]
                z[j, a] = channel.states[idx].mean(axis=0)
        return cls(mosaic.colors, mosaic.blocks, z, k)

    @property
    def n_seeds(self) -> int:
        return self.z.shape[0]

    @property
    def n_colors(self) -> int:
        return self.z.shape[1]

    @property
    def dim(self) -> int:
        return self.z.shape[2]

    def per_seed_holevo(self, dist: Sequence[float]) -> np.ndarray:
        """chi(dist; Z_s) for every seed, in bits."""
        p = np.asarray(dist, dtype=float)
        zbar = np.einsum("a,saij->sij", p, self.z)
        chi = qm.entropy_bits(zbar) - self.entropies @ p
        return np.maximum(chi, 0.0)

    def avg_holevo(self, dist: Sequence[float]) -> float:
        return float(self.per_seed_holevo(dist).mean())

    def divergence_to_mixture(self, dist: Sequence[float]) -> np.ndarray:
        """D(Z_s(alpha) || Z_s-mixture) in bits, shape (S, A); the
        gradient direction of the averaged Holevo objective."""
        p = np.asarray(dist, dtype=float)
        zbar = np.einsum("a,saij->sij", p, self.z)
        logzbar = qm.log2_on_support(zbar)
        cross = np.einsum("saij,sji->sa", self.z, logzbar).real
        return -self.entropies - cross

    def seed_marginal_ensemble(self) -> np.ndarray:
        """Per-color states averaged over the seed, shape (A, d, d)."""
        return self.z.mean(axis=0)


def eaves_states(mosaic, channel: CqChannel, seed) -> StateEnsemble:
    """The ensemble {Z_s(alpha)} for one seed (given by label or index)."""
    ens = SeedBlockStates.build(mosaic, channel)
    if isinstance(seed, (int, np.integer)):
        j = int(seed)
    else:
        j = ens.seeds.index(seed)
    return StateEnsemble({c: DensityOperator(ens.z[j, a])
                          for a, c in enumerate(ens.colors)})


# ----------------------------------------------------------------------
# Leakage bound and reports
# ----------------------------------------------------------------------

def _renyi2_exp_stack(states: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """tr(rho^2 sigma^+) for a stack of states against one reference."""
    w, u = np.linalg.eigh(sigma)
    on = w > qm.SUPPORT_RTOL * w.max()
    off_mass = np.einsum("xij,ji->x", states @ u[:, ~on], u[:, ~on].conj().T).real \
        if not on.all() else np.zeros(states.shape[0])
    pinv = np.einsum("ik,k,jk->ij", u[:, on], 1.0 / w[on], u[:, on].conj())
    vals = np.einsum("xij,xjk,ki->x", states, states, pinv).real
    return np.where(off_mass > qm.TAU_PSD, np.inf, vals)


def _gdd_fields(params: DesignParams) -> tuple[int, int, int, int]:
    """(u, m, lam1, lam2), treating a BIBD as the GDD with singleton
    classes (u = 1, m = v, lam1 = lam2 = lam)."""
    if params.kind == "bibd":
        return 1, params.v, params.lam, params.lam
    if params.kind == "gdd":
        return params.u, params.m, params.lam1, params.lam2
    raise ValueError(f"bound needs BIBD or GDD parameters, got {params.kind!r}")


def leakage_bound(channel: CqChannel, params: DesignParams,
                  classes: ClassMatrix | None = None) -> float:
    """The upper bound C on exp2 of the seed-averaged Holevo leakage.

    Requires the replication identity r(k-1) = lam1(u-1) + lam2(m-1)u as
    a precondition; a point-class partition is required whenever
    lam1 != lam2 (the class-average term does not vanish).
    """
    u, m, lam1, lam2 = _gdd_fields(params)
    v, k, r = params.v, params.k, params.r
    if v != u * m:
        raise ValueError(f"v = {v} does not equal u*m = {u * m}")
    if v != channel.n:
        raise ValueError("design point count does not match the channel alphabet")
    if r * (k - 1) != lam1 * (u - 1) + lam2 * (m - 1) * u:
        raise ValueError("replication identity r(k-1) = lam1(u-1) + lam2(m-1)u "
                         "fails; not a valid parameter set")
    sigma = channel.states.mean(axis=0)
    total = float(_renyi2_exp_stack(channel.states, sigma).sum())
    c = (r - lam1) / (k * r * v) * total + v * lam2 / (k * r)
    if lam1 != lam2:
        if classes is None:
            raise ValueError("a point-class partition is required when lam1 != lam2")
        if len(classes.assignment) != v or classes.u != u or classes.m != m:
            raise ValueError("class partition does not match the GDD parameters")
        assignment = np.asarray(classes.assignment)
        class_avgs = np.stack([channel.states[assignment == i].mean(axis=0)
                               for i in range(m)])
        mids = _renyi2_exp_stack(class_avgs, sigma)
        c += u * (lam1 - lam2) / (k * r) * float(mids.mean())
    return c


def bibd_bound_closed_form(channel: CqChannel, params: DesignParams) -> float:
    """The BIBD specialization (1 - (r-lam)/(kr)) +
    (r-lam)/(krv) * sum_x exp2(D2(V(x)||sigma)); kept as a written-out
    expression so the general bound can be checked against it."""
    if params.kind != "bibd":
        raise ValueError("closed form applies to BIBD parameters")
    v, k, r, lam = params.v, params.k, params.r, params.lam
    sigma = channel.states.mean(axis=0)
    total = float(_renyi2_exp_stack(channel.states, sigma).sum())
    return (1.0 - (r - lam) / (k * r)) + (r - lam) / (k * r * v) * total


@dataclass(frozen=True)
class LeakageReport:
    """Seed-averaged Holevo leakage of one message distribution against
    the design bound.  The optional trace fields carry the joint-state
    distance and its bound (distribution-independent; see
    independence_check)."""

    dist: tuple[float, ...]
    per_seed_chi: tuple[float, ...]
    avg_chi: float
    exp_avg: float
    bound: float
    margin: float
    trace_distance: float | None = None
    trace_bound: float | None = None

    def as_dict(self) -> dict:
        out = {
            "dist": list(self.dist),
            "per_seed_chi": list(self.per_seed_chi),
            "avg_chi": self.avg_chi,
            "exp_avg": self.exp_avg,
            "bound": self.bound,
            "margin": self.margin,
        }
        if self.trace_distance is not None:
            out["trace_distance"] = self.trace_distance
            out["trace_bound"] = self.trace_bound
        return out


def leakage_report(ens: SeedBlockStates, dist: Sequence[float], bound: float,
                   independence: dict | None = None) -> LeakageReport:
    p = np.asarray(dist, dtype=float)
    if p.shape != (ens.n_colors,):
        raise ValueError("distribution length does not match the color count")
    if p.min() < -qm.TAU_DIST or abs(p.sum() - 1.0) > qm.TAU_DIST:
        raise ValueError("dist is not a probability distribution within tolerance")
    chi = ens.per_seed_holevo(p)
    avg = float(chi.mean())
    exp_avg = 2.0 ** avg
    return LeakageReport(
        dist=tuple(float(x) for x in p),
        per_seed_chi=tuple(float(x) for x in chi),
        avg_chi=avg,
        exp_avg=exp_avg,
        bound=bound,
        margin=bound - exp_avg,
        trace_distance=None if independence is None else independence["lhs"],
        trace_bound=None if independence is None else independence["rhs"],
    )


def leakage_avg(mosaic, channel: CqChannel, dist: Sequence[float],
                params: DesignParams, classes: ClassMatrix | None = None,
                with_trace: bool = False) -> LeakageReport:
    """Convenience wrapper: build the block states, compute the bound,
    and evaluate one distribution (optionally with the joint-state
    distance fields filled)."""
    ens = SeedBlockStates.build(mosaic, channel)
    bound = leakage_bound(channel, params, classes)
    independence = independence_check(ens, bound) if with_trace else None
    return leakage_report(ens, dist, bound, independence)


# ----------------------------------------------------------------------
# Leakage maximization (lower-bound search over the simplex)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    dist: tuple[float, ...]
    value: float
    converged: bool
    iterations: int


def max_leakage_search(ens: SeedBlockStates, iterations: int = 300,
                       rng: np.random.Generator | None = None,
                       restarts: int = 2, tol: float = 1e-9) -> SearchResult:
    """Best message distribution found by multiplicative-weights ascent
    on the concave objective (1/|S|) sum_s chi(A; Z_s), seeded from the
    uniform distribution (plus optional random restarts) and compared
    against all vertex distributions.  The result is always a valid
    lower bound on the true maximum.
    """
    n = ens.n_colors
    best_p = np.full(n, 1.0 / n)
    best_val = ens.avg_holevo(best_p)
    converged = False
    total_iters = 0

    for a in range(n):  # vertices: chi = 0, but keep the candidate set honest
        vertex = np.zeros(n)
        vertex[a] = 1.0
        val = ens.avg_holevo(vertex)
        if val > best_val:
            best_p, best_val = vertex, val

    starts = [np.full(n, 1.0 / n)]
    if rng is not None:
        starts += [rng.dirichlet(np.ones(n)) for _ in range(restarts)]

    for p0 in starts:
        p = np.maximum(p0, 1e-12)
        p /= p.sum()
        val = ens.avg_holevo(p)
        eta = 1.0
        run_converged = False
        for it in range(iterations):
            g = ens.divergence_to_mixture(p).mean(axis=0)
            g = g - g.max()  # shift-invariant on the simplex; avoids overflow
            accepted = False
            while eta > 1e-8:
                cand = p * np.power(2.0, eta * g)
                cand = np.maximum(cand, 1e-300)
                cand /= cand.sum()
                cand_val = ens.avg_holevo(cand)
                if cand_val >= val - 1e-15:
                    accepted = True
                    break
                eta *= 0.5
            total_iters += 1
            if not accepted:
                run_converged = True
                break
            delta = cand_val - val
            p, val = cand, cand_val
            if delta < tol:
                run_converged = True
                break
        if val > best_val:
            best_p, best_val = p, val
        converged = converged or run_converged

    return SearchResult(dist=tuple(float(x) for x in best_p),
                        value=float(best_val),
                        converged=converged,
                        iterations=total_iters)


# ----------------------------------------------------------------------
# Joint message-seed-output state and the independence bound
# ----------------------------------------------------------------------

def joint_state(ens: SeedBlockStates) -> DensityOperator:
    """The block-diagonal classical-quantum state of (message, seed,
    eavesdropper output) under uniform message and seed: one d-dim block
    Z_s(alpha)/(|A||S|) per (alpha, s), ordered color-major."""
    a_n, s_n, d = ens.n_colors, ens.n_seeds, ens.dim
    total = a_n * s_n * d
    if total > JOINT_DIM_CAP:
        raise ValueError(f"joint dimension {total} exceeds cap {JOINT_DIM_CAP}")
    out = np.zeros((total, total), dtype=complex)
    scale = 1.0 / (a_n * s_n)
    for a in range(a_n):
        for s in range(s_n):
            lo = (a * s_n + s) * d
            out[lo:lo + d, lo:lo + d] = ens.z[s, a] * scale
    return DensityOperator(out)


def joint_trace_out_message_seed(ens: SeedBlockStates) -> np.ndarray:
    """Partial trace of the joint state over message and seed: the sum
    of the diagonal blocks, which must equal the average output state."""
    return ens.z.mean(axis=(0, 1))


def independence_check(ens: SeedBlockStates, bound: float,
                       tol: float = qm.TAU_NUM) -> dict:
    """Trace distance between the joint state and the product of its
    marginals, against sqrt(2 ln2 log2 C).

    The joint state and the product state are block diagonal with the
    same block layout, so the trace norm of the difference is exactly
    the average of the per-block trace norms ||Z_s(alpha) - sigma||_1;
    that identity is evaluated here (and is unit-tested against the
    dense trace norm).
    """
    sigma = ens.z.mean(axis=(0, 1))
    diffs = ens.z - sigma
    lhs = float(np.abs(np.linalg.eigvalsh(diffs)).sum(axis=-1).mean())
    rhs = math.sqrt(2.0 * qm.LN2 * max(math.log2(bound), 0.0))
    return {
        "lhs": lhs,
        "rhs": rhs,
        "bound": bound,
        "holds": lhs <= rhs + tol,
        "margin": rhs - lhs,
    }


# ----------------------------------------------------------------------
# Codes, decoders, errors
# ----------------------------------------------------------------------

@dataclass(eq=False)
class Code:
    """Stochastic encoder plus POVM decoder.

    encoder[j, x] = probability of channel input x given message j.
    decoder[j] is the PSD element for message j; the elements may sum to
    less than the identity, the deficit acting as an explicit failure
    outcome that always counts as an error.
    """

    messages: tuple
    alphabet: tuple
    encoder: np.ndarray
    decoder: np.ndarray

    def __post_init__(self):
        enc = np.asarray(self.encoder, dtype=float)
        dec = np.asarray(self.decoder, dtype=complex)
        if enc.shape != (len(self.messages), len(self.alphabet)):
            raise ValueError("encoder shape must be (messages, alphabet)")
        if enc.min() < -1e-12 or np.abs(enc.sum(axis=1) - 1.0).max() > 1e-9:
            raise ValueError("encoder rows must be probability distributions")
        if dec.shape != (len(self.messages),) + dec.shape[1:] or dec.shape[1] != dec.shape[2]:
            raise ValueError("decoder must be a stack of square matrices")
        if np.abs(dec - dec.conj().transpose(0, 2, 1)).max() > qm.TAU_HERM:
            raise ValueError("decoder elements must be Hermitian")
        if np.linalg.eigvalsh(dec).min() < -TAU_POVM:
            raise ValueError("decoder elements must be PSD within tolerance")
        closure = np.eye(dec.shape[1]) - dec.sum(axis=0)
        if np.linalg.eigvalsh(closure).min() < -TAU_POVM:
            raise ValueError("decoder elements must sum to at most the identity")
        self.encoder = enc
        self.decoder = dec

    @property
    def dim(self) -> int:
        return self.decoder.shape[1]


@dataclass(eq=False)
class CommonRandomnessCode:
    """One code per seed, sharing a common message set."""

    seeds: tuple
    codes: dict

    def __post_init__(self):
        msg_sets = {self.codes[s].messages for s in self.seeds}
        if len(msg_sets) != 1:
            raise ValueError("per-seed codes must share the message set")

    @property
    def messages(self) -> tuple:
        return self.codes[self.seeds[0]].messages


def per_message_success(code: Code, channel: CqChannel) -> np.ndarray:
    """Probability of correct decoding for each message."""
    if code.dim != channel.dim:
        raise ValueError("decoder dimension does not match the channel output")
    if len(code.alphabet) != channel.n:
        raise ValueError("code alphabet does not match the channel")
    return np.einsum("jx,xab,jba->j", code.encoder, channel.states,
                     code.decoder).real


def avg_error(code: Code, channel: CqChannel) -> float:
    """1 - mean success over messages."""
    return float(1.0 - per_message_success(code, channel).mean())


def max_error(code: Code, channel: CqChannel) -> float:
    """1 - worst-message success (the maximal error criterion)."""
    return float(1.0 - per_message_success(code, channel).min())


def pgm_decoder(channel: CqChannel, codewords: Sequence[int] | None = None) -> np.ndarray:
    """Pretty-good-measurement elements S^{-1/2} W(x) S^{-1/2} for the
    given codeword indices (default: the whole alphabet).  Elements are
    PSD and sum to the projector onto the support of S = sum W(x)."""
    idx = list(range(channel.n)) if codewords is None else list(codewords)
    if len(set(idx)) != len(idx):
        raise ValueError("codewords must be distinct")
    s = channel.states[idx].sum(axis=0)
    w, u = np.linalg.eigh(s)
    on = w > qm.SUPPORT_RTOL * w.max()
    isq = np.einsum("ik,k,jk->ij", u[:, on], 1.0 / np.sqrt(w[on]), u[:, on].conj())
    out = np.stack([isq @ channel.states[i] @ isq for i in idx])
    return (out + out.conj().transpose(0, 2, 1)) / 2.0


def pgm_public_code(channel: CqChannel) -> Code:
    """The identity-encoder public code with a PGM decoder: message x is
    sent as input x and decoded by the measurement element for x."""
    return Code(messages=channel.labels,
                alphabet=channel.labels,
                encoder=np.eye(channel.n),
                decoder=pgm_decoder(channel))


def build_modular_code(public: Code, mosaic, seed) -> Code:
    """Definition of the per-seed modular code: encode a message color
    by a uniform preimage point pushed through the public encoder;
    decode by summing the public decoder elements over each preimage."""
    cim = mosaic.color_index_matrix()
    v, b = cim.shape
    if len(public.messages) != v:
        raise ValueError("public message set must equal the mosaic point set")
    if isinstance(seed, (int, np.integer)):
        j = int(seed)
    else:
        j = mosaic.blocks.index(seed)
    n_colors = len(mosaic.colors)
    enc = np.zeros((n_colors, len(public.alphabet)))
    dec = np.zeros((n_colors,) + public.decoder.shape[1:], dtype=complex)
    for a in range(n_colors):
        block = np.nonzero(cim[:, j] == a)[0]
        if block.size == 0:
            raise ValueError(f"empty preimage for color index {a} at seed {seed!r}")
        enc[a] = public.encoder[block].mean(axis=0)
        dec[a] = public.decoder[block].sum(axis=0)
    return Code(messages=mosaic.colors, alphabet=public.alphabet,
                encoder=enc, decoder=dec)


def modular_family(public: Code, mosaic) -> CommonRandomnessCode:
    codes = {s: build_modular_code(public, mosaic, j)
             for j, s in enumerate(mosaic.blocks)}
    return CommonRandomnessCode(seeds=tuple(mosaic.blocks), codes=codes)


# ----------------------------------------------------------------------
# Channel file format and CSV emission
# ----------------------------------------------------------------------

def format_channel(channel: CqChannel) -> str:
    blocks = ",\n  ".join(qm._matrix_doc(m) for m in channel.states)
    labels = ", ".join(json.dumps(x) for x in channel.labels)
    return ('{"alphabet": [%s],\n "dim": %d,\n "states": [\n  %s\n ]\n}\n'
            % (labels, channel.dim, blocks))


def parse_channel(text: str) -> CqChannel:
    doc = json.loads(text)
    labels = tuple(doc["alphabet"])
    dim = int(doc["dim"])
    states = []
    for block in doc["states"]:
        m = np.asarray(block["re"], dtype=float) + 1j * np.asarray(block["im"], dtype=float)
        if m.shape != (dim, dim):
            raise ValueError("state block shape does not match declared dim")
        states.append(m)
    return CqChannel(labels, np.stack(states))


def save_channel(path, channel: CqChannel) -> None:
    with open(path, "w") as f:
        f.write(format_channel(channel))


def load_channel(path) -> CqChannel:
    with open(path) as f:
        return parse_channel(f.read())


def leakage_csv(ens: SeedBlockStates, report: LeakageReport) -> str:
    """One row per (seed, color): block entropy, trace distance to the
    average output, and the per-seed Holevo value."""
    sigma = ens.z.mean(axis=(0, 1))
    dists = np.abs(np.linalg.eigvalsh(ens.z - sigma)).sum(axis=-1)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["seed_index", "seed", "color_index", "color",
                     "block_entropy_bits", "trace_dist_to_avg", "seed_holevo_bits"])
    for j, s in enumerate(ens.seeds):
        s_label = s.label() if hasattr(s, "label") else str(s)
        for a, c in enumerate(ens.colors):
            c_label = c.label() if hasattr(c, "label") else str(c)
            writer.writerow([j, s_label, a, c_label,
                             repr(float(ens.entropies[j, a])),
                             repr(float(dists[j, a])),
                             repr(float(report.per_seed_chi[j]))])
    return buf.getvalue()
