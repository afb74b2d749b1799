"""Dense complex-Hermitian operators and information quantities.

All reported quantities use base-2 logarithms: von Neumann entropy,
Holevo information, quantum relative entropy D, and the Renyi-2
relative entropy D2 = log2 tr(rho^2 sigma^{-1}).  D and D2 return
math.inf when the support condition supp(rho) <= supp(sigma) fails;
infinity is a legitimate value here, not an error.

Tolerances (absolute unless noted):
    TAU_HERM  Hermiticity check on construction.
    TAU_TR    Unit-trace check on construction.
    TAU_PSD   Eigenvalues in [-TAU_PSD, 0] are treated as 0; anything
              more negative fails validation.
    SUPPORT_RTOL  Relative eigenvalue threshold defining the support.
    TAU_NUM   Slack used by inequality checks downstream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

TAU_HERM = 1e-9
TAU_TR = 1e-9
TAU_PSD = 1e-9
TAU_DIST = 1e-9
SUPPORT_RTOL = 1e-10
TAU_NUM = 1e-7

LN2 = math.log(2.0)


@dataclass(eq=False)
class HermitianOperator:
    """Hermitian matrix without positivity or trace constraints; used
    for operator differences and POVM elements."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator must be a square matrix")
        if np.abs(m - m.conj().T).max() > TAU_HERM:
            raise ValueError("matrix is not Hermitian within tolerance")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit trace (within tolerances)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density operator must be a square matrix")
        if np.abs(m - m.conj().T).max() > TAU_HERM:
            raise ValueError("density operator is not Hermitian within tolerance")
        tr = m.trace()
        if abs(tr - 1.0) > TAU_TR:
            raise ValueError(f"trace {tr} differs from 1 beyond tolerance")
        w = np.linalg.eigvalsh(m)
        if w.min() < -TAU_PSD:
            raise ValueError(f"negative eigenvalue {w.min()} beyond tolerance")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(eq=False)
class StateEnsemble:
    """Quantum states of a common dimension labeled by a finite alphabet."""

    states: Mapping

    def __post_init__(self):
        if not self.states:
            raise ValueError("ensemble must be nonempty")
        dims = {s.dim for s in self.states.values()}
        if len(dims) != 1:
            raise ValueError("ensemble states must share one dimension")

    @property
    def labels(self) -> tuple:
        return tuple(self.states)

    @property
    def dim(self) -> int:
        return next(iter(self.states.values())).dim


# ----------------------------------------------------------------------
# Batched primitives on raw arrays (shape (..., d, d))
# ----------------------------------------------------------------------

def entropy_bits(mats: np.ndarray) -> np.ndarray:
    """Von Neumann entropy in bits for a batch of PSD matrices."""
    w = np.linalg.eigvalsh(mats)
    w = np.maximum(w, 0.0)
    safe = np.where(w > 0.0, w, 1.0)
    return -(w * np.log2(safe)).sum(axis=-1)


def log2_on_support(mats: np.ndarray, rtol: float = SUPPORT_RTOL) -> np.ndarray:
    """Matrix log base 2, restricted to the support (zero elsewhere)."""
    w, u = np.linalg.eigh(mats)
    thresh = rtol * w.max(axis=-1, keepdims=True)
    logs = np.where(w > thresh, np.log2(np.where(w > thresh, w, 1.0)), 0.0)
    return np.einsum("...ik,...k,...jk->...ij", u, logs, u.conj())


def _support_data(sigma: np.ndarray, rtol: float = SUPPORT_RTOL):
    w, u = np.linalg.eigh(sigma)
    on = w > rtol * w.max()
    return w, u, on


def _off_support_mass(rho: np.ndarray, u: np.ndarray, on: np.ndarray) -> float:
    if on.all():
        return 0.0
    u_off = u[:, ~on]
    return float(np.einsum("ij,ji->", u_off.conj().T @ rho, u_off).real)


# ----------------------------------------------------------------------
# Information quantities
# ----------------------------------------------------------------------

def von_neumann_entropy(rho: DensityOperator) -> float:
    """S(rho) = -tr(rho log2 rho), in [0, log2 d]."""
    s = float(entropy_bits(rho.matrix))
    return 0.0 if -1e-12 < s < 0.0 else s + 0.0


def holevo(dist: Sequence[float], ensemble: StateEnsemble) -> float:
    """Holevo information chi(dist; ensemble) in bits, >= 0.

    dist is a probability vector aligned with ensemble.labels.
    """
    p = np.asarray(dist, dtype=float)
    labels = ensemble.labels
    if p.shape != (len(labels),):
        raise ValueError("distribution length does not match the ensemble")
    if p.min() < -TAU_DIST or abs(p.sum() - 1.0) > TAU_DIST:
        raise ValueError("dist is not a probability distribution within tolerance")
    stack = np.stack([ensemble.states[x].matrix for x in labels])
    avg = np.einsum("a,aij->ij", p, stack)
    chi = float(entropy_bits(avg)) - float(p @ entropy_bits(stack))
    return 0.0 if -1e-12 < chi < 0.0 else chi + 0.0


def rel_entropy(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Quantum relative entropy D(rho||sigma) in bits; math.inf when
    supp(rho) is not contained in supp(sigma)."""
    if rho.dim != sigma.dim:
        raise ValueError("operands have different dimensions")
    w, u, on = _support_data(sigma.matrix)
    if _off_support_mass(rho.matrix, u, on) > TAU_PSD:
        return math.inf
    log_sigma = np.einsum("ik,k,jk->ij", u[:, on], np.log2(w[on]), u[:, on].conj())
    d = -float(entropy_bits(rho.matrix)) - float(np.trace(rho.matrix @ log_sigma).real)
    return 0.0 if -1e-12 < d < 0.0 else d + 0.0


def renyi2_exp(rho: DensityOperator, sigma: DensityOperator) -> float:
    """tr(rho^2 sigma^{-1}) with the pseudo-inverse on supp(sigma);
    math.inf on support violation.  This is exp2 of the Renyi-2
    relative entropy and is used directly by the leakage bound to avoid
    a log/exp round trip."""
    if rho.dim != sigma.dim:
        raise ValueError("operands have different dimensions")
    w, u, on = _support_data(sigma.matrix)
    if _off_support_mass(rho.matrix, u, on) > TAU_PSD:
        return math.inf
    pinv = np.einsum("ik,k,jk->ij", u[:, on], 1.0 / w[on], u[:, on].conj())
    return float(np.trace(rho.matrix @ rho.matrix @ pinv).real)


def renyi2(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Renyi-2 relative entropy D2(rho||sigma) = log2 tr(rho^2 sigma^{-1})."""
    val = renyi2_exp(rho, sigma)
    if math.isinf(val):
        return math.inf
    d = math.log2(val)
    return 0.0 if -1e-12 < d < 0.0 else d + 0.0


def trace_norm(h: HermitianOperator) -> float:
    """Sum of absolute eigenvalues."""
    return float(np.abs(np.linalg.eigvalsh(h.matrix)).sum())


def trace_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """||rho - sigma||_1, in [0, 2] for density operators."""
    if rho.dim != sigma.dim:
        raise ValueError("operands have different dimensions")
    return float(np.abs(np.linalg.eigvalsh(rho.matrix - sigma.matrix)).sum())


def tensor(rho: DensityOperator, sigma: DensityOperator) -> DensityOperator:
    return DensityOperator(np.kron(rho.matrix, sigma.matrix))


def classical_embed(dist: Sequence[float]) -> DensityOperator:
    """Diagonal density operator carrying a probability vector."""
    p = np.asarray(dist, dtype=float)
    return DensityOperator(np.diag(p).astype(complex))


def random_density(rng: np.random.Generator, dim: int) -> DensityOperator:
    """G G* / tr(G G*) with G complex Gaussian: full rank almost surely."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityOperator(m / m.trace())


def pure_state(vec: Sequence[complex]) -> DensityOperator:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityOperator(np.outer(v, v.conj()))


# ----------------------------------------------------------------------
# Density-operator file format (JSON, row-major re/im, >= 17 significant
# digits so doubles round-trip exactly)
# ----------------------------------------------------------------------

def _fmt17(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("non-finite value in operator serialization")
    return format(float(x), ".17g")


def _matrix_doc(m: np.ndarray) -> str:
    re_rows = ",\n    ".join(
        "[" + ", ".join(_fmt17(v) for v in row) + "]" for row in m.real)
    im_rows = ",\n    ".join(
        "[" + ", ".join(_fmt17(v) for v in row) + "]" for row in m.imag)
    return ('{"re": [\n    ' + re_rows + '\n  ],\n  "im": [\n    '
            + im_rows + '\n  ]}')

def format_density(rho: DensityOperator) -> str:
    body = _matrix_doc(rho.matrix)
    return '{"dim": %d,\n "matrix": %s\n}\n' % (rho.dim, body)


def parse_density(text: str) -> DensityOperator:
    doc = json.loads(text)
    dim = int(doc["dim"])
    mat = np.asarray(doc["matrix"]["re"], dtype=float) \
        + 1j * np.asarray(doc["matrix"]["im"], dtype=float)
    if mat.shape != (dim, dim):
        raise ValueError("matrix shape does not match declared dim")
    return DensityOperator(mat)


def save_density(path, rho: DensityOperator) -> None:
    with open(path, "w") as f:
        f.write(format_density(rho))


def load_density(path) -> DensityOperator:
    with open(path) as f:
        return parse_density(f.read())
