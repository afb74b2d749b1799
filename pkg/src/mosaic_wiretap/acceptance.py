"""Desk-scale property suite: the criteria behind the `check` command.

Every criterion is a function returning a CriterionResult whose details
dict is JSON-serializable and fully determined by the rng seed, so a
check report is byte-identical across runs with the same configuration.
Wall-clock durations are kept on the result object only (reported to
stderr by the CLI), never inside the details.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import designs, quantum as qm, wiretap as wt
from .field_mosaic import FieldMosaic, build_field_mosaic

DESIGN_GRID = ((2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1))
SWEEP_GRID = ((2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1),
              (2, 4, 1), (2, 4, 2), (2, 4, 3))

TAU_NUM = qm.TAU_NUM


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    details: dict
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        keys = ", ".join(f"{k}={self.details[k]}" for k in sorted(self.details)
                         if not isinstance(self.details[k], (list, dict)))
        return f"criterion {self.index:2d} {self.name}: {status} ({keys})"


def _timed(index: int, name: str, passed: bool, details: dict,
           start: float) -> CriterionResult:
    return CriterionResult(index, name, bool(passed), details,
                           time.perf_counter() - start)


# ----------------------------------------------------------------------
# 1. Design identities
# ----------------------------------------------------------------------

def criterion_design_identities() -> CriterionResult:
    start = time.perf_counter()
    checked = 0
    failures = []
    for (q, t, ell) in DESIGN_GRID:
        fm = build_field_mosaic(q, t, ell)
        mos = fm.to_mosaic()
        report = designs.verify_mosaic(mos)
        if not report.is_mosaic:
            failures.append(f"{(q, t, ell)}: {report.problems}")
            continue
        expect = fm.params
        for color, params in report.member_params.items():
            checked += 1
            if params is None or params.kind != "bibd" or (
                    params.v, params.b, params.r, params.k, params.lam) != (
                    expect.v, expect.b, expect.r, expect.k, expect.lam):
                failures.append(f"{(q, t, ell)} color {color!r}: {params}")
                continue
            n = mos.members[color].matrix
            gram = n @ n.T
            want = ((params.r - params.lam) * np.eye(params.v, dtype=np.int64)
                    + params.lam * np.ones((params.v, params.v), np.int64))
            if not (gram == want).all():
                failures.append(f"{(q, t, ell)} color {color!r}: gram identity")
    details = {"grids": len(DESIGN_GRID), "members_checked": checked,
               "failures": failures}
    return _timed(1, "design-identities", not failures, details, start)


# ----------------------------------------------------------------------
# 2/4/5. Random-channel sweep: averaged-leakage bound, BIBD closed-form
# reduction, joint-state independence bound
# ----------------------------------------------------------------------

def _sweep_distributions(rng: np.random.Generator, n_colors: int,
                         n_dists: int) -> np.ndarray:
    dists = [np.full(n_colors, 1.0 / n_colors)]
    dists.extend(np.eye(n_colors))
    while len(dists) < n_dists:
        dists.append(rng.dirichlet(np.ones(n_colors)))
    return np.stack(dists[:max(n_dists, len(dists))])


def _sweep_channel(fm: FieldMosaic, channel: wt.CqChannel,
                   dists: np.ndarray) -> dict:
    ens = wt.SeedBlockStates.build(fm, channel)
    bound = wt.leakage_bound(channel, fm.params)
    closed = wt.bibd_bound_closed_form(channel, fm.params)
    margins = np.array([bound - 2.0 ** ens.avg_holevo(p) for p in dists])
    ind = wt.independence_check(ens, bound)
    tr_dev = float(np.abs(wt.joint_trace_out_message_seed(ens)
                          - channel.states.mean(axis=0)).max())
    return {
        "worst_margin": float(margins.min()),
        "violations": int((margins < -TAU_NUM).sum()),
        "bound_diff": abs(bound - closed),
        "ind_margin": ind["margin"],
        "ind_holds": ind["holds"],
        "joint_dim": ens.n_colors * ens.n_seeds * ens.dim,
        "tr_dev": tr_dev,
    }


def sweep_criteria(seed: int, n_channels: int = 100, n_dists: int = 100,
                   jobs: int = 1) -> tuple[CriterionResult, CriterionResult,
                                           CriterionResult]:
    """Criteria 2, 4 and 5 share one random-channel sweep."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    mosaics = {g: build_field_mosaic(*g) for g in SWEEP_GRID}
    for fm in mosaics.values():
        fm.color_index_matrix()  # warm the cache before threading

    tasks = []
    for i in range(n_channels):
        grid = SWEEP_GRID[i % len(SWEEP_GRID)]
        fm = mosaics[grid]
        d = int(rng.integers(2, 5))
        channel = wt.random_channel(rng, len(fm.points), d)
        dists = _sweep_distributions(rng, len(fm.colors), n_dists)
        tasks.append((fm, channel, dists))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda t: _sweep_channel(*t), tasks))
    else:
        rows = [_sweep_channel(*t) for t in tasks]

    elapsed = time.perf_counter() - start
    violations = sum(r["violations"] for r in rows)
    worst = min(r["worst_margin"] for r in rows)
    res2 = CriterionResult(
        2, "averaged-leakage-bound", violations == 0,
        {"channels": n_channels, "dists_per_channel": int(tasks[0][2].shape[0]),
         "violations": violations, "worst_margin": worst,
         "worst_margin_per_channel": [r["worst_margin"] for r in rows],
         "tolerance": TAU_NUM}, elapsed)

    max_diff = max(r["bound_diff"] for r in rows)
    res4 = CriterionResult(
        4, "bibd-closed-form-reduction", max_diff <= 1e-12,
        {"channels": n_channels, "max_abs_diff": max_diff,
         "tolerance": 1e-12}, 0.0)

    within_cap = [r for r in rows if r["joint_dim"] <= wt.JOINT_DIM_CAP]
    ind_fail = sum(0 if r["ind_holds"] else 1 for r in within_cap)
    worst_ind = min(r["ind_margin"] for r in within_cap)
    tr_dev = max(r["tr_dev"] for r in within_cap)
    res5 = CriterionResult(
        5, "joint-state-independence", ind_fail == 0 and tr_dev <= 1e-9,
        {"instances": len(within_cap), "violations": ind_fail,
         "worst_margin": worst_ind, "max_trace_out_dev": tr_dev,
         "tolerance": TAU_NUM}, 0.0)
    return res2, res4, res5


# ----------------------------------------------------------------------
# 3. Constant-channel identity
# ----------------------------------------------------------------------

def _gdd_parameter_sets(minimum: int = 20) -> list[designs.DesignParams]:
    sets = []
    seen = set()
    for (q, t, ell) in DESIGN_GRID:  # BIBD entries
        fm = build_field_mosaic(q, t, ell)
        sets.append(fm.params)
    for u in range(2, 5):
        for m in range(2, 6):
            v = u * m
            for k in range(2, 6):
                if k > v:
                    continue
                for lam1 in range(0, 4):
                    for lam2 in range(0, 4):
                        num = lam1 * (u - 1) + lam2 * (m - 1) * u
                        if num <= 0 or num % (k - 1):
                            continue
                        r = num // (k - 1)
                        if (v * r) % k:
                            continue
                        key = (u, m, k, lam1, lam2, r)
                        if key in seen:
                            continue
                        seen.add(key)
                        sets.append(designs.DesignParams(
                            "gdd", v=v, b=v * r // k, k=k, r=r,
                            u=u, m=m, lam1=lam1, lam2=lam2))
                        if len(sets) >= max(minimum, 24):
                            return sets
    return sets


def criterion_constant_channel(seed: int) -> CriterionResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    sets = _gdd_parameter_sets()
    max_dev = 0.0
    for params in sets:
        sigma = qm.random_density(rng, 3)
        channel = wt.constant_channel(params.v, sigma)
        if params.kind == "gdd":
            assignment = [p // params.u for p in range(params.v)]
            classes = designs.ClassMatrix.from_assignment(assignment)
        else:
            classes = None
        c = wt.leakage_bound(channel, params, classes)
        max_dev = max(max_dev, abs(c - 1.0))
    details = {"parameter_sets": len(sets), "max_abs_dev": max_dev,
               "tolerance": 1e-9}
    return _timed(3, "constant-channel-identity", max_dev <= 1e-9, details, start)


# ----------------------------------------------------------------------
# 6. Divergence properties
# ----------------------------------------------------------------------

def criterion_divergences(seed: int, pairs: int = 1000) -> CriterionResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    min_d = min_d2 = math.inf
    max_gap = -math.inf      # D - D2, must stay <= tol
    max_pinsker = -math.inf  # td^2 - 2 ln2 D, must stay <= tol
    max_self = 0.0
    for i in range(pairs):
        d = 2 + i % 3
        rho = qm.random_density(rng, d)
        sig = qm.random_density(rng, d)
        dval = qm.rel_entropy(rho, sig)
        d2val = qm.renyi2(rho, sig)
        td = qm.trace_distance(rho, sig)
        min_d = min(min_d, dval)
        min_d2 = min(min_d2, d2val)
        max_gap = max(max_gap, dval - d2val)
        max_pinsker = max(max_pinsker, td * td - 2.0 * qm.LN2 * dval)
        max_self = max(max_self, abs(qm.rel_entropy(rho, rho)),
                       abs(qm.renyi2(rho, rho)))
    passed = (min_d >= -TAU_NUM and min_d2 >= -TAU_NUM
              and max_gap <= TAU_NUM and max_pinsker <= TAU_NUM
              and max_self <= 1e-9)
    details = {"pairs": pairs, "min_d": min_d, "min_d2": min_d2,
               "max_d_minus_d2": max_gap, "max_pinsker_slack": max_pinsker,
               "max_self_distance": max_self, "tolerance": TAU_NUM}
    return _timed(6, "divergence-properties", passed, details, start)


# ----------------------------------------------------------------------
# 7. Randomized-inverse uniformity
# ----------------------------------------------------------------------

def criterion_inverse_uniformity(seed: int, draws: int = 10_000,
                                 n_pairs: int = 10) -> CriterionResult:
    start = time.perf_counter()
    fm = build_field_mosaic(2, 3, 2)  # block size k = 4
    rng = np.random.default_rng(seed)
    k = fm.params.k
    threshold = float(stats.chi2.ppf(1.0 - 1e-3, df=k - 1))
    max_stat = 0.0
    bad_roundtrips = 0
    for _ in range(n_pairs):
        s = fm.seeds[int(rng.integers(len(fm.seeds)))]
        color = fm.colors[int(rng.integers(len(fm.colors)))]
        block = fm.preimage_block(s, color)
        position = {x.index: i for i, x in enumerate(block)}
        counts = np.zeros(k, dtype=np.int64)
        for _ in range(draws):
            x = fm.sample_preimage(s, color, rng)
            if fm.color_of(s, x) != color:
                bad_roundtrips += 1
                continue
            counts[position[x.index]] += 1
        expected = draws / k
        max_stat = max(max_stat, float(((counts - expected) ** 2 / expected).sum()))
    passed = max_stat <= threshold and bad_roundtrips == 0
    details = {"pairs": n_pairs, "draws_per_pair": draws, "block_size": k,
               "max_chi2_stat": max_stat, "chi2_threshold": threshold,
               "roundtrip_failures": bad_roundtrips}
    return _timed(7, "randomized-inverse-uniformity", passed, details, start)


# ----------------------------------------------------------------------
# 8. Reliability separation
# ----------------------------------------------------------------------

def criterion_reliability(seed: int, n_channels: int = 20) -> CriterionResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    fm = build_field_mosaic(2, 2, 1)
    min_slack = math.inf
    for _ in range(n_channels):
        d = int(rng.integers(2, 5))
        channel = wt.random_channel(rng, len(fm.points), d)
        public = wt.pgm_public_code(channel)
        worst_pub = float(1.0 - wt.per_message_success(public, channel).min())
        for j in range(len(fm.seeds)):
            mod = wt.build_modular_code(public, fm, j)
            slack = worst_pub + 1e-9 - wt.avg_error(mod, channel)
            min_slack = min(min_slack, slack)

    exact_zero = True
    for (q, t, ell) in ((2, 2, 1), (2, 3, 2)):
        fm_o = build_field_mosaic(q, t, ell)
        channel = wt.orthogonal_channel(len(fm_o.points))
        public = wt.pgm_public_code(channel)
        for j in range(len(fm_o.seeds)):
            err = wt.avg_error(wt.build_modular_code(public, fm_o, j), channel)
            exact_zero = exact_zero and err == 0.0

    passed = min_slack >= 0.0 and exact_zero
    details = {"channels": n_channels, "min_slack": min_slack,
               "orthogonal_errors_exactly_zero": exact_zero}
    return _timed(8, "reliability-separation", passed, details, start)


# ----------------------------------------------------------------------
# 9. Leakage-search oracle (independent 2x2 closed-form grid search)
# ----------------------------------------------------------------------

def _entropy_from_trace_det(tr: np.ndarray, det: np.ndarray) -> np.ndarray:
    """Entropy of a 2x2 PSD matrix from trace and determinant; a code
    path with no eigensolver, used only as the oracle."""
    disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
    l1 = np.maximum((tr + disc) / 2.0, 0.0)
    l2 = np.maximum((tr - disc) / 2.0, 0.0)
    out = np.zeros_like(tr)
    for lam in (l1, l2):
        safe = np.where(lam > 0.0, lam, 1.0)
        out -= lam * np.log2(safe)
    return out


def simplex_grid_search(ens: wt.SeedBlockStates, step: float = 1e-3) -> float:
    """Brute-force maximum of the seed-averaged Holevo information over
    a regular simplex grid.  Supports 2 or 3 colors at output dimension
    2 (closed-form eigenvalues keep the oracle independent of LAPACK)."""
    if ens.dim != 2:
        raise ValueError("grid oracle supports output dimension 2 only")
    ticks = round(1.0 / step)
    n = ens.n_colors
    if n == 2:
        a0 = np.arange(ticks + 1) / ticks
        weights = np.stack([a0, 1.0 - a0])
    elif n == 3:
        ii, jj = np.meshgrid(np.arange(ticks + 1), np.arange(ticks + 1),
                             indexing="ij")
        mask = ii + jj <= ticks
        a0 = ii[mask] / ticks
        a1 = jj[mask] / ticks
        weights = np.stack([a0, a1, 1.0 - a0 - a1])
    else:
        raise ValueError("grid oracle supports 2 or 3 colors only")

    total = np.zeros(weights.shape[1])
    for s in range(ens.n_seeds):
        z00 = sum(weights[a] * ens.z[s, a, 0, 0].real for a in range(n))
        z11 = sum(weights[a] * ens.z[s, a, 1, 1].real for a in range(n))
        z01 = sum(weights[a] * ens.z[s, a, 0, 1] for a in range(n))
        det = z00 * z11 - np.abs(z01) ** 2
        h = _entropy_from_trace_det(z00 + z11, det)
        total += h - sum(weights[a] * ens.entropies[s, a] for a in range(n))
    return float((total / ens.n_seeds).max())


def criterion_search_oracle(seed: int, instances: int = 10) -> CriterionResult:
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    grids = [(2, 2, 1), (3, 2, 1)]  # 2 and 3 colors
    max_diff = 0.0
    for i in range(instances):
        fm = build_field_mosaic(*grids[i % 2])
        channel = wt.random_channel(rng, len(fm.points), 2)
        ens = wt.SeedBlockStates.build(fm, channel)
        found = wt.max_leakage_search(ens, iterations=2000, rng=rng,
                                      restarts=2, tol=1e-12)
        brute = simplex_grid_search(ens, step=1e-3)
        max_diff = max(max_diff, abs(found.value - brute))
    details = {"instances": instances, "max_abs_diff": max_diff,
               "tolerance": 1e-4}
    return _timed(9, "leakage-search-oracle", max_diff <= 1e-4, details, start)


# ----------------------------------------------------------------------
# Runner
# ----------------------------------------------------------------------

def run_all(seed: int, jobs: int = 1, n_channels: int = 100,
            n_dists: int = 100) -> list[CriterionResult]:
    res1 = criterion_design_identities()
    res2, res4, res5 = sweep_criteria(seed, n_channels=n_channels,
                                      n_dists=n_dists, jobs=jobs)
    res3 = criterion_constant_channel(seed)
    res6 = criterion_divergences(seed)
    res7 = criterion_inverse_uniformity(seed)
    res8 = criterion_reliability(seed)
    res9 = criterion_search_oracle(seed)
    return [res1, res2, res3, res4, res5, res6, res7, res8, res9]


def report_dict(results: list[CriterionResult], config: dict) -> dict:
    return {
        "tool": "mosaic-wiretap",
        "config": dict(sorted(config.items())),
        "criteria": [
            {"index": r.index, "name": r.name, "passed": r.passed,
             "details": r.details}
            for r in sorted(results, key=lambda r: r.index)
        ],
        "all_passed": all(r.passed for r in results),
    }
