"""Batch command-line frontend.

Subcommands: mosaic build|verify, bound, leakage, corollary3, simulate,
rates, check.  Exit codes: 0 success, 1 usage or I/O error, 2
verification failure or bound violation.

Reports are JSON with sorted keys and contain no wall-clock data, so a
rerun with the same configuration and rng seed is byte-identical;
timings go to stderr.  Output files are written to a temp file and
atomically renamed, so failures leave no partial outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, acceptance, derand, designs
from . import quantum as qm
from . import wiretap as wt
from .field_mosaic import FieldMosaic, build_field_mosaic

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; the contract reserves 2 for
    verification failures, so usage errors are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + f".tmp.{os.getpid()}")
    try:
        tmp.write_text(text)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()


def _report_doc(command: str, config: dict, results: dict) -> dict:
    return {
        "tool": "mosaic-wiretap",
        "version": __version__,
        "command": command,
        "config": config,
        "results": results,
    }


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


# ----------------------------------------------------------------------
# Input specs
# ----------------------------------------------------------------------

def _load_channel(spec: str, expected_n: int | None) -> wt.CqChannel:
    """A channel file path, or inline `random:<d>:<seed>` /
    `orthogonal[:<d>]` (inline forms need a known alphabet size)."""
    if spec.startswith("random:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("random channel spec must be random:<dim>:<seed>")
        if expected_n is None:
            raise ValueError("inline channel specs need a mosaic to fix the alphabet")
        d, seed = int(parts[1]), int(parts[2])
        return wt.random_channel(np.random.default_rng(seed), expected_n, d)
    if spec == "orthogonal" or spec.startswith("orthogonal:"):
        if expected_n is None:
            raise ValueError("inline channel specs need a mosaic to fix the alphabet")
        d = int(spec.split(":")[1]) if ":" in spec else expected_n
        return wt.orthogonal_channel(expected_n, d)
    channel = wt.load_channel(spec)
    if expected_n is not None and channel.n != expected_n:
        raise ValueError(f"channel alphabet size {channel.n} does not match "
                         f"the mosaic point count {expected_n}")
    return channel


def _parse_dists(spec: str, colors) -> list[np.ndarray]:
    n = len(colors)
    if spec == "uniform":
        return [np.full(n, 1.0 / n)]
    if spec.startswith("point:"):
        want = spec[len("point:"):]
        labels = [c.label() if hasattr(c, "label") else str(c) for c in colors]
        if want in labels:
            idx = labels.index(want)
        else:
            idx = int(want)
            if not 0 <= idx < n:
                raise ValueError(f"point distribution index {idx} out of range")
        p = np.zeros(n)
        p[idx] = 1.0
        return [p]
    if spec.startswith("file:"):
        data = json.loads(Path(spec[len("file:"):]).read_text())
        rows = data if isinstance(data[0], list) else [data]
        out = []
        for row in rows:
            p = np.asarray(row, dtype=float)
            if p.shape != (n,) or p.min() < 0 or abs(p.sum() - 1.0) > 1e-9:
                raise ValueError("distribution file entries must be length-|A| "
                                 "probability vectors")
            out.append(p)
        return out
    if spec.startswith("random:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("random distribution spec must be random:<seed>:<count>")
        rng = np.random.default_rng(int(parts[1]))
        count = int(parts[2])
        if count < 1:
            raise ValueError("distribution count must be >= 1")
        return [rng.dirichlet(np.ones(n)) for _ in range(count)]
    raise ValueError(f"unknown distribution spec {spec!r}")


def _field_mosaic_from_args(args) -> FieldMosaic:
    if args.q is None or args.t is None or args.ell is None:
        raise ValueError("--q, --t and --ell are required (or --mosaic-in)")
    return build_field_mosaic(args.q, args.t, args.ell)


def _classes_from_file(path: str | None) -> designs.ClassMatrix | None:
    if path is None:
        return None
    data = json.loads(Path(path).read_text())
    return designs.ClassMatrix.from_assignment(data)


def _mosaic_and_params(args):
    """The (mosaic, params, classes) triple from either --q/--t/--ell or
    a mosaic file.  File-based mosaics must verify and classify into one
    parameter tuple; a failure exits with the verification code."""
    classes = _classes_from_file(getattr(args, "classes", None))
    if getattr(args, "mosaic_in", None):
        mos = designs.parse_mosaic(Path(args.mosaic_in).read_text())
        report = designs.verify_mosaic(mos, classes)
        if not report.is_mosaic:
            raise VerificationFailure("input file is not a mosaic: "
                                      + "; ".join(report.problems))
        tuples = {None if p is None else p for p in report.member_params.values()}
        if None in tuples or len(tuples) != 1:
            raise VerificationFailure(
                "mosaic members do not classify into a single design "
                "parameter tuple; cannot apply the bound")
        return mos, next(iter(tuples)), classes
    fm = _field_mosaic_from_args(args)
    return fm, fm.params, None


class VerificationFailure(Exception):
    """Raised when an input fails design verification (exit code 2)."""


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def cmd_mosaic_build(args) -> int:
    fm = _field_mosaic_from_args(args)
    mos = fm.to_mosaic()
    report = designs.verify_mosaic(mos)
    if not report.is_mosaic:
        raise VerificationFailure("constructed mosaic failed self-verification")
    text = designs.format_mosaic(mos)
    if args.out:
        atomic_write_text(args.out, text)
        doc = _report_doc("mosaic build",
                          {"q": args.q, "t": args.t, "ell": args.ell,
                           "out": args.out},
                          {"summary": report.summary(),
                           "params": fm.params.as_dict(),
                           "seed_metrics": fm.seed_metrics()})
        _emit(doc, None)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_mosaic_verify(args) -> int:
    text = Path(args.infile).read_text()
    classes = _classes_from_file(args.classes)
    if designs.is_mosaic_text(text):
        mos = designs.parse_mosaic(text)
        report = designs.verify_mosaic(mos, classes)
        members = {str(c): (None if report.member_params[c] is None
                            else report.member_params[c].as_dict())
                   for c in mos.colors}
        doc = _report_doc("mosaic verify", {"infile": args.infile},
                          {"is_mosaic": report.is_mosaic,
                           "summary": report.summary(),
                           "problems": list(report.problems),
                           "members": members})
        _emit(doc, args.out)
        return EXIT_OK if report.is_mosaic else EXIT_VERIFY
    inc = designs.parse_incidence(text)
    params = designs.classify(inc, classes)
    doc = _report_doc("mosaic verify", {"infile": args.infile},
                      {"is_mosaic": False,
                       "classification": None if params is None else params.as_dict()})
    _emit(doc, args.out)
    return EXIT_OK if params is not None else EXIT_VERIFY


def cmd_bound(args) -> int:
    mos, params, classes = _mosaic_and_params(args)
    channel = _load_channel(args.channel, len(mos.points))
    bound = wt.leakage_bound(channel, params, classes)
    sigma = wt.average_output_state(channel)
    doc = _report_doc("bound",
                      {"q": args.q, "t": args.t, "ell": args.ell,
                       "mosaic_in": args.mosaic_in, "channel": args.channel},
                      {"bound": bound,
                       "log2_bound": math.log2(bound) if bound > 0 else None,
                       "params": params.as_dict(),
                       "channel_inputs": channel.n,
                       "output_dim": channel.dim,
                       "avg_output_entropy": qm.von_neumann_entropy(sigma)})
    _emit(doc, args.out)
    return EXIT_OK


def cmd_leakage(args) -> int:
    mos, params, classes = _mosaic_and_params(args)
    channel = _load_channel(args.channel, len(mos.points))
    ens = wt.SeedBlockStates.build(mos, channel)
    bound = wt.leakage_bound(channel, params, classes)
    independence = wt.independence_check(ens, bound, tol=args.tol)
    dists = _parse_dists(args.dist, ens.colors)
    tol = args.tol
    reports = [wt.leakage_report(ens, p, bound, independence) for p in dists]
    worst = min(reports, key=lambda r: r.margin)
    violations = sum(1 for r in reports if r.margin < -tol)
    doc = _report_doc("leakage",
                      {"q": args.q, "t": args.t, "ell": args.ell,
                       "mosaic_in": args.mosaic_in, "channel": args.channel,
                       "dist": args.dist, "tol": tol},
                      {"bound": bound,
                       "dist_count": len(reports),
                       "violations": violations,
                       "worst_margin": worst.margin,
                       "reports": [r.as_dict() for r in reports]})
    _emit(doc, args.out)
    if args.csv:
        atomic_write_text(args.csv, wt.leakage_csv(ens, worst))
    if args.plot:
        from . import plots
        stem = Path(args.csv or args.out or "leakage")
        plots.save_leakage_figure(stem.with_suffix(".leakage.png"),
                                  worst.per_seed_chi, bound)
        if len(reports) > 1:
            plots.save_margin_figure(stem.with_suffix(".margins.png"),
                                     [r.margin for r in reports])
    return EXIT_VERIFY if violations else EXIT_OK


def cmd_corollary3(args) -> int:
    mos, params, classes = _mosaic_and_params(args)
    channel = _load_channel(args.channel, len(mos.points))
    ens = wt.SeedBlockStates.build(mos, channel)
    bound = wt.leakage_bound(channel, params, classes)
    check = wt.independence_check(ens, bound, tol=args.tol)
    tr_dev = float(np.abs(wt.joint_trace_out_message_seed(ens)
                          - channel.states.mean(axis=0)).max())
    doc = _report_doc("corollary3",
                      {"q": args.q, "t": args.t, "ell": args.ell,
                       "mosaic_in": args.mosaic_in, "channel": args.channel,
                       "tol": args.tol},
                      {**check, "trace_out_dev": tr_dev,
                       "joint_dim": ens.n_colors * ens.n_seeds * ens.dim})
    _emit(doc, args.out)
    return EXIT_OK if check["holds"] else EXIT_VERIFY


def cmd_simulate(args) -> int:
    mos, params, classes = _mosaic_and_params(args)
    channel = _load_channel(args.channel, len(mos.points))
    public = wt.pgm_public_code(channel)
    public_worst = float(1.0 - wt.per_message_success(public, channel).min())
    family = wt.modular_family(public, mos)
    rows = []
    for j, s in enumerate(family.seeds):
        code = family.codes[s]
        rows.append({
            "seed_index": j,
            "seed": s.label() if hasattr(s, "label") else str(s),
            "avg_error": wt.avg_error(code, channel),
            "max_error": wt.max_error(code, channel),
        })
    results = {
        "public_worst_codeword_error": public_worst,
        "per_seed": rows,
        "worst_avg_error": max(r["avg_error"] for r in rows),
    }
    if args.slots:
        seed_channel = wt.orthogonal_channel(len(family.seeds))
        seed_code = wt.Code(messages=family.seeds,
                            alphabet=seed_channel.labels,
                            encoder=np.eye(len(family.seeds)),
                            decoder=wt.pgm_decoder(seed_channel))
        composite = derand.compose(seed_code, family, args.slots)
        prod = derand.product_channel(seed_channel, channel, args.slots)
        rate = derand.rate_report(mos, n_slots=args.slots) \
            if isinstance(mos, FieldMosaic) else None
        results["composite"] = {
            "slots": args.slots,
            "avg_error": wt.avg_error(composite.code, prod),
            "max_error": wt.max_error(composite.code, prod),
            "rate_report": None if rate is None else rate.as_dict(),
        }
    doc = _report_doc("simulate",
                      {"q": args.q, "t": args.t, "ell": args.ell,
                       "mosaic_in": args.mosaic_in, "channel": args.channel,
                       "slots": args.slots},
                      results)
    _emit(doc, args.out)
    if args.csv:
        import csv as _csv
        import io
        buf = io.StringIO()
        writer = _csv.writer(buf, lineterminator="\n")
        writer.writerow(["seed_index", "seed", "avg_error", "max_error"])
        for r in rows:
            writer.writerow([r["seed_index"], r["seed"],
                             repr(r["avg_error"]), repr(r["max_error"])])
        atomic_write_text(args.csv, buf.getvalue())
    if args.plot:
        from . import plots
        stem = Path(args.csv or args.out or "simulate")
        plots.save_error_figure(stem.with_suffix(".errors.png"),
                                [r["seed"] for r in rows],
                                [r["avg_error"] for r in rows],
                                [r["max_error"] for r in rows])
    return EXIT_OK


def cmd_rates(args) -> int:
    fm = _field_mosaic_from_args(args)
    if args.N is not None:
        n_slots = args.N
    elif args.pe is not None and args.eps_leak is not None:
        n_slots = derand.choose_block_count(args.pe, args.eps_leak)
    else:
        raise ValueError("give --N, or both --pe and --eps-leak to derive it")
    report = derand.rate_report(fm, n_slots=n_slots, n=args.n, mu=args.mu)
    doc = _report_doc("rates",
                      {"q": args.q, "t": args.t, "ell": args.ell,
                       "n": args.n, "N": args.N, "pe": args.pe,
                       "eps_leak": args.eps_leak, "mu": args.mu},
                      report.as_dict())
    _emit(doc, args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    t0 = time.perf_counter()
    results = acceptance.run_all(args.rng_seed, jobs=args.jobs,
                                 n_channels=args.channels, n_dists=args.dists)
    for r in results:
        print(r.line())
        print(f"[mosaic-wiretap] criterion {r.index} took {r.seconds:.2f}s",
              file=sys.stderr)
    config = {"rng_seed": args.rng_seed, "jobs": args.jobs,
              "channels": args.channels, "dists": args.dists}
    doc = acceptance.report_dict(results, config)
    doc["tool"] = "mosaic-wiretap"
    doc["version"] = __version__
    if args.out:
        atomic_write_text(args.out, json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    if args.plot:
        from . import plots
        margins = next(r for r in results if r.index == 2) \
            .details["worst_margin_per_channel"]
        stem = Path(args.out or "check")
        plots.save_margin_figure(stem.with_suffix(".margins.png"), margins)
    print(f"[mosaic-wiretap] check took {time.perf_counter() - t0:.2f}s",
          file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------

def _positive_float(text: str) -> float:
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return val


def _add_mosaic_args(p, with_file: bool = True):
    p.add_argument("--q", type=int, help="prime field characteristic")
    p.add_argument("--t", type=int, help="extension degree")
    p.add_argument("--ell", type=int, help="masking dimension (1 <= ell < t)")
    if with_file:
        p.add_argument("--mosaic-in", help="mosaic file instead of --q/--t/--ell")
        p.add_argument("--classes", help="JSON point-class assignment "
                                         "(for GDD mosaics)")


def _add_common_out(p):
    p.add_argument("--out", help="write the JSON report here (default stdout)")


def build_parser() -> _Parser:
    parser = _Parser(prog="mosaic-wiretap",
                     description="Mosaics of designs as wiretap security "
                                 "functions, with leakage-bound verification.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    mosaic = sub.add_parser("mosaic", help="build or verify mosaic files")
    mosaic_sub = mosaic.add_subparsers(dest="mosaic_command", required=True)

    mb = mosaic_sub.add_parser("build", help="construct a field mosaic file")
    _add_mosaic_args(mb, with_file=False)
    mb.add_argument("--out", help="mosaic file path (default: stdout)")
    mb.set_defaults(func=cmd_mosaic_build)

    mv = mosaic_sub.add_parser("verify", help="verify and classify a mosaic "
                                              "or incidence file")
    mv.add_argument("--in", dest="infile", required=True)
    mv.add_argument("--classes", help="JSON point-class assignment")
    _add_common_out(mv)
    mv.set_defaults(func=cmd_mosaic_verify)

    bd = sub.add_parser("bound", help="evaluate the leakage bound C")
    _add_mosaic_args(bd)
    bd.add_argument("--channel", required=True,
                    help="channel file, random:<d>:<seed>, or orthogonal[:<d>]")
    _add_common_out(bd)
    bd.set_defaults(func=cmd_bound)

    lk = sub.add_parser("leakage", help="seed-averaged Holevo leakage vs the bound")
    _add_mosaic_args(lk)
    lk.add_argument("--channel", required=True)
    lk.add_argument("--dist", default="uniform",
                    help="uniform | point:<color> | file:<path> | random:<seed>:<count>")
    lk.add_argument("--tol", type=_positive_float, default=qm.TAU_NUM)
    lk.add_argument("--csv", help="write per-(seed,color) rows here")
    lk.add_argument("--plot", action="store_true",
                    help="render figures next to the CSV/report")
    _add_common_out(lk)
    lk.set_defaults(func=cmd_leakage)

    c3 = sub.add_parser("corollary3", help="joint-state independence bound")
    _add_mosaic_args(c3)
    c3.add_argument("--channel", required=True)
    c3.add_argument("--tol", type=_positive_float, default=qm.TAU_NUM)
    _add_common_out(c3)
    c3.set_defaults(func=cmd_corollary3)

    sim = sub.add_parser("simulate", help="modular-code decoding errors "
                                          "(PGM public code)")
    _add_mosaic_args(sim)
    sim.add_argument("--channel", required=True,
                     help="the legitimate receiver's channel")
    sim.add_argument("--slots", type=int, default=0,
                     help="also build the N-slot seed-reuse composite")
    sim.add_argument("--csv", help="write per-seed error rows here")
    sim.add_argument("--plot", action="store_true")
    _add_common_out(sim)
    sim.set_defaults(func=cmd_simulate)

    rt = sub.add_parser("rates", help="rate and seed-cost accounting")
    _add_mosaic_args(rt, with_file=False)
    rt.add_argument("--n", type=int, default=1, help="channel uses per slot")
    rt.add_argument("--N", type=int, help="slots sharing one seed")
    rt.add_argument("--pe", type=float, help="public decoding error")
    rt.add_argument("--eps-leak", type=float, help="per-message leakage target")
    rt.add_argument("--mu", type=int, default=1, help="seed codeword length")
    _add_common_out(rt)
    rt.set_defaults(func=cmd_rates)

    ck = sub.add_parser("check", help="run the full property suite")
    ck.add_argument("--rng-seed", type=int, default=0)
    ck.add_argument("--jobs", type=int,
                    default=int(os.environ.get("MOSAIC_WIRETAP_JOBS", "1")))
    ck.add_argument("--channels", type=int, default=100,
                    help="random channels in the sweep")
    ck.add_argument("--dists", type=int, default=100,
                    help="distributions per channel")
    ck.add_argument("--plot", action="store_true")
    _add_common_out(ck)
    ck.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = args.func(args)
    except VerificationFailure as exc:
        print(f"mosaic-wiretap: verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, OSError, json.JSONDecodeError, ZeroDivisionError) as exc:
        print(f"mosaic-wiretap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command != "check":
        print(f"[mosaic-wiretap] {args.command} took "
              f"{time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
