"""Command-line front end.

Exit codes: 0 success, 2 usage or config error, 3 numerical failure.
Diagnostics go to stderr; stdout carries data only.  All CSV output uses
17 significant digits so values round-trip exactly, which makes
re-running a manifest byte-reproducible regardless of --threads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__, ensembles, experiments
from .dense_spectra import EigenSolveError
from .indefinite_core import AmbiguousClassificationError
from .nevanlinna import GzntSearchError, N1Function, gznt_newton, measure_from_json

USAGE_EXIT = 2
NUMERICAL_EXIT = 3

FIGURE_SWEEP = (50, 100, 200, 400, 800, 1600)


class ConfigError(Exception):
    """Malformed configuration or flags."""


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _write_manifest(out_dir, argv, config, seed, outputs, extra=None):
    doc = {
        "command": "pontryagin " + " ".join(argv),
        "config": config,
        "master_seed": seed,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": sorted(outputs),
    }
    if extra:
        doc.update(extra)
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_report(out_dir, name, report_dict):
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        json.dump(report_dict, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return name


def _load_config(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    if "trials" not in doc:
        raise ConfigError("config is missing field 'trials'")
    trials = doc.pop("trials")
    if not isinstance(trials, int) or trials < 1:
        raise ConfigError("field 'trials' must be a positive integer")
    try:
        spec = ensembles.spec_from_json(doc)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return spec, trials


def _spec_from_flags(args):
    try:
        return ensembles.EnsembleSpec(
            model=args.model.replace("-", "_"),
            N=args.N if hasattr(args, "N") else max(args.sizes),
            s=args.s,
            dist=ensembles.EntryDistribution(args.dist),
            field="real",
            seed=args.seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _require_continuous(spec):
    if not spec.dist.continuous:
        raise ConfigError("continuity hypothesis violated: rademacher entries are discrete")


def _spectrum_rows(record):
    """Full spectrum of X for one record: real part, imag part pairs."""
    values = [complex(z) for z in record.zeta]
    if record.case == "Case1":
        values += [record.beta, np.conj(record.beta)]
    else:
        values += [record.beta] * record.multiplicity
    return sorted(values, key=lambda z: (z.real, z.imag))


def cmd_simulate(args, argv):
    spec, trials = _load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    records = experiments.run_trials(spec, trials, threads=args.threads)
    eig_rows = []
    beta_rows = []
    for rec in records:
        if not rec.ok:
            beta_rows.append([str(rec.trial), str(spec.N), "nan", "nan", "error", "0"])
            continue
        for idx, z in enumerate(_spectrum_rows(rec)):
            eig_rows.append([str(rec.trial), str(idx), _fmt(z.real), _fmt(z.imag)])
        beta_rows.append(
            [
                str(rec.trial),
                str(spec.N),
                _fmt(rec.beta.real),
                _fmt(rec.beta.imag),
                rec.case,
                str(rec.multiplicity),
            ]
        )
    _write_csv(os.path.join(args.out, "eigenvalues.csv"), ["trial", "index", "re", "im"], eig_rows)
    _write_csv(
        os.path.join(args.out, "beta.csv"),
        ["trial", "N", "re", "im", "case", "multiplicity"],
        beta_rows,
    )
    failed = sum(not r.ok for r in records)
    _write_manifest(
        args.out,
        argv,
        json.loads(ensembles.spec_to_json(spec)) | {"trials": trials},
        spec.seed,
        ["eigenvalues.csv", "beta.csv"],
        extra={"failed_trials": failed, "a_sign_convention": "a = -x00/sqrt(N)"},
    )
    return 0


def cmd_gznt(args, argv):
    text = args.measure
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        measure = measure_from_json(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    q = N1Function(args.a, args.s2, measure)
    g = gznt_newton(q)
    limit = "-" if g.limit_value is None else _fmt(g.limit_value)
    print(f"{_fmt(g.point.real)} {_fmt(g.point.imag)} {g.kind} {limit}")
    return 0


def cmd_convergence(args, argv):
    spec = _spec_from_flags(args)
    report = experiments.convergence_in_probability(
        spec, args.sizes, args.eps, args.trials, threads=args.threads
    )
    os.makedirs(args.out, exist_ok=True)
    rows = [
        [str(N), _fmt(frac)]
        for N, frac in zip(report.sizes, report.fraction_within)
    ]
    _write_csv(os.path.join(args.out, "convergence.csv"), ["N", "fraction_within"], rows)
    name = _write_report(args.out, "report.json", report.to_dict() | {"stochastic": True})
    _write_manifest(
        args.out, argv, json.loads(ensembles.spec_to_json(spec)), spec.seed,
        ["convergence.csv", name],
    )
    return 0


def cmd_interlace(args, argv):
    spec = _spec_from_flags(args)
    _require_continuous(spec)
    records = experiments.run_trials(spec, args.trials, threads=args.threads)
    report = experiments.aggregate_interlacing(records)
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for rec in records:
        inter = ""
        if rec.ok and rec.case == "Case1":
            inter = "1" if experiments.interlacing_check(rec) else "0"
        rows.append([str(rec.trial), rec.case or "error", inter])
    _write_csv(os.path.join(args.out, "interlace.csv"), ["trial", "case", "interlaced"], rows)
    name = _write_report(args.out, "report.json", report.to_dict() | {"stochastic": True})
    _write_manifest(
        args.out, argv, json.loads(ensembles.spec_to_json(spec)), spec.seed,
        ["interlace.csv", name],
    )
    return 0


def cmd_esd(args, argv):
    spec = _spec_from_flags(args)
    _require_continuous(spec)
    from .nevanlinna import esd as esd_of

    block = ensembles.draw_block(spec, 0)
    measure = esd_of(block.C)
    cdf, target_name = experiments.limit_cdf(spec)
    lo, hi = float(measure.atoms[0]), float(measure.atoms[-1])
    grid = np.linspace(lo - 0.5, hi + 0.5, 10_000)
    distance = experiments.ks_distance(measure.atoms, cdf, grid=grid)
    report = experiments.KSReport(spec.N, distance, target_name)
    os.makedirs(args.out, exist_ok=True)
    rows = [[str(i), _fmt(t)] for i, t in enumerate(measure.atoms)]
    _write_csv(os.path.join(args.out, "esd.csv"), ["index", "eigenvalue"], rows)
    name = _write_report(args.out, "report.json", report.to_dict() | {"stochastic": True})
    _write_manifest(
        args.out, argv, json.loads(ensembles.spec_to_json(spec)), spec.seed,
        ["esd.csv", name],
    )
    return 0


def cmd_bq(args, argv):
    spec = _spec_from_flags(args)
    try:
        z = complex(args.z)
    except ValueError as exc:
        raise ConfigError(f"--z must be a complex literal like 2j: {exc}") from exc
    report = experiments.resolvent_concentration(
        spec, z, args.sizes, args.trials, threads=args.threads
    )
    os.makedirs(args.out, exist_ok=True)
    rows = [
        [str(N), _fmt(m.real), _fmt(m.imag), _fmt(d)]
        for N, m, d in zip(report.sizes, report.mean, report.mean_abs_dev)
    ]
    _write_csv(
        os.path.join(args.out, "bq.csv"),
        ["N", "mean_re", "mean_im", "mean_abs_dev"],
        rows,
    )
    name = _write_report(args.out, "report.json", report.to_dict() | {"stochastic": True})
    _write_manifest(
        args.out, argv, json.loads(ensembles.spec_to_json(spec)), spec.seed,
        ["bq.csv", name],
    )
    return 0


def cmd_figure(args, argv):
    os.makedirs(args.out, exist_ok=True)
    if args.name == "spectrum":
        spec = _spec_from_flags(args)
        records = experiments.run_trials(spec, 1, threads=1)
        rows = [
            [str(i), _fmt(z.real), _fmt(z.imag)]
            for i, z in enumerate(_spectrum_rows(records[0]))
        ]
        _write_csv(os.path.join(args.out, "spectrum.csv"), ["index", "re", "im"], rows)
        outputs = ["spectrum.csv"]
        config = json.loads(ensembles.spec_to_json(spec))
        seed = spec.seed
    elif args.name == "beta-parts":
        rows = []
        for N in args.sizes:
            spec = ensembles.EnsembleSpec(
                "signed_wigner", N, args.s, ensembles.EntryDistribution(args.dist),
                seed=args.seed,
            )
            rec = experiments.run_trials(spec, 1, threads=1)[0]
            rows.append([str(N), _fmt(rec.beta.real), _fmt(rec.beta.imag)])
        _write_csv(os.path.join(args.out, "beta_parts.csv"), ["N", "re_beta", "im_beta"], rows)
        outputs = ["beta_parts.csv"]
        config = {"model": "signed_wigner", "sizes": list(args.sizes), "s": args.s}
        seed = args.seed
    else:  # diag-imag
        s = float(np.sqrt(1.0 / 3.0))
        rows = []
        for N in args.sizes:
            spec = ensembles.EnsembleSpec(
                "diagonal_poly", N, s, ensembles.EntryDistribution(args.dist),
                seed=args.seed,
            )
            rec = experiments.run_trials(spec, 1, threads=1)[0]
            rows.append([str(N), _fmt(rec.beta.imag)])
        _write_csv(os.path.join(args.out, "diag_imag.csv"), ["N", "im_beta"], rows)
        outputs = ["diag_imag.csv"]
        config = {"model": "diagonal_poly", "sizes": list(args.sizes), "s2": 1.0 / 3.0}
        seed = args.seed
    _write_manifest(args.out, argv, config, seed, outputs)
    return 0


def _parse_sizes(text):
    try:
        sizes = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers: {exc}")
    if not sizes or any(n < 1 for n in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def _default_threads():
    env = os.environ.get("PONTRYAGIN_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _add_model_flags(p, with_N=False, with_sizes=None):
    p.add_argument("--model", required=True,
                   choices=["signed-wigner", "signed_wigner", "generic",
                            "diagonal-poly", "diagonal_poly"])
    if with_N:
        p.add_argument("--N", type=int, required=True)
    if with_sizes is not None:
        p.add_argument("--sizes", type=_parse_sizes, default=with_sizes)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--dist", default="gaussian",
                   choices=list(ensembles.EntryDistribution.KINDS))
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pontryagin",
        description="Simulate block random matrices selfadjoint in an "
        "indefinite inner product and track their nonpositive-type eigenvalue.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw an ensemble and emit spectra as CSV")
    p.add_argument("--config", required=True, help="JSON config: ensemble spec plus trials")
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gznt", help="locate the generalized zero of a - z + s2*m(z)")
    p.add_argument("--measure", required=True, help="measure JSON document or file path")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--s2", type=float, default=1.0)
    p.set_defaults(func=cmd_gznt)

    p = sub.add_parser("convergence", help="fraction of trials with beta_N near beta_0")
    _add_model_flags(p, with_sizes=(100, 400))
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("interlace", help="strict interlacing statistics over trials")
    _add_model_flags(p, with_N=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_interlace)

    p = sub.add_parser("esd", help="empirical block spectrum against its limit law")
    _add_model_flags(p, with_N=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_esd)

    p = sub.add_parser("bq", help="concentration of the border resolvent form")
    _add_model_flags(p, with_sizes=(250, 1000))
    p.add_argument("--z", required=True, help="complex evaluation point, e.g. 2j")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_bq)

    p = sub.add_parser("figure", help="emit the data behind the standard figures")
    p.add_argument("name", choices=["spectrum", "beta-parts", "diag-imag"])
    p.add_argument("--model", default="signed-wigner",
                   choices=["signed-wigner", "signed_wigner", "generic",
                            "diagonal-poly", "diagonal_poly"])
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--sizes", type=_parse_sizes, default=FIGURE_SWEEP)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--dist", default="gaussian",
                   choices=list(ensembles.EntryDistribution.KINDS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_figure)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (
        AmbiguousClassificationError,
        GzntSearchError,
        EigenSolveError,
        experiments.ExperimentError,
        np.linalg.LinAlgError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT


if __name__ == "__main__":
    sys.exit(main())
