"""Command-line front end: enumeration, sampling, ensemble checks, purity.

Every output file embeds (command, version, L, n, seed, threads, filter)
metadata and contains no timestamps, so identical invocations reproduce
byte-identical files regardless of thread count.

Exit codes: 0 success, 2 precondition violation, 3 failed acceptance
check in --check mode.
"""

from __future__ import annotations

import argparse
import os
import sys

import entpoly
from entpoly import ensembles, marginals, purity, spectra, stats
from entpoly.hypercube import EnumerationCapError, MAX_LENGTH

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_CHECK_FAILED = 3

_DEGENERATE_NOTE = (
    "note: L <= 2 is a degenerate regime for the polytope geometry; "
    "outputs are produced but large-L distribution claims do not apply"
)


def _default_threads() -> int:
    env = os.environ.get("ENTPOLY_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _meta(args, command: str, **extra) -> dict:
    meta = {
        "command": command,
        "version": entpoly.__version__,
        "L": getattr(args, "L", None),
        "n": getattr(args, "n", None),
        "seed": getattr(args, "seed", None),
        "threads": getattr(args, "threads", None),
        "filter": getattr(args, "filter", None),
    }
    meta.update(extra)
    return meta


def cmd_enumerate(args) -> int:
    if args.L < 1:
        print("error: L must be positive", file=sys.stderr)
        return EXIT_PRECONDITION
    reduction = {"auto": None, "on": True, "off": False}[args.symmetry]
    try:
        enum = spectra.critical_spectra_enumerate(args.L, symmetry_reduction=reduction)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.L <= 2:
        print(_DEGENERATE_NOTE)
    min_norm_sq = enum.min_accepted_norm_sq()
    print(f"L={enum.L} spectra={enum.total_spectra} "
          f"permutation_orbits={enum.permutation_orbits} "
          f"accepted_classes={len(enum.accepted_classes)}")
    print(f"subsets={enum.subsets_total} dependent={enum.dependent_weight} "
          f"reduced={enum.reduced}")
    if min_norm_sq is None:
        print("min_accepted_norm_sq=none (no algorithm-accepted spectra)")
    else:
        print(f"min_accepted_norm_sq={min_norm_sq} "
              f"min_accepted_norm={float(min_norm_sq) ** 0.5:.6f}")
    if args.out:
        spectra.save_spectra_db(args.out, enum, meta=_meta(args, "enumerate"))
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.n < 1 or args.L < 1 or args.L > MAX_LENGTH:
        print("error: require n >= 1 and 1 <= L <= 256", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.L <= 2:
        print(_DEGENERATE_NOTE)
    ds = spectra.distance_histogram(
        args.L,
        "sampled",
        n=args.n,
        seed=args.seed,
        filter=args.filter,
        workers=args.threads,
        method=args.method,
    )
    law = stats.GammaLaw(0.5, 2.0 * args.L)
    ks = stats.ks_distance(ds, law)
    mean, var = stats.moment_report(ds)
    print(f"L={args.L} n={args.n} seed={args.seed} filter={args.filter} "
          f"dependent={ds.meta['dependent']}")
    print(f"ks_vs_gamma(1/2,{2*args.L})={ks.statistic:.6f} "
          f"(noise floor ~{ks.noise_floor():.6f})")
    print(f"mean={mean:.8f} (gamma mean {law.mean:.8f}) variance={var:.3e}")
    if args.out:
        hist = stats.histogram(
            ds, bins=args.bins, transform="log" if args.log else "identity", law=law
        )
        meta = _meta(args, "sample", ks=repr(ks.statistic), mean=repr(mean),
                     dependent=ds.meta["dependent"], method=args.method,
                     transform="log" if args.log else "identity")
        stats.write_histogram_csv(args.out, hist, meta)
        print(f"wrote {args.out}")
    if args.samples_out:
        stats.write_samples_csv(args.samples_out, ds)
        print(f"wrote {args.samples_out}")
    if args.check is not None:
        if ks.statistic > args.check:
            print(f"CHECK FAILED: ks {ks.statistic:.6f} > {args.check}", file=sys.stderr)
            return EXIT_CHECK_FAILED
        print(f"check passed: ks {ks.statistic:.6f} <= {args.check}")
    return EXIT_OK


def cmd_wishart_check(args) -> int:
    if args.n < 1 or args.L < 1:
        print("error: require n >= 1 and L >= 1", file=sys.stderr)
        return EXIT_PRECONDITION
    L, n, seed = args.L, args.n, args.seed
    chi1 = stats.GammaLaw(0.5, 0.5)
    rows = []

    ratio = ensembles.gram_ratio_gaussian(L, n, seed)
    rows.append(("gram_ratio_vs_chi2_1",
                 stats.ks_distance(ratio, chi1).statistic, 0.01))
    bart = ensembles.bartlett_diag_squared(L, n, seed + 1)
    rows.append(("gram_ratio_vs_bartlett_two_sample",
                 stats.ks_two_sample(ratio, bart).statistic, 0.015))
    direct = ensembles.transformed_gram_ratio(L, n, seed + 2, path="direct")
    diff = ensembles.transformed_gram_ratio(L, n, seed + 3, path="difference")
    rows.append(("transformed_direct_vs_difference_two_sample",
                 stats.ks_two_sample(direct, diff).statistic, 0.01))
    rows.append(("transformed_scaled_vs_chi2_1",
                 stats.ks_distance(diff.values * L, chi1).statistic, 0.01))
    rows.append(("sigma_cholesky_R2_minus_1_over_L",
                 abs(ensembles.sigma_cholesky_check(L) - 1.0 / L), 1e-12))

    failed = [name for name, value, thr in rows if value > thr]
    for name, value, thr in rows:
        status = "ok" if value <= thr else "FAIL"
        print(f"{name}: {value:.3e} (threshold {thr:g}) {status}")
    if args.out:
        import csv as _csv

        with open(args.out, "w", newline="") as fh:
            stats.write_metadata_header(fh, _meta(args, "wishart-check"))
            writer = _csv.writer(fh)
            writer.writerow(["check", "value", "threshold", "pass"])
            for name, value, thr in rows:
                writer.writerow([name, repr(value), repr(thr), value <= thr])
        print(f"wrote {args.out}")
    if args.check and failed:
        print(f"CHECK FAILED: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_purity(args) -> int:
    dbs = {}
    for path in args.db or []:
        loaded = spectra.load_spectra_db(path)
        dbs[loaded["L"]] = loaded
    missing = [L for L in dbs if L > args.Lmax]
    if missing:
        print(f"note: databases for L={missing} above --Lmax are unused")
    points = purity.purity_table(range(1, args.Lmax + 1), dbs)
    for pt in points:
        allcol = "" if pt.p_all is None else f" p_all={pt.p_all:.6f}"
        gencol = "degenerate" if pt.p_generic is None else f"{pt.p_generic:.6f}"
        print(f"L={pt.L} p_generic={gencol}{allcol}")
    if args.out:
        purity.write_purity_csv(args.out, points, _meta(args, "purity", Lmax=args.Lmax))
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_spectra(args) -> int:
    try:
        state = marginals.load_state_file(args.statefile)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    lam = marginals.local_spectra(state)
    entropy = marginals.linear_entropy(state)
    member = marginals.in_delta_H(lam)
    print(f"L={state.L}")
    print("local_spectra=" + ",".join(f"{x:.12f}" for x in lam))
    print(f"linear_entropy={entropy:.12f}")
    print(f"in_delta_H={member}")
    if args.out:
        import csv as _csv

        with open(args.out, "w", newline="") as fh:
            stats.write_metadata_header(
                fh, _meta(args, "spectra", L=state.L, statefile=os.path.basename(args.statefile))
            )
            writer = _csv.writer(fh)
            writer.writerow(["qubit", "lambda"])
            for i, x in enumerate(lam, start=1):
                writer.writerow([i, repr(float(x))])
            writer.writerow(["linear_entropy", repr(float(entropy))])
            writer.writerow(["in_delta_H", member])
        print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entpoly",
        description="Critical local spectra of entanglement polytopes: "
        "enumeration, distance sampling, ensemble checks, purity tables.",
    )
    parser.add_argument("--version", action="version", version=entpoly.__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="exhaustively enumerate critical spectra")
    p.add_argument("L", type=int)
    p.add_argument("--symmetry", choices=["auto", "on", "off"], default="auto",
                   help="signed-permutation orbit reduction (auto: on for L >= 5)")
    p.add_argument("--out", help="spectra database JSON path")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sample", help="Monte Carlo distance sampling and gamma fit")
    p.add_argument("L", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--filter", choices=["all-independent", "accepted-only"],
                   default="all-independent")
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--log", action="store_true", help="histogram on the ln axis")
    p.add_argument("--method", choices=["solve", "logdet"], default="solve")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--out", help="histogram CSV path")
    p.add_argument("--samples-out", help="raw sample CSV path")
    p.add_argument("--check", type=float, default=None, metavar="KS",
                   help="exit 3 unless KS distance <= this bound")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("wishart-check", help="Gaussian/Wishart distribution checks")
    p.add_argument("L", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="report CSV path")
    p.add_argument("--check", action="store_true", help="exit 3 on any failed check")
    p.set_defaults(func=cmd_wishart_check)

    p = sub.add_parser("purity", help="purity requirements table")
    p.add_argument("--Lmax", type=int, default=20)
    p.add_argument("--db", action="append", help="spectra database JSON (repeatable)")
    p.add_argument("--out", help="table CSV path")
    p.set_defaults(func=cmd_purity)

    p = sub.add_parser("spectra", help="local spectra of a state file")
    p.add_argument("statefile")
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_spectra)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) and args.command == "sample" and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_PRECONDITION
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
