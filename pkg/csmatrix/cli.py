import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from csmatrix import config
from csmatrix.builder import FamilyCatalog, build_measurement_matrix, enumerate_catalog
from csmatrix.constructions import Construction, block_grid_of, build_additive, build_latin, build_rs_latin
from csmatrix.data import SUITES
from csmatrix.errors import CsMatrixError
from csmatrix.field import field_new
from csmatrix.metrics import bounds, coherence, girth, rip_order, theorem2_upper
from csmatrix.recovery import (
    binarize_to_real,
    gaussian_matrix,
    run_comparison,
    run_experiment,
    to_csv,
    write_csv,
)
from csmatrix.sparse import read_alist, write_alist

logger = logging.getLogger(__name__)


def k_range(text: str):
    """'10', '5,10,20' or 'start:stop:step' (stop included when aligned)."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) > 2 else 1
            if step < 1 or len(parts) > 3:
                raise ValueError
            values = list(range(start, stop + 1, step))
        else:
            values = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid k range {text!r}")
    if not values:
        raise argparse.ArgumentTypeError(f"empty k range {text!r}")
    return values


def _mu_text(report) -> str:
    exact = report.mu_exact
    return str(exact) if exact is not None else f"{report.mu:.6f}"


def cmd_construct(args):
    family = Construction(args.family)
    if family is Construction.additive:
        base = build_additive(args.q)
    else:
        beta = field_new(args.q).element(args.beta)
        builder = build_rs_latin if family is Construction.rs_latin else build_latin
        base = builder(args.q, beta)

    out = args.out or Path(f"{family.value}-q{args.q}.alist")
    write_alist(base.H, out)

    report = coherence(base.H)
    mu = report.mu_exact or Fraction(report.mu).limit_denominator(1_000_000)
    k = rip_order(mu)
    print(f"gamma={base.gamma} mu={_mu_text(report)} k<{k + 1}")
    print(f"construction={family.value}")
    print(f"q={args.q}")
    if base.beta is not None:
        print(f"beta={base.beta.value}")
    print(f"size={base.H.m}x{base.H.n}")
    print(f"s={base.s}")
    print(f"t={base.t}")
    print(f"regular={base.gamma},{base.gamma}")
    print(f"girth={girth(base.H)}")
    print(f"lambda={report.lambda_max}")
    print(f"rip_order={k}")
    print(f"alist={out}")
    if args.show_grid:
        print(block_grid_of(base), end="")
    return 0


def _catalog(args) -> FamilyCatalog:
    return enumerate_catalog(
        args.max_q,
        extension_fields=not args.no_extension_fields,
        exhaustive_beta=args.exhaustive_beta,
        constructions=args.family or tuple(Construction),
    )


def cmd_build(args):
    A, report = build_measurement_matrix(args.m, args.n, _catalog(args))
    out = args.out or Path(f"{report.chosen.slug}-{args.m}x{args.n}.alist")
    write_alist(A, out)
    print(report.to_text(), end="")
    print(report.to_block(), end="")
    print(f"alist={out}")
    return 0


def cmd_analyze(args):
    H = read_alist(args.input)
    report = coherence(H)
    g = girth(H)
    uniform = report.min_col_weight == report.max_col_weight
    mu = report.mu_exact or report.mu
    summary = bounds(
        H.m,
        H.n,
        gamma=report.min_col_weight if uniform else None,
        s=args.s,
        t=args.t,
        mu=mu if report.mu else None,
    )
    welch = "none" if summary.welch is None else f"{summary.welch:.6f}"
    print(
        f"mu={report.mu:.6f} lambda={report.lambda_max} girth={g} "
        f"welch={welch} johnson_lower={summary.johnson_lower:.6f}"
    )
    print(f"size={H.m}x{H.n}")
    print(report.to_text(), end="")
    print(summary.to_text(), end="")

    if report.lambda_max > 1:
        message = f"lambda={report.lambda_max}: girth 4, the girth > 4 coherence bounds do not apply"
        print(f"WARN {message}")
        logger.warning(message)
    if args.s is not None and args.t is not None:
        try:
            upper = theorem2_upper(H.m, args.s, args.t)
        except CsMatrixError as e:
            print(f"WARN {e}")
        else:
            if report.mu > upper + 1e-12:
                message = f"mu={report.mu:.6f} exceeds 1/(floor(m/s)-t)={upper:.6f}"
                print(f"WARN {message}")
                logger.warning(message)
    return 0


def _record(results):
    from csmatrix.store import record_experiment

    for result in results:
        record_experiment(result)


def cmd_experiment(args):
    if args.gaussian:
        if args.m is None or args.n is None:
            raise CsMatrixError("--gaussian needs --m and --n")
        A = gaussian_matrix(args.m, args.n, args.seed, name=f"gaussian-{args.m}x{args.n}")
    elif args.input is not None:
        A = binarize_to_real(read_alist(args.input), name=Path(args.input).stem)
    else:
        raise CsMatrixError("give --in or --gaussian")

    if args.compare_gaussian and not args.gaussian:
        results = run_comparison(A, args.k, args.trials, args.seed, args.threshold, args.workers)
    else:
        results = (run_experiment(A, args.k, args.trials, args.seed, args.threshold, args.workers),)

    if args.csv:
        write_csv(results, args.csv)
    else:
        print(to_csv(results), end="")
    if args.record:
        _record(results)
    return 0


def cmd_reproduce(args):
    suite = SUITES[args.suite]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    k_values = args.k or suite.k_values
    for m, n in suite.shapes:
        results = []
        for entry in suite.entries:
            A, _ = build_measurement_matrix(m, n, FamilyCatalog((entry,)))
            real = binarize_to_real(A, name=f"{entry.slug}-{m}x{n}")
            results.append(run_experiment(real, k_values, args.trials, args.seed, args.threshold, args.workers))
        gaussian = gaussian_matrix(m, n, args.seed, name=f"gaussian-{m}x{n}")
        results.append(run_experiment(gaussian, k_values, args.trials, args.seed, args.threshold, args.workers))
        path = out_dir / f"{suite.name}-{m}x{n}.csv"
        write_csv(results, path)
        print(f"wrote {path}")
        if args.record:
            _record(results)
    return 0


def cmd_init(args):
    from csmatrix.store import init_db

    init_db()
    print("Done!")
    return 0


def _experiment_flags(parser):
    parser.add_argument("--trials", type=int, default=config.TRIALS)
    parser.add_argument("--seed", type=int, default=config.SEED)
    parser.add_argument("--threshold", type=float, default=config.THRESHOLD)
    parser.add_argument("--workers", type=int, default=config.WORKERS)
    parser.add_argument("--record", action="store_true", help="also store the results in the SQLite ledger")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csmatrix", description="Deterministic binary compressed-sensing matrices")
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", help="build one base matrix and certify it")
    construct.add_argument("--family", required=True, choices=[c.value for c in Construction])
    construct.add_argument("--q", type=int, required=True)
    construct.add_argument("--beta", type=int, default=1, help="field element, integer representation")
    construct.add_argument("--out", type=Path)
    construct.add_argument("--show-grid", action="store_true")
    construct.set_defaults(handler=cmd_construct)

    build = commands.add_parser("build", help="build an m x n measurement matrix")
    build.add_argument("--m", type=int, required=True)
    build.add_argument("--n", type=int, required=True)
    build.add_argument("--max-q", type=int, default=config.MAX_Q)
    build.add_argument("--family", action="append", choices=[c.value for c in Construction])
    build.add_argument("--no-extension-fields", action="store_true")
    build.add_argument("--exhaustive-beta", action="store_true")
    build.add_argument("--out", type=Path)
    build.set_defaults(handler=cmd_build)

    analyze = commands.add_parser("analyze", help="coherence, girth and bounds of an alist matrix")
    analyze.add_argument("--in", dest="input", type=Path, required=True)
    analyze.add_argument("--s", type=int, help="declared block side")
    analyze.add_argument("--t", type=int, help="declared zero blocks per block row")
    analyze.set_defaults(handler=cmd_analyze)

    experiment = commands.add_parser("experiment", help="Monte Carlo OMP recovery sweep")
    source = experiment.add_mutually_exclusive_group()
    source.add_argument("--in", dest="input", type=Path)
    source.add_argument("--gaussian", action="store_true")
    experiment.add_argument("--m", type=int)
    experiment.add_argument("--n", type=int)
    experiment.add_argument("--k", type=k_range, required=True)
    experiment.add_argument("--csv", type=Path)
    experiment.add_argument("--compare-gaussian", action="store_true")
    _experiment_flags(experiment)
    experiment.set_defaults(handler=cmd_experiment)

    reproduce = commands.add_parser("reproduce", help="run a built-in suite against Gaussian matrices")
    reproduce.add_argument("--suite", required=True, choices=sorted(SUITES))
    reproduce.add_argument("--k", type=k_range)
    reproduce.add_argument("--out-dir", default=".")
    _experiment_flags(reproduce)
    reproduce.set_defaults(handler=cmd_reproduce)

    init = commands.add_parser("init", help="create the results ledger tables")
    init.set_defaults(handler=cmd_init)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=config.LOG_LEVEL, format="%(levelname)s %(name)s: %(message)s")
    args = make_parser().parse_args(argv)
    try:
        return args.handler(args)
    except CsMatrixError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


def _run(command):
    sys.exit(main([command, *sys.argv[1:]]))


def construct():
    _run("construct")


def build():
    _run("build")


def analyze():
    _run("analyze")


def experiment():
    _run("experiment")


def reproduce():
    _run("reproduce")


def init():
    _run("init")
