"""Command-line surface over the library.

Exit codes: 0 on success, 1 for data or validation failures (reported with
the failing module's name), 2 for usage errors. Every subcommand accepts
``--config FILE`` pointing at a JSON object whose keys are flag names
(underscored); explicit command-line flags win over config values, config
values win over built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import negset as negset_mod
from . import profiles as profiles_mod
from . import scoring as scoring_mod
from . import similarity as similarity_mod
from . import svgplot
from . import theory
from .logstore import RunCollection, load_log, merge_runs

USAGE_ERROR = 2
DATA_ERROR = 1

METRICS = ("tv", "kl", "cosine")
PROFILE_KINDS = ("acc", "softmax", "entropy", "softacc")


def main(argv: Sequence[str] | None = None) -> int:
    return run(list(sys.argv[1:] if argv is None else argv))


def run(argv: list[str]) -> int:
    parser, subparsers = _build_parser()
    try:
        _apply_config_defaults(parser, subparsers, argv)
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage problems itself
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, IndexError, OSError) as exc:
        print(f"{_error_source(exc)}: {exc}", file=sys.stderr)
        return DATA_ERROR


class _UsageError(Exception):
    pass


def _error_source(exc: BaseException) -> str:
    """Name the package module an exception came from."""
    source = type(exc).__module__
    tb = exc.__traceback__
    while tb is not None:
        name = tb.tb_frame.f_globals.get("__name__", "")
        if name.startswith("profilekit."):
            source = name
        tb = tb.tb_next
    return source.rsplit(".", 1)[-1].lstrip("_")


def _apply_config_defaults(
    parser: argparse.ArgumentParser,
    subparsers: dict[str, argparse.ArgumentParser],
    argv: list[str],
) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        payload = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {known.config}: {exc}")
    if not isinstance(payload, dict):
        parser.error(f"config {known.config} must hold a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in payload.items()}
    # subcommands parse into their own namespace, so each subparser needs the
    # config defaults directly; the chosen one applies them
    for target in (parser, *subparsers.values()):
        target.set_defaults(**defaults)


def _build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="profilekit",
        description="Pointwise learning profiles over checkpointed softmax logs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands: dict[str, argparse.ArgumentParser] = {}

    p = commands["validate"] = sub.add_parser("validate", help="check a log directory and summarize it")
    p.add_argument("log", help="log directory (or manifest path)")
    _common_flags(p)
    p.set_defaults(handler=_cmd_validate)

    p = commands["profile"] = sub.add_parser("profile", help="emit one point's profile as CSV")
    p.add_argument("--log", action="append", default=None, help="log directory (repeatable)")
    p.add_argument("--point", type=int, default=None)
    p.add_argument("--kind", choices=PROFILE_KINDS, default="acc")
    _grid_flags(p)
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    _common_flags(p)
    p.set_defaults(handler=_cmd_profile)

    p = commands["taxonomy"] = sub.add_parser("taxonomy", help="classify every point and count classes")
    p.add_argument("--log", action="append", default=None)
    p.add_argument("--threshold", type=float, default=scoring_mod.NMONO_THRESHOLD)
    _grid_flags(p)
    p.add_argument("--out-csv", default=None, help="per-point detail CSV")
    p.add_argument("--out-json", default=None, help="summary JSON")
    p.add_argument("--out-svg", default=None, help="class-share pie chart")
    _common_flags(p)
    p.set_defaults(handler=_cmd_taxonomy)

    p = commands["distance"] = sub.add_parser("distance", help="profile distance matrix between two procedures")
    p.add_argument("--a", action="append", default=None, help="first family log (repeatable)")
    p.add_argument("--b", action="append", default=None, help="second family log (repeatable)")
    p.add_argument("--metric", choices=METRICS, default="tv")
    p.add_argument("--epsilon", type=float, default=1e-12)
    p.add_argument("--points", default=None, help="comma-separated point ids (default: all)")
    _grid_flags(p)
    p.add_argument("--out-csv", default=None)
    p.add_argument("--out-svg", default=None, help="heatmap of the matrix")
    _common_flags(p)
    p.set_defaults(handler=_cmd_distance)

    p = commands["gap"] = sub.add_parser("gap", help="pointwise accuracy gap curve between two procedures")
    p.add_argument("--a", action="append", default=None)
    p.add_argument("--b", action="append", default=None)
    _grid_flags(p)
    p.add_argument("--out", default="-", help="gap curve CSV ('-' for stdout)")
    _common_flags(p)
    p.set_defaults(handler=_cmd_gap)

    p = commands["negset"] = sub.add_parser("negset", help="mine a hard subset from a pool log")
    p.add_argument("--pool", action="append", default=None)
    p.add_argument("--reference", action="append", default=None)
    p.add_argument("--k", type=int, default=None, help="points per class")
    p.add_argument("--filter", default=None, help="point_id,0|1 CSV of admissible points")
    p.add_argument("--filter-name", default=None)
    p.add_argument("--per-run", action="store_true", help="average per-run scores")
    _grid_flags(p)
    p.add_argument("--out", default="-", help="manifest JSON ('-' for stdout)")
    _common_flags(p)
    p.set_defaults(handler=_cmd_negset)

    p = commands["negset-eval"] = sub.add_parser("negset-eval", help="correlate subset accuracy against reference")
    p.add_argument("--manifest", default=None)
    p.add_argument("--log", action="append", default=None, help="pool log directory (repeatable)")
    p.add_argument("--reference", action="append", default=None)
    p.add_argument("--probit", action="store_true")
    p.add_argument("--out-csv", default=None, help="per-checkpoint pair CSV")
    p.add_argument("--out-svg", default=None, help="scatter of the pairs")
    _common_flags(p)
    p.set_defaults(handler=_cmd_negset_eval)

    p = commands["theory"] = sub.add_parser("theory", help="run a closed-form learner property suite")
    p.add_argument("suite", choices=("skill", "manifold", "bayes", "gp"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--models", type=int, default=20, help="random instances to check")
    p.add_argument("--skills", type=int, default=32)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--labels", type=int, default=3)
    p.add_argument("--observations", type=int, default=3)
    p.add_argument("--horizon", type=int, default=5)
    p.add_argument("--dimension", type=int, default=1)
    p.add_argument("--cells", default="2,4,8,16,32", help="comma-separated cell budgets")
    p.add_argument("--eval-points", type=int, default=2048)
    p.add_argument("--train-points", type=int, default=12)
    p.add_argument("--out", default="-", help="report JSON ('-' for stdout)")
    _common_flags(p)
    p.set_defaults(handler=_cmd_theory)

    p = commands["plot"] = sub.add_parser("plot", help="render a CSV table to SVG")
    p.add_argument("--spec", default=None, help="JSON plot spec (kind, width, height, top_k)")
    p.add_argument("--kind", choices=svgplot.PLOT_KINDS, default=None)
    p.add_argument("--data", default=None, help="input CSV")
    p.add_argument("--out", default=None, help="output SVG")
    _common_flags(p)
    p.set_defaults(handler=_cmd_plot)

    return parser, commands


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, help="JSON file supplying any flag")


def _grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid-min", type=float, default=None)
    p.add_argument("--grid-max", type=float, default=None)
    p.add_argument("--grid-length", type=int, default=profiles_mod.GRID_LENGTH)
    p.add_argument("--sigma", type=float, default=profiles_mod.SMOOTHING_SIGMA)


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) in (None, []):
            raise _UsageError(f"--{name.replace('_', '-')} is required")


def _load_collection(paths: Sequence[str]) -> RunCollection:
    return merge_runs([load_log(p) for p in paths])


def _pick_grid(
    args: argparse.Namespace, colls: Sequence[RunCollection]
) -> profiles_mod.AccuracyGrid:
    if args.grid_min is not None and args.grid_max is not None:
        return profiles_mod.AccuracyGrid(
            p_min=args.grid_min, p_max=args.grid_max, length=args.grid_length
        )
    if (args.grid_min is None) != (args.grid_max is None):
        raise _UsageError("--grid-min and --grid-max must be given together")
    return profiles_mod.shared_grid(colls, length=args.grid_length)


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _cmd_validate(args: argparse.Namespace) -> int:
    log = load_log(args.log)
    print(
        f"ok: run {log.run_id!r}, {len(log.checkpoints)} checkpoints, "
        f"{log.num_points} points, {log.num_classes} classes"
    )
    return 0


def _cmd_profile(args: argparse.Namespace) -> int:
    _require(args, "log", "point")
    coll = _load_collection(args.log)
    grid = _pick_grid(args, [coll])
    kind = args.kind
    if kind == "softmax":
        prof = profiles_mod.softmax_profile(coll, args.point, grid, args.sigma)
        header = ["p"] + [f"class_{c}" for c in range(prof.distributions.shape[1])]
        lines = [",".join(header)]
        for p, row in zip(grid.values, prof.distributions):
            lines.append(",".join([repr(float(p))] + [repr(float(v)) for v in row]))
    else:
        if kind == "acc":
            curve = profiles_mod.accuracy_profile(coll, args.point, grid, args.sigma)
        elif kind == "softacc":
            curve = profiles_mod.soft_accuracy_profile(coll, args.point, grid, args.sigma)
        else:
            curve = profiles_mod.entropy_profile(coll, args.point, grid, args.sigma)
        lines = ["p,value"] + [
            f"{float(p)!r},{float(v)!r}" for p, v in zip(grid.values, curve.values)
        ]
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_taxonomy(args: argparse.Namespace) -> int:
    _require(args, "log")
    coll = _load_collection(args.log)
    grid = _pick_grid(args, [coll])
    cfg = scoring_mod.TaxonomyConfig(nmono_threshold=args.threshold)
    result = scoring_mod.decompose(coll, grid, cfg)
    if args.out_csv:
        scoring_mod.write_taxonomy_csv(result, args.out_csv)
    if args.out_json:
        scoring_mod.write_taxonomy_json(result, args.out_json)
    if args.out_svg:
        order = sorted(result.counts)
        rows = [[name, str(result.counts[name])] for name in order]
        svgplot.write_svg(
            svgplot.PlotSpec(kind="pie"), ["label", "count"], rows, args.out_svg
        )
    print(json.dumps({"counts": result.counts}, indent=2))
    return 0


def _parse_points(spec: str | None, num_points: int) -> list[int]:
    if spec is None:
        return list(range(num_points))
    try:
        points = [int(part) for part in spec.split(",") if part.strip()]
    except ValueError as exc:
        raise _UsageError(f"bad --points list: {exc}") from exc
    if not points:
        raise _UsageError("--points named no points")
    return points


def _cmd_distance(args: argparse.Namespace) -> int:
    _require(args, "a", "b")
    coll_a = _load_collection(args.a)
    coll_b = _load_collection(args.b)
    if coll_a.num_points != coll_b.num_points:
        raise ValueError(
            f"point sets differ: {coll_a.num_points} vs {coll_b.num_points} points"
        )
    grid = _pick_grid(args, [coll_a, coll_b])
    metric = similarity_mod.DistributionMetric(kind=args.metric, epsilon=args.epsilon)
    points = _parse_points(args.points, coll_a.num_points)
    families = [
        ("a", {z: profiles_mod.softmax_profile(coll_a, z, grid, args.sigma) for z in points}),
        ("b", {z: profiles_mod.softmax_profile(coll_b, z, grid, args.sigma) for z in points}),
    ]
    names, matrix = similarity_mod.pairwise_matrix(families, metric)
    if args.out_csv:
        similarity_mod.write_matrix_csv(names, matrix, args.out_csv)
    if args.out_svg:
        rows = [[name] + [repr(float(v)) for v in row] for name, row in zip(names, matrix)]
        svgplot.write_svg(
            svgplot.PlotSpec(kind="heatmap"), [""] + names, rows, args.out_svg
        )
    print(
        json.dumps(
            {"metric": args.metric, "names": names, "matrix": matrix.tolist()}, indent=2
        )
    )
    return 0


def _cmd_gap(args: argparse.Namespace) -> int:
    _require(args, "a", "b")
    coll_a = _load_collection(args.a)
    coll_b = _load_collection(args.b)
    grid = _pick_grid(args, [coll_a, coll_b])
    curve = similarity_mod.pointwise_gap(coll_a, coll_b, grid)
    lines = ["p,gap"] + [
        f"{float(p)!r},{float(v)!r}" for p, v in zip(grid.values, curve.values)
    ]
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.out == "-":
        return 0
    print(json.dumps({"mean_gap": float(np.mean(curve.values))}, indent=2))
    return 0


def _cmd_negset(args: argparse.Namespace) -> int:
    _require(args, "pool", "reference", "k")
    pool = _load_collection(args.pool)
    reference = _load_collection(args.reference)
    grid = negset_mod.reference_grid(reference, length=args.grid_length)
    scores = negset_mod.score_pool(pool, reference, grid, per_run=args.per_run)
    if args.filter:
        mask = negset_mod.read_filter_csv(args.filter, pool.num_points)
        filter_name = args.filter_name or Path(args.filter).name
    else:
        mask = np.ones(pool.num_points, dtype=bool)
        filter_name = args.filter_name or "none"
    manifest = negset_mod.build_negset(
        scores,
        pool.labels,
        mask,
        args.k,
        filter_name=filter_name,
        provenance=",".join(args.pool),
    )
    _write_text(args.out, manifest.to_json())
    return 0


def _cmd_negset_eval(args: argparse.Namespace) -> int:
    _require(args, "manifest", "log", "reference")
    manifest = negset_mod.NegSetManifest.from_json(Path(args.manifest).read_text())
    pool = _load_collection(args.log)
    reference = _load_collection(args.reference)
    report = negset_mod.evaluate_correlation(manifest, pool, reference, probit=args.probit)
    if args.out_csv:
        negset_mod.write_pairs_csv(report, args.out_csv)
    if args.out_svg:
        rows = [[repr(float(x)), repr(float(y))] for x, y in report.pairs]
        svgplot.write_svg(
            svgplot.PlotSpec(kind="scatter"), ["p", "subset_accuracy"], rows, args.out_svg
        )
    print(report.to_json(), end="")
    return 0


def _cmd_theory(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    if args.suite == "skill":
        report = _theory_skill(rng, args)
    elif args.suite == "manifold":
        report = _theory_manifold(rng, args)
    elif args.suite == "bayes":
        report = _theory_bayes(rng, args)
    else:
        report = _theory_gp(rng, args)
    _write_text(args.out, report.to_json())
    return 0 if report.passed else DATA_ERROR


def _theory_skill(rng: np.random.Generator, args: argparse.Namespace) -> theory.CheckReport:
    for _ in range(args.models):
        model = theory.random_skill_model(rng, args.skills, args.points)
        report = theory.check_universality(model)
        if not report.passed:
            return report
        order = np.argsort(model.skills, kind="stable")
        report = theory.check_accuracy_monotonicity(model, resource_order=order)
        if not report.passed:
            return report
    return theory.CheckReport(
        name="skill_ordering", passed=True, curves={"models_checked": [float(args.models)]}
    )


def _theory_manifold(rng: np.random.Generator, args: argparse.Namespace) -> theory.CheckReport:
    cells = [int(c) for c in args.cells.split(",") if c.strip()]
    dim = args.dimension
    # steepest unit-Lipschitz linear target; its gradient has Euclidean norm 1
    direction = np.full(dim, 1.0 / np.sqrt(dim))

    def target(x: np.ndarray) -> float:
        return float(direction @ x)

    eval_points = rng.random((args.eval_points, dim))
    sweep = theory.scaling_sweep(dim, 1.0, target, cells, eval_points)
    c_fit, alpha_fit = theory.fit_scaling(sweep)
    bound_ok = True
    for c in cells:
        model = theory.ManifoldModel(
            dimension=dim, lipschitz_constant=1.0, target=target, cells_per_axis=int(c)
        )
        errors = theory.manifold_errors(model, eval_points)
        bound_ok = bound_ok and bool(errors.max() <= model.error_bound() + 1e-12)
    expected = 1.0 / dim
    passed = bound_ok and abs(alpha_fit - expected) <= 0.1 * expected
    return theory.CheckReport(
        name="manifold_scaling",
        passed=passed,
        witness=None if passed else {"alpha_fit": alpha_fit, "expected": expected},
        curves={
            "n": [float(n) for n, _ in sweep],
            "max_error": [float(e) for _, e in sweep],
            "alpha_fit": [alpha_fit],
            "c_fit": [c_fit],
        },
    )


def _theory_bayes(rng: np.random.Generator, args: argparse.Namespace) -> theory.CheckReport:
    last = None
    for _ in range(args.models):
        model = theory.random_bayes_model(rng, args.labels, args.observations, args.horizon)
        last = theory.monotonicity_report(model)
        if not last.passed:
            return last
    assert last is not None
    return last


def _theory_gp(rng: np.random.Generator, args: argparse.Namespace) -> theory.CheckReport:
    for index in range(args.models):
        kernel = theory.rbf_kernel(lengthscale=float(rng.uniform(0.5, 2.0)))
        x = rng.random((args.train_points, args.dimension))
        y = rng.standard_normal(args.train_points)
        queries = rng.random((8, args.dimension))
        grown = theory.GPModel(kernel=kernel, train_x=x, train_y=y)
        shrunk = theory.GPModel(
            kernel=kernel, train_x=x[:-1], train_y=y[:-1]
        )
        for q in queries:
            before = theory.gp_posterior(shrunk, q)[1]
            after = theory.gp_posterior(grown, q)[1]
            if after > before + 1e-8:
                return theory.CheckReport(
                    name="gp_variance_shrinkage",
                    passed=False,
                    witness={
                        "instance": index,
                        "query": [float(v) for v in q],
                        "variance_before": before,
                        "variance_after": after,
                    },
                )
    return theory.CheckReport(
        name="gp_variance_shrinkage",
        passed=True,
        curves={"instances_checked": [float(args.models)]},
    )


def _cmd_plot(args: argparse.Namespace) -> int:
    _require(args, "data", "out")
    if args.spec:
        payload = json.loads(Path(args.spec).read_text())
        spec = svgplot.PlotSpec(
            kind=payload.get("kind", args.kind or "curve"),
            width=int(payload.get("width", 640)),
            height=int(payload.get("height", 480)),
            top_k=int(payload.get("top_k", 5)),
        )
    elif args.kind:
        spec = svgplot.PlotSpec(kind=args.kind)
    else:
        raise _UsageError("either --spec or --kind is required")
    header, rows = svgplot.read_table(args.data)
    svgplot.write_svg(spec, header, rows, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
