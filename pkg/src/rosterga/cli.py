"""Command-line interface.

Commands: ``generate`` (synthetic instances), ``solve`` (greedy/soga/moo),
``report`` (CSV emission from a report file), ``compare`` (the three-method
protocol), ``config --dump``. Exit codes: 0 success, 2 validation error,
3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .codec import canonical_json, decode_instance, encode_instance
from .config import config_to_doc, default_config, load_config
from .errors import ConfigError, ValidationError
from .instances import UnitProfile, generate_instance, generator_manifest, profile_by_name
from .reports import (
    compare_methods,
    decode_report,
    emit_compare_csv,
    emit_coverage_csv,
    emit_gantt_csv,
    emit_pareto_csv,
    emit_staff_csv,
    encode_report,
    solve,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONFIG = 3


def _parse_profile(args: argparse.Namespace) -> UnitProfile:
    if args.profile != "custom":
        profile = profile_by_name(args.profile)
        if args.demand_scale != 1.0:
            profile = UnitProfile(profile.name, profile.counts, args.demand_scale)
        return profile
    if not args.counts:
        raise ValidationError("custom profile requires --counts L1,L2,L3,L4")
    try:
        counts = tuple(int(v) for v in args.counts.split(","))
    except ValueError:
        raise ValidationError(f"cannot parse --counts {args.counts!r}") from None
    if len(counts) != 4:
        raise ValidationError("--counts needs exactly four integers")
    return UnitProfile("custom", counts, args.demand_scale)


def cmd_generate(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    profile = _parse_profile(args)
    instance = generate_instance(profile, args.seed, config.generator, config.weights)
    out = Path(args.out)
    out.write_text(encode_instance(instance))
    manifest_path = out.with_suffix(out.suffix + ".manifest.json")
    manifest_path.write_text(canonical_json(generator_manifest(profile, args.seed, config.generator)))
    print(f"wrote {out} and {manifest_path}", file=sys.stderr)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    instance = decode_instance(Path(args.instance).read_text())
    progress = None
    progress_handle = None
    if args.progress:
        progress_handle = open(args.progress, "w")

        def progress(record):
            progress_handle.write(json.dumps(record.as_dict(), sort_keys=True) + "\n")

    try:
        report = solve(
            args.method,
            instance,
            config.ga,
            seed=args.seed,
            greedy_runs=args.runs,
            progress=progress,
        )
    finally:
        if progress_handle is not None:
            progress_handle.close()
    Path(args.out).write_text(encode_report(report))
    print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


_EMIT_KINDS = {"pareto", "gantt", "coverage", "staff"}


def cmd_report(args: argparse.Namespace) -> int:
    report = decode_report(Path(args.report).read_text())
    select = args.select
    for target in args.emit:
        kind = Path(target).stem
        if kind not in _EMIT_KINDS:
            raise ValidationError(
                f"--emit file name must start with one of {sorted(_EMIT_KINDS)}, got {target!r}"
            )
        if kind == "pareto":
            emit_pareto_csv(report, target)
        elif kind == "gantt":
            emit_gantt_csv(report, target, select=select)
        elif kind == "coverage":
            emit_coverage_csv(report, target, per_skill=args.per_skill, select=select)
        else:
            emit_staff_csv(report, target, select=select)
        print(f"wrote {target}", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    profile = _parse_profile(args)
    rows = compare_methods(
        profile,
        config.ga,
        seeds=args.seeds,
        greedy_runs=args.greedy_runs,
        master_seed=args.seed,
        generator=config.generator,
    )
    emit_compare_csv(rows, args.out)
    print(f"wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_config(args: argparse.Namespace) -> int:
    if args.dump:
        sys.stdout.write(canonical_json(config_to_doc(default_config())))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rosterga",
        description="Multi-objective GA solver for hospital-unit staff rostering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a synthetic instance")
    gen.add_argument("--profile", required=True, help="unit1..unit5 or custom")
    gen.add_argument("--counts", help="custom per-skill counts, e.g. 1,1,6,2")
    gen.add_argument("--demand-scale", type=float, default=1.0, dest="demand_scale")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--config", help="config file (generator knobs, weights)")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_generate)

    slv = sub.add_parser("solve", help="solve an instance with one method")
    slv.add_argument("--method", required=True, choices=["greedy", "soga", "moo"])
    slv.add_argument("--instance", required=True)
    slv.add_argument("--config", help="config file (GA parameters)")
    slv.add_argument("--seed", type=int, default=0)
    slv.add_argument("--runs", type=int, default=1000, help="greedy repetitions")
    slv.add_argument("--progress", help="write per-generation JSONL progress here")
    slv.add_argument("--out", required=True)
    slv.set_defaults(func=cmd_solve)

    rep = sub.add_parser("report", help="emit CSV data files from a report")
    rep.add_argument("--report", required=True)
    rep.add_argument(
        "--emit",
        action="append",
        required=True,
        help="output CSV path; base name picks the kind: pareto|gantt|coverage|staff",
    )
    rep.add_argument(
        "--select",
        choices=["balanced", "f1", "f2", "f3"],
        help="which front member to emit (default: the report's balanced pick)",
    )
    rep.add_argument("--per-skill", action="store_true", dest="per_skill")
    rep.set_defaults(func=cmd_report)

    cmp_ = sub.add_parser("compare", help="greedy vs soga vs moo comparison table")
    cmp_.add_argument("--profile", required=True)
    cmp_.add_argument("--counts", help="custom per-skill counts, e.g. 1,1,6,2")
    cmp_.add_argument("--demand-scale", type=float, default=1.0, dest="demand_scale")
    cmp_.add_argument("--seeds", type=int, default=5)
    cmp_.add_argument("--greedy-runs", type=int, default=1000, dest="greedy_runs")
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--config")
    cmp_.add_argument("--out", required=True)
    cmp_.set_defaults(func=cmd_compare)

    cfg = sub.add_parser("config", help="inspect configuration defaults")
    cfg.add_argument("--dump", action="store_true", help="print every default")
    cfg.set_defaults(func=cmd_config)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entrypoint() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    entrypoint()
