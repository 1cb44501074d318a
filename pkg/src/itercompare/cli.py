"""Command line entry point.

    itercompare run CONFIG [CONFIG ...]
    itercompare corpus list
    itercompare corpus run [NAME ...]
    itercompare demonstrate CONFIG

Exit status: 0 when every verdict is conclusive, 2 when at least one is
inconclusive, 1 on input or validation errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

from .config import MIN_HORIZON, load_config, with_estimator
from .errors import ItercompareError
from .report import FORMATS, emit, emit_demonstration, run_experiment

log = logging.getLogger("itercompare")

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


def corpus_dir() -> Path:
    return Path(str(resources.files("itercompare") / "corpus"))


def corpus_entries() -> dict[str, Path]:
    return {p.stem: p for p in sorted(corpus_dir().glob("*.yaml"))}


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _horizon(text: str) -> int:
    n = int(text)
    if n < MIN_HORIZON:
        raise argparse.ArgumentTypeError(f"horizon must be >= {MIN_HORIZON}")
    return n


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--horizon", type=_horizon, help="override the configured horizon")
    p.add_argument("--window-frac", type=float)
    p.add_argument("--limit-tol", type=float)
    p.add_argument("--require-bounds-vanish", type=_bool, default=True, metavar="true|false")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    p.add_argument("--plot-dir", type=Path, help="also render one PNG per experiment here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itercompare",
        description="Compare convergence rates of fixed-point iterations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run experiment files")
    p.add_argument("configs", nargs="+", type=Path)
    _common(p)

    p = sub.add_parser("corpus", help="built-in experiments")
    csub = p.add_subparsers(dest="corpus_command", required=True)
    csub.add_parser("list", help="list built-in experiments")
    pr = csub.add_parser("run", help="run built-in experiments (all when no name is given)")
    pr.add_argument("names", nargs="*")
    _common(pr)

    p = sub.add_parser("demonstrate",
                       help="force the adversarial bounds both ways and show the contradiction")
    p.add_argument("config", type=Path)
    _common(p)
    return parser


def _load(paths, args):
    configs = []
    for path in paths:
        cfg = load_config(path, horizon=args.horizon)
        cfg = with_estimator(cfg, window_frac=args.window_frac, limit_tol=args.limit_tol,
                             require_vanishing=args.require_bounds_vanish)
        configs.append(cfg)
    return configs


def _write(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def _finish(records, args, text: str | None = None) -> int:
    _write(text if text is not None else emit(records, args.format), args.out)
    if args.plot_dir is not None:
        from .plotting import plot_reports
        for path in plot_reports(records, args.plot_dir):
            log.info("wrote %s", path)
    if any(r.relation == "inconclusive" for r in records):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _run(paths, args) -> int:
    records = []
    for cfg in _load(paths, args):
        log.info("running %s", cfg.id)
        records.extend(run_experiment(cfg))
    return _finish(records, args)


def _demonstrate(args) -> int:
    (cfg,) = _load([args.config], args)
    comps = cfg.comparators if "berinde27" in cfg.comparators else cfg.comparators + ("berinde27",)
    cfg = replace(cfg, comparators=comps, bounds_modes=("prop1-forward",))
    records = run_experiment(cfg)
    pair = [r for r in records if r.comparator == "berinde27"]
    text = None
    if args.format == "table":
        text = emit(records, "table") + "\n" + emit_demonstration(*pair)
    return _finish(records, args, text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if args.command == "run":
            return _run(args.configs, args)
        if args.command == "demonstrate":
            return _demonstrate(args)
        entries = corpus_entries()
        if args.corpus_command == "list":
            for name, path in entries.items():
                sys.stdout.write(f"{name}\t{path}\n")
            return EXIT_OK
        names = args.names or list(entries)
        unknown = [n for n in names if n not in entries]
        if unknown:
            raise ItercompareError(f"unknown corpus entries {unknown}; try 'corpus list'")
        return _run([entries[n] for n in names], args)
    except (ItercompareError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
