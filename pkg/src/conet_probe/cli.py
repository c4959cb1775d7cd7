"""Command-line entry point.

    conet-probe run --config sweep.conf [overrides]

The config file is flat `key = value` text (see README for the full
schema); every path in it resolves relative to the file itself, while
command-line overrides resolve relative to the working directory.
Exit codes: 0 success, 1 configuration error, 2 completed with
per-text failures.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace
from pathlib import Path

from .pipeline import ConfigError, RunConfig, report_csv, run_pipeline

_PATH_KEYS = (
    "manifest", "syntax_manifest", "semantics_manifest", "out",
    "stopword_dir", "cache_dir",
)
_STOPWORD_CHOICES = {
    "keep": (False,),
    "filter": (True,),
    "both": (False, True),
}


class _Parser(argparse.ArgumentParser):
    # usage problems are configuration errors: exit 1, not argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_bool(raw: str, key: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_list(raw: str, conv, key: str) -> tuple:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"{key}: expected a comma-separated list")
    try:
        return tuple(conv(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def _parse_strategies(raw: str, key: str = "strategies") -> tuple[str, ...]:
    return _parse_list(raw.lower(), str, key)


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read flat `key = value` lines; blank lines and `#` lines skipped."""
    entries: dict[str, str] = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"{path}:{lineno}: expected `key = value`, got {line!r}"
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        if key in entries:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        entries[key] = value
    if not entries:
        raise ConfigError(f"{path}: empty config file")
    return entries


def config_from_entries(
    entries: dict[str, str], base_dir: Path
) -> RunConfig:
    """Turn raw config text into a validated-shape RunConfig."""
    known = {f.name for f in fields(RunConfig)} | {"stopwords"}
    known -= {"stopword_settings"}  # spelled `stopwords` in the file
    values: dict = {}
    for key, raw in entries.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        if key in _PATH_KEYS:
            values[key] = str((base_dir / raw).resolve())
        elif key == "embeddings":
            if raw.startswith("synthetic:"):
                values[key] = raw
            else:
                values[key] = str((base_dir / raw).resolve())
        elif key == "sizes":
            values[key] = _parse_list(raw, int, key)
        elif key == "fractions":
            values[key] = _parse_list(raw, float, key)
        elif key == "strategies":
            values[key] = _parse_strategies(raw)
        elif key == "stopwords":
            if raw not in _STOPWORD_CHOICES:
                raise ConfigError(
                    f"stopwords: expected keep, filter, or both, got {raw!r}"
                )
            values["stopword_settings"] = _STOPWORD_CHOICES[raw]
        elif key in ("replicas", "seed", "workers", "embedding_dim"):
            try:
                values[key] = int(raw)
            except ValueError:
                raise ConfigError(
                    f"{key}: expected an integer, got {raw!r}"
                ) from None
        elif key == "damping":
            try:
                values[key] = float(raw)
            except ValueError:
                raise ConfigError(
                    f"damping: expected a number, got {raw!r}"
                ) from None
        else:  # the boolean switches
            values[key] = _parse_bool(raw, key)
    return RunConfig(**values)


def _apply_overrides(config: RunConfig, args) -> RunConfig:
    updates: dict = {}
    if args.sizes is not None:
        updates["sizes"] = _parse_list(args.sizes, int, "--sizes")
    if args.fractions is not None:
        updates["fractions"] = _parse_list(
            args.fractions, float, "--fractions"
        )
    if args.strategies is not None:
        updates["strategies"] = _parse_strategies(
            args.strategies, "--strategies"
        )
    if args.stopwords is not None:
        updates["stopword_settings"] = _STOPWORD_CHOICES[args.stopwords]
    if args.replicas is not None:
        updates["replicas"] = args.replicas
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.embeddings is not None:
        src = args.embeddings
        if not src.startswith("synthetic:"):
            src = str(Path(src).resolve())
        updates["embeddings"] = src
    if args.workers is not None:
        updates["workers"] = args.workers
    if args.out is not None:
        updates["out"] = str(Path(args.out).resolve())
    if args.signed_distance:
        updates["signed_distance"] = True
    return replace(config, **updates)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="conet-probe",
        description=(
            "Sweep word co-occurrence networks, embedding-based "
            "enrichment, and shuffled-baseline statistics over a corpus."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a sweep and write CSV reports")
    run.add_argument("--config", help="flat key = value config file")
    run.add_argument("--sizes", help="comma-separated token counts")
    run.add_argument("--fractions", help="comma-separated P percentages")
    run.add_argument(
        "--strategies", help="comma-separated: original,global,local"
    )
    run.add_argument(
        "--stopwords", choices=sorted(_STOPWORD_CHOICES),
        help="keep, filter, or both",
    )
    run.add_argument("--replicas", type=int, help="shuffled replicas per text")
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument(
        "--embeddings", help="vector file path or synthetic:<seed>"
    )
    run.add_argument("--workers", type=int, help="parallel worker processes")
    run.add_argument("--out", help="output directory")
    run.add_argument(
        "--signed-distance", action="store_true",
        help="use signed (X-1)/eps instead of |X-1|/eps",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config is not None:
            entries = parse_config_file(args.config)
            base = Path(args.config).resolve().parent
            config = config_from_entries(entries, base)
        else:
            config = RunConfig()
        config = _apply_overrides(config, args)
        config.validate()
        result = run_pipeline(config)
    except ConfigError as exc:
        print(f"conet-probe: config error: {exc}", file=sys.stderr)
        return 1
    paths = report_csv(result, config.out)
    n_records = len(result.records)
    print(
        f"wrote {', '.join(p.name for p in paths)} to {config.out} "
        f"({n_records} records, {len(result.failures)} failed tasks)",
        file=sys.stderr,
    )
    for failure in result.failures:
        print(
            f"conet-probe: task failed: {failure.text_id} "
            f"size={failure.size} stopwords={failure.stopwords}: "
            f"{failure.failure}",
            file=sys.stderr,
        )
    return 2 if result.failures else 0


if __name__ == "__main__":
    sys.exit(main())
