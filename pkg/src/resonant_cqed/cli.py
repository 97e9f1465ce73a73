"""Command-line entry point.

    resonant-cqed run <config.json> [--no-timestamp] [--output PATH] [--format json|csv]
    resonant-cqed sweep <config.json> [--no-timestamp] [--output PATH]
    resonant-cqed list-experiments
    resonant-cqed validate <config.json>

Exit codes: 0 success, 2 config error, 3 runtime error. Errors are written
to stderr as a one-line JSON record.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .experiments import EXPERIMENTS, ConfigError, get_experiment
from .reporting import ReportFile, ReportFormatError, emit_report, to_plain

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3

log = logging.getLogger("resonant_cqed")


class RuntimeFailure(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    parameters: dict[str, Any]
    output_path: str | None = None
    output_format: str | None = None

    @classmethod
    def from_dict(cls, raw: Any) -> ExperimentConfig:
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        unknown = sorted(set(raw) - {"experiment", "parameters", "output"})
        if unknown:
            raise ConfigError(f"unknown top-level keys: {unknown}")
        exp = get_experiment(raw.get("experiment"))
        params = raw.get("parameters", {})
        if not isinstance(params, dict):
            raise ConfigError("parameters must be an object")
        out = raw.get("output", {}) or {}
        if not isinstance(out, dict) or set(out) - {"path", "format"}:
            raise ConfigError("output must be an object with optional path and format")
        fmt = out.get("format")
        if fmt not in (None, "json", "csv"):
            raise ConfigError(f"output format must be json or csv, got {fmt!r}")
        if fmt == "csv" and not exp.tabular:
            raise ConfigError(f"experiment {exp.name} has no tabular output; use json")
        path = out.get("path")
        if path is not None and not isinstance(path, str):
            raise ConfigError("output.path must be a string")
        return cls(exp.name, exp.resolve(params), path, fmt)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentConfig:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
        return cls.from_dict(raw)

    def echo(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "parameters": self.parameters,
            "output": {"path": self.output_path, "format": self.output_format},
        }


def run_experiment(cfg: ExperimentConfig, timestamp: bool = False) -> ReportFile:
    """Execute one resolved config and assemble its report."""
    exp = get_experiment(cfg.experiment)
    try:
        results, diagnostics = exp.runner(cfg.parameters)
    except ConfigError:
        raise
    except Exception as exc:  # noqa: BLE001 - surfaced as a runtime error record
        raise RuntimeFailure(f"{type(exc).__name__}: {exc}") from exc
    metadata: dict[str, Any] = {"tool": "resonant_cqed", "version": __version__, "config": cfg.echo()}
    if timestamp:
        metadata["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return ReportFile(metadata, to_plain(results), to_plain(diagnostics))


def _write(data: bytes, path: str | None) -> None:
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise RuntimeFailure(f"cannot write report to {path}: {exc.strerror}") from None


def _error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"kind": kind, "message": message}}, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resonant-cqed", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (("run", "run one experiment"), ("sweep", "run a sweep experiment, CSV by default")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config")
        p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for byte-reproducible output")
        p.add_argument("--output", help="override output.path from the config")
        p.add_argument("--format", choices=("json", "csv"), help="override output.format from the config")
        p.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("list-experiments", help="list registered experiments")
    v = sub.add_parser("validate", help="validate a config and print it with defaults filled in")
    v.add_argument("config")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(message)s")

    if args.command == "list-experiments":
        for name in sorted(EXPERIMENTS):
            exp = EXPERIMENTS[name]
            kind = "sweep" if exp.tabular else "single"
            print(f"{name:24s} {kind:6s} {exp.description}")
        return EXIT_OK

    try:
        cfg = ExperimentConfig.load(args.config)
        if args.command == "validate":
            print(json.dumps(to_plain(cfg.echo()), sort_keys=True, indent=2))
            return EXIT_OK
        exp = get_experiment(cfg.experiment)
        fmt = args.format or cfg.output_format or ("csv" if args.command == "sweep" else "json")
        if args.command == "sweep" and not exp.tabular:
            raise ConfigError(f"experiment {exp.name} is not a sweep; use run")
        if fmt == "csv" and not exp.tabular:
            raise ConfigError(f"experiment {exp.name} has no tabular output; use json")
    except ConfigError as exc:
        _error("config", str(exc))
        return EXIT_CONFIG

    try:
        log.info("running %s", cfg.experiment)
        report = run_experiment(cfg, timestamp=not args.no_timestamp)
        _write(emit_report(report, fmt), args.output or cfg.output_path)
    except ConfigError as exc:
        _error("config", str(exc))
        return EXIT_CONFIG
    except (RuntimeFailure, ReportFormatError) as exc:
        _error("runtime", str(exc))
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
