"""Command-line scenario runner.

    cycles run CONFIG.json
    cycles list

Exit status: 0 when every check passes, 1 when any check fails, 2 for an
invalid configuration, 3 for a numerical error, 4 for file I/O problems.
Errors are reported on stderr as a single ``<kind>: <reason>`` line.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from ._io import atomic_write_csv, atomic_write_text
from .errors import CyclesError
from .scenarios import RNG_NAME, ConfigError, InputFileError, Outcome, catalog_lines, resolve, run

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

OUTPUT_ENV = "CYCLES_OUTPUT_DIR"
TOP_LEVEL_KEYS = {"scenario", "parameters", "output", "seed"}


def load_config(path: "str | Path") -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputFileError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    for key in sorted(cfg):
        if key not in TOP_LEVEL_KEYS:
            raise ConfigError(f"unknown key: {key}")
    if "scenario" not in cfg:
        raise ConfigError("missing key: scenario")
    seed = cfg.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"invalid value for seed: {seed!r}")
    output = cfg.get("output", "cycles_output")
    if not isinstance(output, str) or not output:
        raise ConfigError(f"invalid value for output: {output!r}")
    return {"scenario": cfg["scenario"], "parameters": cfg.get("parameters", {}), "output": output, "seed": seed}


def _jsonable(v):
    if isinstance(v, float):
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "value") and not isinstance(v, (int, str)):
        return v.value
    return v


def _text_report(report: dict) -> str:
    lines = [f"scenario: {report['scenario']}", f"verdict: {report['verdict']}",
             f"seed: {report['seed']} ({report['rng']})", "parameters:"]
    lines += [f"  {k} = {v}" for k, v in report["parameters"].items()]
    lines.append("checks:")
    for c in report["checks"]:
        lines.append(f"  {c['verdict']} {c['name']}: {c['value']!r} {c['relation']} {c['threshold']!r}")
    lines.append("summary:")
    lines += [f"  {k} = {v}" for k, v in report["summary"].items()]
    lines.append("outputs: " + ", ".join(report["outputs"]))
    lines.append(f"duration_s: {report['duration_s']:.3f}")
    return "\n".join(lines) + "\n"


def run_config(path: "str | Path") -> tuple[dict, int]:
    """Validate, execute and write outputs; returns the report and exit code."""
    cfg = load_config(path)
    scenario = resolve(cfg["scenario"])
    params = scenario.validate(cfg["parameters"])
    out_dir = Path(os.environ.get(OUTPUT_ENV) or cfg["output"])
    start = time.perf_counter()
    outcome: Outcome = run(scenario, params, cfg["seed"])
    duration = time.perf_counter() - start
    written = []
    for table in outcome.tables:
        atomic_write_csv(out_dir / table.filename, table.header, table.rows)
        written.append(table.filename)
    verdict = "PASS" if outcome.checks and all(c.passed for c in outcome.checks) else "FAIL"
    echo = {k: v for k, v in params.items() if not k.startswith("_")}
    report = {
        "scenario": scenario.name,
        "version": __version__,
        "parameters": _jsonable(echo),
        "seed": cfg["seed"],
        "rng": RNG_NAME,
        "summary": _jsonable(outcome.summary),
        "checks": [_jsonable(c.as_dict()) for c in outcome.checks],
        "verdict": verdict,
        "duration_s": duration,
        "outputs": written + ["report.json", "report.txt"],
    }
    atomic_write_text(out_dir / "report.json", json.dumps(report, indent=2) + "\n")
    atomic_write_text(out_dir / "report.txt", _text_report(report))
    return report, EXIT_OK if verdict == "PASS" else EXIT_FAIL


def _fail(kind: str, exc: BaseException, code: int) -> int:
    msg = " ".join(str(exc).split())
    print(f"{kind}: {msg}", file=sys.stderr)
    return code


def cmd_run(args) -> int:
    try:
        report, code = run_config(args.config)
    except ConfigError as exc:
        return _fail("validation error", exc, EXIT_CONFIG)
    except InputFileError as exc:
        return _fail("io error", exc, EXIT_IO)
    except CyclesError as exc:
        return _fail("numerical error", exc, EXIT_NUMERICAL)
    except OSError as exc:
        return _fail("io error", exc, EXIT_IO)
    for c in report["checks"]:
        print(f"{c['verdict']} {c['name']}: {c['value']!r} {c['relation']} {c['threshold']!r}")
    print(f"{report['verdict']} {report['scenario']}")
    return code


def cmd_list(args) -> int:
    print("\n".join(catalog_lines()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cycles", description="Run periodic-phenomena scenarios from JSON configs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")
    p_run = sub.add_parser("run", help="run one scenario config")
    p_run.add_argument("config", help="path to a JSON scenario config")
    p_run.set_defaults(func=cmd_run)
    p_list = sub.add_parser("list", help="list scenarios and their parameters")
    p_list.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        return cmd_list(args)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
