"""Command-line interface: validate, scan, ci, export, serve."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .analysis import (
    DEFAULT_SCAN_DT,
    GroundTruthLabel,
    Verdict,
    accel_limit_scan,
    collision_scan,
    compare_ground_truth,
    occupancy_grid,
    offtrack_scan,
    state_at_time,
)
from .errors import EngineError
from .scenario import (
    Scenario,
    export_bounds_csv,
    import_scenario,
    resolve_scenario,
    validate_scenario,
)

SCENARIO_SUFFIX = ".scn.json"
LABELS_SUFFIX = ".labels.json"

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2


def fixtures_dir() -> Path:
    """Bundled fixture directory; SCNFORGE_FIXTURES overrides it."""
    override = os.environ.get("SCNFORGE_FIXTURES")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "fixtures"


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _nonnegative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0.0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _load(path: str) -> Scenario:
    return import_scenario(Path(path).read_text(encoding="utf-8"))


def cli_validate(paths: list[str]) -> int:
    """Import and structurally validate each file; exit 0 iff all clean."""
    worst = EXIT_OK
    for path in paths:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            print(f"{path}: IO error: {exc}")
            worst = max(worst, EXIT_USAGE)
            continue
        try:
            sc = import_scenario(text)
        except EngineError as exc:
            print(f"{path}: error: {exc}")
            worst = max(worst, EXIT_FINDINGS)
            continue
        findings = validate_scenario(sc)
        for f in findings:
            print(f"{path}: {f.severity}: {f.message}")
        if any(f.severity == "error" for f in findings):
            worst = max(worst, EXIT_FINDINGS)
        else:
            print(f"{path}: ok")
    return worst


def cli_scan(
    path: str,
    collision: bool,
    offtrack: bool,
    accel: float | None,
    dt: float,
) -> int:
    """Run the selected scans and print the event list as JSON."""
    sc = _load(path)
    resolved = resolve_scenario(sc)
    events = []
    if collision:
        events += collision_scan(sc, dt, resolved=resolved)
    if offtrack:
        events += offtrack_scan(sc, dt, resolved=resolved)
    if accel is not None:
        events += accel_limit_scan(sc, accel, resolved=resolved)
    print(json.dumps([e.as_dict() for e in events], indent=1))
    return EXIT_OK


def load_labels(path: Path) -> list[GroundTruthLabel]:
    raw = json.loads(path.read_text(encoding="utf-8"))
    return [
        GroundTruthLabel(
            kind=item["kind"],
            participants=tuple(item["participants"]),
            window=(float(item["window"][0]), float(item["window"][1])),
        )
        for item in raw
    ]


def run_all_scans(sc: Scenario, dt: float = DEFAULT_SCAN_DT):
    """Collision, offtrack and acceleration scans (limit = scenario a_max)."""
    resolved = resolve_scenario(sc)
    events = collision_scan(sc, dt, resolved=resolved)
    events += offtrack_scan(sc, dt, resolved=resolved)
    events += accel_limit_scan(sc, sc.friction.a_max, resolved=resolved)
    return events


@dataclass
class CiReport:
    verdicts: list[tuple[str, Verdict | None, str]]

    @property
    def n_pass(self) -> int:
        return sum(1 for _, v, _ in self.verdicts if v is not None and v.passed)

    @property
    def n_fail(self) -> int:
        return len(self.verdicts) - self.n_pass

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.n_fail == 0 else EXIT_FINDINGS


def run_ci(scenario_dir: Path, labels_dir: Path, dt: float = DEFAULT_SCAN_DT) -> CiReport:
    verdicts: list[tuple[str, Verdict | None, str]] = []
    for sc_path in sorted(scenario_dir.glob(f"*{SCENARIO_SUFFIX}")):
        stem = sc_path.name[: -len(SCENARIO_SUFFIX)]
        label_path = labels_dir / f"{stem}{LABELS_SUFFIX}"
        if not label_path.is_file():
            verdicts.append((stem, None, f"no label file {label_path.name}"))
            continue
        try:
            sc = _load(str(sc_path))
            events = run_all_scans(sc, dt)
            labels = load_labels(label_path)
        except (EngineError, OSError, KeyError, ValueError) as exc:
            verdicts.append((stem, None, f"error: {exc}"))
            continue
        verdict = compare_ground_truth(events, labels)
        detail = ""
        if not verdict.passed:
            parts = []
            if verdict.missed:
                parts.append(f"{len(verdict.missed)} missed label(s)")
            if verdict.unexpected:
                parts.append(f"{len(verdict.unexpected)} unexpected event(s)")
            detail = ", ".join(parts)
        verdicts.append((stem, verdict, detail))
    return CiReport(verdicts=verdicts)


def cli_ci(scenario_dir: str, labels_dir: str, dt: float) -> int:
    """Scan every scenario, compare against its labels, report pass/fail."""
    report = run_ci(Path(scenario_dir), Path(labels_dir), dt)
    for name, verdict, detail in report.verdicts:
        if verdict is not None and verdict.passed:
            print(f"PASS {name}")
        else:
            print(f"FAIL {name}: {detail}")
    print(f"{report.n_pass} passed, {report.n_fail} failed")
    return report.exit_code


def cli_export(
    path: str,
    grid: float | None,
    bounds_csv: bool,
    states: bool,
    t: float | None,
    out: str | None,
) -> int:
    """Emit an occupancy grid, a bounds CSV, or per-vehicle states at a time."""
    sc = _load(path)
    if grid is not None:
        text = occupancy_grid(sc.track, grid).to_text()
    elif bounds_csv:
        text = export_bounds_csv(sc.track)
    else:
        resolved = resolve_scenario(sc)
        rows = []
        for entry in sc.vehicles:
            traj = resolved.trajectories.get(entry.spec.id)
            if traj is None:
                continue
            rows.append({"id": entry.spec.id, **state_at_time(traj, t).as_dict()})
        text = json.dumps(rows, indent=1) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scnforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="structurally validate scenario files")
    p_val.add_argument("paths", nargs="+", metavar="SCENARIO")

    p_scan = sub.add_parser("scan", help="run safety scans on a scenario")
    p_scan.add_argument("path", metavar="SCENARIO")
    p_scan.add_argument("--collision", action="store_true")
    p_scan.add_argument("--offtrack", action="store_true")
    p_scan.add_argument("--accel", type=_positive_float, metavar="LIMIT")
    p_scan.add_argument("--dt", type=_positive_float, default=DEFAULT_SCAN_DT)

    p_ci = sub.add_parser("ci", help="compare scan results against ground-truth labels")
    p_ci.add_argument("scenario_dir")
    p_ci.add_argument("labels_dir")
    p_ci.add_argument("--dt", type=_positive_float, default=DEFAULT_SCAN_DT)

    p_exp = sub.add_parser("export", help="emit derived artifacts from a scenario")
    p_exp.add_argument("path", metavar="SCENARIO")
    mode = p_exp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--grid", type=_positive_float, metavar="RESOLUTION")
    mode.add_argument("--bounds-csv", action="store_true")
    mode.add_argument("--states", action="store_true")
    p_exp.add_argument("--t", type=_nonnegative_float)
    p_exp.add_argument("--out", metavar="FILE")

    p_srv = sub.add_parser("serve", help="run the local editing service")
    p_srv.add_argument("scenario", nargs="?", default=None)
    p_srv.add_argument("--port", type=int, default=8520)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--ui-dir", default=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return cli_validate(args.paths)
        if args.command == "scan":
            return cli_scan(args.path, args.collision, args.offtrack, args.accel, args.dt)
        if args.command == "ci":
            return cli_ci(args.scenario_dir, args.labels_dir, args.dt)
        if args.command == "export":
            if args.states and args.t is None:
                parser.error("--states requires --t")
            return cli_export(args.path, args.grid, args.bounds_csv, args.states, args.t, args.out)
        if args.command == "serve":
            from .service import serve

            ui_dir = args.ui_dir
            if ui_dir is None:
                candidate = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
                ui_dir = str(candidate) if candidate.is_dir() else None
            serve(port=args.port, host=args.host, scenario_path=args.scenario, ui_dir=ui_dir)
            return EXIT_OK
    except OSError as exc:
        print(f"IO error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
