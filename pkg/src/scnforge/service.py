"""Local HTTP/JSON service: the editing API the browser UI consumes.

One scenario document is held in memory per server; every mutating call
re-resolves the document and returns it in full (splines, profiles,
trajectories), so clients never run any physics. Mutations are serialized
by a lock (single writer, many readers); persistence happens only through
explicit export.
"""
from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import Body, FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .analysis import (
    DEFAULT_SCAN_DT,
    accel_limit_scan,
    collision_scan,
    occupancy_grid,
    offtrack_scan,
    state_at_time,
)
from .errors import EngineError, InvalidInput
from .scenario import (
    Scenario,
    TrackBounds,
    build_document,
    copy_scenario,
    resolve_scenario,
    scenario_from_document,
    validate_scenario,
)


@dataclass
class ReplayCursor:
    """Playback position over a resolved scenario."""

    duration: float
    t_now: float = 0.0
    rate: float = 1.0

    def __post_init__(self) -> None:
        if self.duration < 0.0 or not math.isfinite(self.duration):
            raise InvalidInput(f"duration must be non-negative, got {self.duration}")
        self.seek(self.t_now)
        self.set_rate(self.rate)

    def seek(self, t: float) -> None:
        if not math.isfinite(t):
            raise InvalidInput("seek target must be finite")
        self.t_now = min(max(t, 0.0), self.duration)

    def set_rate(self, rate: float) -> None:
        if not (math.isfinite(rate) and rate >= 0.0):
            raise InvalidInput(f"playback rate must be non-negative, got {rate}")
        self.rate = rate

    @property
    def paused(self) -> bool:
        return self.rate == 0.0

    def advance(self, wall_dt: float) -> float:
        """Move the cursor by scaled wall time; clamps at the scenario end."""
        if wall_dt < 0.0:
            raise InvalidInput("wall time cannot run backwards")
        self.seek(self.t_now + self.rate * wall_dt)
        return self.t_now


class _Session:
    """The single in-memory scenario document plus its write lock."""

    def __init__(self, scenario: Scenario | None):
        self.lock = threading.Lock()
        self.scenario = scenario

    def require(self) -> Scenario:
        if self.scenario is None:
            raise InvalidInput("no scenario loaded; PUT /api/scenario first")
        return self.scenario


def _resolved_payload(sc: Scenario) -> dict:
    resolved = resolve_scenario(sc)
    doc = build_document(sc, resolved=resolved, include_s=True, allow_partial=True)
    findings = [f.__dict__ for f in validate_scenario(sc)]
    for vid, reason in resolved.failures.items():
        findings.append({"severity": "error", "code": "unresolved", "message": f"{vid}: {reason}"})
    return {"scenario": doc, "findings": findings}


def create_app(initial: Scenario | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="scnforge", docs_url=None, redoc_url=None)
    session = _Session(initial)
    app.state.session = session

    @app.exception_handler(EngineError)
    async def _engine_error(request: Request, exc: EngineError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/api/scenario")
    def get_scenario() -> dict:
        return _resolved_payload(session.require())

    @app.put("/api/scenario")
    def put_scenario(doc: dict = Body(...)) -> dict:
        sc = scenario_from_document(doc)
        with session.lock:
            session.scenario = sc
        return _resolved_payload(sc)

    @app.post("/api/track/bounds")
    def set_bounds(body: dict = Body(...)) -> dict:
        with session.lock:
            sc = copy_scenario(session.require())
            left = body.get("left", sc.track.left)
            right = body.get("right", sc.track.right)
            raceline = body.get("raceline", sc.track.raceline)
            sc.track = TrackBounds(left=left, right=right, raceline=raceline)
            session.scenario = sc
        return _resolved_payload(sc)

    @app.post("/api/vehicles/{vehicle_id}/support")
    def add_support(vehicle_id: str, body: dict = Body(...)) -> dict:
        point = _point(body)
        with session.lock:
            sc = copy_scenario(session.require())
            entry = sc.vehicle(vehicle_id)
            index = body.get("index")
            pts = entry.support
            at = pts.shape[0] if index is None else _index(index, pts.shape[0] + 1)
            entry.support = np.insert(pts, at, point, axis=0)
            session.scenario = sc
        return _resolved_payload(sc)

    @app.patch("/api/vehicles/{vehicle_id}/support")
    def move_support(vehicle_id: str, body: dict = Body(...)) -> dict:
        point = _point(body)
        with session.lock:
            sc = copy_scenario(session.require())
            entry = sc.vehicle(vehicle_id)
            at = _index(body.get("index"), entry.support.shape[0])
            entry.support = entry.support.copy()
            entry.support[at] = point
            session.scenario = sc
        return _resolved_payload(sc)

    @app.delete("/api/vehicles/{vehicle_id}/support")
    def delete_support(vehicle_id: str, index: int = Query(...)) -> dict:
        with session.lock:
            sc = copy_scenario(session.require())
            entry = sc.vehicle(vehicle_id)
            at = _index(index, entry.support.shape[0])
            entry.support = np.delete(entry.support, at, axis=0)
            session.scenario = sc
        return _resolved_payload(sc)

    @app.patch("/api/vehicles/{vehicle_id}/profile")
    def edit_profile(vehicle_id: str, body: dict = Body(...)) -> dict:
        edits = body.get("edits")
        if not isinstance(edits, list) or not edits:
            raise InvalidInput("body must carry a non-empty 'edits' list of [s, v] pairs")
        with session.lock:
            sc = copy_scenario(session.require())
            entry = sc.vehicle(vehicle_id)
            entry.profile_edits = entry.profile_edits + [(float(s), float(v)) for s, v in edits]
            session.scenario = sc
        return _resolved_payload(sc)

    @app.get("/api/state")
    def get_state(t: float = Query(...)) -> dict:
        sc = session.require()
        if t < 0.0:
            raise InvalidInput(f"time stamp must be non-negative, got {t}")
        resolved = resolve_scenario(sc)
        states = []
        for entry in sc.vehicles:
            traj = resolved.trajectories.get(entry.spec.id)
            if traj is None:
                continue
            states.append({"id": entry.spec.id, **state_at_time(traj, t).as_dict()})

        horizon = None
        try:
            vut = sc.vut()
            traj = resolved.trajectories.get(vut.spec.id)
        except InvalidInput:
            traj = None
        if traj is not None:
            t_hi = min(t + sc.planning_horizon, traj.duration)
            mask = (traj.t >= t) & (traj.t <= t_hi)
            pts_t = traj.t[mask].tolist()
            pts_x = traj.x[mask].tolist()
            pts_y = traj.y[mask].tolist()
            if t <= traj.duration:
                s0 = state_at_time(traj, t)
                if not pts_t or pts_t[0] > t:
                    pts_t.insert(0, t)
                    pts_x.insert(0, s0.x)
                    pts_y.insert(0, s0.y)
            horizon = {"t": pts_t, "x": pts_x, "y": pts_y}
        return {"t": t, "states": states, "vut_horizon": horizon}

    @app.post("/api/scans")
    def run_scans(body: dict = Body(default={})) -> dict:
        sc = session.require()
        dt = float(body.get("dt", DEFAULT_SCAN_DT))
        resolved = resolve_scenario(sc)
        events = []
        if body.get("collision", True):
            events += collision_scan(sc, dt, resolved=resolved)
        if body.get("offtrack", True):
            events += offtrack_scan(sc, dt, resolved=resolved)
        a_limit = body.get("accel_limit")
        if a_limit is not None:
            events += accel_limit_scan(sc, float(a_limit), resolved=resolved)
        return {"events": [e.as_dict() for e in events]}

    @app.get("/api/export/grid")
    def export_grid(res: float = Query(...)) -> PlainTextResponse:
        sc = session.require()
        grid = occupancy_grid(sc.track, res)
        return PlainTextResponse(grid.to_text())

    @app.get("/api/export/scenario")
    def export_document() -> dict:
        sc = session.require()
        return build_document(sc, include_s=False)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def _point(body: dict) -> tuple[float, float]:
    pt = body.get("point")
    if (
        not isinstance(pt, (list, tuple))
        or len(pt) != 2
        or not all(isinstance(c, (int, float)) and math.isfinite(c) for c in pt)
    ):
        raise InvalidInput("body must carry 'point': [x, y]")
    return float(pt[0]), float(pt[1])


def _index(index, count: int) -> int:
    if not isinstance(index, int) or isinstance(index, bool):
        raise InvalidInput("body must carry an integer 'index'")
    if not 0 <= index < count:
        raise InvalidInput(f"index {index} out of range [0, {count - 1}]")
    return index


def load_scenario_file(path: str | Path) -> Scenario:
    from .scenario import import_scenario

    return import_scenario(Path(path).read_text(encoding="utf-8"))


def serve(
    port: int = 8520,
    host: str = "127.0.0.1",
    scenario_path: str | None = None,
    ui_dir: str | None = None,
) -> None:
    """Run the editing service (blocking)."""
    import uvicorn

    initial = load_scenario_file(scenario_path) if scenario_path else None
    app = create_app(initial, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
