// Bird's-eye scene rendering: gray track with black bounds, one colored
// footprint per vehicle at the displayed time stamp, thin full paths, the
// VUT's local trajectory over the planning horizon in red, and draggable
// markers for the selected entity.

import { activePoints, type Selection } from "./selection.js";
import { staticPoses } from "./staticview.js";
import { horizonPolyline, poseAt } from "./trajectory.js";
import type { Pose, ScenarioDoc, VehicleDoc } from "./types.js";
import { worldToScreen, type Viewport } from "./viewport.js";

export interface SceneState {
  hoverT: number | null;
  staticView: boolean;
  selection: Selection;
  dragGhost: [number, number] | null;
}

const TRACK_FILL = "#d4d4d4";
const BOUND_STROKE = "#111111";
const HORIZON_STROKE = "#e02020";

const polyline = (
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  pts: [number, number][],
  close = false,
): void => {
  if (pts.length < 2) return;
  ctx.beginPath();
  const [x0, y0] = worldToScreen(vp, pts[0][0], pts[0][1]);
  ctx.moveTo(x0, y0);
  for (let i = 1; i < pts.length; i++) {
    const [x, y] = worldToScreen(vp, pts[i][0], pts[i][1]);
    ctx.lineTo(x, y);
  }
  if (close) ctx.closePath();
};

const footprintCorners = (pose: Pose, vehicle: VehicleDoc): [number, number][] => {
  const hl = vehicle.length_m / 2;
  const hw = vehicle.width_m / 2;
  const c = Math.cos(pose.theta);
  const s = Math.sin(pose.theta);
  const local: [number, number][] = [
    [hl, hw],
    [-hl, hw],
    [-hl, -hw],
    [hl, -hw],
  ];
  return local.map(([lx, ly]) => [pose.x + c * lx - s * ly, pose.y + s * lx + c * ly]);
};

const drawFootprint = (
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  pose: Pose,
  vehicle: VehicleDoc,
  alpha: number,
): void => {
  polyline(ctx, vp, footprintCorners(pose, vehicle), true);
  ctx.globalAlpha = alpha * 0.55;
  ctx.fillStyle = vehicle.color;
  ctx.fill();
  ctx.globalAlpha = alpha;
  ctx.strokeStyle = vehicle.color;
  ctx.lineWidth = 1.5;
  ctx.stroke();
  ctx.globalAlpha = 1;
};

export const renderScene = (
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  doc: ScenarioDoc,
  state: SceneState,
): void => {
  ctx.clearRect(0, 0, vp.width, vp.height);

  const { left, right, raceline } = doc.track;
  if (left.length >= 2 && right.length >= 2) {
    polyline(ctx, vp, [...left, ...[...right].reverse()], true);
    ctx.fillStyle = TRACK_FILL;
    ctx.fill();
  }
  for (const bound of [left, right]) {
    polyline(ctx, vp, bound);
    ctx.strokeStyle = BOUND_STROKE;
    ctx.lineWidth = 2;
    ctx.stroke();
  }
  if (raceline && raceline.length >= 2) {
    polyline(ctx, vp, raceline);
    ctx.strokeStyle = "#888888";
    ctx.setLineDash([6, 6]);
    ctx.lineWidth = 1;
    ctx.stroke();
    ctx.setLineDash([]);
  }

  const t = state.hoverT ?? 0;
  for (const vehicle of doc.vehicles) {
    const table = vehicle.trajectory;
    if (!table) {
      // Unresolved path: raw support polyline only.
      polyline(ctx, vp, vehicle.support);
      ctx.strokeStyle = vehicle.color;
      ctx.setLineDash([4, 4]);
      ctx.lineWidth = 1;
      ctx.stroke();
      ctx.setLineDash([]);
      continue;
    }
    polyline(ctx, vp, table.x.map((x, i) => [x, table.y[i]] as [number, number]));
    ctx.strokeStyle = vehicle.color;
    ctx.lineWidth = 1;
    ctx.stroke();

    if (vehicle.is_vut) {
      const horizon = horizonPolyline(table, t, doc.planning_horizon_s);
      polyline(ctx, vp, horizon);
      ctx.strokeStyle = HORIZON_STROKE;
      ctx.lineWidth = 3;
      ctx.stroke();
    }

    if (state.staticView) {
      for (const pose of staticPoses(table)) drawFootprint(ctx, vp, pose, vehicle, 0.8);
    } else {
      drawFootprint(ctx, vp, poseAt(table, t), vehicle, 1.0);
    }
  }

  drawMarkers(ctx, vp, doc, state);
};

const drawMarkers = (
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  doc: ScenarioDoc,
  state: SceneState,
): void => {
  const pts = activePoints(doc, state.selection);
  ctx.strokeStyle = "#222222";
  ctx.lineWidth = 1.5;
  for (const [x, y] of pts) {
    const [sx, sy] = worldToScreen(vp, x, y);
    ctx.beginPath();
    ctx.moveTo(sx - 5, sy - 5);
    ctx.lineTo(sx + 5, sy + 5);
    ctx.moveTo(sx - 5, sy + 5);
    ctx.lineTo(sx + 5, sy - 5);
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(sx, sy, 7, 0, 2 * Math.PI);
    ctx.stroke();
  }
  if (state.dragGhost) {
    const [sx, sy] = worldToScreen(vp, state.dragGhost[0], state.dragGhost[1]);
    ctx.setLineDash([3, 3]);
    ctx.beginPath();
    ctx.arc(sx, sy, 7, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.setLineDash([]);
  }
};

export const scenePoints = (doc: ScenarioDoc): [number, number][] => [
  ...doc.track.left,
  ...doc.track.right,
  ...doc.vehicles.flatMap((v) => v.support),
];
