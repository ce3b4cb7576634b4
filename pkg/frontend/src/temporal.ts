// The temporal pane: three stacked plots sharing one canvas. Top shows the
// longitudinal, lateral, and combined acceleration of every vehicle over
// time (with a dashed guide at the scenario's acceleration limit); middle
// shows velocity over time; bottom shows velocity over distance, which
// keeps its x positions stable while velocities are edited. A red marker
// mirrors the hovered time stamp.

import { duration } from "./trajectory.js";
import type { ScenarioDoc, TrajectoryTable } from "./types.js";

export interface PlotBox {
  x0: number;
  y0: number;
  width: number;
  height: number;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export type PlotId = "accel" | "v_t" | "v_s";

export interface TemporalLayout {
  accel: PlotBox;
  v_t: PlotBox;
  v_s: PlotBox;
}

const PAD_L = 46;
const PAD_R = 12;
const PAD_V = 26;

export const toScreenX = (box: PlotBox, x: number): number =>
  box.x0 + ((x - box.xMin) / (box.xMax - box.xMin || 1)) * box.width;

export const toScreenY = (box: PlotBox, y: number): number =>
  box.y0 + box.height - ((y - box.yMin) / (box.yMax - box.yMin || 1)) * box.height;

export const fromScreenX = (box: PlotBox, px: number): number =>
  box.xMin + ((px - box.x0) / (box.width || 1)) * (box.xMax - box.xMin);

export const fromScreenY = (box: PlotBox, py: number): number =>
  box.yMin + ((box.y0 + box.height - py) / (box.height || 1)) * (box.yMax - box.yMin);

export const inBox = (box: PlotBox, px: number, py: number): boolean =>
  px >= box.x0 && px <= box.x0 + box.width && py >= box.y0 && py <= box.y0 + box.height;

const tables = (doc: ScenarioDoc): [string, string, TrajectoryTable][] =>
  doc.vehicles
    .filter((v) => v.trajectory)
    .map((v) => [v.id, v.color, v.trajectory as TrajectoryTable]);

export const temporalLayout = (
  doc: ScenarioDoc,
  width: number,
  height: number,
): TemporalLayout => {
  const all = tables(doc);
  const tMax = Math.max(1, ...all.map(([, , tb]) => duration(tb)));
  const sMax = Math.max(1, ...all.map(([, , tb]) => tb.s[tb.s.length - 1]));
  const vMax = Math.max(doc.friction.a_max, ...all.map(([, , tb]) => Math.max(...tb.v)));
  let aMax = doc.friction.a_max;
  let aMin = 0;
  for (const [, , tb] of all) {
    aMax = Math.max(aMax, ...tb.a_comb);
    aMin = Math.min(aMin, ...tb.a_lon, ...tb.a_lat);
  }
  const rowH = (height - 4 * PAD_V) / 3;
  const plotW = width - PAD_L - PAD_R;
  const box = (row: number, xMax: number, yMin: number, yMax: number): PlotBox => ({
    x0: PAD_L,
    y0: PAD_V + row * (rowH + PAD_V),
    width: plotW,
    height: rowH,
    xMin: 0,
    xMax,
    yMin,
    yMax: yMax * 1.05,
  });
  return {
    accel: box(0, tMax, aMin * 1.05 - 0.5, aMax),
    v_t: box(1, tMax, 0, vMax),
    v_s: box(2, sMax, 0, vMax),
  };
};

const series = (
  ctx: CanvasRenderingContext2D,
  box: PlotBox,
  xs: number[],
  ys: number[],
  color: string,
  width: number,
): void => {
  if (xs.length < 2) return;
  ctx.beginPath();
  ctx.moveTo(toScreenX(box, xs[0]), toScreenY(box, ys[0]));
  for (let i = 1; i < xs.length; i++) ctx.lineTo(toScreenX(box, xs[i]), toScreenY(box, ys[i]));
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.stroke();
};

const frame = (
  ctx: CanvasRenderingContext2D,
  box: PlotBox,
  title: string,
  xLabel: string,
): void => {
  ctx.strokeStyle = "#999999";
  ctx.lineWidth = 1;
  ctx.strokeRect(box.x0, box.y0, box.width, box.height);
  ctx.fillStyle = "#333333";
  ctx.font = "11px system-ui";
  ctx.fillText(title, box.x0 + 4, box.y0 - 6);
  ctx.fillText(xLabel, box.x0 + box.width - 30, box.y0 + box.height + 14);
  ctx.fillText(box.yMax.toFixed(1), 4, box.y0 + 10);
  ctx.fillText(box.yMin.toFixed(1), 4, box.y0 + box.height);
  if (box.yMin < 0 && box.yMax > 0) {
    const y0 = toScreenY(box, 0);
    ctx.strokeStyle = "#dddddd";
    ctx.beginPath();
    ctx.moveTo(box.x0, y0);
    ctx.lineTo(box.x0 + box.width, y0);
    ctx.stroke();
  }
};

export const renderTemporal = (
  ctx: CanvasRenderingContext2D,
  doc: ScenarioDoc,
  layout: TemporalLayout,
  width: number,
  height: number,
  hoverT: number | null,
): void => {
  ctx.clearRect(0, 0, width, height);
  frame(ctx, layout.accel, "acceleration [m/s²]", "t [s]");
  frame(ctx, layout.v_t, "velocity [m/s]", "t [s]");
  frame(ctx, layout.v_s, "velocity over distance [m/s]", "s [m]");

  // acceleration-limit guide
  const guideY = toScreenY(layout.accel, doc.friction.a_max);
  ctx.setLineDash([5, 5]);
  ctx.strokeStyle = "#c02020";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(layout.accel.x0, guideY);
  ctx.lineTo(layout.accel.x0 + layout.accel.width, guideY);
  ctx.stroke();
  ctx.setLineDash([]);

  for (const [, color, tb] of tables(doc)) {
    series(ctx, layout.accel, tb.t, tb.a_lon, color, 0.7);
    series(ctx, layout.accel, tb.t, tb.a_lat, color, 0.7);
    series(ctx, layout.accel, tb.t, tb.a_comb, color, 1.6);
    series(ctx, layout.v_t, tb.t, tb.v, color, 1.4);
    series(ctx, layout.v_s, tb.s, tb.v, color, 1.4);
  }

  if (hoverT !== null) {
    for (const box of [layout.accel, layout.v_t]) {
      const x = toScreenX(box, hoverT);
      ctx.strokeStyle = "#e02020";
      ctx.lineWidth = 1;
      ctx.beginPath();
      ctx.moveTo(x, box.y0);
      ctx.lineTo(x, box.y0 + box.height);
      ctx.stroke();
    }
  }
};
