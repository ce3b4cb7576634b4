// Presentation-level lookups over service trajectory tables. The semantics
// mirror the service's own interpolation contract (API.md): exact rows at
// stored timestamps, linear interpolation between rows with shortest-arc
// headings, and a rest pose past the final row.

import type { Pose, TrajectoryTable } from "./types.js";

export const duration = (table: TrajectoryTable): number =>
  table.t.length ? table.t[table.t.length - 1] : 0;

export const wrapAngle = (a: number): number => {
  let r = (a + Math.PI) % (2 * Math.PI);
  if (r <= 0) r += 2 * Math.PI;
  return r - Math.PI;
};

/** Index of the last timestamp <= t (t within range). */
const rowBefore = (ts: number[], t: number): number => {
  let lo = 0;
  let hi = ts.length - 1;
  while (lo < hi) {
    const mid = (lo + hi + 1) >> 1;
    if (ts[mid] <= t) lo = mid;
    else hi = mid - 1;
  }
  return lo;
};

export const poseAt = (table: TrajectoryTable, t: number): Pose => {
  const n = table.t.length;
  const last = n - 1;
  if (t >= table.t[last]) {
    const atEnd = t === table.t[last];
    return {
      x: table.x[last],
      y: table.y[last],
      theta: table.theta[last],
      v: atEnd ? table.v[last] : 0,
      stopped: !atEnd,
    };
  }
  if (t <= table.t[0]) {
    return { x: table.x[0], y: table.y[0], theta: table.theta[0], v: table.v[0], stopped: false };
  }
  const i = rowBefore(table.t, t);
  if (table.t[i] === t) {
    return { x: table.x[i], y: table.y[i], theta: table.theta[i], v: table.v[i], stopped: false };
  }
  const w = (t - table.t[i]) / (table.t[i + 1] - table.t[i]);
  return {
    x: table.x[i] + w * (table.x[i + 1] - table.x[i]),
    y: table.y[i] + w * (table.y[i + 1] - table.y[i]),
    theta: wrapAngle(table.theta[i] + w * wrapAngle(table.theta[i + 1] - table.theta[i])),
    v: table.v[i] + w * (table.v[i + 1] - table.v[i]),
    stopped: false,
  };
};

/** Map a distance-along-path to its timestamp (for hovering the v-s plot). */
export const sToT = (table: TrajectoryTable, s: number): number => {
  const n = table.s.length;
  if (s <= table.s[0]) return table.t[0];
  if (s >= table.s[n - 1]) return table.t[n - 1];
  const i = rowBefore(table.s, s);
  if (table.s[i] === s) return table.t[i];
  const w = (s - table.s[i]) / (table.s[i + 1] - table.s[i]);
  return table.t[i] + w * (table.t[i + 1] - table.t[i]);
};

/** Table rows covering [t0, t0 + horizon], led by the interpolated pose at t0. */
export const horizonPolyline = (
  table: TrajectoryTable,
  t0: number,
  horizon: number,
): [number, number][] => {
  if (t0 > duration(table)) {
    const p = poseAt(table, t0);
    return [[p.x, p.y]];
  }
  const tEnd = Math.min(t0 + horizon, duration(table));
  const start = poseAt(table, t0);
  const pts: [number, number][] = [[start.x, start.y]];
  for (let i = 0; i < table.t.length; i++) {
    if (table.t[i] > t0 && table.t[i] <= tEnd) pts.push([table.x[i], table.y[i]]);
  }
  return pts;
};
