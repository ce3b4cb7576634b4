// Marker hit-testing in screen space.

import type { Viewport } from "./viewport.js";
import { worldToScreen } from "./viewport.js";

export const MARKER_HIT_RADIUS_PX = 10;

export const nearestPointIndex = (
  points: [number, number][],
  vp: Viewport,
  px: number,
  py: number,
  radiusPx: number = MARKER_HIT_RADIUS_PX,
): number => {
  let best = -1;
  let bestD2 = radiusPx * radiusPx;
  for (let i = 0; i < points.length; i++) {
    const [sx, sy] = worldToScreen(vp, points[i][0], points[i][1]);
    const d2 = (sx - px) * (sx - px) + (sy - py) * (sy - py);
    if (d2 <= bestD2) {
      bestD2 = d2;
      best = i;
    }
  }
  return best;
};
