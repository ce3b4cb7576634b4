// World (meters, y up) to canvas (pixels, y down) mapping with pan/zoom.

export interface Viewport {
  scale: number; // pixels per meter
  cx: number; // world x at the canvas center
  cy: number;
  width: number;
  height: number;
}

export const worldToScreen = (vp: Viewport, x: number, y: number): [number, number] => [
  vp.width / 2 + (x - vp.cx) * vp.scale,
  vp.height / 2 - (y - vp.cy) * vp.scale,
];

export const screenToWorld = (vp: Viewport, px: number, py: number): [number, number] => [
  vp.cx + (px - vp.width / 2) / vp.scale,
  vp.cy - (py - vp.height / 2) / vp.scale,
];

export const fitPoints = (
  points: [number, number][],
  width: number,
  height: number,
  marginPx = 30,
): Viewport => {
  if (!points.length) return { scale: 5, cx: 0, cy: 0, width, height };
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const [x, y] of points) {
    xMin = Math.min(xMin, x);
    xMax = Math.max(xMax, x);
    yMin = Math.min(yMin, y);
    yMax = Math.max(yMax, y);
  }
  const spanX = Math.max(xMax - xMin, 1e-6);
  const spanY = Math.max(yMax - yMin, 1e-6);
  const scale = Math.min(
    (width - 2 * marginPx) / spanX,
    (height - 2 * marginPx) / spanY,
  );
  return {
    scale: Math.max(scale, 1e-6),
    cx: (xMin + xMax) / 2,
    cy: (yMin + yMax) / 2,
    width,
    height,
  };
};

export const zoomAt = (vp: Viewport, px: number, py: number, factor: number): Viewport => {
  const [wx, wy] = screenToWorld(vp, px, py);
  const scale = Math.min(Math.max(vp.scale * factor, 0.05), 500);
  // Keep the world point under the cursor fixed.
  const cx = wx - (px - vp.width / 2) / scale;
  const cy = wy + (py - vp.height / 2) / scale;
  return { ...vp, scale, cx, cy };
};

export const panBy = (vp: Viewport, dxPx: number, dyPx: number): Viewport => ({
  ...vp,
  cx: vp.cx - dxPx / vp.scale,
  cy: vp.cy + dyPx / vp.scale,
});
