// Static-view sampling: every vehicle drawn at a fixed temporal spacing,
// which reads well in print and gives complex scenarios a readable overview.

import { duration, poseAt } from "./trajectory.js";
import type { Pose, TrajectoryTable } from "./types.js";

export const STATIC_SPACING_S = 1.0;

export const staticPoses = (
  table: TrajectoryTable,
  spacing: number = STATIC_SPACING_S,
): Pose[] => {
  const count = Math.floor(duration(table) / spacing) + 1;
  const poses: Pose[] = [];
  for (let k = 0; k < count; k++) poses.push(poseAt(table, k * spacing));
  return poses;
};
