import { describe, expect, it } from "vitest";

import { staticPoses } from "./staticview.js";
import { uniformTable } from "./testdata.js";

describe("staticPoses", () => {
  it("draws floor(duration) + 1 poses at 1 s spacing", () => {
    expect(staticPoses(uniformTable(10, 10, 0.5)).length).toBe(11);
    expect(staticPoses(uniformTable(10, 9.5, 0.5)).length).toBe(10);
  });

  it("places poses at the expected distances", () => {
    const poses = staticPoses(uniformTable(10, 10, 0.5));
    expect(poses[0].x).toBe(0);
    expect(poses[3].x).toBeCloseTo(30, 12);
  });
});
