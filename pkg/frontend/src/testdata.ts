// Shared fixtures for the unit tests: a small document shaped exactly like
// a service response (uniform motion; values chosen hand-checkable).

import type { ResolvedPayload, ScenarioDoc, TrajectoryTable, VehicleDoc } from "./types.js";

export const uniformTable = (speed = 10, seconds = 10, dt = 0.5): TrajectoryTable => {
  const n = Math.round(seconds / dt) + 1;
  const t = Array.from({ length: n }, (_, i) => i * dt);
  const s = t.map((ti) => speed * ti);
  return {
    s,
    t,
    x: [...s],
    y: s.map(() => 0),
    theta: s.map(() => 0),
    kappa: s.map(() => 0),
    v: s.map(() => speed),
    a_lon: s.map(() => 0),
    a_lat: s.map(() => 0),
    a_comb: s.map(() => 0),
  };
};

export const vehicleDoc = (overrides: Partial<VehicleDoc> = {}): VehicleDoc => ({
  id: "ego",
  is_vut: true,
  length_m: 4.0,
  width_m: 2.0,
  color: "#ff7f0e",
  v_start: 10,
  v_end: null,
  support: [
    [0, 0],
    [50, 0],
    [100, 0],
  ],
  profile_edits: [],
  trajectory: uniformTable(),
  ...overrides,
});

export const scenarioDoc = (overrides: Partial<ScenarioDoc> = {}): ScenarioDoc => ({
  schema_version: "1",
  name: "test",
  friction: { a_max: 13, v_lim: 60 },
  planning_horizon_s: 3,
  sampling_step_m: 0.5,
  track: {
    left: [
      [-10, 6],
      [110, 6],
    ],
    right: [
      [-10, -6],
      [110, -6],
    ],
  },
  vehicles: [vehicleDoc()],
  ...overrides,
});

export const payload = (doc: ScenarioDoc = scenarioDoc()): ResolvedPayload => ({
  scenario: doc,
  findings: [],
});
