// Wire types for the scnforge service (see ../../API.md). The trajectory
// tables are the only source of motion data in the client: the browser
// never fits splines or solves velocity profiles.

export interface TrajectoryTable {
  s: number[]; // service-only extension: station arc length
  t: number[];
  x: number[];
  y: number[];
  theta: number[];
  kappa: number[];
  v: number[];
  a_lon: number[];
  a_lat: number[];
  a_comb: number[];
}

export interface VehicleDoc {
  id: string;
  is_vut: boolean;
  length_m: number;
  width_m: number;
  color: string;
  v_start: number | null;
  v_end: number | null;
  support: [number, number][];
  profile_edits: [number, number][];
  trajectory: TrajectoryTable | null;
}

export interface TrackDoc {
  left: [number, number][];
  right: [number, number][];
  raceline?: [number, number][];
}

export interface ScenarioDoc {
  schema_version: string;
  name: string;
  friction: { a_max: number; v_lim: number };
  planning_horizon_s: number;
  sampling_step_m: number;
  track: TrackDoc;
  vehicles: VehicleDoc[];
}

export interface Finding {
  severity: "error" | "warning";
  code: string;
  message: string;
}

export interface ResolvedPayload {
  scenario: ScenarioDoc;
  findings: Finding[];
}

export interface ScanEvent {
  kind: "collision" | "offtrack" | "accel_violation";
  t_first: number;
  participants: string[];
  detail: Record<string, number>;
}

export interface Pose {
  x: number;
  y: number;
  theta: number;
  v: number;
  stopped: boolean;
}
