// Editor entry point: one scene canvas, one temporal canvas, and the
// control strip. All motion data comes from the service; every edit posts
// a mutation and applies the returned re-resolved scenario.

import { ApiClient } from "./api.js";
import { thinBatch } from "./edits.js";
import { nearestPointIndex } from "./hittest.js";
import { MutationQueue } from "./mutations.js";
import {
  activePoints,
  NONE,
  sameSelection,
  selectionLabel,
  selectionOptions,
  type Selection,
} from "./selection.js";
import { renderScene, scenePoints, type SceneState } from "./scene.js";
import {
  fromScreenX,
  inBox,
  renderTemporal,
  temporalLayout,
  type TemporalLayout,
} from "./temporal.js";
import { duration, sToT } from "./trajectory.js";
import type { ResolvedPayload, ScenarioDoc } from "./types.js";
import { fitPoints, panBy, screenToWorld, zoomAt, type Viewport } from "./viewport.js";

const api = new ApiClient();

interface EditorState {
  doc: ScenarioDoc | null;
  findings: { severity: string; message: string }[];
  selection: Selection;
  hoverT: number | null;
  staticView: boolean;
  playRate: number;
  dragGhost: [number, number] | null;
  vp: Viewport | null;
}

const state: EditorState = {
  doc: null,
  findings: [],
  selection: NONE,
  hoverT: null,
  staticView: false,
  playRate: 0,
  dragGhost: null,
  vp: null,
};

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

const sceneCanvas = $("scene") as unknown as HTMLCanvasElement;
const temporalCanvas = $("temporal") as unknown as HTMLCanvasElement;
const toast = $("toast");

let layout: TemporalLayout | null = null;
let needsRender = true;
const invalidate = (): void => {
  needsRender = true;
};

const queue = new MutationQueue({
  onApply: (payload: ResolvedPayload) => {
    applyPayload(payload);
  },
  onError: (message: string) => {
    toast.textContent = message;
    toast.classList.add("visible");
    window.setTimeout(() => toast.classList.remove("visible"), 4000);
  },
  refetch: () => api.getScenario(),
});

const applyPayload = (payload: ResolvedPayload): void => {
  const first = state.doc === null;
  state.doc = payload.scenario;
  state.findings = payload.findings;
  layout = null; // plot ranges follow the document
  if (first) resetView();
  renderControls();
  invalidate();
};

const resetView = (): void => {
  if (!state.doc) return;
  state.vp = fitPoints(scenePoints(state.doc), sceneCanvas.clientWidth, sceneCanvas.clientHeight);
};

const scenarioEnd = (): number => {
  if (!state.doc) return 0;
  let end = 0;
  for (const v of state.doc.vehicles) if (v.trajectory) end = Math.max(end, duration(v.trajectory));
  return end;
};

// ---------------------------------------------------------------------------
// Controls

const renderControls = (): void => {
  const doc = state.doc;
  if (!doc) return;
  const box = $("entities");
  box.innerHTML = "";
  for (const opt of selectionOptions(doc)) {
    const label = document.createElement("label");
    const radio = document.createElement("input");
    radio.type = "radio";
    radio.name = "entity";
    radio.checked = sameSelection(opt, state.selection);
    radio.addEventListener("change", () => {
      state.selection = opt;
      invalidate();
    });
    label.appendChild(radio);
    label.appendChild(document.createTextNode(selectionLabel(opt)));
    box.appendChild(label);
  }
  $("name").textContent = doc.name;
  const errs = state.findings.filter((f) => f.severity === "error");
  $("findings").textContent = errs.length ? errs.map((f) => f.message).join("; ") : "";
};

$("static-view").addEventListener("change", (ev) => {
  state.staticView = (ev.target as HTMLInputElement).checked;
  invalidate();
});

$("rate").addEventListener("input", (ev) => {
  state.playRate = Number((ev.target as HTMLInputElement).value);
  $("rate-label").textContent = `${state.playRate.toFixed(1)}x`;
});

$("fit").addEventListener("click", () => {
  resetView();
  invalidate();
});

$("layout-toggle").addEventListener("click", () => {
  document.body.classList.toggle("stacked");
  resize();
});

// ---------------------------------------------------------------------------
// Scene gestures: add, drag, delete support/bound points

interface DragState {
  index: number;
}
let drag: DragState | null = null;

const submitPointMove = (index: number, point: [number, number]): void => {
  const sel = state.selection;
  const doc = state.doc;
  if (!doc) return;
  if (sel.kind === "vehicle") {
    queue.submit(() => api.moveSupport(sel.id, index, point));
  } else if (sel.kind === "left_bound" || sel.kind === "right_bound") {
    const pts = activePoints(doc, sel).map((p) => [...p] as [number, number]);
    pts[index] = point;
    queue.submit(() =>
      api.setBounds(sel.kind === "left_bound" ? { left: pts } : { right: pts }),
    );
  }
};

sceneCanvas.addEventListener("pointerdown", (ev) => {
  if (!state.doc || !state.vp) return;
  const rect = sceneCanvas.getBoundingClientRect();
  const px = ev.clientX - rect.left;
  const py = ev.clientY - rect.top;
  const pts = activePoints(state.doc, state.selection);
  const hit = nearestPointIndex(pts, state.vp, px, py);

  if (ev.button === 2 || ev.ctrlKey) {
    if (hit >= 0) deletePoint(hit);
    ev.preventDefault();
    return;
  }
  if (ev.button !== 0) return;

  if (hit >= 0) {
    drag = { index: hit };
    sceneCanvas.setPointerCapture(ev.pointerId);
  } else if (state.selection.kind !== "none") {
    addPoint(screenToWorld(state.vp, px, py));
  } else {
    drag = null;
    panning = { x: ev.clientX, y: ev.clientY };
  }
});

let panning: { x: number; y: number } | null = null;

sceneCanvas.addEventListener("pointermove", (ev) => {
  if (!state.doc || !state.vp) return;
  if (panning) {
    state.vp = panBy(state.vp, ev.clientX - panning.x, ev.clientY - panning.y);
    panning = { x: ev.clientX, y: ev.clientY };
    invalidate();
    return;
  }
  if (!drag) return;
  const rect = sceneCanvas.getBoundingClientRect();
  const world = screenToWorld(state.vp, ev.clientX - rect.left, ev.clientY - rect.top);
  state.dragGhost = world;
  submitPointMove(drag.index, [round2(world[0]), round2(world[1])]);
  invalidate();
});

const endDrag = (): void => {
  drag = null;
  panning = null;
  state.dragGhost = null;
  invalidate();
};
sceneCanvas.addEventListener("pointerup", endDrag);
sceneCanvas.addEventListener("pointercancel", endDrag);
sceneCanvas.addEventListener("contextmenu", (ev) => ev.preventDefault());

sceneCanvas.addEventListener("wheel", (ev) => {
  if (!state.vp) return;
  const rect = sceneCanvas.getBoundingClientRect();
  state.vp = zoomAt(
    state.vp,
    ev.clientX - rect.left,
    ev.clientY - rect.top,
    ev.deltaY < 0 ? 1.15 : 1 / 1.15,
  );
  ev.preventDefault();
  invalidate();
});

const round2 = (x: number): number => Math.round(x * 100) / 100;

const addPoint = (world: [number, number]): void => {
  const sel = state.selection;
  const doc = state.doc;
  if (!doc) return;
  const point: [number, number] = [round2(world[0]), round2(world[1])];
  if (sel.kind === "vehicle") {
    queue.submit(() => api.addSupport(sel.id, point));
  } else if (sel.kind === "left_bound" || sel.kind === "right_bound") {
    const pts = activePoints(doc, sel).map((p) => [...p] as [number, number]);
    pts.push(point);
    queue.submit(() =>
      api.setBounds(sel.kind === "left_bound" ? { left: pts } : { right: pts }),
    );
  }
};

const deletePoint = (index: number): void => {
  const sel = state.selection;
  const doc = state.doc;
  if (!doc) return;
  if (sel.kind === "vehicle") {
    queue.submit(() => api.deleteSupport(sel.id, index));
  } else if (sel.kind === "left_bound" || sel.kind === "right_bound") {
    const pts = activePoints(doc, sel).map((p) => [...p] as [number, number]);
    pts.splice(index, 1);
    queue.submit(() =>
      api.setBounds(sel.kind === "left_bound" ? { left: pts } : { right: pts }),
    );
  }
};

// ---------------------------------------------------------------------------
// Temporal gestures: hover scrubbing and batch velocity drags

interface VelocityDrag {
  vehicleId: string;
  samples: [number, number][];
}
let velocityDrag: VelocityDrag | null = null;

const hoveredVehicleTable = () => {
  const doc = state.doc;
  if (!doc) return null;
  const sel = state.selection;
  const byId = (id: string) => doc.vehicles.find((v) => v.id === id) ?? null;
  const vehicle =
    sel.kind === "vehicle" ? byId(sel.id) : doc.vehicles.find((v) => v.is_vut) ?? null;
  return vehicle?.trajectory ? vehicle : null;
};

temporalCanvas.addEventListener("pointerdown", (ev) => {
  if (!state.doc || !layout) return;
  const rect = temporalCanvas.getBoundingClientRect();
  const px = ev.clientX - rect.left;
  const py = ev.clientY - rect.top;
  const vehicle = hoveredVehicleTable();
  if (ev.button === 0 && vehicle && inBox(layout.v_s, px, py)) {
    velocityDrag = { vehicleId: vehicle.id, samples: [] };
    temporalCanvas.setPointerCapture(ev.pointerId);
    recordVelocitySample(px, py);
  }
});

const recordVelocitySample = (px: number, py: number): void => {
  if (!velocityDrag || !layout) return;
  const box = layout.v_s;
  const s = Math.max(box.xMin, Math.min(box.xMax, fromScreenX(box, px)));
  const v = Math.max(
    0,
    box.yMin + ((box.y0 + box.height - py) / box.height) * (box.yMax - box.yMin),
  );
  velocityDrag.samples.push([round2(s), round2(v)]);
};

temporalCanvas.addEventListener("pointermove", (ev) => {
  if (!state.doc || !layout) return;
  const rect = temporalCanvas.getBoundingClientRect();
  const px = ev.clientX - rect.left;
  const py = ev.clientY - rect.top;

  if (velocityDrag) {
    recordVelocitySample(px, py);
    return;
  }

  // Hover sync: time plots map x to t directly; the distance plot goes
  // through the hovered vehicle's s-to-t table.
  let t: number | null = null;
  if (inBox(layout.accel, px, py)) t = fromScreenX(layout.accel, px);
  else if (inBox(layout.v_t, px, py)) t = fromScreenX(layout.v_t, px);
  else if (inBox(layout.v_s, px, py)) {
    const vehicle = hoveredVehicleTable();
    if (vehicle?.trajectory) t = sToT(vehicle.trajectory, fromScreenX(layout.v_s, px));
  }
  state.hoverT = t === null ? null : Math.max(0, Math.min(t, scenarioEnd()));
  invalidate();
});

temporalCanvas.addEventListener("pointerleave", () => {
  state.hoverT = null;
  invalidate();
});

temporalCanvas.addEventListener("pointerup", () => {
  if (!velocityDrag) return;
  const { vehicleId, samples } = velocityDrag;
  velocityDrag = null;
  const batch = thinBatch(samples);
  if (batch.length) queue.submit(() => api.editProfile(vehicleId, batch));
});

// ---------------------------------------------------------------------------
// Render loop

const resize = (): void => {
  for (const canvas of [sceneCanvas, temporalCanvas]) {
    const ratio = window.devicePixelRatio || 1;
    canvas.width = canvas.clientWidth * ratio;
    canvas.height = canvas.clientHeight * ratio;
    const ctx = canvas.getContext("2d");
    if (ctx) ctx.setTransform(ratio, 0, 0, ratio, 0, 0);
  }
  if (state.vp) {
    state.vp = { ...state.vp, width: sceneCanvas.clientWidth, height: sceneCanvas.clientHeight };
  }
  layout = null;
  invalidate();
};
window.addEventListener("resize", resize);

let lastFrame = performance.now();
const frame = (now: number): void => {
  const dt = (now - lastFrame) / 1000;
  lastFrame = now;
  if (state.playRate > 0 && state.doc) {
    state.hoverT = Math.min((state.hoverT ?? 0) + state.playRate * dt, scenarioEnd());
    invalidate();
  }
  if (needsRender && state.doc && state.vp) {
    needsRender = false;
    const sceneCtx = sceneCanvas.getContext("2d");
    const temporalCtx = temporalCanvas.getContext("2d");
    if (sceneCtx && temporalCtx) {
      const sceneState: SceneState = {
        hoverT: state.hoverT,
        staticView: state.staticView,
        selection: state.selection,
        dragGhost: state.dragGhost,
      };
      renderScene(sceneCtx, state.vp, state.doc, sceneState);
      if (!layout) {
        layout = temporalLayout(
          state.doc,
          temporalCanvas.clientWidth,
          temporalCanvas.clientHeight,
        );
      }
      renderTemporal(
        temporalCtx,
        state.doc,
        layout,
        temporalCanvas.clientWidth,
        temporalCanvas.clientHeight,
        state.hoverT,
      );
    }
  }
  requestAnimationFrame(frame);
};

const boot = async (): Promise<void> => {
  resize();
  try {
    applyPayload(await api.getScenario());
  } catch (err) {
    toast.textContent = `no scenario loaded: ${err instanceof Error ? err.message : err}`;
    toast.classList.add("visible");
  }
  requestAnimationFrame(frame);
};

void boot();
