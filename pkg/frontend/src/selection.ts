// The radio-button selection: at most one editable entity is active.

import type { ScenarioDoc } from "./types.js";

export type Selection =
  | { kind: "none" }
  | { kind: "left_bound" }
  | { kind: "right_bound" }
  | { kind: "vehicle"; id: string };

export const NONE: Selection = { kind: "none" };

export const selectionOptions = (doc: ScenarioDoc): Selection[] => [
  NONE,
  { kind: "left_bound" },
  { kind: "right_bound" },
  ...doc.vehicles.map((v): Selection => ({ kind: "vehicle", id: v.id })),
];

export const selectionLabel = (sel: Selection): string => {
  switch (sel.kind) {
    case "none":
      return "view only";
    case "left_bound":
      return "left bound";
    case "right_bound":
      return "right bound";
    case "vehicle":
      return `path: ${sel.id}`;
  }
};

export const sameSelection = (a: Selection, b: Selection): boolean =>
  a.kind === b.kind && (a.kind !== "vehicle" || b.kind !== "vehicle" || a.id === b.id);

/** Editable points of the active entity, in authoring order. */
export const activePoints = (doc: ScenarioDoc, sel: Selection): [number, number][] => {
  switch (sel.kind) {
    case "none":
      return [];
    case "left_bound":
      return doc.track.left;
    case "right_bound":
      return doc.track.right;
    case "vehicle": {
      const vehicle = doc.vehicles.find((v) => v.id === sel.id);
      return vehicle ? vehicle.support : [];
    }
  }
};
