// Thin typed client over the scnforge service endpoints.

import type { ResolvedPayload, ScanEvent } from "./types.js";

const check = async (res: Response): Promise<any> => {
  const body = await res.json();
  if (!res.ok) throw new Error(body?.error ?? `HTTP ${res.status}`);
  return body;
};

export class ApiClient {
  constructor(private base: string = "") {}

  getScenario(): Promise<ResolvedPayload> {
    return fetch(`${this.base}/api/scenario`).then(check);
  }

  setBounds(body: {
    left?: [number, number][];
    right?: [number, number][];
  }): Promise<ResolvedPayload> {
    return fetch(`${this.base}/api/track/bounds`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then(check);
  }

  addSupport(id: string, point: [number, number], index?: number): Promise<ResolvedPayload> {
    return fetch(`${this.base}/api/vehicles/${encodeURIComponent(id)}/support`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(index === undefined ? { point } : { point, index }),
    }).then(check);
  }

  moveSupport(id: string, index: number, point: [number, number]): Promise<ResolvedPayload> {
    return fetch(`${this.base}/api/vehicles/${encodeURIComponent(id)}/support`, {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ index, point }),
    }).then(check);
  }

  deleteSupport(id: string, index: number): Promise<ResolvedPayload> {
    return fetch(
      `${this.base}/api/vehicles/${encodeURIComponent(id)}/support?index=${index}`,
      { method: "DELETE" },
    ).then(check);
  }

  editProfile(id: string, edits: [number, number][]): Promise<ResolvedPayload> {
    return fetch(`${this.base}/api/vehicles/${encodeURIComponent(id)}/profile`, {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ edits }),
    }).then(check);
  }

  runScans(accelLimit: number | null): Promise<{ events: ScanEvent[] }> {
    return fetch(`${this.base}/api/scans`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ collision: true, offtrack: true, accel_limit: accelLimit }),
    }).then(check);
  }
}
