// Mutation pipeline: at most one request in flight. While a drag streams
// positions, the newest one replaces any queued request; the authoritative
// response is applied before the next frame renders, and a rejection rolls
// the document back via a fresh fetch.

import type { ResolvedPayload } from "./types.js";

export type MutationFn = () => Promise<ResolvedPayload>;

export interface QueueHooks {
  onApply: (payload: ResolvedPayload) => void;
  onError: (message: string) => void;
  refetch: () => Promise<ResolvedPayload>;
}

export class MutationQueue {
  private inflight = false;
  private pending: MutationFn | null = null;
  requestsSent = 0;

  constructor(private hooks: QueueHooks) {}

  get busy(): boolean {
    return this.inflight;
  }

  /** Submit a mutation; while busy, the latest submission wins. */
  submit(fn: MutationFn): void {
    if (this.inflight) {
      this.pending = fn;
      return;
    }
    void this.run(fn);
  }

  private async run(fn: MutationFn): Promise<void> {
    this.inflight = true;
    this.requestsSent += 1;
    try {
      const payload = await fn();
      this.hooks.onApply(payload);
    } catch (err) {
      this.hooks.onError(err instanceof Error ? err.message : String(err));
      this.pending = null;
      try {
        this.hooks.onApply(await this.hooks.refetch());
      } catch {
        // service unreachable; keep the last known state
      }
    } finally {
      this.inflight = false;
      const next = this.pending;
      this.pending = null;
      if (next) void this.run(next);
    }
  }

  /** Resolves once nothing is in flight or queued (test helper). */
  async settled(): Promise<void> {
    while (this.inflight || this.pending) {
      await new Promise((resolve) => setTimeout(resolve, 0));
    }
  }
}
