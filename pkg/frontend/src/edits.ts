// Batch velocity-edit shaping.

/** Collapse pointer samples to one edit per distinct s, sorted by s. */
export const thinBatch = (samples: [number, number][]): [number, number][] => {
  const out = new Map<number, number>();
  for (const [s, v] of samples) out.set(s, v);
  return [...out.entries()].sort((a, b) => a[0] - b[0]);
};
