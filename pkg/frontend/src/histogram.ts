/** Label-value histograms for the brush detail panel. */

export interface HistogramEntry {
  value: string;
  count: number;
  fraction: number;
}

export function histogram(values: string[]): HistogramEntry[] {
  const counts = new Map<string, number>();
  for (const v of values) counts.set(v, (counts.get(v) ?? 0) + 1);
  const total = values.length || 1;
  return Array.from(counts.entries())
    .map(([value, count]) => ({ value, count, fraction: count / total }))
    .sort((a, b) => b.count - a.count || (a.value < b.value ? -1 : 1));
}

export function selectionHistogram(
  sampleIds: readonly string[],
  channelValues: readonly string[],
  selection: ReadonlySet<string>,
): HistogramEntry[] {
  const picked: string[] = [];
  sampleIds.forEach((sid, i) => {
    if (selection.has(sid)) picked.push(channelValues[i]);
  });
  return histogram(picked);
}
