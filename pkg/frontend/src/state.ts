/** View state for one loaded bundle.
 *
 * The store's frame snapshot couples alpha, the resolved layout, and the
 * metrics report for that position: observers can never see a layout from
 * one alpha with metrics from another.
 */

import { GridLayouts, gridFromLayouts, layoutAt, snapIndex } from "./interpolate.js";
import { channelKey, type BundleDoc, type Channel, type MetricsDoc } from "./types.js";

export interface Frame {
  alpha: number;
  points: Float64Array;
  interpolated: boolean;
  metrics: MetricsDoc | null;
  colorBy: Channel;
  outlineBy: Channel | null;
  selection: ReadonlySet<string>;
}

export type Listener = (frame: Frame) => void;

export class ViewStore {
  readonly bundle: BundleDoc;
  private readonly grid: GridLayouts;
  private alpha: number;
  private colorBy: Channel;
  private outlineBy: Channel | null = null;
  private selection = new Set<string>();
  private truthLabels: Record<string, string> | null = null;
  private listeners: Listener[] = [];

  constructor(bundle: BundleDoc) {
    this.bundle = bundle;
    this.grid = gridFromLayouts(bundle.alpha_grid, bundle.layouts);
    this.alpha = bundle.alpha_grid[bundle.alpha_grid.length - 1];
    this.colorBy = { kind: "slot", slot: bundle.prompt.slots[0].name };
    if (bundle.prompt.slots.length > 1) {
      this.outlineBy = { kind: "slot", slot: bundle.prompt.slots[1].name };
    }
  }

  get alphaRange(): [number, number] {
    return [this.bundle.alpha_grid[0], this.bundle.alpha_grid[this.bundle.alpha_grid.length - 1]];
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    const frame = this.frame();
    for (const listener of this.listeners) listener(frame);
  }

  frame(): Frame {
    const view = layoutAt(this.grid, this.alpha);
    const idx = snapIndex(this.bundle.alpha_grid, this.alpha);
    return {
      alpha: this.alpha,
      points: view.points,
      interpolated: view.interpolated,
      metrics: idx === null ? null : this.bundle.metrics[idx],
      colorBy: this.colorBy,
      outlineBy: this.outlineBy,
      selection: this.selection,
    };
  }

  setAlpha(alpha: number): void {
    const [lo, hi] = this.alphaRange;
    this.alpha = Math.min(hi, Math.max(lo, alpha));
    this.emit();
  }

  setEncodings(colorBy: Channel, outlineBy: Channel | null): void {
    if (outlineBy !== null && channelKey(colorBy) === channelKey(outlineBy)) {
      throw new Error("fill and outline channels must differ");
    }
    this.colorBy = colorBy;
    this.outlineBy = outlineBy;
    this.emit();
  }

  setSelection(ids: Iterable<string>): void {
    const valid = new Set(this.bundle.sample_ids);
    const next = new Set<string>();
    for (const id of ids) {
      if (!valid.has(id)) throw new Error(`sample ${id} not in bundle`);
      next.add(id);
    }
    this.selection = next;
    this.emit();
  }

  clearSelection(): void {
    this.selection = new Set();
    this.emit();
  }

  provideTruthLabels(labels: Record<string, string>): void {
    this.truthLabels = labels;
    this.emit();
  }

  /** Per-sample label values for a channel, in bundle sample order. */
  channelValues(channel: Channel): string[] {
    if (channel.kind === "truth") {
      const table = this.truthLabels;
      if (table === null) throw new Error("truth labels not loaded");
      return this.bundle.sample_ids.map((sid) => table[sid] ?? "unknown");
    }
    return this.bundle.sample_ids.map(
      (sid) => this.bundle.labels[sid]?.slot_values[channel.slot] ?? "unknown",
    );
  }

  availableChannels(): Channel[] {
    const channels: Channel[] = this.bundle.prompt.slots.map((s) => ({
      kind: "slot",
      slot: s.name,
    }));
    if (this.truthLabels !== null) channels.push({ kind: "truth" });
    return channels;
  }
}
