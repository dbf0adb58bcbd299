/** Wire types mirrored from the studio service's JSON responses. */

export interface LayoutDoc {
  n: number;
  points: [number, number][];
  projector_id: string;
  seed: number | null;
  alpha: number | null;
  converged: boolean;
  objective_trace: number[];
  flags: string[];
}

export interface MetricsDoc {
  alpha?: number;
  T: number;
  C: number;
  R: number;
  S: number;
  K: number;
  label_column: string;
  n_pairs_sampled: number;
}

export interface SlotDoc {
  name: string;
  vocabulary: string[];
}

export interface PromptDoc {
  template: string;
  slots: SlotDoc[];
  rendered: string;
  prompt_hash: string;
}

export interface LabelDoc {
  sample_id: string;
  raw_text: string;
  slot_values: Record<string, string>;
  parse_ok: boolean;
}

export interface BundleDoc {
  schema_version: number;
  bundle_id: string;
  session_id: string;
  created_at: string;
  projector: { method: string; hyperparameters: Record<string, unknown> };
  alpha_grid: number[];
  seed: number | null;
  prompt: PromptDoc;
  sample_ids: string[];
  labels: Record<string, LabelDoc>;
  layouts: (LayoutDoc & { alpha: number })[];
  metrics: (MetricsDoc & { alpha: number })[];
  label_column: string;
}

export interface JobDoc {
  id: string;
  session_id: string;
  state: string;
  progress: number;
  error: string | null;
  bundle_id: string | null;
}

export interface SessionDoc {
  id: string;
  name: string;
  modality: string;
  created_at: string;
  bundle_ids: string[];
}

export interface SampleDoc {
  id: string;
  session_id: string;
  modality: string;
  truth_label: string | null;
  text?: string;
  payload_b64?: string;
}

/** A color channel: a prompt slot or the dataset's ground-truth label. */
export type Channel = { kind: "slot"; slot: string } | { kind: "truth" };

export function channelKey(c: Channel): string {
  return c.kind === "slot" ? `slot:${c.slot}` : "truth_label";
}
