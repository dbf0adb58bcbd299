/** HTTP client for the studio service; all view data flows through here. */

import type { BundleDoc, JobDoc, SampleDoc, SessionDoc, SlotDoc } from "./types.js";

export interface JobRequest {
  prompt_template: string;
  slots: SlotDoc[];
  method?: string;
  alpha_grid?: number[];
  seed?: number | null;
  label_source?: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

export class StudioClient {
  private controller = new AbortController();

  constructor(readonly baseUrl: string = "") {}

  /** Abort all in-flight requests (view switches). */
  cancelPending(): void {
    this.controller.abort();
    this.controller = new AbortController();
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.baseUrl + path, {
      ...init,
      signal: this.controller.signal,
      headers: { "Content-Type": "application/json", ...(init?.headers ?? {}) },
    });
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body.error ?? "error", body.detail ?? resp.statusText);
    }
    return body as T;
  }

  listSessions(): Promise<SessionDoc[]> {
    return this.request("/api/sessions");
  }

  listBundles(): Promise<string[]> {
    return this.request("/api/bundles");
  }

  bundle(bundleId: string): Promise<BundleDoc> {
    return this.request(`/api/bundles/${bundleId}/export`);
  }

  layout(bundleId: string, alpha: number): Promise<unknown> {
    return this.request(`/api/bundles/${bundleId}/layout?alpha=${alpha}`);
  }

  submitJob(sessionId: string, body: JobRequest): Promise<JobDoc> {
    return this.request(`/api/sessions/${sessionId}/jobs`, {
      method: "POST",
      body: JSON.stringify(body),
    });
  }

  job(jobId: string): Promise<JobDoc> {
    return this.request(`/api/jobs/${jobId}`);
  }

  sample(sampleId: string): Promise<SampleDoc> {
    return this.request(`/api/samples/${sampleId}`);
  }

  thumbnailUrl(sampleId: string, size = 64): string {
    return `${this.baseUrl}/api/thumbnails/${sampleId}?size=${size}`;
  }

  async pollJob(jobId: string, intervalMs = 300, onUpdate?: (j: JobDoc) => void): Promise<JobDoc> {
    for (;;) {
      const doc = await this.job(jobId);
      onUpdate?.(doc);
      if (doc.state === "done" || doc.state === "failed") return doc;
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
  }
}
