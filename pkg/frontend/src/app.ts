/** DOM wiring: bundle switcher, alpha slider with animated morphs, the
 * scatter view with pan/zoom and lasso brushing, metrics and detail panels,
 * and the prompt editor that submits new steering jobs. */

import { StudioClient } from "./api.js";
import { fitToBounds, identity, pan, toData, zoomAt, type Transform } from "./camera.js";
import { resolveLasso, type Point } from "./brush.js";
import { selectionHistogram } from "./histogram.js";
import { lerpPoints } from "./interpolate.js";
import { CategoricalPalette } from "./palette.js";
import { parseVocabulary, renderPreview, validatePrompt, type PromptDraft } from "./prompt.js";
import { buildBuffers, createRenderer, type Renderer } from "./scatter.js";
import { ViewStore, type Frame } from "./state.js";
import { channelKey, type BundleDoc, type Channel } from "./types.js";

const MORPH_MS = 240;

export class App {
  private client: StudioClient;
  private store: ViewStore | null = null;
  private renderer: Renderer | null = null;
  private transform: Transform = identity();
  private canvas: HTMLCanvasElement;
  private morphHandle: number | null = null;
  private displayed: Float64Array | null = null;
  private lasso: Point[] | null = null;

  constructor(private root: HTMLElement, baseUrl = "") {
    this.client = new StudioClient(baseUrl);
    this.root.innerHTML = TEMPLATE;
    this.canvas = this.el<HTMLCanvasElement>("#scatter");
    this.bindControls();
  }

  private el<T extends HTMLElement>(selector: string): T {
    const node = this.root.querySelector<T>(selector);
    if (!node) throw new Error(`missing element ${selector}`);
    return node;
  }

  async start(): Promise<void> {
    await this.refreshBundles();
    const select = this.el<HTMLSelectElement>("#bundle-select");
    if (select.options.length > 0) {
      await this.loadBundle(select.value);
    }
  }

  async refreshBundles(): Promise<void> {
    const bundles = await this.client.listBundles();
    const select = this.el<HTMLSelectElement>("#bundle-select");
    const current = select.value;
    select.innerHTML = "";
    for (const id of bundles) {
      const option = document.createElement("option");
      option.value = id;
      option.textContent = id.slice(0, 12);
      select.appendChild(option);
    }
    if (bundles.includes(current)) select.value = current;
  }

  async loadBundle(bundleId: string): Promise<void> {
    this.client.cancelPending();
    const bundle = await this.client.bundle(bundleId);
    this.setBundle(bundle);
  }

  /** Also used by tests to inject a bundle without HTTP. */
  setBundle(bundle: BundleDoc): void {
    this.store = new ViewStore(bundle);
    this.renderer = this.renderer ?? createRenderer(this.canvas);
    const rect = this.canvas.getBoundingClientRect();
    this.renderer.resize(rect.width || 800, rect.height || 600);

    const slider = this.el<HTMLInputElement>("#alpha-slider");
    const [lo, hi] = this.store.alphaRange;
    slider.min = String(lo);
    slider.max = String(hi);
    slider.step = "0.01";
    slider.value = String(hi);

    this.populateEncodingSelectors();
    this.store.subscribe((frame) => this.onFrame(frame));
    const frame = this.store.frame();
    this.transform = fitToBounds(frame.points, rect.width || 800, rect.height || 600);
    this.onFrame(frame);
  }

  private populateEncodingSelectors(): void {
    if (!this.store) return;
    const channels = this.store.availableChannels();
    const fill = this.el<HTMLSelectElement>("#color-by");
    const outline = this.el<HTMLSelectElement>("#outline-by");
    fill.innerHTML = "";
    outline.innerHTML = "<option value=''>none</option>";
    for (const c of channels) {
      for (const select of [fill, outline]) {
        const option = document.createElement("option");
        option.value = channelKey(c);
        option.textContent = channelKey(c);
        select.appendChild(option);
      }
    }
    const frame = this.store.frame();
    fill.value = channelKey(frame.colorBy);
    outline.value = frame.outlineBy ? channelKey(frame.outlineBy) : "";
  }

  private parseChannel(key: string): Channel | null {
    if (!key) return null;
    if (key === "truth_label") return { kind: "truth" };
    return { kind: "slot", slot: key.slice("slot:".length) };
  }

  private onFrame(frame: Frame): void {
    if (!this.store || !this.renderer) return;
    const fillValues = this.store.channelValues(frame.colorBy);
    const ringValues = frame.outlineBy ? this.store.channelValues(frame.outlineBy) : null;
    const fillPalette = new CategoricalPalette(fillValues);
    const ringPalette = ringValues ? new CategoricalPalette(ringValues) : null;

    const target = frame.points;
    const from = this.displayed;
    const draw = (pts: Float64Array) => {
      this.renderer!.upload(buildBuffers(pts, fillValues, ringValues, fillPalette, ringPalette));
      this.renderer!.render(this.transform);
    };
    if (from && from.length === target.length && this.morphEnabled()) {
      this.animateMorph(from, target, draw);
    } else {
      draw(target);
    }
    this.displayed = target;
    this.renderMetrics(frame);
    this.renderSelection(frame);
    this.el<HTMLSpanElement>("#alpha-value").textContent =
      frame.alpha.toFixed(2) + (frame.interpolated ? " (interpolated)" : "");
  }

  private morphEnabled(): boolean {
    return !this.el<HTMLInputElement>("#morph-toggle").checked ? false : true;
  }

  private animateMorph(
    from: Float64Array,
    to: Float64Array,
    draw: (pts: Float64Array) => void,
  ): void {
    if (this.morphHandle !== null) cancelAnimationFrame(this.morphHandle);
    const scratch = new Float64Array(to.length);
    const start = performance.now();
    const step = (now: number) => {
      const t = Math.min(1, (now - start) / MORPH_MS);
      lerpPoints(from, to, t, scratch);
      draw(scratch);
      if (t < 1) {
        this.morphHandle = requestAnimationFrame(step);
      } else {
        this.morphHandle = null;
      }
    };
    this.morphHandle = requestAnimationFrame(step);
  }

  private renderMetrics(frame: Frame): void {
    const panel = this.el<HTMLDivElement>("#metrics-panel");
    if (!frame.metrics) {
      panel.innerHTML = "<em>off-grid view: metrics at grid points only</em>";
      return;
    }
    const m = frame.metrics;
    panel.innerHTML = [
      `<div>T ${m.T.toFixed(4)}</div>`,
      `<div>C ${m.C.toFixed(4)}</div>`,
      `<div>R ${m.R.toFixed(4)}</div>`,
      `<div>S ${m.S.toFixed(4)}</div>`,
      `<div class="dim">K=${m.K} · ${m.label_column}</div>`,
    ].join("");
  }

  private renderSelection(frame: Frame): void {
    if (!this.store) return;
    const panel = this.el<HTMLDivElement>("#detail-panel");
    if (frame.selection.size === 0) {
      panel.innerHTML = "<em>no selection</em>";
      return;
    }
    const values = this.store.channelValues(frame.colorBy);
    const rows = selectionHistogram(this.store.bundle.sample_ids, values, frame.selection)
      .map(
        (e) =>
          `<div class="hist-row"><span>${e.value}</span>` +
          `<span>${e.count} (${(100 * e.fraction).toFixed(0)}%)</span></div>`,
      )
      .join("");
    const modality = this.store.bundle.labels ? "" : "";
    panel.innerHTML = `<div><b>${frame.selection.size}</b> selected</div>${rows}${modality}`;
    const strip = document.createElement("div");
    strip.className = "thumb-strip";
    let shown = 0;
    for (const sid of frame.selection) {
      if (shown >= 24) break;
      const label = this.store.bundle.labels[sid];
      const img = document.createElement("img");
      img.src = this.client.thumbnailUrl(sid);
      img.title = label ? label.raw_text : sid;
      img.onerror = () => {
        const span = document.createElement("span");
        span.className = "snippet";
        span.textContent = label ? label.raw_text : sid.slice(0, 8);
        img.replaceWith(span);
      };
      strip.appendChild(img);
      shown += 1;
    }
    panel.appendChild(strip);
  }

  private bindControls(): void {
    const slider = this.el<HTMLInputElement>("#alpha-slider");
    slider.addEventListener("input", () => {
      this.store?.setAlpha(Number(slider.value));
    });

    this.el<HTMLSelectElement>("#bundle-select").addEventListener("change", (e) => {
      void this.loadBundle((e.target as HTMLSelectElement).value);
    });

    const fill = this.el<HTMLSelectElement>("#color-by");
    const outline = this.el<HTMLSelectElement>("#outline-by");
    const applyEncodings = () => {
      const colorBy = this.parseChannel(fill.value);
      const outlineBy = this.parseChannel(outline.value);
      if (!colorBy || !this.store) return;
      try {
        this.store.setEncodings(colorBy, outlineBy);
        this.el("#encoding-error").textContent = "";
      } catch (err) {
        this.el("#encoding-error").textContent = String((err as Error).message);
      }
    };
    fill.addEventListener("change", applyEncodings);
    outline.addEventListener("change", applyEncodings);

    this.bindCanvas();
    this.bindPromptEditor();
  }

  private bindCanvas(): void {
    const canvas = this.canvas;
    let dragging = false;
    let lastX = 0;
    let lastY = 0;

    canvas.addEventListener("mousedown", (e) => {
      if (e.shiftKey) {
        this.lasso = [this.screenToData(e)];
      } else {
        dragging = true;
        lastX = e.offsetX;
        lastY = e.offsetY;
      }
    });
    canvas.addEventListener("mousemove", (e) => {
      if (this.lasso) {
        this.lasso.push(this.screenToData(e));
      } else if (dragging) {
        this.transform = pan(this.transform, e.offsetX - lastX, e.offsetY - lastY);
        lastX = e.offsetX;
        lastY = e.offsetY;
        this.redraw();
      }
    });
    const finish = () => {
      dragging = false;
      if (this.lasso && this.store && this.displayed) {
        const polygon = this.lasso;
        this.lasso = null;
        if (polygon.length >= 3) {
          const indices = resolveLasso(this.displayed, polygon);
          const ids = indices.map((i) => this.store!.bundle.sample_ids[i]);
          this.store.setSelection(ids);
        } else {
          this.store.clearSelection();
        }
      }
    };
    canvas.addEventListener("mouseup", finish);
    canvas.addEventListener("mouseleave", finish);
    canvas.addEventListener("wheel", (e) => {
      e.preventDefault();
      const factor = Math.exp(-e.deltaY * 0.0015);
      this.transform = zoomAt(this.transform, e.offsetX, e.offsetY, factor);
      this.redraw();
    });
  }

  private screenToData(e: MouseEvent): Point {
    const [x, y] = toData(this.transform, e.offsetX, e.offsetY);
    return [x, y];
  }

  private redraw(): void {
    this.renderer?.render(this.transform);
  }

  private bindPromptEditor(): void {
    const submit = this.el<HTMLButtonElement>("#prompt-submit");
    submit.addEventListener("click", () => void this.submitPrompt());
    for (const id of ["#prompt-template", "#slot-names", "#slot-vocabs"]) {
      this.el(id).addEventListener("input", () => this.previewPrompt());
    }
  }

  private draftFromForm(): PromptDraft {
    const template = this.el<HTMLTextAreaElement>("#prompt-template").value;
    const names = this.el<HTMLInputElement>("#slot-names").value
      .split(",")
      .map((s) => s.trim())
      .filter((s) => s.length > 0);
    const vocabs = this.el<HTMLTextAreaElement>("#slot-vocabs").value
      .split("\n")
      .map((line) => parseVocabulary(line));
    return {
      template,
      slots: names.map((name, i) => ({ name, vocabulary: vocabs[i] ?? [] })),
    };
  }

  private previewPrompt(): void {
    const draft = this.draftFromForm();
    const problems = validatePrompt(draft);
    this.el("#prompt-errors").innerHTML = problems.map((p) => `<div>${p}</div>`).join("");
    this.el("#prompt-preview").textContent = problems.length === 0 ? renderPreview(draft) : "";
  }

  private async submitPrompt(): Promise<void> {
    if (!this.store) return;
    const draft = this.draftFromForm();
    const problems = validatePrompt(draft);
    if (problems.length > 0) {
      this.previewPrompt();
      return;
    }
    const status = this.el("#job-status");
    try {
      const job = await this.client.submitJob(this.store.bundle.session_id, {
        prompt_template: draft.template,
        slots: draft.slots,
        method: this.store.bundle.projector.method,
        alpha_grid: this.store.bundle.alpha_grid,
        seed: this.store.bundle.seed,
      });
      status.textContent = `job ${job.id}: queued`;
      const done = await this.client.pollJob(job.id, 400, (j) => {
        status.textContent = `job ${j.id}: ${j.state} ${(100 * j.progress).toFixed(0)}%`;
      });
      if (done.state === "failed") {
        status.textContent = `job failed at ${done.error ?? "?"}`;
        return;
      }
      status.textContent = `job done: ${done.bundle_id}`;
      await this.refreshBundles();
      if (done.bundle_id) {
        this.el<HTMLSelectElement>("#bundle-select").value = done.bundle_id;
        await this.loadBundle(done.bundle_id);
      }
    } catch (err) {
      status.textContent = `job error: ${(err as Error).message}`;
    }
  }
}

const TEMPLATE = `
<div class="layout">
  <header>
    <label>bundle <select id="bundle-select"></select></label>
    <label>fill <select id="color-by"></select></label>
    <label>outline <select id="outline-by"></select></label>
    <span id="encoding-error" class="error"></span>
    <label class="grow">
      alpha <input id="alpha-slider" type="range" min="0" max="1" step="0.01" value="1"/>
      <span id="alpha-value">1.00</span>
    </label>
    <label><input id="morph-toggle" type="checkbox" checked/> morph</label>
  </header>
  <main>
    <canvas id="scatter"></canvas>
    <aside>
      <section>
        <h3>metrics</h3>
        <div id="metrics-panel"></div>
      </section>
      <section>
        <h3>selection</h3>
        <div id="detail-panel"><em>no selection</em></div>
      </section>
      <section>
        <h3>steer</h3>
        <textarea id="prompt-template" rows="2"
          placeholder="What is this? Answer with the structure: This is a {class}."></textarea>
        <input id="slot-names" placeholder="slot names: class, group"/>
        <textarea id="slot-vocabs" rows="2"
          placeholder="one vocabulary line per slot: cat, dog"></textarea>
        <div id="prompt-preview" class="dim"></div>
        <div id="prompt-errors" class="error"></div>
        <button id="prompt-submit">run steering job</button>
        <div id="job-status" class="dim"></div>
      </section>
    </aside>
  </main>
</div>`;
