/** Dual-encoded scatterplot renderer.
 *
 * Fill color carries one categorical channel, the outline ring a second.
 * A WebGL point-sprite path handles large clouds (one draw call for all
 * points); a canvas-2D path covers contexts without WebGL. Buffer building
 * is separated from drawing so the hot per-frame work is testable headless.
 */

import { CategoricalPalette, cssToRgb } from "./palette.js";
import type { Transform } from "./camera.js";

export interface PointBuffers {
  n: number;
  /** layout positions, [x0, y0, x1, y1, ...] */
  positions: Float32Array;
  /** fill RGB per point, 0..1 */
  fill: Float32Array;
  /** ring RGB per point, 0..1; all -1 when no outline channel */
  ring: Float32Array;
  hasRing: boolean;
}

export function buildBuffers(
  points: Float64Array,
  fillValues: readonly string[],
  ringValues: readonly string[] | null,
  fillPalette: CategoricalPalette,
  ringPalette: CategoricalPalette | null,
): PointBuffers {
  const n = points.length / 2;
  const positions = new Float32Array(points);
  const fill = new Float32Array(n * 3);
  const ring = new Float32Array(n * 3).fill(-1);
  const fillCache = new Map<string, [number, number, number]>();
  const ringCache = new Map<string, [number, number, number]>();
  for (let i = 0; i < n; i++) {
    const fv = fillValues[i];
    let rgb = fillCache.get(fv);
    if (!rgb) {
      const [r, g, b] = cssToRgb(fillPalette.color(fv));
      rgb = [r / 255, g / 255, b / 255];
      fillCache.set(fv, rgb);
    }
    fill[3 * i] = rgb[0];
    fill[3 * i + 1] = rgb[1];
    fill[3 * i + 2] = rgb[2];
    if (ringValues && ringPalette) {
      const rv = ringValues[i];
      let rrgb = ringCache.get(rv);
      if (!rrgb) {
        const [r, g, b] = cssToRgb(ringPalette.color(rv));
        rrgb = [r / 255, g / 255, b / 255];
        ringCache.set(rv, rrgb);
      }
      ring[3 * i] = rrgb[0];
      ring[3 * i + 1] = rrgb[1];
      ring[3 * i + 2] = rrgb[2];
    }
  }
  return { n, positions, fill, ring, hasRing: !!(ringValues && ringPalette) };
}

const VERTEX_SHADER = `
attribute vec2 a_pos;
attribute vec3 a_fill;
attribute vec3 a_ring;
uniform vec3 u_transform; // k, tx, ty
uniform vec2 u_viewport;
uniform float u_size;
varying vec3 v_fill;
varying vec3 v_ring;
void main() {
  vec2 screen = a_pos * u_transform.x + u_transform.yz;
  vec2 clip = vec2(screen.x / u_viewport.x * 2.0 - 1.0, 1.0 - screen.y / u_viewport.y * 2.0);
  gl_Position = vec4(clip, 0.0, 1.0);
  gl_PointSize = u_size;
  v_fill = a_fill;
  v_ring = a_ring;
}`;

const FRAGMENT_SHADER = `
precision mediump float;
varying vec3 v_fill;
varying vec3 v_ring;
void main() {
  vec2 d = gl_PointCoord - vec2(0.5);
  float r = length(d) * 2.0;
  if (r > 1.0) discard;
  bool hasRing = v_ring.x >= 0.0;
  if (hasRing && r > 0.62) {
    gl_FragColor = vec4(v_ring, 1.0);
  } else {
    gl_FragColor = vec4(v_fill, 0.9);
  }
}`;

export interface Renderer {
  upload(buffers: PointBuffers): void;
  render(transform: Transform, pointSize?: number): void;
  resize(width: number, height: number): void;
}

export class WebGLRenderer implements Renderer {
  private gl: WebGLRenderingContext;
  private program: WebGLProgram;
  private buffers: PointBuffers | null = null;
  private vbo: { pos: WebGLBuffer; fill: WebGLBuffer; ring: WebGLBuffer };
  private width = 0;
  private height = 0;

  constructor(private canvas: HTMLCanvasElement) {
    const gl = canvas.getContext("webgl", { antialias: true });
    if (!gl) throw new Error("WebGL unavailable");
    this.gl = gl;
    this.program = this.compile();
    this.vbo = {
      pos: gl.createBuffer()!,
      fill: gl.createBuffer()!,
      ring: gl.createBuffer()!,
    };
  }

  private compile(): WebGLProgram {
    const gl = this.gl;
    const make = (type: number, source: string) => {
      const shader = gl.createShader(type)!;
      gl.shaderSource(shader, source);
      gl.compileShader(shader);
      if (!gl.getShaderParameter(shader, gl.COMPILE_STATUS)) {
        throw new Error(gl.getShaderInfoLog(shader) ?? "shader compile failed");
      }
      return shader;
    };
    const program = gl.createProgram()!;
    gl.attachShader(program, make(gl.VERTEX_SHADER, VERTEX_SHADER));
    gl.attachShader(program, make(gl.FRAGMENT_SHADER, FRAGMENT_SHADER));
    gl.linkProgram(program);
    if (!gl.getProgramParameter(program, gl.LINK_STATUS)) {
      throw new Error(gl.getProgramInfoLog(program) ?? "link failed");
    }
    return program;
  }

  upload(buffers: PointBuffers): void {
    const gl = this.gl;
    this.buffers = buffers;
    gl.bindBuffer(gl.ARRAY_BUFFER, this.vbo.pos);
    gl.bufferData(gl.ARRAY_BUFFER, buffers.positions, gl.DYNAMIC_DRAW);
    gl.bindBuffer(gl.ARRAY_BUFFER, this.vbo.fill);
    gl.bufferData(gl.ARRAY_BUFFER, buffers.fill, gl.STATIC_DRAW);
    gl.bindBuffer(gl.ARRAY_BUFFER, this.vbo.ring);
    gl.bufferData(gl.ARRAY_BUFFER, buffers.ring, gl.STATIC_DRAW);
  }

  /** Re-upload positions only (morph frames keep colors). */
  updatePositions(positions: Float32Array): void {
    const gl = this.gl;
    gl.bindBuffer(gl.ARRAY_BUFFER, this.vbo.pos);
    gl.bufferData(gl.ARRAY_BUFFER, positions, gl.DYNAMIC_DRAW);
  }

  resize(width: number, height: number): void {
    this.width = width;
    this.height = height;
    this.canvas.width = width * (globalThis.devicePixelRatio ?? 1);
    this.canvas.height = height * (globalThis.devicePixelRatio ?? 1);
    this.gl.viewport(0, 0, this.canvas.width, this.canvas.height);
  }

  render(transform: Transform, pointSize = 7): void {
    const gl = this.gl;
    if (!this.buffers) return;
    const dpr = globalThis.devicePixelRatio ?? 1;
    gl.clearColor(1, 1, 1, 1);
    gl.clear(gl.COLOR_BUFFER_BIT);
    gl.useProgram(this.program);

    const bind = (name: string, buffer: WebGLBuffer, size: number) => {
      const loc = gl.getAttribLocation(this.program, name);
      gl.bindBuffer(gl.ARRAY_BUFFER, buffer);
      gl.enableVertexAttribArray(loc);
      gl.vertexAttribPointer(loc, size, gl.FLOAT, false, 0, 0);
    };
    bind("a_pos", this.vbo.pos, 2);
    bind("a_fill", this.vbo.fill, 3);
    bind("a_ring", this.vbo.ring, 3);

    gl.uniform3f(
      gl.getUniformLocation(this.program, "u_transform"),
      transform.k * dpr,
      transform.tx * dpr,
      transform.ty * dpr,
    );
    gl.uniform2f(
      gl.getUniformLocation(this.program, "u_viewport"),
      this.width * dpr,
      this.height * dpr,
    );
    gl.uniform1f(gl.getUniformLocation(this.program, "u_size"), pointSize * dpr);
    gl.drawArrays(gl.POINTS, 0, this.buffers.n);
  }
}

export class Canvas2DRenderer implements Renderer {
  private ctx: CanvasRenderingContext2D;
  private buffers: PointBuffers | null = null;
  private width = 0;
  private height = 0;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("2D context unavailable");
    this.ctx = ctx;
  }

  upload(buffers: PointBuffers): void {
    this.buffers = buffers;
  }

  resize(width: number, height: number): void {
    this.width = width;
    this.height = height;
    this.canvas.width = width;
    this.canvas.height = height;
  }

  render(transform: Transform, pointSize = 7): void {
    const b = this.buffers;
    if (!b) return;
    const ctx = this.ctx;
    ctx.clearRect(0, 0, this.width, this.height);
    const radius = pointSize / 2;
    for (let i = 0; i < b.n; i++) {
      const x = b.positions[2 * i] * transform.k + transform.tx;
      const y = b.positions[2 * i + 1] * transform.k + transform.ty;
      if (b.hasRing) {
        ctx.fillStyle = `rgb(${b.ring[3 * i] * 255}, ${b.ring[3 * i + 1] * 255}, ${b.ring[3 * i + 2] * 255})`;
        ctx.beginPath();
        ctx.arc(x, y, radius, 0, 2 * Math.PI);
        ctx.fill();
      }
      ctx.fillStyle = `rgb(${b.fill[3 * i] * 255}, ${b.fill[3 * i + 1] * 255}, ${b.fill[3 * i + 2] * 255})`;
      ctx.beginPath();
      ctx.arc(x, y, b.hasRing ? radius * 0.62 : radius, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}

export function createRenderer(canvas: HTMLCanvasElement): Renderer {
  try {
    return new WebGLRenderer(canvas);
  } catch {
    return new Canvas2DRenderer(canvas);
  }
}
