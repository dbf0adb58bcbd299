/** Client-side alpha navigation over a preloaded layout grid.
 *
 * Must match the service's rule exactly: snap to a grid point within 1e-9,
 * otherwise linearly blend the two neighboring layouts; out-of-range alphas
 * are an error.
 */

const GRID_EPS = 1e-9;

export interface GridLayouts {
  /** ascending grid values */
  alphas: number[];
  /** per grid value, flattened [x0, y0, x1, y1, ...] */
  points: Float64Array[];
}

export interface LayoutView {
  points: Float64Array;
  interpolated: boolean;
  /** index into the grid when snapped */
  gridIndex: number | null;
}

export function gridFromLayouts(
  alphas: number[],
  layouts: { points: [number, number][] }[],
): GridLayouts {
  const points = layouts.map((layout) => {
    const flat = new Float64Array(layout.points.length * 2);
    layout.points.forEach(([x, y], i) => {
      flat[2 * i] = x;
      flat[2 * i + 1] = y;
    });
    return flat;
  });
  return { alphas, points };
}

export function snapIndex(alphas: number[], alpha: number): number | null {
  for (let i = 0; i < alphas.length; i++) {
    if (Math.abs(alpha - alphas[i]) <= GRID_EPS) return i;
  }
  return null;
}

export function layoutAt(grid: GridLayouts, alpha: number): LayoutView {
  const { alphas, points } = grid;
  if (alphas.length === 0) throw new Error("empty grid");
  if (alpha < alphas[0] - GRID_EPS || alpha > alphas[alphas.length - 1] + GRID_EPS) {
    throw new RangeError(`alpha=${alpha} outside grid [${alphas[0]}, ${alphas[alphas.length - 1]}]`);
  }
  const snapped = snapIndex(alphas, alpha);
  if (snapped !== null) {
    return { points: points[snapped], interpolated: false, gridIndex: snapped };
  }
  let hi = 0;
  while (alphas[hi] <= alpha) hi++;
  const lo = hi - 1;
  const t = (alpha - alphas[lo]) / (alphas[hi] - alphas[lo]);
  const a = points[lo];
  const b = points[hi];
  const out = new Float64Array(a.length);
  for (let i = 0; i < a.length; i++) {
    out[i] = (1 - t) * a[i] + t * b[i];
  }
  return { points: out, interpolated: true, gridIndex: null };
}

/** Blend used by the slider morph animation between two resolved views. */
export function lerpPoints(a: Float64Array, b: Float64Array, t: number, out: Float64Array): void {
  for (let i = 0; i < a.length; i++) {
    out[i] = (1 - t) * a[i] + t * b[i];
  }
}
