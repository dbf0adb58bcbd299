/** Brushing: resolve which layout points fall inside a lasso polygon or a
 * rectangle, boundary inclusive. All coordinates are layout (data) space. */

export type Point = [number, number];

const EPS = 1e-12;

function onSegment(px: number, py: number, ax: number, ay: number, bx: number, by: number): boolean {
  const cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
  if (Math.abs(cross) > EPS * Math.max(1, Math.abs(bx - ax) + Math.abs(by - ay))) return false;
  const dot = (px - ax) * (bx - ax) + (py - ay) * (by - ay);
  const len2 = (bx - ax) ** 2 + (by - ay) ** 2;
  return dot >= -EPS && dot <= len2 + EPS;
}

/** Ray casting with explicit boundary inclusion. */
export function pointInPolygon(x: number, y: number, polygon: Point[]): boolean {
  const n = polygon.length;
  if (n < 3) return false;
  for (let i = 0; i < n; i++) {
    const [ax, ay] = polygon[i];
    const [bx, by] = polygon[(i + 1) % n];
    if (onSegment(x, y, ax, ay, bx, by)) return true;
  }
  let inside = false;
  for (let i = 0, j = n - 1; i < n; j = i++) {
    const [xi, yi] = polygon[i];
    const [xj, yj] = polygon[j];
    const crosses = yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi;
    if (crosses) inside = !inside;
  }
  return inside;
}

export interface Rect {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export function pointInRect(x: number, y: number, rect: Rect): boolean {
  const xMin = Math.min(rect.x0, rect.x1);
  const xMax = Math.max(rect.x0, rect.x1);
  const yMin = Math.min(rect.y0, rect.y1);
  const yMax = Math.max(rect.y0, rect.y1);
  return x >= xMin && x <= xMax && y >= yMin && y <= yMax;
}

/** Indices of the points (flattened xy) inside the lasso polygon. */
export function resolveLasso(points: Float64Array, polygon: Point[]): number[] {
  const hits: number[] = [];
  for (let i = 0; i * 2 < points.length; i++) {
    if (pointInPolygon(points[2 * i], points[2 * i + 1], polygon)) hits.push(i);
  }
  return hits;
}

export function resolveRect(points: Float64Array, rect: Rect): number[] {
  const hits: number[] = [];
  for (let i = 0; i * 2 < points.length; i++) {
    if (pointInRect(points[2 * i], points[2 * i + 1], rect)) hits.push(i);
  }
  return hits;
}
