/** Pan/zoom transform between layout space and screen pixels. */

export interface Transform {
  k: number;
  tx: number;
  ty: number;
}

export function identity(): Transform {
  return { k: 1, tx: 0, ty: 0 };
}

export function toScreen(t: Transform, x: number, y: number): [number, number] {
  return [x * t.k + t.tx, y * t.k + t.ty];
}

export function toData(t: Transform, px: number, py: number): [number, number] {
  return [(px - t.tx) / t.k, (py - t.ty) / t.k];
}

export function pan(t: Transform, dx: number, dy: number): Transform {
  return { k: t.k, tx: t.tx + dx, ty: t.ty + dy };
}

/** Zoom by `factor` keeping the screen point (px, py) fixed. */
export function zoomAt(t: Transform, px: number, py: number, factor: number): Transform {
  const k = t.k * factor;
  return { k, tx: px - (px - t.tx) * factor, ty: py - (py - t.ty) * factor };
}

/** Fit a point cloud into a width x height viewport with a margin. */
export function fitToBounds(
  points: Float64Array,
  width: number,
  height: number,
  margin = 24,
): Transform {
  let xMin = Infinity, xMax = -Infinity, yMin = Infinity, yMax = -Infinity;
  for (let i = 0; i * 2 < points.length; i++) {
    const x = points[2 * i];
    const y = points[2 * i + 1];
    if (x < xMin) xMin = x;
    if (x > xMax) xMax = x;
    if (y < yMin) yMin = y;
    if (y > yMax) yMax = y;
  }
  const spanX = xMax - xMin || 1;
  const spanY = yMax - yMin || 1;
  const k = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  const tx = (width - k * (xMin + xMax)) / 2;
  const ty = (height - k * (yMin + yMax)) / 2;
  return { k, tx, ty };
}
