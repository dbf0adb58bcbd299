import { describe, expect, it } from "vitest";

import { fitToBounds, identity, pan, toData, toScreen, zoomAt } from "../src/camera.js";

describe("camera transform", () => {
  it("screen/data round trip", () => {
    const t = { k: 2.5, tx: 40, ty: -12 };
    const [px, py] = toScreen(t, 3, -7);
    const [x, y] = toData(t, px, py);
    expect(x).toBeCloseTo(3, 12);
    expect(y).toBeCloseTo(-7, 12);
  });

  it("zoom keeps the anchor point fixed", () => {
    let t = identity();
    t = pan(t, 100, 50);
    const anchor: [number, number] = [320, 240];
    const before = toData(t, ...anchor);
    t = zoomAt(t, anchor[0], anchor[1], 1.8);
    const after = toData(t, ...anchor);
    expect(after[0]).toBeCloseTo(before[0], 10);
    expect(after[1]).toBeCloseTo(before[1], 10);
  });

  it("fit-to-bounds contains every point with margin", () => {
    const points = new Float64Array([0, 0, 100, 40, -30, 80]);
    const t = fitToBounds(points, 800, 600, 24);
    for (let i = 0; i < 3; i++) {
      const [px, py] = toScreen(t, points[2 * i], points[2 * i + 1]);
      expect(px).toBeGreaterThanOrEqual(24 - 1e-9);
      expect(px).toBeLessThanOrEqual(800 - 24 + 1e-9);
      expect(py).toBeGreaterThanOrEqual(24 - 1e-9);
      expect(py).toBeLessThanOrEqual(600 - 24 + 1e-9);
    }
  });

  it("fit-to-bounds survives degenerate clouds", () => {
    const t = fitToBounds(new Float64Array([5, 5, 5, 5]), 400, 400);
    expect(Number.isFinite(t.k)).toBe(true);
    expect(t.k).toBeGreaterThan(0);
  });
});
