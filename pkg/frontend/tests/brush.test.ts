import { describe, expect, it } from "vitest";

import { pointInPolygon, pointInRect, resolveLasso, resolveRect, type Point } from "../src/brush.js";

const square: Point[] = [
  [0, 0],
  [10, 0],
  [10, 10],
  [0, 10],
];

describe("point-in-polygon", () => {
  it("classifies interior and exterior points", () => {
    expect(pointInPolygon(5, 5, square)).toBe(true);
    expect(pointInPolygon(-1, 5, square)).toBe(false);
    expect(pointInPolygon(11, 5, square)).toBe(false);
  });

  it("is boundary inclusive: edges and vertices count", () => {
    expect(pointInPolygon(0, 5, square)).toBe(true);
    expect(pointInPolygon(5, 0, square)).toBe(true);
    expect(pointInPolygon(10, 10, square)).toBe(true);
    expect(pointInPolygon(0, 0, square)).toBe(true);
  });

  it("handles concave lassos", () => {
    const concave: Point[] = [
      [0, 0],
      [10, 0],
      [10, 10],
      [5, 5],
      [0, 10],
    ];
    expect(pointInPolygon(5, 8, concave)).toBe(false); // inside the notch
    expect(pointInPolygon(2, 3, concave)).toBe(true);
    expect(pointInPolygon(5, 5, concave)).toBe(true); // notch vertex itself
  });

  it("resolves exactly the in-polygon points of a grid", () => {
    const coords: number[] = [];
    const expected: number[] = [];
    let index = 0;
    for (let x = -2; x <= 12; x += 1) {
      for (let y = -2; y <= 12; y += 1) {
        coords.push(x, y);
        if (x >= 0 && x <= 10 && y >= 0 && y <= 10) expected.push(index);
        index += 1;
      }
    }
    const hits = resolveLasso(new Float64Array(coords), square);
    expect(hits).toEqual(expected);
  });

  it("degenerate polygons select nothing", () => {
    expect(resolveLasso(new Float64Array([1, 1]), [[0, 0], [1, 0]])).toEqual([]);
  });
});

describe("rectangle brush", () => {
  it("is inclusive and orientation-free", () => {
    const rect = { x0: 10, y0: 10, x1: 0, y1: 0 };
    expect(pointInRect(0, 0, rect)).toBe(true);
    expect(pointInRect(10, 10, rect)).toBe(true);
    expect(pointInRect(5, 5, rect)).toBe(true);
    expect(pointInRect(-0.001, 5, rect)).toBe(false);
    const hits = resolveRect(new Float64Array([5, 5, 20, 20]), rect);
    expect(hits).toEqual([0]);
  });
});
