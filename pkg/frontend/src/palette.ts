/** Deterministic categorical colors: a 10-hue colorblind-aware palette for
 * the first classes (stable assignment by sorted label name), hashed hues
 * for overflow classes. */

export const PALETTE = [
  "#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee",
  "#aa3377", "#bbbbbb", "#cc6644", "#44aa99", "#882255",
] as const;

export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export function overflowColor(label: string): string {
  const hue = fnv1a(label) % 360;
  return `hsl(${hue}, 55%, 55%)`;
}

export class CategoricalPalette {
  private readonly assignment = new Map<string, string>();

  constructor(labels: Iterable<string>) {
    const ordered = Array.from(new Set(labels)).sort();
    ordered.forEach((label, i) => {
      this.assignment.set(label, i < PALETTE.length ? PALETTE[i] : overflowColor(label));
    });
  }

  color(label: string): string {
    return this.assignment.get(label) ?? overflowColor(label);
  }

  entries(): [string, string][] {
    return Array.from(this.assignment.entries());
  }

  get size(): number {
    return this.assignment.size;
  }
}

export function hexToRgb(hex: string): [number, number, number] {
  const value = parseInt(hex.slice(1), 16);
  return [(value >> 16) & 0xff, (value >> 8) & 0xff, value & 0xff];
}

const HSL_RE = /^hsl\((\d+), (\d+)%, (\d+)%\)$/;

/** Any palette output (hex or hsl) to 0..255 RGB for buffer uploads. */
export function cssToRgb(color: string): [number, number, number] {
  if (color.startsWith("#")) return hexToRgb(color);
  const match = HSL_RE.exec(color);
  if (!match) throw new Error(`unsupported color ${color}`);
  const h = Number(match[1]) / 360;
  const s = Number(match[2]) / 100;
  const l = Number(match[3]) / 100;
  const q = l < 0.5 ? l * (1 + s) : l + s - l * s;
  const p = 2 * l - q;
  const channel = (t: number) => {
    if (t < 0) t += 1;
    if (t > 1) t -= 1;
    if (t < 1 / 6) return p + (q - p) * 6 * t;
    if (t < 1 / 2) return q;
    if (t < 2 / 3) return p + (q - p) * (2 / 3 - t) * 6;
    return p;
  };
  return [
    Math.round(channel(h + 1 / 3) * 255),
    Math.round(channel(h) * 255),
    Math.round(channel(h - 1 / 3) * 255),
  ];
}
