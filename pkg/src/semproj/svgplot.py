"""Minimal static SVG scatterplots for bundle export."""

from __future__ import annotations

from pathlib import Path

from .bundle import LayoutBundle

# 10-hue colorblind-aware palette; overflow classes wrap around
PALETTE = (
    "#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee",
    "#aa3377", "#bbbbbb", "#cc6644", "#44aa99", "#882255",
)


def color_for(label: str, ordered_labels: list[str]) -> str:
    return PALETTE[ordered_labels.index(label) % len(PALETTE)]


def scatter_svg(points, labels, size: int = 480, radius: float = 2.5, title: str = "") -> str:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    span_x = max(xs) - min(xs) or 1.0
    span_y = max(ys) - min(ys) or 1.0
    span = max(span_x, span_y)
    pad = 12.0
    scale = (size - 2 * pad) / span
    ordered = sorted(set(labels))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if title:
        parts.append(f'<text x="{pad}" y="{pad}" font-size="11" fill="#333">{title}</text>')
    for (x, y), label in zip(points, labels):
        cx = pad + (x - min(xs)) * scale
        cy = size - pad - (y - min(ys)) * scale
        parts.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{radius}" '
            f'fill="{color_for(label, ordered)}" fill-opacity="0.8"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def export_bundle_svgs(bundle: LayoutBundle, out_dir: Path, color_slot: str | None = None) -> list[Path]:
    """One SVG per grid alpha, colored by truth label or a prompt slot."""
    out_dir.mkdir(parents=True, exist_ok=True)
    if color_slot is None:
        color_slot = bundle.prompt.slots[0].name
    labels = [bundle.labels[sid].slot_values.get(color_slot, "unknown") for sid in bundle.sample_ids]
    written = []
    for alpha, layout in zip(bundle.alpha_grid, bundle.layouts):
        svg = scatter_svg(
            layout.points.tolist(), labels, title=f"{layout.projector_id} alpha={alpha}"
        )
        path = out_dir / f"{bundle.id}.alpha{alpha:.2f}.svg"
        path.write_text(svg)
        written.append(path)
    return written
