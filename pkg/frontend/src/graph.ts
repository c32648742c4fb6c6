// Small deterministic SVG renderer for mini-dictionary graphs: words on a
// circle, definitional links as arrowed chords. No dependencies, so the
// output is stable and easy to snapshot.

import { LABEL_COLORS, MGS_BADGE_COLOR } from "./state.js";

export interface GraphSpec {
  words: string[];
  arcs: [string, string][];
  labels: Record<string, string>;
  mgs: Set<string>;
}

interface Point {
  x: number;
  y: number;
}

export function circularLayout(words: string[], radius: number, center: number): Map<string, Point> {
  const ordered = [...words].sort();
  const layout = new Map<string, Point>();
  ordered.forEach((word, i) => {
    const angle = (2 * Math.PI * i) / ordered.length - Math.PI / 2;
    layout.set(word, {
      x: center + radius * Math.cos(angle),
      y: center + radius * Math.sin(angle),
    });
  });
  return layout;
}

const SIZE = 640;
const NODE_RADIUS = 14;

export function renderGraphSvg(spec: GraphSpec): string {
  const center = SIZE / 2;
  const layout = circularLayout(spec.words, center - 60, center);
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${SIZE} ${SIZE}" role="img">`,
    `<defs><marker id="arrow" viewBox="0 0 8 8" refX="7" refY="4" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L8,4 L0,8 z" fill="#888"/></marker></defs>`,
  ];
  for (const [from, to] of spec.arcs) {
    const a = layout.get(from);
    const b = layout.get(to);
    if (!a || !b) continue;
    if (from === to) {
      parts.push(
        `<circle cx="${a.x.toFixed(1)}" cy="${(a.y - NODE_RADIUS).toFixed(1)}" r="${NODE_RADIUS / 2}" fill="none" stroke="#888"/>`,
      );
      continue;
    }
    // shorten the chord so the arrowhead stops at the node edge
    const dx = b.x - a.x;
    const dy = b.y - a.y;
    const length = Math.hypot(dx, dy) || 1;
    const tx = b.x - (dx / length) * (NODE_RADIUS + 2);
    const ty = b.y - (dy / length) * (NODE_RADIUS + 2);
    parts.push(
      `<line x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" x2="${tx.toFixed(1)}" y2="${ty.toFixed(1)}" stroke="#888" stroke-width="1" marker-end="url(#arrow)"/>`,
    );
  }
  for (const word of [...spec.words].sort()) {
    const p = layout.get(word);
    if (!p) continue;
    const fill = LABEL_COLORS[spec.labels[word] ?? "OUTSIDE"] ?? LABEL_COLORS.OUTSIDE;
    const stroke = spec.mgs.has(word) ? MGS_BADGE_COLOR : "#555";
    const width = spec.mgs.has(word) ? 3 : 1;
    parts.push(
      `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="${NODE_RADIUS}" fill="${fill}" stroke="${stroke}" stroke-width="${width}"/>`,
      `<text x="${p.x.toFixed(1)}" y="${(p.y - NODE_RADIUS - 4).toFixed(1)}" text-anchor="middle" font-size="11">${escapeXml(word)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
