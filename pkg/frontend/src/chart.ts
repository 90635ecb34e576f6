/** SVG pressure curve: PI by over, with per-phase zone bands shaded behind
 * the line and dots marking overs in which wickets fell. Pure string
 * rendering so it can be unit-tested without a DOM. */

import type { TrajectoryPoint } from "./types.js";
import { ZONE_COLORS, phaseOfOver, zoneBands } from "./zones.js";

export interface ChartOptions {
  width?: number;
  height?: number;
  padding?: number;
  /** Overs shown on the x axis; defaults to the innings length. */
  maxOver?: number;
  venueClass?: string;
}

const DEFAULTS = { width: 640, height: 320, padding: 36, maxOver: 20 };

function fmt(x: number): string {
  return Number(x.toFixed(2)).toString();
}

export function renderPressureCurve(
  trajectory: TrajectoryPoint[],
  options: ChartOptions = {},
): string {
  const width = options.width ?? DEFAULTS.width;
  const height = options.height ?? DEFAULTS.height;
  const pad = options.padding ?? DEFAULTS.padding;
  const maxOver = options.maxOver ?? DEFAULTS.maxOver;
  const venue = options.venueClass ?? "neutral";

  const maxPi = Math.max(2, ...trajectory.map((p) => p.pi)) * 1.1;
  const x = (over: number) => pad + (over / maxOver) * (width - 2 * pad);
  const y = (pi: number) => height - pad - (pi / maxPi) * (height - 2 * pad);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `class="pressure-curve${trajectory.length === 0 ? " empty-state" : ""}">`,
  );

  // Zone bands, one column per over so phase boundaries show.
  for (let over = 1; over <= maxOver; over++) {
    for (const band of zoneBands(venue, phaseOfOver(over))) {
      const top = Math.min(band.hi, maxPi);
      if (band.lo >= maxPi) continue;
      parts.push(
        `<rect class="zone-band zone-${band.zone.toLowerCase()}" ` +
          `x="${fmt(x(over - 1))}" y="${fmt(y(top))}" ` +
          `width="${fmt(x(over) - x(over - 1))}" ` +
          `height="${fmt(y(band.lo) - y(top))}" ` +
          `fill="${ZONE_COLORS[band.zone]}"/>`,
      );
    }
  }

  // Axes.
  parts.push(
    `<line class="axis" x1="${fmt(x(0))}" y1="${fmt(y(0))}" ` +
      `x2="${fmt(x(maxOver))}" y2="${fmt(y(0))}" stroke="#333"/>`,
    `<line class="axis" x1="${fmt(x(0))}" y1="${fmt(y(0))}" ` +
      `x2="${fmt(x(0))}" y2="${fmt(y(maxPi))}" stroke="#333"/>`,
  );

  // The curve, anchored at the implied origin (0, 1.0).
  const points = [{ over: 0, pi: 1.0, wicket: false }, ...trajectory];
  const path = points.map((p) => `${fmt(x(p.over))},${fmt(y(p.pi))}`).join(" ");
  parts.push(
    `<polyline class="pi-line" points="${path}" ` +
      `fill="none" stroke="#1a237e" stroke-width="2"/>`,
  );

  for (const p of points) {
    const cls = p.wicket ? "pi-dot wicket-dot" : "pi-dot";
    const r = p.wicket ? 5 : 2.5;
    const fill = p.wicket ? "#b71c1c" : "#1a237e";
    parts.push(
      `<circle class="${cls}" data-over="${p.over}" ` +
        `cx="${fmt(x(p.over))}" cy="${fmt(y(p.pi))}" r="${r}" fill="${fill}"/>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n");
}
