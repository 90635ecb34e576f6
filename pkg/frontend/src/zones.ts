/** Display-only zone bands for shading the pressure chart. Mirrors the
 * service's bundled zone table (data/zone_table.csv); used purely as chart
 * background, never for classification — zone calls always come from the
 * server's recommendation payload. Neutral venues shade with the away rows,
 * matching the service. */

export type ZoneName = "Target" | "Acceptable" | "Risky" | "Avoid";

export interface ZoneBand {
  lo: number;
  hi: number; // Infinity for the open top band
  zone: ZoneName;
}

export type PhaseLabel = "powerplay" | "middle" | "death";

export function phaseOfOver(over: number): PhaseLabel {
  if (over <= 6) return "powerplay";
  if (over <= 16) return "middle";
  return "death";
}

const HOME: Record<PhaseLabel, ZoneBand[]> = {
  powerplay: [
    { lo: 0.0, hi: 0.5, zone: "Target" },
    { lo: 0.5, hi: 1.0, zone: "Acceptable" },
    { lo: 1.0, hi: 1.5, zone: "Risky" },
    { lo: 1.5, hi: Infinity, zone: "Avoid" },
  ],
  middle: [
    { lo: 0.0, hi: 1.0, zone: "Target" },
    { lo: 1.0, hi: 1.5, zone: "Acceptable" },
    { lo: 1.5, hi: 2.5, zone: "Risky" },
    { lo: 2.5, hi: Infinity, zone: "Avoid" },
  ],
  death: [
    { lo: 0.0, hi: 1.0, zone: "Target" },
    { lo: 1.0, hi: 2.5, zone: "Acceptable" },
    { lo: 2.5, hi: Infinity, zone: "Avoid" },
  ],
};

const AWAY: Record<PhaseLabel, ZoneBand[]> = {
  powerplay: [
    { lo: 0.0, hi: 0.5, zone: "Target" },
    { lo: 0.5, hi: 1.0, zone: "Acceptable" },
    { lo: 1.0, hi: Infinity, zone: "Avoid" },
  ],
  middle: [
    { lo: 0.0, hi: 1.0, zone: "Target" },
    { lo: 1.0, hi: 1.5, zone: "Acceptable" },
    { lo: 1.5, hi: Infinity, zone: "Avoid" },
  ],
  death: [
    { lo: 0.0, hi: 1.0, zone: "Target" },
    { lo: 1.0, hi: 2.5, zone: "Acceptable" },
    { lo: 2.5, hi: Infinity, zone: "Avoid" },
  ],
};

export function zoneBands(venueClass: string, phase: PhaseLabel): ZoneBand[] {
  return (venueClass === "home" ? HOME : AWAY)[phase];
}

export const ZONE_COLORS: Record<ZoneName, string> = {
  Target: "#c8e6c9",
  Acceptable: "#fff9c4",
  Risky: "#ffe0b2",
  Avoid: "#ffcdd2",
};
