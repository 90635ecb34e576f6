/** Pure projections from server payloads to what the console displays.
 * No arithmetic happens here: every number is passed through `show`, which
 * renders the payload value verbatim, so displayed digits always equal the
 * service's JSON. */

import type {
  OverResponse,
  PredictionPayload,
  RecommendationPayload,
  SessionSnapshot,
} from "./types.js";

/** Render a payload number exactly as JavaScript parsed it. */
export function show(value: number): string {
  return String(value);
}

export interface TrajectoryRow {
  over: string;
  pi: string;
  wicket: boolean;
}

export interface PredictionView {
  expectedPi: string;
  intervalLow: string;
  intervalHigh: string;
  source: string;
  observations: string;
}

export interface RecommendationCard {
  zone: string;
  message: string;
  bandLow: string;
  bandHigh: string;
  requiredRunRateHint: string | null;
  basis: string;
  prediction: PredictionView | null;
}

export type Banner = "live" | "victory" | "defeat";

export interface ConsoleViewModel {
  sessionId: string;
  target: string;
  totalBalls: string;
  venueClass: string;
  currentPi: string;
  rows: TrajectoryRow[];
  wicketOvers: string[];
  card: RecommendationCard | null;
  banner: Banner;
  locked: boolean;
}

export function projectPrediction(p: PredictionPayload): PredictionView {
  return {
    expectedPi: show(p.expected_pi),
    intervalLow: show(p.interval[0]),
    intervalHigh: show(p.interval[1]),
    source: p.source,
    observations: show(p.n_observations),
  };
}

export function projectRecommendation(
  rec: RecommendationPayload,
  prediction: PredictionPayload | null,
): RecommendationCard {
  return {
    zone: rec.zone,
    message: rec.message,
    bandLow: show(rec.target_band[0]),
    bandHigh: show(rec.target_band[1]),
    requiredRunRateHint:
      rec.required_run_rate_hint === null ? null : show(rec.required_run_rate_hint),
    basis: rec.basis,
    prediction: prediction === null ? null : projectPrediction(prediction),
  };
}

export function projectOverResponse(body: OverResponse): RecommendationCard | null {
  if (body.recommendation === null) return null;
  return projectRecommendation(body.recommendation, body.prediction);
}

/** The chase starts at PI 1.0 before any over is recorded. */
export const ORIGIN_PI = "1";

export function projectSession(snapshot: SessionSnapshot): ConsoleViewModel {
  const rows = snapshot.trajectory.map((p) => ({
    over: show(p.over),
    pi: show(p.pi),
    wicket: p.wicket,
  }));
  const last = snapshot.entries[snapshot.entries.length - 1];
  const currentPi =
    snapshot.trajectory.length === 0
      ? ORIGIN_PI
      : show(snapshot.trajectory[snapshot.trajectory.length - 1].pi);
  let banner: Banner = "live";
  if (snapshot.terminal) banner = snapshot.won ? "victory" : "defeat";
  return {
    sessionId: snapshot.session_id,
    target: show(snapshot.target),
    totalBalls: show(snapshot.total_balls),
    venueClass: snapshot.venue_class,
    currentPi,
    rows,
    wicketOvers: snapshot.wicket_overs.map(show),
    card: last === undefined ? null : projectOverResponse(last),
    banner,
    locked: snapshot.terminal,
  };
}
