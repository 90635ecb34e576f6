/** Wire types for the chasepressure HTTP API. Field names match the JSON
 * payloads byte for byte; the console never derives numbers of its own. */

export type VenueClass = "home" | "away" | "neutral";

export interface CreateSessionRequest {
  target: number;
  total_balls: number;
  venue_class: VenueClass | string;
}

export interface CreateSessionResponse {
  session_id: string;
  current_pi: number;
}

export interface AppendOverRequest {
  over: number;
  /** Cumulative runs at the end of the over. */
  runs: number;
  /** Batting positions dismissed during this over. */
  dismissed_positions: number[];
  /** Cumulative legal balls; the server defaults to over*6, capped. */
  balls?: number;
}

export interface PredictionPayload {
  expected_pi: number;
  interval: [number, number];
  source: string;
  n_observations: number;
}

export interface RecommendationPayload {
  zone: string;
  message: string;
  target_band: [number, number];
  required_run_rate_hint: number | null;
  basis: string;
}

export interface OverResponse {
  over: number;
  current_pi: number;
  prediction: PredictionPayload | null;
  recommendation: RecommendationPayload | null;
  terminal: boolean;
}

export interface TrajectoryPoint {
  over: number;
  pi: number;
  wicket: boolean;
}

export interface SessionSnapshot {
  session_id: string;
  target: number;
  total_balls: number;
  venue_class: string;
  trajectory: TrajectoryPoint[];
  wicket_overs: number[];
  entries: OverResponse[];
  terminal: boolean;
  won: boolean;
}

export interface HealthResponse {
  status: string;
  sessions: number;
}

export interface ModelsResponse {
  phases: Record<
    string,
    { order: number; precision: number; n_transitions: number; n_states: number }
  >;
  fits: Record<string, { shape: number; rate: number }>;
}

export interface ApiErrorBody {
  error: { code: string; message: string; detail?: string };
}
