/** Client-side form validation that mirrors the service's rules, so bad
 * entries are caught before a round trip. The rules here must stay in
 * lockstep with the server; the parity test suite replays recorded
 * accepted/rejected requests against both sides. */

import type { AppendOverRequest, CreateSessionRequest } from "./types.js";

export const VENUE_CLASSES = ["home", "away", "neutral"] as const;

/** What the console knows about its live session between appends. Built by
 * folding the requests it has already submitted (the server echoes no
 * cumulative state back). */
export interface SessionFormState {
  target: number;
  totalBalls: number;
  expectedOver: number;
  prevRuns: number;
  prevBalls: number;
  usedPositions: number[];
  terminal: boolean;
}

export function validateCreate(req: CreateSessionRequest): string[] {
  const errors: string[] = [];
  if (!Number.isInteger(req.target) || req.target < 1) {
    errors.push(`target must be a whole number >= 1, got ${req.target}`);
  }
  if (
    !Number.isInteger(req.total_balls) ||
    req.total_balls < 6 ||
    req.total_balls % 6 !== 0
  ) {
    errors.push(
      `total balls must be a positive multiple of 6, got ${req.total_balls}`,
    );
  }
  if (!(VENUE_CLASSES as readonly string[]).includes(req.venue_class)) {
    errors.push(`venue must be one of ${VENUE_CLASSES.join(", ")}`);
  }
  return errors;
}

export function initialFormState(req: CreateSessionRequest): SessionFormState {
  return {
    target: req.target,
    totalBalls: req.total_balls,
    expectedOver: 1,
    prevRuns: 0,
    prevBalls: 0,
    usedPositions: [],
    terminal: false,
  };
}

/** Cumulative legal balls implied by an entry that omits the ball count. */
export function effectiveBalls(
  req: AppendOverRequest,
  totalBalls: number,
): number {
  return req.balls ?? Math.min(req.over * 6, totalBalls);
}

export function validateAppend(
  state: SessionFormState,
  req: AppendOverRequest,
): string[] {
  const errors: string[] = [];
  if (state.terminal) {
    errors.push("the chase is over; no further overs can be entered");
    return errors;
  }
  if (req.over !== state.expectedOver) {
    errors.push(`expected over ${state.expectedOver}, got ${req.over}`);
  }
  if (!Number.isInteger(req.runs) || req.runs < state.prevRuns) {
    errors.push(
      `cumulative runs cannot decrease (${state.prevRuns} so far, got ${req.runs})`,
    );
  }
  const balls = effectiveBalls(req, state.totalBalls);
  if (!Number.isInteger(balls) || balls < state.prevBalls || balls > state.totalBalls) {
    errors.push(
      `cumulative balls must stay within ${state.prevBalls}..${state.totalBalls}, got ${balls}`,
    );
  }
  const seen = new Set(state.usedPositions);
  for (const pos of req.dismissed_positions) {
    if (!Number.isInteger(pos) || pos < 1 || pos > 11) {
      errors.push(`batting positions must be in 1..11, got ${pos}`);
    } else if (seen.has(pos)) {
      errors.push(`position ${pos} is already out`);
    } else {
      seen.add(pos);
    }
  }
  if (seen.size > 10) {
    errors.push("at most 10 wickets can fall");
  }
  if (balls >= state.totalBalls && req.runs < state.target) {
    errors.push("no balls remain and the target is not reached");
  }
  return errors;
}

/** Fold an accepted entry into the tracked state. */
export function applyAppend(
  state: SessionFormState,
  req: AppendOverRequest,
): SessionFormState {
  const balls = effectiveBalls(req, state.totalBalls);
  const runs = req.runs;
  return {
    ...state,
    expectedOver: state.expectedOver + 1,
    prevRuns: runs,
    prevBalls: balls,
    usedPositions: [...state.usedPositions, ...req.dismissed_positions],
    terminal: runs >= state.target || balls >= state.totalBalls,
  };
}
