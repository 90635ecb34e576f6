/** What-if exploration: "if we score X (and lose these wickets) next over,
 * where does the model put us?" The live session is never touched — the
 * entries already submitted are replayed into a throwaway session, the
 * hypothetical over is appended there, and the result is discarded. */

import type { ApiClient } from "./api.js";
import type {
  AppendOverRequest,
  CreateSessionRequest,
  OverResponse,
} from "./types.js";

export interface WhatIfInput {
  /** Runs added in the hypothetical next over. */
  runs: number;
  /** Positions dismissed in the hypothetical next over. */
  dismissed_positions: number[];
}

export async function whatIfNextOver(
  client: ApiClient,
  session: CreateSessionRequest,
  entries: AppendOverRequest[],
  input: WhatIfInput,
): Promise<OverResponse> {
  const clone = await client.createSession(session);
  for (const entry of entries) {
    await client.appendOver(clone.session_id, entry);
  }
  const last = entries[entries.length - 1];
  const hypothetical: AppendOverRequest = {
    over: (last?.over ?? 0) + 1,
    runs: (last?.runs ?? 0) + input.runs,
    dismissed_positions: input.dismissed_positions,
  };
  return client.appendOver(clone.session_id, hypothetical);
}
