import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf8")) as T;
}

export interface RecordedCall {
  request: unknown;
  status: number;
  body: unknown;
}

export interface SessionReplayFixture {
  create: { request: unknown; status: number; body: { session_id: string } };
  overs: RecordedCall[];
  session: { status: number; body: unknown };
  models: unknown;
  healthz: unknown;
}

export interface ValidationFixture {
  create: RecordedCall[];
  append: Array<RecordedCall & { session: unknown; prior: unknown[] }>;
}

/** A fetch stub that pops canned {status, body} responses in order and
 * records every request it sees. */
export function cannedFetch(
  responses: Array<{ status: number; body: unknown }>,
) {
  const calls: Array<{ url: string; method: string; body: unknown }> = [];
  const fetchImpl = async (url: string, init?: RequestInit) => {
    const next = responses.shift();
    if (!next) throw new Error(`unexpected request to ${url}`);
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    });
    return new Response(JSON.stringify(next.body), {
      status: next.status,
      headers: { "content-type": "application/json" },
    });
  };
  return { calls, fetchImpl };
}
