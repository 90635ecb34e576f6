/** Thin JSON client for the chasepressure service. All five endpoints, no
 * caching, no retries: the server is the single source of truth. */

import type {
  ApiErrorBody,
  AppendOverRequest,
  CreateSessionRequest,
  CreateSessionResponse,
  HealthResponse,
  ModelsResponse,
  OverResponse,
  SessionSnapshot,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Error codes surfaced verbatim from the service's error envelope. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly detail?: string;

  constructor(code: string, message: string, status: number, detail?: string) {
    super(message);
    this.name = "ApiError";
    this.code = code;
    this.status = status;
    this.detail = detail;
  }
}

function isErrorBody(body: unknown): body is ApiErrorBody {
  return (
    typeof body === "object" &&
    body !== null &&
    typeof (body as ApiErrorBody).error === "object" &&
    (body as ApiErrorBody).error !== null &&
    typeof (body as ApiErrorBody).error.code === "string"
  );
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method, headers: { accept: "application/json" } };
    if (body !== undefined) {
      init.headers = { ...init.headers, "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const payload: unknown = await resp.json();
    if (!resp.ok) {
      if (isErrorBody(payload)) {
        const { code, message, detail } = payload.error;
        throw new ApiError(code, message, resp.status, detail);
      }
      throw new ApiError("Internal", `HTTP ${resp.status}`, resp.status);
    }
    return payload as T;
  }

  createSession(req: CreateSessionRequest): Promise<CreateSessionResponse> {
    return this.request("POST", "/sessions", req);
  }

  appendOver(sessionId: string, req: AppendOverRequest): Promise<OverResponse> {
    return this.request("POST", `/sessions/${sessionId}/overs`, req);
  }

  getSession(sessionId: string): Promise<SessionSnapshot> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  health(): Promise<HealthResponse> {
    return this.request("GET", "/healthz");
  }

  models(): Promise<ModelsResponse> {
    return this.request("GET", "/models");
  }
}
