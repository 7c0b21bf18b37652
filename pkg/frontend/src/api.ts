import type {
  GoalSummary,
  Observation,
  ReplayPayload,
  TrajectoryRecordJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function call<T>(base: string, method: string, path: string,
                       body?: unknown): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${base}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  } catch (err) {
    throw new ApiError(0, "unreachable", `server unreachable: ${err}`);
  }
  const data = await response.json().catch(() => ({}));
  if (!response.ok) {
    const error = (data as { error?: { code: string; message: string } }).error;
    throw new ApiError(response.status, error?.code ?? "http_error",
                       error?.message ?? `HTTP ${response.status}`);
  }
  return data as T;
}

/** Typed client for the session server; one instance per base URL. */
export class ShopClient {
  constructor(readonly base: string = "") {}

  health(): Promise<{ status: string; goals: number; products: number }> {
    return call(this.base, "GET", "/api/health");
  }

  goals(): Promise<{ goals: GoalSummary[] }> {
    return call(this.base, "GET", "/api/goals");
  }

  createSession(goalId?: string, seed?: number): Promise<Observation> {
    const body: Record<string, unknown> = {};
    if (goalId !== undefined) body.goal_id = goalId;
    if (seed !== undefined) body.seed = seed;
    return call(this.base, "POST", "/api/sessions", body);
  }

  observation(sessionId: string): Promise<Observation> {
    return call(this.base, "GET", `/api/sessions/${sessionId}/observation`);
  }

  legalActions(sessionId: string): Promise<{ actions: string[] }> {
    return call(this.base, "GET", `/api/sessions/${sessionId}/actions`);
  }

  step(sessionId: string, action: string): Promise<Observation> {
    return call(this.base, "POST", `/api/sessions/${sessionId}/step`, { action });
  }

  logs(): Promise<{ records: TrajectoryRecordJson[] }> {
    return call(this.base, "GET", "/api/logs");
  }

  replay(sessionId: string): Promise<ReplayPayload> {
    return call(this.base, "GET", `/api/logs/${sessionId}/replay`);
  }
}
