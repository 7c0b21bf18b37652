export class ApiError extends Error {
    status;
    code;
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
}
async function call(base, method, path, body) {
    let response;
    try {
        response = await fetch(`${base}${path}`, {
            method,
            headers: body === undefined ? {} : { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
    }
    catch (err) {
        throw new ApiError(0, "unreachable", `server unreachable: ${err}`);
    }
    const data = await response.json().catch(() => ({}));
    if (!response.ok) {
        const error = data.error;
        throw new ApiError(response.status, error?.code ?? "http_error", error?.message ?? `HTTP ${response.status}`);
    }
    return data;
}
/** Typed client for the session server; one instance per base URL. */
export class ShopClient {
    base;
    constructor(base = "") {
        this.base = base;
    }
    health() {
        return call(this.base, "GET", "/api/health");
    }
    goals() {
        return call(this.base, "GET", "/api/goals");
    }
    createSession(goalId, seed) {
        const body = {};
        if (goalId !== undefined)
            body.goal_id = goalId;
        if (seed !== undefined)
            body.seed = seed;
        return call(this.base, "POST", "/api/sessions", body);
    }
    observation(sessionId) {
        return call(this.base, "GET", `/api/sessions/${sessionId}/observation`);
    }
    legalActions(sessionId) {
        return call(this.base, "GET", `/api/sessions/${sessionId}/actions`);
    }
    step(sessionId, action) {
        return call(this.base, "POST", `/api/sessions/${sessionId}/step`, { action });
    }
    logs() {
        return call(this.base, "GET", "/api/logs");
    }
    replay(sessionId) {
        return call(this.base, "GET", `/api/logs/${sessionId}/replay`);
    }
}
