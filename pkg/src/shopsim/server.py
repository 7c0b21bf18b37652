"""HTTP session service: JSON request/response over stdlib http.server.

Each browser tab or client owns one session; per-session operations are
serialized behind a lock while the catalog, index and goal set are shared
read-only. Finished episodes are flushed to a line-delimited trajectory log.
"""

from __future__ import annotations

import json
import mimetypes
import re
import secrets
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .agents.base import TrajStep, observation_digest, trajectory_stats
from .goals import Goal
from .harness import (RecordStep, TrajectoryRecord, append_records,
                      replay_record)
from .session import Env, IllegalActionError, Page, parse_action


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class ServerConfig:
    max_sessions: int = 256
    session_ttl: float = 3600.0
    auth_token: str | None = None
    static_dir: str | None = None
    log_path: str | None = None


class ServerSession:
    def __init__(self, session_id: str, goal: Goal, state, observation,
                 created_at: float):
        self.session_id = session_id
        self.goal = goal
        self.state = state
        self.observation = observation
        self.created_at = created_at
        self.lock = threading.Lock()
        self.steps: list[TrajStep] = []
        self.items: set[str] = set()
        self.breakdown = None
        self.done = False


class ShopService:
    """Transport-free core; the HTTP handler is a thin shell around this."""

    def __init__(self, env: Env, config: ServerConfig | None = None,
                 clock=time.time):
        self.env = env
        self.config = config or ServerConfig()
        self.clock = clock
        self.sessions: dict[str, ServerSession] = {}
        self.records: list[TrajectoryRecord] = []
        self.lock = threading.Lock()

    # -- sessions -------------------------------------------------------------

    def _expire_locked(self) -> None:
        now = self.clock()
        dead = [sid for sid, s in self.sessions.items()
                if now - s.created_at > self.config.session_ttl]
        for sid in dead:
            del self.sessions[sid]

    def create_session(self, goal_id: str | None = None,
                       seed: int | None = None) -> ServerSession:
        if goal_id is not None:
            goal = self.env.goals.get(goal_id)
            if goal is None:
                raise ApiError(404, "unknown_goal", f"no goal {goal_id!r}")
        else:
            import random as _random
            goals = list(self.env.goals.values())
            if not goals:
                raise ApiError(404, "no_goals", "server has no goals loaded")
            rng = _random.Random(seed if seed is not None
                                 else secrets.randbits(32))
            goal = goals[rng.randrange(len(goals))]
        with self.lock:
            self._expire_locked()
            if len(self.sessions) >= self.config.max_sessions:
                raise ApiError(503, "capacity", "too many live sessions")
            session_id = secrets.token_hex(12)
            state, observation = self.env.reset(goal)
            session = ServerSession(session_id, goal, state, observation,
                                    self.clock())
            self.sessions[session_id] = session
        return session

    def _session(self, session_id: str) -> ServerSession:
        with self.lock:
            session = self.sessions.get(session_id)
            if session is None:
                raise ApiError(404, "unknown_session", "no such session")
            if self.clock() - session.created_at > self.config.session_ttl:
                del self.sessions[session_id]
                raise ApiError(410, "expired", "session expired")
        return session

    def observation_payload(self, session: ServerSession) -> dict:
        obs = session.observation
        payload = {
            "session_id": session.session_id,
            "goal_id": session.goal.goal_id,
            "instruction": obs.instruction_text,
            "page": obs.page.value,
            "rendered_text": obs.rendered_text,
            "actions": [a.text() for a in obs.actions],
            "done": session.done,
        }
        if session.done and session.breakdown is not None:
            payload["reward"] = str(session.breakdown.r)
            payload["reward_float"] = float(session.breakdown.r)
            payload["breakdown"] = session.breakdown.to_json()
        return payload

    def get_observation(self, session_id: str) -> dict:
        return self.observation_payload(self._session(session_id))

    def get_actions(self, session_id: str) -> dict:
        session = self._session(session_id)
        return {"session_id": session.session_id,
                "actions": [a.text() for a in session.observation.actions]}

    def post_step(self, session_id: str, action_text: str) -> dict:
        session = self._session(session_id)
        with session.lock:
            if session.done:
                raise ApiError(409, "session_done", "episode already ended")
            try:
                action = parse_action(action_text)
            except IllegalActionError as exc:
                raise ApiError(400, exc.code, str(exc)) from exc
            digest = observation_digest(session.observation.rendered_text)
            try:
                state, obs, reward, done, breakdown = self.env.step(
                    session.state, action, session.goal)
            except IllegalActionError as exc:
                raise ApiError(400, exc.code, str(exc)) from exc
            session.state = state
            session.observation = obs
            session.steps.append(TrajStep(digest, action, reward, state.page))
            if state.focused_product_id is not None:
                session.items.add(state.focused_product_id)
            if done:
                session.done = True
                session.breakdown = breakdown
                self._flush(session, truncated=False)
            payload = self.observation_payload(session)
            payload["reward"] = str(reward)
            payload["reward_float"] = float(reward)
            if breakdown is not None:
                payload["breakdown"] = breakdown.to_json()
            return payload

    def _flush(self, session: ServerSession, truncated: bool) -> None:
        record = TrajectoryRecord(
            session_id=session.session_id,
            goal_id=session.goal.goal_id,
            actor="human",
            steps=[RecordStep(s.action.text(), s.page_after.value, s.obs_digest,
                              self.clock()) for s in session.steps],
            breakdown=session.breakdown,
            truncated=truncated,
        )
        with self.lock:
            self.records.append(record)
            if self.config.log_path:
                append_records([record], self.config.log_path)

    # -- goals and logs --------------------------------------------------------

    def goals_payload(self) -> dict:
        return {"goals": [{"goal_id": g.goal_id,
                           "instruction": g.instruction_text}
                          for g in self.env.goals.values()]}

    def logs_payload(self, session_id: str | None = None) -> dict:
        with self.lock:
            records = list(self.records)
        if session_id is not None:
            records = [r for r in records if r.session_id == session_id]
            if not records:
                raise ApiError(404, "unknown_log", "no record for that session")
        return {"records": [r.to_json() for r in records]}

    def replay_payload(self, session_id: str) -> dict:
        with self.lock:
            record = next((r for r in self.records
                           if r.session_id == session_id), None)
        if record is None:
            raise ApiError(404, "unknown_log", "no record for that session")
        goal = self.env.goal(record.goal_id)
        state, obs = self.env.reset(goal)
        steps = []
        for step in record.steps:
            action = parse_action(step.action_text)
            state, obs, reward, done, _ = self.env.step(state, action, goal)
            steps.append({"action": step.action_text, "page": state.page.value,
                          "rendered_text": obs.rendered_text,
                          "reward": str(reward)})
        verify = replay_record(self.env, record)
        return {"record": record.to_json(), "steps": steps,
                "replay_ok": verify.ok, "mismatches": verify.mismatches}


# -- HTTP shell ----------------------------------------------------------------

_SESSION_ROUTE = re.compile(r"^/api/sessions/([0-9a-f]+)/(observation|actions|step)$")
_LOG_ROUTE = re.compile(r"^/api/logs/([0-9a-f-]+)(/replay)?$")


class _Handler(BaseHTTPRequestHandler):
    service: ShopService = None  # injected by make_server

    def log_message(self, *args):  # silence request logging
        pass

    def _send_json(self, payload: dict, status: int = 200) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_error(self, exc: ApiError) -> None:
        self._send_json({"error": {"code": exc.code, "message": exc.message}},
                        exc.status)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(400, "bad_json", f"request body is not JSON: {exc}")
        if not isinstance(data, dict):
            raise ApiError(400, "bad_json", "request body must be an object")
        return data

    def _check_auth(self) -> None:
        token = self.service.config.auth_token
        if token and self.headers.get("X-Auth-Token") != token:
            raise ApiError(401, "unauthorized", "missing or bad token")

    def do_GET(self):
        try:
            if self.path.startswith("/api/"):
                self._check_auth()
                self._send_json(self._route_get(self.path))
            else:
                self._serve_static(self.path)
        except ApiError as exc:
            self._send_error(exc)
        except Exception as exc:  # protocol totality: never wedge a session
            self._send_error(ApiError(500, "internal", str(exc)))

    def do_POST(self):
        try:
            self._check_auth()
            body = self._read_body()
            self._send_json(self._route_post(self.path, body), status=201
                            if self.path == "/api/sessions" else 200)
        except ApiError as exc:
            self._send_error(exc)
        except Exception as exc:
            self._send_error(ApiError(500, "internal", str(exc)))

    def _route_get(self, path: str) -> dict:
        service = self.service
        if path == "/api/health":
            return {"status": "ok", "goals": len(service.env.goals),
                    "products": len(service.env.catalog.products)}
        if path == "/api/goals":
            return service.goals_payload()
        if path == "/api/logs":
            return service.logs_payload()
        match = _LOG_ROUTE.match(path)
        if match:
            session_id, replay = match.groups()
            if replay:
                return service.replay_payload(session_id)
            return service.logs_payload(session_id)
        match = _SESSION_ROUTE.match(path)
        if match:
            session_id, verb = match.groups()
            if verb == "observation":
                return service.get_observation(session_id)
            if verb == "actions":
                return service.get_actions(session_id)
        raise ApiError(404, "no_route", f"no route for GET {path}")

    def _route_post(self, path: str, body: dict) -> dict:
        service = self.service
        if path == "/api/sessions":
            goal_id = body.get("goal_id")
            seed = body.get("seed")
            session = service.create_session(goal_id, seed)
            return service.observation_payload(session)
        match = _SESSION_ROUTE.match(path)
        if match and match.group(2) == "step":
            action_text = body.get("action")
            if not isinstance(action_text, str):
                raise ApiError(400, "missing_action", "body needs 'action'")
            return service.post_step(match.group(1), action_text)
        raise ApiError(404, "no_route", f"no route for POST {path}")

    def _serve_static(self, path: str) -> None:
        root = self.service.config.static_dir
        if root is None:
            raise ApiError(404, "no_route", "static serving is disabled")
        root = Path(root).resolve()
        clean = path.split("?", 1)[0]
        target = (root / clean.lstrip("/")).resolve()
        if target.is_dir():
            target = target / "index.html"
        if not str(target).startswith(str(root)) or not target.is_file():
            target = root / "index.html"  # single-page app fallback
            if not target.is_file():
                raise ApiError(404, "not_found", f"no file for {clean}")
        body = target.read_bytes()
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(env: Env, config: ServerConfig | None = None,
                host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """Build a threading HTTP server; port 0 picks a free port."""
    service = ShopService(env, config)
    handler = type("BoundHandler", (_Handler,), {"service": service})
    server = ThreadingHTTPServer((host, port), handler)
    server.service = service
    return server


def serve_forever(env: Env, config: ServerConfig, host: str, port: int) -> None:
    server = make_server(env, config, host, port)
    address = server.server_address
    print(f"serving on http://{address[0]}:{address[1]}/ "
          f"({len(env.goals)} goals, {len(env.catalog.products)} products)",
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
