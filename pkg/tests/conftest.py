from __future__ import annotations

import json
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from aqua.criteria import CRITERIA
from aqua.corpus import Comment


def zero_vector(**overrides) -> dict[str, int]:
    levels = {name: 0 for name in CRITERIA}
    levels.update(overrides)
    return levels


@pytest.fixture
def comments3() -> list[Comment]:
    return [
        Comment(id="c1", text="Why is that?", language="de"),
        Comment(id="c2", text="Because the data says so, see the report.", language="de"),
        Comment(id="c3", text="Nonsense!!!", language="de"),
    ]


class _StubHandler(BaseHTTPRequestHandler):
    """Scriptable prediction endpoint for client tests."""

    server_version = "stub"

    def log_message(self, *args):  # keep test output clean
        pass

    def _send(self, code: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path == "/health":
            behavior = self.server.behavior
            if behavior.get("health_status", 200) != 200:
                self._send(behavior["health_status"], {"error": "unhealthy"})
                return
            payload = behavior.get("health_payload") or {
                "status": "ok", "criteria": list(CRITERIA), "max_level": 3}
            self._send(200, payload)
        else:
            self._send(404, {"error": "not found"})

    def do_POST(self):
        if self.path != "/predict":
            self._send(404, {"error": "not found"})
            return
        behavior = self.server.behavior
        self.server.n_requests += 1
        fail_first = behavior.get("fail_first", 0)
        if self.server.n_requests <= fail_first:
            self._send(503, {"error": "warming up"})
            return
        delay = behavior.get("delay", 0.0)
        if delay:
            import time

            time.sleep(delay)
        length = int(self.headers["Content-Length"])
        request = json.loads(self.rfile.read(length))
        comments = request["comments"]
        self.server.batch_sizes.append(len(comments))
        answer = behavior["answer"]
        predictions = [{"comment_id": c["id"], "scores": answer(c)} for c in comments]
        if behavior.get("shuffle"):
            predictions = list(reversed(predictions))
        if behavior.get("drop_last") and predictions:
            predictions = predictions[:-1]
        self._send(200, {"predictions": predictions})


class StubPredictionServer:
    def __init__(self):
        self.server = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
        self.server.behavior = {"answer": lambda c: zero_vector()}
        self.server.n_requests = 0
        self.server.batch_sizes = []
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def url(self) -> str:
        host, port = self.server.server_address
        return f"http://{host}:{port}"

    def configure(self, **behavior) -> None:
        self.server.behavior.update(behavior)
        self.server.n_requests = 0
        self.server.batch_sizes.clear()

    @property
    def batch_sizes(self) -> list[int]:
        return self.server.batch_sizes

    def close(self) -> None:
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def stub_server():
    server = StubPredictionServer()
    yield server
    server.close()
