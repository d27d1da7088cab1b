"""Local site server: static files plus the consent-gated /log endpoint.

The app exposes exactly one API route, POST /log, which appends one JSON
line per reader event but only when the project enabled logging. The gate
is fail-closed: when logging is off the endpoint answers 403 before the
body is even looked at, and nothing is ever written. TLS termination
belongs to a fronting proxy, not to this process.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict, Field, ValidationError


class ReaderEvent(BaseModel):
    """One reader-runtime event; deliberately has no user-identifying fields.

    Unknown fields are dropped, so nothing beyond these three keys can
    reach the log file.
    """

    model_config = ConfigDict(extra="ignore")

    ts: str = Field(min_length=1)
    event: Literal["word_click", "audio_play", "concordance_view"]
    target: str


def create_app(site_dir: Path, *, logging_enabled: bool, log_path: Path) -> FastAPI:
    """Build the server app for one compiled site directory."""
    app = FastAPI(openapi_url=None, docs_url=None, redoc_url=None)
    write_lock = threading.Lock()

    @app.post("/log")
    async def log_event(request: Request) -> Response:
        if not logging_enabled:
            return Response(status_code=403)
        try:
            payload = json.loads(await request.body())
        except ValueError:
            return Response(status_code=400)
        try:
            event = ReaderEvent.model_validate(payload)
        except ValidationError:
            return Response(status_code=422)
        line = json.dumps(
            {"ts": event.ts, "event": event.event, "target": event.target},
            ensure_ascii=False,
        )
        with write_lock:
            log_path.parent.mkdir(parents=True, exist_ok=True)
            with log_path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
        return Response(status_code=204)

    app.mount("/", StaticFiles(directory=site_dir, html=True), name="site")
    return app
