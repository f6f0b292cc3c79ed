"""HTTP+JSON API over the task store.

Routes (all JSON unless noted):
  GET  /api/instructions           -> instruction + worked-example pages
  POST /api/instructions/ack       -> unlock task assignment for an annotator
  GET  /api/tasks/next?annotator=  -> one leased task, or {"task": null}
  POST /api/judgments              -> record a verdict
  GET  /api/progress               -> per-dialect pending/assigned/done
  GET  /api/export                 -> line-delimited JSON judgments (text)
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..errors import AdiAuditError, ValidationError
from ..judgments import VERDICTS
from .store import AuthError, ConflictError, GatingError, LeaseExpiredError, TaskStore

# Reconstructed gating flow: one instructions page, then three worked examples.
DEFAULT_PAGES = [
    {
        "kind": "instructions",
        "title": "Instructions",
        "body": (
            "You will see Arabic sentences, one at a time. For each sentence, "
            "tell us whether it could have been written by a native speaker of "
            "your dialect. Judge the sentence as a whole, in everyday informal "
            "usage. There are three choices: Yes, No, and Maybe / Not Sure. "
            "Work through the examples first; the real sentences follow."
        ),
    },
    {
        "kind": "example",
        "title": "Example 1",
        "body": (
            "A sentence made only of words shared across Arabic varieties "
            "should be judged Yes: it is acceptable in your dialect even if it "
            "is acceptable elsewhere too."
        ),
    },
    {
        "kind": "example",
        "title": "Example 2",
        "body": (
            "A sentence with grammar or vocabulary your dialect never uses "
            "should be judged No, even when you can understand what it means."
        ),
    },
    {
        "kind": "example",
        "title": "Example 3",
        "body": (
            "If you genuinely cannot decide, choose Maybe / Not Sure rather "
            "than guessing; it is treated conservatively."
        ),
    },
]

_ERROR_STATUS = {
    AuthError: 401,
    GatingError: 403,
    ConflictError: 409,
    LeaseExpiredError: 410,
}


class JudgmentIn(BaseModel):
    sample_id: str
    annotator: str
    dialect: str
    verdict: str


def _error_response(exc: AdiAuditError) -> JSONResponse:
    status = _ERROR_STATUS.get(type(exc), 400)
    body = {"error": exc.code, "message": str(exc)}
    if isinstance(exc, LeaseExpiredError):
        body["retry"] = True
    return JSONResponse(status_code=status, content=body)


def load_pages(path) -> list[dict]:
    pages = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(pages, list) or not all("body" in p for p in pages):
        raise ValidationError(f"{path}: expected a JSON list of pages with 'body' fields")
    return pages


def create_app(store: TaskStore, pages: Optional[list[dict]] = None, ui_dir=None) -> FastAPI:
    app = FastAPI(title="adi-audit annotation service", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.pages = pages if pages is not None else DEFAULT_PAGES

    @app.exception_handler(AdiAuditError)
    async def _handle_domain_error(request: Request, exc: AdiAuditError):
        return _error_response(exc)

    @app.get("/api/instructions")
    def instructions():
        return {"pages": app.state.pages, "verdicts": list(VERDICTS)}

    @app.post("/api/instructions/ack")
    def ack_instructions(
        annotator: str = Query(...),
        x_annotator_token: Optional[str] = Header(default=None),
        token: Optional[str] = Query(default=None),
    ):
        store.acknowledge_instructions(annotator, x_annotator_token or token)
        return {"status": "ok"}

    @app.get("/api/tasks/next")
    def next_task(
        annotator: str = Query(...),
        x_annotator_token: Optional[str] = Header(default=None),
        token: Optional[str] = Query(default=None),
    ):
        task = store.next_task(annotator, x_annotator_token or token)
        if task is None:
            return {"task": None, "lease_seconds": store.lease_seconds}
        return {"task": task.payload(), "lease_seconds": store.lease_seconds}

    @app.post("/api/judgments")
    def submit_judgment(
        body: JudgmentIn,
        x_annotator_token: Optional[str] = Header(default=None),
        token: Optional[str] = Query(default=None),
    ):
        rec = store.submit_judgment(
            annotator_id=body.annotator,
            token=x_annotator_token or token,
            sample_id=body.sample_id,
            dialect=body.dialect,
            verdict=body.verdict,
        )
        return {"status": "ok", "sample_id": rec.sample_id, "verdict": rec.verdict}

    @app.get("/api/progress")
    def progress():
        return store.progress()

    @app.get("/api/export")
    def export():
        return PlainTextResponse(store.export_jsonl(), media_type="application/x-ndjson")

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
