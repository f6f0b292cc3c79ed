"""Durable task store for the annotation service.

State is an append-only judgment log plus task/annotator snapshot files;
replaying the log reconstructs exactly the live pending/done state after a
crash or restart. Leases are deliberately memory-only: an interrupted
assignment simply returns to the pending pool.
"""

from __future__ import annotations

import csv
import os
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Sequence

from ..errors import AdiAuditError, ConsistencyError, FormatError, ValidationError
from ..judgments import JudgmentRecord, JudgmentSet

DEFAULT_LEASE_SECONDS = 15 * 60

_TASK_COLUMNS = ("id", "sentence", "predicted", "original")


class AuthError(AdiAuditError):
    code = "auth_error"


class ConflictError(AdiAuditError):
    code = "duplicate_judgment"


class LeaseExpiredError(AdiAuditError):
    code = "lease_expired"


class GatingError(AdiAuditError):
    code = "instructions_not_acknowledged"


@dataclass
class AnnotationTask:
    """One false positive to validate. `original_label` never reaches annotators."""

    sample_id: str
    sentence: str  # raw text as humans should see it
    predicted_dialect: str
    original_label: str

    def __post_init__(self):
        if self.predicted_dialect == self.original_label:
            raise ValidationError(
                f"sample {self.sample_id!r} is not a false positive "
                f"(predicted == original == {self.original_label!r})"
            )

    def payload(self) -> dict:
        """What annotators are allowed to see."""
        return {
            "sample_id": self.sample_id,
            "sentence": self.sentence,
            "predicted_dialect": self.predicted_dialect,
        }


@dataclass
class AnnotatorProfile:
    annotator_id: str
    native_dialect: str
    token: str
    passed_instructions: bool = False


@dataclass
class Lease:
    annotator_id: str
    expires_at: float


def import_fps(
    sample_ids: Sequence[str],
    gold: Sequence[str],
    pred: Sequence[str],
    sentences: Sequence[str],
) -> list[AnnotationTask]:
    """One task per mispredicted sample, keyed by the predicted dialect."""
    if not (len(sample_ids) == len(gold) == len(pred) == len(sentences)):
        raise ValidationError("sample_ids, gold, pred and sentences must be aligned")
    return [
        AnnotationTask(sample_id=sid, sentence=sentence, predicted_dialect=p, original_label=g)
        for sid, g, p, sentence in zip(sample_ids, gold, pred, sentences)
        if p != g
    ]


def save_tasks(tasks: Sequence[AnnotationTask], path) -> None:
    """Write the task snapshot TSV (tabs/newlines inside sentences become spaces)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(_TASK_COLUMNS) + "\n")
        for t in tasks:
            sentence = " ".join(t.sentence.split())
            fh.write(f"{t.sample_id}\t{sentence}\t{t.predicted_dialect}\t{t.original_label}\n")


def load_tasks(path) -> list[AnnotationTask]:
    path = Path(path)
    tasks = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        header = next(reader, None)
        if header is None or tuple(header) != _TASK_COLUMNS:
            raise FormatError(f"{path}: expected header {_TASK_COLUMNS}")
        for cells in reader:
            if not cells:
                continue
            if len(cells) != len(_TASK_COLUMNS):
                raise FormatError(f"{path}: malformed row {cells!r}")
            tasks.append(
                AnnotationTask(
                    sample_id=cells[0],
                    sentence=cells[1],
                    predicted_dialect=cells[2],
                    original_label=cells[3],
                )
            )
    seen = set()
    for t in tasks:
        if t.sample_id in seen:
            raise FormatError(f"{path}: duplicate task id {t.sample_id!r}")
        seen.add(t.sample_id)
    return tasks


def load_annotators(path) -> dict[str, AnnotatorProfile]:
    """Read the pre-shared annotator roster: annotator_id, dialect, token."""
    path = Path(path)
    profiles: dict[str, AnnotatorProfile] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        header = next(reader, None)
        if header is None or [c.strip() for c in header[:3]] != ["annotator_id", "dialect", "token"]:
            raise FormatError(f"{path}: expected header annotator_id/dialect/token")
        for cells in reader:
            if not cells or len(cells) < 3:
                continue
            aid, dialect, token = cells[0].strip(), cells[1].strip(), cells[2].strip()
            if aid in profiles:
                raise FormatError(f"{path}: duplicate annotator id {aid!r}")
            profiles[aid] = AnnotatorProfile(annotator_id=aid, native_dialect=dialect, token=token)
    return profiles


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%f+00:00")


class TaskStore:
    """Single-writer task/judgment state with lease-based assignment.

    All mutation happens under one lock and every accepted judgment is
    fsynced to the append-only log before memory is updated, so a restart
    replays to exactly the pre-crash state.
    """

    def __init__(
        self,
        store_dir,
        tasks: Sequence[AnnotationTask],
        annotators: dict[str, AnnotatorProfile],
        lease_seconds: float = DEFAULT_LEASE_SECONDS,
        now_fn: Callable[[], float] = time.monotonic,
    ):
        self.store_dir = Path(store_dir)
        self.store_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.store_dir / "judgments.log"
        self.acks_path = self.store_dir / "acks.log"
        self.lease_seconds = lease_seconds
        self.now_fn = now_fn
        self.tasks: dict[str, AnnotationTask] = {}
        for t in tasks:
            if t.sample_id in self.tasks:
                raise ValidationError(f"duplicate task id {t.sample_id!r}")
            self.tasks[t.sample_id] = t
        self.annotators = annotators
        self.judgments = JudgmentSet()
        self.done: set[str] = set()
        self.leases: dict[str, Lease] = {}
        self._lock = threading.RLock()
        self._replay_disk_state()

    # -- persistence ---------------------------------------------------

    def _replay_disk_state(self) -> None:
        if self.log_path.exists():
            replayed = JudgmentSet.from_jsonl(self.log_path.read_text(encoding="utf-8"))
            for rec in replayed:
                if rec.sample_id not in self.tasks:
                    raise ConsistencyError(
                        f"judgment log references unknown task {rec.sample_id!r}"
                    )
                self.judgments.add(rec)
                self.done.add(rec.sample_id)
        if self.acks_path.exists():
            for line in self.acks_path.read_text(encoding="utf-8").splitlines():
                aid = line.strip()
                if aid in self.annotators:
                    self.annotators[aid].passed_instructions = True

    def _append(self, path: Path, line: str) -> None:
        with open(path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(line)
            fh.flush()
            os.fsync(fh.fileno())

    # -- authentication & gating ----------------------------------------

    def authenticate(self, annotator_id: str, token: Optional[str]) -> AnnotatorProfile:
        profile = self.annotators.get(annotator_id)
        if profile is None or token != profile.token:
            raise AuthError(f"unknown annotator or bad token: {annotator_id!r}")
        return profile

    def acknowledge_instructions(self, annotator_id: str, token: Optional[str]) -> None:
        profile = self.authenticate(annotator_id, token)
        with self._lock:
            if not profile.passed_instructions:
                profile.passed_instructions = True
                self._append(self.acks_path, annotator_id + "\n")

    # -- assignment ------------------------------------------------------

    def _expire_leases(self) -> None:
        now = self.now_fn()
        stale = [tid for tid, lease in self.leases.items() if lease.expires_at <= now]
        for tid in stale:
            del self.leases[tid]

    def next_task(self, annotator_id: str, token: Optional[str]) -> Optional[AnnotationTask]:
        """Assign one pending task for the annotator's dialect, under a lease."""
        profile = self.authenticate(annotator_id, token)
        if not profile.passed_instructions:
            raise GatingError(f"annotator {annotator_id!r} has not acknowledged the instructions")
        with self._lock:
            self._expire_leases()
            # keep the previously leased task if the annotator re-asks
            for tid, lease in self.leases.items():
                if lease.annotator_id == annotator_id:
                    lease.expires_at = self.now_fn() + self.lease_seconds
                    return self.tasks[tid]
            judged = {
                tid for (tid, aid) in ((r.sample_id, r.annotator_id) for r in self.judgments)
                if aid == annotator_id
            }
            for tid in sorted(self.tasks):
                task = self.tasks[tid]
                if task.predicted_dialect != profile.native_dialect:
                    continue
                if tid in self.done or tid in self.leases or tid in judged:
                    continue
                self.leases[tid] = Lease(
                    annotator_id=annotator_id, expires_at=self.now_fn() + self.lease_seconds
                )
                return task
            return None

    # -- judgment intake ---------------------------------------------------

    def submit_judgment(
        self,
        annotator_id: str,
        token: Optional[str],
        sample_id: str,
        dialect: str,
        verdict: str,
        timestamp: Optional[str] = None,
    ) -> JudgmentRecord:
        self.authenticate(annotator_id, token)
        with self._lock:
            self._expire_leases()
            task = self.tasks.get(sample_id)
            if task is None:
                raise ValidationError(f"unknown task {sample_id!r}")
            if any(
                r.sample_id == sample_id and r.annotator_id == annotator_id
                for r in self.judgments
            ):
                raise ConflictError(
                    f"annotator {annotator_id!r} already judged sample {sample_id!r}"
                )
            if dialect != task.predicted_dialect:
                raise ValidationError(
                    f"judgment dialect {dialect!r} does not match the task's "
                    f"predicted dialect {task.predicted_dialect!r}"
                )
            lease = self.leases.get(sample_id)
            if lease is None or lease.annotator_id != annotator_id:
                raise LeaseExpiredError(
                    f"no active lease on {sample_id!r} for {annotator_id!r}; request a new task"
                )
            rec = JudgmentRecord(
                sample_id=sample_id,
                annotator_id=annotator_id,
                dialect=dialect,
                verdict=verdict,
                timestamp=timestamp or utc_now_iso(),
            )
            self._append(self.log_path, rec.to_json() + "\n")
            self.judgments.add(rec)
            self.done.add(sample_id)
            del self.leases[sample_id]
            return rec

    # -- reporting ---------------------------------------------------------

    def status_of(self, sample_id: str) -> str:
        with self._lock:
            self._expire_leases()
            if sample_id in self.done:
                return "done"
            if sample_id in self.leases:
                return "assigned"
            return "pending"

    def progress(self) -> dict:
        """Per-dialect pending/assigned/done counts; they sum to the task totals."""
        with self._lock:
            self._expire_leases()
            counts: dict[str, dict[str, int]] = {}
            for tid, task in self.tasks.items():
                entry = counts.setdefault(
                    task.predicted_dialect, {"pending": 0, "assigned": 0, "done": 0}
                )
                if tid in self.done:
                    entry["done"] += 1
                elif tid in self.leases:
                    entry["assigned"] += 1
                else:
                    entry["pending"] += 1
            totals = {
                key: sum(e[key] for e in counts.values())
                for key in ("pending", "assigned", "done")
            }
            return {"per_dialect": counts, "totals": totals}

    def export_jsonl(self) -> str:
        with self._lock:
            return self.judgments.to_jsonl()
