"""Native-speaker judgment records and the line-delimited interchange format.

One record is one annotator's verdict on one false positive: is the sentence
valid in the dialect the model predicted? `unsure` is stored verbatim and only
collapsed to `invalid` when metrics are computed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .errors import FormatError, ValidationError

VERDICTS = ("valid", "invalid", "unsure")

_EMPTY_MARKER = "# no judgments\n"


@dataclass(frozen=True)
class JudgmentRecord:
    sample_id: str
    annotator_id: str
    dialect: str
    verdict: str
    timestamp: str  # UTC ISO-8601

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValidationError(f"verdict {self.verdict!r} not one of {VERDICTS}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "sample_id": self.sample_id,
                "annotator_id": self.annotator_id,
                "dialect": self.dialect,
                "verdict": self.verdict,
                "timestamp": self.timestamp,
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, line: str) -> "JudgmentRecord":
        try:
            obj = json.loads(line)
            return cls(
                sample_id=obj["sample_id"],
                annotator_id=obj["annotator_id"],
                dialect=obj["dialect"],
                verdict=obj["verdict"],
                timestamp=obj["timestamp"],
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise FormatError(f"bad judgment line: {line!r}") from exc


class JudgmentSet:
    """A collection of judgments, at most one per (sample_id, annotator_id)."""

    def __init__(self, records: Iterable[JudgmentRecord] = ()):
        self.records: list[JudgmentRecord] = []
        self._keys: set[tuple[str, str]] = set()
        for rec in records:
            self.add(rec)

    def add(self, rec: JudgmentRecord) -> None:
        key = (rec.sample_id, rec.annotator_id)
        if key in self._keys:
            raise ValidationError(
                f"duplicate judgment for sample {rec.sample_id!r} by {rec.annotator_id!r}"
            )
        self._keys.add(key)
        self.records.append(rec)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def for_dialect(self, dialect: str) -> list[JudgmentRecord]:
        return [r for r in self.records if r.dialect == dialect]

    def votes(self) -> dict[tuple[str, str], list[str]]:
        """Verdicts grouped by (sample_id, dialect)."""
        grouped: dict[tuple[str, str], list[str]] = {}
        for r in self.records:
            grouped.setdefault((r.sample_id, r.dialect), []).append(r.verdict)
        return grouped

    def resolved_valid(self) -> set[tuple[str, str]]:
        """(sample_id, dialect) pairs resolved as valid.

        Majority vote; `unsure` counts as invalid and `valid` loses ties,
        so a correction is only applied when annotators clearly support it.
        """
        out = set()
        for key, verdicts in self.votes().items():
            n_valid = sum(v == "valid" for v in verdicts)
            if n_valid > len(verdicts) - n_valid:
                out.add(key)
        return out

    def validated_samples(self, dialect: str) -> set[str]:
        return {r.sample_id for r in self.records if r.dialect == dialect}

    def dialects(self) -> list[str]:
        return sorted({r.dialect for r in self.records})

    def save(self, path) -> None:
        """Write line-delimited JSON with stable field order."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_jsonl())

    def to_jsonl(self) -> str:
        if not self.records:
            return _EMPTY_MARKER
        return "".join(rec.to_json() + "\n" for rec in self.records)

    @classmethod
    def load(cls, path) -> "JudgmentSet":
        return cls.from_jsonl(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def from_jsonl(cls, text: str) -> "JudgmentSet":
        records = [
            JudgmentRecord.from_json(line)
            for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        ]
        return cls(records)
