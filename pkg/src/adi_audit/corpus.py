"""Ingest parallel dialect corpora and flat labeled datasets.

Parallel corpora (one translation column per dialect) are flattened into
(sentence, dialect) samples; city-level labels are mapped to country-level
ones and same-country duplicates collapse to a single copy.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .errors import AlignmentError, FormatError, LabelError, MappingError, ValidationError
from .textnorm import normalize_sentence

logger = logging.getLogger(__name__)

PARALLEL_FORMATS = ("madar", "padic", "mpca", "generic-tsv")

# Column names (lowercased) that never hold a dialect translation
_RESERVED_COLUMNS = {"id", "sent_id", "sentence_id", "row_id", "english", "french", "source"}


@dataclass(frozen=True)
class CityCountryMap:
    """Total mapping label -> country; countries and MSA map to themselves."""

    entries: dict[str, str]

    @classmethod
    def from_tsv(cls, path) -> "CityCountryMap":
        entries: dict[str, str] = {}
        for row in _read_tsv_rows(path, required=("label", "country")):
            label, country = row["label"], row["country"]
            if label in entries and entries[label] != country:
                raise FormatError(f"city map lists {label!r} under two countries")
            entries[label] = country
        return cls(entries)

    @classmethod
    def bundled(cls) -> "CityCountryMap":
        """The map shipped with the package (reconstructed, editable data)."""
        ref = resources.files("adi_audit").joinpath("data/city_country.tsv")
        with resources.as_file(ref) as path:
            return cls.from_tsv(path)

    def to_country(self, label: str) -> str:
        try:
            return self.entries[label]
        except KeyError:
            raise MappingError(f"label {label!r} is not covered by the city/country map") from None

    def level_of(self, label: str) -> str:
        if label == "MSA":
            return "MSA"
        country = self.to_country(label)
        return "country" if country == label else "city"


@dataclass
class ParallelRow:
    """One source sentence with its translations, keyed by dialect column."""

    row_id: str
    translations: dict[str, str]


@dataclass
class LabeledSample:
    sample_id: str
    sentence: str  # normalized
    label: str  # country-level or MSA
    source_row: Optional[str] = None
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass
class LabeledDataset:
    samples: list[LabeledSample]
    label_inventory: tuple[str, ...]
    counters: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        seen_pairs = set()
        inventory = set(self.label_inventory)
        for s in self.samples:
            if not s.sentence:
                raise ValidationError(f"sample {s.sample_id} has an empty sentence")
            if s.label not in inventory:
                raise LabelError(f"sample {s.sample_id} label {s.label!r} not in inventory")
            key = (s.sentence, s.label)
            if key in seen_pairs:
                raise ValidationError(
                    f"duplicate (sentence, label) pair at sample {s.sample_id}"
                )
            seen_pairs.add(key)

    def __len__(self) -> int:
        return len(self.samples)

    def sample_ids(self) -> list[str]:
        return [s.sample_id for s in self.samples]

    def drop_label(self, label: str) -> "LabeledDataset":
        kept = [s for s in self.samples if s.label != label]
        inventory = tuple(l for l in self.label_inventory if l != label)
        return LabeledDataset(kept, inventory, dict(self.counters))


def _read_tsv_rows(path, required: tuple[str, ...] = ()) -> Iterable[dict[str, str]]:
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file, expected a header row") from None
        if len(set(header)) != len(header):
            raise FormatError(f"{path}: duplicate column names in header")
        missing = [c for c in required if c not in header]
        if missing:
            raise FormatError(f"{path}: header is missing column(s) {missing}")
        for cells in reader:
            if not cells:
                continue
            cells += [""] * (len(header) - len(cells))
            yield dict(zip(header, cells))


def ingest_parallel(path, format: str = "generic-tsv") -> list[ParallelRow]:
    """Read a parallel corpus TSV; each non-empty dialect cell becomes one translation.

    Rows with fewer than two non-empty translations carry no cross-dialect
    signal and are skipped with a warning.
    """
    if format not in PARALLEL_FORMATS:
        raise FormatError(f"unknown parallel format {format!r}, expected one of {PARALLEL_FORMATS}")
    path = Path(path)
    rows: list[ParallelRow] = []
    skipped = 0
    for idx, record in enumerate(_read_tsv_rows(path), start=1):
        id_col = next((c for c in record if c.lower() in _RESERVED_COLUMNS and "id" in c.lower()), None)
        row_id = record[id_col].strip() if id_col and record[id_col].strip() else f"{path.stem}:{idx}"
        translations = {
            col: cell.strip()
            for col, cell in record.items()
            if col.lower() not in _RESERVED_COLUMNS and cell.strip()
        }
        if len(translations) < 2:
            skipped += 1
            continue
        rows.append(ParallelRow(row_id=row_id, translations=translations))
    if skipped:
        logger.warning("%s: skipped %d row(s) with fewer than 2 translations", path.name, skipped)
    return rows


def parallel_to_di(
    rows: Iterable[ParallelRow],
    city_map: CityCountryMap,
    fold_orthography: bool = False,
) -> LabeledDataset:
    """Flatten parallel rows into (sentence, dialect) samples.

    City labels are mapped to countries; when the same normalized sentence
    appears under several cities of one country (or repeats across rows with
    the same country), a single copy is kept. Sentences that normalize to
    nothing are dropped and counted.
    """
    samples: list[LabeledSample] = []
    seen: set[tuple[str, str]] = set()
    labels: set[str] = set()
    dropped_empty = 0
    collapsed = 0
    for row in rows:
        for label, raw in row.translations.items():
            country = city_map.to_country(label)
            labels.add(country)
            sentence = normalize_sentence(raw, fold_orthography=fold_orthography)
            if not sentence:
                dropped_empty += 1
                continue
            key = (sentence, country)
            if key in seen:
                collapsed += 1
                continue
            seen.add(key)
            samples.append(
                LabeledSample(
                    sample_id=f"{row.row_id}:{country}",
                    sentence=sentence,
                    label=country,
                    source_row=row.row_id,
                )
            )
    return LabeledDataset(
        samples=samples,
        label_inventory=tuple(sorted(labels)),
        counters={"dropped_empty": dropped_empty, "collapsed_duplicates": collapsed},
    )


def ingest_labeled(path, inventory: Optional[Iterable[str]] = None) -> LabeledDataset:
    """Read a flat `sentence`/`label` TSV (optional `id`, extra columns kept as metadata)."""
    path = Path(path)
    samples: list[LabeledSample] = []
    seen: set[tuple[str, str]] = set()
    labels: set[str] = set()
    offenders: list[str] = []
    allowed = set(inventory) if inventory is not None else None
    collapsed = 0
    dropped_empty = 0
    for idx, record in enumerate(_read_tsv_rows(path, required=("sentence", "label")), start=1):
        label = record["label"].strip()
        if allowed is not None and label not in allowed:
            if label not in offenders:
                offenders.append(label)
            continue
        sentence = normalize_sentence(record["sentence"])
        if not sentence:
            dropped_empty += 1
            continue
        key = (sentence, label)
        if key in seen:
            collapsed += 1
            continue
        seen.add(key)
        labels.add(label)
        sample_id = record.get("id", "").strip() or f"{path.stem}:{idx}"
        metadata = {
            k: v for k, v in record.items() if k not in ("id", "sentence", "label")
        }
        samples.append(
            LabeledSample(sample_id=sample_id, sentence=sentence, label=label, metadata=metadata)
        )
    if offenders:
        raise LabelError(f"labels outside the configured inventory: {offenders}")
    if not samples:
        raise FormatError(f"{path}: no usable samples (header-only or all rows dropped)")
    return LabeledDataset(
        samples=samples,
        label_inventory=tuple(sorted(set(labels) | (allowed or set()))),
        counters={"collapsed_duplicates": collapsed, "dropped_empty": dropped_empty},
    )


def save_dataset(ds: LabeledDataset, path) -> None:
    """Write `id<TAB>sentence<TAB>label` with LF endings; re-ingesting round-trips."""
    extra_cols = sorted({k for s in ds.samples for k in s.metadata})
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(["id", "sentence", "label"] + extra_cols) + "\n")
        for s in ds.samples:
            cells = [s.sample_id, s.sentence, s.label]
            cells += [s.metadata.get(k, "") for k in extra_cols]
            fh.write("\t".join(cells) + "\n")


def load_predictions(path, dataset: LabeledDataset) -> list[tuple[str, str]]:
    """Read `id`/`prediction` TSV and align it 1:1 with the dataset's samples."""
    path = Path(path)
    preds: dict[str, str] = {}
    for record in _read_tsv_rows(path, required=("id", "prediction")):
        sample_id = record["id"].strip()
        if sample_id in preds:
            raise AlignmentError(f"duplicate prediction for id {sample_id!r}")
        preds[sample_id] = record["prediction"].strip()
    gold_ids = dataset.sample_ids()
    missing = [i for i in gold_ids if i not in preds]
    if missing:
        raise AlignmentError(f"missing prediction for id(s) {missing[:5]}")
    extra = set(preds) - set(gold_ids)
    if extra:
        raise AlignmentError(f"prediction id(s) not present in dataset: {sorted(extra)[:5]}")
    inventory = set(dataset.label_inventory)
    bad = sorted({p for p in preds.values() if p not in inventory})
    if bad:
        raise LabelError(f"predicted labels outside the dataset inventory: {bad}")
    return [(i, preds[i]) for i in gold_ids]
