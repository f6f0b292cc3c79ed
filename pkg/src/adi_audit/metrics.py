"""Classification reports, judgment-corrected metrics, multi-label evaluation.

The corrected metrics move false positives that native speakers judged valid
into the true positives (TP* = TP + incorrect FP, FP* = FP - incorrect FP)
and recompute precision/recall/F1 from there; recall keeps the original FN.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Optional, Sequence

from .corpus import LabeledDataset
from .errors import ConsistencyError, LabelError, ValidationError
from .judgments import JudgmentSet


def round_half_away(x: float, ndigits: int = 2) -> float:
    """Round with ties going away from zero (0.625 -> 0.63), unlike round()."""
    quantum = Decimal(1).scaleb(-ndigits)
    return float(Decimal(repr(float(x))).quantize(quantum, rounding=ROUND_HALF_UP))


@dataclass
class ConfusionMatrix:
    """Rows are gold labels, columns are predicted labels."""

    labels: tuple[str, ...]
    counts: list[list[int]]

    def __post_init__(self):
        size = len(self.labels)
        if len(self.counts) != size or any(len(r) != size for r in self.counts):
            raise ValidationError("confusion matrix must be square over its label list")
        if any(c < 0 for row in self.counts for c in row):
            raise ValidationError("confusion matrix counts must be non-negative")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"label {label!r} not in confusion matrix") from None

    def tp(self, label: str) -> int:
        i = self.index(label)
        return self.counts[i][i]

    def fp(self, label: str) -> int:
        i = self.index(label)
        return sum(self.counts[g][i] for g in range(len(self.labels))) - self.counts[i][i]

    def fn(self, label: str) -> int:
        i = self.index(label)
        return sum(self.counts[i]) - self.counts[i][i]

    def support(self, label: str) -> int:
        return sum(self.counts[self.index(label)])

    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def to_csv(self) -> str:
        lines = ["gold\\pred," + ",".join(self.labels)]
        for label, row in zip(self.labels, self.counts):
            lines.append(label + "," + ",".join(str(c) for c in row))
        return "\n".join(lines) + "\n"


def confusion(
    gold: Sequence[str],
    pred: Sequence[str],
    labels: Optional[Sequence[str]] = None,
) -> ConfusionMatrix:
    """Count gold/pred co-occurrences over an ordered label list."""
    if len(gold) != len(pred):
        raise ValidationError(f"gold has {len(gold)} items, pred has {len(pred)}")
    ordered = tuple(labels) if labels is not None else tuple(sorted(set(gold) | set(pred)))
    index = {label: i for i, label in enumerate(ordered)}
    counts = [[0] * len(ordered) for _ in ordered]
    for g, p in zip(gold, pred):
        if g not in index:
            raise LabelError(f"gold label {g!r} outside the label inventory")
        if p not in index:
            raise LabelError(f"predicted label {p!r} outside the label inventory")
        counts[index[g]][index[p]] += 1
    return ConfusionMatrix(labels=ordered, counts=counts)


@dataclass
class EvalCounts:
    dialect: str
    tp: int
    fp: int
    fn: int

    @property
    def support(self) -> int:
        return self.tp + self.fn


@dataclass
class CorrectedCounts:
    tp_star: int
    fp_star: int
    incorrect_fp: int
    unvalidated_fp: int

    def __post_init__(self):
        if self.fp_star < 0:
            raise ConsistencyError("corrected FP* went negative")


def eval_counts(cm: ConfusionMatrix) -> dict[str, EvalCounts]:
    return {
        label: EvalCounts(dialect=label, tp=cm.tp(label), fp=cm.fp(label), fn=cm.fn(label))
        for label in cm.labels
    }


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float, bool]:
    """Precision/recall/F1 with the explicit 0-when-undefined policy."""
    zero_division = (tp + fp == 0) or (tp + fn == 0)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1, zero_division


def classification_report(cm: ConfusionMatrix) -> dict:
    """Per-label precision/recall/F1/support plus macro, weighted and accuracy."""
    total = cm.total()
    if total == 0:
        raise ValidationError("empty confusion matrix")
    per_label = {}
    for label in cm.labels:
        tp, fp, fn = cm.tp(label), cm.fp(label), cm.fn(label)
        precision, recall, f1, zero_division = _prf(tp, fp, fn)
        per_label[label] = {
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "support": cm.support(label),
            "tp": tp,
            "fp": fp,
            "fn": fn,
            "zero_division": zero_division,
        }
    n_labels = len(cm.labels)
    macro = {
        key: sum(per_label[l][key] for l in cm.labels) / n_labels
        for key in ("precision", "recall", "f1")
    }
    weighted = {
        key: sum(per_label[l][key] * per_label[l]["support"] for l in cm.labels) / total
        for key in ("precision", "recall", "f1")
    }
    accuracy = sum(cm.tp(l) for l in cm.labels) / total
    return {
        "per_label": per_label,
        "macro_avg": macro,
        "weighted_avg": weighted,
        "accuracy": accuracy,
    }


def corrected_counts(
    ec: EvalCounts,
    judgments: JudgmentSet,
    fp_ids: Optional[set[str]] = None,
) -> CorrectedCounts:
    """Fold valid-judged FPs of this dialect into TP.

    `unsure` counts as invalid; unvalidated FPs stay errors. When `fp_ids`
    (the dialect's actual FP sample ids) is given, judgments referencing any
    other sample are rejected.
    """
    records = judgments.for_dialect(ec.dialect)
    if fp_ids is not None:
        stray = sorted({r.sample_id for r in records} - fp_ids)
        if stray:
            raise ConsistencyError(
                f"judgment(s) for {ec.dialect} reference non-FP sample(s): {stray[:5]}"
            )
    validated = judgments.validated_samples(ec.dialect)
    if len(validated) > ec.fp:
        raise ConsistencyError(
            f"{len(validated)} validated samples exceed the {ec.fp} FPs of {ec.dialect}"
        )
    incorrect = sum(1 for (sid, d) in judgments.resolved_valid() if d == ec.dialect)
    return CorrectedCounts(
        tp_star=ec.tp + incorrect,
        fp_star=ec.fp - incorrect,
        incorrect_fp=incorrect,
        unvalidated_fp=ec.fp - len(validated),
    )


def corrected_report(counts: Iterable[tuple[EvalCounts, CorrectedCounts]]) -> dict:
    """Raw and corrected P/R/F1 per dialect plus macro averages over these dialects."""
    rows = {}
    for ec, cc in counts:
        precision, recall, f1, _ = _prf(ec.tp, ec.fp, ec.fn)
        p_star, r_star, f1_star, _ = _prf(cc.tp_star, cc.fp_star, ec.fn)
        rows[ec.dialect] = {
            "tp": ec.tp,
            "fp": ec.fp,
            "fn": ec.fn,
            "tp_star": cc.tp_star,
            "fp_star": cc.fp_star,
            "incorrect_fp": cc.incorrect_fp,
            "unvalidated_fp": cc.unvalidated_fp,
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "precision_star": p_star,
            "recall_star": r_star,
            "f1_star": f1_star,
        }
    if not rows:
        raise ValidationError("no dialects to report on")
    keys = (
        "precision",
        "recall",
        "f1",
        "precision_star",
        "recall_star",
        "f1_star",
    )
    macro = {k: sum(r[k] for r in rows.values()) / len(rows) for k in keys}
    return {"per_dialect": rows, "macro_avg": macro, "dialects": sorted(rows)}


def fp_breakdown(
    judgments: JudgmentSet,
    sample_ids: Sequence[str],
    gold: Sequence[str],
    pred: Sequence[str],
) -> dict:
    """Split validated FPs per predicted dialect into correct vs incorrect.

    An "incorrect FP" is one the annotators judged valid in the predicted
    dialect (not a true model error); sub-totals are keyed by the sample's
    original gold label.
    """
    if not (len(sample_ids) == len(gold) == len(pred)):
        raise ValidationError("sample_ids, gold and pred must be aligned")
    by_id = {sid: (g, p) for sid, g, p in zip(sample_ids, gold, pred)}
    valid_pairs = judgments.resolved_valid()
    per_dialect: dict[str, dict] = {}
    seen: set[tuple[str, str]] = set()
    for rec in judgments:
        key = (rec.sample_id, rec.dialect)
        if key in seen:
            continue
        seen.add(key)
        if rec.sample_id not in by_id:
            raise ConsistencyError(f"judgment references unknown sample {rec.sample_id!r}")
        orig, predicted = by_id[rec.sample_id]
        if predicted != rec.dialect or orig == rec.dialect:
            raise ConsistencyError(
                f"judgment for sample {rec.sample_id!r} does not reference an FP of {rec.dialect}"
            )
        entry = per_dialect.setdefault(
            rec.dialect, {"correct_fp": 0, "incorrect_fp": 0, "validated": 0, "by_original_label": {}}
        )
        bucket = "incorrect_fp" if key in valid_pairs else "correct_fp"
        entry[bucket] += 1
        entry["validated"] += 1
        sub = entry["by_original_label"].setdefault(orig, {"correct_fp": 0, "incorrect_fp": 0})
        sub[bucket] += 1
    validated = sum(e["validated"] for e in per_dialect.values())
    incorrect = sum(e["incorrect_fp"] for e in per_dialect.values())
    overall = {
        "validated": validated,
        "incorrect_fp": incorrect,
        "correct_fp": validated - incorrect,
        "incorrect_share": 100.0 * incorrect / validated if validated else 0.0,
    }
    return {"per_dialect": per_dialect, "overall": overall}


def multilabel_report(
    gold_sets: Sequence[set[str]],
    pred_sets: Sequence[set[str]],
    inventory: Sequence[str],
) -> dict:
    """One binary evaluation per dialect over set membership, macro-averaged."""
    if not inventory:
        raise ValidationError("empty label inventory")
    if len(gold_sets) != len(pred_sets):
        raise ValidationError("gold and predicted sets must be aligned")
    inventory = list(inventory)
    allowed = set(inventory)
    for sets in (gold_sets, pred_sets):
        for s in sets:
            extra = set(s) - allowed
            if extra:
                raise LabelError(f"label(s) {sorted(extra)} outside the inventory")
    total = len(gold_sets)
    per_dialect = {}
    for d in inventory:
        tp = sum(1 for g, p in zip(gold_sets, pred_sets) if d in g and d in p)
        fp = sum(1 for g, p in zip(gold_sets, pred_sets) if d not in g and d in p)
        fn = sum(1 for g, p in zip(gold_sets, pred_sets) if d in g and d not in p)
        tn = total - tp - fp - fn
        precision, recall, f1, zero_division = _prf(tp, fp, fn)
        per_dialect[d] = {
            "tp": tp,
            "fp": fp,
            "fn": fn,
            "tn": tn,
            "precision": precision,
            "recall": recall,
            "f1": f1,
            "accuracy": (tp + tn) / total if total else 0.0,
            "zero_division": zero_division,
        }
    macro = {
        key: sum(per_dialect[d][key] for d in inventory) / len(inventory)
        for key in ("precision", "recall", "f1", "accuracy")
    }
    return {"per_dialect": per_dialect, "macro_avg": macro}


def derive_multilabel_gold(ds: LabeledDataset, judgments: JudgmentSet) -> list[set[str]]:
    """Per-sample label sets: the original label plus any valid-judged dialect.

    This is a lower bound on true validity; unchecked dialects stay absent.
    """
    valid_by_sample: dict[str, set[str]] = {}
    for sid, dialect in judgments.resolved_valid():
        valid_by_sample.setdefault(sid, set()).add(dialect)
    return [{s.label} | valid_by_sample.get(s.sample_id, set()) for s in ds.samples]


def cohen_kappa(ann_a: Sequence[str], ann_b: Sequence[str]) -> float:
    """Chance-corrected agreement between two aligned annotation sequences."""
    if len(ann_a) != len(ann_b):
        raise ValidationError("annotation sequences must be the same length")
    n = len(ann_a)
    if n == 0:
        raise ValidationError("cannot compute agreement on zero items")
    observed = sum(1 for a, b in zip(ann_a, ann_b) if a == b) / n
    labels = set(ann_a) | set(ann_b)
    expected = sum(
        (sum(1 for a in ann_a if a == l) / n) * (sum(1 for b in ann_b if b == l) / n)
        for l in labels
    )
    if expected == 1.0:
        if observed == 1.0:
            return 1.0
        raise ValidationError("chance agreement is 1 but annotators disagree")
    return (observed - expected) / (1 - expected)
