"""adi-audit: dataset auditing and corrected evaluation for Arabic dialect ID."""

__version__ = "0.1.0"

from .audit import (
    AuditReport,
    MaximalAccuracyAuditor,
    PercDistribution,
    ValidityGroup,
    audit_dataset,
    expected_max_accuracy,
    group_validity,
    perc_distribution,
    simulate_oracle,
)
from .corpus import (
    CityCountryMap,
    LabeledDataset,
    LabeledSample,
    ParallelRow,
    ingest_labeled,
    ingest_parallel,
    load_predictions,
    parallel_to_di,
    save_dataset,
)
from .judgments import JudgmentRecord, JudgmentSet
from .metrics import (
    ConfusionMatrix,
    CorrectedCounts,
    EvalCounts,
    classification_report,
    cohen_kappa,
    confusion,
    corrected_counts,
    corrected_report,
    derive_multilabel_gold,
    eval_counts,
    fp_breakdown,
    multilabel_report,
    round_half_away,
)
from .textnorm import ArabicTextNormalizer, is_effectively_empty, normalize_sentence

__all__ = [
    "ArabicTextNormalizer",
    "AuditReport",
    "CityCountryMap",
    "ConfusionMatrix",
    "CorrectedCounts",
    "EvalCounts",
    "JudgmentRecord",
    "JudgmentSet",
    "LabeledDataset",
    "LabeledSample",
    "MaximalAccuracyAuditor",
    "ParallelRow",
    "PercDistribution",
    "ValidityGroup",
    "audit_dataset",
    "classification_report",
    "cohen_kappa",
    "confusion",
    "corrected_counts",
    "corrected_report",
    "derive_multilabel_gold",
    "eval_counts",
    "expected_max_accuracy",
    "fp_breakdown",
    "group_validity",
    "ingest_labeled",
    "ingest_parallel",
    "is_effectively_empty",
    "load_predictions",
    "multilabel_report",
    "normalize_sentence",
    "parallel_to_di",
    "perc_distribution",
    "round_half_away",
    "save_dataset",
    "simulate_oracle",
]
