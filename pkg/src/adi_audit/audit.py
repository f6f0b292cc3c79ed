"""Validity grouping, the Perc_n distribution, and the maximal-accuracy bound.

A sentence that appears under n distinct labels is "valid in n dialects".
A single-label classifier can do no better than guessing among the n valid
labels of such a sentence, so the achievable accuracy is capped at
Perc_1 + sum_{n>=2} Perc_n / n. Exact-duplicate grouping only ever finds a
lower bound on multi-validity, which makes the computed cap an upper bound.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .corpus import LabeledDataset
from .errors import ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidityGroup:
    """A normalized sentence with the set of distinct labels attached to it."""

    sentence: str
    labels: frozenset[str]

    @property
    def multiplicity(self) -> int:
        return len(self.labels)


@dataclass
class PercDistribution:
    """The vector [Perc_1 .. Perc_N], percentages summing to 100.

    `perc[i]` is the percentage of samples valid in i+1 dialects;
    `sample_count` is the number of units the percentages were taken over.
    """

    n_dialects: int
    perc: list[float]
    sample_count: int

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.n_dialects < 1:
            raise ValidationError("distribution needs at least one dialect")
        if len(self.perc) != self.n_dialects:
            raise ValidationError(
                f"perc vector has {len(self.perc)} entries, expected N={self.n_dialects}"
            )
        if any(p < 0 for p in self.perc):
            raise ValidationError("percentages must be non-negative")
        total = sum(self.perc)
        if not math.isclose(total, 100.0, rel_tol=1e-9):
            raise ValidationError(f"percentages sum to {total!r}, expected 100")

    @classmethod
    def from_percentages(cls, perc_by_n: dict[int, float], n_dialects: Optional[int] = None):
        """Build from a sparse {n: percentage} mapping (1-based n)."""
        n_max = max(perc_by_n) if perc_by_n else 1
        n = n_dialects or n_max
        if n_max > n:
            raise ValidationError(f"bucket {n_max} exceeds N={n}")
        vec = [float(perc_by_n.get(i, 0.0)) for i in range(1, n + 1)]
        return cls(n_dialects=n, perc=vec, sample_count=0)

    @classmethod
    def from_multiplicities(cls, multiplicities: Iterable[int], n_dialects: int):
        """Build from per-sample validity-set sizes."""
        mults = list(multiplicities)
        if not mults:
            raise ValidationError("no samples to build a distribution from")
        counts = [0] * n_dialects
        for m in mults:
            if not 1 <= m <= n_dialects:
                raise ValidationError(f"multiplicity {m} outside [1, {n_dialects}]")
            counts[m - 1] += 1
        total = len(mults)
        return cls(
            n_dialects=n_dialects,
            perc=[100.0 * c / total for c in counts],
            sample_count=total,
        )

    def multi_validity_mass(self) -> float:
        """Sum of Perc_n for n >= 2."""
        return sum(self.perc[1:])


def group_validity(ds: LabeledDataset) -> list[ValidityGroup]:
    """One group per distinct normalized sentence, with all labels seen for it."""
    by_sentence: dict[str, set[str]] = {}
    for s in ds.samples:
        by_sentence.setdefault(s.sentence, set()).add(s.label)
    return [
        ValidityGroup(sentence=sent, labels=frozenset(labels))
        for sent, labels in by_sentence.items()
    ]


def perc_distribution(
    groups: Sequence[ValidityGroup],
    ds: LabeledDataset,
    weighting: str = "samples",
) -> PercDistribution:
    """Count samples (default) or distinct sentences per validity bucket.

    Sample weighting means a sentence valid in n dialects contributes its n
    samples to bucket n; sentence weighting counts it once.
    """
    if weighting not in ("samples", "sentences"):
        raise ValidationError(f"unknown weighting {weighting!r}")
    n_dialects = len(ds.label_inventory)
    mult_of = {g.sentence: g.multiplicity for g in groups}
    if weighting == "samples":
        mults = [mult_of[s.sentence] for s in ds.samples]
    else:
        mults = [g.multiplicity for g in groups]
    return PercDistribution.from_multiplicities(mults, n_dialects)


def expected_max_accuracy(dist: PercDistribution) -> float:
    """Perc_1 + sum_{n=2..N} Perc_n / n, as a percentage."""
    dist.validate()
    return dist.perc[0] + sum(p / n for n, p in enumerate(dist.perc[1:], start=2))


def simulate_oracle(
    ds: LabeledDataset,
    groups: Sequence[ValidityGroup],
    trials: int,
    seed: int,
) -> float:
    """Mean accuracy of a label-set oracle forced to emit a single label.

    Each trial assigns every sample a label drawn uniformly from its
    sentence's validity set; a sample scores when the draw hits its gold
    label, which happens with probability 1/n. The per-sample correct-trial
    counts are therefore drawn as Binomial(trials, 1/n) rather than
    materializing every pick; the returned mean over trials is identical in
    distribution and the result depends only on (seed, trials).
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    mult_of = {g.sentence: g.multiplicity for g in groups}
    n = np.array([mult_of[s.sentence] for s in ds.samples], dtype=np.int64)
    rng = np.random.default_rng(seed)
    correct = rng.binomial(trials, 1.0 / n)
    return 100.0 * float(correct.sum()) / (trials * len(n))


@dataclass
class AuditReport:
    distribution: PercDistribution
    multi_validity_mass: float
    expected_max_accuracy: float
    group_examples: list[ValidityGroup]
    weighting: str

    def to_dict(self) -> dict:
        return {
            "distribution": {
                "n_dialects": self.distribution.n_dialects,
                "perc": self.distribution.perc,
                "perc_rounded": [round(p, 1) for p in self.distribution.perc],
                "sample_count": self.distribution.sample_count,
            },
            "multi_validity_mass": self.multi_validity_mass,
            "expected_max_accuracy": self.expected_max_accuracy,
            "group_examples": [
                {"sentence": g.sentence, "labels": sorted(g.labels), "multiplicity": g.multiplicity}
                for g in self.group_examples
            ],
            "weighting": self.weighting,
        }


def audit_dataset(ds: LabeledDataset, weighting: str = "samples", top_k: int = 20) -> AuditReport:
    """Full audit: groups, distribution, bound, and the strongest example groups."""
    if len(ds.label_inventory) == 1:
        logger.warning("dataset has a single label; the accuracy bound is trivially 100%%")
    groups = group_validity(ds)
    dist = perc_distribution(groups, ds, weighting=weighting)
    ema = expected_max_accuracy(dist)
    examples = sorted(groups, key=lambda g: (-g.multiplicity, g.sentence))[:top_k]
    return AuditReport(
        distribution=dist,
        multi_validity_mass=dist.multi_validity_mass(),
        expected_max_accuracy=ema,
        group_examples=examples,
        weighting=weighting,
    )


class MaximalAccuracyAuditor(BaseEstimator):
    """sklearn-style auditor: fit on (sentences, labels), read off the bound.

    Parameters
    ----------
    weighting : {"samples", "sentences"}
        How Perc_n mass is counted.
    n_dialects : int, optional
        Label-inventory size N for the bucket vector; defaults to the number
        of distinct labels seen in y.
    top_k : int
        How many highest-multiplicity groups to keep as examples.

    Attributes set by fit: `groups_`, `distribution_`, `multi_validity_mass_`,
    `expected_max_accuracy_`, `report_`.
    """

    def __init__(self, weighting: str = "samples", n_dialects: Optional[int] = None, top_k: int = 20):
        self.weighting = weighting
        self.n_dialects = n_dialects
        self.top_k = top_k

    def fit(self, X, y):
        sentences = list(X)
        labels = list(y)
        if len(sentences) != len(labels):
            raise ValidationError("X and y must be the same length")
        if not sentences:
            raise ValidationError("cannot audit an empty dataset")
        by_sentence: dict[str, set[str]] = {}
        for sent, lab in zip(sentences, labels):
            by_sentence.setdefault(sent, set()).add(lab)
        self.groups_ = [
            ValidityGroup(sentence=s, labels=frozenset(ls)) for s, ls in by_sentence.items()
        ]
        mult_of = {g.sentence: g.multiplicity for g in self.groups_}
        n = self.n_dialects or len(set(labels))
        if self.weighting == "samples":
            mults = [mult_of[s] for s in sentences]
        elif self.weighting == "sentences":
            mults = [g.multiplicity for g in self.groups_]
        else:
            raise ValidationError(f"unknown weighting {self.weighting!r}")
        self.distribution_ = PercDistribution.from_multiplicities(mults, n)
        self.multi_validity_mass_ = self.distribution_.multi_validity_mass()
        self.expected_max_accuracy_ = expected_max_accuracy(self.distribution_)
        examples = sorted(self.groups_, key=lambda g: (-g.multiplicity, g.sentence))[: self.top_k]
        self.report_ = AuditReport(
            distribution=self.distribution_,
            multi_validity_mass=self.multi_validity_mass_,
            expected_max_accuracy=self.expected_max_accuracy_,
            group_examples=examples,
            weighting=self.weighting,
        )
        return self

    def score(self, X=None, y=None):
        """The fitted accuracy bound (percentage)."""
        return self.expected_max_accuracy_
