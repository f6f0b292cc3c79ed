#!/usr/bin/env python3
"""Regenerate the deterministic test fixtures under tests/fixtures/.

The synthetic QADI-style gold/pred pair realizes the published per-dialect
TP/FP/FN tallies for the seven validated dialects, with a filler label
"Other" absorbing the off-diagonal mass. The judgment log validates every
false positive: the first `incorrect_fp` per dialect are judged valid, the
rest invalid (one record is `unsure` to exercise the collapsing rule).
"""

from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# dialect -> (TP, FP, FN, incorrect_fp)
TABLE5 = {
    "Algeria": (72, 42, 98, 17),
    "Egypt": (170, 93, 30, 69),
    "Lebanon": (134, 79, 60, 41),
    "Palestine": (74, 85, 99, 59),
    "Saudi Arabia": (88, 132, 111, 97),
    "Sudan": (127, 12, 61, 5),
    "Syria": (60, 47, 134, 37),
}

FILLER = "Other"
OTHER_CORRECT = 10

TIMESTAMP = "2024-01-01T00:00:00+00:00"

_AR_DIGITS = "ابتثجحخدذر"


def arabic_token(n: int) -> str:
    return "".join(_AR_DIGITS[int(d)] for d in str(n))


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    with open(FIXTURES / "table5_counts.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dialect\ttp\tfp\tfn\tincorrect_fp\n")
        for dialect, (tp, fp, fn, inc) in TABLE5.items():
            fh.write(f"{dialect}\t{tp}\t{fp}\t{fn}\t{inc}\n")

    rows = []  # (id, sentence, gold, pred)
    counter = 0

    def add(gold: str, pred: str):
        nonlocal counter
        counter += 1
        sid = f"q{counter:04d}"
        sentence = f"جملة {arabic_token(counter)}"
        rows.append((sid, sentence, gold, pred))
        return sid

    for dialect, (tp, fp, fn, inc) in TABLE5.items():
        for _ in range(tp):
            add(dialect, dialect)
        for _ in range(fn):
            add(dialect, FILLER)
    fp_ids = {}
    for dialect, (tp, fp, fn, inc) in TABLE5.items():
        fp_ids[dialect] = [add(FILLER, dialect) for _ in range(fp)]
    for _ in range(OTHER_CORRECT):
        add(FILLER, FILLER)

    with open(FIXTURES / "qadi_synthetic_gold.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\tsentence\tlabel\n")
        for sid, sentence, gold, _ in rows:
            fh.write(f"{sid}\t{sentence}\t{gold}\n")
    with open(FIXTURES / "qadi_synthetic_pred.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id\tprediction\n")
        for sid, _, _, pred in rows:
            fh.write(f"{sid}\t{pred}\n")

    last_dialect = list(TABLE5)[-1]
    with open(FIXTURES / "judgments_490.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for dialect, (tp, fp, fn, inc) in TABLE5.items():
            annotator = "ann_" + dialect.lower().replace(" ", "_")
            for i, sid in enumerate(fp_ids[dialect]):
                if i < inc:
                    verdict = "valid"
                elif dialect == last_dialect and i == fp - 1:
                    verdict = "unsure"
                else:
                    verdict = "invalid"
                fh.write(
                    '{"sample_id": "%s", "annotator_id": "%s", "dialect": "%s", '
                    '"verdict": "%s", "timestamp": "%s"}\n'
                    % (sid, annotator, dialect, verdict, TIMESTAMP)
                )

    with open(FIXTURES / "annotators.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("annotator_id\tdialect\ttoken\n")
        for dialect in TABLE5:
            slug = dialect.lower().replace(" ", "_")
            fh.write(f"ann_{slug}\t{dialect}\ttok-{slug}\n")

    countries_12 = [
        "Iraq", "Jordan", "Lebanon", "Libya", "Oman", "Palestine",
        "Qatar", "Saudi Arabia", "Sudan", "Syria", "Tunisia", "Yemen",
    ]
    station = "وين المحطة؟"
    flight = "شنو رقم الرحلة؟"
    header = countries_12 + ["Morocco"]
    with open(FIXTURES / "table1_parallel.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(["sent_id"] + header) + "\n")
        fh.write("\t".join(["t1"] + [station] * 12 + [""]) + "\n")
        cells = {c: "" for c in header}
        cells.update({"Iraq": flight, "Morocco": flight, "Qatar": flight})
        fh.write("\t".join(["t2"] + [cells[c] for c in header]) + "\n")

    print(f"wrote fixtures to {FIXTURES} ({len(rows)} synthetic samples)")


if __name__ == "__main__":
    main()
